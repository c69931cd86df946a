// Copyright 2026 The bwsrm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Structured ensembles used throughout tests, the CLI and the demo.

use std::f64::consts::FRAC_PI_6;

use crate::ensemble::{Povm, PureStateEnsemble};
use crate::operator::Hermitian;
use crate::{Result, C64, ComplexVector};

/// The first `m` standard basis vectors of `C^m`.
pub fn orthonormal(m: usize, priors: &[f64]) -> Result<PureStateEnsemble> {
    let states = (0..m)
        .map(|k| {
            let mut v = ComplexVector::zeros(m);
            v[k] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    PureStateEnsemble::new(states, priors.to_vec())
}

/// Prior `p_1 = p_2 = (2 + (cos θ + sin θ) cos θ)^{-1}` of the two tilted
/// states in [`three_state_family`].
pub fn tilted_prior(theta: f64) -> f64 {
    1.0 / (2.0 + (theta.cos() + theta.sin()) * theta.cos())
}

/// `ψ_1 = (cos θ, sin θ)`, `ψ_2 = (cos θ, -sin θ)`, `ψ_3 = (1, 0)` with
/// `p_1 = p_2` and `p_3 = 1 - 2 p_1`.
pub fn three_state_family(theta: f64, p1: f64) -> Result<PureStateEnsemble> {
    let (s, c) = theta.sin_cos();
    PureStateEnsemble::from_real(&[&[c, s], &[c, -s], &[1.0, 0.0]], &[p1, p1, 1.0 - 2.0 * p1])
}

/// The three-state ensemble at `θ = π/6` in which the most probable state
/// is never detected by an optimal measurement.
pub fn three_state_counterexample() -> PureStateEnsemble {
    three_state_family(FRAC_PI_6, tilted_prior(FRAC_PI_6)).expect("valid ensemble")
}

/// Optimal measurement for [`three_state_counterexample`]:
/// `M_1 = ½[[1,1],[1,1]]`, `M_2 = ½[[1,-1],[-1,1]]`, `M_3 = 0`.
pub fn counterexample_optimal_povm() -> Povm {
    let m1 = Hermitian::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).expect("symmetric");
    let m2 = Hermitian::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]).expect("symmetric");
    Povm::complete(vec![m1, m2, Hermitian::zeros(2)]).expect("complete")
}

/// [`three_state_counterexample`] embedded in `C^3` with the tilted states
/// lifted by `delta` along the third axis, making all three linearly
/// independent.
pub fn perturbed_counterexample(delta: f64) -> Result<PureStateEnsemble> {
    let (s, c) = FRAC_PI_6.sin_cos();
    let n = (1.0 + delta * delta).sqrt();
    let p1 = tilted_prior(FRAC_PI_6);
    PureStateEnsemble::from_real(
        &[
            &[c / n, s / n, delta / n],
            &[c / n, -s / n, delta / n],
            &[1.0, 0.0, 0.0],
        ],
        &[p1, p1, 1.0 - 2.0 * p1],
    )
}

/// `(cos α, ±sin α)` with equal priors.
pub fn symmetric_pair(alpha: f64) -> Result<PureStateEnsemble> {
    let (s, c) = alpha.sin_cos();
    PureStateEnsemble::from_real(&[&[c, s], &[c, -s]], &[0.5, 0.5])
}

/// `ψ_1 = (1, 0)`, `ψ_2 = (cos θ, sin θ)` with priors `(p, 1 - p)`.
pub fn two_state(p: f64, theta: f64) -> Result<PureStateEnsemble> {
    let (s, c) = theta.sin_cos();
    PureStateEnsemble::from_real(&[&[1.0, 0.0], &[c, s]], &[p, 1.0 - p])
}
