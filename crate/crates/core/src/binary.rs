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

//! Two-state closed forms and related landscapes.
//!
//! A binary ensemble is described by the prior `p` of the first state and
//! the angle `θ ∈ [0, π/2]` with `cos θ = |⟨ψ_1, ψ_2⟩|`. Only that modulus
//! enters the failure rates, so explicit realisations use real vectors.

use std::f64::consts::FRAC_PI_2;

use crate::bwsrm::PowerWeighting;
use crate::ensemble::{orthonormality_defect, PureStateEnsemble, WeightVector};
use crate::{ComplexVector, Error, Result};

/// Tolerance for [`holevo_cost`]'s orthonormality precondition.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryEnsembleParams {
    p: f64,
    theta: f64,
}

impl BinaryEnsembleParams {
    pub fn new(p: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", format!("{p} is not in [0, 1]")));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::param("theta", format!("{theta} is not in [0, π/2]")));
        }
        Ok(Self { p, theta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn p2(&self) -> f64 {
        1.0 - self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `|⟨ψ_1, ψ_2⟩|`, exactly zero at `θ = π/2`.
    pub fn overlap(&self) -> f64 {
        if self.theta == FRAC_PI_2 {
            0.0
        } else {
            self.theta.cos()
        }
    }

    /// `ψ_1 = (1, 0)`, `ψ_2 = (cos θ, sin θ)`.
    pub fn ensemble(&self) -> PureStateEnsemble {
        let c = self.overlap();
        let s = self.theta.sin();
        PureStateEnsemble::from_real(&[&[1.0, 0.0], &[c, s]], &[self.p, self.p2()])
            .expect("valid binary ensemble")
    }
}

/// Helstrom's minimum failure rate `1/2 - √(1/4 - p_1 p_2 cos²θ)`,
/// evaluated in the cancellation-free form `x / (1/2 + √(1/4 - x))`.
pub fn optimal_binary_failure(b: &BinaryEnsembleParams) -> f64 {
    let x = b.p * b.p2() * b.overlap().powi(2);
    x / (0.5 + (0.25 - x).max(0.0).sqrt())
}

/// Failure rate of the BWSRM with weights `(w1, w2)`:
/// `(p w2 + (1 - p) w1) cos²θ / (w1 + w2 + 2 √(w1 w2) |sin θ|)`.
///
/// Panics if both weights are zero.
pub fn weighted_binary_failure(b: &BinaryEnsembleParams, w1: f64, w2: f64) -> f64 {
    assert!(
        w1 >= 0.0 && w2 >= 0.0 && w1 + w2 > 0.0,
        "weights ({w1}, {w2}) must be nonnegative and not both zero"
    );
    let num = (b.p * w2 + b.p2() * w1) * b.overlap().powi(2);
    num / (w1 + w2 + 2.0 * (w1 * w2).sqrt() * b.theta.sin().abs())
}

pub fn power_binary_failure(b: &BinaryEnsembleParams, r: PowerWeighting) -> f64 {
    weighted_binary_failure(b, r.weight(b.p), r.weight(b.p2()))
}

/// `P_fail^r / P_fail^opt`, `None` where the optimum is exactly zero.
pub fn failure_ratio(b: &BinaryEnsembleParams, r: PowerWeighting) -> Option<f64> {
    let opt = optimal_binary_failure(b);
    (opt > 0.0).then(|| power_binary_failure(b, r) / opt)
}

/// `n` evenly spaced samples of `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Ratio landscape on a `p × θ` grid, stored with `p` as the outer index.
#[derive(Debug, Clone)]
pub struct RatioGrid {
    pub method: PowerWeighting,
    pub p: Vec<f64>,
    pub theta: Vec<f64>,
    pub ratios: Vec<Option<f64>>,
}

impl RatioGrid {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.ratios[i * self.theta.len() + j]
    }

    /// Iterates `(p, θ, ratio)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.p.iter().enumerate().flat_map(move |(i, &p)| {
            self.theta
                .iter()
                .enumerate()
                .map(move |(j, &t)| (p, t, self.get(i, j)))
        })
    }

    /// Largest defined cell.
    pub fn max(&self) -> Option<(f64, f64, f64)> {
        self.cells()
            .filter_map(|(p, t, r)| r.map(|r| (p, t, r)))
            .max_by(|a, b| a.2.total_cmp(&b.2))
    }
}

pub fn ratio_grid(method: PowerWeighting, p_samples: &[f64], theta_samples: &[f64]) -> Result<RatioGrid> {
    let params = p_samples
        .iter()
        .flat_map(|&p| theta_samples.iter().map(move |&t| BinaryEnsembleParams::new(p, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioGrid {
        method,
        p: p_samples.to_vec(),
        theta: theta_samples.to_vec(),
        ratios: params.iter().map(|b| failure_ratio(b, method)).collect(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Samples per axis of the initial scan.
    pub grid: usize,
    /// Pattern search stops once both step sizes fall below this.
    pub step_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            step_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioMaximum {
    pub p: f64,
    pub theta: f64,
    pub ratio: f64,
}

/// Numerical supremum of `P_fail^r / P_fail^opt` over all binary ensembles:
/// dense scan, then compass search until the steps drop below
/// `step_tol`. The ratio is symmetric under `p ↦ 1 - p`; the reported
/// argmax is the representative with `p ≥ 1/2`.
pub fn maximize_ratio(method: PowerWeighting, config: &SearchConfig) -> RatioMaximum {
    let n = config.grid.max(2);
    let grid = ratio_grid(method, &linspace(0.0, 1.0, n), &linspace(0.0, FRAC_PI_2, n))
        .expect("grid within domain");
    let (mut p, mut theta, mut best) = grid.max().expect("grid has defined cells");

    let eval = |p: f64, t: f64| -> Option<f64> {
        let b = BinaryEnsembleParams::new(p.clamp(0.0, 1.0), t.clamp(0.0, FRAC_PI_2)).ok()?;
        failure_ratio(&b, method)
    };
    let mut step_p = 1.0 / (n - 1) as f64;
    let mut step_t = FRAC_PI_2 / (n - 1) as f64;
    while step_p >= config.step_tol || step_t >= config.step_tol {
        let candidates = [
            (p + step_p, theta),
            (p - step_p, theta),
            (p, theta + step_t),
            (p, theta - step_t),
        ];
        let mut moved = false;
        for (cp, ct) in candidates {
            let (cp, ct) = (cp.clamp(0.0, 1.0), ct.clamp(0.0, FRAC_PI_2));
            if let Some(r) = eval(cp, ct) {
                if r > best {
                    best = r;
                    p = cp;
                    theta = ct;
                    moved = true;
                }
            }
        }
        if !moved {
            step_p *= 0.5;
            step_t *= 0.5;
        }
    }
    if p < 0.5 {
        p = 1.0 - p;
    }
    RatioMaximum {
        p,
        theta,
        ratio: best,
    }
}

/// `lim_{θ→π/2} P_fail^W / P_fail^opt = (c_1 p_1 + c_2 p_2) / (√c_1 p_1 + √c_2 p_2)²`
/// with `c_k = W_k / p_k²`.
pub fn asymptotic_ratio_limit(p1: f64, c1: f64, c2: f64) -> Result<f64> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::param("p1", format!("{p1} is not in (0, 1)")));
    }
    for (name, c) in [("c1", c1), ("c2", c2)] {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param(name, format!("{c} is not positive")));
        }
    }
    let p2 = 1.0 - p1;
    Ok((c1 * p1 + c2 * p2) / (c1.sqrt() * p1 + c2.sqrt() * p2).powi(2))
}

/// `Σ W_k ‖ψ_k - e_k‖²` for an orthonormal set `{e_k}`.
pub fn holevo_cost(e: &PureStateEnsemble, set: &[ComplexVector], w: &WeightVector) -> Result<f64> {
    if set.len() != e.len() {
        return Err(Error::DimensionMismatch {
            context: "orthonormal set",
            expected: e.len(),
            found: set.len(),
        });
    }
    if let Some(v) = set.iter().find(|v| v.len() != e.dim()) {
        return Err(Error::DimensionMismatch {
            context: "orthonormal vector",
            expected: e.dim(),
            found: v.len(),
        });
    }
    if w.len() != e.len() {
        return Err(Error::DimensionMismatch {
            context: "weights",
            expected: e.len(),
            found: w.len(),
        });
    }
    let deviation = orthonormality_defect(set);
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(e.states()
        .iter()
        .zip(set)
        .zip(w.as_slice())
        .map(|((psi, ek), wk)| wk * (psi - ek).norm_squared())
        .sum())
}
