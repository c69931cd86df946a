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

//! Belavkin weighted square-root measurements.
//!
//! For weights `W_k` the measurement is
//! `M_k = S^{-1/2} W_k |ψ_k⟩⟨ψ_k| S^{-1/2}` with `S = Σ W_ℓ |ψ_ℓ⟩⟨ψ_ℓ|`,
//! complete on the span of the weighted states. Each element is rank one:
//! `M_k = |e_k⟩⟨e_k|` with `e_k = √W_k S^{-1/2} ψ_k`.
//!
//! Success rates are evaluated in the `m × m` Gram picture by default:
//! `P_succ = Σ_{W_k > 0} (p_k / W_k) (⟨k|(A^†A)^{1/2}|k⟩)²`.

use crate::ensemble::{weighted_gram, Povm, PureStateEnsemble, WeightVector};
use crate::operator::{FracPower, Hermitian};
use crate::{ComplexVector, Error, Result};

/// Power weighting `W_k = p_k^r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerWeighting(f64);

impl PowerWeighting {
    /// The pretty good measurement, `r = 1`.
    pub const PGM: PowerWeighting = PowerWeighting(1.0);
    /// Holevo's quadratic weighting, `r = 2`.
    pub const HOLEVO: PowerWeighting = PowerWeighting(2.0);
    /// Cubic weighting, `r = 3`.
    pub const CUBIC: PowerWeighting = PowerWeighting(3.0);

    pub fn new(r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() {
            Ok(PowerWeighting(r))
        } else {
            Err(Error::param("r", format!("{r} is not a positive exponent")))
        }
    }

    pub fn exponent(self) -> f64 {
        self.0
    }

    pub fn weight(self, prior: f64) -> f64 {
        prior.powf(self.0)
    }

    pub fn weights(self, priors: &[f64]) -> Result<WeightVector> {
        WeightVector::new(priors.iter().map(|&p| self.weight(p)).collect())
    }

    pub fn label(self) -> String {
        match self.0 {
            1.0 => "pgm".into(),
            2.0 => "holevo".into(),
            3.0 => "cubic".into(),
            r => format!("power-{r}"),
        }
    }
}

/// The measurement vectors `e_k = √W_k S^{-1/2} ψ_k`; zero where `W_k = 0`.
pub fn bwsrm_vectors(e: &PureStateEnsemble, w: &WeightVector) -> Result<Vec<ComplexVector>> {
    let s = e.weighted_operator(w)?;
    let inv_sqrt = s.frac_power(FracPower::InvSqrt)?;
    Ok(e.states()
        .iter()
        .zip(w.as_slice())
        .map(|(psi, &wk)| {
            if wk > 0.0 {
                inv_sqrt.matrix() * psi * crate::C64::new(wk.sqrt(), 0.0)
            } else {
                ComplexVector::zeros(e.dim())
            }
        })
        .collect())
}

pub fn build_bwsrm(e: &PureStateEnsemble, w: &WeightVector) -> Result<Povm> {
    let s = e.weighted_operator(w)?;
    let support = s.support_projector();
    let elements = bwsrm_vectors(e, w)?
        .iter()
        .map(Hermitian::projector)
        .collect();
    Ok(Povm::new_unchecked(elements, support))
}

pub fn build_power_bwsrm(e: &PureStateEnsemble, r: PowerWeighting) -> Result<Povm> {
    build_bwsrm(e, &r.weights(e.priors())?)
}

/// `⟨ψ_k|M_k|ψ_k⟩ = (⟨k|(A^†A)^{1/2}|k⟩)² / W_k`, zero where `W_k = 0`.
pub fn gram_detection_probabilities(e: &PureStateEnsemble, w: &WeightVector) -> Result<Vec<f64>> {
    let root = weighted_gram(e, w)?.frac_power(FracPower::Sqrt)?;
    Ok(w.as_slice()
        .iter()
        .enumerate()
        .map(|(k, &wk)| {
            if wk > 0.0 {
                root.matrix()[(k, k)].re.powi(2) / wk
            } else {
                0.0
            }
        })
        .collect())
}

pub fn gram_success_rate(e: &PureStateEnsemble, w: &WeightVector) -> Result<f64> {
    let det = gram_detection_probabilities(e, w)?;
    let s: f64 = det.iter().zip(e.priors()).map(|(d, p)| d * p).sum();
    Ok(s.clamp(0.0, 1.0))
}

pub fn gram_failure_rate(e: &PureStateEnsemble, w: &WeightVector) -> Result<f64> {
    gram_success_rate(e, w).map(|s| 1.0 - s)
}

pub fn power_failure_rate(e: &PureStateEnsemble, r: PowerWeighting) -> Result<f64> {
    gram_failure_rate(e, &r.weights(e.priors())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{success_rate, failure_rate};
    use crate::standard;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn orthonormal_states_give_projectors() {
        let e = standard::orthonormal(3, &[0.1, 0.3, 0.6]).unwrap();
        let w = WeightVector::new(vec![5.0, 0.2, 1.0]).unwrap();
        let povm = build_bwsrm(&e, &w).unwrap();
        povm.validate().unwrap();
        for k in 0..3 {
            assert!(povm.element(k).distance(&Hermitian::projector(e.state(k))) < 1e-14);
        }
        assert_abs_diff_eq!(gram_success_rate(&e, &w).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn single_weighted_state() {
        let e = PureStateEnsemble::from_real(&[&[1.0, 0.0], &[0.6, 0.8]], &[0.5, 0.5]).unwrap();
        let w = WeightVector::new(vec![1.0, 0.0]).unwrap();
        let povm = build_bwsrm(&e, &w).unwrap();
        povm.validate().unwrap();
        let proj = Hermitian::projector(e.state(0));
        assert!(povm.element(0).distance(&proj) < 1e-14);
        assert!(povm.support().distance(&proj) < 1e-14);
        assert!(povm.element(1).distance(&Hermitian::zeros(2)) < 1e-15);
    }

    #[test]
    fn counterexample_holevo_and_pgm_rates() {
        let e = standard::three_state_counterexample();
        let holevo = build_power_bwsrm(&e, PowerWeighting::HOLEVO).unwrap();
        let pgm = build_power_bwsrm(&e, PowerWeighting::PGM).unwrap();
        let fh = failure_rate(&e, &holevo).unwrap();
        let fp = failure_rate(&e, &pgm).unwrap();
        assert_eq!(format!("{fh:.4}"), "0.4245");
        assert_eq!(format!("{fp:.4}"), "0.4224");
        assert_abs_diff_eq!(fh, power_failure_rate(&e, PowerWeighting::HOLEVO).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn equiprobable_power_weightings_coincide() {
        let e = crate::ensemble::haar_random_ensemble(3, 4, &[0.25; 4], 11).unwrap();
        let a = build_power_bwsrm(&e, PowerWeighting::PGM).unwrap();
        let b = build_power_bwsrm(&e, PowerWeighting::HOLEVO).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn two_state_half_prior_quarter_angle() {
        let e = PureStateEnsemble::from_real(
            &[&[1.0, 0.0], &[FRAC_PI_4.cos(), FRAC_PI_4.sin()]],
            &[0.5, 0.5],
        )
        .unwrap();
        let f = power_failure_rate(&e, PowerWeighting::PGM).unwrap();
        // cos²θ / (2 + 2 sinθ) with θ = π/4: 0.5 / (2 + √2)
        assert_abs_diff_eq!(f, 0.5 / (2.0 + 2f64.sqrt()), epsilon = 1e-14);
        assert_eq!(format!("{f:.4}"), "0.1464");
    }

    #[test]
    fn gram_form_matches_hilbert_space() {
        for seed in 0..20 {
            let dim = 1 + (seed as usize % 4);
            let m = 1 + (seed as usize * 7 % 5);
            let priors = vec![1.0 / m as f64; m];
            let e = crate::ensemble::haar_random_ensemble(dim, m, &priors, seed).unwrap();
            let w = WeightVector::new((0..m).map(|k| 0.2 + k as f64).collect()).unwrap();
            let direct = success_rate(&e, &build_bwsrm(&e, &w).unwrap()).unwrap();
            let gram = gram_success_rate(&e, &w).unwrap();
            assert_abs_diff_eq!(direct, gram, epsilon = 1e-10);
        }
    }

    #[test]
    fn two_state_gram_closed_form() {
        for i in 0..=20 {
            let theta = i as f64 * std::f64::consts::FRAC_PI_2 / 20.0;
            let e = PureStateEnsemble::from_real(&[&[1.0, 0.0], &[theta.cos(), theta.sin()]], &[0.5, 0.5])
                .unwrap();
            let s = gram_success_rate(&e, &WeightVector::new(vec![1.0, 1.0]).unwrap()).unwrap();
            let expected = 1.0 - theta.cos().powi(2) / (2.0 + 2.0 * theta.sin().abs());
            assert_abs_diff_eq!(s, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_weights_rejected_and_power_validated() {
        assert!(WeightVector::new(vec![0.0, 0.0, 0.0]).is_err());
        assert!(PowerWeighting::new(0.0).is_err());
        assert!(PowerWeighting::new(-1.0).is_err());
        assert_eq!(PowerWeighting::new(2.5).unwrap().label(), "power-2.5");
        let e = standard::three_state_counterexample();
        let w = WeightVector::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(build_bwsrm(&e, &w), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn outcome_is_kept_for_zero_weight() {
        let e = standard::three_state_counterexample();
        let w = WeightVector::new(vec![1.0, 1.0, 0.0]).unwrap();
        let povm = build_bwsrm(&e, &w).unwrap();
        assert_eq!(povm.len(), 3);
        assert!(povm.element(2).distance(&Hermitian::zeros(2)) < 1e-15);
        povm.validate().unwrap();
    }
}
