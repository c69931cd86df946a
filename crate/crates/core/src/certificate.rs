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

//! Optimality certificates and error-rate bounds.
//!
//! Every [`Certificate`] reduces to a worst margin. A certificate passes
//! iff its worst margin is at least `-tolerance`.

use serde::Serialize;

use crate::bwsrm::{build_bwsrm, gram_failure_rate, PowerWeighting};
use crate::ensemble::{detection_probabilities, Povm, PureStateEnsemble, WeightVector};
use crate::operator::{FracPower, Hermitian, PSD_TOL, RECON_TOL};
use crate::{Error, Result};

/// Tolerance of the Belavkin and weighted-sufficient certificates.
pub const CERT_TOL: f64 = 1e-8;
/// Slack allowed in each inequality of a [`BoundReport`].
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Belavkin,
    Lagrange,
    WeightedSufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDiagnostic {
    pub outcome: usize,
    /// `v_k`, the smallest eigenvalue, or `q_k` depending on the kind.
    pub value: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub pass: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub outcomes: Vec<OutcomeDiagnostic>,
}

impl Certificate {
    fn from_outcomes(kind: CertificateKind, tolerance: f64, outcomes: Vec<OutcomeDiagnostic>) -> Self {
        let worst_margin = outcomes
            .iter()
            .map(|o| o.margin)
            .fold(f64::INFINITY, f64::min);
        Certificate {
            kind,
            pass: worst_margin >= -tolerance,
            worst_margin,
            tolerance,
            outcomes,
        }
    }
}

/// Belavkin's condition `p_k ⟨ψ_k|Λ^{-1}|ψ_k⟩ ≤ 1`, with equality on the
/// positively weighted outcomes, for `Λ = (Σ W_ℓ |ψ_ℓ⟩⟨ψ_ℓ|)^{1/2}`.
///
/// Weights are meaningful only up to a positive factor, so the `v_k` are
/// first rescaled to have mean one over the positively weighted outcomes.
pub fn belavkin_certificate(e: &PureStateEnsemble, w: &WeightVector) -> Result<Certificate> {
    let s = e.weighted_operator(w)?;
    let span = e.span_projector();
    let covered = span.conjugate_by(s.support_projector().matrix());
    if covered.distance(&span) > RECON_TOL {
        return Err(Error::Inapplicable(format!(
            "Λ has rank {} but the ensemble spans {} dimensions",
            s.rank(),
            span.rank()
        )));
    }
    // Λ^{-1} = S^{-1/2}
    let lambda_inv = s.frac_power(FracPower::InvSqrt)?;
    let raw: Vec<f64> = e
        .states()
        .iter()
        .zip(e.priors())
        .map(|(psi, p)| p * lambda_inv.expectation(psi))
        .collect();
    let positive: Vec<f64> = raw
        .iter()
        .zip(w.as_slice())
        .filter(|(_, &wk)| wk > 0.0)
        .map(|(v, _)| *v)
        .collect();
    let mean = positive.iter().sum::<f64>() / positive.len() as f64;
    let outcomes = raw
        .iter()
        .zip(w.as_slice())
        .enumerate()
        .map(|(k, (v, &wk))| {
            let v = v / mean;
            let margin = if wk > 0.0 { -(v - 1.0).abs() } else { 1.0 - v };
            OutcomeDiagnostic { outcome: k, value: v, margin }
        })
        .collect();
    Ok(Certificate::from_outcomes(CertificateKind::Belavkin, CERT_TOL, outcomes))
}

/// `L = Σ p_k M_k |ψ_k⟩⟨ψ_k|`.
pub fn lagrange_operator(e: &PureStateEnsemble, m: &Povm) -> Result<crate::ComplexMatrix> {
    if m.len() != e.len() || m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            context: "Lagrange operator",
            expected: e.len(),
            found: m.len(),
        });
    }
    let mut l = crate::ComplexMatrix::zeros(e.dim(), e.dim());
    for ((psi, p), mk) in e.states().iter().zip(e.priors()).zip(m.elements()) {
        l += (mk.matrix() * psi) * psi.adjoint() * crate::C64::new(*p, 0.0);
    }
    Ok(l)
}

/// The necessary and sufficient conditions
/// `(L + L^†)/2 - p_k |ψ_k⟩⟨ψ_k| ≥ 0` for every `k`.
pub fn lagrange_certificate(e: &PureStateEnsemble, m: &Povm) -> Result<Certificate> {
    if m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            context: "POVM dimension",
            expected: e.dim(),
            found: m.dim(),
        });
    }
    if m.len() != e.len() {
        return Err(Error::DimensionMismatch {
            context: "POVM outcomes",
            expected: e.len(),
            found: m.len(),
        });
    }
    let gamma = Hermitian::symmetrized(lagrange_operator(e, m)?);
    let outcomes = e
        .states()
        .iter()
        .zip(e.priors())
        .enumerate()
        .map(|(k, (psi, p))| {
            let margin = gamma.sub(&Hermitian::projector(psi).scaled(*p)).is_psd().margin;
            OutcomeDiagnostic { outcome: k, value: margin, margin }
        })
        .collect();
    Ok(Certificate::from_outcomes(CertificateKind::Lagrange, PSD_TOL, outcomes))
}

/// Sufficient condition for strictly positive weights:
/// `q_k = p_k² ⟨ψ_k|M_k|ψ_k⟩ / W_k` constant.
pub fn weighted_sufficient_certificate(e: &PureStateEnsemble, w: &WeightVector) -> Result<Certificate> {
    e.check_weights(w)?;
    if !w.all_positive() {
        return Err(Error::Inapplicable(
            "the weighted sufficient condition needs every weight positive".into(),
        ));
    }
    let povm = build_bwsrm(e, w)?;
    let det = detection_probabilities(e, &povm)?;
    let q: Vec<f64> = det
        .iter()
        .zip(e.priors())
        .zip(w.as_slice())
        .map(|((d, p), wk)| p * p * d / wk)
        .collect();
    let q_min = q.iter().copied().fold(f64::INFINITY, f64::min);
    let outcomes = q
        .iter()
        .enumerate()
        .map(|(k, &qk)| OutcomeDiagnostic {
            outcome: k,
            value: qk,
            margin: if q_min > 0.0 { 1.0 - qk / q_min } else { f64::NEG_INFINITY },
        })
        .collect();
    Ok(Certificate::from_outcomes(
        CertificateKind::WeightedSufficient,
        CERT_TOL,
        outcomes,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSlack {
    pub name: &'static str,
    /// Right side minus left side; nonnegative when the inequality holds.
    pub slack: f64,
    pub holds: bool,
}

/// `P_opt ≤ P_pgm ≤ P_opt (1 + P_succ^opt) ≤ 2 P_opt` and
/// `P_pgm ≤ Σ_{i≠j} p_i |⟨ψ_i, ψ_j⟩|²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p_fail_opt: f64,
    pub p_fail_pgm: f64,
    pub barnum_knill: f64,
    pub twice_opt: f64,
    pub hayden: f64,
    pub slacks: Vec<BoundSlack>,
    pub holds: bool,
}

pub fn check_bounds(e: &PureStateEnsemble, p_fail_opt: f64, certificate: &Certificate) -> Result<BoundReport> {
    if certificate.kind != CertificateKind::Lagrange || !certificate.pass {
        return Err(Error::Uncertified);
    }
    let p_fail_pgm = gram_failure_rate(e, &PowerWeighting::PGM.weights(e.priors())?)?;
    let barnum_knill = p_fail_opt * (2.0 - p_fail_opt);
    let twice_opt = 2.0 * p_fail_opt;
    let mut hayden = 0.0;
    for i in 0..e.len() {
        for j in 0..e.len() {
            if i != j {
                hayden += e.prior(i) * e.overlap(i, j).norm_sqr();
            }
        }
    }
    let slack = |name, lhs: f64, rhs: f64| BoundSlack {
        name,
        slack: rhs - lhs,
        holds: rhs - lhs >= -BOUND_SLACK,
    };
    let slacks = vec![
        slack("opt<=pgm", p_fail_opt, p_fail_pgm),
        slack("pgm<=opt*(1+succ_opt)", p_fail_pgm, barnum_knill),
        slack("opt*(1+succ_opt)<=2*opt", barnum_knill, twice_opt),
        slack("pgm<=hayden", p_fail_pgm, hayden),
    ];
    let holds = slacks.iter().all(|s| s.holds);
    Ok(BoundReport {
        p_fail_opt,
        p_fail_pgm,
        barnum_knill,
        twice_opt,
        hayden,
        slacks,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bwsrm::build_power_bwsrm;
    use crate::standard;
    use approx::assert_abs_diff_eq;

    fn holevo(e: &PureStateEnsemble) -> WeightVector {
        PowerWeighting::HOLEVO.weights(e.priors()).unwrap()
    }

    #[test]
    fn orthonormal_states_certify() {
        let e = standard::orthonormal(3, &[0.2, 0.3, 0.5]).unwrap();
        let b = belavkin_certificate(&e, &holevo(&e)).unwrap();
        assert!(b.pass, "{b:?}");
        let povm = build_power_bwsrm(&e, PowerWeighting::HOLEVO).unwrap();
        let l = lagrange_certificate(&e, &povm).unwrap();
        assert!(l.pass && l.worst_margin >= -1e-15);
    }

    #[test]
    fn counterexample_optimum_certifies() {
        let e = standard::three_state_counterexample();
        let povm = standard::counterexample_optimal_povm();
        let l = lagrange_certificate(&e, &povm).unwrap();
        assert!(l.pass, "{l:?}");
        assert_eq!(l.outcomes.len(), 3);

        // optimal weights p_k² ⟨ψ_k|M_k|ψ_k⟩, with W_3 = 0
        let det = detection_probabilities(&e, &povm).unwrap();
        let w: Vec<f64> = det.iter().zip(e.priors()).map(|(d, p)| p * p * d).collect();
        assert_eq!(w[2], 0.0);
        let b = belavkin_certificate(&e, &WeightVector::new(w).unwrap()).unwrap();
        assert!(b.pass, "{b:?}");
    }

    #[test]
    fn counterexample_rejects_holevo_and_pgm() {
        let e = standard::three_state_counterexample();
        assert!(!belavkin_certificate(&e, &holevo(&e)).unwrap().pass);
        let pgm = build_power_bwsrm(&e, PowerWeighting::PGM).unwrap();
        assert!(!lagrange_certificate(&e, &pgm).unwrap().pass);
        let w = PowerWeighting::PGM.weights(e.priors()).unwrap();
        assert!(!weighted_sufficient_certificate(&e, &w).unwrap().pass);
    }

    #[test]
    fn belavkin_inapplicable_when_support_too_small() {
        let e = standard::orthonormal(2, &[0.5, 0.5]).unwrap();
        let w = WeightVector::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(belavkin_certificate(&e, &w), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn belavkin_is_scale_free() {
        let e = standard::symmetric_pair(0.4).unwrap();
        let w = holevo(&e);
        for c in [1e-3, 1.0, 250.0] {
            assert!(belavkin_certificate(&e, &w.scaled(c).unwrap()).unwrap().pass);
        }
    }

    #[test]
    fn symmetric_pair_weighted_sufficient() {
        let e = standard::symmetric_pair(0.3).unwrap();
        let c = weighted_sufficient_certificate(&e, &holevo(&e)).unwrap();
        assert!(c.pass);
        assert_abs_diff_eq!(c.outcomes[0].value, c.outcomes[1].value, epsilon = 1e-14);
    }

    #[test]
    fn orthonormal_weighted_sufficient() {
        let e = standard::orthonormal(3, &[0.2, 0.3, 0.5]).unwrap();
        assert!(weighted_sufficient_certificate(&e, &holevo(&e)).unwrap().pass);
        let pgm = PowerWeighting::PGM.weights(e.priors()).unwrap();
        // p_k²/W_k = p_k is not constant
        assert!(!weighted_sufficient_certificate(&e, &pgm).unwrap().pass);
        let equal = standard::orthonormal(3, &[1.0 / 3.0; 3]).unwrap();
        let pgm = PowerWeighting::PGM.weights(equal.priors()).unwrap();
        assert!(weighted_sufficient_certificate(&equal, &pgm).unwrap().pass);
        let zero = WeightVector::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            weighted_sufficient_certificate(&e, &zero),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn lagrange_dimension_mismatch() {
        let e = standard::orthonormal(3, &[0.2, 0.3, 0.5]).unwrap();
        let povm = standard::counterexample_optimal_povm();
        assert!(matches!(
            lagrange_certificate(&e, &povm),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bounds_on_orthonormal_states() {
        let e = standard::orthonormal(3, &[0.2, 0.3, 0.5]).unwrap();
        let povm = build_power_bwsrm(&e, PowerWeighting::HOLEVO).unwrap();
        let cert = lagrange_certificate(&e, &povm).unwrap();
        let r = check_bounds(&e, 0.0, &cert).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.p_fail_pgm, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.hayden, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bounds_on_counterexample() {
        let e = standard::three_state_counterexample();
        let povm = standard::counterexample_optimal_povm();
        let cert = lagrange_certificate(&e, &povm).unwrap();
        let opt = crate::ensemble::failure_rate(&e, &povm).unwrap();
        let r = check_bounds(&e, opt, &cert).unwrap();
        assert!(r.holds, "{r:?}");
        // .4138 × (1 + .5862) ≈ .6564 from the rounded rates
        assert_abs_diff_eq!(r.barnum_knill, 0.4138 * 1.5862, epsilon = 1e-4);
        assert!(r.p_fail_pgm <= r.barnum_knill);
    }

    #[test]
    fn bounds_need_certified_optimum() {
        let e = standard::three_state_counterexample();
        let pgm = build_power_bwsrm(&e, PowerWeighting::PGM).unwrap();
        let cert = lagrange_certificate(&e, &pgm).unwrap();
        assert_eq!(check_bounds(&e, 0.42, &cert), Err(Error::Uncertified));
        let w = PowerWeighting::HOLEVO.weights(e.priors()).unwrap();
        let wrong_kind = weighted_sufficient_certificate(&e, &w).unwrap();
        assert_eq!(check_bounds(&e, 0.42, &wrong_kind), Err(Error::Uncertified));
    }
    #[test]
    fn barnum_knill_tightens_for_rare_states() {
        use crate::binary::{optimal_binary_failure, power_binary_failure, BinaryEnsembleParams};
        let tightness = |p: f64, theta: f64| {
            let b = BinaryEnsembleParams::new(p, theta).unwrap();
            let opt = optimal_binary_failure(&b);
            power_binary_failure(&b, PowerWeighting::PGM) / (opt * (2.0 - opt))
        };
        // large overlap: within 1% already at p = 1e-4
        assert!(1.0 - tightness(1e-4, 0.1) < 1e-2);
        // θ = π/4 misses 1% at p = 1e-4 (about 1.4%) and closes in as p shrinks
        let mut last = tightness(1e-4, std::f64::consts::FRAC_PI_4);
        assert!(1.0 - last > 1e-2 && 1.0 - last < 1.5e-2);
        for p in [1e-5, 1e-6, 1e-8] {
            let t = tightness(p, std::f64::consts::FRAC_PI_4);
            assert!(t > last && t <= 1.0 + 1e-12, "p = {p}: {t}");
            last = t;
        }
        assert!(1.0 - last < 1e-3);

        // same picture through the matrix route
        let b = BinaryEnsembleParams::new(1e-4, 0.1).unwrap();
        let e = b.ensemble();
        let opt = crate::solver::solve_binary_exact(&b);
        let r = check_bounds(&e, opt.failure_rate, &opt.certificate).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(1.0 - r.p_fail_pgm / r.barnum_knill < 1e-2);
    }
}
