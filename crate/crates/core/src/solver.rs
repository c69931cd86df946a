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

//! Certified optimal measurements.
//!
//! [`iterate_optimal`] iterates the optimal-weight map
//! `W_k ← p_k² ⟨ψ_k|M_k(W)|ψ_k⟩` starting from the quadratic weighting
//! `W_k = p_k²`. The map is scale free, so its fixed points are exactly
//! the weightings with `p_k ⟨ψ_k|Λ^{-1}|ψ_k⟩ = 1` on the positive
//! weights. A fixed point is reported as converged only once the Lagrange
//! conditions certify it.
//!
//! Optima with undetected outcomes are reached only as a weight decays to
//! zero, which can be arbitrarily slow when the optimum sits on the
//! boundary of that regime. Every `prune_interval` iterations the solver
//! therefore also tries zeroing the small, still-decreasing weights and
//! accepts the result if it converges to a certified point.

use crate::binary::BinaryEnsembleParams;
use crate::bwsrm::{build_bwsrm, gram_detection_probabilities};
use crate::certificate::{lagrange_certificate, Certificate};
use crate::ensemble::{failure_rate, Povm, PureStateEnsemble, WeightVector};
use crate::operator::{Hermitian, SUPPORT_CUTOFF};
use crate::Result;

/// Increases in failure rate below this are rounding noise.
const INCREASE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    /// Stop once `max_k |ΔW_k| / max_k W_k` drops below this.
    pub tol_fix: f64,
    pub max_iter: usize,
    /// Exponent `d` of the damped update `W ← W^{1-d} W'^d`, switched on
    /// after two successive increases in failure rate. `None` never damps.
    pub damping: Option<f64>,
    /// Iterations between pruning attempts.
    pub prune_interval: usize,
    /// Weights below this fraction of the largest weight may be pruned.
    pub prune_threshold: f64,
    /// Iteration budget of one pruning attempt.
    pub prune_budget: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tol_fix: 1e-11,
            max_iter: 10_000,
            damping: None,
            prune_interval: 50,
            prune_threshold: 0.05,
            prune_budget: 2_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub povm: Povm,
    pub weights: WeightVector,
    pub failure_rate: f64,
    pub iterations: usize,
    pub certificate: Certificate,
    pub converged: bool,
    /// Failure rate of every accepted iterate.
    pub failure_history: Vec<f64>,
    /// Number of iterates whose failure rate rose above its predecessor's.
    pub failure_increases: usize,
    pub damped: bool,
    pub diagnostics: Option<String>,
}

struct Relaxation {
    weights: Vec<f64>,
    history: Vec<f64>,
    stationary: bool,
    iterations: usize,
}

struct Iterator<'a> {
    ensemble: &'a PureStateEnsemble,
    config: &'a IterationConfig,
    damped: bool,
    increases_in_row: usize,
}

impl Iterator<'_> {
    /// Next weights (before freezing) and the failure rate of `w`.
    fn step(&self, w: &[f64]) -> Result<(Vec<f64>, f64)> {
        let wv = WeightVector::new(w.to_vec())?;
        let det = gram_detection_probabilities(self.ensemble, &wv)?;
        let priors = self.ensemble.priors();
        let success: f64 = det.iter().zip(priors).map(|(d, p)| d * p).sum();
        let next = det.iter().zip(priors).map(|(d, p)| p * p * d).collect();
        Ok((next, 1.0 - success.clamp(0.0, 1.0)))
    }

    fn relax(&mut self, mut w: Vec<f64>, budget: usize) -> Result<Relaxation> {
        let mut history = Vec::new();
        for it in 0..budget {
            let (mut next, failure) = self.step(&w)?;
            if let Some(&prev) = history.last() {
                if failure > prev + INCREASE_TOL {
                    self.increases_in_row += 1;
                    if self.increases_in_row >= 2 && self.config.damping.is_some() {
                        self.damped = true;
                    }
                } else {
                    self.increases_in_row = 0;
                }
            }
            history.push(failure);
            if let (true, Some(d)) = (self.damped, self.config.damping) {
                for (n, &old) in next.iter_mut().zip(&w) {
                    if old > 0.0 && *n > 0.0 {
                        *n = old.powf(1.0 - d) * n.powf(d);
                    }
                }
            }
            let max = next.iter().copied().fold(0.0, f64::max);
            for n in next.iter_mut() {
                if *n < SUPPORT_CUTOFF * max {
                    *n = 0.0;
                }
            }
            let change = next
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                / max;
            w = next;
            if change < self.config.tol_fix {
                return Ok(Relaxation {
                    weights: w,
                    history,
                    stationary: true,
                    iterations: it + 1,
                });
            }
        }
        Ok(Relaxation {
            weights: w,
            history,
            stationary: false,
            iterations: budget,
        })
    }
}

fn certify(e: &PureStateEnsemble, w: &[f64]) -> Result<(Povm, WeightVector, Certificate)> {
    let wv = WeightVector::new(w.to_vec())?;
    let povm = build_bwsrm(e, &wv)?;
    let cert = lagrange_certificate(e, &povm)?;
    Ok((povm, wv, cert))
}

/// Fixed-point iteration of the optimal-weight map.
pub fn iterate_optimal(e: &PureStateEnsemble, config: &IterationConfig) -> Result<SolveResult> {
    let mut it = Iterator {
        ensemble: e,
        config,
        damped: false,
        increases_in_row: 0,
    };
    let mut w: Vec<f64> = e.priors().iter().map(|p| p * p).collect();
    let mut history: Vec<f64> = Vec::new();
    let mut iterations = 0usize;
    let mut diagnostics = None;

    let finish = |w: Vec<f64>,
                  history: Vec<f64>,
                  iterations: usize,
                  damped: bool,
                  diagnostics: Option<String>|
     -> Result<SolveResult> {
        let (povm, weights, certificate) = certify(e, &w)?;
        let failure_increases = history
            .windows(2)
            .filter(|p: &&[f64]| p[1] > p[0] + INCREASE_TOL)
            .count();
        Ok(SolveResult {
            failure_rate: failure_rate(e, &povm)?,
            converged: certificate.pass && diagnostics.is_none(),
            povm,
            weights,
            iterations,
            certificate,
            failure_history: history,
            failure_increases,
            damped,
            diagnostics,
        })
    };

    while iterations < config.max_iter {
        let stage_start = w.clone();
        let budget = config.prune_interval.max(1).min(config.max_iter - iterations);
        let stage = it.relax(w, budget)?;
        iterations += stage.iterations;
        history.extend(stage.history);
        w = stage.weights;

        if stage.stationary {
            let (_, _, cert) = certify(e, &w)?;
            if cert.pass {
                return finish(w, history, iterations, it.damped, None);
            }
            let max = w.iter().copied().fold(0.0, f64::max);
            let mut revived = false;
            for (wk, p) in w.iter_mut().zip(e.priors()) {
                if *wk == 0.0 && *p > 0.0 {
                    *wk = config.prune_threshold * max;
                    revived = true;
                }
            }
            if !revived {
                diagnostics = Some(format!(
                    "stationary weights fail the Lagrange certificate (worst margin {:.3e})",
                    cert.worst_margin
                ));
                break;
            }
            continue;
        }

        let max = w.iter().copied().fold(0.0, f64::max);
        let prune: Vec<usize> = (0..w.len())
            .filter(|&k| w[k] > 0.0 && w[k] < config.prune_threshold * max && w[k] < stage_start[k])
            .collect();
        if prune.is_empty() || iterations >= config.max_iter {
            continue;
        }
        let mut trial = w.clone();
        for &k in &prune {
            trial[k] = 0.0;
        }
        let budget = config.prune_budget.min(config.max_iter - iterations);
        let saved = (it.damped, it.increases_in_row);
        let attempt = it.relax(trial, budget)?;
        iterations += attempt.iterations;
        if attempt.stationary {
            let (_, _, cert) = certify(e, &attempt.weights)?;
            if cert.pass {
                history.extend(attempt.history);
                return finish(attempt.weights, history, iterations, it.damped, None);
            }
        }
        (it.damped, it.increases_in_row) = saved;
    }

    let diagnostics = diagnostics.or_else(|| {
        Some(format!(
            "no certified fixed point within {} iterations",
            config.max_iter
        ))
    });
    finish(w, history, iterations, it.damped, diagnostics)
}

/// Helstrom measurement on the explicit realisation
/// `ψ_1 = (1, 0)`, `ψ_2 = (cos θ, sin θ)`: project onto the nonnegative
/// and negative eigenspaces of `p_1 ρ_1 - p_2 ρ_2`, restricted to the span
/// of the ensemble.
pub fn solve_binary_exact(b: &BinaryEnsembleParams) -> SolveResult {
    let e = b.ensemble();
    let gamma = Hermitian::projector(e.state(0))
        .scaled(b.p())
        .sub(&Hermitian::projector(e.state(1)).scaled(b.p2()));
    let eig = gamma.eig();
    let span = e.span_projector();
    let m1 = eig.map(|_| 1.0, |l| l >= 0.0).conjugate_by(span.matrix());
    let m2 = eig.map(|_| 1.0, |l| l < 0.0).conjugate_by(span.matrix());
    let povm = Povm::new_unchecked(vec![m1, m2], span);
    let det = crate::ensemble::detection_probabilities(&e, &povm).expect("matching dimensions");
    let w: Vec<f64> = det.iter().zip(e.priors()).map(|(d, p)| p * p * d).collect();
    let weights = WeightVector::new(w).expect("some outcome is detected");
    let certificate = lagrange_certificate(&e, &povm).expect("matching dimensions");
    let failure = failure_rate(&e, &povm).expect("matching dimensions");
    SolveResult {
        converged: certificate.pass,
        povm,
        weights,
        failure_rate: failure,
        iterations: 0,
        certificate,
        failure_history: vec![failure],
        failure_increases: 0,
        damped: false,
        diagnostics: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{optimal_binary_failure, power_binary_failure};
    use crate::bwsrm::PowerWeighting;
    use crate::certificate::belavkin_certificate;
    use crate::standard;
    use crate::ComplexMatrix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn orthonormal_converges_immediately() {
        let e = standard::orthonormal(3, &[0.2, 0.3, 0.5]).unwrap();
        let r = iterate_optimal(&e, &IterationConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_abs_diff_eq!(r.failure_rate, 0.0, epsilon = 1e-14);
        for k in 0..3 {
            assert!(r.povm.element(k).distance(&Hermitian::projector(e.state(k))) < 1e-12);
        }
    }

    #[test]
    fn binary_iteration_matches_helstrom() {
        let b = BinaryEnsembleParams::new(0.3, 1.0).unwrap();
        let r = iterate_optimal(&b.ensemble(), &IterationConfig::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.failure_rate, optimal_binary_failure(&b), epsilon = 1e-9);
        assert_eq!(r.failure_increases, 0);
    }

    #[test]
    fn counterexample_suppresses_most_probable_state() {
        let e = standard::three_state_counterexample();
        let r = iterate_optimal(&e, &IterationConfig::default()).unwrap();
        assert!(r.converged, "{:?}", r.diagnostics);
        assert_eq!(format!("{:.4}", r.failure_rate), "0.4138");
        let det3 = r.povm.element(2).expectation(e.state(2)) * e.prior(2);
        assert!(det3 < 1e-9, "{det3}");
        assert!(r.povm.distance(&standard::counterexample_optimal_povm()) < 1e-8);
        assert!(belavkin_certificate(&e, &r.weights).unwrap().pass);
    }

    #[test]
    fn unconverged_run_is_reported() {
        let e = standard::three_state_counterexample();
        let config = IterationConfig {
            max_iter: 3,
            ..Default::default()
        };
        let r = iterate_optimal(&e, &config).unwrap();
        assert!(!r.converged);
        assert!(r.diagnostics.is_some());
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn one_more_iteration_is_idempotent() {
        let e = crate::ensemble::haar_random_ensemble(3, 4, &[0.1, 0.2, 0.3, 0.4], 3).unwrap();
        let r = iterate_optimal(&e, &IterationConfig::default()).unwrap();
        assert!(r.converged);
        let det = gram_detection_probabilities(&e, &r.weights).unwrap();
        let next: Vec<f64> = det.iter().zip(e.priors()).map(|(d, p)| p * p * d).collect();
        let max = r.weights.max();
        for (a, b) in next.iter().zip(r.weights.as_slice()) {
            assert!((a - b).abs() / max < 1e-10);
        }
    }

    #[test]
    fn damping_switches_on_only_when_configured() {
        let e = crate::ensemble::haar_random_ensemble(2, 4, &[0.1, 0.2, 0.3, 0.4], 12).unwrap();
        let plain = iterate_optimal(&e, &IterationConfig::default()).unwrap();
        assert!(!plain.damped);
        let damped = iterate_optimal(
            &e,
            &IterationConfig {
                damping: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(damped.converged);
        assert_abs_diff_eq!(damped.failure_rate, plain.failure_rate, epsilon = 1e-9);
    }

    #[test]
    fn exact_binary_orthogonal() {
        let b = BinaryEnsembleParams::new(0.4, FRAC_PI_2).unwrap();
        let r = solve_binary_exact(&b);
        assert!(r.converged);
        let e = b.ensemble();
        for k in 0..2 {
            assert!(r.povm.element(k).distance(&Hermitian::projector(e.state(k))) < 1e-12);
        }
        assert_abs_diff_eq!(r.failure_rate, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_binary_symmetric_about_bisector() {
        let theta = 0.8;
        let b = BinaryEnsembleParams::new(0.5, theta).unwrap();
        let r = solve_binary_exact(&b);
        // reflection across the line at angle θ/2 swaps ψ_1 and ψ_2
        let (s, c) = theta.sin_cos();
        let refl = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c.into(), s.into(), s.into(), (-c).into()],
        );
        let swapped = r.povm.element(0).conjugate_by(&refl);
        assert!(swapped.distance(r.povm.element(1)) < 1e-12);
    }

    #[test]
    fn exact_binary_failure_matches_closed_form() {
        for i in 0..=10 {
            for j in 0..=10 {
                let b = BinaryEnsembleParams::new(i as f64 / 10.0, j as f64 * FRAC_PI_2 / 10.0).unwrap();
                let r = solve_binary_exact(&b);
                assert!(r.converged, "p={} theta={}", b.p(), b.theta());
                assert_abs_diff_eq!(r.failure_rate, optimal_binary_failure(&b), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exact_binary_holevo_ratio_near_supremum() {
        let b = BinaryEnsembleParams::new(2f64.sqrt() / 2.0, 0.01).unwrap();
        let r = solve_binary_exact(&b);
        assert_abs_diff_eq!(r.failure_rate, optimal_binary_failure(&b), epsilon = 1e-12);
        let ratio = power_binary_failure(&b, PowerWeighting::HOLEVO) / r.failure_rate;
        assert!((ratio - 1.207).abs() < 1e-2, "{ratio}");
        // the supremum is approached as θ → 0
        let b = BinaryEnsembleParams::new(2f64.sqrt() / 2.0, 1e-4).unwrap();
        let r = solve_binary_exact(&b);
        let ratio = power_binary_failure(&b, PowerWeighting::HOLEVO) / r.failure_rate;
        assert!((ratio - (2f64.sqrt() + 1.0) / 2.0).abs() < 1e-3, "{ratio}");
    }
}
