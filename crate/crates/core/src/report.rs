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

//! Serializable discrimination reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::certificate::{BoundReport, Certificate, BOUND_SLACK, CERT_TOL};
use crate::ensemble::PureStateEnsemble;
use crate::operator::{HERMITIAN_TOL, PSD_TOL, RECON_TOL, SUPPORT_CUTOFF};
use crate::solver::SolveResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
    pub reconstruction: f64,
    pub support_cutoff: f64,
    pub certificate: f64,
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            psd: PSD_TOL,
            reconstruction: RECON_TOL,
            support_cutoff: SUPPORT_CUTOFF,
            certificate: CERT_TOL,
            bound_slack: BOUND_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub ensemble_hash: String,
    pub dim: usize,
    pub states: usize,
    pub tolerances: Tolerances,
}

/// How the optimal failure rate was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalSummary {
    pub converged: bool,
    pub iterations: usize,
    pub weights: Vec<f64>,
    pub failure_increases: usize,
    pub diagnostics: Option<String>,
}

impl From<&SolveResult> for OptimalSummary {
    fn from(r: &SolveResult) -> Self {
        Self {
            converged: r.converged,
            iterations: r.iterations,
            weights: r.weights.as_slice().to_vec(),
            failure_increases: r.failure_increases,
            diagnostics: r.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminationReport {
    /// Failure rate by method label, each in `[0, 1]`.
    pub failure_rates: BTreeMap<String, f64>,
    pub certificates: BTreeMap<String, Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal: Option<OptimalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
    pub metadata: ReportMetadata,
}

impl DiscriminationReport {
    pub fn new(e: &PureStateEnsemble) -> Self {
        Self {
            failure_rates: BTreeMap::new(),
            certificates: BTreeMap::new(),
            optimal: None,
            bounds: None,
            metadata: ReportMetadata {
                ensemble_hash: e.content_hash(),
                dim: e.dim(),
                states: e.len(),
                tolerances: Tolerances::default(),
            },
        }
    }

    /// Records a failure rate, clamped into `[0, 1]`.
    pub fn insert_rate(&mut self, label: impl Into<String>, rate: f64) {
        self.failure_rates.insert(label.into(), rate.clamp(0.0, 1.0));
    }

    pub fn insert_certificate(&mut self, label: impl Into<String>, c: Certificate) {
        self.certificates.insert(label.into(), c);
    }

    pub fn rate(&self, label: &str) -> Option<f64> {
        self.failure_rates.get(label).copied()
    }
}
