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

//! Pure-state ensembles, weight vectors, POVMs and exact success rates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::operator::{max_abs, Hermitian, PSD_TOL, RECON_TOL};
use crate::{Error, Result, C64, ComplexVector};

/// Deviation from unit norm (or unit prior sum) accepted as exact.
pub const EXACT_TOL: f64 = 1e-12;
/// Deviations below this are silently renormalised; larger ones are rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Unit vectors `ψ_k` with prior probabilities `p_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateEnsemble {
    dim: usize,
    states: Vec<ComplexVector>,
    priors: Vec<f64>,
}

impl PureStateEnsemble {
    pub fn new(states: Vec<ComplexVector>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid("states", "ensemble has no states"));
        }
        if states.len() != priors.len() {
            return Err(invalid(
                "priors",
                format!("{} priors for {} states", priors.len(), states.len()),
            ));
        }
        let dim = states[0].len();
        if dim == 0 {
            return Err(invalid("dim", "dimension must be positive"));
        }
        let mut normalized = Vec::with_capacity(states.len());
        for (k, s) in states.into_iter().enumerate() {
            if s.len() != dim {
                return Err(invalid(
                    format!("states[{k}]"),
                    format!("length {} differs from dimension {dim}", s.len()),
                ));
            }
            if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(invalid(format!("states[{k}]"), "non-finite amplitude"));
            }
            let norm = s.norm();
            if (norm - 1.0).abs() > RENORMALIZE_TOL {
                return Err(invalid(
                    format!("states[{k}]"),
                    format!("norm {norm} is not 1"),
                ));
            }
            normalized.push(if (norm - 1.0).abs() > EXACT_TOL {
                s.unscale(norm)
            } else {
                s
            });
        }
        for (k, &p) in priors.iter().enumerate() {
            if !(p.is_finite() && p >= 0.0) {
                return Err(invalid(format!("priors[{k}]"), format!("{p} is not a probability")));
            }
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            return Err(invalid("priors", format!("priors sum to {total}, not 1")));
        }
        let priors = if (total - 1.0).abs() > EXACT_TOL {
            priors.iter().map(|p| p / total).collect()
        } else {
            priors
        };
        Ok(Self {
            dim,
            states: normalized,
            priors,
        })
    }

    /// States given by real amplitudes.
    pub fn from_real(states: &[&[f64]], priors: &[f64]) -> Result<Self> {
        let states = states
            .iter()
            .map(|s| ComplexVector::from_iterator(s.len(), s.iter().map(|&x| C64::new(x, 0.0))))
            .collect();
        Self::new(states, priors.to_vec())
    }

    /// Equal priors `1/m`.
    pub fn equiprobable(states: Vec<ComplexVector>) -> Result<Self> {
        let m = states.len().max(1);
        Self::new(states, vec![1.0 / m as f64; m])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of states `m`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ComplexVector] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &ComplexVector {
        &self.states[k]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn prior(&self, k: usize) -> f64 {
        self.priors[k]
    }

    /// `⟨ψ_i, ψ_j⟩`, conjugate-linear in the first slot.
    pub fn overlap(&self, i: usize, j: usize) -> C64 {
        self.states[i].dotc(&self.states[j])
    }

    /// `S = Σ W_k |ψ_k⟩⟨ψ_k|`.
    pub fn weighted_operator(&self, w: &WeightVector) -> Result<Hermitian> {
        self.check_weights(w)?;
        let mut s = Hermitian::zeros(self.dim);
        for (psi, &wk) in self.states.iter().zip(w.as_slice()) {
            if wk > 0.0 {
                s = s.add(&Hermitian::projector(psi).scaled(wk));
            }
        }
        Ok(s)
    }

    /// Projector onto the span of the states with positive prior.
    pub fn span_projector(&self) -> Hermitian {
        let mut s = Hermitian::zeros(self.dim);
        for (psi, &p) in self.states.iter().zip(&self.priors) {
            if p > 0.0 {
                s = s.add(&Hermitian::projector(psi).scaled(p));
            }
        }
        s.support_projector()
    }

    /// Applies `u` to every state. `u` is expected to be unitary.
    pub fn transformed(&self, u: &crate::ComplexMatrix) -> Result<Self> {
        Self::new(self.states.iter().map(|s| u * s).collect(), self.priors.clone())
    }

    pub(crate) fn check_weights(&self, w: &WeightVector) -> Result<()> {
        if w.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "weights",
                expected: self.len(),
                found: w.len(),
            });
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EnsembleFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EnsembleFile::from(self)).expect("ensemble serialises")
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::InvalidEnsemble {
        field: field.into(),
        reason: reason.into(),
    }
}

/// On-disk ensemble format: `{"dim": n, "states": [[[re, im], ...], ...],
/// "priors": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dim: usize,
    pub states: Vec<Vec<[f64; 2]>>,
    pub priors: Vec<f64>,
}

impl TryFrom<EnsembleFile> for PureStateEnsemble {
    type Error = Error;

    fn try_from(file: EnsembleFile) -> Result<Self> {
        for (k, s) in file.states.iter().enumerate() {
            if s.len() != file.dim {
                return Err(invalid(
                    format!("states[{k}]"),
                    format!("has {} entries but dim is {}", s.len(), file.dim),
                ));
            }
        }
        let states = file
            .states
            .into_iter()
            .map(|s| ComplexVector::from_iterator(s.len(), s.into_iter().map(|[re, im]| C64::new(re, im))))
            .collect();
        PureStateEnsemble::new(states, file.priors)
    }
}

impl From<&PureStateEnsemble> for EnsembleFile {
    fn from(e: &PureStateEnsemble) -> Self {
        EnsembleFile {
            dim: e.dim,
            states: e
                .states
                .iter()
                .map(|s| s.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            priors: e.priors.clone(),
        }
    }
}

/// Nonnegative weights `W_k`, at least one positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::InvalidWeights(format!("weight {k} is {w}")));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(WeightVector(weights))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(|&w| w > 0.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param("scale", format!("{c} is not a positive factor")));
        }
        Ok(WeightVector(self.0.iter().map(|w| w * c).collect()))
    }
}

/// PSD operators summing to the projector onto a declared subspace.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<Hermitian>,
    support: Hermitian,
}

impl Povm {
    pub fn new(elements: Vec<Hermitian>, support: Hermitian) -> Result<Self> {
        let povm = Self::new_unchecked(elements, support);
        povm.validate()?;
        Ok(povm)
    }

    /// A POVM complete on the whole space.
    pub fn complete(elements: Vec<Hermitian>) -> Result<Self> {
        let dim = elements
            .first()
            .map(Hermitian::dim)
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        Self::new(elements, Hermitian::identity(dim))
    }

    pub(crate) fn new_unchecked(elements: Vec<Hermitian>, support: Hermitian) -> Self {
        Povm { elements, support }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.support.dim();
        let mut total = Hermitian::zeros(dim);
        for (k, m) in self.elements.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "POVM element",
                    expected: dim,
                    found: m.dim(),
                });
            }
            let check = m.is_psd();
            if !check.psd {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has eigenvalue {:.3e} below -{PSD_TOL:.0e}",
                    check.margin
                )));
            }
            total = total.add(m);
        }
        let gap = total.distance(&self.support);
        if gap > RECON_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to the support projector only within {gap:.3e}"
            )));
        }
        Ok(())
    }

    pub fn elements(&self) -> &[Hermitian] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &Hermitian {
        &self.elements[k]
    }

    pub fn support(&self) -> &Hermitian {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    /// Largest entrywise difference over all elements.
    pub fn distance(&self, other: &Povm) -> f64 {
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// Diagnostic `⟨ψ_k|M_k|ψ_k⟩` for every outcome.
pub fn detection_probabilities(e: &PureStateEnsemble, m: &Povm) -> Result<Vec<f64>> {
    check_povm(e, m)?;
    Ok(e.states()
        .iter()
        .zip(m.elements())
        .map(|(psi, mk)| mk.expectation(psi))
        .collect())
}

/// `Σ p_k ⟨ψ_k|M_k|ψ_k⟩`.
pub fn success_rate(e: &PureStateEnsemble, m: &Povm) -> Result<f64> {
    let det = detection_probabilities(e, m)?;
    let s: f64 = det.iter().zip(e.priors()).map(|(d, p)| d * p).sum();
    Ok(s.clamp(0.0, 1.0))
}

pub fn failure_rate(e: &PureStateEnsemble, m: &Povm) -> Result<f64> {
    success_rate(e, m).map(|s| 1.0 - s)
}

fn check_povm(e: &PureStateEnsemble, m: &Povm) -> Result<()> {
    if m.len() != e.len() {
        return Err(Error::DimensionMismatch {
            context: "POVM outcomes",
            expected: e.len(),
            found: m.len(),
        });
    }
    if m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            context: "POVM dimension",
            expected: e.dim(),
            found: m.dim(),
        });
    }
    Ok(())
}

/// `A^†A` with entries `√(W_i W_j) ⟨ψ_i, ψ_j⟩`.
pub fn weighted_gram(e: &PureStateEnsemble, w: &WeightVector) -> Result<Hermitian> {
    e.check_weights(w)?;
    let m = e.len();
    let sq: Vec<f64> = w.as_slice().iter().map(|x| x.sqrt()).collect();
    let g = crate::ComplexMatrix::from_fn(m, m, |i, j| e.overlap(i, j) * (sq[i] * sq[j]));
    Ok(Hermitian::symmetrized(g))
}

/// A Haar-distributed unit vector drawn from `rng`.
pub fn haar_random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-300 {
            return v.unscale(n);
        }
    }
}

/// `m` independent Haar-random states with the given priors,
/// deterministic in `seed`.
pub fn haar_random_ensemble(dim: usize, m: usize, priors: &[f64], seed: u64) -> Result<PureStateEnsemble> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_ensemble_with(dim, m, priors, &mut rng)
}

pub fn haar_random_ensemble_with<R: Rng + ?Sized>(
    dim: usize,
    m: usize,
    priors: &[f64],
    rng: &mut R,
) -> Result<PureStateEnsemble> {
    if dim == 0 {
        return Err(Error::param("dim", "must be at least 1"));
    }
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if priors.len() != m {
        return Err(invalid("priors", format!("{} priors for {m} states", priors.len())));
    }
    let states = (0..m).map(|_| haar_random_state(dim, rng)).collect();
    PureStateEnsemble::new(states, priors.to_vec())
}

/// Priors drawn uniformly from the probability simplex.
pub fn random_priors<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..m)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// Gram deviation `max |⟨e_i, e_j⟩ - δ_ij|`.
pub fn orthonormality_defect(vectors: &[ComplexVector]) -> f64 {
    let n = vectors.len();
    let g = crate::ComplexMatrix::from_fn(n, n, |i, j| vectors[i].dotc(&vectors[j]));
    max_abs(&(g - crate::ComplexMatrix::identity(n, n)))
}

/// Modified Gram–Schmidt. Vectors that become numerically dependent are
/// dropped.
pub fn orthonormalize(vectors: &[ComplexVector]) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut u = v.clone();
        for q in &out {
            let c = q.dotc(&u);
            u -= q * c;
        }
        let n = u.norm();
        if n > 1e-12 {
            out.push(u.unscale(n));
        }
    }
    out
}
