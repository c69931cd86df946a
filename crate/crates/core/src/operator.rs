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

//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream is a function of spectral projectors, so the only
//! primitive here is a Hermitian eigendecomposition. Fractional powers are
//! taken on the support of the operator: eigenvalues at or below
//! [`SUPPORT_CUTOFF`] times the largest eigenvalue are treated as exact
//! zeros and omitted.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Maximum absolute entry of `H - H^†` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-9;
/// Reconstruction and completeness tolerance.
pub const RECON_TOL: f64 = 1e-9;
/// Relative eigenvalue cutoff defining the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Exponents supported by [`Hermitian::frac_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracPower {
    Sqrt,
    InvSqrt,
}

/// Outcome of a positive-semidefiniteness test. `margin` is the smallest
/// eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `Σ f(λ_k) |φ_k⟩⟨φ_k|` over the eigenpairs selected by `keep`.
    pub fn map<F, K>(&self, mut f: F, mut keep: K) -> Hermitian
    where
        F: FnMut(f64) -> f64,
        K: FnMut(f64) -> bool,
    {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            if !keep(lambda) {
                continue;
            }
            let col = self.eigenvectors.column(k);
            let scale = C64::new(f(lambda), 0.0);
            out += (col * col.adjoint()) * scale;
        }
        Hermitian::symmetrized(out)
    }

    pub fn reconstruct(&self) -> Hermitian {
        self.map(|l| l, |_| true)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues strictly above the relative support cutoff.
    pub fn support_threshold(&self) -> f64 {
        SUPPORT_CUTOFF * self.max_eigenvalue().max(0.0)
    }
}

/// A complex square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(ComplexMatrix);

impl Hermitian {
    /// Validates square shape and Hermitian symmetry within
    /// [`HERMITIAN_TOL`], then stores the exactly symmetrised matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let asymmetry = max_abs(&(&matrix - matrix.adjoint()));
        if asymmetry > HERMITIAN_TOL || asymmetry.is_nan() {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(Self::symmetrized(matrix))
    }

    pub(crate) fn symmetrized(matrix: ComplexMatrix) -> Self {
        let adj = matrix.adjoint();
        Hermitian((matrix + adj) * C64::new(0.5, 0.0))
    }

    pub fn zeros(dim: usize) -> Self {
        Hermitian(ComplexMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Hermitian(ComplexMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = ComplexVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Hermitian(ComplexMatrix::from_diagonal(&d))
    }

    /// Row-major real symmetric input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(ComplexMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &ComplexVector) -> Self {
        Hermitian::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `⟨v|H|v⟩`, real for Hermitian `H`.
    pub fn expectation(&self, v: &ComplexVector) -> f64 {
        v.dotc(&(&self.0 * v)).re
    }

    pub fn scaled(&self, c: f64) -> Self {
        Hermitian(&self.0 * C64::new(c, 0.0))
    }

    pub fn add(&self, other: &Hermitian) -> Self {
        Hermitian(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Hermitian) -> Self {
        Hermitian(&self.0 - &other.0)
    }

    /// `A H A^†`, Hermitian for any square `A`.
    pub fn conjugate_by(&self, a: &ComplexMatrix) -> Self {
        Hermitian::symmetrized(a * &self.0 * a.adjoint())
    }

    /// Largest absolute entrywise difference.
    pub fn distance(&self, other: &Hermitian) -> f64 {
        max_abs(&(&self.0 - &other.0))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eig(&self) -> EigenDecomposition {
        let n = self.dim();
        if n == 0 {
            return EigenDecomposition {
                eigenvalues: Vec::new(),
                eigenvectors: ComplexMatrix::zeros(0, 0),
            };
        }
        let se = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
        EigenDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn is_psd(&self) -> PsdCheck {
        let margin = self.eig().min_eigenvalue();
        PsdCheck {
            psd: margin >= -PSD_TOL,
            margin,
        }
    }

    /// `H^{±1/2}` on the support of `H`.
    pub fn frac_power(&self, power: FracPower) -> Result<Hermitian> {
        let eig = self.eig();
        let min = eig.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd { eigenvalue: min });
        }
        let cutoff = eig.support_threshold();
        let keep = |l: f64| l > cutoff && l > 0.0;
        Ok(match power {
            FracPower::Sqrt => eig.map(f64::sqrt, keep),
            FracPower::InvSqrt => eig.map(|l| 1.0 / l.sqrt(), keep),
        })
    }

    /// Orthogonal projector onto the span of eigenvectors above the
    /// relative cutoff.
    pub fn support_projector(&self) -> Hermitian {
        let eig = self.eig();
        let cutoff = eig.support_threshold();
        eig.map(|_| 1.0, |l| l > cutoff && l > 0.0)
    }

    pub fn rank(&self) -> usize {
        let eig = self.eig();
        let cutoff = eig.support_threshold();
        eig.eigenvalues
            .iter()
            .filter(|&&l| l > cutoff && l > 0.0)
            .count()
    }
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
