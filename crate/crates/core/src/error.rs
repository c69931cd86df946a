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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite: eigenvalue {eigenvalue:.6e}")]
    NotPsd { eigenvalue: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid ensemble field `{field}`: {reason}")]
    InvalidEnsemble { field: String, reason: String },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("vectors are not orthonormal: max deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("certificate not applicable: {0}")]
    Inapplicable(String),

    #[error("optimal failure rate does not carry a passing Lagrange certificate")]
    Uncertified,

    #[error("malformed JSON: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
