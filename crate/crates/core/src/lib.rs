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

//! Minimum-error discrimination of pure-state ensembles with Belavkin
//! weighted square-root measurements.
//!
//! The crate is organised bottom-up:
//!
//! * [`operator`]: dense Hermitian linear algebra (spectra, fractional
//!   powers restricted to the support, PSD tests).
//! * [`ensemble`]: pure-state ensembles, weights, POVMs and exact success
//!   rates.
//! * [`bwsrm`]: construction of weighted square-root measurements and the
//!   Gram-matrix form of their success rate.
//! * [`binary`]: closed forms for two-state ensembles, ratio landscapes,
//!   supremum searches, the asymptotic limit and the Holevo cost.
//! * [`certificate`]: optimality certificates and error-rate bounds.
//! * [`solver`]: certified optimal measurements by fixed-point iteration of
//!   the optimal-weight map.
//!
//! ```
//! use bwsrm::{bwsrm::PowerWeighting, standard, solver};
//!
//! let ensemble = standard::three_state_counterexample();
//! let pgm = bwsrm::bwsrm::power_failure_rate(&ensemble, PowerWeighting::PGM).unwrap();
//! let holevo = bwsrm::bwsrm::power_failure_rate(&ensemble, PowerWeighting::HOLEVO).unwrap();
//! let opt = solver::iterate_optimal(&ensemble, &Default::default()).unwrap();
//! assert!(holevo > pgm && pgm > opt.failure_rate);
//! ```

pub mod binary;
pub mod bwsrm;
pub mod certificate;
pub mod ensemble;
pub mod error;
pub mod operator;
pub mod report;
pub mod solver;
pub mod standard;

pub use error::{Error, Result};
pub use ensemble::{Povm, PureStateEnsemble, WeightVector};
pub use operator::{C64, ComplexMatrix, ComplexVector, Hermitian};
