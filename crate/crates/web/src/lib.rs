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

//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export wraps a plain Rust function of the same name with an
//! `_impl` suffix; those carry the logic and are tested natively.

use bwsrm::binary::{failure_ratio, linspace, optimal_binary_failure, power_binary_failure, BinaryEnsembleParams};
use bwsrm::bwsrm::{power_failure_rate, PowerWeighting};
use bwsrm::solver::{iterate_optimal, IterationConfig};
use bwsrm::standard;
use wasm_bindgen::prelude::*;

/// Largest grid side accepted by [`ratio_landscape`].
pub const MAX_RESOLUTION: usize = 1024;

pub fn binary_rates_impl(p: f64, theta: f64) -> Result<Vec<f64>, String> {
    let b = BinaryEnsembleParams::new(p, theta).map_err(|e| e.to_string())?;
    let mut rates = vec![optimal_binary_failure(&b)];
    for r in [PowerWeighting::PGM, PowerWeighting::HOLEVO, PowerWeighting::CUBIC] {
        rates.push(power_binary_failure(&b, r));
    }
    Ok(rates)
}

/// `[opt, pgm, holevo, cubic]` failure rates of the two-state ensemble.
#[wasm_bindgen]
pub fn binary_rates(p: f64, theta: f64) -> Result<Vec<f64>, JsError> {
    binary_rates_impl(p, theta).map_err(|e| JsError::new(&e))
}

pub fn ratio_landscape_impl(r: f64, resolution: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must lie in 2..={MAX_RESOLUTION}"));
    }
    let method = PowerWeighting::new(r).map_err(|e| e.to_string())?;
    let ps = linspace(0.0, 1.0, resolution);
    let thetas = linspace(0.0, std::f64::consts::FRAC_PI_2, resolution);
    let mut out = Vec::with_capacity(resolution * resolution);
    for &p in &ps {
        for &theta in &thetas {
            let b = BinaryEnsembleParams::new(p, theta).map_err(|e| e.to_string())?;
            out.push(failure_ratio(&b, method).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

/// Failure ratio of the power weighting `W = p^r` to the optimum on a
/// `resolution²` grid, `p` varying slowest; NaN where undefined.
#[wasm_bindgen]
pub fn ratio_landscape(r: f64, resolution: usize) -> Result<Vec<f64>, JsError> {
    ratio_landscape_impl(r, resolution).map_err(|e| JsError::new(&e))
}

pub fn three_state_impl(theta: f64, p1: f64) -> Result<Vec<f64>, String> {
    let e = standard::three_state_family(theta, p1).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(5);
    for r in [PowerWeighting::PGM, PowerWeighting::HOLEVO, PowerWeighting::CUBIC] {
        out.push(power_failure_rate(&e, r).map_err(|e| e.to_string())?);
    }
    let opt = iterate_optimal(&e, &IterationConfig::default()).map_err(|e| e.to_string())?;
    out.push(opt.failure_rate);
    out.push(if opt.converged { 1.0 } else { 0.0 });
    Ok(out)
}

/// `[pgm, holevo, cubic, opt, certified]` for `ψ_{1,2} = (cos θ, ±sin θ)`,
/// `ψ_3 = (1, 0)` with priors `(p1, p1, 1 - 2 p1)`; `certified` is 1 when
/// the optimum passed its certificate.
#[wasm_bindgen]
pub fn three_state(theta: f64, p1: f64) -> Result<Vec<f64>, JsError> {
    three_state_impl(theta, p1).map_err(|e| JsError::new(&e))
}

/// Prior at which the three-state family has the undetected optimum.
#[wasm_bindgen]
pub fn tilted_prior(theta: f64) -> f64 {
    standard::tilted_prior(theta)
}
