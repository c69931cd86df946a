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

//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context};
use bwsrm::bwsrm::PowerWeighting;
use bwsrm::PureStateEnsemble;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Opt,
    Pgm,
    Holevo,
    Cubic,
    Custom,
    All,
}

impl Method {
    /// The power weighting behind a named square-root measurement.
    pub fn power(self) -> Option<PowerWeighting> {
        match self {
            Method::Pgm => Some(PowerWeighting::PGM),
            Method::Holevo => Some(PowerWeighting::HOLEVO),
            Method::Cubic => Some(PowerWeighting::CUBIC),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// PGM and Holevo ratios on one grid.
    Fig1,
    /// Holevo ratio.
    Fig2a,
    /// Cubic ratio.
    Fig2b,
}

#[derive(Debug, Parser)]
#[command(name = "bwsrm", version, about = "Minimum-error discrimination of pure-state ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnsembleSource {
    /// Ensemble JSON file.
    #[arg(long, conflicts_with = "ensemble")]
    pub input: Option<PathBuf>,
    /// Inline ensemble JSON.
    #[arg(long)]
    pub ensemble: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Failure rates, certificates and bounds for an ensemble.
    Discriminate {
        #[command(flatten)]
        source: EnsembleSource,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Custom weights `w1,w2,...`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        weights: Option<Vec<f64>>,
    },
    /// The three-state ensemble on which the Holevo weighting loses to the PGM.
    Counterexample {
        /// Size of the perturbation out of the plane.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
    },
    /// Failure-ratio grids over `(p, θ)`.
    FigureData {
        #[arg(value_enum)]
        figure: Figure,
        /// Samples per axis.
        #[arg(long, default_value_t = 101)]
        resolution: usize,
    },
    /// Weighted-to-optimal ratio as the two states become orthogonal.
    AsymptoticSweep {
        /// Prior of the first state.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Ratios `c1,c2` of the weights `W_k = c_k p_k²`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "method")]
        weights: Option<Vec<f64>>,
        /// Take `c_k = p_k^(r-2)` from a power weighting instead.
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Rows; row `k` sits at `θ = π/2 - 10^-k`.
        #[arg(long, default_value_t = 8)]
        resolution: usize,
    },
    /// Haar-random comparison of the weightings against the optimum.
    RandomExperiment {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Fixed priors; uniform random on the simplex when omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        priors: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample around the three-state counterexample at this scale
        /// instead of uniformly.
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Certificate suite for an ensemble and weights.
    Verify {
        #[command(flatten)]
        source: EnsembleSource,
        /// Explicit weights `w1,w2,...`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "method")]
        weights: Option<Vec<f64>>,
        /// Named weighting: pgm, holevo or cubic.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
}

/// How a measurement's weights are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightChoice {
    Power(PowerWeighting),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Discriminate {
        ensemble: PureStateEnsemble,
        method: Method,
        weights: Option<Vec<f64>>,
    },
    Counterexample {
        delta: f64,
    },
    FigureData {
        figure: Figure,
        resolution: usize,
    },
    AsymptoticSweep {
        p: f64,
        c: [f64; 2],
        steps: usize,
    },
    RandomExperiment {
        dim: usize,
        m: usize,
        priors: Option<Vec<f64>>,
        trials: usize,
        seed: u64,
        perturb: Option<f64>,
    },
    Verify {
        ensemble: PureStateEnsemble,
        weights: WeightChoice,
    },
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn load(source: EnsembleSource) -> anyhow::Result<PureStateEnsemble> {
    let text = match (source.input, source.ensemble) {
        (Some(path), None) => std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read {}", path.display()))?,
        (None, Some(inline)) => inline,
        _ => bail!("an ensemble is required: pass --input PATH or --ensemble JSON"),
    };
    Ok(PureStateEnsemble::from_json(&text)?)
}

impl TryFrom<Cli> for RunConfig {
    type Error = anyhow::Error;

    fn try_from(cli: Cli) -> anyhow::Result<Self> {
        let command = match cli.command {
            CommandArgs::Discriminate { source, method, weights } => {
                ensure!(
                    method != Method::Custom || weights.is_some(),
                    "--method custom needs --weights"
                );
                Command::Discriminate {
                    ensemble: load(source)?,
                    method,
                    weights,
                }
            }
            CommandArgs::Counterexample { delta } => {
                ensure!(delta.is_finite() && delta >= 0.0, "--delta must be a nonnegative number");
                Command::Counterexample { delta }
            }
            CommandArgs::FigureData { figure, resolution } => {
                ensure!(resolution >= 2, "--resolution must be at least 2");
                Command::FigureData { figure, resolution }
            }
            CommandArgs::AsymptoticSweep {
                p,
                weights,
                method,
                resolution,
            } => {
                ensure!(p > 0.0 && p < 1.0, "--p must lie strictly between 0 and 1");
                ensure!((1..=15).contains(&resolution), "--resolution must lie in 1..=15");
                let c = match (weights, method) {
                    (Some(w), None) => {
                        ensure!(w.len() == 2, "--weights needs exactly two ratios c1,c2");
                        [w[0], w[1]]
                    }
                    (None, Some(m)) => {
                        let r = m
                            .power()
                            .context("--method must be pgm, holevo or cubic")?
                            .exponent();
                        [p.powf(r - 2.0), (1.0 - p).powf(r - 2.0)]
                    }
                    (None, None) => [1.0, 1.0],
                    (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
                };
                ensure!(
                    c.iter().all(|x| x.is_finite() && *x > 0.0),
                    "weight ratios must be positive"
                );
                Command::AsymptoticSweep { p, c, steps: resolution }
            }
            CommandArgs::RandomExperiment {
                dim,
                m,
                priors,
                trials,
                seed,
                perturb,
            } => {
                ensure!(dim >= 1 && m >= 1, "--dim and --m must be positive");
                ensure!(trials >= 1, "--trials must be at least 1");
                if let Some(p) = &priors {
                    ensure!(p.len() == m, "--priors needs {m} entries, got {}", p.len());
                }
                if let Some(d) = perturb {
                    ensure!(d.is_finite() && d >= 0.0, "--perturb must be a nonnegative number");
                    ensure!(dim >= 2 && m == 3, "--perturb needs --m 3 and --dim at least 2");
                }
                Command::RandomExperiment {
                    dim,
                    m,
                    priors,
                    trials,
                    seed,
                    perturb,
                }
            }
            CommandArgs::Verify {
                source,
                weights,
                method,
            } => {
                let weights = match (weights, method) {
                    (Some(w), None) => WeightChoice::Explicit(w),
                    (None, Some(m)) => {
                        WeightChoice::Power(m.power().context("--method must be pgm, holevo or cubic")?)
                    }
                    _ => bail!("verify needs --weights or --method"),
                };
                Command::Verify {
                    ensemble: load(source)?,
                    weights,
                }
            }
        };
        Ok(RunConfig {
            command,
            format: cli.format,
            out: cli.out,
        })
    }
}

impl RunConfig {
    /// Parses and validates command-line arguments.
    pub fn from_args<I, T>(args: I) -> anyhow::Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Cli::try_parse_from(args)?.try_into()
    }
}
