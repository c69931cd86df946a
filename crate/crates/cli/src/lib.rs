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

//! Command-line harness: argument handling, subcommands and rendering.

pub mod commands;
pub mod config;
pub mod output;

use anyhow::Result;
use serde::Serialize;

use commands::Certified;
use config::{Command, Format, RunConfig};
use output::{format_number, to_json, CsvTable};

/// Exit status for a run that completed but could not certify a result.
pub const EXIT_UNCERTIFIED: i32 = 2;
/// Exit status for invalid input.
pub const EXIT_INVALID: i32 = 1;

/// Rendered output and whether every optimal claim in it is certified.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub certified: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.certified {
            0
        } else {
            EXIT_UNCERTIFIED
        }
    }
}

fn num(x: f64) -> String {
    format_number(Some(x))
}

fn csv_discriminate(r: &bwsrm::report::DiscriminationReport) -> Result<String> {
    let mut t = CsvTable::new(&["method", "failure_rate", "certificate_pass", "worst_margin"])?;
    for (label, rate) in &r.failure_rates {
        let cert = r.certificates.get(label);
        t.row([
            label.clone(),
            num(*rate),
            cert.map_or(String::new(), |c| c.pass.to_string()),
            format_number(cert.map(|c| c.worst_margin)),
        ])?;
    }
    t.finish()
}

fn csv_counterexample(r: &commands::CounterexampleReport) -> Result<String> {
    let mut t = CsvTable::new(&["quantity", "value"])?;
    let stated = &r.report.certificates["stated-optimum"];
    let mut rows: Vec<(String, String)> = vec![("theta".into(), num(r.theta)), ("p1".into(), num(r.p1)), ("p3".into(), num(r.p3))];
    for (label, rate) in &r.report.failure_rates {
        rows.push((format!("failure_{label}"), num(*rate)));
    }
    rows.extend([
        ("stated_optimum_failure".into(), num(r.stated_optimum_failure)),
        ("stated_optimum_certified".into(), stated.pass.to_string()),
        ("stated_optimum_worst_margin".into(), num(stated.worst_margin)),
        ("most_probable_never_detected".into(), r.most_probable_never_detected.to_string()),
        ("holevo_worse_than_pgm".into(), r.holevo_worse_than_pgm.to_string()),
        ("perturbed_delta".into(), num(r.perturbed.delta)),
        ("perturbed_failure_pgm".into(), num(r.perturbed.pgm)),
        ("perturbed_failure_holevo".into(), num(r.perturbed.holevo)),
        ("perturbed_failure_opt".into(), num(r.perturbed.opt)),
        ("perturbed_holevo_worse_than_pgm".into(), r.perturbed.holevo_worse_than_pgm.to_string()),
    ]);
    for (k, v) in rows {
        t.row([k, v])?;
    }
    t.finish()
}

fn csv_figure(f: &commands::FigureData) -> Result<String> {
    let mut header = vec!["p", "theta"];
    header.extend(f.columns.iter().map(String::as_str));
    let mut t = CsvTable::new(&header)?;
    for cell in &f.cells {
        let mut row = vec![num(cell.p), num(cell.theta)];
        row.extend(f.columns.iter().map(|c| format_number(cell.ratios[c])));
        t.row(row)?;
    }
    t.finish()
}

fn csv_sweep(s: &commands::AsymptoticSweep) -> Result<String> {
    let mut t = CsvTable::new(&["k", "theta", "ratio", "limit", "abs_error"])?;
    for r in &s.rows {
        t.row([r.k.to_string(), num(r.theta), num(r.ratio), num(r.limit), num(r.abs_error)])?;
    }
    t.finish()
}

fn csv_experiment(x: &commands::RandomExperiment) -> Result<String> {
    let mut t = CsvTable::new(&["trial", "pgm", "holevo", "cubic", "opt", "opt_converged"])?;
    for r in &x.trials {
        t.row([
            r.trial.to_string(),
            num(r.pgm),
            num(r.holevo),
            num(r.cubic),
            num(r.opt),
            r.opt_converged.to_string(),
        ])?;
    }
    t.finish()
}

fn csv_verify(v: &commands::VerifyReport) -> Result<String> {
    let mut t = CsvTable::new(&["certificate", "applicable", "pass", "worst_margin"])?;
    for (name, entry) in &v.certificates {
        let c = entry.certificate();
        t.row([
            name.clone(),
            c.is_some().to_string(),
            c.map_or(String::new(), |c| c.pass.to_string()),
            format_number(c.map(|c| c.worst_margin)),
        ])?;
    }
    t.finish()
}

fn render<T: Serialize + Certified>(value: &T, format: Format, csv: impl Fn(&T) -> Result<String>) -> Result<Outcome> {
    let text = match format {
        Format::Json => to_json(value)?,
        Format::Csv => csv(value)?,
    };
    Ok(Outcome {
        text,
        certified: value.certified(),
    })
}

/// Runs a validated configuration and renders its output.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let f = config.format;
    match &config.command {
        Command::Discriminate { ensemble, method, weights } => {
            render(&commands::cmd_discriminate(ensemble, *method, weights.as_deref())?, f, csv_discriminate)
        }
        Command::Counterexample { delta } => render(&commands::cmd_counterexample(*delta)?, f, csv_counterexample),
        Command::FigureData { figure, resolution } => {
            render(&commands::cmd_figure_data(*figure, *resolution)?, f, csv_figure)
        }
        Command::AsymptoticSweep { p, c, steps } => {
            render(&commands::cmd_asymptotic_sweep(*p, *c, *steps)?, f, csv_sweep)
        }
        Command::RandomExperiment {
            dim,
            m,
            priors,
            trials,
            seed,
            perturb,
        } => render(
            &commands::cmd_random_experiment(*dim, *m, priors.as_deref(), *trials, *seed, *perturb)?,
            f,
            csv_experiment,
        ),
        Command::Verify { ensemble, weights } => render(&commands::cmd_verify(ensemble, weights)?, f, csv_verify),
    }
}
