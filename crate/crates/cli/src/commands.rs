//! Command execution.

use crate::config::{Command, RunConfig};
use crate::golden;
use crate::output::{render, BerRow, PaprRow, RequiredRow, SweepOutRow};
use crate::CliError;
use owc_core::simulator::{find_required, run_ber_curve, run_papr_ccdf, run_sweep, SearchOutcome};
use std::io::Write;

/// PAPR thresholds: 0 to 20 dB in 0.1 dB steps.
pub fn papr_thresholds() -> Vec<f64> {
    (0..=200).map(|i| i as f64 / 10.0).collect()
}

/// A finished command, not yet written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// Golden report and the first mismatch, if any.
    Report {
        text: String,
        failure: Option<String>,
    },
    /// Rendered CSV or JSON.
    Data(Vec<u8>),
}

impl Output {
    pub fn emit(&self, config: &RunConfig) -> Result<(), CliError> {
        match self {
            Output::Report { text, failure } => {
                print!("{text}");
                match failure {
                    None => {
                        println!("all golden tables match");
                        Ok(())
                    }
                    Some(f) => Err(CliError::Verification(f.clone())),
                }
            }
            Output::Data(bytes) => match &config.out {
                Some(path) => std::fs::write(path, bytes)
                    .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
                None => std::io::stdout()
                    .write_all(bytes)
                    .map_err(|e| CliError::Config(format!("cannot write output: {e}"))),
            },
        }
    }
}

pub fn run_command(config: &RunConfig) -> Result<Output, CliError> {
    match config.command {
        Command::Golden => {
            let r = golden::verify(config.tolerance, config.perturb.as_deref())
                .map_err(CliError::Config)?;
            Ok(Output::Report {
                text: r.text,
                failure: r.first_failure.map(|m| {
                    format!(
                        "table {} element {}: expected {}, computed {}",
                        m.table, m.index, m.expected, m.computed
                    )
                }),
            })
        }
        Command::Papr => {
            let thresholds = papr_thresholds();
            let mut rows = Vec::new();
            for lp in config.plans()? {
                let curve = run_papr_ccdf(&lp.plan, &thresholds)?;
                rows.extend(
                    curve
                        .thresholds
                        .iter()
                        .zip(&curve.probabilities)
                        .map(|(&t, &p)| PaprRow {
                            waveform: lp.name,
                            bias_db: lp.bias_db,
                            m: lp.plan.waveform.qam.order(),
                            threshold_db: t,
                            ccdf: p,
                        }),
                );
            }
            Ok(Output::Data(render(&rows, config.format)?))
        }
        Command::Ber => {
            let metric = config.metric();
            let mut rows = Vec::new();
            for lp in config.plans()? {
                let (points, _) = run_ber_curve(&lp.plan, metric, &config.eb_db)?;
                rows.extend(points.into_iter().map(|p| BerRow {
                    waveform: lp.name,
                    bias_db: lp.bias_db,
                    m: lp.plan.waveform.qam.order(),
                    noise: config.noise_label(),
                    metric: metric.name(),
                    eb_db: p.eb_db,
                    ber: p.record.ber(),
                    errors: p.record.bit_errors,
                    bits: p.record.bits_total,
                }));
            }
            Ok(Output::Data(render(&rows, config.format)?))
        }
        Command::Required => {
            let metric = config.metric();
            let mut rows = Vec::new();
            for lp in config.plans()? {
                let outcome = find_required(&lp.plan, config.target_ber, metric)?;
                let (ber, symbols, status) = match &outcome {
                    SearchOutcome::Converged(p) => (Some(p.ber_above), p.symbols, "converged"),
                    SearchOutcome::Unreachable { symbols, .. } => (None, *symbols, "unreachable"),
                };
                rows.push(RequiredRow {
                    waveform: lp.name,
                    bias_db: lp.bias_db,
                    m: lp.plan.waveform.qam.order(),
                    noise: config.noise_label(),
                    metric: metric.name(),
                    normalized_bit_rate: lp.plan.bits_per_sample(),
                    required_db: outcome.ratio_db(metric),
                    ber,
                    symbols,
                    status,
                });
            }
            Ok(Output::Data(render(&rows, config.format)?))
        }
        Command::Sweep => {
            let metric = config.metric();
            let plans: Vec<_> = config.plans()?.into_iter().map(|lp| lp.plan).collect();
            let result = run_sweep(&plans, config.target_ber, metric, &config.mu_db)?;
            let rows: Vec<SweepOutRow> = result
                .rows
                .iter()
                .filter(|r| config.verbose || r.selected)
                .map(|r| SweepOutRow {
                    waveform: r.waveform.name(),
                    m: r.order,
                    bias_db: r.bias_db,
                    normalized_bit_rate: r.normalized_bit_rate,
                    required_db: r.required_db,
                    metric: metric.name(),
                    selected: r.selected,
                    symbols: r.symbols,
                })
                .collect();
            Ok(Output::Data(render(&rows, config.format)?))
        }
    }
}
