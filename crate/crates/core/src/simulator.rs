//! Monte Carlo engine: BER points, required-ratio search, PAPR CCDF, sweeps.
//!
//! Symbol `s` draws its bits from stream `2s` and its channel noise from
//! stream `2s+1` of the master seed. Per-symbol results are computed in
//! parallel and folded in symbol order, so every result is independent of
//! scheduling.

use crate::channel::{apply_channel, NoiseConfig, RngSeed};
use crate::error::{Error, Result};
use crate::metrics::{
    bits_per_sample, ccdf, count_bit_errors, dc_bias_level_db, eb_ratio, papr_db, BerRecord,
    CcdfCurve, EbMode, PowerStats,
};
use crate::waveforms::{WaveformConfig, WaveformKind};
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Symbols used to calibrate the drive level and the mixed-mode `σ²`.
pub const CALIBRATION_SYMBOLS: usize = 50;

const CALIBRATION_STREAM: u64 = 1 << 63;
const MAX_BRACKET_STEPS: usize = 60;
const INITIAL_NOISE_VAR: f64 = 1e-4;
const BISECTION_WIDTH_DB: f64 = 0.1;
/// Allowed drop in error count, in binomial standard deviations, before a
/// search is declared non-monotone.
const MONOTONICITY_SIGMAS: f64 = 4.0;

/// Which noise terms are active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NoiseMode {
    DependentOnly {
        xi2: f64,
    },
    IndependentOnly {
        sigma2: f64,
    },
    /// `σ²` pinned so that `E(X²)/σ²` equals `snr_db`.
    Mixed {
        xi2: f64,
        snr_db: f64,
    },
}

/// Transmit amplitude scaling applied before the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    /// Scale frames so that `E(X²) = 1` on the calibration set.
    #[default]
    UnitPower,
    /// Transmit the unnormalized integer-grid frames.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub waveform: WaveformConfig,
    pub noise_mode: NoiseMode,
    pub num_symbols: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub drive: Drive,
}

impl SimPlan {
    pub fn new(
        waveform: WaveformConfig,
        noise_mode: NoiseMode,
        num_symbols: usize,
        master_seed: u64,
    ) -> Result<SimPlan> {
        if num_symbols == 0 {
            return Err(Error::InvalidParameter("num_symbols must be >= 1".into()));
        }
        Ok(SimPlan {
            waveform,
            noise_mode,
            num_symbols,
            master_seed,
            drive: Drive::UnitPower,
        })
    }

    pub fn with_waveform(&self, waveform: WaveformConfig) -> SimPlan {
        SimPlan { waveform, ..*self }
    }

    /// Amplitude gain applied to every transmitted frame.
    pub fn drive_gain(&self) -> Result<f64> {
        match self.drive {
            Drive::Raw => Ok(1.0),
            Drive::UnitPower => {
                let raw = self.calibration_power(1.0)?;
                if raw.mean_sq > 0.0 {
                    Ok(1.0 / raw.mean_sq.sqrt())
                } else {
                    Ok(1.0)
                }
            }
        }
    }

    fn calibration_power(&self, gain: f64) -> Result<PowerStats> {
        let frames: Vec<PowerStats> = (0..CALIBRATION_SYMBOLS as u64)
            .into_par_iter()
            .map(|s| {
                let bits = random_bits(
                    RngSeed::new(self.master_seed, CALIBRATION_STREAM | s),
                    self.waveform.bits_per_frame(),
                );
                let tx = self.waveform.modulate(&bits)?;
                let scaled: Vec<f64> = tx.samples().iter().map(|v| v * gain).collect();
                Ok(PowerStats::from_samples(&scaled))
            })
            .collect::<Result<_>>()?;
        Ok(frames
            .iter()
            .fold(PowerStats::default(), |acc, s| acc.merge(s)))
    }

    /// `σ²` for mixed mode, from the calibration `E(X²)` at the drive level.
    pub fn mixed_sigma2(&self, snr_db: f64) -> Result<f64> {
        let power = self.calibration_power(self.drive_gain()?)?;
        Ok(power.mean_sq / 10f64.powf(snr_db / 10.0))
    }

    /// Channel variances implied by the noise mode.
    pub fn noise(&self) -> Result<NoiseConfig> {
        match self.noise_mode {
            NoiseMode::DependentOnly { xi2 } => NoiseConfig::new(xi2, 0.0),
            NoiseMode::IndependentOnly { sigma2 } => NoiseConfig::new(0.0, sigma2),
            NoiseMode::Mixed { xi2, snr_db } => NoiseConfig::new(xi2, self.mixed_sigma2(snr_db)?),
        }
    }

    pub fn bits_per_sample(&self) -> f64 {
        bits_per_sample(&self.waveform.kind, self.waveform.qam.order())
    }
}

fn random_bits(seed: RngSeed, count: usize) -> Vec<bool> {
    let mut rng = seed.rng();
    let mut bits = Vec::with_capacity(count);
    while bits.len() < count {
        let word = rng.next_u64();
        let take = (count - bits.len()).min(64);
        bits.extend((0..take).map(|i| (word >> i) & 1 == 1));
    }
    bits
}

/// Transmitted frames of one plan, reused across noise levels.
struct Prepared {
    plan: SimPlan,
    gain: f64,
    frames: Vec<(Vec<bool>, Vec<f64>)>,
    power: PowerStats,
}

impl Prepared {
    fn new(plan: &SimPlan, num_symbols: usize) -> Result<Prepared> {
        let gain = plan.drive_gain()?;
        let frames: Vec<(Vec<bool>, Vec<f64>)> = (0..num_symbols as u64)
            .into_par_iter()
            .map(|s| {
                let bits = random_bits(
                    RngSeed::new(plan.master_seed, 2 * s),
                    plan.waveform.bits_per_frame(),
                );
                let tx = plan.waveform.modulate(&bits)?;
                let scaled = tx.into_samples().into_iter().map(|v| v * gain).collect();
                Ok((bits, scaled))
            })
            .collect::<Result<_>>()?;
        let power = frames.iter().fold(PowerStats::default(), |acc, (_, tx)| {
            acc.merge(&PowerStats::from_samples(tx))
        });
        Ok(Prepared {
            plan: *plan,
            gain,
            frames,
            power,
        })
    }

    fn ber(&self, noise: NoiseConfig) -> Result<BerRecord> {
        let records: Vec<BerRecord> = self
            .frames
            .par_iter()
            .enumerate()
            .map(|(s, (bits, tx))| {
                let rx = apply_channel(
                    tx,
                    noise,
                    RngSeed::new(self.plan.master_seed, 2 * s as u64 + 1),
                )?;
                let rx: Vec<f64> = rx.into_iter().map(|v| v / self.gain).collect();
                let out = self.plan.waveform.demodulate(&rx)?;
                count_bit_errors(bits, &out.bits)
            })
            .collect::<Result<_>>()?;
        Ok(records
            .iter()
            .fold(BerRecord::default(), |acc, r| acc.merge(r)))
    }
}

/// Runs `plan.num_symbols` frames through the channel at one noise setting.
pub fn run_ber_point(plan: &SimPlan, noise: NoiseConfig) -> Result<(BerRecord, PowerStats)> {
    let prepared = Prepared::new(plan, plan.num_symbols)?;
    Ok((prepared.ber(noise)?, prepared.power))
}

/// Power-per-bit ratio reported by a required-ratio search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ElecXi,
    OptXi,
    ElecSigma,
    OptSigma,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::ElecXi,
        Metric::OptXi,
        Metric::ElecSigma,
        Metric::OptSigma,
    ];

    pub fn eb_mode(&self) -> EbMode {
        match self {
            Metric::ElecXi | Metric::ElecSigma => EbMode::Elec,
            Metric::OptXi | Metric::OptSigma => EbMode::Opt,
        }
    }

    pub fn is_dependent(&self) -> bool {
        matches!(self, Metric::ElecXi | Metric::OptXi)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::ElecXi => "elec_xi",
            Metric::OptXi => "opt_xi",
            Metric::ElecSigma => "elec_sigma",
            Metric::OptSigma => "opt_sigma",
        }
    }
}

/// Crossing found by [`find_required`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RequiredPoint {
    /// Searched variance at the interpolated crossing.
    pub noise_var: f64,
    pub power: PowerStats,
    pub bits_per_sample: f64,
    /// Measured BER at the bracket ends.
    pub ber_below: f64,
    pub ber_above: f64,
    pub symbols: usize,
}

impl RequiredPoint {
    pub fn ratio_db(&self, metric: Metric) -> f64 {
        eb_ratio(
            &self.power,
            self.noise_var,
            self.bits_per_sample,
            metric.eb_mode(),
        )
        .expect("converged search has positive variance and rate")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Converged(RequiredPoint),
    Unreachable {
        reason: String,
        /// BER at the smallest searched variance.
        lowest_ber: f64,
        symbols: usize,
    },
}

impl SearchOutcome {
    pub fn ratio_db(&self, metric: Metric) -> Option<f64> {
        match self {
            SearchOutcome::Converged(p) => Some(p.ratio_db(metric)),
            SearchOutcome::Unreachable { .. } => None,
        }
    }

    pub fn point(&self) -> Option<&RequiredPoint> {
        match self {
            SearchOutcome::Converged(p) => Some(p),
            SearchOutcome::Unreachable { .. } => None,
        }
    }
}

/// The variance a search or curve varies, with the other one held fixed.
struct NoiseAxis {
    dependent: bool,
    fixed_sigma2: f64,
}

impl NoiseAxis {
    fn new(plan: &SimPlan, metric: Metric) -> Result<NoiseAxis> {
        let fixed_sigma2 = match (plan.noise_mode, metric.is_dependent()) {
            (NoiseMode::DependentOnly { .. }, true)
            | (NoiseMode::IndependentOnly { .. }, false) => 0.0,
            (NoiseMode::Mixed { snr_db, .. }, true) => plan.mixed_sigma2(snr_db)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "metric {} does not match noise mode {:?}",
                    metric.name(),
                    plan.noise_mode
                )))
            }
        };
        Ok(NoiseAxis {
            dependent: metric.is_dependent(),
            fixed_sigma2,
        })
    }

    fn at(&self, v: f64) -> Result<NoiseConfig> {
        if self.dependent {
            NoiseConfig::new(v, self.fixed_sigma2)
        } else {
            NoiseConfig::new(0.0, v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerCurvePoint {
    pub eb_db: f64,
    pub noise_var: f64,
    pub record: BerRecord,
}

/// BER at each requested power-per-bit ratio. The varied noise variance is
/// derived from the measured transmit power.
pub fn run_ber_curve(
    plan: &SimPlan,
    metric: Metric,
    eb_db: &[f64],
) -> Result<(Vec<BerCurvePoint>, PowerStats)> {
    let axis = NoiseAxis::new(plan, metric)?;
    let prepared = Prepared::new(plan, plan.num_symbols)?;
    let power = match metric.eb_mode() {
        EbMode::Elec => prepared.power.mean_sq,
        EbMode::Opt => prepared.power.mean_abs,
    };
    let b_s = plan.bits_per_sample();
    let points = eb_db
        .iter()
        .map(|&eb| {
            let noise_var = power / (b_s * 10f64.powf(eb / 10.0));
            Ok(BerCurvePoint {
                eb_db: eb,
                noise_var,
                record: prepared.ber(axis.at(noise_var)?)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((points, prepared.power))
}

/// Symbols needed so a search point carries at least `100/target_ber` bits.
pub fn symbols_for_target(plan: &SimPlan, target_ber: f64) -> usize {
    let min_bits = (100.0 / target_ber).ceil() as usize;
    let per_frame = plan.waveform.bits_per_frame();
    plan.num_symbols.max(min_bits.div_ceil(per_frame))
}

/// Bisects the searched noise variance until the BER crosses `target_ber`.
pub fn find_required(plan: &SimPlan, target_ber: f64, metric: Metric) -> Result<SearchOutcome> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "target BER must lie in (0, 0.5), got {target_ber}"
        )));
    }
    let axis = NoiseAxis::new(plan, metric)?;

    let symbols = symbols_for_target(plan, target_ber);
    let prepared = Prepared::new(plan, symbols)?;
    let mut history: Vec<(f64, BerRecord)> = Vec::new();
    let mut eval = |v: f64| -> Result<f64> {
        let r = prepared.ber(axis.at(v)?)?;
        history.push((v, r));
        Ok(r.ber())
    };

    let floor = eval(0.0)?;
    if floor > target_ber {
        return Ok(SearchOutcome::Unreachable {
            reason: format!("BER {floor:.3e} exceeds the target with the searched noise removed"),
            lowest_ber: floor,
            symbols,
        });
    }

    let mut v = INITIAL_NOISE_VAR;
    let mut b = eval(v)?;
    let (mut lo, mut hi, mut b_lo, mut b_hi);
    if b > target_ber {
        (hi, b_hi) = (v, b);
        let mut steps = 0;
        loop {
            v /= 2.0;
            b = eval(v)?;
            if b <= target_ber {
                (lo, b_lo) = (v, b);
                break;
            }
            (hi, b_hi) = (v, b);
            steps += 1;
            if steps == MAX_BRACKET_STEPS {
                return Ok(SearchOutcome::Unreachable {
                    reason: format!("BER stays above the target down to noise variance {v:.3e}"),
                    lowest_ber: b,
                    symbols,
                });
            }
        }
    } else {
        (lo, b_lo) = (v, b);
        let mut steps = 0;
        loop {
            v *= 2.0;
            b = eval(v)?;
            if b > target_ber {
                (hi, b_hi) = (v, b);
                break;
            }
            (lo, b_lo) = (v, b);
            steps += 1;
            if steps == MAX_BRACKET_STEPS {
                return Ok(SearchOutcome::Unreachable {
                    reason: format!("BER stays below the target up to noise variance {v:.3e}"),
                    lowest_ber: floor,
                    symbols,
                });
            }
        }
    }

    while 10.0 * (hi / lo).log10() > BISECTION_WIDTH_DB {
        let mid = (lo * hi).sqrt();
        let b = eval(mid)?;
        if b > target_ber {
            (hi, b_hi) = (mid, b);
        } else {
            (lo, b_lo) = (mid, b);
        }
    }

    if let Some(diag) = monotonicity_violation(&history) {
        return Ok(SearchOutcome::Unreachable {
            reason: diag,
            lowest_ber: floor,
            symbols,
        });
    }

    let noise_var = if b_lo > 0.0 {
        let t = (target_ber.ln() - b_lo.ln()) / (b_hi.ln() - b_lo.ln());
        (lo.ln() + t * (hi.ln() - lo.ln())).exp()
    } else {
        (lo * hi).sqrt()
    };
    Ok(SearchOutcome::Converged(RequiredPoint {
        noise_var,
        power: prepared.power,
        bits_per_sample: plan.bits_per_sample(),
        ber_below: b_lo,
        ber_above: b_hi,
        symbols,
    }))
}

fn monotonicity_violation(history: &[(f64, BerRecord)]) -> Option<String> {
    let mut sorted = history.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<(f64, u64)> = None;
    for &(v, r) in &sorted {
        if let Some((bv, be)) = best {
            let slack = MONOTONICITY_SIGMAS * (be as f64).sqrt() + 1.0;
            if (be as f64) - (r.bit_errors as f64) > slack {
                return Some(format!(
                    "non-monotone BER: {be} errors at noise {bv:.4e} but {} at {v:.4e}",
                    r.bit_errors
                ));
            }
        }
        if best.is_none_or(|(_, be)| r.bit_errors > be) {
            best = Some((v, r.bit_errors));
        }
    }
    None
}

/// Required ratio in dB, `None` when the target is unreachable.
pub fn find_required_ratio(plan: &SimPlan, target_ber: f64, metric: Metric) -> Result<Option<f64>> {
    Ok(find_required(plan, target_ber, metric)?.ratio_db(metric))
}

/// PAPR of each of `plan.num_symbols` transmitted frames.
pub fn papr_samples(plan: &SimPlan) -> Result<Vec<f64>> {
    (0..plan.num_symbols as u64)
        .into_par_iter()
        .map(|s| {
            let bits = random_bits(
                RngSeed::new(plan.master_seed, 2 * s),
                plan.waveform.bits_per_frame(),
            );
            papr_db(plan.waveform.modulate(&bits)?.samples())
        })
        .collect()
}

pub fn run_papr_ccdf(plan: &SimPlan, thresholds: &[f64]) -> Result<CcdfCurve> {
    Ok(ccdf(&papr_samples(plan)?, thresholds))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub waveform: WaveformKind,
    /// DC bias level for DCO rows.
    pub bias_db: Option<f64>,
    pub order: usize,
    pub normalized_bit_rate: f64,
    pub metric: Metric,
    pub required_db: Option<f64>,
    /// BER at the upper end of the final bracket.
    pub ber: Option<f64>,
    pub symbols: usize,
    /// The optimal bias for its DCO group, or any non-DCO row.
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn selected(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.selected)
    }
}

/// Required ratio for every plan. DCO plans are evaluated at every level of
/// `dco_bias_grid` and the lowest converged level is marked selected.
pub fn run_sweep(
    plans: &[SimPlan],
    target_ber: f64,
    metric: Metric,
    dco_bias_grid: &[f64],
) -> Result<SweepResult> {
    let mut rows = Vec::new();
    for plan in plans {
        let row = |p: &SimPlan, bias_db: Option<f64>| -> Result<SweepRow> {
            let outcome = find_required(p, target_ber, metric)?;
            let (ber, symbols) = match &outcome {
                SearchOutcome::Converged(pt) => (Some(pt.ber_above), pt.symbols),
                SearchOutcome::Unreachable { symbols, .. } => (None, *symbols),
            };
            Ok(SweepRow {
                waveform: p.waveform.kind,
                bias_db,
                order: p.waveform.qam.order(),
                normalized_bit_rate: p.bits_per_sample(),
                metric,
                required_db: outcome.ratio_db(metric),
                ber,
                symbols,
                selected: bias_db.is_none(),
            })
        };
        match plan.waveform.kind {
            WaveformKind::Dco { mu } => {
                let grid: Vec<f64> = if dco_bias_grid.is_empty() {
                    vec![dc_bias_level_db(mu)]
                } else {
                    dco_bias_grid.to_vec()
                };
                let start = rows.len();
                for level in grid {
                    let cfg = WaveformConfig {
                        kind: WaveformKind::dco_level_db(level),
                        ..plan.waveform
                    };
                    rows.push(row(&plan.with_waveform(cfg), Some(level))?);
                }
                let best = rows[start..]
                    .iter()
                    .enumerate()
                    .filter_map(|(i, r)| r.required_db.map(|d| (i, d)))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                if let Some((i, _)) = best {
                    rows[start + i].selected = true;
                }
            }
            _ => rows.push(row(plan, None)?),
        }
    }
    Ok(SweepResult { rows })
}
