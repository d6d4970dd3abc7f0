//! PAPR, power statistics, power-per-bit ratios, bit errors and complexity.

use crate::error::{Error, Result};
use crate::waveforms::WaveformKind;
use serde::{Deserialize, Serialize};

/// Peak-to-average power ratio of one frame in dB.
pub fn papr_db(frame: &[f64]) -> Result<f64> {
    let mut peak = 0.0f64;
    let mut sum = 0.0;
    for &v in frame {
        let p = v * v;
        peak = peak.max(p);
        sum += p;
    }
    if sum <= 0.0 {
        return Err(Error::UndefinedPapr);
    }
    Ok(10.0 * (peak * frame.len() as f64 / sum).log10())
}

/// Empirical complementary CDF over a threshold grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfCurve {
    pub thresholds: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl CcdfCurve {
    /// Smallest grid threshold whose probability is at or below `p`,
    /// linearly interpolated in log-probability between grid points.
    pub fn threshold_at(&self, p: f64) -> Option<f64> {
        let i = self.probabilities.iter().position(|&q| q <= p)?;
        if i == 0 {
            return Some(self.thresholds[0]);
        }
        let (t0, t1) = (self.thresholds[i - 1], self.thresholds[i]);
        let (q0, q1) = (self.probabilities[i - 1], self.probabilities[i]);
        if q1 <= 0.0 {
            let f = (q0 - p) / (q0 - q1);
            return Some(t0 + f * (t1 - t0));
        }
        let f = (q0.ln() - p.ln()) / (q0.ln() - q1.ln());
        Some(t0 + f * (t1 - t0))
    }
}

/// Fraction of samples strictly above each threshold. Thresholds are sorted.
pub fn ccdf(samples: &[f64], thresholds: &[f64]) -> CcdfCurve {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut thresholds = thresholds.to_vec();
    thresholds.sort_by(f64::total_cmp);
    let n = sorted.len().max(1) as f64;
    let probabilities = thresholds
        .iter()
        .map(|&t| {
            let at_or_below = sorted.partition_point(|&s| s <= t);
            (sorted.len() - at_or_below) as f64 / n
        })
        .collect();
    CcdfCurve {
        thresholds,
        probabilities,
    }
}

/// Running `E(X²)` and `E(X)` over transmitted samples.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerStats {
    pub mean_sq: f64,
    pub mean_abs: f64,
    pub sample_count: u64,
}

impl PowerStats {
    pub fn from_samples(samples: &[f64]) -> PowerStats {
        if samples.is_empty() {
            return PowerStats::default();
        }
        let n = samples.len() as f64;
        PowerStats {
            mean_sq: samples.iter().map(|v| v * v).sum::<f64>() / n,
            mean_abs: samples.iter().sum::<f64>() / n,
            sample_count: samples.len() as u64,
        }
    }

    pub fn merge(&self, other: &PowerStats) -> PowerStats {
        let total = self.sample_count + other.sample_count;
        if total == 0 {
            return PowerStats::default();
        }
        let (a, b) = (self.sample_count as f64, other.sample_count as f64);
        let t = total as f64;
        PowerStats {
            mean_sq: (self.mean_sq * a + other.mean_sq * b) / t,
            mean_abs: (self.mean_abs * a + other.mean_abs * b) / t,
            sample_count: total,
        }
    }
}

pub fn power_stats<S: AsRef<[f64]>>(frames: &[S]) -> PowerStats {
    frames
        .iter()
        .map(|f| PowerStats::from_samples(f.as_ref()))
        .fold(PowerStats::default(), |acc, s| acc.merge(&s))
}

/// Normalized bit rate `b_s`: spectral efficiency times `log2(M)`.
pub fn bits_per_sample(kind: &WaveformKind, order: usize) -> f64 {
    kind.spectral_efficiency() * (order as f64).log2()
}

/// Electrical (`E(X²)`) or optical (`E(X)`) power per bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EbMode {
    Elec,
    Opt,
}

/// Power per bit over noise variance, in dB.
pub fn eb_ratio(stats: &PowerStats, noise_var: f64, b_s: f64, mode: EbMode) -> Result<f64> {
    if !(noise_var > 0.0 && b_s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variance and bits per sample must be positive, got {noise_var} and {b_s}"
        )));
    }
    let power = match mode {
        EbMode::Elec => stats.mean_sq,
        EbMode::Opt => stats.mean_abs,
    };
    Ok(10.0 * (power / (noise_var * b_s)).log10())
}

pub fn dc_bias_level_db(mu: f64) -> f64 {
    10.0 * (mu * mu + 1.0).log10()
}

/// Inverse of [`dc_bias_level_db`]; levels at or below 0 dB give `mu = 0`.
pub fn mu_for_level(level_db: f64) -> f64 {
    (10f64.powf(level_db / 10.0) - 1.0).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BerRecord {
    pub bit_errors: u64,
    pub bits_total: u64,
}

impl BerRecord {
    pub fn ber(&self) -> f64 {
        if self.bits_total == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits_total as f64
        }
    }

    pub fn merge(&self, other: &BerRecord) -> BerRecord {
        BerRecord {
            bit_errors: self.bit_errors + other.bit_errors,
            bits_total: self.bits_total + other.bits_total,
        }
    }
}

pub fn count_bit_errors(tx: &[bool], rx: &[bool]) -> Result<BerRecord> {
    if tx.len() != rx.len() {
        return Err(Error::LengthMismatch {
            what: "received bits",
            expected: tx.len(),
            actual: rx.len(),
        });
    }
    Ok(BerRecord {
        bit_errors: tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64,
        bits_total: tx.len() as u64,
    })
}

/// `(transmitter, receiver)` transform blocks per frame.
pub fn transform_blocks(kind: &WaveformKind) -> (usize, usize) {
    match kind {
        WaveformKind::X1 { .. } => (2, 1),
        WaveformKind::X2 { .. } => (2, 3),
        _ => (1, 1),
    }
}

/// Approximate operation count, `N·log2(N)` per transform block.
pub fn complexity_ops(kind: &WaveformKind, n: usize) -> f64 {
    let (tx, rx) = transform_blocks(kind);
    (tx + rx) as f64 * n as f64 * (n as f64).log2()
}
