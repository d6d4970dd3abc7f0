//! The five intensity-modulation modems behind one configuration type.
//!
//! | kind | data symbols / frame | transmitted samples |
//! |------|----------------------|---------------------|
//! | DCO  | `N/2 - 1`            | `N`                 |
//! | ACO  | `N/4`                | `N`                 |
//! | U    | `N/2 - 1`            | `2N`                |
//! | X1   | `N/2 - 1`            | `3N/2`              |
//! | X2   | `N/2 - 1`            | `3N/2`              |
//!
//! Every transmitted sample is non-negative. Data symbols occupy bins
//! `1..N/2` in ascending order (odd bins only for ACO).

mod baseline;
mod parts;
mod xofdm;

pub use baseline::{
    aco_demodulate, aco_modulate, dco_demodulate, dco_modulate, u_demodulate, u_modulate,
};
pub use parts::{extract_parts, split_sign, Block, QuarterParts, SYMMETRY_TOLERANCE};
pub use xofdm::{
    x1_blocks, x1_demodulate, x1_modulate, x1_quarter_parts, x1_reconstruct, x1_trace, x2_blocks,
    x2_demodulate, x2_modulate, x2_trace, X1Trace, X2Trace, X1_CANDIDATES, X2_CANDIDATES,
};

use crate::error::{Error, Result};
use crate::metrics::mu_for_level;
use crate::spectral::{check_frame_size, BitBlock, ComplexValue, Qam};
use serde::{Deserialize, Serialize};
use std::fmt;

/// How the type-2 receiver estimates the common block from the two sums that
/// contain it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CEstimator {
    /// `(A+C) - A`
    FromA,
    /// `(B+C) - B`
    FromB,
    /// Mean of the two.
    Average,
}

/// Waveform selection and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WaveformKind {
    /// DC bias `mu·√E(x²)` added per frame, then clipped at zero.
    Dco {
        mu: f64,
    },
    Aco,
    U,
    X1 {
        candidate: usize,
    },
    X2 {
        candidate: usize,
        c_estimator: CEstimator,
        slice_before_reconstruct: bool,
    },
}

impl WaveformKind {
    pub fn dco(mu: f64) -> WaveformKind {
        WaveformKind::Dco { mu }
    }

    /// DCO with the bias given as a level in dB, `10·log10(mu² + 1)`.
    pub fn dco_level_db(level_db: f64) -> WaveformKind {
        WaveformKind::Dco {
            mu: mu_for_level(level_db),
        }
    }

    pub fn x1(candidate: usize) -> WaveformKind {
        WaveformKind::X1 { candidate }
    }

    /// Type-2 X-OFDM with the averaging estimator and hard slicing before
    /// reconstruction.
    pub fn x2(candidate: usize) -> WaveformKind {
        WaveformKind::X2 {
            candidate,
            c_estimator: CEstimator::Average,
            slice_before_reconstruct: true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WaveformKind::Dco { .. } => "dco",
            WaveformKind::Aco => "aco",
            WaveformKind::U => "u",
            WaveformKind::X1 { .. } => "x1",
            WaveformKind::X2 { .. } => "x2",
        }
    }

    /// Asymptotic spectral efficiency: 1/2 (DCO), 1/4 (ACO, U), 1/3 (X1, X2).
    pub fn spectral_efficiency(&self) -> f64 {
        match self {
            WaveformKind::Dco { .. } => 0.5,
            WaveformKind::Aco | WaveformKind::U => 0.25,
            WaveformKind::X1 { .. } | WaveformKind::X2 { .. } => 1.0 / 3.0,
        }
    }

    pub fn data_subcarrier_count(&self, n: usize) -> usize {
        match self {
            WaveformKind::Aco => n / 4,
            _ => n / 2 - 1,
        }
    }

    pub fn tx_len(&self, n: usize) -> usize {
        match self {
            WaveformKind::Dco { .. } | WaveformKind::Aco => n,
            WaveformKind::U => 2 * n,
            WaveformKind::X1 { .. } | WaveformKind::X2 { .. } => 3 * n / 2,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            WaveformKind::Dco { mu } if !(mu.is_finite() && mu >= 0.0) => {
                Err(Error::InvalidParameter(format!(
                    "DC bias factor must be finite and >= 0, got {mu}"
                )))
            }
            WaveformKind::X1 { candidate } if candidate >= X1_CANDIDATES.len() => {
                Err(Error::InvalidCandidate(candidate))
            }
            WaveformKind::X2 { candidate, .. } if candidate >= X2_CANDIDATES.len() => {
                Err(Error::InvalidCandidate(candidate))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WaveformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveformKind::Dco { mu } => write!(f, "dco(mu={mu})"),
            WaveformKind::X1 { candidate } => write!(f, "x1(candidate={candidate})"),
            WaveformKind::X2 {
                candidate,
                c_estimator,
                slice_before_reconstruct,
            } => write!(
                f,
                "x2(candidate={candidate}, c={c_estimator:?}, slice={slice_before_reconstruct})"
            ),
            other => f.write_str(other.name()),
        }
    }
}

/// A complete modem configuration: waveform, frame size and constellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveformConfig {
    pub kind: WaveformKind,
    pub n: usize,
    pub qam: Qam,
}

/// Non-negative transmitted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TxFrame {
    samples: Vec<f64>,
}

impl TxFrame {
    pub fn new(samples: Vec<f64>) -> Result<TxFrame> {
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && v.is_finite()))
        {
            return Err(Error::NegativeSample { index, value });
        }
        Ok(TxFrame { samples })
    }

    /// Caller guarantees non-negativity.
    pub(crate) fn from_nonnegative(samples: Vec<f64>) -> TxFrame {
        debug_assert!(samples.iter().all(|&v| v >= 0.0));
        TxFrame { samples }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Demodulator output.
#[derive(Debug, Clone, PartialEq)]
pub struct ModemOutput {
    pub data_symbols: Vec<ComplexValue>,
    pub bits: BitBlock,
}

impl WaveformConfig {
    pub fn new(kind: WaveformKind, n: usize, order: usize) -> Result<WaveformConfig> {
        check_frame_size(n)?;
        kind.validate()?;
        Ok(WaveformConfig {
            kind,
            n,
            qam: Qam::new(order)?,
        })
    }

    pub fn data_subcarrier_count(&self) -> usize {
        self.kind.data_subcarrier_count(self.n)
    }

    pub fn bits_per_frame(&self) -> usize {
        self.data_subcarrier_count() * self.qam.bits_per_symbol()
    }

    pub fn tx_len(&self) -> usize {
        self.kind.tx_len(self.n)
    }

    /// Maps bits to QAM symbols and modulates them.
    pub fn modulate(&self, bits: &[bool]) -> Result<TxFrame> {
        if bits.len() != self.bits_per_frame() {
            return Err(Error::LengthMismatch {
                what: "bits per frame",
                expected: self.bits_per_frame(),
                actual: bits.len(),
            });
        }
        let symbols = self.qam.map(bits)?;
        self.modulate_symbols(&symbols)
    }

    pub fn modulate_symbols(&self, data: &[ComplexValue]) -> Result<TxFrame> {
        match self.kind {
            WaveformKind::Dco { .. } => dco_modulate(data, self),
            WaveformKind::Aco => aco_modulate(data, self),
            WaveformKind::U => u_modulate(data, self),
            WaveformKind::X1 { .. } => x1_modulate(data, self),
            WaveformKind::X2 { .. } => x2_modulate(data, self),
        }
    }

    /// Recovers data symbols and hard-decision bits from received samples.
    pub fn demodulate(&self, rx: &[f64]) -> Result<ModemOutput> {
        match self.kind {
            WaveformKind::Dco { .. } => dco_demodulate(rx, self),
            WaveformKind::Aco => aco_demodulate(rx, self),
            WaveformKind::U => u_demodulate(rx, self),
            WaveformKind::X1 { .. } => x1_demodulate(rx, self),
            WaveformKind::X2 { .. } => x2_demodulate(rx, self),
        }
    }

    pub(crate) fn check_data(&self, data: &[ComplexValue]) -> Result<()> {
        if data.len() != self.data_subcarrier_count() {
            return Err(Error::LengthMismatch {
                what: "data symbols",
                expected: self.data_subcarrier_count(),
                actual: data.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_rx(&self, rx: &[f64]) -> Result<()> {
        if rx.len() != self.tx_len() {
            return Err(Error::LengthMismatch {
                what: "received samples",
                expected: self.tx_len(),
                actual: rx.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn output(&self, data_symbols: Vec<ComplexValue>) -> ModemOutput {
        let bits = self.qam.demap(&data_symbols);
        ModemOutput { data_symbols, bits }
    }
}

pub(crate) fn wrong_kind(expected: &str, got: &WaveformKind) -> Error {
    Error::InvalidParameter(format!(
        "{expected} modem called with a {got} configuration"
    ))
}
