//! Intensity-modulation OFDM waveforms for optical wireless links.
//!
//! The crate implements two mixed OFDM (X-OFDM) waveforms that reach a real,
//! non-negative drive signal without DC bias, alongside the DCO-, ACO- and
//! U-OFDM baselines. A Monte Carlo engine runs them over the
//! `Y = X + √X·Z₁ + Z₀` intensity channel to measure PAPR, BER and the
//! power-per-bit needed for a target BER.
//!
//! ```
//! use owc_core::{WaveformConfig, WaveformKind};
//!
//! let cfg = WaveformConfig::new(WaveformKind::x1(0), 64, 16).unwrap();
//! let bits = vec![true; cfg.bits_per_frame()];
//! let tx = cfg.modulate(&bits).unwrap();
//! assert_eq!(tx.len(), 96);
//! assert_eq!(cfg.demodulate(tx.samples()).unwrap().bits, bits);
//! ```

pub mod channel;
pub mod error;
pub mod metrics;
pub mod simulator;
pub mod spectral;
pub mod waveforms;

pub use channel::{apply_channel, NoiseConfig, RngSeed};
pub use error::{Error, Result};
pub use metrics::{BerRecord, CcdfCurve, EbMode, PowerStats};
pub use simulator::{Metric, NoiseMode, SimPlan};
pub use spectral::{BitBlock, ComplexValue, Qam, SpectrumFrame};
pub use waveforms::{CEstimator, ModemOutput, QuarterParts, TxFrame, WaveformConfig, WaveformKind};
