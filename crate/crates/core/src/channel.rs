//! Intensity channel `Y = X + √X·Z₁ + Z₀` with seeded, stream-addressed noise.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Variances of the signal-dependent (`xi2`) and signal-independent
/// (`sigma2`) Gaussian terms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseConfig {
    xi2: f64,
    sigma2: f64,
}

impl NoiseConfig {
    pub fn new(xi2: f64, sigma2: f64) -> Result<NoiseConfig> {
        for (name, v) in [("xi2", xi2), ("sigma2", sigma2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(NoiseConfig { xi2, sigma2 })
    }

    pub fn noiseless() -> NoiseConfig {
        NoiseConfig::default()
    }

    pub fn xi2(&self) -> f64 {
        self.xi2
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// Addresses one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream_id: u64) -> RngSeed {
        RngSeed { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Passes non-negative samples through the channel.
///
/// Both noise terms are drawn for every sample regardless of the variances,
/// so runs that differ only in noise level see the same underlying draws.
pub fn apply_channel(tx: &[f64], noise: NoiseConfig, rng: RngSeed) -> Result<Vec<f64>> {
    if let Some((index, &value)) = tx.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
        return Err(Error::NegativeSample { index, value });
    }
    let (xi, sigma) = (noise.xi2.sqrt(), noise.sigma2.sqrt());
    let mut r = rng.rng();
    Ok(tx
        .iter()
        .map(|&x| {
            let z1: f64 = StandardNormal.sample(&mut r);
            let z0: f64 = StandardNormal.sample(&mut r);
            x + x.sqrt() * xi * z1 + sigma * z0
        })
        .collect())
}
