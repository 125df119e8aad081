//! BPSK over AWGN, producing a-priori LLRs for the decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::code::Codeword;

/// Default magnitude cap for channel LLRs.
pub const LLR_MAX: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub ebno_db: f64,
    pub rate: f64,
    pub seed: u64,
    pub llr_max: f64,
}

impl ChannelConfig {
    pub fn new(ebno_db: f64, rate: f64, seed: u64) -> Self {
        Self {
            ebno_db,
            rate,
            seed,
            llr_max: LLR_MAX,
        }
    }

    /// Noise variance per real dimension, `1 / (2 R Eb/N0)`.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.ebno_db / 10.0))
    }

    /// The generator used by [`transmit`]: ChaCha8 seeded from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Finite LLRs, positive favouring bit 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LlrVector(pub Vec<f64>);

impl LlrVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Priors for a noiseless transmission of `x`: every bit at `±magnitude`.
    pub fn noiseless(x: &Codeword, magnitude: f64) -> Self {
        Self(x.bits().iter().map(|&b| if b == 0 { magnitude } else { -magnitude }).collect())
    }
}

/// Bit 0 maps to `+1`, bit 1 to `-1`.
pub fn modulate(x: &Codeword) -> Vec<f64> {
    x.bits().iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds `N(0, σ²)` noise drawn from `rng`. Samples come from
/// `rand_distr::StandardNormal` (ziggurat) scaled by σ.
pub fn transmit_with<R: rand::Rng>(s: &[f64], cfg: &ChannelConfig, rng: &mut R) -> Vec<f64> {
    let sigma = cfg.noise_variance().sqrt();
    if sigma == 0.0 {
        return s.to_vec();
    }
    s.iter()
        .map(|&si| {
            let z: f64 = StandardNormal.sample(rng);
            si + sigma * z
        })
        .collect()
}

/// [`transmit_with`] using a fresh generator seeded from `cfg.seed`.
pub fn transmit(s: &[f64], cfg: &ChannelConfig) -> Vec<f64> {
    transmit_with(s, cfg, &mut cfg.rng())
}

/// `Λ = 2y/σ²`, clamped to `±cfg.llr_max`. A zero noise variance maps every
/// sample to the clamp with the sign of `y` (and `0` to `0`).
pub fn llr_init(y: &[f64], cfg: &ChannelConfig) -> LlrVector {
    let var = cfg.noise_variance();
    let cap = cfg.llr_max;
    LlrVector(
        y.iter()
            .map(|&yi| {
                if yi == 0.0 {
                    0.0
                } else if var == 0.0 {
                    cap.copysign(yi)
                } else {
                    (2.0 * yi / var).clamp(-cap, cap)
                }
            })
            .collect(),
    )
}

/// Sign demapper, the inverse of [`modulate`] on noiseless input.
pub fn hard_demap(y: &[f64]) -> Codeword {
    Codeword(y.iter().map(|&v| u8::from(v < 0.0)).collect())
}
