//! Seeded random streams. Every random draw in an experiment comes from a
//! stream keyed by `(base_seed, run_index, purpose)`, so runs are
//! reproducible and independent no matter how they are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// What a stream is used for. The tag is mixed into the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Data,
    Split,
    Noise,
    Guess,
    Truth,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Data => 0x6461_7461,
            Purpose::Split => 0x7370_6c69,
            Purpose::Noise => 0x6e6f_6973,
            Purpose::Guess => 0x6775_6573,
            Purpose::Truth => 0x7472_7574,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 256-bit ChaCha key for the given stream identity.
pub fn stream_seed(base_seed: u64, run_index: u64, purpose: Purpose) -> [u8; 32] {
    let mut h = splitmix64(base_seed);
    h = splitmix64(h ^ run_index.wrapping_mul(0xd6e8_feb8_6659_fd93));
    h = splitmix64(h ^ purpose.tag());
    let mut seed = [0u8; 32];
    let mut state = h;
    for chunk in seed.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    seed
}

pub fn stream(base_seed: u64, run_index: u64, purpose: Purpose) -> StreamRng {
    ChaCha8Rng::from_seed(stream_seed(base_seed, run_index, purpose))
}

/// A generator seeded directly from a 64-bit value.
pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One draw from Laplace(0, scale); `scale == 0` yields exactly 0.
pub fn laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    // Always consume one uniform so that the stream layout does not depend on
    // the scale.
    let u: f64 = rng.random::<f64>() - 0.5;
    if scale == 0.0 {
        return 0.0;
    }
    -scale * u.signum() * (-2.0 * u.abs()).ln_1p()
}

/// One draw from N(0, sd²); `sd == 0` yields exactly 0.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, sd: f64) -> f64 {
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    if sd == 0.0 {
        0.0
    } else {
        sd * z
    }
}
