//! Seed derivation and independent random streams.
//!
//! Every random operation takes an explicit seed. Streams for different
//! purposes (playouts, prediction draws, covariates, ...) are separated by
//! mixing `(seed, index, stream)` through SplitMix64.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sequence::Outcome;

pub type StreamRng = ChaCha8Rng;

/// Purpose tag mixed into derived seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Playout = 0x706c_6179,
    Draw = 0x6472_6177,
    Covariate = 0x636f_7661,
    Observation = 0x6f62_7365,
    Sample = 0x7361_6d70,
    Run = 0x7275_6e73,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed, an index (round, run, worker, ...) and a stream tag.
pub fn derive_seed(seed: u64, index: u64, stream: Stream) -> u64 {
    splitmix64(splitmix64(seed ^ stream as u64).wrapping_add(index))
}

pub fn stream_rng(seed: u64, index: u64, stream: Stream) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index, stream))
}

#[inline]
pub fn rademacher<R: Rng + ?Sized>(rng: &mut R) -> Outcome {
    if rng.random::<bool>() {
        1
    } else {
        -1
    }
}
