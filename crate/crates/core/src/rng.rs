//! Named random sub-streams derived from one 64-bit master seed.
//!
//! Every sampler draws from its own ChaCha20 stream, selected by a
//! [`Stream`] label, so the output of sample `i` never depends on how many
//! other samples were generated or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    Secret,
    /// Left component `a` of sample `i`.
    Uniform(u32),
    /// Error term of sample `i`.
    Error(u32),
    /// Right component `b` of sample `i` from the uniform oracle.
    UniformB(u32),
    /// Free-form stream for statistics and benchmarks.
    Aux(u32),
}

impl Stream {
    fn id(self) -> u64 {
        let (tag, idx) = match self {
            Stream::Secret => (1u64, 0u32),
            Stream::Uniform(i) => (2, i),
            Stream::Error(i) => (3, i),
            Stream::UniformB(i) => (4, i),
            Stream::Aux(i) => (5, i),
        };
        (tag << 32) | idx as u64
    }
}

pub fn stream(master_seed: u64, s: Stream) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(s.id());
    rng
}

/// SplitMix64 finalizer, used to derive per-run master seeds.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for run `index` under `label`, derived from `master`.
pub fn derive_seed(master: u64, label: u64, index: u64) -> u64 {
    mix(mix(master ^ mix(label)) ^ index)
}
