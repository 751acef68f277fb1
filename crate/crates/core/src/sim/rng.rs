//! Seed derivation.
//!
//! Every random draw comes from a `ChaCha8Rng` whose 64-bit seed is
//! `mix(mix(mix(master ^ purpose) ^ a) ^ b)`, where `mix` is the SplitMix64
//! finaliser and `a`, `b` are counters (slot, iteration, network). Distinct
//! purposes and counters give independent, reproducible streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. The discriminant is the tag mixed into the
/// seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Topology = 0x746f_706f_6c6f_6779,
    Schedule = 0x7363_6865_6475_6c65,
    Probe = 0x7072_6f62_6500_0000,
    Churn = 0x6368_7572_6e00_0000,
}

fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, purpose: Purpose, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master ^ purpose as u64) ^ a) ^ b)
}

pub fn stream(master: u64, purpose: Purpose, a: u64, b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, purpose, a, b))
}
