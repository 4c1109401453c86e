//! Seed derivation.
//!
//! Every random stream in a run is keyed from the manifest's `master_seed`
//! with the SplitMix64 finalizer, so any implementation can reproduce the
//! seeds bit for bit. With wrapping 64-bit arithmetic:
//!
//! ```text
//! GAMMA  = 0x9E37_79B9_7F4A_7C15
//! mix(z) = z ^= z >> 30; z *= 0xBF58_476D_1CE4_E5B9;
//!          z ^= z >> 27; z *= 0x94D0_49BB_1331_11EB;
//!          z ^ (z >> 31)
//!
//! mix_seed(master, [p1, .., pk]):
//!     h = mix(master + GAMMA)
//!     for p in parts: h = mix((h + GAMMA) ^ p)
//!     return h
//! ```
//!
//! A trial's seed is `mix_seed(master, [grid_point, seed_index, fold_index, replication])`.
//! Fold partitions use `mix_seed(master, [SPLIT_STREAM, seed_index])` so every
//! method and replication at one seed index sees the same split, and grid
//! subsampling uses `mix_seed(master, [GRID_STREAM])`.

use super::TrialCoords;

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
pub const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
pub const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// ASCII "split".
pub const SPLIT_STREAM: u64 = 0x73_706c_6974;
/// ASCII "grid".
pub const GRID_STREAM: u64 = 0x6772_6964;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

pub fn mix_seed(master_seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(mix64(master_seed.wrapping_add(GAMMA)), |h, &p| mix64(h.wrapping_add(GAMMA) ^ p))
}

pub fn derive_seed(master_seed: u64, coords: &TrialCoords) -> u64 {
    mix_seed(
        master_seed,
        &[
            coords.grid_point,
            coords.seed_index as u64,
            coords.fold_index as u64,
            coords.replication as u64,
        ],
    )
}

pub fn split_seed(master_seed: u64, seed_index: u32) -> u64 {
    mix_seed(master_seed, &[SPLIT_STREAM, seed_index as u64])
}
