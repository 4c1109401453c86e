//! Seeded shuffling and k-fold assignment.
//!
//! The generator is SplitMix64 (constants in [`crate::model::seed`]):
//!
//! ```text
//! next():  state += GAMMA; return mix(state)
//! bounded(n), n > 0:
//!     threshold = (2^64 - n) mod n          // = n.wrapping_neg() % n
//!     loop { x = next(); if x >= threshold { return x mod n } }
//! shuffle_indices(n, seed):
//!     p = [0, 1, .., n-1]; rng = SplitMix64(seed)
//!     for i in (1..n).rev(): j = bounded(i + 1); swap(p[i], p[j])
//! partition_folds(n, k, seed):
//!     p = shuffle_indices(n, seed); fold[p[i]] = i mod k
//! ```
//!
//! Rejection below `threshold` makes `bounded` exactly uniform.

use crate::error::{Error, Result};
use crate::model::seed::{mix64, GAMMA};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform draw from `0..n`. Panics if `n == 0`.
    pub fn bounded(&mut self, n: u64) -> u64 {
        assert!(n > 0, "bounded(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }
}

pub fn shuffle_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        let j = rng.bounded(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Fold id per item. Fold sizes differ by at most one.
pub fn partition_folds(n_items: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 1 || k > n_items {
        return Err(Error::InvalidArgument(format!("cannot split {n_items} items into {k} folds")));
    }
    let mut fold = vec![0; n_items];
    for (pos, item) in shuffle_indices(n_items, seed).into_iter().enumerate() {
        fold[item] = pos % k;
    }
    Ok(fold)
}

/// Train and test item lists for one fold, both ascending.
pub fn fold_split(assignment: &[usize], fold: usize) -> (Vec<u64>, Vec<u64>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (item, &f) in assignment.iter().enumerate() {
        if f == fold { test.push(item as u64) } else { train.push(item as u64) }
    }
    (train, test)
}
