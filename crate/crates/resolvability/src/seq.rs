//! Indexing of fixed-length sequences over a finite alphabet.
//!
//! A length-`n` sequence over an alphabet of size `k` is addressed by its
//! lexicographic index with position 0 as the most significant digit, so
//! `[s_0, .., s_{n-1}]` maps to `s_0 k^{n-1} + s_1 k^{n-2} + .. + s_{n-1}`.
//! Every module that materializes sequence-level tables shares this codec, so
//! vectors produced by different code paths line up element by element.

use crate::error::{Error, Result};

/// Hard cap on dense sequence state spaces: `k^n` may not exceed `2^24`.
pub const STATE_CAP: u128 = 1 << 24;

/// Number of length-`n` sequences over `k` symbols, refusing sizes beyond
/// [`STATE_CAP`].
pub fn state_count(k: usize, n: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::EmptyDistribution);
    }
    let mut states: u128 = 1;
    for _ in 0..n {
        states = states.saturating_mul(k as u128);
        if states > STATE_CAP {
            return Err(Error::CapacityExceeded {
                states,
                cap: STATE_CAP,
            });
        }
    }
    Ok(states as usize)
}

/// Decode `index` into its `n` symbols, most significant first.
pub fn index_to_seq(index: usize, k: usize, n: usize) -> Vec<usize> {
    let mut seq = vec![0usize; n];
    decode_into(index, k, &mut seq);
    seq
}

/// Decode `index` into a caller-provided buffer whose length sets `n`.
pub fn decode_into(index: usize, k: usize, seq: &mut [usize]) {
    let mut rest = index;
    for slot in seq.iter_mut().rev() {
        *slot = rest % k;
        rest /= k;
    }
    debug_assert_eq!(rest, 0, "index outside the k^n state space");
}

/// Fold symbols back into the lexicographic index.
pub fn seq_to_index(seq: &[usize], k: usize) -> usize {
    seq.iter().fold(0usize, |acc, &s| {
        debug_assert!(s < k);
        acc * k + s
    })
}
