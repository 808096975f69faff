//! Seeded random streams whose output does not depend on how work is split
//! across threads.
//!
//! A run of `samples` draws is cut into fixed blocks of [`BLOCK_SIZE`]. Block
//! `b` owns a ChaCha8 generator seeded from the master seed and switched to
//! stream `b`, so every block's draws are a pure function of `(seed, b)`.
//! Per-block results are combined with an associative integer reduction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BLOCK_SIZE: u64 = 1 << 16;

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// `(block index, draws in block)` for every block of a run.
pub fn blocks(samples: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = samples.div_ceil(BLOCK_SIZE);
    (0..count).into_par_iter().map(move |b| {
        let start = b * BLOCK_SIZE;
        (b, BLOCK_SIZE.min(samples - start))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn blocks_cover_samples() {
        let mut v: Vec<_> = blocks(2 * BLOCK_SIZE + 5).collect();
        v.sort();
        assert_eq!(v, vec![(0, BLOCK_SIZE), (1, BLOCK_SIZE), (2, 5)]);
        assert_eq!(blocks(0).count(), 0);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = block_rng(7, 3).random();
        let b: u64 = block_rng(7, 3).random();
        let c: u64 = block_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
