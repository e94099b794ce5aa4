//! Block-parallel sampling with reproducible random streams.
//!
//! Samples are split into fixed-size blocks. Block `k` of stream `tag` draws
//! from ChaCha8 seeded with the run seed on stream `(tag << 32) | k`, so a
//! block's draws depend only on `(seed, tag, k)`. Blocks run on the rayon
//! pool and are merged in index order, which makes results independent of
//! thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BLOCK_SIZE: u64 = 16_384;

/// Random stream for block `block` of stream `tag`.
pub fn block_rng(seed: u64, tag: u32, block: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(tag) << 32) | u64::from(block));
    rng
}

/// Runs `samples` trials in blocks. `run_block(rng, n)` performs `n` trials
/// and returns their accumulator; `merge` combines accumulators left to
/// right in block order.
pub fn run_blocks<A, F, M>(seed: u64, tag: u32, samples: u64, run_block: F, merge: M) -> A
where
    A: Send + Default,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
    M: Fn(A, A) -> A,
{
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let block_index = |b: u64| u32::try_from(b).expect("fewer than 2^32 blocks");
    let partials: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
            let mut rng = block_rng(seed, tag, block_index(b));
            run_block(&mut rng, n)
        })
        .collect();
    partials.into_iter().fold(A::default(), merge)
}

/// Elementwise sum of fixed-size count arrays.
pub fn add_counts<const N: usize>(mut a: [u64; N], b: [u64; N]) -> [u64; N] {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}
