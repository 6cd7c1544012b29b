//! Reproducible Monte-Carlo plumbing: samples are split into fixed-size
//! blocks, each drawn from its own ChaCha stream of the master seed, so
//! results do not depend on how blocks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BLOCK_SAMPLES: u64 = 8192;

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `f(rng, count)` for every block and returns the per-block results in
/// block order.
pub fn run_blocks<T, F>(samples: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let blocks = samples.div_ceil(BLOCK_SAMPLES);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK_SAMPLES.min(samples - b * BLOCK_SAMPLES);
            f(&mut block_rng(seed, b), count)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn blocks_cover_every_sample_once() {
        let counts = run_blocks(20_000, 1, |_, c| c);
        assert_eq!(counts, vec![8192, 8192, 3616]);
    }

    #[test]
    fn streams_are_independent_of_the_pool() {
        let draw = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run_blocks(50_000, 9, |rng, c| (0..c).map(|_| rng.random::<u32>() as u64).sum::<u64>()))
        };
        assert_eq!(draw(1), draw(3));
        assert_ne!(block_rng(9, 0).random::<u64>(), block_rng(9, 1).random::<u64>());
    }
}
