//! Deterministic substreams for Monte Carlo.
//!
//! One 64-bit master seed expands into a ChaCha8 key; each path (or path
//! block) gets its own 64-bit ChaCha stream id. A path's draws depend only on
//! `(master_seed, stream)`, so results are independent of thread count and
//! scheduling. Reductions over paths are done in index order afterwards.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use rand_chacha::ChaCha8Rng as StreamRng;

/// Independent generator for `stream` under `master_seed`.
pub fn substream(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Evaluate `f` once per path on its own substream, in parallel, returning
/// results in path order.
pub fn map_paths<T, F>(master_seed: u64, paths: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync,
{
    (0..paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(master_seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}
