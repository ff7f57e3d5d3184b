//! Seeded, size-stratified sampling of nonempty sets `H ⊆ A^m`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clone::Closer;
use crate::error::{Error, Result};
use crate::func::table_len;
use crate::galois::{invariant_closure_with, QSet};

/// Draws are made in batches of this size; each batch starts with the
/// boundary sizes `1, 2, ⌈N/2⌉, N-1` (where they exist, `N = k^m`).
pub const BATCH: usize = 16;

/// `count` nonempty sets. With a closer, every other non-boundary draw is the
/// invariant closure of a random seed of one to three rows, so that
/// invariant sets are well represented.
pub fn sample_sets(k: usize, m: usize, seed: u64, count: usize, closer: Option<&Closer>) -> Result<Vec<QSet>> {
    let n = table_len(k, m).filter(|&n| n <= 1 << 24).ok_or_else(|| Error::input("k^m is too large to sample"))?;
    if n == 0 {
        return Err(Error::input("m must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary: Vec<usize> = [1, 2, n.div_ceil(2), n - 1].into_iter().filter(|&s| (1..=n).contains(&s)).collect();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let pos = i % BATCH;
        let h = if let Some(&size) = boundary.get(pos) {
            random_set(&mut rng, k, m, n, size)?
        } else if let (1, Some(closer)) = (pos % 2, closer) {
            let size = rng.gen_range(1..=3.min(n));
            let seed_set = random_set(&mut rng, k, m, n, size)?;
            invariant_closure_with(closer, &seed_set)?
        } else {
            let size = rng.gen_range(1..=n);
            random_set(&mut rng, k, m, n, size)?
        };
        out.push(h);
    }
    Ok(out)
}

fn random_set(rng: &mut ChaCha8Rng, k: usize, m: usize, n: usize, size: usize) -> Result<QSet> {
    QSet::from_codes(k, m, sample(rng, n, size))
}
