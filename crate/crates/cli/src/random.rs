//! Seeded random instances for the verification suites.

use betti_core::detect_numerical;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pairwise coprime `k` with `p ∈ {2, 3, 4, 5}` and `2 <= k_i <= 13`.
pub fn coprime_tuple(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let p = rng.gen_range(2..=5);
    loop {
        let mut k: Vec<i64> = Vec::with_capacity(p);
        while k.len() < p {
            let options: Vec<i64> = (2..=13).filter(|x: &i64| k.iter().all(|y| x.gcd(y) == 1)).collect();
            match options.choose(rng) {
                Some(&x) => k.push(x),
                None => break,
            }
        }
        if k.len() == p {
            return k;
        }
    }
}

/// Three or four distinct generators in `2..=60` with gcd 1, none generated
/// by the others, whose semigroup has more than one Betti element.
pub fn non_single_betti(rng: &mut ChaCha8Rng) -> Vec<i64> {
    loop {
        let p = rng.gen_range(3..=4);
        let mut n: Vec<i64> = (2..=60).collect::<Vec<_>>().choose_multiple(rng, p).copied().collect();
        n.sort();
        if n.iter().fold(0, |g, x| g.gcd(x)) != 1 {
            continue;
        }
        // Non-minimal inputs are rejected with an error.
        if let Ok(None) = detect_numerical(&n) {
            return n;
        }
    }
}
