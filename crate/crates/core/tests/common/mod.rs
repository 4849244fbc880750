//! Brute-force references shared by the integration tests. Nothing here
//! calls into the counting engine.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumrep::IntegerSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_set(rng: &mut ChaCha8Rng, max_len: usize, max_value: u64) -> IntegerSet {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(0..=max_value)).collect()
}

/// Every nondecreasing `h`-tuple over `elems` (sorted), by recursion.
pub fn tuples(elems: &[u64], h: usize) -> Vec<Vec<u64>> {
    fn go(elems: &[u64], from: usize, h: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == h {
            out.push(cur.clone());
            return;
        }
        for i in from..elems.len() {
            cur.push(elems[i]);
            go(elems, i, h, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(elems, 0, h, &mut Vec::new(), &mut out);
    out
}

/// `r_{A,h}(n)` for every `n` in `[0, h max A]`.
pub fn brute_counts(set: &IntegerSet, h: usize) -> Vec<u64> {
    let elems = set.elements();
    let top = elems.last().map_or(0, |&m| m as usize * h);
    let mut counts = vec![0u64; top + 1];
    for t in tuples(elems, h) {
        counts[t.iter().sum::<u64>() as usize] += 1;
    }
    counts
}

pub fn brute_tops(set: &IntegerSet, h: usize, n: u64) -> Vec<u64> {
    let mut tops: Vec<u64> = tuples(set.elements(), h)
        .into_iter()
        .filter(|t| t.iter().sum::<u64>() == n && t[0] < t[h - 1])
        .map(|t| t[h - 1])
        .collect();
    tops.sort_unstable();
    tops.dedup();
    tops
}

pub fn binomial(n: u64, k: u64) -> u128 {
    (0..k as u128).fold(1u128, |c, i| c * (n as u128 - i) / (i + 1))
}

/// Counting-bound right-hand side written out directly.
pub fn reference_bound(id: &str, h: u64, ell: u64, s: u64, k0: u32, x: u64) -> f64 {
    let l = (x as f64).ln() / (h as f64).ln();
    let k0 = f64::from(k0);
    match id {
        "T1" => l - k0,
        "T2" => (ell - 1) as f64 * l - (ell - 1) as f64 * (k0 + 1.0),
        _ => (ell - 1) as f64 * l / s as f64 - (ell - 1) as f64 * (k0 + 1.0) / s as f64,
    }
}

pub fn count_upto(set: &IntegerSet, x: u64) -> u64 {
    set.iter().filter(|&a| a >= 1 && a <= x).count() as u64
}
