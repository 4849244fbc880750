//! Randomized oracle-equivalence suite: the counting engine against
//! exhaustive enumeration, plus the multiset-total identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::intset::IntegerSet;
use crate::repcount::{rep_count, rep_count_naive, rep_table};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub set: IntegerSet,
    pub h: u64,
    pub n: u64,
    pub engine: u64,
    pub oracle: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub comparisons: u64,
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

/// Number of multisets of size `h` from `m` elements, `C(m + h - 1, h)`.
pub fn multiset_count(m: u64, h: u64) -> u128 {
    if m == 0 {
        return u128::from(h == 0);
    }
    let mut c = 1u128;
    for i in 0..h as u128 {
        c = c * (m as u128 + i) / (i + 1);
    }
    c
}

pub fn random_set<R: Rng>(rng: &mut R, max_len: usize, max_value: u64) -> IntegerSet {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(0..=max_value)).collect()
}

/// `cases` random sets `A ⊆ [0, 40]`, `|A| <= 7`, `h ∈ {2, 3, 4}`: every
/// `n` in `[0, h max A]` is compared against the oracle, and the table
/// total against the multiset count.
pub fn run(cases: usize, seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut comparisons = 0u64;
    for _ in 0..cases {
        let set = random_set(&mut rng, 7, 40);
        let h = rng.gen_range(2..=4u64);
        let top = set.scaled_max(h)?.unwrap_or(0);
        let table = rep_table(&set, h, 0, top, None)?;
        for n in 0..=top {
            let engine = rep_count(&set, h, n)?;
            let oracle = rep_count_naive(&set, h, n);
            comparisons += 1;
            if engine != oracle || table.get(n) != Some(oracle) {
                mismatches.push(Mismatch {
                    set: set.clone(),
                    h,
                    n,
                    engine,
                    oracle,
                });
            }
        }
        if u128::from(table.total()?) != multiset_count(set.len() as u64, h) {
            mismatches.push(Mismatch {
                set: set.clone(),
                h,
                n: u64::MAX,
                engine: table.total()?,
                oracle: multiset_count(set.len() as u64, h) as u64,
            });
        }
    }
    Ok(SelftestReport {
        seed,
        cases,
        comparisons,
        pass: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(3, 2), 6);
        assert_eq!(multiset_count(4, 3), 20);
        assert_eq!(multiset_count(1, 5), 1);
        assert_eq!(multiset_count(0, 2), 0);
    }

    #[test]
    fn small_run_passes() {
        let r = run(25, 7).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
        assert!(r.comparisons > 0);
    }
}
