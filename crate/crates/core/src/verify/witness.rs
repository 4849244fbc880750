use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{checked_mul, Error, Result};
use crate::intset::{block_interval, block_of, blocks, check_base, IntegerSet};
use crate::repcount::{Exactness, DENSE_LIMIT};

/// A non-diagonal representation of `h * a_k*` whose largest summand lies
/// in the next block, certifying that `A_{k+1}` is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: u32,
    pub a_star: u64,
    pub target: u64,
    pub representation: Vec<u64>,
    pub top_element: u64,
    pub top_block: u32,
}

impl Witness {
    /// Re-checks the certificate against `set` from scratch.
    pub fn validate(&self, set: &IntegerSet, h: u64) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidWitness { k: self.k, reason });
        let rep = &self.representation;
        if rep.len() as u64 != h || h < 2 {
            return fail(format!(
                "representation has {} parts, expected h = {h}",
                rep.len()
            ));
        }
        if let Some(&a) = rep.iter().find(|&&a| !set.contains(a)) {
            return fail(format!("{a} is not in the set"));
        }
        if rep.windows(2).any(|w| w[0] > w[1]) {
            return fail("representation is not nondecreasing".into());
        }
        let sum: u128 = rep.iter().map(|&a| a as u128).sum();
        if sum != self.target as u128 {
            return fail(format!("parts sum to {sum}, not {}", self.target));
        }
        if self.target as u128 != h as u128 * self.a_star as u128 {
            return fail("target is not h * a_star".into());
        }
        if rep[0] >= rep[rep.len() - 1] {
            return fail("representation is diagonal".into());
        }
        let top = rep[rep.len() - 1];
        if top != self.top_element {
            return fail("top element does not match the representation".into());
        }

        let (lo, hi) = block_interval(self.k, h)?;
        if !set.contains(self.a_star) || self.a_star < lo || hi.is_some_and(|hi| self.a_star >= hi)
        {
            return fail(format!(
                "a_star = {} is not in block {}",
                self.a_star, self.k
            ));
        }
        let block_end = hi.unwrap_or(u64::MAX);
        if set.iter().any(|a| a > self.a_star && a < block_end) {
            return fail("a_star is not the maximum of its block".into());
        }

        let (_, next_hi) = block_interval(self.k + 1, h)?;
        if top <= self.a_star || next_hi.is_some_and(|b| top >= b) {
            return fail(format!("top {top} outside (a_star, h^(k+1))"));
        }
        if self.top_block != self.k + 1 || block_of(top, h)? != self.k + 1 {
            return fail(format!("top {top} is not in block {}", self.k + 1));
        }
        Ok(())
    }
}

fn ensure_in_window(set: &IntegerSet, h: u64, n: u64, mode: Exactness) -> Result<()> {
    if let Some(bound) = mode.bound(set, h)? {
        if n > bound {
            return Err(Error::OutsideWindow { n, bound });
        }
    }
    Ok(())
}

/// Largest summands `a_h` over all non-diagonal representations of `n`
/// (those with `a_1 < a_h`), increasing.
pub fn distinct_tops(set: &IntegerSet, h: u64, n: u64, mode: Exactness) -> Result<Vec<u64>> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    ensure_in_window(set, h, n, mode)?;
    if h == 1 {
        return Ok(Vec::new());
    }
    let elems: Vec<u64> = set.iter().take_while(|&a| a <= n).collect();
    if n <= DENSE_LIMIT {
        Ok(tops_dense(&elems, h as usize, n))
    } else {
        Ok(elems
            .iter()
            .enumerate()
            .filter(|&(_, &b)| (b as u128) * (h as u128) > n as u128)
            .filter(|&(i, &b)| find_completion(&elems[..=i], h - 1, n - b).is_some())
            .map(|(_, &b)| b)
            .collect())
    }
}

/// One pass over the elements in increasing order: after admitting `b`,
/// `reach[j]` holds the sums of `j` elements `<= b`, so `b` is a top exactly
/// when `n - b` is reachable with `h - 1` of them and `h * b > n`.
fn tops_dense(elems: &[u64], h: usize, n: u64) -> Vec<u64> {
    let nbits = n as usize + 1;
    let words = nbits.div_ceil(64);
    let mut reach = vec![vec![0u64; words]; h];
    reach[0][0] = 1;
    let mut tops = Vec::new();
    for &b in elems {
        for j in 1..h {
            let (lower, upper) = reach.split_at_mut(j);
            or_shifted_into(&mut upper[0], &lower[j - 1], b as usize);
        }
        if (b as u128) * (h as u128) > n as u128 {
            let r = (n - b) as usize;
            if reach[h - 1][r / 64] >> (r % 64) & 1 == 1 {
                tops.push(b);
            }
        }
    }
    tops
}

fn or_shifted_into(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bs);
        }
        dst[i] |= v;
    }
}

/// Lexicographically least nondecreasing `j`-tuple over `elems` (sorted)
/// summing to `rem`.
fn find_completion(elems: &[u64], j: u64, rem: u64) -> Option<Vec<u64>> {
    fn go(
        elems: &[u64],
        idx: usize,
        j: u64,
        rem: u64,
        path: &mut Vec<u64>,
        dead: &mut HashSet<(usize, u64, u64)>,
    ) -> bool {
        if j == 0 {
            return rem == 0;
        }
        if dead.contains(&(idx, j, rem)) {
            return false;
        }
        let max = elems.last().copied().unwrap_or(0) as u128;
        if max * j as u128 >= rem as u128 {
            for i in idx..elems.len() {
                let a = elems[i];
                if a as u128 * j as u128 > rem as u128 {
                    break;
                }
                path.push(a);
                if go(elems, i, j - 1, rem - a, path, dead) {
                    return true;
                }
                path.pop();
            }
        }
        dead.insert((idx, j, rem));
        false
    }
    let mut path = Vec::with_capacity(j as usize);
    go(elems, 0, j, rem, &mut path, &mut HashSet::new()).then_some(path)
}

/// Certificate that `A_{k+1}` is nonempty: the representation of
/// `h * a_k*` with the smallest possible top element, completed
/// lexicographically least.
pub fn witness_certificate(set: &IntegerSet, h: u64, k: u32, mode: Exactness) -> Result<Witness> {
    check_base(h)?;
    let decomposition = blocks(set, h)?;
    let block = decomposition.get(k).ok_or(Error::EmptyBlock { k })?;
    let a_star = block.top();
    let target = checked_mul(h, a_star, "h * a_k*")?;
    ensure_in_window(set, h, target, mode)?;

    let tops = distinct_tops(set, h, target, mode)?;
    let no_witness = Error::NoWitness {
        k,
        target,
        next_block: k + 1,
    };
    let &top = tops.first().ok_or(no_witness.clone())?;
    let below: Vec<u64> = set.iter().take_while(|&a| a <= top).collect();
    let mut representation = find_completion(&below, h - 1, target - top).ok_or(no_witness)?;
    representation.push(top);

    let witness = Witness {
        k,
        a_star,
        target,
        representation,
        top_element: top,
        top_block: block_of(top, h)?,
    };
    witness.validate(set, h)?;
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::from_unsorted(v.to_vec())
    }

    fn range50() -> IntegerSet {
        IntegerSet::range_inclusive(0, 50)
    }

    #[test]
    fn witness_examples() {
        let w = witness_certificate(&range50(), 2, 3, Exactness::Prefix(50)).unwrap();
        assert_eq!((w.a_star, w.target), (7, 14));
        assert_eq!(w.representation, vec![6, 8]);
        assert_eq!((w.top_element, w.top_block), (8, 4));

        // h = 3: A_2 = {3..8}, so a_2* = 8 and the top must land in [9, 27)
        let w = witness_certificate(&range50(), 3, 2, Exactness::Prefix(50)).unwrap();
        assert_eq!((w.a_star, w.target), (8, 24));
        assert!((9..27).contains(&w.top_element));
        assert_eq!(w.representation, vec![6, 9, 9]);
        w.validate(&range50(), 3).unwrap();

        let err = witness_certificate(&set(&[0, 1, 3, 7]), 2, 2, Exactness::Complete).unwrap_err();
        assert_eq!(
            err,
            Error::NoWitness {
                k: 2,
                target: 6,
                next_block: 3
            }
        );
    }

    #[test]
    fn witness_errors() {
        assert_eq!(
            witness_certificate(&range50(), 2, 6, Exactness::Prefix(50)),
            Err(Error::OutsideWindow { n: 100, bound: 50 })
        );
        assert_eq!(
            witness_certificate(&set(&[1, 8]), 2, 2, Exactness::Complete),
            Err(Error::EmptyBlock { k: 2 })
        );
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let a = range50();
        let good = witness_certificate(&a, 2, 3, Exactness::Prefix(50)).unwrap();
        let mut w = good.clone();
        w.representation = vec![7, 7];
        w.top_element = 7;
        assert!(w.validate(&a, 2).is_err());
        let mut w = good.clone();
        w.a_star = 6;
        w.target = 12;
        w.representation = vec![4, 8];
        assert!(w.validate(&a, 2).is_err());
        let mut w = good.clone();
        w.top_block = 5;
        assert!(w.validate(&a, 2).is_err());
        let sparse = set(&[0, 6, 7, 8]);
        assert!(good.validate(&sparse, 2).is_ok());
        assert!(good.validate(&set(&[0, 7, 8]), 2).is_err());
    }

    #[test]
    fn tops_examples() {
        assert_eq!(
            distinct_tops(&set(&[0, 1, 2, 3]), 3, 6, Exactness::Complete).unwrap(),
            vec![3]
        );
        assert_eq!(
            distinct_tops(&range50(), 2, 14, Exactness::Prefix(50)).unwrap(),
            vec![8, 9, 10, 11, 12, 13, 14]
        );
        assert!(
            distinct_tops(&set(&[0, 1, 3, 7]), 2, 6, Exactness::Complete)
                .unwrap()
                .is_empty()
        );
        assert!(distinct_tops(&set(&[0, 1, 2]), 1, 2, Exactness::Complete)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sparse_tops_match_dense() {
        let a = set(&[0, 1, 2, 4, 5, 9, 12, 13, 20]);
        let d = 1u64 << 24;
        let dilated: IntegerSet = a.iter().map(|x| x * d).collect();
        for h in 2..=4u64 {
            for n in 0..=20 * h {
                let dense = distinct_tops(&a, h, n, Exactness::Complete).unwrap();
                let sparse = distinct_tops(&dilated, h, n * d, Exactness::Complete).unwrap();
                let scaled: Vec<u64> = dense.iter().map(|x| x * d).collect();
                assert_eq!(sparse, scaled, "h={h} n={n}");
            }
        }
    }
}
