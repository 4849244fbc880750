//! Exact h-fold sumsets and the representation function `r_{A,h}(n)`:
//! the number of nondecreasing h-tuples over `A` summing to `n`.
//!
//! [`rep_table`] and [`rep_count`] share one dynamic program indexed by
//! (element, summands used, sum). [`rep_count_naive`] enumerates tuples
//! directly and is kept only as an independent oracle.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intset::IntegerSet;

/// Largest sum handled by the dense (array) engines; beyond it the sparse
/// paths are used.
pub const DENSE_LIMIT: u64 = 1 << 22;

const PAR_MIN_SPAN: usize = 1 << 15;
const PAR_CHUNK: usize = 1 << 13;

/// How far a finite set determines the representation counts of the set it
/// stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    /// The finite set is the whole set: every count is exact.
    Complete,
    /// The set contains every element `<= M` of the underlying set, so
    /// `r(n)` is exact for `n <= M`.
    Prefix(u64),
}

impl Exactness {
    /// Largest `n` whose count is exact. `None` only for an empty set in
    /// complete mode.
    pub fn bound(&self, set: &IntegerSet, h: u64) -> Result<Option<u64>> {
        match *self {
            Exactness::Complete => set.scaled_max(h),
            Exactness::Prefix(m) => Ok(Some(m)),
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Complete => f.write_str("complete"),
            Exactness::Prefix(m) => write!(f, "prefix:{m}"),
        }
    }
}

impl FromStr for Exactness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "complete" {
            return Ok(Exactness::Complete);
        }
        match s.strip_prefix("prefix:") {
            Some(m) => m
                .parse::<u64>()
                .map(Exactness::Prefix)
                .map_err(|_| Error::InvalidParameter(format!("bad prefix bound in mode {s:?}"))),
            None => Err(Error::InvalidParameter(format!(
                "mode must be `complete` or `prefix:M`, got {s:?}"
            ))),
        }
    }
}

impl Serialize for Exactness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exactness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_order(h: u64) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    Ok(())
}

/// `{n in hA : n <= cap}`; `cap` defaults to `h * max(A)`.
pub fn sumset(set: &IntegerSet, h: u64, cap: Option<u64>) -> Result<IntegerSet> {
    check_order(h)?;
    let Some(top) = set.scaled_max(h)? else {
        return Ok(IntegerSet::new());
    };
    let cap = cap.map_or(top, |c| c.min(top));
    if cap <= DENSE_LIMIT {
        Ok(sumset_dense(set, h, cap))
    } else {
        Ok(sumset_sparse(set, h, cap))
    }
}

fn sumset_dense(set: &IntegerSet, h: u64, cap: u64) -> IntegerSet {
    let nbits = cap as usize + 1;
    let words = nbits.div_ceil(64);
    let mut cur = vec![0u64; words];
    cur[0] = 1;
    for _ in 0..h {
        let mut next = vec![0u64; words];
        for a in set.iter().take_while(|&a| a <= cap) {
            or_shifted(&mut next, &cur, a as usize);
        }
        cur = next;
    }
    let spare = words * 64 - nbits;
    if spare > 0 {
        cur[words - 1] &= u64::MAX >> spare;
    }
    let mut out = Vec::new();
    for (w, &bits) in cur.iter().enumerate() {
        let mut b = bits;
        while b != 0 {
            let t = b.trailing_zeros() as u64;
            out.push(w as u64 * 64 + t);
            b &= b - 1;
        }
    }
    IntegerSet::from_unsorted(out)
}

/// `dst |= src << shift` over little-endian bit words, truncated to `dst`.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
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

fn sumset_sparse(set: &IntegerSet, h: u64, cap: u64) -> IntegerSet {
    let mut cur: BTreeSet<u64> = BTreeSet::from([0]);
    for _ in 0..h {
        let mut next = BTreeSet::new();
        for &s in &cur {
            for a in set.iter() {
                match s.checked_add(a) {
                    Some(v) if v <= cap => {
                        next.insert(v);
                    }
                    _ => break,
                }
            }
        }
        cur = next;
    }
    cur.into_iter().collect()
}

/// Exact `r_{A,h}(n)`.
pub fn rep_count(set: &IntegerSet, h: u64, n: u64) -> Result<u64> {
    check_order(h)?;
    match set.scaled_max(h)? {
        None => return Ok(0),
        Some(top) if n > top => return Ok(0),
        _ => {}
    }
    if n <= DENSE_LIMIT {
        let elems: Vec<u64> = set.iter().take_while(|&a| a <= n).collect();
        let row = count_table(&elems, h as usize, n)?;
        Ok(row[n as usize])
    } else {
        rep_count_sparse(set, h, n)
    }
}

fn rep_count_sparse(set: &IntegerSet, h: u64, n: u64) -> Result<u64> {
    struct Walk<'a> {
        elems: &'a [u64],
        memo: HashMap<(usize, u64, u64), u64>,
        n: u64,
    }
    impl Walk<'_> {
        // nondecreasing j-tuples from elems[idx..] summing to rem
        fn count(&mut self, idx: usize, j: u64, rem: u64) -> Result<u64> {
            if j == 0 {
                return Ok(u64::from(rem == 0));
            }
            let key = (idx, j, rem);
            if let Some(&c) = self.memo.get(&key) {
                return Ok(c);
            }
            let max = *self.elems.last().expect("nonempty");
            if (rem as u128) > (max as u128) * (j as u128) {
                return Ok(0);
            }
            let mut total = 0u64;
            for i in idx..self.elems.len() {
                let a = self.elems[i];
                if (a as u128) * (j as u128) > rem as u128 {
                    break;
                }
                let c = self.count(i, j - 1, rem - a)?;
                total = total
                    .checked_add(c)
                    .ok_or(Error::CountOverflow { n: self.n })?;
            }
            self.memo.insert(key, total);
            Ok(total)
        }
    }
    let elems: Vec<u64> = set.iter().take_while(|&a| a <= n).collect();
    if elems.is_empty() {
        return Ok(0);
    }
    Walk {
        elems: &elems,
        memo: HashMap::new(),
        n,
    }
    .count(0, h, n)
}

/// Independent oracle: exhaustive enumeration of nondecreasing h-tuples.
/// Exponential in `h`; intended for `|A| <= 12`, `h <= 5`.
pub fn rep_count_naive(set: &IntegerSet, h: u64, n: u64) -> u64 {
    fn go(elems: &[u64], start: usize, slots: u64, sum: u128, n: u128) -> u64 {
        if slots == 0 {
            return u64::from(sum == n);
        }
        (start..elems.len())
            .map(|i| go(elems, i, slots - 1, sum + elems[i] as u128, n))
            .sum()
    }
    go(set.elements(), 0, h, 0, n as u128)
}

/// `r(n)` for `n in 0..=hi` over `elems` (sorted, all `<= hi`).
pub(crate) fn count_table(elems: &[u64], h: usize, hi: u64) -> Result<Vec<u64>> {
    let len = hi as usize + 1;
    let mut rows: Vec<Vec<u64>> = vec![vec![0u64; len]; h + 1];
    rows[0][0] = 1;
    for &a in elems {
        let a = a as usize;
        if a >= len {
            break;
        }
        for j in 1..=h {
            let (lower, upper) = rows.split_at_mut(j);
            let prev = &lower[j - 1];
            let cur = &mut upper[0][a..];
            if let Some(bad) = add_shifted(cur, prev, a) {
                return Err(Error::CountOverflow { n: bad as u64 });
            }
        }
    }
    Ok(rows.pop().expect("h + 1 rows"))
}

/// `cur[i] += prev[i]` for `i` over `cur` (which starts at offset `offset` of
/// the full row). Returns the smallest overflowing index, if any.
fn add_shifted(cur: &mut [u64], prev: &[u64], offset: usize) -> Option<usize> {
    let body = |(c, i): (&mut [u64], usize)| -> Option<usize> {
        for (t, slot) in c.iter_mut().enumerate() {
            let src = prev[i + t];
            match slot.checked_add(src) {
                Some(v) => *slot = v,
                None => return Some(offset + i + t),
            }
        }
        None
    };
    if cur.len() >= PAR_MIN_SPAN {
        cur.par_chunks_mut(PAR_CHUNK)
            .enumerate()
            .map(|(ci, c)| (c, ci * PAR_CHUNK))
            .filter_map(body)
            .min()
    } else {
        body((cur, 0))
    }
}

/// Exact representation counts on a window of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepTable {
    pub base_set: IntegerSet,
    pub h: u64,
    /// Inclusive window after trimming; `None` when nothing is left.
    pub window: Option<(u64, u64)>,
    /// `counts[i]` is `r(window.0 + i)`.
    pub counts: Vec<u64>,
    pub exactness_bound: u64,
    /// The requested window reached past `h * max(A)` and was cut there.
    pub trimmed: bool,
}

impl RepTable {
    pub fn get(&self, n: u64) -> Option<u64> {
        let (lo, hi) = self.window?;
        (lo..=hi)
            .contains(&n)
            .then(|| self.counts[(n - lo) as usize])
    }

    pub fn is_exact_at(&self, n: u64) -> bool {
        n <= self.exactness_bound
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let lo = self.window.map_or(0, |w| w.0);
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (lo + i as u64, c))
    }

    pub fn total(&self) -> Result<u64> {
        self.counts.iter().try_fold(0u64, |acc, &c| {
            acc.checked_add(c)
                .ok_or(Error::Overflow { op: "table total" })
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# h={},size={},exactness_bound={}\nn,count\n",
            self.h,
            self.base_set.len(),
            self.exactness_bound
        );
        for (n, c) in self.iter() {
            out.push_str(&format!("{n},{c}\n"));
        }
        out
    }
}

/// Counts `r_{A,h}(n)` for every `n` in `[lo, hi]`.
///
/// The window is trimmed at `h * max(A)`. `prefix_bound` is the caller's
/// assertion that `set` holds every element `<= M` of the underlying set;
/// without it the set is treated as complete.
pub fn rep_table(
    set: &IntegerSet,
    h: u64,
    lo: u64,
    hi: u64,
    prefix_bound: Option<u64>,
) -> Result<RepTable> {
    check_order(h)?;
    if lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty window [{lo}, {hi}]"
        )));
    }
    let top = set.scaled_max(h)?;
    let exactness_bound = prefix_bound.unwrap_or(top.unwrap_or(0));
    let (eff_hi, trimmed) = match top {
        Some(t) if hi > t => (t, true),
        Some(_) => (hi, false),
        None => (0, true),
    };
    let empty = || RepTable {
        base_set: set.clone(),
        h,
        window: None,
        counts: Vec::new(),
        exactness_bound,
        trimmed,
    };
    if top.is_none() || lo > eff_hi {
        return Ok(empty());
    }
    if eff_hi > DENSE_LIMIT * 16 {
        return Err(Error::InvalidParameter(format!(
            "window end {eff_hi} too large for a dense table"
        )));
    }
    let elems: Vec<u64> = set.iter().take_while(|&a| a <= eff_hi).collect();
    let row = count_table(&elems, h as usize, eff_hi)?;
    Ok(RepTable {
        base_set: set.clone(),
        h,
        window: Some((lo, eff_hi)),
        counts: row[lo as usize..].to_vec(),
        exactness_bound,
        trimmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::with_threads;

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[0, 1]), 2, None).unwrap(), set(&[0, 1, 2]));
        assert_eq!(sumset(&set(&[1, 3]), 3, None).unwrap(), set(&[3, 5, 7, 9]));
        assert!(sumset(&IntegerSet::new(), 2, None).unwrap().is_empty());
        assert_eq!(sumset(&set(&[1, 3]), 3, Some(6)).unwrap(), set(&[3, 5]));
        assert!(matches!(
            sumset(&set(&[u64::MAX / 2 + 1]), 2, None),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn sparse_and_dense_sumsets_agree() {
        let a = set(&[0, 3, 10, 11, 64, 65, 130]);
        for h in 1..=4 {
            let cap = 130 * h;
            assert_eq!(sumset_dense(&a, h, cap), sumset_sparse(&a, h, cap), "h={h}");
        }
        let big = set(&[0, 1 << 40, 3 << 40]);
        let s = sumset(&big, 2, None).unwrap();
        assert_eq!(s, set(&[0, 1 << 40, 2 << 40, 3 << 40, 4 << 40, 6 << 40]));
    }

    #[test]
    fn rep_count_examples() {
        assert_eq!(rep_count(&set(&[1, 2, 3]), 2, 4).unwrap(), 2);
        assert_eq!(rep_count(&set(&[0]), 5, 0).unwrap(), 1);
        assert_eq!(rep_count(&set(&[0, 1, 2, 3]), 3, 6).unwrap(), 3);
        assert_eq!(rep_count(&set(&[1, 2, 3]), 2, 7).unwrap(), 0);
        assert_eq!(rep_count(&IntegerSet::new(), 2, 0).unwrap(), 0);
        assert!(matches!(
            rep_count(&set(&[1]), 0, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn naive_examples() {
        assert_eq!(rep_count_naive(&set(&[1, 2, 3]), 2, 4), 2);
        assert_eq!(rep_count_naive(&set(&[1, 2, 3]), 2, 7), 0);
        assert_eq!(rep_count_naive(&set(&[5]), 2, 10), 1);
    }

    #[test]
    fn sparse_path_matches_dense_on_dilated_set() {
        let a = set(&[0, 1, 2, 5, 7, 8]);
        let d = 1u64 << 30;
        let dilated: IntegerSet = a.iter().map(|x| x * d).collect();
        for h in 1..=4u64 {
            for n in 0..=8 * h {
                assert_eq!(
                    rep_count(&dilated, h, n * d).unwrap(),
                    rep_count(&a, h, n).unwrap(),
                    "h={h} n={n}"
                );
            }
        }
    }

    #[test]
    fn table_examples() {
        let t = rep_table(&set(&[1, 2, 3]), 2, 2, 6, None).unwrap();
        assert_eq!(t.window, Some((2, 6)));
        assert_eq!(t.counts, vec![1, 1, 2, 1, 1]);
        assert!(!t.trimmed);

        let t = rep_table(&set(&[0, 1, 2]), 2, 0, 4, None).unwrap();
        assert_eq!(t.counts, vec![1, 1, 2, 1, 1]);
        assert_eq!(t.total().unwrap(), 6);

        let t = rep_table(&IntegerSet::range_inclusive(0, 50), 2, 0, 100, Some(50)).unwrap();
        assert_eq!(t.exactness_bound, 50);
        assert_eq!(t.get(99), Some(1));
        assert!(!t.is_exact_at(99));
        assert!(t.is_exact_at(50));

        let t = rep_table(&set(&[1, 2]), 2, 0, 10, None).unwrap();
        assert!(t.trimmed);
        assert_eq!(t.window, Some((0, 4)));
        let t = rep_table(&set(&[1, 2]), 2, 5, 10, None).unwrap();
        assert_eq!(t.window, None);
        assert!(t.counts.is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        // C(10001, 10000) style blowup: {0..=60}, h = 40 overflows u64 near the middle.
        let a = IntegerSet::range_inclusive(0, 60);
        let err = rep_table(&a, 40, 0, 2400, None).unwrap_err();
        assert!(matches!(err, Error::CountOverflow { .. }));
    }

    #[test]
    fn parallel_table_matches_sequential() {
        let a: IntegerSet = (0..400u64).map(|i| i * i % 70_001).collect();
        let one = with_threads(1, || rep_table(&a, 2, 0, 140_000, None))
            .unwrap()
            .unwrap();
        let four = with_threads(4, || rep_table(&a, 2, 0, 140_000, None))
            .unwrap()
            .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn csv_export() {
        let t = rep_table(&set(&[1, 2, 3]), 2, 2, 4, None).unwrap();
        assert_eq!(
            t.to_csv(),
            "# h=2,size=3,exactness_bound=6\nn,count\n2,1\n3,1\n4,2\n"
        );
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "complete".parse::<Exactness>().unwrap(),
            Exactness::Complete
        );
        assert_eq!(
            "prefix:50".parse::<Exactness>().unwrap(),
            Exactness::Prefix(50)
        );
        assert!("prefix:".parse::<Exactness>().is_err());
        assert!("sometimes".parse::<Exactness>().is_err());
        assert_eq!(Exactness::Prefix(7).to_string(), "prefix:7");
    }
}
