//! Canonical finite sets of nonnegative integers, the counting function and
//! the h-adic block decomposition `A_k = A ∩ [h^(k-1), h^k)`.

use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{checked_mul, Error, Result};

/// A finite set of nonnegative integers, stored strictly increasing.
///
/// Usually this is a finite prefix of some (possibly infinite) set; how far
/// the prefix can be trusted is decided by the caller through
/// [`Exactness`](crate::Exactness), not by the set itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntegerSet {
    elements: Vec<u64>,
}

impl IntegerSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the canonical set from signed input, rejecting negatives.
    pub fn from_values(values: &[i64]) -> Result<Self> {
        let mut elements = Vec::with_capacity(values.len());
        for &v in values {
            if v < 0 {
                return Err(Error::NegativeElement(v));
            }
            elements.push(v as u64);
        }
        Ok(Self::from_unsorted(elements))
    }

    pub fn from_unsorted(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    /// `{lo, lo+1, ..., hi}`.
    pub fn range_inclusive(lo: u64, hi: u64) -> Self {
        Self {
            elements: (lo..=hi).collect(),
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.elements.first() == Some(&0)
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    /// `h * max(A)`, failing loudly on overflow. `None` for the empty set.
    pub fn scaled_max(&self, h: u64) -> Result<Option<u64>> {
        self.max()
            .map(|m| checked_mul(h, m, "h * max(A)"))
            .transpose()
    }

    /// Elements `<= bound`.
    pub fn truncated(&self, bound: u64) -> IntegerSet {
        let end = self.elements.partition_point(|&a| a <= bound);
        Self {
            elements: self.elements[..end].to_vec(),
        }
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    /// Counting function: number of `a` in the set with `1 <= a <= x`.
    pub fn counting(&self, x: u64) -> u64 {
        let upto = self.elements.partition_point(|&a| a <= x);
        let zero = usize::from(self.contains_zero() && upto > 0);
        (upto - zero) as u64
    }

    /// Reads a set file: one nonnegative decimal integer per line, `#`
    /// comment lines and blank lines skipped.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(rest) = t.strip_prefix('-') {
                if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("negative element {t}"),
                    });
                }
            }
            let v = t.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("cannot parse {t:?} as a nonnegative integer: {e}"),
            })?;
            values.push(v);
        }
        Ok(Self::from_unsorted(values))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::parse(std::io::BufReader::new(file))
    }

    /// Writes the set in the set-file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for a in self.iter() {
            out.push_str(&a.to_string());
            out.push('\n');
        }
        out
    }
}

impl From<Vec<u64>> for IntegerSet {
    fn from(v: Vec<u64>) -> Self {
        Self::from_unsorted(v)
    }
}

impl From<IntegerSet> for Vec<u64> {
    fn from(s: IntegerSet) -> Self {
        s.elements
    }
}

impl FromIterator<u64> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn check_base(h: u64) -> Result<()> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!(
            "block base h must be >= 2, got {h}"
        )));
    }
    Ok(())
}

/// `h^k` by repeated multiplication.
pub fn power(h: u64, k: u32) -> Result<u64> {
    let mut p = 1u64;
    for _ in 0..k {
        p = checked_mul(p, h, "h^k")?;
    }
    Ok(p)
}

/// The unique `k >= 1` with `h^(k-1) <= a < h^k`.
pub fn block_of(a: u64, h: u64) -> Result<u32> {
    check_base(h)?;
    if a == 0 {
        return Err(Error::ZeroHasNoBlock);
    }
    let mut k = 1u32;
    let mut upper = h;
    while a >= upper {
        k += 1;
        match upper.checked_mul(h) {
            Some(next) => upper = next,
            // h^k exceeds u64::MAX >= a
            None => break,
        }
    }
    Ok(k)
}

/// Half-open interval `[h^(k-1), h^k)`; the upper end is `None` when it
/// does not fit in 64 bits.
pub fn block_interval(k: u32, h: u64) -> Result<(u64, Option<u64>)> {
    check_base(h)?;
    if k == 0 {
        return Err(Error::InvalidParameter("block index k must be >= 1".into()));
    }
    let lo = power(h, k - 1)?;
    Ok((lo, lo.checked_mul(h)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub k: u32,
    pub members: IntegerSet,
}

impl Block {
    /// `a_k* = max(A_k)`; blocks are never stored empty.
    pub fn top(&self) -> u64 {
        self.members.max().expect("stored blocks are nonempty")
    }
}

/// Partition of `A \ {0}` into the nonempty blocks `A_k`, increasing in `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub base: u64,
    pub blocks: Vec<Block>,
    pub zero_excluded: bool,
}

impl BlockDecomposition {
    pub fn get(&self, k: u32) -> Option<&Block> {
        self.blocks
            .binary_search_by_key(&k, |b| b.k)
            .ok()
            .map(|i| &self.blocks[i])
    }

    /// `|A_k|`, zero for absent blocks.
    pub fn size(&self, k: u32) -> usize {
        self.get(k).map_or(0, |b| b.members.len())
    }

    pub fn total_members(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }
}

pub fn blocks(set: &IntegerSet, h: u64) -> Result<BlockDecomposition> {
    check_base(h)?;
    let mut out: Vec<Block> = Vec::new();
    let mut current: Option<(u32, Vec<u64>)> = None;
    for a in set.iter().filter(|&a| a > 0) {
        let k = block_of(a, h)?;
        match &mut current {
            Some((ck, members)) if *ck == k => members.push(a),
            _ => {
                if let Some((ck, members)) = current.take() {
                    out.push(Block {
                        k: ck,
                        members: IntegerSet { elements: members },
                    });
                }
                current = Some((k, vec![a]));
            }
        }
    }
    if let Some((k, members)) = current {
        out.push(Block {
            k,
            members: IntegerSet { elements: members },
        });
    }
    Ok(BlockDecomposition {
        base: h,
        blocks: out,
        zero_excluded: set.contains_zero(),
    })
}
