use serde::Serialize;

use super::exact_table;
use crate::error::{Error, Result};
use crate::intset::{block_of, check_base, IntegerSet};
use crate::repcount::{check_order, Exactness};

/// Outcome of checking `r_{A,h}(n) >= ell` for all `n` in `hA` with
/// `n0 <= n <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PremiseReport {
    pub h: u64,
    pub ell: u64,
    pub n0: u64,
    /// `(n0, exactness bound)`.
    pub window: (u64, u64),
    pub holds: bool,
    /// `(n, r(n))` with `1 <= r(n) < ell`.
    pub violations: Vec<(u64, u64)>,
    /// Number of sums in `hA` that were inspected.
    pub checked_count: u64,
}

pub fn check_premise(
    set: &IntegerSet,
    h: u64,
    ell: u64,
    n0: u64,
    mode: Exactness,
) -> Result<PremiseReport> {
    check_order(h)?;
    let (table, bound) = exact_table(set, h, mode)?.ok_or(Error::EmptySet)?;
    if n0 > bound {
        return Err(Error::WindowEmpty { n0, bound });
    }
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for (n, c) in table.iter().filter(|&(n, c)| n >= n0 && c > 0) {
        checked += 1;
        if c < ell {
            violations.push((n, c));
        }
    }
    Ok(PremiseReport {
        h,
        ell,
        n0,
        window: (n0, bound),
        holds: violations.is_empty(),
        violations,
        checked_count: checked,
    })
}

/// Smallest `n0` for which [`check_premise`] holds, or `None` when even the
/// top of the exactness window is deficient.
pub fn min_threshold(set: &IntegerSet, h: u64, ell: u64, mode: Exactness) -> Result<Option<u64>> {
    check_order(h)?;
    let Some((table, bound)) = exact_table(set, h, mode)? else {
        return Ok(None);
    };
    let last_bad = table
        .iter()
        .filter(|&(_, c)| c > 0 && c < ell)
        .map(|(n, _)| n)
        .last();
    Ok(match last_bad {
        None => Some(0),
        Some(n) if n >= bound => None,
        Some(n) => Some(n + 1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct K0 {
    pub a0: u64,
    pub k0: u32,
}

/// Block index of the least positive `a0` in the set with `h * a0 >= n0`.
pub fn compute_k0(set: &IntegerSet, h: u64, n0: u64) -> Result<K0> {
    check_base(h)?;
    let a0 = set
        .iter()
        .filter(|&a| a > 0)
        .find(|&a| a.checked_mul(h).is_none_or(|v| v >= n0))
        .ok_or(Error::PrefixTooShort { n0 })?;
    Ok(K0 {
        a0,
        k0: block_of(a0, h)?,
    })
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
    fn premise_examples() {
        let p = check_premise(&range50(), 2, 2, 2, Exactness::Prefix(50)).unwrap();
        assert!(p.holds);
        assert_eq!(p.window, (2, 50));
        assert_eq!(p.checked_count, 49);

        let p = check_premise(&range50(), 2, 2, 2, Exactness::Complete).unwrap();
        assert!(!p.holds);
        assert!(p.violations.contains(&(99, 1)));
        assert!(p.violations.contains(&(100, 1)));

        let p = check_premise(&set(&[0, 1, 3, 7]), 2, 2, 0, Exactness::Complete).unwrap();
        assert!(!p.holds);
        assert_eq!(p.violations.len(), 10);
        assert_eq!(p.checked_count, 10);
    }

    #[test]
    fn empty_window_is_an_error() {
        let err = check_premise(&range50(), 2, 2, 51, Exactness::Prefix(50)).unwrap_err();
        assert_eq!(err, Error::WindowEmpty { n0: 51, bound: 50 });
        assert_eq!(
            err.to_string(),
            "window empty: n0 = 51 exceeds exactness bound 50"
        );
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(
            min_threshold(&range50(), 2, 2, Exactness::Prefix(50)).unwrap(),
            Some(2)
        );
        assert_eq!(
            min_threshold(&range50(), 2, 3, Exactness::Prefix(50)).unwrap(),
            Some(4)
        );
        assert_eq!(
            min_threshold(&set(&[0, 1, 3, 7]), 2, 2, Exactness::Complete).unwrap(),
            None
        );
        assert_eq!(
            min_threshold(&range50(), 2, 2, Exactness::Complete).unwrap(),
            None
        );
    }

    #[test]
    fn threshold_is_minimal() {
        for ell in 2..6 {
            let mode = Exactness::Prefix(50);
            let n0 = min_threshold(&range50(), 2, ell, mode).unwrap().unwrap();
            assert!(check_premise(&range50(), 2, ell, n0, mode).unwrap().holds);
            if n0 > 0 {
                assert!(
                    !check_premise(&range50(), 2, ell, n0 - 1, mode)
                        .unwrap()
                        .holds
                );
            }
        }
    }

    #[test]
    fn k0_examples() {
        assert_eq!(compute_k0(&range50(), 2, 10).unwrap(), K0 { a0: 5, k0: 3 });
        assert_eq!(compute_k0(&set(&[1]), 2, 2).unwrap(), K0 { a0: 1, k0: 1 });
        assert_eq!(
            compute_k0(&set(&[0]), 2, 1),
            Err(Error::PrefixTooShort { n0: 1 })
        );
        // zero is never a0, even when h * 0 >= n0
        assert_eq!(
            compute_k0(&set(&[0, 4]), 2, 0).unwrap(),
            K0 { a0: 4, k0: 3 }
        );
    }
}
