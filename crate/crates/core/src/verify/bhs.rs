use serde::Serialize;

use super::exact_table;
use crate::error::Result;
use crate::intset::IntegerSet;
use crate::repcount::{check_order, Exactness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BhsCheck {
    pub h: u64,
    pub s: u64,
    pub mode: Exactness,
    /// Last `n` inspected; `None` when there was nothing to inspect.
    pub window_hi: Option<u64>,
    pub holds: bool,
    /// `(n, r(n))` with `r(n) > s`, increasing in `n`.
    pub violations: Vec<(u64, u64)>,
}

/// `r_{A,h}(n) <= s` for every `n` in `hA` inside the exactness window.
pub fn is_bhs(set: &IntegerSet, h: u64, s: u64, mode: Exactness) -> Result<BhsCheck> {
    check_order(h)?;
    let (violations, window_hi) = match exact_table(set, h, mode)? {
        Some((table, _)) => (
            table.iter().filter(|&(_, c)| c > s).collect::<Vec<_>>(),
            table.window.map(|w| w.1),
        ),
        None => (Vec::new(), None),
    };
    Ok(BhsCheck {
        h,
        s,
        mode,
        window_hi,
        holds: violations.is_empty(),
        violations,
    })
}

pub fn is_sidon(set: &IntegerSet) -> Result<BhsCheck> {
    is_bhs(set, 2, 1, Exactness::Complete)
}
