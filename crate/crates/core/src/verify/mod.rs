//! Premise checks, proof certificates and counting-function bounds for the
//! many-representations growth theorems, evaluated on finite windows.
//!
//! Every verdict here is relative to an exactness window (see
//! [`Exactness`]); nothing is claimed about counts past it.

mod bhs;
mod bound;
mod premise;
mod theorem;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{checked_mul, Error, Result};
use crate::intset::IntegerSet;
use crate::repcount::{rep_table, Exactness, RepTable};

pub use bhs::{is_bhs, is_sidon, BhsCheck};
pub use bound::{
    bound_value, power_checks, verify_counting_bound, BoundPoint, BoundStatus, CountingBoundCheck,
    PowerCheck, BOUND_SLACK,
};
pub use premise::{check_premise, compute_k0, min_threshold, PremiseReport, K0};
pub use theorem::{
    block_growth_check, run_theorem, BlockGrowth, BlockRow, BlockStatus, FailureSite,
    TheoremReport, Verdict,
};
pub use witness::{distinct_tops, witness_certificate, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// `r_{A,h}(n) >= 2` eventually implies `A(x) > log x / log h - k0`.
    T1,
    /// `r_{A,2}(n) >= ell` eventually implies
    /// `A(x) > (ell-1) log x / log 2 - (ell-1)(k0+1)`.
    T2,
    /// For a `B_{h-1,s}` set, `r_{A,h}(n) >= ell` eventually implies
    /// `A(x) > (ell-1) log x / (s log h) - (ell-1)(k0+1)/s`.
    T3,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremId::T1 => "T1",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
        })
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(TheoremId::T1),
            "T2" => Ok(TheoremId::T2),
            "T3" => Ok(TheoremId::T3),
            _ => Err(Error::InvalidParameter(format!("unknown theorem id {s:?}"))),
        }
    }
}

/// Theorem selection plus its parameters. `s` is only meaningful for T3 and
/// is kept at 1 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub id: TheoremId,
    pub h: u64,
    pub ell: u64,
    pub s: u64,
}

impl TheoremParams {
    pub fn t1(h: u64) -> Self {
        Self {
            id: TheoremId::T1,
            h,
            ell: 2,
            s: 1,
        }
    }

    pub fn t2(ell: u64) -> Self {
        Self {
            id: TheoremId::T2,
            h: 2,
            ell,
            s: 1,
        }
    }

    pub fn t3(h: u64, ell: u64, s: u64) -> Self {
        Self {
            id: TheoremId::T3,
            h,
            ell,
            s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.h < 2 {
            return bad(format!("h must be >= 2, got {}", self.h));
        }
        if self.ell < 2 {
            return bad(format!("ell must be >= 2, got {}", self.ell));
        }
        if self.s < 1 {
            return bad("s must be >= 1".into());
        }
        match self.id {
            TheoremId::T1 if self.ell != 2 => bad(format!("T1 requires ell = 2, got {}", self.ell)),
            TheoremId::T1 | TheoremId::T2 if self.s != 1 => bad(format!(
                "{} takes no s parameter (got s = {})",
                self.id, self.s
            )),
            TheoremId::T2 if self.h != 2 => bad(format!("T2 requires h = 2, got {}", self.h)),
            _ => Ok(()),
        }
    }

    /// `w0` as fixed at the end of each growth argument.
    pub fn w0(&self, k0: u32) -> Result<W0> {
        let k0 = u64::from(k0);
        match self.id {
            TheoremId::T1 => Ok(W0::new(k0, 1)),
            TheoremId::T2 => Ok(W0::new(checked_mul(self.ell - 1, k0 + 1, "w0")?, 1)),
            TheoremId::T3 => Ok(W0::new(checked_mul(self.ell - 1, k0 + 1, "w0")?, self.s)),
        }
    }

    /// Lower bound on `|A_k|` for `k >= k0 + 1`.
    pub fn block_requirement(&self) -> u64 {
        match self.id {
            TheoremId::T1 => 1,
            TheoremId::T2 => self.ell - 1,
            TheoremId::T3 => (self.ell - 1).div_ceil(self.s),
        }
    }
}

/// Nonnegative rational `numer / denom`, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0 {
    pub numer: u64,
    pub denom: u64,
}

impl W0 {
    pub fn new(numer: u64, denom: u64) -> Self {
        let g = num_integer::gcd(numer, denom).max(1);
        Self {
            numer: numer / g,
            denom: denom / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for W0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// Table of `r_{A,h}` over `[0, min(bound, h max A)]` where the counts are
/// exact, with the exactness bound itself. `None` for an empty set in
/// complete mode.
pub(crate) fn exact_table(
    set: &IntegerSet,
    h: u64,
    mode: Exactness,
) -> Result<Option<(RepTable, u64)>> {
    let Some(bound) = mode.bound(set, h)? else {
        return Ok(None);
    };
    let prefix = match mode {
        Exactness::Prefix(m) => Some(m),
        Exactness::Complete => None,
    };
    let table = rep_table(set, h, 0, bound, prefix)?;
    Ok(Some((table, bound)))
}

/// Serializes floats rounded to 12 significant digits.
pub(crate) fn sig12<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*v))
}

pub fn round_sig12(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w0_formulas() {
        assert_eq!(TheoremParams::t1(2).w0(1).unwrap(), W0::new(1, 1));
        assert_eq!(TheoremParams::t2(3).w0(2).unwrap(), W0::new(6, 1));
        let w = TheoremParams::t3(3, 4, 2).w0(1).unwrap();
        assert_eq!((w.numer, w.denom), (3, 1));
        let w = TheoremParams::t3(3, 4, 4).w0(0).unwrap();
        assert_eq!((w.numer, w.denom), (3, 4));
        assert_eq!(w.to_string(), "3/4");
    }

    #[test]
    fn parameter_consistency() {
        assert!(TheoremParams {
            id: TheoremId::T1,
            h: 2,
            ell: 3,
            s: 1
        }
        .validate()
        .is_err());
        assert!(TheoremParams {
            id: TheoremId::T2,
            h: 3,
            ell: 3,
            s: 1
        }
        .validate()
        .is_err());
        assert!(TheoremParams::t3(3, 4, 0).validate().is_err());
        assert!(TheoremParams::t3(1, 4, 1).validate().is_err());
        assert!(TheoremParams::t3(3, 4, 2).validate().is_ok());
        assert_eq!(TheoremParams::t3(3, 4, 2).block_requirement(), 2);
        assert_eq!(TheoremParams::t3(3, 5, 2).block_requirement(), 2);
        assert_eq!(TheoremParams::t2(3).block_requirement(), 2);
    }

    #[test]
    fn sig12_rounding() {
        assert_eq!(round_sig12(2.906890595608518), 2.90689059561);
        assert_eq!(round_sig12(3.0), 3.0);
        assert_eq!(round_sig12(-0.000123456789012345), -0.000123456789012);
    }
}
