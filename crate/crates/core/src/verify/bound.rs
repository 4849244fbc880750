use serde::Serialize;

use super::{sig12, TheoremId, TheoremParams};
use crate::error::{Error, Result};
use crate::intset::IntegerSet;

/// Absolute slack for `A(x) > bound`: the left side is an integer, so
/// anything this close is reported as marginal rather than failed.
pub const BOUND_SLACK: f64 = 1e-9;

/// Right-hand side of the counting-function lower bound at `x >= h`.
pub fn bound_value(params: &TheoremParams, k0: u32, x: u64) -> Result<f64> {
    params.validate()?;
    if x < params.h {
        return Err(Error::InvalidParameter(format!(
            "bound is defined for x >= h = {}, got x = {x}",
            params.h
        )));
    }
    let log_ratio = (x as f64).ln() / (params.h as f64).ln();
    let w0 = params.w0(k0)?.value();
    let coeff = match params.id {
        TheoremId::T1 => 1.0,
        TheoremId::T2 => (params.ell - 1) as f64,
        TheoremId::T3 => (params.ell - 1) as f64 / params.s as f64,
    };
    Ok(coeff * log_ratio - w0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Pass,
    Marginal,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundPoint {
    pub x: u64,
    pub count: u64,
    #[serde(serialize_with = "sig12")]
    pub bound: f64,
    #[serde(serialize_with = "sig12")]
    pub margin: f64,
    pub status: BoundStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingBoundCheck {
    pub x_max: u64,
    pub points: Vec<BoundPoint>,
    /// No point failed (marginal points do not fail the check).
    pub pass: bool,
}

impl CountingBoundCheck {
    pub fn first_failure(&self) -> Option<&BoundPoint> {
        self.points.iter().find(|p| p.status == BoundStatus::Fail)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,Ax,bound\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{:.12}\n", p.x, p.count, p.bound));
        }
        out
    }
}

pub(crate) fn classify(count: u64, bound: f64) -> (f64, BoundStatus) {
    let margin = count as f64 - bound;
    let status = if margin > BOUND_SLACK {
        BoundStatus::Pass
    } else if margin >= -BOUND_SLACK {
        BoundStatus::Marginal
    } else {
        BoundStatus::Fail
    };
    (margin, status)
}

/// Checks `A(x) > bound(x)` for every integer `x` in `[h, x_max]`.
///
/// `A(x)` is constant between consecutive elements while the bound grows,
/// so only `x = a - 1` for `a` in the set and `x = x_max` are evaluated.
pub fn verify_counting_bound(
    set: &IntegerSet,
    params: &TheoremParams,
    k0: u32,
    x_max: u64,
) -> Result<CountingBoundCheck> {
    params.validate()?;
    if x_max < params.h {
        return Err(Error::InvalidParameter(format!(
            "x_max = {x_max} is below h = {}",
            params.h
        )));
    }
    let mut xs: Vec<u64> = set
        .iter()
        .filter(|&a| a >= 1)
        .map(|a| a - 1)
        .filter(|&x| x >= params.h && x < x_max)
        .collect();
    xs.push(x_max);

    let mut points = Vec::with_capacity(xs.len());
    for x in xs {
        let count = set.counting(x);
        let bound = bound_value(params, k0, x)?;
        let (margin, status) = classify(count, bound);
        points.push(BoundPoint {
            x,
            count,
            bound,
            margin,
            status,
        });
    }
    let pass = points.iter().all(|p| p.status != BoundStatus::Fail);
    Ok(CountingBoundCheck {
        x_max,
        points,
        pass,
    })
}

/// `A(h^t) >= required` at an exact power, compared in integers as
/// `denom * A(h^t) >= numer`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    pub t: u32,
    pub power: u64,
    pub count: u64,
    pub required_numer: i64,
    pub required_denom: u64,
    pub holds: bool,
}

/// Integer inequality at each power `h^t <= x_max`:
/// T1 `A(h^t) >= t - (k0 - 1)`, T2 `A(2^t) >= (ell-1)(t - k0)`,
/// T3 `A(h^t) >= (ell-1)(t - k0)/s`.
pub fn power_checks(
    set: &IntegerSet,
    params: &TheoremParams,
    k0: u32,
    x_max: u64,
) -> Result<Vec<PowerCheck>> {
    params.validate()?;
    let overflow = Error::Overflow { op: "power check" };
    let mut out = Vec::new();
    let mut t = 1u32;
    let mut power = params.h;
    while power <= x_max {
        let dt = i64::from(t) - i64::from(k0);
        let ell1 = i64::try_from(params.ell - 1).map_err(|_| overflow.clone())?;
        let (numer, denom) = match params.id {
            TheoremId::T1 => (dt + 1, 1),
            TheoremId::T2 => (ell1.checked_mul(dt).ok_or(overflow.clone())?, 1),
            TheoremId::T3 => (ell1.checked_mul(dt).ok_or(overflow.clone())?, params.s),
        };
        let count = set.counting(power);
        let holds = (denom as i128) * (count as i128) >= numer as i128;
        out.push(PowerCheck {
            t,
            power,
            count,
            required_numer: numer,
            required_denom: denom,
            holds,
        });
        match power.checked_mul(params.h) {
            Some(p) => power = p,
            None => break,
        }
        t += 1;
    }
    Ok(out)
}
