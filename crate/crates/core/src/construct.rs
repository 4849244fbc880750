//! Greedy repair construction of finite sets where every certified sum in
//! `2A` has at least `ell` representations, and the density report that
//! compares them to the proven lower bounds and the `(log x)^2` regime.
//!
//! Sums are processed in increasing `n`. A deficient `n` is repaired by
//! adding partners `e = n - a` with `a` in `A`, `a <= n/2`. A partner is
//! admissible only if every new sum `e + a' < n` it creates is already in
//! `2A` (and hence already repaired), so processed sums never regress.
//! Later repairs add elements `> T/2`, which fixes the watermark at
//! `W = floor(T/2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intset::IntegerSet;
use crate::repcount::Exactness;
use crate::verify::{bound_value, check_premise, compute_k0, min_threshold, sig12, TheoremParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Smallest admissible new partner.
    SmallestNew,
    /// Largest admissible new partner.
    LargestNew,
    /// Admissible partner closest to `3n/4`, ties to the smaller.
    Balanced,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SmallestNew => "smallest-new",
            Strategy::LargestNew => "largest-new",
            Strategy::Balanced => "balanced",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smallest-new" => Ok(Strategy::SmallestNew),
            "largest-new" => Ok(Strategy::LargestNew),
            "balanced" => Ok(Strategy::Balanced),
            _ => Err(Error::InvalidParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Addition {
    pub element: u64,
    pub trigger: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairFailure {
    pub n: u64,
    /// Representations reached before running out of partners; the partial
    /// additions stay in the set.
    pub reached: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    /// Least threshold for which the premise holds on `[n0, W]`.
    pub n0: u64,
    pub watermark: u64,
    pub checked_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub target_ell: u64,
    pub horizon: u64,
    pub strategy: Strategy,
    pub seed_set: IntegerSet,
    pub additions: Vec<Addition>,
    pub failures: Vec<RepairFailure>,
    pub certified_watermark: u64,
    pub certification: Option<Certification>,
    pub final_set: IntegerSet,
    pub density_curve: Vec<(u64, u64)>,
}

impl ConstructionLog {
    pub fn is_certified(&self) -> bool {
        self.certification.is_some()
    }

    pub fn mode(&self) -> Exactness {
        Exactness::Prefix(self.certified_watermark)
    }
}

struct State {
    member: Vec<bool>,
    elems: Vec<u64>,
    reps: Vec<u64>,
    horizon: u64,
}

impl State {
    fn new(seed: &IntegerSet, horizon: u64) -> Self {
        let len = horizon as usize + 1;
        let mut st = State {
            member: vec![false; len],
            elems: Vec::new(),
            reps: vec![0; len],
            horizon,
        };
        for a in seed.iter() {
            st.insert(a);
        }
        st
    }

    fn contains(&self, v: u64) -> bool {
        self.member.get(v as usize).copied().unwrap_or(false)
    }

    fn insert(&mut self, e: u64) {
        let pos = self.elems.partition_point(|&a| a < e);
        self.elems.insert(pos, e);
        self.member[e as usize] = true;
        self.bump(e);
    }

    /// Counts the new pairs `(a, e)` for every `a` in the set, `e` included.
    fn bump(&mut self, e: u64) {
        for &a in &self.elems {
            let m = e + a;
            if m > self.horizon {
                break;
            }
            self.reps[m as usize] += 1;
        }
    }

    /// Every new sum `e + a' < n` must already lie in `2A`.
    fn admissible(&self, e: u64, n: u64) -> bool {
        !self.contains(e)
            && self
                .elems
                .iter()
                .take_while(|&&a| a + e < n)
                .all(|&a| self.reps[(a + e) as usize] > 0)
    }

    fn pick_partner(&self, n: u64, strategy: Strategy) -> Option<u64> {
        let half = n / 2;
        let low = &self.elems[..self.elems.partition_point(|&a| a <= half)];
        // small a gives large e
        match strategy {
            Strategy::LargestNew => low.iter().map(|&a| n - a).find(|&e| self.admissible(e, n)),
            Strategy::SmallestNew => low
                .iter()
                .rev()
                .map(|&a| n - a)
                .find(|&e| self.admissible(e, n)),
            Strategy::Balanced => {
                let mid = 3 * n / 4;
                let mut order: Vec<u64> = low.iter().map(|&a| n - a).collect();
                order.sort_unstable_by_key(|&e| (e.abs_diff(mid), e));
                order.into_iter().find(|&e| self.admissible(e, n))
            }
        }
    }
}

/// Greedy repair construction for `h = 2` up to the horizon `T`.
pub fn greedy_repair(
    ell: u64,
    horizon: u64,
    strategy: Strategy,
    seed: &IntegerSet,
) -> Result<ConstructionLog> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!(
            "ell must be >= 2, got {ell}"
        )));
    }
    let seed_max = seed.max().ok_or(Error::EmptySet)?;
    let need = seed.scaled_max(2)?.unwrap_or(0);
    if horizon < need {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} below 2 * max(seed) = {need}"
        )));
    }
    if horizon > 1 << 32 {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} too large"
        )));
    }
    debug_assert!(seed_max <= horizon);

    let mut st = State::new(seed, horizon);
    let mut additions = Vec::new();
    let mut failures = Vec::new();

    for n in 0..=horizon {
        let r = st.reps[n as usize];
        if r == 0 || r >= ell {
            continue;
        }
        while st.reps[n as usize] < ell {
            match st.pick_partner(n, strategy) {
                Some(element) => {
                    st.insert(element);
                    additions.push(Addition {
                        element,
                        trigger: n,
                    });
                }
                None => {
                    failures.push(RepairFailure {
                        n,
                        reached: st.reps[n as usize],
                    });
                    break;
                }
            }
        }
    }

    let final_set = IntegerSet::from_unsorted(st.elems);
    let watermark = horizon / 2;
    let mode = Exactness::Prefix(watermark);
    let certification = match min_threshold(&final_set, 2, ell, mode)? {
        Some(n0) => {
            let premise = check_premise(&final_set, 2, ell, n0, mode)?;
            let usable =
                premise.holds && premise.checked_count > 0 && compute_k0(&final_set, 2, n0).is_ok();
            usable.then_some(Certification {
                n0,
                watermark,
                checked_count: premise.checked_count,
            })
        }
        None => None,
    };
    let density_curve = checkpoints(horizon)
        .into_iter()
        .map(|x| (x, final_set.counting(x)))
        .collect();

    Ok(ConstructionLog {
        target_ell: ell,
        horizon,
        strategy,
        seed_set: seed.clone(),
        additions,
        failures,
        certified_watermark: watermark,
        certification,
        final_set,
        density_curve,
    })
}

/// `2, 4, 8, ... <= T`, then `T` itself.
fn checkpoints(horizon: u64) -> Vec<u64> {
    let mut xs = Vec::new();
    let mut x = 2u64;
    while x <= horizon {
        xs.push(x);
        x *= 2;
    }
    if xs.last() != Some(&horizon) && horizon >= 2 {
        xs.push(horizon);
    }
    xs
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub x: u64,
    pub count: u64,
    #[serde(serialize_with = "sig12")]
    pub lower_bound: f64,
    #[serde(serialize_with = "sig12")]
    pub log_sq_ref: f64,
    #[serde(serialize_with = "sig12")]
    pub ratio: f64,
    pub above_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub ell: u64,
    pub k0: u32,
    pub bound_theorem: String,
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,Ax,lower_bound,log_sq_ref\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.12},{:.12}\n",
                r.x, r.count, r.lower_bound, r.log_sq_ref
            ));
        }
        out
    }

    pub fn all_above_bound(&self) -> bool {
        self.rows.iter().all(|r| r.above_bound)
    }
}

/// `(x, A(x), lower bound, (log x)^2)` at the geometric checkpoints of a
/// certified log. The lower bound is the `h = 2` growth bound for the log's
/// `ell` (T1 for `ell = 2`, T2 otherwise) with `k0` from the certified
/// threshold.
pub fn density_report(log: &ConstructionLog) -> Result<DensityReport> {
    let cert = log.certification.ok_or(Error::Uncertified)?;
    let k0 = compute_k0(&log.final_set, 2, cert.n0)?.k0;
    let (params, name) = if log.target_ell == 2 {
        (TheoremParams::t1(2), "T1")
    } else {
        (TheoremParams::t2(log.target_ell), "T2")
    };
    let mut rows = Vec::new();
    for &(x, count) in &log.density_curve {
        if x < params.h {
            continue;
        }
        let lower_bound = bound_value(&params, k0, x)?;
        let ln = (x as f64).ln();
        let log_sq_ref = ln * ln;
        rows.push(DensityRow {
            x,
            count,
            lower_bound,
            log_sq_ref,
            ratio: count as f64 / log_sq_ref,
            above_bound: count as f64 > lower_bound,
        });
    }
    Ok(DensityReport {
        ell: log.target_ell,
        k0,
        bound_theorem: name.to_string(),
        rows,
    })
}
