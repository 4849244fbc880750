use serde::Serialize;

use super::{
    check_premise, compute_k0, distinct_tops, is_bhs, min_threshold, power_checks,
    verify_counting_bound, witness_certificate, BhsCheck, CountingBoundCheck, PowerCheck,
    PremiseReport, TheoremId, TheoremParams, Witness, W0,
};
use crate::error::{checked_mul, Error, Result};
use crate::intset::{blocks, IntegerSet};
use crate::repcount::{rep_count, Exactness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    /// Size bound met and the propagation certificate validated.
    Pass,
    /// Size bound met; `h * a_k*` lies past the exactness window so the
    /// next block is unverifiable at this prefix.
    PassWindowEdge,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub k: u32,
    pub required: u64,
    pub actual: u64,
    pub a_star: Option<u64>,
    /// `r_{A,h}(h a_k*)` when it lies in the window.
    pub target_reps: Option<u64>,
    pub witness: Option<Witness>,
    /// Distinct top elements of non-diagonal representations of `h a_k*`.
    pub distinct_tops: Option<Vec<u64>>,
    pub tops_required: u64,
    pub status: BlockStatus,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockGrowth {
    /// Premise failed, nothing checked.
    pub vacuous: bool,
    pub k0: u32,
    /// Largest `k` whose `h a_k*` lies in the exactness window.
    pub k_max: Option<u32>,
    pub rows: Vec<BlockRow>,
    pub pass: bool,
}

/// Walks `k = k0, k0+1, ...` checking `|A_k|` against the theorem's block
/// bound and certifying each step `A_k -> A_{k+1}` with a witness of
/// `h a_k*`, until `h a_k*` leaves the exactness window.
pub fn block_growth_check(
    set: &IntegerSet,
    params: &TheoremParams,
    k0: u32,
    mode: Exactness,
    premise: &PremiseReport,
) -> Result<BlockGrowth> {
    params.validate()?;
    if !premise.holds {
        return Ok(BlockGrowth {
            vacuous: true,
            k0,
            k_max: None,
            rows: Vec::new(),
            pass: false,
        });
    }
    let h = params.h;
    let bound = mode.bound(set, h)?.ok_or(Error::EmptySet)?;
    let decomposition = blocks(set, h)?;
    let tops_required = params.block_requirement();

    let mut rows = Vec::new();
    let mut k_max = None;
    let mut pass = true;
    let mut k = k0;
    loop {
        let required = if k == k0 {
            1
        } else {
            params.block_requirement()
        };
        let block = decomposition.get(k);
        let actual = block.map_or(0, |b| b.members.len() as u64);
        let a_star = block.map(|b| b.top());
        let mut row = BlockRow {
            k,
            required,
            actual,
            a_star,
            target_reps: None,
            witness: None,
            distinct_tops: None,
            tops_required,
            status: BlockStatus::Fail,
            note: None,
        };
        if actual < required {
            row.note = Some(format!("|A_{k}| = {actual} < {required}"));
            rows.push(row);
            pass = false;
            break;
        }
        let a_star = a_star.expect("block is nonempty");
        let target = checked_mul(h, a_star, "h * a_k*")?;
        if target > bound {
            row.status = BlockStatus::PassWindowEdge;
            row.note = Some(format!(
                "h a_k* = {target} exceeds exactness bound {bound}; later blocks unverifiable at this prefix"
            ));
            rows.push(row);
            break;
        }
        k_max = Some(k);
        row.target_reps = Some(rep_count(set, h, target)?);
        let tops = distinct_tops(set, h, target, mode)?;
        let tops_ok = tops.len() as u64 >= tops_required
            && tops.iter().all(|&b| {
                decomposition
                    .get(k + 1)
                    .is_some_and(|nb| nb.members.contains(b))
            });
        row.distinct_tops = Some(tops);
        match witness_certificate(set, h, k, mode) {
            Ok(w) => {
                w.validate(set, h)?;
                row.witness = Some(w);
                if tops_ok {
                    row.status = BlockStatus::Pass;
                } else {
                    row.note = Some(format!(
                        "fewer than {tops_required} distinct tops in A_{} for h a_k* = {target}",
                        k + 1
                    ));
                }
            }
            Err(e @ Error::NoWitness { .. }) => row.note = Some(e.to_string()),
            Err(e) => return Err(e),
        }
        let failed = row.status == BlockStatus::Fail;
        rows.push(row);
        if failed {
            pass = false;
            break;
        }
        k += 1;
    }
    Ok(BlockGrowth {
        vacuous: false,
        k0,
        k_max,
        rows,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureSite {
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub failure: Option<FailureSite>,
}

impl Verdict {
    fn pass() -> Self {
        Self {
            pass: true,
            failure: None,
        }
    }

    fn fail(stage: &str, detail: String) -> Self {
        Self {
            pass: false,
            failure: Some(FailureSite {
                stage: stage.to_string(),
                detail,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub h: u64,
    pub ell: u64,
    pub s: u64,
    pub mode: Exactness,
    pub exactness_bound: u64,
    pub set_size: usize,
    pub n0: Option<u64>,
    pub a0: Option<u64>,
    pub k0: Option<u32>,
    pub w0: Option<W0>,
    pub premise: Option<PremiseReport>,
    pub bhs_premise: Option<BhsCheck>,
    pub block_checks: Option<BlockGrowth>,
    pub bound_checks: Option<CountingBoundCheck>,
    pub power_checks: Vec<PowerCheck>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl TheoremReport {
    /// Pretty JSON with the field order of this struct.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn bound_csv(&self) -> String {
        self.bound_checks
            .as_ref()
            .map_or_else(|| "x,Ax,bound\n".to_string(), |b| b.to_csv())
    }
}

/// Premise, `n0`, `k0`, `w0`, block growth with certificates, and the
/// counting bound on `[h, x_max]`, in that order; the first failing stage
/// decides the verdict.
///
/// `n0` defaults to the least threshold for which the premise holds on the
/// window. `x_max` is the prefix bound in prefix mode and `max(A)` in
/// complete mode.
pub fn run_theorem(
    set: &IntegerSet,
    params: &TheoremParams,
    mode: Exactness,
    n0: Option<u64>,
) -> Result<TheoremReport> {
    params.validate()?;
    let h = params.h;
    let exactness_bound = mode.bound(set, h)?.ok_or(Error::EmptySet)?;
    let mut report = TheoremReport {
        theorem: params.id,
        h,
        ell: params.ell,
        s: params.s,
        mode,
        exactness_bound,
        set_size: set.len(),
        n0: None,
        a0: None,
        k0: None,
        w0: None,
        premise: None,
        bhs_premise: None,
        block_checks: None,
        bound_checks: None,
        power_checks: Vec::new(),
        verdict: Verdict::pass(),
        notes: Vec::new(),
    };

    if params.id == TheoremId::T3 {
        report.notes.push(
            "premise checked with the h-fold function r_{A,h}(n) >= ell, the form the block argument uses"
                .to_string(),
        );
        let bhs = is_bhs(set, h - 1, params.s, mode)?;
        let holds = bhs.holds;
        let first = bhs.violations.first().copied();
        report.bhs_premise = Some(bhs);
        if !holds {
            let (n, c) = first.expect("violation present");
            report.verdict = Verdict::fail(
                "bhs_premise",
                format!(
                    "not B_{{{},{}}}: r_{{A,{}}}({n}) = {c}",
                    h - 1,
                    params.s,
                    h - 1
                ),
            );
            return Ok(report);
        }
    }

    let threshold = match n0 {
        Some(n) => Some(n),
        None => min_threshold(set, h, params.ell, mode)?,
    };
    let Some(threshold) = threshold else {
        let premise = check_premise(set, h, params.ell, 0, mode)?;
        let top = premise.violations.last().copied();
        report.premise = Some(premise);
        let detail = match top {
            Some((n, c)) => format!(
                "no threshold n0 within the window: r({n}) = {c} < {}",
                params.ell
            ),
            None => "no threshold n0 within the window".to_string(),
        };
        report.verdict = Verdict::fail("premise", detail);
        return Ok(report);
    };
    report.n0 = Some(threshold);
    let premise = check_premise(set, h, params.ell, threshold, mode)?;
    let premise_ok = premise.holds;
    let first = premise.violations.first().copied();
    report.premise = Some(premise);
    if !premise_ok {
        let (n, c) = first.expect("violation present");
        report.verdict = Verdict::fail("premise", format!("r({n}) = {c} < {}", params.ell));
        return Ok(report);
    }

    let k0 = compute_k0(set, h, threshold)?;
    report.a0 = Some(k0.a0);
    report.k0 = Some(k0.k0);
    report.w0 = Some(params.w0(k0.k0)?);

    let growth = block_growth_check(
        set,
        params,
        k0.k0,
        mode,
        report.premise.as_ref().expect("set above"),
    )?;
    let growth_fail = growth
        .rows
        .iter()
        .find(|r| r.status == BlockStatus::Fail)
        .map(|r| (r.k, r.note.clone().unwrap_or_default()));
    report.block_checks = Some(growth);
    if let Some((k, note)) = growth_fail {
        report.verdict = Verdict::fail("block_growth", format!("k = {k}: {note}"));
        return Ok(report);
    }

    let x_max = match mode {
        Exactness::Prefix(m) => m,
        Exactness::Complete => set.max().unwrap_or(0),
    };
    if x_max >= h {
        let bounds = verify_counting_bound(set, params, k0.k0, x_max)?;
        let fail = bounds.first_failure().map(|p| (p.x, p.count, p.bound));
        report.bound_checks = Some(bounds);
        report.power_checks = power_checks(set, params, k0.k0, x_max)?;
        if let Some((x, count, bound)) = fail {
            report.verdict =
                Verdict::fail("counting_bound", format!("A({x}) = {count} <= {bound:.12}"));
            return Ok(report);
        }
        if let Some(p) = report.power_checks.iter().find(|p| !p.holds) {
            report.verdict = Verdict::fail(
                "power_check",
                format!(
                    "A({}) = {} below {}/{}",
                    p.power, p.count, p.required_numer, p.required_denom
                ),
            );
            return Ok(report);
        }
    } else {
        report.notes.push(format!(
            "x_max = {x_max} < h: no counting-bound points to check"
        ));
    }
    Ok(report)
}
