mod common;

use common::{binomial, brute_counts, brute_tops, count_upto, reference_bound};
use proptest::prelude::*;
use sumrep::verify::{
    distinct_tops, is_bhs, verify_counting_bound, witness_certificate, TheoremParams,
};
use sumrep::{
    blocks, greedy_repair, rep_count, rep_count_naive, rep_table, run_theorem, sumset, Exactness,
    IntegerSet, Strategy as Repair,
};

fn small_set(max_len: usize, max_value: u64) -> impl Strategy<Value = IntegerSet> {
    prop::collection::vec(0..=max_value, 1..=max_len).prop_map(IntegerSet::from_unsorted)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_oracles(set in small_set(7, 40), h in 2u64..=4) {
        let brute = brute_counts(&set, h as usize);
        for (n, &c) in brute.iter().enumerate() {
            prop_assert_eq!(rep_count(&set, h, n as u64).unwrap(), c);
            prop_assert_eq!(rep_count_naive(&set, h, n as u64), c);
        }
    }

    #[test]
    fn table_total_is_multiset_count(set in small_set(12, 60), h in 2u64..=5) {
        let top = set.max().unwrap() * h;
        let table = rep_table(&set, h, 0, top, None).unwrap();
        prop_assert_eq!(table.total().unwrap() as u128, binomial(set.len() as u64 + h - 1, h));
    }

    #[test]
    fn positive_count_iff_in_sumset(set in small_set(8, 50), h in 1u64..=4) {
        let hs = sumset(&set, h, None).unwrap();
        let top = set.max().unwrap() * h;
        let table = rep_table(&set, h, 0, top, None).unwrap();
        for (n, c) in table.iter() {
            prop_assert_eq!(c >= 1, hs.contains(n), "n = {}", n);
        }
    }

    #[test]
    fn counts_grow_with_the_set(
        base in prop::collection::vec(0u64..=40, 1..=8),
        extra in prop::collection::vec(0u64..=40, 0..=5),
        h in 2u64..=4,
    ) {
        let small = IntegerSet::from_unsorted(base.clone());
        let big = IntegerSet::from_unsorted(base.into_iter().chain(extra).collect());
        prop_assert!(small.is_subset(&big));
        for n in 0..=big.max().unwrap() * h {
            prop_assert!(rep_count(&small, h, n).unwrap() <= rep_count(&big, h, n).unwrap());
        }
    }

    #[test]
    fn translation_and_dilation(set in small_set(6, 30), h in 2u64..=4, c in 0u64..=50, d in 1u64..=9) {
        let shifted: IntegerSet = set.iter().map(|a| a + c).collect();
        let scaled: IntegerSet = set.iter().map(|a| a * d).collect();
        for n in 0..=set.max().unwrap() * h {
            let r = rep_count(&set, h, n).unwrap();
            prop_assert_eq!(rep_count(&shifted, h, n + h * c).unwrap(), r);
            prop_assert_eq!(rep_count(&scaled, h, n * d).unwrap(), r);
        }
    }

    #[test]
    fn tops_match_brute_force(set in small_set(8, 30), h in 2u64..=4) {
        for n in 0..=set.max().unwrap() * h {
            let tops = distinct_tops(&set, h, n, Exactness::Complete).unwrap();
            prop_assert_eq!(tops, brute_tops(&set, h as usize, n));
        }
    }

    #[test]
    fn witnesses_revalidate(set in small_set(25, 120), h in 2u64..=3) {
        let decomposition = blocks(&set, h).unwrap();
        for block in &decomposition.blocks {
            match witness_certificate(&set, h, block.k, Exactness::Complete) {
                Ok(w) => {
                    w.validate(&set, h).unwrap();
                    prop_assert_eq!(w.representation.iter().sum::<u64>(), h * block.top());
                    prop_assert!(w.representation[0] < w.top_element);
                    prop_assert_eq!(sumrep::block_of(w.top_element, h).unwrap(), block.k + 1);
                }
                Err(sumrep::Error::NoWitness { .. }) => {
                    let next = brute_tops(&set, h as usize, h * block.top());
                    prop_assert!(next.iter().all(|&b| sumrep::block_of(b, h).unwrap() != block.k + 1));
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }

    #[test]
    fn pigeonhole_on_tops(set in small_set(30, 150), h in 3u64..=4, slack in 0u64..=2) {
        let lower = brute_counts(&set, h as usize - 1);
        let s = lower.iter().copied().max().unwrap() + slack;
        prop_assert!(is_bhs(&set, h - 1, s, Exactness::Complete).unwrap().holds);
        for block in &blocks(&set, h).unwrap().blocks {
            let n = h * block.top();
            let ell = rep_count(&set, h, n).unwrap();
            let tops = distinct_tops(&set, h, n, Exactness::Complete).unwrap();
            prop_assert!(tops.len() as u64 >= (ell - 1).div_ceil(s), "n = {}, ell = {}", n, ell);
        }
    }

    #[test]
    fn candidate_points_agree_with_every_x(
        set in small_set(12, 80),
        k0 in 1u32..=3,
        which in 0usize..3,
        ell in 2u64..=4,
        s in 1u64..=3,
    ) {
        let (params, id) = match which {
            0 => (TheoremParams::t1(2), "T1"),
            1 => (TheoremParams::t2(ell), "T2"),
            _ => (TheoremParams::t3(3, ell, s), "T3"),
        };
        let x_max = set.max().unwrap().max(params.h) + 5;
        let check = verify_counting_bound(&set, &params, k0, x_max).unwrap();
        let exhaustive = (params.h..=x_max).all(|x| {
            let b = reference_bound(id, params.h, params.ell, params.s, k0, x);
            count_upto(&set, x) as f64 > b - 1e-9
        });
        prop_assert_eq!(check.pass, exhaustive);
        for p in &check.points {
            prop_assert_eq!(p.count, count_upto(&set, p.x));
        }
    }

    #[test]
    fn t1_pass_implies_t2_pass(
        m in 10u64..=64,
        holes in prop::collection::vec(2u64..=64, 0..=6),
    ) {
        // near-complete prefixes so that T1 usually passes
        let set: IntegerSet = (0..=m).filter(|a| !holes.contains(a)).collect();
        let mode = Exactness::Prefix(m);
        let t1 = run_theorem(&set, &TheoremParams::t1(2), mode, None).unwrap();
        let t2 = run_theorem(&set, &TheoremParams::t2(2), mode, None).unwrap();
        if t1.verdict.pass {
            prop_assert!(t2.verdict.pass, "{}", t2.to_json());
            prop_assert_eq!(t1.k0, t2.k0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn construction_is_certified_and_watermark_safe(
        ell in 2u64..=3,
        horizon in 200u64..=3000,
        strategy in prop::sample::select(vec![Repair::SmallestNew, Repair::LargestNew, Repair::Balanced]),
        extra in 1u64..=500,
    ) {
        let seed = IntegerSet::range_inclusive(0, ell - 1);
        let log = greedy_repair(ell, horizon, strategy, &seed).unwrap();
        prop_assert!(log.additions.windows(2).all(|w| w[0].trigger <= w[1].trigger));
        let Some(cert) = log.certification else {
            return Ok(());
        };
        let w = log.certified_watermark;
        let premise = sumrep::verify::check_premise(&log.final_set, 2, ell, cert.n0, log.mode()).unwrap();
        prop_assert!(premise.holds);

        let e = w + extra;
        let mut grown: Vec<u64> = log.final_set.elements().to_vec();
        grown.push(e);
        let grown = IntegerSet::from_unsorted(grown);
        let before = rep_table(&log.final_set, 2, 0, w, Some(w)).unwrap();
        let after = rep_table(&grown, 2, 0, w, Some(w)).unwrap();
        prop_assert_eq!(before.counts, after.counts);

        let params = if ell == 2 { TheoremParams::t1(2) } else { TheoremParams::t2(ell) };
        let report = run_theorem(&log.final_set, &params, log.mode(), Some(cert.n0)).unwrap();
        prop_assert!(report.verdict.pass, "{}", report.to_json());
    }
}
