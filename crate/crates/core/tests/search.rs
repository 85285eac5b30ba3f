use std::collections::BTreeSet;

use pgblock::blocking::{BlockingSet, Incidence};
use pgblock::constructions::{all_params, construction1, recognize_bose_burton, BoseBurtonVariant};
use pgblock::counting::{beutelspacher_classify, BeutelspacherClass};
use pgblock::search::{
    blocking_sets_of_size, classify_minimum, min_blocking_search, root_lower_bound, Family,
    SearchConfig, SearchMode, SearchReport, Universe,
};
use pgblock::GeometryContext;

fn pg(n: usize, q: u32) -> GeometryContext {
    GeometryContext::pg(n, q).unwrap()
}

fn run(ctx: &GeometryContext, k: usize, cfg: SearchConfig) -> SearchReport {
    min_blocking_search(ctx, k, &cfg).unwrap()
}

#[test]
fn branch_and_bound_matches_exhaustive() {
    for (n, q, k, cap) in [
        (2, 2, 1, 3),
        (3, 2, 1, 6),
        (2, 3, 0, 4),
        (2, 3, 1, 4),
        (3, 2, 0, 7),
        (3, 2, 2, 7),
    ] {
        let ctx = pg(n, q);
        let bb = run(&ctx, k, SearchConfig::new(cap));
        let ex = run(&ctx, k, SearchConfig::new(cap).mode(SearchMode::Exhaustive));
        assert_eq!(bb.minimum(), ex.minimum(), "PG({n},{q}) k={k}");
        assert_eq!(bb.minimum_sets, ex.minimum_sets, "PG({n},{q}) k={k}");
    }
}

#[test]
fn reports_are_identical_across_worker_counts() {
    for (n, q, k, cap) in [(3, 2, 1, 6), (2, 4, 1, 5), (4, 2, 1, 7)] {
        let ctx = pg(n, q);
        for mode in [SearchMode::BranchAndBound, SearchMode::Exhaustive] {
            if mode == SearchMode::Exhaustive && n == 4 {
                continue;
            }
            let reports: Vec<String> = [1, 2, 8]
                .iter()
                .map(|&w| {
                    let r = run(&ctx, k, SearchConfig::new(cap).mode(mode).workers(w));
                    serde_json::to_string(&r.without_timing()).unwrap()
                })
                .collect();
            assert_eq!(reports[0], reports[1]);
            assert_eq!(reports[0], reports[2]);
        }
    }
}

#[test]
fn reported_minima_are_blocking_and_minimal() {
    for (n, q, k, cap) in [(3, 2, 1, 6), (2, 3, 1, 4), (4, 2, 2, 7)] {
        let ctx = pg(n, q);
        let r = run(&ctx, k, SearchConfig::new(cap));
        let inc = Incidence::new(&ctx, k as isize).unwrap();
        let unique: BTreeSet<&Vec<usize>> = r.minimum_sets.iter().collect();
        assert_eq!(unique.len(), r.minimum_sets.len());
        for b in r.minimum_blocking_sets(&ctx).unwrap() {
            assert!(inc.check_blocking(&b).blocking);
            assert!(inc.check_minimal(&b).unwrap().minimal);
        }
    }
}

#[test]
fn root_bound_never_exceeds_optimum() {
    for (n, q, k, cap) in [
        (2, 2, 1, 3),
        (3, 2, 1, 6),
        (2, 3, 0, 4),
        (2, 4, 1, 5),
        (4, 2, 2, 7),
        (3, 3, 1, 12),
    ] {
        let ctx = pg(n, q);
        let inc = Incidence::new(&ctx, k as isize).unwrap();
        for u in [Universe::Both, Universe::Points] {
            // point-only minima can be larger than mixed ones, so search each universe
            let r = run(&ctx, k, SearchConfig::new(cap + 10).workers(4).universe(u));
            assert!(
                r.root_lower_bound <= r.minimum().unwrap(),
                "PG({n},{q}) k={k} {u:?}"
            );
            assert_eq!(r.root_lower_bound, root_lower_bound(&inc, u));
        }
    }
}

#[test]
fn minima_in_pg32_are_exactly_the_mixed_construction() {
    let ctx = pg(3, 2);
    let r = run(&ctx, 1, SearchConfig::new(6));
    assert_eq!(r.minimum(), Some(6));
    let generated: BTreeSet<Vec<usize>> = all_params(&ctx)
        .unwrap()
        .iter()
        .map(|p| construction1(&ctx, p).unwrap().element_indices())
        .collect();
    let found: BTreeSet<Vec<usize>> = r.minimum_sets.iter().cloned().collect();
    assert_eq!(found, generated);
}

#[test]
fn plane_of_order_three() {
    let ctx = pg(2, 3);
    let pencils = run(&ctx, 0, SearchConfig::new(4));
    assert_eq!(
        (pencils.minimum(), pencils.minimum_set_count),
        (Some(4), 13)
    );
    for b in pencils.minimum_blocking_sets(&ctx).unwrap() {
        assert!(recognize_bose_burton(&b, BoseBurtonVariant::Hyperplanes).is_some());
    }
    let lines = run(&ctx, 1, SearchConfig::new(4));
    assert_eq!((lines.minimum(), lines.minimum_set_count), (Some(4), 13));
    for b in lines.minimum_blocking_sets(&ctx).unwrap() {
        assert!(recognize_bose_burton(&b, BoseBurtonVariant::Points).is_some());
    }
}

#[test]
fn classification_verdicts() {
    let v = classify_minimum(&pg(3, 2), 1, &SearchConfig::new(0)).unwrap();
    assert_eq!(
        (v.expected_bound.as_str(), v.observed_minimum),
        ("6", Some(6))
    );
    assert!(v.all_minima_match_theorem);
    assert_eq!(v.family_counts.get(&Family::Construction1), Some(&210));

    let v = classify_minimum(&pg(2, 3), 1, &SearchConfig::new(0)).unwrap();
    assert_eq!(
        (v.expected_bound.as_str(), v.observed_minimum),
        ("4", Some(4))
    );
    assert!(v.all_minima_match_theorem);

    let v = classify_minimum(&pg(4, 2), 2, &SearchConfig::new(0)).unwrap();
    assert_eq!(
        (v.expected_bound.as_str(), v.observed_minimum),
        ("open", Some(7))
    );
}

#[test]
fn report_json_shape() {
    let r = run(&pg(2, 2), 1, SearchConfig::new(3));
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in [
        "n",
        "q",
        "k",
        "size_cap",
        "minimum_size_found",
        "minimum_sets",
        "nodes_expanded",
        "pruned",
        "wall_time_seconds",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let back: SearchReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn nontrivial_blocking_sets_in_pg24_are_large() {
    let ctx = pg(2, 4);
    let inc = Incidence::new(&ctx, 1).unwrap();
    let sets = blocking_sets_of_size(&inc, 7, Universe::Points, 2);
    let mut nontrivial = 0;
    for s in &sets {
        let b = BlockingSet::from_element_indices(&ctx, 1, s).unwrap();
        match beutelspacher_classify(&ctx, b.points(), 1).unwrap() {
            BeutelspacherClass::ContainsSpace(line) => assert_eq!(line.dim(), 1),
            BeutelspacherClass::LargeNonTrivial => {
                nontrivial += 1;
                // a Baer subplane: every line meets it in 1 or 3 points
                for line in inc.spaces() {
                    let hits = b
                        .points()
                        .iter()
                        .filter(|p| ctx.contains_point(line, p))
                        .count();
                    assert!(hits == 1 || hits == 3);
                }
            }
            BeutelspacherClass::ViolatesBound => panic!("{s:?} violates the bound"),
        }
    }
    assert!(nontrivial > 0);
    // the smallest point blocking sets are lines, so nothing nontrivial below 7
    for size in 5..7 {
        for s in blocking_sets_of_size(&inc, size, Universe::Points, 2) {
            let b = BlockingSet::from_element_indices(&ctx, 1, &s).unwrap();
            assert!(matches!(
                beutelspacher_classify(&ctx, b.points(), 1).unwrap(),
                BeutelspacherClass::ContainsSpace(_)
            ));
        }
    }
}
