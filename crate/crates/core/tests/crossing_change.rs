//! Crossing-change criterion on 8-crossing knots read from PD files in
//! `tests/data` (Rolfsen table diagrams).

use knotthin::diagram::plat::{normalize_code, plat_from_cf, LinkOrientation};
use knotthin::diagram::{pd, Diagram};
use knotthin::homfly::HomflyEngine;
use knotthin::thinness::criterion::{criterion_at, criterion_crossing_change, CriterionOutcome};

fn load(name: &str) -> Diagram {
    let path = format!("{}/tests/data/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    pd::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Some `K(det, q)` in either orientation or chirality with the same HOMFLY.
fn two_bridge_match(e: &HomflyEngine, d: &Diagram, det: i64) -> bool {
    let h = e.homfly(d).unwrap();
    (0..det.max(1)).filter(|&q| num_integer::gcd(det, q) == 1).any(|q| {
        [LinkOrientation::Standard, LinkOrientation::Reversed].into_iter().any(|o| {
            let g = e.homfly(&plat_from_cf(&normalize_code(det, q).unwrap(), o)).unwrap();
            g == h || g.mirror() == h
        })
    })
}

fn small(b: &num_bigint::BigInt) -> i64 {
    b.try_into().unwrap()
}

/// Crossings of `d` (as L2) where the criterion applies, with flags for
/// whether `L1` and `L0` look two-bridge.
fn scan(e: &HomflyEngine, d: &Diagram) -> Vec<(usize, bool, bool)> {
    (0..d.num_crossings())
        .filter_map(|c| {
            let l1 = d.switch(c).unwrap();
            let v = criterion_at(e, &l1, c).unwrap();
            v.applies.then(|| {
                let l0 = l1.oriented_smooth(c).unwrap();
                (c, two_bridge_match(e, &l1, small(&v.det_l1)), two_bridge_match(e, &l0, small(&v.det_l0)))
            })
        })
        .collect()
}

#[test]
fn implied_by_two_bridge_inputs() {
    let e = HomflyEngine::default();
    for k in ["8_16", "8_17", "8_21"] {
        let hits = scan(&e, &load(k));
        assert!(hits.iter().any(|&(_, a, b)| a && b), "{k}: {hits:?}");
    }
}

#[test]
fn criterion_applies_on_candidates() {
    let e = HomflyEngine::default();
    for k in ["8_5", "8_15", "8_16", "8_17", "8_21"] {
        assert!(!scan(&e, &load(k)).is_empty(), "{k}");
    }
}

#[test]
fn open_cases_stay_inconclusive() {
    let e = HomflyEngine::default();
    for k in ["8_18", "8_19"] {
        assert!(scan(&e, &load(k)).is_empty(), "{k}");
    }
    for k in ["8_10", "8_20"] {
        let hits = scan(&e, &load(k));
        assert!(!hits.iter().any(|&(_, a, b)| a && b), "{k}: {hits:?}");
    }
}

#[test]
fn external_triple() {
    // L1, L2, L0 handed over as separate PD strings
    let e = HomflyEngine::default();
    let l2 = load("8_21");
    let c = scan(&e, &l2)[0].0;
    let l1 = l2.switch(c).unwrap();
    let l0 = l1.oriented_smooth(c).unwrap();
    let reparse = |d: &Diagram| pd::parse(&pd::write(d)).unwrap();
    let v = criterion_crossing_change(&e, &reparse(&l1), &reparse(&l2), &reparse(&l0)).unwrap();
    assert!(v.applies);
    assert_eq!(v.outcome, CriterionOutcome::Implied);
    assert_eq!(v.det_ls, &v.det_l1 + &v.det_l0);
    assert_eq!(v.det_l2, &v.det_ls + &v.det_l0);
    assert_eq!(small(&v.det_l2), 15);
}
