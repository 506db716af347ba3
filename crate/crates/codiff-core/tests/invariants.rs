mod common;

use codiff_core::algebra::{fingerprint, opposite, to_multiplication};
use codiff_core::catalog;
use codiff_core::coderivation::is_codifferential;
use codiff_core::equivalence::*;
use codiff_core::{Coderivation, GradedSpace, Parity, Scalar};
use common::*;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

const OPPOSITE_PAIRS: [(usize, usize); 7] = [(3, 4), (10, 11), (12, 13), (14, 15), (16, 17), (18, 19), (21, 22)];

#[test]
fn opposite_is_an_involution_on_the_catalog() {
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        assert_eq!(opposite(&opposite(&d)), d, "d{}", k);
        assert!(is_codifferential(&opposite(&d)));
    }
}

#[test]
fn opposite_pairs_have_witnesses() {
    for (a, b) in OPPOSITE_PAIRS {
        let da = catalog::codifferential(a).unwrap();
        let db = catalog::codifferential(b).unwrap();
        let out = find_isomorphism(&opposite(&da), &db, DEFAULT_BUDGET).unwrap();
        let g = out.witness.unwrap_or_else(|| panic!("no witness for opp(d{}) -> d{}", a, b));
        assert_eq!(transport(&g, &opposite(&da)).unwrap(), db);
    }
}

#[test]
fn stated_opposites_agree_with_computation() {
    let idx = CatalogIndex::new().unwrap();
    for e in catalog::all() {
        if let Some(j) = e.metadata.opposite {
            assert_eq!(idx.identify(&opposite(&e.codifferential)).unwrap(), Some(j), "d{}", e.index);
        }
    }
}

#[test]
fn d5_is_self_opposite() {
    let d5 = catalog::codifferential(5).unwrap();
    let g = find_isomorphism(&opposite(&d5), &d5, DEFAULT_BUDGET).unwrap().witness.unwrap();
    assert!(verify(&g, &opposite(&d5), &d5));
}

#[test]
fn fingerprints_are_invariant_under_automorphisms() {
    let mut runner = TestRunner::deterministic();
    let strat = automorphism();
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        let f = fingerprint(&d).unwrap();
        for _ in 0..20 {
            let g = strat.new_tree(&mut runner).unwrap().current();
            let x = transport(&g, &d).unwrap();
            assert!(is_codifferential(&x));
            assert_eq!(fingerprint(&x).unwrap(), f, "d{}", k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transport_is_a_right_action(g in automorphism(), h in automorphism(), d in any_cochain(3)) {
        let lhs = transport(&g.compose(&h), &d).unwrap();
        let rhs = transport(&h, &transport(&g, &d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transport_by_inverse_undoes(g in automorphism(), d in any_cochain(2)) {
        prop_assert_eq!(transport(&g.inverse(), &transport(&g, &d).unwrap()).unwrap(), d);
    }

    #[test]
    fn opposite_is_an_involution(d in cochain(2, Parity::Odd)) {
        prop_assert_eq!(opposite(&opposite(&d)), d);
    }

    #[test]
    fn catalog_witness_recovered_after_random_transport(k in 1usize..=28, g in automorphism()) {
        let d = catalog::codifferential(k).unwrap();
        let x = transport(&g, &d).unwrap();
        let idx = CatalogIndex::new().unwrap();
        prop_assert_eq!(idx.identify(&x).unwrap(), Some(k));
    }
}

#[test]
fn d2_plus_psi_2_22_is_d1() {
    let d1 = catalog::codifferential(1).unwrap();
    let x = &catalog::codifferential(2).unwrap() + &Coderivation::phi(2, &[2, 2]);
    let out = find_isomorphism(&x, &d1, DEFAULT_BUDGET).unwrap();
    let g = out.witness.expect("witness");
    assert_eq!(transport(&g, &x).unwrap(), d1);
}

#[test]
fn d3_and_d4_differ_by_annihilators() {
    let f3 = fingerprint(&catalog::codifferential(3).unwrap()).unwrap();
    let f4 = fingerprint(&catalog::codifferential(4).unwrap()).unwrap();
    let diffs = f3.differences(&f4);
    assert!(diffs.contains(&"left-annihilator") || diffs.contains(&"right-annihilator"), "{:?}", diffs);
    let out = find_isomorphism(&catalog::codifferential(3).unwrap(), &catalog::codifferential(4).unwrap(), DEFAULT_BUDGET).unwrap();
    assert!(!out.found());
}

#[test]
fn d25_is_fixed_exactly_by_unit_scaling_of_v3() {
    let d = catalog::codifferential(25).unwrap();
    let diag = |a: i64, b: i64, c: i64| {
        GradedAutomorphism::permuted_diagonal(GradedSpace::STANDARD, &[1, 2, 3], &[a, b, c].map(Scalar::from_int)).unwrap()
    };
    assert!(verify(&diag(2, -3, 1), &d, &d));
    assert!(!verify(&diag(1, 1, 2), &d, &d));
}

#[test]
fn catalog_is_separated() {
    let report = separation_report(DEFAULT_BUDGET).unwrap();
    assert_eq!(report.len(), 28 * 27 / 2);
    assert!(report.iter().all(|p| p.separated()));
}

#[test]
fn multiplication_round_trip() {
    use codiff_core::algebra::from_multiplication;
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        let m = to_multiplication(&d);
        assert!(m.is_associative());
        assert_eq!(from_multiplication(&m).unwrap(), d);
    }
}
