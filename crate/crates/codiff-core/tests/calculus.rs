mod common;

use codiff_core::algebra::to_multiplication;
use codiff_core::catalog;
use codiff_core::coderivation::{bracket, compose, evaluate, evaluate_sum, is_codifferential, TensorSum};
use codiff_core::hochschild::coboundary_matrix;
use codiff_core::{Coderivation, GradedSpace, MultiIndex, Parity, Scalar};
use common::*;
use proptest::prelude::*;

fn sign(p: Parity, q: Parity) -> Scalar {
    if p.koszul(q) {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// `evaluate(compose(f, g), w) == evaluate(f, evaluate(g, w))` on every word
/// of length `arity(f) + arity(g) - 1`.
fn compose_matches_evaluation(f: &Coderivation, g: &Coderivation, af: usize, ag: usize) -> bool {
    let fg = compose(f, g);
    GradedSpace::STANDARD.words(af + ag - 1).iter().all(|w| {
        let mut one = TensorSum::new();
        one.insert(w.clone(), Scalar::one());
        evaluate(&fg, w) == evaluate_sum(f, &evaluate_sum(g, &one))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_graded_antisymmetric(f in any_cochain(3), g in any_cochain(3)) {
        let lhs = bracket(&f, &g);
        let rhs = bracket(&g, &f).scale(&-sign(f.parity(), g.parity()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_satisfies_jacobi(f in any_cochain(2), g in any_cochain(2), h in any_cochain(2)) {
        let lhs = bracket(&f, &bracket(&g, &h));
        let rhs = bracket(&bracket(&f, &g), &h) + bracket(&g, &bracket(&f, &h)).scale(&sign(f.parity(), g.parity()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_agrees_with_coderivation_extension(
        (af, ag, f, g) in (1usize..=3, 1usize..=3, any_parity(), any_parity())
            .prop_flat_map(|(af, ag, p, q)| (Just(af), Just(ag), cochain(af, p), cochain(ag, q)))
    ) {
        prop_assert!(compose_matches_evaluation(&f, &g, af, ag));
    }

    #[test]
    fn associativity_iff_codifferential(d in cochain(2, Parity::Odd)) {
        prop_assert_eq!(to_multiplication(&d).is_associative(), is_codifferential(&d));
    }
}

#[test]
fn square_of_psi_2_22_by_word_evaluation() {
    let f = Coderivation::phi(2, &[2, 2]);
    assert!(compose(&f, &f).is_zero());
    assert!(compose_matches_evaluation(&f, &f, 2, 2));
    assert!(evaluate(&f, &MultiIndex::new(&[2, 2, 2])).is_empty());
}

#[test]
fn d2_terms_by_word_evaluation() {
    let d2 = catalog::codifferential(2).unwrap();
    assert!(is_codifferential(&d2));
    for (a, _) in d2.terms() {
        for (b, _) in d2.terms() {
            let f = Coderivation::phi(a.0, a.1.as_slice());
            let g = Coderivation::phi(b.0, b.1.as_slice());
            assert!(compose_matches_evaluation(&f, &g, 2, 2));
        }
    }
}

#[test]
fn psi_2_22_plus_psi_2_23_is_associative() {
    let d = Coderivation::phi(2, &[2, 2]) + Coderivation::phi(2, &[2, 3]);
    assert_eq!(to_multiplication(&d).is_associative(), is_codifferential(&d));
}

#[test]
fn coboundary_squares_to_zero() {
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        for n in 0..=2 {
            let a = coboundary_matrix(&d, n).unwrap();
            let b = coboundary_matrix(&d, n + 1).unwrap();
            assert!(b.mul(&a).unwrap().is_zero(), "d{} degree {}", k, n);
        }
    }
}
