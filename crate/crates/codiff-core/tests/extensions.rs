mod common;

use std::collections::BTreeSet;

use codiff_core::coderivation::{bracket, is_codifferential};
use codiff_core::equivalence::{transport, verify, CatalogIndex, GradedAutomorphism};
use codiff_core::extensions::*;
use codiff_core::{Coderivation, Error, GradedSpace, Parity, Scalar};
use common::small_scalar;
use proptest::prelude::*;

fn combo(basis: &[Coderivation], coeffs: &[Scalar]) -> Coderivation {
    let mut out = Coderivation::zero(basis.first().map_or(GradedSpace::STANDARD, |b| b.space()), Parity::Odd);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add_scaled(b, c);
        }
    }
    out
}

fn random_piece(setup: &ExtensionSetup, k: usize, l: usize, parity: Parity) -> impl Strategy<Value = Coderivation> {
    let basis = bidegree_basis_with_parity(setup, k, l, parity);
    let n = basis.len();
    proptest::collection::vec(small_scalar(), n).prop_map(move |cs| combo(&basis, &cs))
}

/// The 0|3 setup with `M = {1, 2}`, `W = {3}`, `mu = psi_1^{22}`, `delta = psi_3^{33}`.
fn odd_setup() -> ExtensionSetup {
    let sp = GradedSpace::new(0, 3);
    let mu = Coderivation::term(sp, Scalar::one(), 1, &[2, 2]).unwrap();
    let delta = Coderivation::term(sp, Scalar::one(), 3, &[3, 3]).unwrap();
    ExtensionSetup::new(sp, &[1, 2], &[3], mu, delta).unwrap()
}

fn matrix_setups() -> Vec<ExtensionSetup> {
    let mut v: Vec<ExtensionSetup> = [Case::S5, Case::S6Mu0].iter().map(|c| c.setups().unwrap().remove(0).1).collect();
    v.push(stable_setup(2, 0, 2).unwrap());
    v.push(stable_setup(1, 1, 2).unwrap());
    v
}

#[test]
fn cases_cover_the_catalog() {
    let idx = CatalogIndex::new().unwrap();
    let expected: [(Case, &[usize]); 6] = [
        (Case::S4, &[1, 2]),
        (Case::S5, &[3, 4, 5, 6, 7]),
        (Case::S6Mu0, &[0, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 28]),
        (Case::S6Mu1, &[8, 9, 26, 27]),
        (Case::S7Mu0, &[0, 27]),
        (Case::S7Mu1, &[26, 28]),
    ];
    let mut covered = BTreeSet::new();
    for (case, want) in expected {
        let classes = case.enumerate().unwrap();
        assert_eq!(classes.len(), want.len(), "{}", case.name());
        let mut got = BTreeSet::new();
        for (_, c) in &classes {
            assert!(is_codifferential(&c.codifferential), "{}", case.name());
            let (k, w) = idx.identify_with_witness(&c.codifferential, 2000).unwrap().expect("identified");
            let w = w.unwrap_or_else(|| panic!("{}: no witness for d{}", case.name(), k));
            assert!(verify(&w, &c.codifferential, idx.codifferential(k).unwrap()));
            got.insert(k);
        }
        assert_eq!(got, want.iter().copied().collect(), "{}", case.name());
        covered.extend(got);
    }
    assert_eq!(covered, (0..=28).collect());
}

#[test]
fn case_names_round_trip() {
    for c in Case::ALL {
        assert_eq!(Case::parse(c.name()), Some(c));
    }
    assert_eq!(Case::parse("s8"), None);
}

#[test]
fn residual_examples() {
    let sp = GradedSpace::STANDARD;
    let (_, s4) = Case::S4.setups().unwrap().remove(0);
    let lambda = Coderivation::term(sp, Scalar::one(), 2, &[3, 2]).unwrap();
    let r = mc_residual(&s4, &lambda, &Coderivation::zero(sp, Parity::Odd)).unwrap();
    assert!(!r.mc.is_zero());

    let (_, s5) = Case::S5.setups().unwrap().remove(0);
    let lambda = Coderivation::from_terms(sp, Parity::Odd, [(Scalar::one(), 1, [2, 1]), (-Scalar::one(), 1, [1, 2])]).unwrap();
    let r = mc_residual(&s5, &lambda, &Coderivation::zero(sp, Parity::Odd)).unwrap();
    assert!(r.is_zero());
    assert!(is_codifferential(&assemble(&s5, &lambda, &Coderivation::zero(sp, Parity::Odd))));
}

#[test]
fn residual_rejects_wrong_bidegree() {
    let (_, s5) = Case::S5.setups().unwrap().remove(0);
    let sp = GradedSpace::STANDARD;
    let not_lambda = Coderivation::term(sp, Scalar::one(), 1, &[2, 2]).unwrap();
    assert!(mc_residual(&s5, &not_lambda, &Coderivation::zero(sp, Parity::Odd)).is_err());
}

#[test]
fn invalid_setups_are_rejected() {
    let sp = GradedSpace::STANDARD;
    let zero = Coderivation::zero(sp, Parity::Odd);
    let v3 = Coderivation::phi(3, &[3, 3]);
    assert!(matches!(ExtensionSetup::new(sp, &[1, 2], &[2, 3], zero.clone(), v3.clone()), Err(Error::InvalidSetup(_))));
    assert!(matches!(ExtensionSetup::new(sp, &[1], &[3], zero.clone(), v3.clone()), Err(Error::InvalidSetup(_))));
    assert!(ExtensionSetup::new(sp, &[1, 2], &[3], v3, zero).is_err());
}

#[test]
fn zero_degree_basis() {
    let (_, s6) = Case::S6Mu0.setups().unwrap().remove(0);
    assert_eq!(bidegree_basis(&s6, 0, 1).len(), 2);
    let even = bidegree_basis_with_parity(&s6, 0, 1, Parity::Even);
    assert_eq!(even, vec![Coderivation::phi(2, &[3])]);
}

#[test]
fn lambda_matrix_examples() {
    let sp = GradedSpace::STANDARD;
    let (_, s5) = Case::S5.setups().unwrap().remove(0);
    let lambda = Coderivation::from_terms(sp, Parity::Odd, [(Scalar::one(), 1, [2, 1]), (-Scalar::one(), 1, [1, 2])]).unwrap();
    let lm = LambdaMatrices::from_lambda(&s5, &lambda).unwrap();
    assert_eq!(lm.left(0), &[vec![Scalar::one()]]);
    assert_eq!(lm.right(0), &[vec![-Scalar::one()]]);
    assert_eq!(lm.left(1), &[vec![Scalar::zero()]]);
    assert_eq!(lm.nonzero_pairs(), 1);

    // M = {1, 2} mixes parities and W is odd, so odd lambda never links them.
    for (_, c) in Case::S6Mu0.enumerate().unwrap() {
        let (_, setup) = &Case::S6Mu0.setups().unwrap()[0];
        let lm = LambdaMatrices::from_lambda(setup, &c.lambda).unwrap();
        let zero = vec![vec![Scalar::zero(); 2]; 2];
        assert_eq!(lm.left_part(sp, 0, Parity::Odd), zero);
        assert_eq!(lm.right_part(sp, 0, Parity::Odd), zero);
    }
}

#[test]
fn stable_counts() {
    let table = [((1, 0), 1, 4), ((1, 0), 2, 5), ((1, 0), 3, 5), ((0, 1), 1, 4), ((0, 1), 2, 5), ((0, 1), 3, 5), ((1, 1), 3, 51), ((1, 1), 4, 52), ((2, 0), 3, 31), ((2, 0), 4, 32)];
    for ((r, s), n, classes) in table {
        let c = stable_count(r, s, n).unwrap();
        assert_eq!(c.classes, classes, "{}|{} n={}", r, s, n);
        assert!(c.max_nonzero_pairs <= 2 * (r + s));
    }
    let a = stable_count(1, 1, 4).unwrap();
    let b = stable_count(1, 1, 5).unwrap();
    assert_eq!((a.classes, a.max_nonzero_pairs), (b.classes, b.max_nonzero_pairs));
}

#[test]
fn tau_classification() {
    let sp = GradedSpace::STANDARD;
    let (_, nil) = Case::S6Mu0.setups().unwrap().remove(1);
    let zero = Coderivation::zero(sp, Parity::Odd);
    let t = classify_tau(&nil, &zero).unwrap();
    assert_eq!(t.cohomology.len(), 1);
    assert_eq!(t.rule, OrbitRule::TorusCharacter(vec![0, -1, 2]));
    assert_eq!(t.representatives.len(), 2);
    assert!(t.representatives.iter().any(|r| r.is_zero()));

    let bad = Coderivation::term(sp, Scalar::one(), 1, &[3, 1]).unwrap();
    assert!(matches!(classify_tau(&nil, &bad), Err(Error::MaurerCartan)));

    let (_, s7) = Case::S7Mu1.setups().unwrap().remove(0);
    let t = classify_tau(&s7, &zero).unwrap();
    assert_ne!(t.rule, OrbitRule::Trivial);
    assert_eq!(t.representatives.len(), 2);
}

#[test]
fn torus_character_matches_transport() {
    let sp = GradedSpace::STANDARD;
    let x = [2i64, 3, 5];
    let g = GradedAutomorphism::permuted_diagonal(sp, &[1, 2, 3], &x.map(Scalar::from_int)).unwrap();
    for arity in 1..=3 {
        for t in 1..=3u8 {
            for w in sp.words(arity) {
                let Ok(phi) = Coderivation::term(sp, Scalar::one(), t, w.as_slice()) else { continue };
                let key = phi.terms().next().unwrap().0.clone();
                let e = torus_character(sp, &key);
                let mut scale = Scalar::one();
                for (i, &ei) in e.iter().enumerate() {
                    let xi = Scalar::from_int(x[i]);
                    for _ in 0..ei.abs() {
                        scale = if ei > 0 { &scale * &xi } else { &scale / &xi };
                    }
                }
                assert_eq!(transport(&g, &phi).unwrap(), phi.scale(&scale));
            }
        }
    }
}

#[test]
fn tau_prime_sign_follows_direct_transport() {
    let setup = odd_setup();
    let sp = setup.space();
    let beta = Coderivation::term(sp, Scalar::one(), 2, &[3]).unwrap();
    let g = GradedAutomorphism::permuted_diagonal(sp, &[1, 2, 3], &[4, 2, 1].map(Scalar::from_int)).unwrap();
    // g halves lambda, exp(beta) adds [mu, beta]; the pair fixes lambda.
    let lambda = bracket(setup.mu(), &beta).scale(&Scalar::from_int(2));
    assert_eq!(transport(&g, &lambda).unwrap() + bracket(setup.mu(), &beta), lambda);
    let psi = Coderivation::from_terms(sp, Parity::Odd, [(Scalar::from_int(3), 1, [3, 3]), (Scalar::from_int(-2), 2, [3, 3])]).unwrap();
    let tau = Coderivation::term(sp, Scalar::from_int(5), 2, &[3, 3]).unwrap();
    let d = &assemble(&setup, &lambda, &psi) + &tau;
    let moved = transport(&exp_beta(&setup, &beta).unwrap(), &transport(&g, &d).unwrap()).unwrap();
    let expect = |sign| &assemble(&setup, &lambda, &psi) + &tau_prime(&setup, &lambda, &psi, &tau, &g, &beta, sign).unwrap();
    assert_eq!(moved, expect(TAU_PRIME_SIGN));
    assert_ne!(moved, expect(TauPrimeSign::Plus));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residuals_decompose_the_square(
        (lambda, psi) in (random_piece(&odd_setup(), 1, 1, Parity::Odd), random_piece(&odd_setup(), 0, 2, Parity::Odd))
    ) {
        let setup = odd_setup();
        let r = mc_residual(&setup, &lambda, &psi).unwrap();
        let d = assemble(&setup, &lambda, &psi);
        let half = bracket(&d, &d).scale(&Scalar::from_frac(1, 2));
        prop_assert_eq!(&half, &(&(&r.mc + &r.compat) + &r.cocyc));
        prop_assert_eq!(r.is_zero(), is_codifferential(&d));
    }

    #[test]
    fn exp_beta_is_restricted_transport(
        (lambda, psi, beta) in (
            random_piece(&odd_setup(), 1, 1, Parity::Odd),
            random_piece(&odd_setup(), 0, 2, Parity::Odd),
            random_piece(&odd_setup(), 0, 1, Parity::Even),
        )
    ) {
        let setup = odd_setup();
        let moved = transport(&exp_beta(&setup, &beta).unwrap(), &assemble(&setup, &lambda, &psi)).unwrap();
        let (l2, p2) = restricted_transport(&setup, &lambda, &psi, &beta);
        prop_assert_eq!(moved, assemble(&setup, &l2, &p2));
    }
}

#[test]
fn matrix_form_of_the_square() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    for setup in matrix_setups() {
        let strat = random_piece(&setup, 1, 1, Parity::Odd);
        for _ in 0..50 {
            let lambda = strat.new_tree(&mut runner).unwrap().current();
            let lm = LambdaMatrices::from_lambda(&setup, &lambda).unwrap();
            assert_eq!(lm.to_lambda(setup.space()).unwrap(), lambda);
            let half = bracket(&lambda, &lambda).scale(&Scalar::from_frac(1, 2));
            assert_eq!(half_bracket_from_matrices(&setup, &lm).unwrap(), half);
        }
    }
}

#[test]
fn semisimple_classes_solve_the_equations() {
    for setup in matrix_setups() {
        for c in enumerate_semisimple_extensions(&setup).unwrap() {
            assert!(mc_residual(&setup, &c.lambda, &c.psi).unwrap().is_zero());
            assert!(solve_psi(&setup, &c.lambda).unwrap().is_some());
        }
    }
}
