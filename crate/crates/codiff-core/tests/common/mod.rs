#![allow(dead_code)]

use codiff_core::equivalence::GradedAutomorphism;
use codiff_core::{Coderivation, GradedSpace, Parity, Scalar};
use proptest::prelude::*;

pub fn small_scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        4 => (-3i64..=3).prop_map(Scalar::from_int),
        1 => ((-3i64..=3), (1i64..=3)).prop_map(|(p, q)| Scalar::from_frac(p, q)),
        1 => ((-2i64..=2), (-2i64..=2)).prop_map(|(a, b)| &Scalar::from_int(a) + &(&Scalar::i() * &Scalar::from_int(b))),
    ]
}

/// Homogeneous cochain on the 1|2 space with every term of the given arity.
pub fn cochain(arity: usize, parity: Parity) -> impl Strategy<Value = Coderivation> {
    let term = (1u8..=3, proptest::collection::vec(1u8..=3, arity), small_scalar());
    proptest::collection::vec(term, 0..6).prop_map(move |ts| {
        let sp = GradedSpace::STANDARD;
        let mut c = Coderivation::zero(sp, parity);
        for (t, s, x) in ts {
            if sp.parity_of(t, &codiff_core::MultiIndex::new(&s)).unwrap() == parity {
                c.add_term(x, t, &s).unwrap();
            }
        }
        c
    })
}

pub fn any_parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// Cochain of random arity in `1..=max_arity` and random parity.
pub fn any_cochain(max_arity: usize) -> impl Strategy<Value = Coderivation> {
    (1..=max_arity, any_parity()).prop_flat_map(|(a, p)| cochain(a, p))
}

/// Random even invertible map of the 1|2 space: a nonzero scalar on `v1`
/// and an invertible 2x2 block on `v2, v3`.
pub fn automorphism() -> impl Strategy<Value = GradedAutomorphism> {
    let nz = || (-3i64..=3).prop_filter("nonzero", |x| *x != 0);
    (nz(), -3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("invertible block", |(_, a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(g1, a, b, c, d)| {
            let s = Scalar::from_int;
            let rows = vec![
                vec![s(g1), s(0), s(0)],
                vec![s(0), s(a), s(b)],
                vec![s(0), s(c), s(d)],
            ];
            GradedAutomorphism::new(GradedSpace::STANDARD, &rows).unwrap()
        })
}
