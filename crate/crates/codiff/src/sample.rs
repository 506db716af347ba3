//! Seeded random inputs for the property suites.

use codiff_core::equivalence::GradedAutomorphism;
use codiff_core::{Coderivation, GradedSpace, MultiIndex, Parity, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small Gaussian rational, mostly integers in -3..=3.
pub fn scalar(r: &mut Rng8) -> Scalar {
    match r.gen_range(0..6) {
        0 => Scalar::from_frac(r.gen_range(-3..=3), r.gen_range(1..=3)),
        1 => &Scalar::from_int(r.gen_range(-2..=2)) + &(&Scalar::i() * &Scalar::from_int(r.gen_range(-2..=2))),
        _ => Scalar::from_int(r.gen_range(-3..=3)),
    }
}

pub fn nonzero_scalar(r: &mut Rng8) -> Scalar {
    loop {
        let x = scalar(r);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn parity(r: &mut Rng8) -> Parity {
    if r.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Up to five terms of the given arity and parity on the 1|2 space.
pub fn cochain(r: &mut Rng8, arity: usize, p: Parity) -> Coderivation {
    let sp = GradedSpace::STANDARD;
    let mut c = Coderivation::zero(sp, p);
    for _ in 0..r.gen_range(0..6) {
        let t = r.gen_range(1..=3u8);
        let s: Vec<u8> = (0..arity).map(|_| r.gen_range(1..=3u8)).collect();
        if sp.parity_of(t, &MultiIndex::new(&s)).expect("in range") == p {
            let x = scalar(r);
            c = c.add_scaled(&Coderivation::term(sp, Scalar::one(), t, &s).expect("in range"), &x);
        }
    }
    c
}

/// `g_11` nonzero and an invertible block on `v2, v3`.
pub fn automorphism(r: &mut Rng8) -> GradedAutomorphism {
    loop {
        let z = Scalar::zero();
        let rows = vec![
            vec![nonzero_scalar(r), z.clone(), z.clone()],
            vec![z.clone(), scalar(r), scalar(r)],
            vec![z, scalar(r), scalar(r)],
        ];
        if let Ok(g) = GradedAutomorphism::new(GradedSpace::STANDARD, &rows) {
            return g;
        }
    }
}

pub fn combination(r: &mut Rng8, basis: &[Coderivation], space: GradedSpace, p: Parity) -> Coderivation {
    let mut out = Coderivation::zero(space, p);
    for b in basis {
        let x = scalar(r);
        if !x.is_zero() {
            out = out.add_scaled(b, &x);
        }
    }
    out
}
