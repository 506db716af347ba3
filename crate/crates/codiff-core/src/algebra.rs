//! Multiplications on `A = ΠW` and their invariants.
//!
//! Convention: `m(a, b) = (-1)^{|a|_A} d(πa, πb)`, where `|a|_A` is the parity
//! in `A` (the flip of the parity in `W`). With this sign `m` is associative
//! exactly when `[d, d] = 0`. Subspaces of `A` are reported in `W`
//! coordinates with `W` parities, so the center's graded dimension is
//! directly comparable with `h^0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::coderivation::{is_codifferential, Coderivation};
use crate::graded::{GradedSpace, Parity};
use crate::hochschild::cohomology_dims;
use crate::linalg::{nullspace, solve, sparse_from_dense, ExactMatrix, Subspace};
use crate::scalar::Scalar;
use crate::Error;

/// Structure constants `m(e_a, e_b) = sum_k c^k_{ab} e_k` on `A = ΠW`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplication {
    space: GradedSpace,
    // consts[a][b][k], 0-based
    consts: Vec<Vec<Vec<Scalar>>>,
}

/// A graded subspace of `A`, with dimensions split by `W` parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    pub even_dim: usize,
    pub odd_dim: usize,
    pub basis: Vec<Vec<Scalar>>,
}

impl GradedSubspace {
    pub fn dims(&self) -> (usize, usize) {
        (self.even_dim, self.odd_dim)
    }

    /// Span equality with the given vectors.
    pub fn spans_same_as(&self, vs: &[Vec<Scalar>]) -> bool {
        let n = self.basis.first().or(vs.first()).map_or(0, |v| v.len());
        let a = Subspace::span(n, self.basis.iter().map(|v| sparse_from_dense(v)));
        let b = Subspace::span(n, vs.iter().map(|v| sparse_from_dense(v)));
        a == b
    }
}

fn sign_a(space: GradedSpace, a: u8) -> bool {
    // odd in A  <=>  even in W
    !space.parity_unchecked(a).is_odd()
}

impl Multiplication {
    pub fn zero(space: GradedSpace) -> Self {
        let n = space.dim();
        Multiplication { space, consts: vec![vec![vec![Scalar::zero(); n]; n]; n] }
    }

    pub fn space(&self) -> GradedSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Parity of `e_a` in `A` (0-based `a`).
    pub fn a_parity(&self, a: usize) -> Parity {
        self.space.parity_unchecked(a as u8 + 1).flip()
    }

    pub fn constant(&self, a: usize, b: usize, k: usize) -> &Scalar {
        &self.consts[a][b][k]
    }

    pub fn set_constant(&mut self, a: usize, b: usize, k: usize, c: Scalar) {
        self.consts[a][b][k] = c;
    }

    pub fn basis_product(&self, a: usize, b: usize) -> &[Scalar] {
        &self.consts[a][b]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = xa * yb;
                for (k, c) in self.consts[a][b].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&f * c);
                    }
                }
            }
        }
        out
    }

    fn e(&self, a: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[a] = Scalar::one();
        v
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(&self.e(a), &self.e(b));
                for c in 0..n {
                    let l = self.mul(&ab, &self.e(c));
                    let r = self.mul(&self.e(a), &self.mul(&self.e(b), &self.e(c)));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn commutes(&self, graded: bool) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let neg = graded && self.a_parity(a).koszul(self.a_parity(b));
                for k in 0..n {
                    let ba = if neg { -&self.consts[b][a][k] } else { self.consts[b][a][k].clone() };
                    if self.consts[a][b][k] != ba {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `m(a, b) = (-1)^{|a||b|} m(b, a)` for all homogeneous `a, b`.
    pub fn is_graded_commutative(&self) -> bool {
        self.commutes(true)
    }

    /// `m(a, b) = m(b, a)` ignoring signs.
    pub fn is_commutative_ungraded(&self) -> bool {
        self.commutes(false)
    }

    /// Homogeneous solutions of `sum_a x_a cond(a)[r] = 0` for all `r`, one
    /// `W`-parity block at a time. `cond` receives the `A`-parity of `e_a`.
    fn graded_solutions(&self, cond: impl Fn(usize, Parity) -> Vec<Scalar>) -> GradedSubspace {
        let n = self.dim();
        let mut dims = [0usize; 2];
        let mut basis = Vec::new();
        for wp in [Parity::Even, Parity::Odd] {
            let idx: Vec<usize> = (0..n).filter(|&a| self.space.parity_unchecked(a as u8 + 1) == wp).collect();
            if idx.is_empty() {
                continue;
            }
            let cols: Vec<Vec<Scalar>> = idx.iter().map(|&a| cond(a, wp.flip())).collect();
            let nr = cols[0].len();
            let rows: Vec<Vec<Scalar>> = (0..nr).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            let m = if rows.is_empty() {
                ExactMatrix::zero(0, idx.len())
            } else {
                ExactMatrix::from_dense(&rows).expect("rectangular")
            };
            let ns = nullspace(&m);
            dims[wp.bit() as usize] = ns.dim();
            for v in ns.basis() {
                let mut full = vec![Scalar::zero(); n];
                for (c, x) in v {
                    full[idx[c]] = x;
                }
                basis.push(full);
            }
        }
        GradedSubspace { even_dim: dims[0], odd_dim: dims[1], basis }
    }

    /// Graded center `{a : m(a,b) = (-1)^{|a||b|} m(b,a) for all b}`.
    pub fn center(&self) -> GradedSubspace {
        let n = self.dim();
        self.graded_solutions(|a, pa| {
            let mut rows = Vec::new();
            for b in 0..n {
                let neg = pa.koszul(self.a_parity(b));
                for k in 0..n {
                    let ba = if neg { -&self.consts[b][a][k] } else { self.consts[b][a][k].clone() };
                    rows.push(&self.consts[a][b][k] - &ba);
                }
            }
            rows
        })
    }

    /// Left annihilator `{x : m(x, b) = 0 for all b}`.
    pub fn left_annihilator(&self) -> GradedSubspace {
        self.graded_solutions(|a, _| self.consts[a].iter().flat_map(|row| row.iter().cloned()).collect())
    }

    /// Right annihilator `{x : m(b, x) = 0 for all b}`.
    pub fn right_annihilator(&self) -> GradedSubspace {
        let n = self.dim();
        self.graded_solutions(|a, _| (0..n).flat_map(|b| self.consts[b][a].iter().cloned()).collect())
    }

    /// The two-sided unit, if any.
    pub fn unit(&self) -> Option<Vec<Scalar>> {
        let n = self.dim();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for b in 0..n {
            for k in 0..n {
                let target = if k == b { Scalar::one() } else { Scalar::zero() };
                rows.push((0..n).map(|a| self.consts[a][b][k].clone()).collect::<Vec<_>>());
                rhs.push(target.clone());
                rows.push((0..n).map(|a| self.consts[b][a][k].clone()).collect::<Vec<_>>());
                rhs.push(target);
            }
        }
        let m = ExactMatrix::from_dense(&rows).ok()?;
        solve(&m, &rhs).ok().flatten()
    }

    /// `A^k = 0` for some `k <= dim + 1`.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.dim();
        let mut cur: Vec<Vec<Scalar>> = (0..n).map(|a| self.e(a)).collect();
        for _ in 0..=n {
            let prods = cur.iter().flat_map(|x| (0..n).map(move |b| (x, b))).map(|(x, b)| sparse_from_dense(&self.mul(x, &self.e(b))));
            let sub = Subspace::span(n, prods);
            if sub.dim() == 0 {
                return true;
            }
            cur = sub.basis().iter().map(|v| crate::linalg::sparse_to_dense(v, n)).collect();
        }
        false
    }

    /// `m^op(a, b) = (-1)^{|a||b|} m(b, a)`.
    pub fn opposite(&self) -> Multiplication {
        let n = self.dim();
        let mut out = Multiplication::zero(self.space);
        for a in 0..n {
            for b in 0..n {
                let neg = self.a_parity(a).koszul(self.a_parity(b));
                for k in 0..n {
                    let c = &self.consts[b][a][k];
                    out.consts[a][b][k] = if neg { -c } else { c.clone() };
                }
            }
        }
        out
    }
}

/// The multiplication encoded by the arity-2 part of `d`.
pub fn to_multiplication(d: &Coderivation) -> Multiplication {
    let space = d.space();
    let mut m = Multiplication::zero(space);
    for ((k, s), c) in d.terms() {
        if s.len() != 2 {
            continue;
        }
        let (a, b) = (s.as_slice()[0], s.as_slice()[1]);
        let c = if sign_a(space, a) { -c } else { c.clone() };
        m.consts[a as usize - 1][b as usize - 1][*k as usize - 1] = c;
    }
    m
}

/// Inverse of [`to_multiplication`].
///
/// Only parity-preserving multiplications give a homogeneous odd `d`;
/// other entries are rejected.
pub fn from_multiplication(m: &Multiplication) -> Result<Coderivation, Error> {
    let space = m.space;
    let n = m.dim();
    let mut d = Coderivation::zero(space, Parity::Odd);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let c = &m.consts[a][b][k];
                if c.is_zero() {
                    continue;
                }
                let (a8, b8, k8) = (a as u8 + 1, b as u8 + 1, k as u8 + 1);
                let c = if sign_a(space, a8) { -c } else { c.clone() };
                d.add_term(c, k8, &[a8, b8])?;
            }
        }
    }
    Ok(d)
}

/// Codifferential of the opposite algebra.
pub fn opposite(d: &Coderivation) -> Coderivation {
    from_multiplication(&to_multiplication(d).opposite()).expect("opposite of a homogeneous d is homogeneous")
}

/// Isomorphism invariants used to separate moduli points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    /// `(even, odd)` dims of `h^0 .. h^3`.
    pub cohomology: Vec<(usize, usize)>,
    pub center: (usize, usize),
    pub unital: bool,
    pub graded_commutative: bool,
    pub nilpotent: bool,
    pub left_annihilator: (usize, usize),
    pub right_annihilator: (usize, usize),
}

impl Fingerprint {
    /// Names of the fields in which `self` and `other` differ.
    pub fn differences(&self, other: &Fingerprint) -> Vec<&'static str> {
        let mut out = Vec::new();
        for n in 0..self.cohomology.len().min(other.cohomology.len()) {
            if self.cohomology[n] != other.cohomology[n] {
                out.push(["h0", "h1", "h2", "h3"][n.min(3)]);
            }
        }
        if self.center != other.center {
            out.push("center");
        }
        if self.unital != other.unital {
            out.push("unital");
        }
        if self.graded_commutative != other.graded_commutative {
            out.push("commutative");
        }
        if self.nilpotent != other.nilpotent {
            out.push("nilpotent");
        }
        if self.left_annihilator != other.left_annihilator {
            out.push("left-annihilator");
        }
        if self.right_annihilator != other.right_annihilator {
            out.push("right-annihilator");
        }
        out
    }
}

pub fn fingerprint(d: &Coderivation) -> Result<Fingerprint, Error> {
    if !is_codifferential(d) {
        return Err(Error::NotCodifferential);
    }
    let cohomology = cohomology_dims(d, 3)?;
    let m = to_multiplication(d);
    Ok(Fingerprint {
        cohomology,
        center: m.center().dims(),
        unital: m.unit().is_some(),
        graded_commutative: m.is_graded_commutative(),
        nilpotent: m.is_nilpotent(),
        left_annihilator: m.left_annihilator().dims(),
        right_annihilator: m.right_annihilator().dims(),
    })
}

/// Helper for literals: `sum_k c_k v_k` in `W` coordinates.
pub fn w_vector(space: GradedSpace, coeffs: &[(u8, i64)]) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); space.dim()];
    for (i, c) in coeffs {
        v[*i as usize - 1] = Scalar::from_int(*c);
    }
    v
}
