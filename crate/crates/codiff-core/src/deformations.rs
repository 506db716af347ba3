//! Universal infinitesimal and versal deformations, relation ideals, and
//! jump detection.
//!
//! The versal family is `F = d + sum_m psi_m t^m` together with relations
//! `r_j` (one per canonical `H^3_even` representative `gamma_j`) and corrected
//! obstruction cochains `Gamma_j = gamma_j + sum_{e != 0} Gamma_{j,e} t^e`.
//! At each order `n` one linear system is solved for the degree-`n` parts of
//! `psi`, `r` and the new `Gamma` terms so that
//! `1/2 [F, F] = sum_j r_j Gamma_j` holds through degree `n`. The family is
//! closed when that identity holds exactly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coderivation::{bracket, is_codifferential, Coderivation};
use crate::equivalence::CatalogIndex;
use crate::graded::{GradedSpace, Parity};
use crate::hochschild::{CochainBasis, Cohomology};
use crate::linalg::{solve_augmented, SparseVec};
use crate::poly::{Monomial, ParamPolynomial};
use crate::scalar::Scalar;
use crate::{catalog, Error};

/// Cochain-valued polynomial: monomial to coefficient cochain.
pub type CochainSeries = BTreeMap<Monomial, Coderivation>;

#[derive(Clone, Debug)]
pub struct DeformationFamily {
    base: Coderivation,
    directions: Vec<Coderivation>,
    terms: CochainSeries,
    gammas: Vec<Coderivation>,
    corrections: Vec<CochainSeries>,
    relations: Vec<ParamPolynomial>,
    order: usize,
}

fn series_add(s: &mut CochainSeries, m: Monomial, f: &Coderivation, c: &Scalar) {
    if f.is_zero() || c.is_zero() {
        return;
    }
    let e = s.entry(m.clone()).or_insert_with(|| Coderivation::zero(f.space(), f.parity()));
    e.add_scaled_assign(f, c);
    if e.is_zero() {
        s.remove(&m);
    }
}

/// `Some(a - b)` if it has no negative exponents.
fn mono_sub(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    a.div(b)
}

impl DeformationFamily {
    /// `d + sum_i delta^i t_i` with the canonical odd `H^2` representatives.
    pub fn infinitesimal_universal(d: &Coderivation) -> Result<Self, Error> {
        let dirs = Cohomology::new(d, 2, Parity::Odd)?.representatives();
        Self::with_directions(d, dirs)
    }

    /// Order-1 family with the given directions (each must be an odd
    /// 2-cocycle; independence is not checked).
    pub fn with_directions(d: &Coderivation, directions: Vec<Coderivation>) -> Result<Self, Error> {
        if !is_codifferential(d) {
            return Err(Error::NotCodifferential);
        }
        let h2 = Cohomology::new(d, 2, Parity::Odd)?;
        for f in &directions {
            if !f.is_zero() && (f.parity() != Parity::Odd || !h2.is_cocycle(f)?) {
                return Err(Error::NotCocycle);
            }
        }
        let r = directions.len();
        let mut terms = CochainSeries::new();
        for (i, f) in directions.iter().enumerate() {
            series_add(&mut terms, Monomial::var(r, i), f, &Scalar::one());
        }
        let gammas = Cohomology::new(d, 3, Parity::Even)?.representatives();
        let nrel = gammas.len();
        Ok(DeformationFamily {
            base: d.clone(),
            directions,
            terms,
            gammas,
            corrections: vec![CochainSeries::new(); nrel],
            relations: vec![ParamPolynomial::zero(r); nrel],
            order: 1,
        })
    }

    pub fn base(&self) -> &Coderivation {
        &self.base
    }

    pub fn directions(&self) -> &[Coderivation] {
        &self.directions
    }

    pub fn parameter_count(&self) -> usize {
        self.directions.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// All terms of degree >= 1.
    pub fn terms(&self) -> &CochainSeries {
        &self.terms
    }

    /// Terms of degree >= 2.
    pub fn higher_order_terms(&self) -> impl Iterator<Item = (&Monomial, &Coderivation)> {
        self.terms.iter().filter(|(m, _)| m.degree() >= 2)
    }

    /// The canonical `H^3_even` representatives the relations multiply.
    pub fn obstruction_classes(&self) -> &[Coderivation] {
        &self.gammas
    }

    /// One relation per `H^3_even` class; some may be zero.
    pub fn relations(&self) -> &[ParamPolynomial] {
        &self.relations
    }

    /// The nonzero relations.
    pub fn relation_ideal(&self) -> Vec<ParamPolynomial> {
        self.relations.iter().filter(|p| !p.is_zero()).cloned().collect()
    }

    /// Degree-`n` homogeneous parts of the nonzero relations.
    pub fn relations_of_degree(&self, n: u32) -> Vec<ParamPolynomial> {
        self.relations.iter().map(|p| p.homogeneous_part(n)).filter(|p| !p.is_zero()).collect()
    }

    /// Runs the construction through `target` (no-op if already there).
    pub fn extend_order(&self, target: usize) -> Result<Self, Error> {
        let mut f = self.clone();
        while f.order < target {
            f.step()?;
        }
        Ok(f)
    }

    /// Extends order by order until closed or `max_order` is reached.
    pub fn versal(d: &Coderivation, max_order: usize) -> Result<Self, Error> {
        Self::infinitesimal_universal(d)?.extend_until_closed(max_order)
    }

    pub fn extend_until_closed(&self, max_order: usize) -> Result<Self, Error> {
        let mut f = self.clone();
        while !f.is_closed() && f.order < max_order {
            f.step()?;
        }
        Ok(f)
    }

    fn step(&mut self) -> Result<(), Error> {
        let n = self.order as u32 + 1;
        let r = self.parameter_count();
        let space = self.base.space();
        let c2 = CochainBasis::with_parity(space, 2, Parity::Odd);
        let c3 = CochainBasis::with_parity(space, 3, Parity::Even);
        let (n2, n3) = (c2.len(), c3.len());
        let ms = Monomial::of_degree(r, n);
        let nrel = self.gammas.len();
        let low: Vec<Option<u32>> = self.relations.iter().map(|p| p.min_degree()).collect();

        // known part K_m
        let mut known: Vec<SparseVec> = Vec::with_capacity(ms.len());
        for m in &ms {
            let mut q = Coderivation::zero(space, Parity::Even);
            for (m1, f1) in &self.terms {
                if let Some(m2) = mono_sub(m, m1) {
                    if let Some(f2) = self.terms.get(&m2) {
                        q.add_scaled_assign(&bracket(f1, f2), &Scalar::from_frac(1, 2));
                    }
                }
            }
            for j in 0..nrel {
                for (a, c) in self.relations[j].terms() {
                    if let Some(e) = mono_sub(m, a) {
                        if let Some(g) = self.corrections[j].get(&e) {
                            q.add_scaled_assign(g, &-c);
                        }
                    }
                }
            }
            known.push(c3.to_vector(&q)?);
        }

        // columns: psi, then Gamma, then r
        let psi_col = |mi: usize, b: usize| mi * n2 + b;
        let mut gamma_cols: Vec<(usize, Monomial, usize)> = Vec::new(); // (j, e, first col)
        let mut next = ms.len() * n2;
        for j in 0..nrel {
            if let Some(o) = low[j] {
                if o < n {
                    for e in Monomial::of_degree(r, n - o) {
                        gamma_cols.push((j, e, next));
                        next += n3;
                    }
                }
            }
        }
        let r_col0 = next;
        let r_col = |j: usize, mi: usize| r_col0 + j * ms.len() + mi;
        let rhs = r_col0 + nrel * ms.len();

        let images: Vec<SparseVec> =
            (0..n2).map(|b| c3.to_vector(&bracket(&self.base, &c2.element(b)))).collect::<Result<_, _>>()?;
        let gamma_vecs: Vec<SparseVec> = self.gammas.iter().map(|g| c3.to_vector(g)).collect::<Result<_, _>>()?;

        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); ms.len() * n3];
        let mut put = |row: usize, col: usize, v: Scalar| {
            let e = rows[row].entry(col).or_default();
            *e += &v;
            if e.is_zero() {
                rows[row].remove(&col);
            }
        };
        for (mi, m) in ms.iter().enumerate() {
            let row = |cc: usize| mi * n3 + cc;
            for (b, img) in images.iter().enumerate() {
                for (cc, v) in img {
                    put(row(*cc), psi_col(mi, b), v.clone());
                }
            }
            for j in 0..nrel {
                for (cc, v) in &gamma_vecs[j] {
                    put(row(*cc), r_col(j, mi), -v);
                }
            }
            for (j, e, col0) in &gamma_cols {
                let o = low[*j].expect("gamma columns only for started relations");
                for (a, cf) in self.relations[*j].terms() {
                    if a.degree() != o || a.mul(e) != *m {
                        continue;
                    }
                    for cc in 0..n3 {
                        put(row(cc), col0 + cc, -cf);
                    }
                }
            }
            for (cc, v) in &known[mi] {
                put(row(*cc), rhs, -v);
            }
        }
        let sparse: Vec<SparseVec> = rows.into_iter().filter(|r| !r.is_empty()).map(|r| r.into_iter().collect()).collect();
        let sol = solve_augmented(rhs, &sparse).ok_or(Error::Unsupported("inconsistent versal system"))?;

        let mut new_rel: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); nrel];
        for (col, v) in sol {
            if col < ms.len() * n2 {
                let (mi, b) = (col / n2, col % n2);
                series_add(&mut self.terms, ms[mi].clone(), &c2.element(b), &v);
            } else if col < r_col0 {
                let k = gamma_cols.partition_point(|(_, _, c0)| *c0 <= col) - 1;
                let (j, e, c0) = &gamma_cols[k];
                series_add(&mut self.corrections[*j], e.clone(), &c3.element(col - c0), &v);
            } else {
                let off = col - r_col0;
                let (j, mi) = (off / ms.len(), off % ms.len());
                new_rel[j].push((ms[mi].clone(), v));
            }
        }
        for (j, ts) in new_rel.into_iter().enumerate() {
            for (m, v) in ts {
                self.relations[j].add_term(m, v);
            }
        }
        self.order += 1;
        Ok(())
    }

    /// `1/2 [F, F] - sum_j r_j Gamma_j`, as a cochain-valued polynomial.
    pub fn residual(&self) -> CochainSeries {
        let r = self.parameter_count();
        let mut all = self.terms.clone();
        all.insert(Monomial::one(r), self.base.clone());
        let half = Scalar::from_frac(1, 2);
        let mut out = CochainSeries::new();
        for (m1, f1) in &all {
            for (m2, f2) in &all {
                series_add(&mut out, m1.mul(m2), &bracket(f1, f2), &half);
            }
        }
        for j in 0..self.gammas.len() {
            let mut g = self.corrections[j].clone();
            g.insert(Monomial::one(r), self.gammas[j].clone());
            for (a, c) in self.relations[j].terms() {
                for (e, ge) in &g {
                    series_add(&mut out, a.mul(e), ge, &-c);
                }
            }
        }
        out
    }

    /// The identity `1/2 [F, F] = sum_j r_j Gamma_j` holds exactly.
    pub fn is_closed(&self) -> bool {
        self.residual().is_empty()
    }

    /// The first relation violated by `values`, if any.
    pub fn violated_relation(&self, values: &[Scalar]) -> Option<usize> {
        self.relations.iter().position(|p| !p.is_zero() && !p.eval(values).is_zero())
    }

    /// The codifferential at the given parameter values.
    pub fn evaluate_at(&self, values: &[Scalar]) -> Result<Coderivation, Error> {
        if values.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch { expected: self.parameter_count(), found: values.len() });
        }
        if let Some(j) = self.violated_relation(values) {
            return Err(Error::RelationViolated { relation: j });
        }
        let mut x = self.base.clone();
        for (m, f) in &self.terms {
            x.add_scaled_assign(f, &m.eval(values));
        }
        Ok(x)
    }
}

/// A parameter frame: directions chosen by hand, expressed in the canonical
/// representatives. `matrix[a][i]` is the `i`-th canonical coordinate of
/// direction `a`, so canonical parameters are `s_i = sum_a t_a matrix[a][i]`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub directions: Vec<Coderivation>,
    pub matrix: Vec<Vec<Scalar>>,
}

impl Frame {
    pub fn new(d: &Coderivation, directions: Vec<Coderivation>) -> Result<Self, Error> {
        let h2 = Cohomology::new(d, 2, Parity::Odd)?;
        let matrix = directions.iter().map(|f| h2.coordinates(f)).collect::<Result<Vec<_>, _>>()?;
        Ok(Frame { directions, matrix })
    }

    /// Canonical frame (identity matrix) of dimension `r`.
    pub fn canonical(d: &Coderivation) -> Result<Self, Error> {
        let dirs = Cohomology::new(d, 2, Parity::Odd)?.representatives();
        Self::new(d, dirs)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn to_canonical(&self, t: &[Scalar]) -> Vec<Scalar> {
        let r = self.matrix.first().map_or(0, |v| v.len());
        (0..r).map(|i| t.iter().zip(&self.matrix).fold(Scalar::zero(), |s, (ta, row)| s + ta * &row[i])).collect()
    }

    /// Rewrites a polynomial in canonical parameters in this frame's parameters.
    pub fn pull_back(&self, p: &ParamPolynomial) -> ParamPolynomial {
        let r = p.nvars();
        let map: Vec<Vec<Scalar>> = (0..r).map(|i| self.matrix.iter().map(|row| row[i].clone()).collect()).collect();
        if map.is_empty() {
            return ParamPolynomial::zero(self.len());
        }
        p.substitute_linear(&map)
    }
}

type Raw = &'static [(i64, u8, [u8; 2])];

fn build(raw: Raw) -> Coderivation {
    let mut c = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
    for &(x, t, s) in raw {
        c.add_term(Scalar::from_int(x), t, &s).expect("odd literal");
    }
    c
}

/// Hand-picked directions for the entries whose prose fixes a parametrization.
pub fn reference_directions(k: usize) -> Option<Vec<Coderivation>> {
    let raw: &[Raw] = match k {
        2 => &[&[(1, 2, [2, 2])]],
        6 => &[&[(1, 2, [1, 1])]],
        8 => &[&[(-1, 3, [1, 1]), (1, 2, [2, 2])]],
        9 => &[&[(-1, 1, [1, 2]), (1, 1, [2, 1]), (1, 2, [2, 2])]],
        20 => &[&[(1, 3, [2, 2])]],
        21 => &[&[(1, 1, [2, 1])], &[(1, 2, [2, 2])]],
        22 => &[&[(1, 2, [2, 2])], &[(1, 1, [1, 2])]],
        23 => &[&[(1, 3, [1, 1])], &[(1, 2, [2, 2])]],
        24 => &[&[(1, 2, [2, 2])], &[(1, 1, [1, 2])], &[(1, 2, [1, 1])]],
        25 => &[&[(1, 2, [2, 2])], &[(1, 1, [2, 1])], &[(1, 1, [1, 2])], &[(1, 2, [1, 1])]],
        26 => &[&[(1, 3, [3, 3])], &[(-1, 1, [1, 3]), (1, 1, [3, 1]), (1, 3, [1, 1])]],
        27 => &[
            &[(1, 2, [3, 3])],
            &[(-1, 1, [1, 2]), (1, 1, [2, 1]), (1, 2, [2, 2])],
            &[(1, 2, [2, 3]), (1, 2, [3, 2]), (1, 1, [3, 1]), (-1, 1, [1, 3])],
            &[(1, 3, [3, 3])],
        ],
        28 => &[
            &[(1, 2, [1, 1])],
            &[(1, 3, [3, 3])],
            &[(1, 2, [2, 2]), (1, 3, [2, 3]), (1, 3, [3, 2])],
            &[(1, 1, [3, 1])],
            &[(1, 1, [1, 3])],
        ],
        _ => return None,
    };
    Some(raw.iter().map(|r| build(r)).collect())
}

/// Frame in which the stated order-2 relations are compared. Equal to the
/// reference directions except for `d22`, whose stated relation
/// `t1 (t2 + t1)` holds with the two directions in the other order.
pub fn relation_frame(k: usize) -> Option<Vec<Coderivation>> {
    if k == 22 {
        return Some(vec![build(&[(1, 1, [1, 2])]), build(&[(1, 2, [2, 2])])]);
    }
    reference_directions(k)
}

/// The stated order-2 relation ideal in [`relation_frame`] parameters.
pub fn reference_relations(k: usize) -> Option<Vec<ParamPolynomial>> {
    let t = |n: usize, i: usize| ParamPolynomial::var(n, i);
    Some(match k {
        21 => vec![&t(2, 0) * &(&t(2, 1) - &t(2, 0))],
        22 => vec![&t(2, 0) * &(&t(2, 1) + &t(2, 0))],
        23 => vec![],
        24 => vec![&t(3, 1) * &(&t(3, 0) + &t(3, 1)), &t(3, 1) * &t(3, 2)],
        27 => {
            let (a, b, c, d) = (t(4, 0), t(4, 1), t(4, 2), t(4, 3));
            vec![&(&(&a * &b) - &(&c * &c)) + &(&c * &d)]
        }
        _ => return None,
    })
}

pub type PointFn = fn(&[Scalar]) -> Vec<Scalar>;

/// A solution branch of the relation ideal, parametrized by `free` values.
#[derive(Clone, Copy)]
pub struct Branch {
    pub name: &'static str,
    /// Jump target stated in the prose, if any.
    pub stated_target: Option<usize>,
    pub free: usize,
    pub point: PointFn,
}

impl core::fmt::Debug for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Branch").field("name", &self.name).field("stated_target", &self.stated_target).finish()
    }
}

fn z() -> Scalar {
    Scalar::zero()
}

fn half(x: &Scalar) -> Scalar {
    x * &Scalar::from_frac(1, 2)
}

fn sq(x: &Scalar) -> Scalar {
    x * x
}

const fn br(name: &'static str, target: usize, free: usize, point: PointFn) -> Branch {
    Branch { name, stated_target: Some(target), free, point }
}

/// Branch parametrizations in the frame of [`reference_directions`],
/// transcribed from the case analyses in the prose.
pub fn branches(k: usize) -> Option<Vec<Branch>> {
    let line: PointFn = |u| vec![u[0].clone()];
    Some(match k {
        2 | 6 | 8 | 9 => vec![br("t", 1, 1, line)],
        20 => vec![br("t", 7, 1, line)],
        21 => vec![
            br("t1 = 0", 3, 1, |u| vec![z(), u[0].clone()]),
            br("t1 = t2", 5, 1, |u| vec![u[0].clone(), u[0].clone()]),
        ],
        22 => vec![
            br("t2 = 0", 4, 1, |u| vec![u[0].clone(), z()]),
            br("t1 = -t2", 5, 1, |u| vec![-&u[0], u[0].clone()]),
        ],
        23 => vec![
            br("t1 t2 != 0", 1, 2, |u| vec![u[0].clone(), u[1].clone()]),
            br("t2 = 0", 2, 1, |u| vec![u[0].clone(), z()]),
            br("t1 = 0", 7, 1, |u| vec![z(), u[0].clone()]),
        ],
        24 => vec![
            br("t2 = 0", 1, 2, |u| vec![u[0].clone(), z(), u[1].clone()]),
            br("t2 = t3 = 0", 7, 1, |u| vec![u[0].clone(), z(), z()]),
            br("t1 = t2 = 0", 8, 1, |u| vec![z(), z(), u[0].clone()]),
            br("t2 = -t1, t3 = 0", 5, 1, |u| vec![u[0].clone(), -&u[0], z()]),
        ],
        25 => vec![
            br("t2 = t3 = t4 = 0", 6, 1, |u| vec![u[0].clone(), z(), z(), z()]),
            br("t2 = t1, t3 = t4 = 0", 4, 1, |u| vec![u[0].clone(), u[0].clone(), z(), z()]),
            br("t3 = -t1, t2 = t4 = 0", 3, 1, |u| vec![u[0].clone(), z(), -&u[0], z()]),
            br("t2 = -t3 = t1", 1, 2, |u| vec![u[0].clone(), u[0].clone(), -&u[0], u[1].clone()]),
            br("t2 = -t3 = t1, t4 = 0", 7, 1, |u| vec![u[0].clone(), u[0].clone(), -&u[0], z()]),
            br("t1 = t2 = t3 = 0", 9, 1, |u| vec![z(), z(), z(), u[0].clone()]),
        ],
        26 => vec![
            br("generic", 1, 2, |u| vec![u[0].clone(), u[1].clone()]),
            br("t1 = t2", 2, 1, |u| vec![u[0].clone(), u[0].clone()]),
            br("t1 = 2 t2", 8, 1, |u| vec![&u[0] * &Scalar::from_int(2), u[0].clone()]),
            br("t2 = 0", 9, 1, |u| vec![u[0].clone(), z()]),
        ],
        27 => vec![
            br("generic", 1, 3, |u| {
                let (a, b, c) = (&u[0], &u[1], &u[2]);
                vec![&(&sq(b) - &(b * c)) / a, a.clone(), b.clone(), c.clone()]
            }),
            br("t4 = 0", 2, 2, |u| vec![&sq(&u[1]) / &u[0], u[0].clone(), u[1].clone(), z()]),
            br("t2 = t3 = 0", 9, 2, |u| vec![u[0].clone(), z(), z(), u[1].clone()]),
            br("t2 = t3 = t4 = 0", 26, 1, |u| vec![u[0].clone(), z(), z(), z()]),
            br("t2 = 0, t3 = t4", 8, 2, |u| vec![u[0].clone(), z(), u[1].clone(), u[1].clone()]),
        ],
        28 => d28_branches(),
        _ => return None,
    })
}

fn d28_branches() -> Vec<Branch> {
    vec![
        br("S1", 6, 2, |u| vec![z(), u[0].clone(), u[1].clone(), z(), z()]),
        br("S1, t3 = -t2^2/4", 20, 1, |u| vec![z(), u[0].clone(), -&(&sq(&u[0]) * &Scalar::from_frac(1, 4)), z(), z()]),
        br("S1, t3 = 0", 25, 1, |u| vec![z(), u[0].clone(), z(), z(), z()]),
        br("S2", 3, 2, |u| {
            let (a, e) = (&u[0], &u[1]);
            vec![z(), a.clone(), e * &(a + e), z(), e.clone()]
        }),
        br("S2, t5 = -t2/2", 18, 1, |u| {
            let a = &u[0];
            vec![z(), a.clone(), -&sq(&half(a)), z(), -&half(a)]
        }),
        br("S2, t5 = -t2", 21, 1, |u| vec![z(), u[0].clone(), z(), z(), -&u[0]]),
        br("S2, t5 = 0", 25, 1, |u| vec![z(), u[0].clone(), z(), z(), z()]),
        br("S3", 4, 2, |u| {
            let (a, d) = (&u[0], &u[1]);
            vec![z(), a.clone(), d * &(d - a), d.clone(), z()]
        }),
        br("S3, t4 = t2/2", 19, 1, |u| {
            let a = &u[0];
            vec![z(), a.clone(), -&sq(&half(a)), half(a), z()]
        }),
        br("S3, t4 = t2", 22, 1, |u| vec![z(), u[0].clone(), z(), u[0].clone(), z()]),
        br("S3, t4 = 0", 25, 1, |u| vec![z(), u[0].clone(), z(), z(), z()]),
        br("S4", 6, 2, |u| {
            let (a, e) = (&u[0], &u[1]);
            vec![z(), a.clone(), e * &(a + e), -e, e.clone()]
        }),
        br("S4, t5 = -t2/2", 24, 1, |u| {
            let a = &u[0];
            vec![z(), a.clone(), -&sq(&half(a)), half(a), -&half(a)]
        }),
        br("S4, t5 = -t2", 23, 1, |u| vec![z(), u[0].clone(), z(), u[0].clone(), -&u[0]]),
        br("S4, t5 = 0", 25, 1, |u| vec![z(), u[0].clone(), z(), z(), z()]),
        br("S5", 5, 2, |u| {
            let (d, e) = (&u[0], &u[1]);
            vec![z(), d - e, d * e, d.clone(), e.clone()]
        }),
        br("S5, t4 = 0", 21, 1, |u| vec![z(), -&u[0], z(), z(), u[0].clone()]),
        br("S5, t5 = 0", 22, 1, |u| vec![z(), u[0].clone(), z(), u[0].clone(), z()]),
        br("S5, t4 = -t5", 24, 1, |u| {
            let e = &u[0];
            vec![z(), e * &Scalar::from_int(-2), -&sq(e), -e, e.clone()]
        }),
        br("H", 1, 3, |u| {
            let (c, a, d) = (&u[0], &u[1], &u[2]);
            vec![c.clone(), a.clone(), d * &(d - a), d.clone(), -d]
        }),
        br("H, t2 = t4", 2, 2, |u| {
            let (c, d) = (&u[0], &u[1]);
            vec![c.clone(), d.clone(), z(), d.clone(), -d]
        }),
        br("H, t1 = 0", 6, 2, |u| {
            let (a, d) = (&u[0], &u[1]);
            vec![z(), a.clone(), d * &(d - a), d.clone(), -d]
        }),
        br("H, t4 = t2/2", 8, 2, |u| {
            let (c, a) = (&u[0], &u[1]);
            vec![c.clone(), a.clone(), -&sq(&half(a)), half(a), -&half(a)]
        }),
        br("H, t4 = 0", 9, 2, |u| vec![u[0].clone(), u[1].clone(), z(), z(), z()]),
        br("H, t4 = t2, t1 = 0", 23, 1, |u| vec![z(), u[0].clone(), z(), u[0].clone(), -&u[0]]),
        br("H, t4 = t2/2, t1 = 0", 24, 1, |u| {
            let a = &u[0];
            vec![z(), a.clone(), -&sq(&half(a)), half(a), -&half(a)]
        }),
        br("H, t4 = t1 = 0", 25, 1, |u| vec![z(), u[0].clone(), z(), z(), z()]),
        br("H, t2 = t4 = 0", 26, 1, |u| vec![u[0].clone(), z(), z(), z(), z()]),
    ]
}

/// Deterministic sample points: the first `count` ordered selections of
/// distinct seeds.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub seeds: Vec<Scalar>,
    pub samples_per_branch: usize,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            seeds: vec![
                Scalar::from_int(3),
                Scalar::from_frac(-7, 2),
                Scalar::from_frac(5, 3),
                Scalar::from_int(11),
                Scalar::from_frac(-13, 5),
                Scalar::from_frac(17, 4),
            ],
            samples_per_branch: 3,
        }
    }
}

impl SamplePlan {
    pub fn points(&self, free: usize) -> Vec<Vec<Scalar>> {
        fn rec(seeds: &[Scalar], free: usize, used: &mut Vec<usize>, out: &mut Vec<Vec<Scalar>>, want: usize) {
            if out.len() >= want {
                return;
            }
            if used.len() == free {
                out.push(used.iter().map(|&i| seeds[i].clone()).collect());
                return;
            }
            for i in 0..seeds.len() {
                if !used.contains(&i) {
                    used.push(i);
                    rec(seeds, free, used, out, want);
                    used.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&self.seeds, free, &mut Vec::new(), &mut out, self.samples_per_branch);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchOutcome {
    /// All samples identify as this catalog entry, different from the base.
    Jump(usize),
    /// Samples identify as the base itself.
    NoJump,
    /// Some sample matched no catalog fingerprint.
    Unidentified,
    /// Samples disagree: some point lies on a special sub-locus.
    Unstable,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub frame_values: Vec<Scalar>,
    pub identified: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub name: String,
    pub stated_target: Option<usize>,
    pub samples: Vec<Sample>,
    pub outcome: BranchOutcome,
}

#[derive(Clone, Debug)]
pub struct JumpReport {
    pub base: usize,
    pub parameters: usize,
    pub order: usize,
    pub closed: bool,
    pub branches: Vec<BranchReport>,
}

impl JumpReport {
    pub fn out_edges(&self) -> BTreeSet<usize> {
        self.branches
            .iter()
            .filter_map(|b| match b.outcome {
                BranchOutcome::Jump(k) => Some(k),
                _ => None,
            })
            .collect()
    }
}

/// Evaluates `family` on every branch sample and identifies the result.
///
/// `frame` expresses branch coordinates in canonical parameters.
pub fn detect_jumps(
    base: usize,
    family: &DeformationFamily,
    frame: &Frame,
    branches: &[Branch],
    plan: &SamplePlan,
    index: &CatalogIndex,
) -> Result<JumpReport, Error> {
    let mut reports = Vec::new();
    for b in branches {
        let mut samples = Vec::new();
        for u in plan.points(b.free) {
            let t = (b.point)(&u);
            let s = frame.to_canonical(&t);
            let x = family.evaluate_at(&s)?;
            if !is_codifferential(&x) {
                return Err(Error::NotCodifferential);
            }
            samples.push(Sample { frame_values: t, identified: index.identify(&x)? });
        }
        let first = samples.first().and_then(|s| s.identified);
        let outcome = if samples.iter().any(|s| s.identified.is_none()) {
            BranchOutcome::Unidentified
        } else if samples.iter().any(|s| s.identified != first) {
            BranchOutcome::Unstable
        } else if first == Some(base) {
            BranchOutcome::NoJump
        } else {
            BranchOutcome::Jump(first.expect("identified"))
        };
        reports.push(BranchReport { name: String::from(b.name), stated_target: b.stated_target, samples, outcome });
    }
    Ok(JumpReport {
        base,
        parameters: family.parameter_count(),
        order: family.order(),
        closed: family.is_closed(),
        branches: reports,
    })
}

/// Versal family, frame and branches for catalog entry `k`, then jumps.
///
/// Entries without transcribed branch data get a single line in each
/// canonical direction.
pub fn catalog_jumps(k: usize, plan: &SamplePlan, index: &CatalogIndex, max_order: usize) -> Result<JumpReport, Error> {
    let d = catalog::codifferential(k)?;
    let family = DeformationFamily::versal(&d, max_order)?;
    let (frame, branch_list) = match (reference_directions(k), branches(k)) {
        (Some(dirs), Some(bs)) => (Frame::new(&d, dirs)?, bs),
        _ => {
            let frame = Frame::canonical(&d)?;
            let bs = match frame.len() {
                0 => Vec::new(),
                1 => vec![Branch { name: "t", stated_target: None, free: 1, point: |u| vec![u[0].clone()] }],
                _ => return Err(Error::Unsupported("no branch data for a multi-parameter family")),
            };
            (frame, bs)
        }
    };
    detect_jumps(k, &family, &frame, &branch_list, plan, index)
}

/// Detected jumps over the whole catalog.
#[derive(Clone, Debug)]
pub struct JumpGraph {
    pub reports: Vec<JumpReport>,
}

impl JumpGraph {
    pub fn build(plan: &SamplePlan, max_order: usize) -> Result<Self, Error> {
        let index = CatalogIndex::new()?;
        let reports = (1..=catalog::COUNT).map(|k| catalog_jumps(k, plan, &index, max_order)).collect::<Result<_, _>>()?;
        Ok(JumpGraph { reports })
    }

    pub fn edges(&self) -> BTreeMap<usize, BTreeSet<usize>> {
        self.reports.iter().map(|r| (r.base, r.out_edges())).collect()
    }

    pub fn self_loops(&self) -> Vec<usize> {
        self.edges().into_iter().filter(|(k, es)| es.contains(k)).map(|(k, _)| k).collect()
    }

    /// Triples `(a, b, c)` with `a -> b -> c` but no edge `a -> c`.
    pub fn transitivity_violations(&self) -> Vec<(usize, usize, usize)> {
        let e = self.edges();
        let mut out = Vec::new();
        for (a, bs) in &e {
            for b in bs {
                for c in e.get(b).into_iter().flatten() {
                    if c != a && !bs.contains(c) {
                        out.push((*a, *b, *c));
                    }
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph jumps {\n");
        for k in 1..=catalog::COUNT {
            s.push_str(&alloc::format!("  d{};\n", k));
        }
        for (a, bs) in self.edges() {
            for b in bs {
                s.push_str(&alloc::format!("  d{} -> d{};\n", a, b));
            }
        }
        s.push_str("}\n");
        s
    }
}
