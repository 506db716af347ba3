//! Parity-preserving automorphisms, transport of codifferentials, and a
//! sound (not complete) isomorphism search.
//!
//! Transport is `g*(d) = g^{-1} o d o (g (x) ... (x) g)`. It is a right
//! action: `(gh)*(d) = h*(g*(d))`.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{fingerprint, Fingerprint};
use crate::catalog;
use crate::coderivation::Coderivation;
use crate::graded::{GradedSpace, Parity};
use crate::linalg::{inverse, ExactMatrix};
use crate::poly::ParamPolynomial;
use crate::scalar::Scalar;
use crate::Error;

/// An even invertible linear map of a graded space; `g(v_j) = sum_i g_ij v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAutomorphism {
    space: GradedSpace,
    matrix: ExactMatrix,
    inverse: ExactMatrix,
}

impl GradedAutomorphism {
    pub fn new(space: GradedSpace, rows: &[Vec<Scalar>]) -> Result<Self, Error> {
        let n = space.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
        }
        for i in 0..n {
            for j in 0..n {
                let same = space.parity_unchecked(i as u8 + 1) == space.parity_unchecked(j as u8 + 1);
                if !same && !rows[i][j].is_zero() {
                    return Err(Error::Unsupported("automorphism mixes parities"));
                }
            }
        }
        let matrix = ExactMatrix::from_dense(rows)?;
        let inverse = inverse(&matrix).ok_or(Error::SingularAutomorphism)?;
        Ok(GradedAutomorphism { space, matrix, inverse })
    }

    pub fn identity(space: GradedSpace) -> Self {
        let n = space.dim();
        GradedAutomorphism { space, matrix: ExactMatrix::identity(n), inverse: ExactMatrix::identity(n) }
    }

    /// Sends `v_j` to `diag[j-1] * v_{perm[j-1]}`.
    pub fn permuted_diagonal(space: GradedSpace, perm: &[u8], diag: &[Scalar]) -> Result<Self, Error> {
        let n = space.dim();
        let mut rows = vec![vec![Scalar::zero(); n]; n];
        for j in 0..n {
            rows[perm[j] as usize - 1][j] = diag[j].clone();
        }
        Self::new(space, &rows)
    }

    pub fn space(&self) -> GradedSpace {
        self.space
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &ExactMatrix {
        &self.inverse
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.matrix.to_dense()
    }

    pub fn inverse(&self) -> GradedAutomorphism {
        GradedAutomorphism { space: self.space, matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &GradedAutomorphism) -> GradedAutomorphism {
        GradedAutomorphism {
            space: self.space,
            matrix: self.matrix.mul(&other.matrix).expect("square"),
            inverse: other.inverse.mul(&self.inverse).expect("square"),
        }
    }
}

/// `g*(d) = g^{-1} o d o g^{(x) n}` on every arity.
pub fn transport(g: &GradedAutomorphism, d: &Coderivation) -> Result<Coderivation, Error> {
    if g.space != d.space() {
        return Err(Error::SpaceMismatch);
    }
    let inv_t = g.inverse.transpose();
    let mut out = Coderivation::zero(d.space(), d.parity());
    for ((k, sources), c) in d.terms() {
        // expand each source index a_r into sum_i g_{a_r i}
        let mut partial: Vec<(Vec<u8>, Scalar)> = vec![(Vec::new(), c.clone())];
        for &a in sources.as_slice() {
            let row = g.matrix.row(a as usize - 1);
            let mut next = Vec::with_capacity(partial.len() * row.len());
            for (w, x) in &partial {
                for (i, gi) in row {
                    let mut w2 = w.clone();
                    w2.push(*i as u8 + 1);
                    next.push((w2, x * gi));
                }
            }
            partial = next;
        }
        for (l, gl) in inv_t.row(*k as usize - 1) {
            for (w, x) in &partial {
                out.add_term(x * gl, *l as u8 + 1, w)?;
            }
        }
    }
    Ok(out)
}

/// Exact check of `transport(g, d1) == d2`.
pub fn verify(g: &GradedAutomorphism, d1: &Coderivation, d2: &Coderivation) -> bool {
    transport(g, d1).is_ok_and(|t| &t == d2)
}

pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub witness: Option<GradedAutomorphism>,
    /// Fields in which the fingerprints differ (non-empty proves non-equivalence).
    pub fingerprint_differences: Vec<&'static str>,
    /// Solver nodes visited.
    pub attempts: usize,
    pub budget_exhausted: bool,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Multiplicative set tried for free diagonal entries.
pub fn scaling_set() -> Vec<Scalar> {
    let mut out = Vec::new();
    for (p, q) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3)] {
        let x = Scalar::from_frac(p, q);
        out.push(x.clone());
        out.push(-&x);
        if p == 1 && q == 1 {
            out.push(Scalar::i());
            out.push(-&Scalar::i());
        }
    }
    out
}

struct Template {
    // matrix entries as polynomials in the template variables
    entries: Vec<Vec<ParamPolynomial>>,
    // per variable: true if it sits on the (permuted) diagonal
    diagonal: Vec<bool>,
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Templates in search order: permuted diagonals, then one off-diagonal
/// unknown, then all off-diagonal unknowns of each parity block.
fn templates(space: GradedSpace) -> Vec<Template> {
    let n = space.dim();
    let even: Vec<u8> = (1..=space.even_dim as u8).collect();
    let odd: Vec<u8> = (space.even_dim as u8 + 1..=n as u8).collect();
    let mut perms = Vec::new();
    for pe in permutations(&even) {
        for po in permutations(&odd) {
            let mut p = pe.clone();
            p.extend(po);
            perms.push(p);
        }
    }
    let same_block = |i: usize, j: usize| space.parity_unchecked(i as u8 + 1) == space.parity_unchecked(j as u8 + 1);
    let build = |perm: &[u8], off: &[(usize, usize)]| -> Template {
        let nv = n + off.len();
        let mut entries = vec![vec![ParamPolynomial::zero(nv); n]; n];
        for j in 0..n {
            entries[perm[j] as usize - 1][j] = ParamPolynomial::var(nv, j);
        }
        for (k, (i, j)) in off.iter().enumerate() {
            entries[*i][*j] = ParamPolynomial::var(nv, n + k);
        }
        let mut diagonal = vec![true; n];
        diagonal.extend(core::iter::repeat_n(false, off.len()));
        Template { entries, diagonal }
    };
    let off_positions = |perm: &[u8]| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if same_block(i, j) && perm[j] as usize - 1 != i {
                    v.push((i, j));
                }
            }
        }
        v
    };
    let mut out: Vec<Template> = perms.iter().map(|p| build(p, &[])).collect();
    for p in &perms {
        for pos in off_positions(p) {
            out.push(build(p, &[pos]));
        }
    }
    let id: Vec<u8> = (1..=n as u8).collect();
    let all = off_positions(&id);
    if all.len() > 1 {
        out.push(build(&id, &all));
    }
    out
}

/// Polynomial equations for `d1 o (g (x) g) = g o d2`, arity 2 only.
fn equations(d1: &Coderivation, d2: &Coderivation, g: &[Vec<ParamPolynomial>]) -> Vec<ParamPolynomial> {
    let n = g.len();
    let nv = g[0][0].nvars();
    // index (l, i, j) -> l*n*n + i*n + j
    let mut eq = vec![ParamPolynomial::zero(nv); n * n * n];
    for ((k, s), c) in d1.terms() {
        let (a, b) = (s.as_slice()[0] as usize - 1, s.as_slice()[1] as usize - 1);
        for i in 0..n {
            if g[a][i].is_zero() {
                continue;
            }
            for j in 0..n {
                if g[b][j].is_zero() {
                    continue;
                }
                let idx = (*k as usize - 1) * n * n + i * n + j;
                eq[idx] = &eq[idx] + &(&g[a][i] * &g[b][j]).scale(c);
            }
        }
    }
    for ((k, s), c) in d2.terms() {
        let (i, j) = (s.as_slice()[0] as usize - 1, s.as_slice()[1] as usize - 1);
        for l in 0..n {
            if g[l][*k as usize - 1].is_zero() {
                continue;
            }
            let idx = l * n * n + i * n + j;
            eq[idx] = &eq[idx] - &g[l][*k as usize - 1].scale(c);
        }
    }
    eq.into_iter().filter(|p| !p.is_zero()).collect()
}

struct Solver<'a> {
    d1: &'a Coderivation,
    d2: &'a Coderivation,
    space: GradedSpace,
    template: &'a Template,
    scalings: &'a [Scalar],
    attempts: usize,
    budget: usize,
}

impl Solver<'_> {
    fn run(&mut self, eqs: Vec<ParamPolynomial>, assign: &mut Vec<Option<Scalar>>) -> Option<GradedAutomorphism> {
        if self.attempts >= self.budget {
            return None;
        }
        self.attempts += 1;
        let eqs: Vec<ParamPolynomial> = eqs.into_iter().filter(|p| !p.is_zero()).collect();
        if eqs.iter().any(|p| p.variables().is_empty()) {
            return None;
        }
        let free: Vec<usize> = (0..assign.len()).filter(|&v| assign[v].is_none()).collect();
        if free.is_empty() {
            return self.candidate(assign);
        }
        // an equation in one variable fixes it
        for p in &eqs {
            let vars = p.variables();
            if vars.len() != 1 {
                continue;
            }
            let v = vars[0];
            if let Some(roots) = p.univariate_roots(v) {
                for r in roots {
                    if self.template.diagonal[v] && r.is_zero() {
                        continue;
                    }
                    if let Some(g) = self.assign_and_run(&eqs, assign, v, r) {
                        return Some(g);
                    }
                }
                return None;
            }
        }
        let v = free[0];
        let occurs = eqs.iter().any(|p| p.variables().contains(&v));
        let values: Vec<Scalar> = match (self.template.diagonal[v], occurs) {
            (true, false) => vec![Scalar::one()],
            (false, false) => vec![Scalar::zero()],
            (true, true) => self.scalings.to_vec(),
            (false, true) => core::iter::once(Scalar::zero()).chain(self.scalings.iter().cloned()).collect(),
        };
        for x in values {
            if let Some(g) = self.assign_and_run(&eqs, assign, v, x) {
                return Some(g);
            }
        }
        None
    }

    fn assign_and_run(
        &mut self,
        eqs: &[ParamPolynomial],
        assign: &mut Vec<Option<Scalar>>,
        v: usize,
        x: Scalar,
    ) -> Option<GradedAutomorphism> {
        let next: Vec<ParamPolynomial> = eqs.iter().map(|p| p.substitute_value(v, &x)).collect();
        assign[v] = Some(x);
        let r = self.run(next, assign);
        assign[v] = None;
        r
    }

    fn candidate(&self, assign: &[Option<Scalar>]) -> Option<GradedAutomorphism> {
        let vals: Vec<Scalar> = assign.iter().map(|x| x.clone().expect("assigned")).collect();
        let rows: Vec<Vec<Scalar>> =
            self.template.entries.iter().map(|row| row.iter().map(|p| p.eval(&vals)).collect()).collect();
        let g = GradedAutomorphism::new(self.space, &rows).ok()?;
        verify(&g, self.d1, self.d2).then_some(g)
    }
}

/// Searches for `g` with `transport(g, d1) == d2`.
///
/// Fingerprint mismatch is reported as proof of non-equivalence; otherwise
/// templates are tried in a fixed order and the first verified witness wins.
pub fn find_isomorphism(d1: &Coderivation, d2: &Coderivation, budget: usize) -> Result<SearchOutcome, Error> {
    if d1.space() != d2.space() {
        return Err(Error::SpaceMismatch);
    }
    for d in [d1, d2] {
        if d.arities().iter().any(|&a| a != 2) {
            return Err(Error::Unsupported("isomorphism search needs arity-2 codifferentials"));
        }
    }
    let (f1, f2) = (fingerprint(d1)?, fingerprint(d2)?);
    let diffs = f1.differences(&f2);
    if !diffs.is_empty() {
        return Ok(SearchOutcome { witness: None, fingerprint_differences: diffs, attempts: 0, budget_exhausted: false });
    }
    let space = d1.space();
    let scalings = scaling_set();
    let mut attempts = 0;
    for t in templates(space) {
        let eqs = equations(d1, d2, &t.entries);
        let mut solver =
            Solver { d1, d2, space, template: &t, scalings: &scalings, attempts, budget };
        let mut assign = vec![None; t.diagonal.len()];
        let w = solver.run(eqs, &mut assign);
        attempts = solver.attempts;
        if w.is_some() {
            return Ok(SearchOutcome { witness: w, fingerprint_differences: Vec::new(), attempts, budget_exhausted: false });
        }
        if attempts >= budget {
            break;
        }
    }
    Ok(SearchOutcome { witness: None, fingerprint_differences: Vec::new(), attempts, budget_exhausted: attempts >= budget })
}

/// Fingerprints of `d1 .. d28`, plus the zero codifferential as index 0.
#[derive(Clone, Debug)]
pub struct CatalogIndex {
    entries: Vec<(usize, Coderivation, Fingerprint)>,
}

impl CatalogIndex {
    pub fn new() -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(catalog::COUNT + 1);
        let zero = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
        let fz = fingerprint(&zero)?;
        entries.push((0, zero, fz));
        for k in 1..=catalog::COUNT {
            let d = catalog::codifferential(k)?;
            let f = fingerprint(&d)?;
            entries.push((k, d, f));
        }
        Ok(CatalogIndex { entries })
    }

    pub fn fingerprint(&self, k: usize) -> Option<&Fingerprint> {
        self.entries.iter().find(|e| e.0 == k).map(|e| &e.2)
    }

    pub fn codifferential(&self, k: usize) -> Option<&Coderivation> {
        self.entries.iter().find(|e| e.0 == k).map(|e| &e.1)
    }

    /// Catalog index (0 for the zero codifferential) with equal fingerprint.
    pub fn identify(&self, x: &Coderivation) -> Result<Option<usize>, Error> {
        if x.space() != GradedSpace::STANDARD {
            return Err(Error::SpaceMismatch);
        }
        let f = fingerprint(x)?;
        Ok(self.entries.iter().find(|e| e.2 == f).map(|e| e.0))
    }

    /// Identification together with an explicit verified witness.
    pub fn identify_with_witness(
        &self,
        x: &Coderivation,
        budget: usize,
    ) -> Result<Option<(usize, Option<GradedAutomorphism>)>, Error> {
        let k = match self.identify(x)? {
            Some(k) => k,
            None => return Ok(None),
        };
        let target = self.codifferential(k).expect("indexed");
        let out = find_isomorphism(x, target, budget)?;
        Ok(Some((k, out.witness)))
    }
}

/// How a pair of catalog entries is told apart.
#[derive(Clone, Debug)]
pub struct PairSeparation {
    pub a: usize,
    pub b: usize,
    pub differences: Vec<&'static str>,
    /// Present only when fingerprints agree.
    pub search: Option<SearchOutcome>,
}

impl PairSeparation {
    pub fn separated(&self) -> bool {
        !self.differences.is_empty() || self.search.as_ref().is_some_and(|s| !s.found())
    }
}

pub fn separation_report(budget: usize) -> Result<Vec<PairSeparation>, Error> {
    let idx = CatalogIndex::new()?;
    let mut out = Vec::new();
    for a in 1..=catalog::COUNT {
        for b in a + 1..=catalog::COUNT {
            let (fa, fb) = (idx.fingerprint(a).unwrap(), idx.fingerprint(b).unwrap());
            let differences = fa.differences(fb);
            let search = if differences.is_empty() {
                Some(find_isomorphism(idx.codifferential(a).unwrap(), idx.codifferential(b).unwrap(), budget)?)
            } else {
                None
            };
            out.push(PairSeparation { a, b, differences, search });
        }
    }
    Ok(out)
}

/// `v2 <-> v3` on the standard space.
pub fn swap_odd() -> GradedAutomorphism {
    GradedAutomorphism::permuted_diagonal(GradedSpace::STANDARD, &[1, 3, 2], &[Scalar::one(), Scalar::one(), Scalar::one()])
        .expect("permutation")
}
