//! Extensions `0 -> M -> V -> W -> 0` written as codifferentials
//! `d = delta + mu + lambda + psi` on `V = M (+) W`.
//!
//! `C^{k,l}` is spanned by cochains with target in `M` whose sources contain
//! exactly `k` indices from `M` and `l` from `W`. The recursion
//! `T^{k,l} = M (x) T^{k-1,l} (+) V (x) T^{k,l-1}` produces the words with at
//! least `k` entries from `M`; the exact bidegree is its graded piece
//! `T^{k,l} \ T^{k+1,l-1}` (see [`filtration_words`]).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::coderivation::{bracket, is_codifferential, Term};
use crate::equivalence::{transport, GradedAutomorphism};
use crate::graded::{GradedSpace, MultiIndex, Parity};
use crate::linalg::{nullspace, rank, solve, sparse_to_dense, ExactMatrix, SparseVec, Subspace};
use crate::{Coderivation, Error, Scalar};

/// A splitting `V = M (+) W` with algebra structures `mu` on `M` and `delta`
/// on `W`.
#[derive(Clone, Debug)]
pub struct ExtensionSetup {
    space: GradedSpace,
    m: Vec<u8>,
    w: Vec<u8>,
    mu: Coderivation,
    delta: Coderivation,
}

impl ExtensionSetup {
    pub fn new(space: GradedSpace, m: &[u8], w: &[u8], mu: Coderivation, delta: Coderivation) -> Result<Self, Error> {
        let mut seen = vec![false; space.dim()];
        for &i in m.iter().chain(w) {
            space.parity(i)?;
            if core::mem::replace(&mut seen[i as usize - 1], true) {
                return Err(Error::InvalidSetup("M and W overlap"));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSetup("M and W do not cover the basis"));
        }
        if mu.space() != space || delta.space() != space {
            return Err(Error::SpaceMismatch);
        }
        let setup = ExtensionSetup { space, m: m.to_vec(), w: w.to_vec(), mu, delta };
        if !setup.is_pure(&setup.mu, 2, 0) {
            return Err(Error::InvalidSetup("mu must lie in C^{2,0}"));
        }
        let on_w = setup.delta.terms().all(|((t, s), _)| setup.in_w(*t) && s.as_slice().iter().all(|&i| setup.in_w(i)));
        if !on_w {
            return Err(Error::InvalidSetup("delta must be supported on W"));
        }
        if !is_codifferential(&setup.mu) || !is_codifferential(&setup.delta) {
            return Err(Error::NotCodifferential);
        }
        Ok(setup)
    }

    pub fn space(&self) -> GradedSpace {
        self.space
    }

    pub fn m_indices(&self) -> &[u8] {
        &self.m
    }

    pub fn w_indices(&self) -> &[u8] {
        &self.w
    }

    pub fn mu(&self) -> &Coderivation {
        &self.mu
    }

    pub fn delta(&self) -> &Coderivation {
        &self.delta
    }

    pub fn in_m(&self, i: u8) -> bool {
        self.m.contains(&i)
    }

    pub fn in_w(&self, i: u8) -> bool {
        self.w.contains(&i)
    }

    fn parity(&self, i: u8) -> Parity {
        self.space.parity(i).expect("index checked at construction")
    }

    /// `(k, l)` counts of a source word.
    pub fn word_bidegree(&self, word: &[u8]) -> (usize, usize) {
        let k = word.iter().filter(|&&i| self.in_m(i)).count();
        (k, word.len() - k)
    }

    /// Whether every term of `f` lies in `C^{k,l}`.
    pub fn is_pure(&self, f: &Coderivation, k: usize, l: usize) -> bool {
        f.terms().all(|((t, s), _)| self.in_m(*t) && self.word_bidegree(s.as_slice()) == (k, l))
    }

    fn check_pure(&self, f: &Coderivation, k: usize, l: usize) -> Result<(), Error> {
        if f.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if self.is_pure(f, k, l) {
            Ok(())
        } else {
            Err(Error::BidegreeViolation)
        }
    }

    fn zero(&self) -> Coderivation {
        Coderivation::zero(self.space, Parity::Odd)
    }
}

/// Words of `T^{k,l}` produced literally by the recursion, in
/// lexicographic order.
pub fn filtration_words(setup: &ExtensionSetup, k: usize, l: usize) -> Vec<MultiIndex> {
    fn rec(setup: &ExtensionSetup, k: isize, l: isize, memo: &mut BTreeMap<(isize, isize), BTreeSet<Vec<u8>>>) -> BTreeSet<Vec<u8>> {
        if k < 0 || l < 0 {
            return BTreeSet::new();
        }
        if k == 0 && l == 0 {
            return [Vec::new()].into_iter().collect();
        }
        if let Some(s) = memo.get(&(k, l)) {
            return s.clone();
        }
        let mut out = BTreeSet::new();
        for w in rec(setup, k - 1, l, memo) {
            for &i in &setup.m {
                let mut x = vec![i];
                x.extend_from_slice(&w);
                out.insert(x);
            }
        }
        for w in rec(setup, k, l - 1, memo) {
            for i in setup.space.indices() {
                let mut x = vec![i];
                x.extend_from_slice(&w);
                out.insert(x);
            }
        }
        memo.insert((k, l), out.clone());
        out
    }
    rec(setup, k as isize, l as isize, &mut BTreeMap::new()).into_iter().map(MultiIndex).collect()
}

/// Basis of `C^{k,l}`, both parities, target-major then lexicographic in the
/// sources.
pub fn bidegree_basis(setup: &ExtensionSetup, k: usize, l: usize) -> Vec<Coderivation> {
    let words: Vec<MultiIndex> =
        setup.space.words(k + l).into_iter().filter(|w| setup.word_bidegree(w.as_slice()) == (k, l)).collect();
    let mut out = Vec::new();
    for &t in &setup.m {
        for w in &words {
            out.push(Coderivation::term(setup.space, Scalar::one(), t, w.as_slice()).expect("in range"));
        }
    }
    out
}

/// The part of [`bidegree_basis`] of one parity.
pub fn bidegree_basis_with_parity(setup: &ExtensionSetup, k: usize, l: usize, parity: Parity) -> Vec<Coderivation> {
    bidegree_basis(setup, k, l).into_iter().filter(|c| c.parity() == parity).collect()
}

/// The three components of `1/2 [d, d]` for `d = delta + mu + lambda + psi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residuals {
    /// `[delta, lambda] + 1/2 [lambda, lambda] + [mu, psi]`
    pub mc: Coderivation,
    /// `[mu, lambda]`
    pub compat: Coderivation,
    /// `[delta + lambda, psi]`
    pub cocyc: Coderivation,
}

impl Residuals {
    pub fn is_zero(&self) -> bool {
        self.mc.is_zero() && self.compat.is_zero() && self.cocyc.is_zero()
    }
}

pub fn mc_residual(setup: &ExtensionSetup, lambda: &Coderivation, psi: &Coderivation) -> Result<Residuals, Error> {
    setup.check_pure(lambda, 1, 1)?;
    setup.check_pure(psi, 0, 2)?;
    Ok(residuals_unchecked(setup, lambda, psi))
}

fn residuals_unchecked(setup: &ExtensionSetup, lambda: &Coderivation, psi: &Coderivation) -> Residuals {
    let half = Scalar::from_frac(1, 2);
    let mc = bracket(&setup.delta, lambda).add_scaled(&bracket(lambda, lambda), &half) + bracket(&setup.mu, psi);
    let compat = bracket(&setup.mu, lambda);
    let cocyc = bracket(&(&setup.delta + lambda), psi);
    Residuals { mc, compat, cocyc }
}

/// `d = delta + mu + lambda + psi`.
pub fn assemble(setup: &ExtensionSetup, lambda: &Coderivation, psi: &Coderivation) -> Coderivation {
    let mut d = setup.zero();
    for part in [&setup.delta, &setup.mu, lambda, psi] {
        d.add_scaled_assign(part, &Scalar::one());
    }
    d
}

/// `lambda` as the matrices `L_k`, `R_k` acting on `M`, one pair per `W`
/// index: `L_k[i][j]` is the coefficient of `psi_{m_i}^{w_k m_j}` and
/// `R_k[i][j]` that of `psi_{m_i}^{m_j w_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMatrices {
    m: Vec<u8>,
    w: Vec<u8>,
    left: Vec<Vec<Vec<Scalar>>>,
    right: Vec<Vec<Vec<Scalar>>>,
}

impl LambdaMatrices {
    pub fn from_lambda(setup: &ExtensionSetup, lambda: &Coderivation) -> Result<Self, Error> {
        setup.check_pure(lambda, 1, 1)?;
        let q = setup.m.len();
        let mut left = vec![vec![vec![Scalar::zero(); q]; q]; setup.w.len()];
        let mut right = left.clone();
        let pos_m = |x: u8| setup.m.iter().position(|&y| y == x).expect("index in M");
        let pos_w = |x: u8| setup.w.iter().position(|&y| y == x).expect("index in W");
        for ((t, s), c) in lambda.terms() {
            let (a, b) = (s.as_slice()[0], s.as_slice()[1]);
            let i = pos_m(*t);
            if setup.in_w(a) {
                left[pos_w(a)][i][pos_m(b)] = c.clone();
            } else {
                right[pos_w(b)][i][pos_m(a)] = c.clone();
            }
        }
        Ok(LambdaMatrices { m: setup.m.clone(), w: setup.w.clone(), left, right })
    }

    pub fn to_lambda(&self, space: GradedSpace) -> Result<Coderivation, Error> {
        let mut out = Coderivation::zero(space, Parity::Odd);
        for (k, &wk) in self.w.iter().enumerate() {
            for (i, &mi) in self.m.iter().enumerate() {
                for (j, &mj) in self.m.iter().enumerate() {
                    let (l, r) = (&self.left[k][i][j], &self.right[k][i][j]);
                    if !l.is_zero() {
                        out.add_term(l.clone(), mi, &[wk, mj])?;
                    }
                    if !r.is_zero() {
                        out.add_term(r.clone(), mi, &[mj, wk])?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `L_k` for the `k`-th `W` index (0-based).
    pub fn left(&self, k: usize) -> &[Vec<Scalar>] {
        &self.left[k]
    }

    pub fn right(&self, k: usize) -> &[Vec<Scalar>] {
        &self.right[k]
    }

    /// Entries of `L_k` between basis vectors of equal (`Even`) or opposite
    /// (`Odd`) parity; the rest are zeroed.
    pub fn left_part(&self, space: GradedSpace, k: usize, p: Parity) -> Vec<Vec<Scalar>> {
        self.part(space, &self.left[k], p)
    }

    pub fn right_part(&self, space: GradedSpace, k: usize, p: Parity) -> Vec<Vec<Scalar>> {
        self.part(space, &self.right[k], p)
    }

    fn part(&self, space: GradedSpace, a: &[Vec<Scalar>], p: Parity) -> Vec<Vec<Scalar>> {
        let par = |x: u8| space.parity(x).expect("in range");
        let mut out = a.to_vec();
        for (i, &mi) in self.m.iter().enumerate() {
            for (j, &mj) in self.m.iter().enumerate() {
                if par(mi) + par(mj) != p {
                    out[i][j] = Scalar::zero();
                }
            }
        }
        out
    }

    /// Number of `k` with `(L_k, R_k) != (0, 0)`.
    pub fn nonzero_pairs(&self) -> usize {
        let nz = |a: &Vec<Vec<Scalar>>| a.iter().flatten().any(|x| !x.is_zero());
        (0..self.w.len()).filter(|&k| nz(&self.left[k]) || nz(&self.right[k])).count()
    }
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// `1/2 [lambda, lambda]` rebuilt from matrix products, for completely odd `W`:
/// `-psi_i^{klj} (L_k L_l) + psi_i^{kjl} (R_l L_k - L_k R_l) + psi_i^{jkl} (R_l R_k)`.
pub fn half_bracket_from_matrices(setup: &ExtensionSetup, lm: &LambdaMatrices) -> Result<Coderivation, Error> {
    if setup.w.iter().any(|&w| setup.parity(w) == Parity::Even) {
        return Err(Error::Unsupported("matrix form of [lambda, lambda] needs W completely odd"));
    }
    let mut out = Coderivation::zero(setup.space, Parity::Even);
    for (k, &wk) in setup.w.iter().enumerate() {
        for (l, &wl) in setup.w.iter().enumerate() {
            let ll = mat_mul(&lm.left[k], &lm.left[l]);
            let rl = mat_mul(&lm.right[l], &lm.left[k]);
            let lr = mat_mul(&lm.left[k], &lm.right[l]);
            let rr = mat_mul(&lm.right[l], &lm.right[k]);
            for (i, &mi) in setup.m.iter().enumerate() {
                for (j, &mj) in setup.m.iter().enumerate() {
                    for (c, word) in [
                        (-&ll[i][j], [wk, wl, mj]),
                        (&rl[i][j] - &lr[i][j], [wk, mj, wl]),
                        (rr[i][j].clone(), [mj, wk, wl]),
                    ] {
                        if !c.is_zero() {
                            out.add_term(c, mi, &word)?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Which semisimple structure `delta` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaShape {
    /// `sum_k psi_k^{kk}` over an odd `W`: the algebra `C^n`.
    Diagonal,
    /// `psi_a^{ab} - psi_a^{ba} + psi_b^{aa} - psi_b^{bb}`, `a` even, `b` odd.
    Simple11,
    Zero,
}

pub fn delta_shape(setup: &ExtensionSetup) -> Option<DeltaShape> {
    let d = &setup.delta;
    if d.is_zero() {
        return Some(DeltaShape::Zero);
    }
    let mut diag = setup.zero();
    for &k in &setup.w {
        if setup.parity(k) == Parity::Odd {
            diag.add_term(Scalar::one(), k, &[k, k]).ok()?;
        }
    }
    if setup.w.iter().all(|&k| setup.parity(k) == Parity::Odd) && d == &diag {
        return Some(DeltaShape::Diagonal);
    }
    if let [a, b] = setup.w[..] {
        let (a, b) = if setup.parity(a) == Parity::Even { (a, b) } else { (b, a) };
        let one = Scalar::one;
        let simple = Coderivation::from_terms(
            setup.space,
            Parity::Odd,
            [(one(), a, [a, b]), (-one(), a, [b, a]), (one(), b, [a, a]), (-one(), b, [b, b])],
        )
        .ok()?;
        if setup.parity(a) == Parity::Even && setup.parity(b) == Parity::Odd && d == &simple {
            return Some(DeltaShape::Simple11);
        }
    }
    None
}

/// One class of extensions: `d = delta + mu + lambda + psi + tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    pub lambda: Coderivation,
    pub psi: Coderivation,
    pub tau: Coderivation,
    pub codifferential: Coderivation,
}

/// Values tried for each diagonal `lambda` coefficient.
pub const GRID: [i64; 3] = [0, 1, -1];

/// Upper bound on grid points searched without the block decomposition.
const MAX_PLAIN_GRID: usize = 6561;

/// Diagonal odd `C^{1,1}` basis terms (`psi_m^{w m}`, `psi_m^{m w}`), grouped
/// by `W` index.
fn diagonal_blocks(setup: &ExtensionSetup) -> Vec<Vec<Term>> {
    let mut blocks = Vec::new();
    for &w in &setup.w {
        let mut b = Vec::new();
        for &m in &setup.m {
            for src in [[w, m], [m, w]] {
                let s = MultiIndex::new(&src);
                if setup.space.parity_of(m, &s) == Ok(Parity::Odd) {
                    b.push((m, s));
                }
            }
        }
        if !b.is_empty() {
            blocks.push(b);
        }
    }
    blocks
}

fn block_assignments(block: &[Term], space: GradedSpace) -> Vec<Coderivation> {
    let mut out = vec![Coderivation::zero(space, Parity::Odd)];
    for (t, s) in block {
        let mut next = Vec::with_capacity(out.len() * GRID.len());
        for c in &out {
            for v in GRID {
                let mut x = c.clone();
                x.add_term(Scalar::from_int(v), *t, s.as_slice()).expect("odd by construction");
                next.push(x);
            }
        }
        out = next;
    }
    out
}

/// Linear map `f` on a list of basis cochains as a matrix in the coordinates
/// of the output terms; also returns the output term index.
fn linear_map_matrix(
    inputs: &[Coderivation],
    f: impl Fn(&Coderivation) -> Coderivation,
    mut index: BTreeMap<Term, usize>,
) -> (ExactMatrix, BTreeMap<Term, usize>) {
    let images: Vec<Coderivation> = inputs.iter().map(&f).collect();
    for im in &images {
        for (k, _) in im.terms() {
            let n = index.len();
            index.entry(k.clone()).or_insert(n);
        }
    }
    let cols: Vec<SparseVec> = images
        .iter()
        .map(|im| {
            let mut v: SparseVec = im.terms().map(|(k, c)| (index[k], c.clone())).collect();
            v.sort_by_key(|e| e.0);
            v
        })
        .collect();
    (ExactMatrix::from_sparse_cols(index.len(), &cols).expect("consistent sizes"), index)
}

fn combination(basis: &[Coderivation], coeffs: &[Scalar], space: GradedSpace) -> Coderivation {
    let mut out = Coderivation::zero(space, Parity::Odd);
    for (b, c) in basis.iter().zip(coeffs) {
        out.add_scaled_assign(b, c);
    }
    out
}

/// Some `psi` in odd `C^{0,2}` completing `lambda` to a codifferential
/// (free coordinates zero), or `None`.
pub fn solve_psi(setup: &ExtensionSetup, lambda: &Coderivation) -> Result<Option<Coderivation>, Error> {
    setup.check_pure(lambda, 1, 1)?;
    let r0 = residuals_unchecked(setup, lambda, &setup.zero());
    if !r0.compat.is_zero() {
        return Ok(None);
    }
    if r0.mc.is_zero() {
        return Ok(Some(setup.zero()));
    }
    let basis = bidegree_basis_with_parity(setup, 0, 2, Parity::Odd);
    let dl = &setup.delta + lambda;
    // [mu, psi] lies in C^{1,2} and [delta + lambda, psi] in C^{0,3}, so the
    // two conditions can share one coordinate system
    let seed = r0.mc.terms().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
    let (m, index) = linear_map_matrix(&basis, |p| bracket(&setup.mu, p) + bracket(&dl, p), seed);
    let mut rhs = vec![Scalar::zero(); index.len()];
    for (k, c) in r0.mc.terms() {
        rhs[index[k]] = -c;
    }
    Ok(solve(&m, &rhs)?.map(|x| combination(&basis, &x, setup.space)))
}

/// Basis permutations preserving parity, `M` and `W`, and fixing `delta`
/// and `mu` (1-based images).
pub fn symmetry_permutations(setup: &ExtensionSetup) -> Vec<Vec<u8>> {
    let classes: Vec<Vec<u8>> = [&setup.m, &setup.w]
        .iter()
        .flat_map(|set| {
            [Parity::Even, Parity::Odd].map(|p| set.iter().copied().filter(|&i| setup.parity(i) == p).collect::<Vec<u8>>())
        })
        .filter(|c| !c.is_empty())
        .collect();
    let mut out: Vec<Vec<u8>> = vec![(1..=setup.space.dim() as u8).collect()];
    for class in &classes {
        let mut next = Vec::new();
        for sigma in &out {
            for p in permutations(class.len()) {
                let mut s = sigma.clone();
                for (a, &b) in p.iter().enumerate() {
                    s[class[a] as usize - 1] = class[b];
                }
                next.push(s);
            }
        }
        out = next;
    }
    out.retain(|s| setup.delta.relabel(s) == setup.delta && setup.mu.relabel(s) == setup.mu);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

type TermKey = Vec<(u8, Vec<u8>, String)>;

fn term_key(c: &Coderivation) -> TermKey {
    c.terms().map(|((t, s), x)| (*t, s.0.clone(), x.to_string())).collect()
}

/// Reduction of odd `C^{1,1}` modulo `B_mu^{1,1} = [mu, C^{0,1}_even]`.
fn coboundary_reducer(setup: &ExtensionSetup) -> impl Fn(&Coderivation) -> Coderivation {
    let basis = bidegree_basis_with_parity(setup, 1, 1, Parity::Odd);
    let pos: BTreeMap<Term, usize> =
        basis.iter().enumerate().map(|(i, b)| (b.terms().next().expect("basis term").0.clone(), i)).collect();
    let coords = move |c: &Coderivation| -> SparseVec {
        let mut v: SparseVec = c.terms().map(|(k, x)| (pos[k], x.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    };
    let mut b = Subspace::zero(basis.len());
    for beta in bidegree_basis_with_parity(setup, 0, 1, Parity::Even) {
        b.insert(&coords(&bracket(&setup.mu, &beta)));
    }
    let space = setup.space;
    move |l: &Coderivation| combination(&basis, &sparse_to_dense(&b.reduce_mod(&coords(l)), basis.len()), space)
}

/// Lexicographically least reduced relabeling of `lambda` under `perms`.
fn canonical(lambda: &Coderivation, perms: &[Vec<u8>], reduce: &impl Fn(&Coderivation) -> Coderivation) -> TermKey {
    perms.iter().map(|s| term_key(&reduce(&lambda.relabel(s)))).min().expect("identity permutation present")
}

/// All `lambda` on the diagonal grid for which some `psi` completes
/// `delta + mu + lambda` to a codifferential, up to `D_mu`-coboundaries and
/// the permutation part of `G_{delta,mu}`.
fn lambda_classes(setup: &ExtensionSetup) -> Result<Vec<ExtensionClass>, Error> {
    let blocks = diagonal_blocks(setup);
    let space = setup.space;
    let zero = setup.zero();
    // with mu = 0 the conditions on lambda do not involve psi, and for
    // delta = C^n each residual term involves at most two W indices, so
    // partial assignments can be checked block by block
    let separable = setup.mu.is_zero() && matches!(delta_shape(setup), Some(DeltaShape::Diagonal | DeltaShape::Zero));
    let mut solutions: Vec<Coderivation> = Vec::new();
    if separable {
        let cands: Vec<Vec<Coderivation>> = blocks
            .iter()
            .map(|b| {
                block_assignments(b, space)
                    .into_iter()
                    .filter(|l| residuals_unchecked(setup, l, &zero).is_zero())
                    .collect()
            })
            .collect();
        fn rec(
            setup: &ExtensionSetup,
            cands: &[Vec<Coderivation>],
            acc: &Coderivation,
            zero: &Coderivation,
            out: &mut Vec<Coderivation>,
        ) {
            let Some((first, rest)) = cands.split_first() else {
                out.push(acc.clone());
                return;
            };
            for c in first {
                let next = acc + c;
                if residuals_unchecked(setup, &next, zero).is_zero() {
                    rec(setup, rest, &next, zero, out);
                }
            }
        }
        rec(setup, &cands, &zero, &zero, &mut solutions);
    } else {
        let all: Vec<Term> = blocks.concat();
        if GRID.len().checked_pow(all.len() as u32).is_none_or(|n| n > MAX_PLAIN_GRID) {
            return Err(Error::Unsupported("lambda grid too large without block decomposition"));
        }
        for l in block_assignments(&all, space) {
            if solve_psi(setup, &l)?.is_some() {
                solutions.push(l);
            }
        }
    }
    let perms = symmetry_permutations(setup);
    let reduce = coboundary_reducer(setup);
    // one representative per class, preferring fewer terms
    let mut classes: BTreeMap<TermKey, Coderivation> = BTreeMap::new();
    for l in solutions {
        let key = canonical(&l, &perms, &reduce);
        match classes.get(&key) {
            Some(c) if c.len() <= l.len() => {}
            _ => {
                classes.insert(key, l);
            }
        }
    }
    let mut out = Vec::with_capacity(classes.len());
    for lambda in classes.into_values() {
        let psi = solve_psi(setup, &lambda)?.expect("solution found above");
        let codifferential = assemble(setup, &lambda, &psi);
        out.push(ExtensionClass { lambda, psi, tau: zero.clone(), codifferential });
    }
    Ok(out)
}

/// Extensions of a semisimple `delta` (`C^n` or the simple 1|1 algebra).
///
/// Every diagonal `lambda` with coefficients in [`GRID`] is tested against
/// the residuals; eigenvalue constraints are not imposed up front.
pub fn enumerate_semisimple_extensions(setup: &ExtensionSetup) -> Result<Vec<ExtensionClass>, Error> {
    match delta_shape(setup) {
        Some(DeltaShape::Diagonal | DeltaShape::Simple11) => lambda_classes(setup),
        _ => Err(Error::Unsupported("semisimple enumeration needs delta = C^n or the simple 1|1 algebra")),
    }
}

/// How the orbit representatives of `H^{0,2}` were obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitRule {
    /// `H^{0,2} = 0`.
    Trivial,
    /// The diagonal stabilizer of `delta + mu + lambda` scales the class by a
    /// character (exponents per basis index) outside the span of the base
    /// characters, so all nonzero multiples form one orbit.
    TorusCharacter(Vec<i64>),
    /// Zero base and `H^{0,2}` equal to all of odd `C^{0,2}` with `W`
    /// one-dimensional: `GL(M)` is transitive on nonzero classes.
    TransitiveLinear,
}

#[derive(Clone, Debug)]
pub struct TauClassification {
    /// Canonical basis of `H^{0,2}_{mu, delta + lambda}`.
    pub cohomology: Vec<Coderivation>,
    pub representatives: Vec<Coderivation>,
    pub rule: OrbitRule,
}

/// Exponents `e` with `g*(psi_i^{jk}) = prod x^e psi_i^{jk}` for diagonal `g`.
pub fn torus_character(space: GradedSpace, term: &Term) -> Vec<i64> {
    let mut e = vec![0i64; space.dim()];
    for &s in term.1.as_slice() {
        e[s as usize - 1] += 1;
    }
    e[term.0 as usize - 1] -= 1;
    e
}

/// `H^{0,2}_{mu, delta+lambda}` on odd cochains: `tau` with `[mu, tau] = 0`
/// and `[delta + lambda, tau] = 0`, modulo `[delta + lambda, beta]` for even
/// `beta` in `C^{0,1}` with `[mu, beta] = 0`.
pub fn tau_cohomology(setup: &ExtensionSetup, lambda: &Coderivation) -> Result<Vec<Coderivation>, Error> {
    setup.check_pure(lambda, 1, 1)?;
    let dl = &setup.delta + lambda;
    let c02 = bidegree_basis_with_parity(setup, 0, 2, Parity::Odd);
    let c01 = bidegree_basis_with_parity(setup, 0, 1, Parity::Even);
    let (m, _) = linear_map_matrix(&c02, |t| bracket(&setup.mu, t) + bracket(&dl, t), BTreeMap::new());
    let z = nullspace(&m);
    let (mb, _) = linear_map_matrix(&c01, |b| bracket(&setup.mu, b), BTreeMap::new());
    let zb = nullspace(&mb);
    let mut boundaries = Subspace::zero(c02.len());
    for v in zb.basis() {
        let beta = combination(&c01, &sparse_to_dense(&v, c01.len()), setup.space);
        let img = bracket(&dl, &beta);
        let coords: SparseVec = c02
            .iter()
            .enumerate()
            .filter_map(|(i, b)| {
                let (key, _) = b.terms().next().expect("basis term");
                let c = img.coeff(key.0, key.1.as_slice());
                (!c.is_zero()).then_some((i, c))
            })
            .collect();
        boundaries.insert(&coords);
    }
    let mut out = Vec::new();
    for v in z.basis() {
        let r = boundaries.reduce_mod(&v);
        if !r.is_empty() {
            boundaries.insert(&r);
            out.push(combination(&c02, &sparse_to_dense(&r, c02.len()), setup.space));
        }
    }
    Ok(out)
}

/// Orbit representatives of `H^{0,2}_{mu, delta+lambda}` under
/// `G_{delta,mu,lambda}`, for `lambda` solving the MC equation with `psi = 0`.
pub fn classify_tau(setup: &ExtensionSetup, lambda: &Coderivation) -> Result<TauClassification, Error> {
    let zero = setup.zero();
    if !mc_residual(setup, lambda, &zero)?.is_zero() {
        return Err(Error::MaurerCartan);
    }
    let h = tau_cohomology(setup, lambda)?;
    if h.is_empty() {
        return Ok(TauClassification { cohomology: h, representatives: vec![zero], rule: OrbitRule::Trivial });
    }
    let base = assemble(setup, lambda, &zero);
    if h.len() == 1 {
        let tau = &h[0];
        let chars: BTreeSet<Vec<i64>> = tau.terms().map(|(k, _)| torus_character(setup.space, k)).collect();
        if chars.len() == 1 {
            let chi = chars.into_iter().next().expect("one character");
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            let base_chars: BTreeSet<Vec<i64>> = base.terms().map(|(k, _)| torus_character(setup.space, k)).collect();
            for c in &base_chars {
                rows.push(c.iter().map(|&x| Scalar::from_int(x)).collect());
            }
            let r0 = if rows.is_empty() { 0 } else { rank(&ExactMatrix::from_dense(&rows)?) };
            rows.push(chi.iter().map(|&x| Scalar::from_int(x)).collect());
            let r1 = rank(&ExactMatrix::from_dense(&rows)?);
            if r1 > r0 {
                return Ok(TauClassification {
                    representatives: vec![tau.clone(), zero],
                    cohomology: h,
                    rule: OrbitRule::TorusCharacter(chi),
                });
            }
        }
    }
    let full = bidegree_basis_with_parity(setup, 0, 2, Parity::Odd);
    if base.is_zero() && setup.w.len() == 1 && h.len() == full.len() {
        return Ok(TauClassification {
            representatives: vec![full[0].clone(), zero],
            cohomology: h,
            rule: OrbitRule::TransitiveLinear,
        });
    }
    Err(Error::Unsupported("tau orbit structure outside the torus and transitive cases"))
}

/// `exp(beta)`: `w -> w + beta(w)` for even `beta` in `C^{0,1}`.
pub fn exp_beta(setup: &ExtensionSetup, beta: &Coderivation) -> Result<GradedAutomorphism, Error> {
    setup.check_pure(beta, 0, 1)?;
    if !beta.is_zero() && beta.parity() != Parity::Even {
        return Err(Error::Inhomogeneous { target: 0, sources: MultiIndex::empty() });
    }
    let n = setup.space.dim();
    let mut rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| Scalar::from_int((i == j) as i64)).collect()).collect();
    for ((t, s), c) in beta.terms() {
        // column j holds the image of v_j
        rows[*t as usize - 1][s.as_slice()[0] as usize - 1] += c;
    }
    GradedAutomorphism::new(setup.space, &rows)
}

/// `(lambda', psi')` with `lambda' = lambda + [mu, beta]` and
/// `psi' = psi + [delta + lambda + 1/2 [mu, beta], beta]`.
pub fn restricted_transport(
    setup: &ExtensionSetup,
    lambda: &Coderivation,
    psi: &Coderivation,
    beta: &Coderivation,
) -> (Coderivation, Coderivation) {
    let mb = bracket(&setup.mu, beta);
    let lambda2 = lambda + &mb;
    let inner = (&setup.delta + lambda).add_scaled(&mb, &Scalar::from_frac(1, 2));
    let psi2 = psi + &bracket(&inner, beta);
    (lambda2, psi2)
}

/// Sign in front of `1/2 [mu, beta]` in the `tau'` formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauPrimeSign {
    Minus,
    Plus,
}

/// The variant consistent with direct transport by `g exp(beta)`.
pub const TAU_PRIME_SIGN: TauPrimeSign = TauPrimeSign::Minus;

/// `tau' = g*(psi) - psi + [delta + lambda -+ 1/2 [mu, beta], beta] + g*(tau)`.
pub fn tau_prime(
    setup: &ExtensionSetup,
    lambda: &Coderivation,
    psi: &Coderivation,
    tau: &Coderivation,
    g: &GradedAutomorphism,
    beta: &Coderivation,
    sign: TauPrimeSign,
) -> Result<Coderivation, Error> {
    let half = match sign {
        TauPrimeSign::Minus => Scalar::from_frac(-1, 2),
        TauPrimeSign::Plus => Scalar::from_frac(1, 2),
    };
    let inner = (&setup.delta + lambda).add_scaled(&bracket(&setup.mu, beta), &half);
    Ok(&(&transport(g, psi)? - psi) + &(bracket(&inner, beta) + transport(g, tau)?))
}

/// Extensions of `delta = 0` on a one-dimensional `W`: `lambda` classes on the
/// grid, then the `tau` orbits for each.
pub fn enumerate_nilpotent_extensions(setup: &ExtensionSetup) -> Result<Vec<ExtensionClass>, Error> {
    if delta_shape(setup) != Some(DeltaShape::Zero) || setup.w.len() != 1 {
        return Err(Error::Unsupported("nilpotent enumeration needs delta = 0 on a one-dimensional W"));
    }
    let mut out = Vec::new();
    for class in lambda_classes(setup)? {
        if !class.psi.is_zero() {
            return Err(Error::Unsupported("lambda class needs a nonzero psi"));
        }
        let tc = classify_tau(setup, &class.lambda)?;
        for tau in tc.representatives {
            let codifferential = class.codifferential.add_scaled(&tau, &Scalar::one());
            out.push(ExtensionClass { tau, ..class.clone() });
            out.last_mut().expect("pushed").codifferential = codifferential;
        }
    }
    Ok(out)
}

/// Class count and the largest number of nonzero `(L_k, R_k)` pairs for `C^n`
/// (odd `W`) extended by the zero algebra on an `r|s`-dimensional `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableCount {
    pub m: (usize, usize),
    pub n: usize,
    pub classes: usize,
    pub max_nonzero_pairs: usize,
}

pub fn stable_setup(r: usize, s: usize, n: usize) -> Result<ExtensionSetup, Error> {
    let space = GradedSpace::new(r, s + n);
    let q = (r + s) as u8;
    let m: Vec<u8> = (1..=q).collect();
    let w: Vec<u8> = (q + 1..=q + n as u8).collect();
    let mut delta = Coderivation::zero(space, Parity::Odd);
    for &k in &w {
        delta.add_term(Scalar::one(), k, &[k, k])?;
    }
    ExtensionSetup::new(space, &m, &w, Coderivation::zero(space, Parity::Odd), delta)
}

pub fn stable_count(r: usize, s: usize, n: usize) -> Result<StableCount, Error> {
    let setup = stable_setup(r, s, n)?;
    let classes = enumerate_semisimple_extensions(&setup)?;
    let mut max_nonzero_pairs = 0;
    for c in &classes {
        max_nonzero_pairs = max_nonzero_pairs.max(LambdaMatrices::from_lambda(&setup, &c.lambda)?.nonzero_pairs());
    }
    Ok(StableCount { m: (r, s), n, classes: classes.len(), max_nonzero_pairs })
}

/// Which part of the classification a setup belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Semisimple,
    Nilpotent,
}

/// The concrete setups on the 1|2 space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Case {
    S4,
    S5,
    S6Mu0,
    S6Mu1,
    S7Mu0,
    S7Mu1,
}

impl Case {
    pub const ALL: [Case; 6] = [Case::S4, Case::S5, Case::S6Mu0, Case::S6Mu1, Case::S7Mu0, Case::S7Mu1];

    pub fn name(self) -> &'static str {
        match self {
            Case::S4 => "s4",
            Case::S5 => "s5",
            Case::S6Mu0 => "s6-mu0",
            Case::S6Mu1 => "s6-mu1",
            Case::S7Mu0 => "s7-mu0",
            Case::S7Mu1 => "s7-mu1",
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        Case::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn setups(self) -> Result<Vec<(Stage, ExtensionSetup)>, Error> {
        let sp = GradedSpace::STANDARD;
        let zero = Coderivation::zero(sp, Parity::Odd);
        let phi = Coderivation::phi;
        let one = Scalar::one;
        let simple = Coderivation::from_terms(
            sp,
            Parity::Odd,
            [(one(), 1, [1, 3]), (-one(), 1, [3, 1]), (one(), 3, [1, 1]), (-one(), 3, [3, 3])],
        )?;
        let v3 = phi(3, &[3, 3]);
        let s6 = |mu: &Coderivation| -> Result<Vec<(Stage, ExtensionSetup)>, Error> {
            Ok(vec![
                (Stage::Semisimple, ExtensionSetup::new(sp, &[1, 2], &[3], mu.clone(), v3.clone())?),
                (Stage::Nilpotent, ExtensionSetup::new(sp, &[1, 2], &[3], mu.clone(), zero.clone())?),
            ])
        };
        Ok(match self {
            Case::S4 => vec![
                (Stage::Semisimple, ExtensionSetup::new(sp, &[2], &[1, 3], phi(2, &[2, 2]), simple.clone())?),
                (Stage::Semisimple, ExtensionSetup::new(sp, &[2], &[1, 3], zero.clone(), simple)?),
            ],
            Case::S5 => vec![(
                Stage::Semisimple,
                ExtensionSetup::new(sp, &[1], &[2, 3], zero.clone(), &phi(2, &[2, 2]) + &v3)?,
            )],
            Case::S6Mu0 => s6(&zero)?,
            Case::S6Mu1 => s6(&phi(2, &[1, 1]))?,
            Case::S7Mu0 => vec![(Stage::Nilpotent, ExtensionSetup::new(sp, &[2, 3], &[1], zero.clone(), zero.clone())?)],
            Case::S7Mu1 => vec![(Stage::Nilpotent, ExtensionSetup::new(sp, &[2, 3], &[1], phi(2, &[3, 3]), zero.clone())?)],
        })
    }

    /// All classes of every setup of the case, in setup order.
    pub fn enumerate(self) -> Result<Vec<(Stage, ExtensionClass)>, Error> {
        let mut out = Vec::new();
        for (stage, setup) in self.setups()? {
            let classes = match stage {
                Stage::Semisimple => enumerate_semisimple_extensions(&setup)?,
                Stage::Nilpotent => enumerate_nilpotent_extensions(&setup)?,
            };
            out.extend(classes.into_iter().map(|c| (stage, c)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bidegree_is_graded_piece_of_filtration() {
        let (_, s) = Case::S6Mu0.setups().unwrap().remove(0);
        for (k, l) in [(0, 1), (1, 1), (0, 2), (2, 1), (1, 2)] {
            let upper: BTreeSet<Vec<u8>> = filtration_words(&s, k, l).into_iter().map(|w| w.0).collect();
            let lower: BTreeSet<Vec<u8>> =
                if l == 0 { BTreeSet::new() } else { filtration_words(&s, k + 1, l - 1).into_iter().map(|w| w.0).collect() };
            let exact: BTreeSet<Vec<u8>> =
                bidegree_basis(&s, k, l).iter().filter(|c| c.terms().next().unwrap().0 .0 == 1).map(|c| c.terms().next().unwrap().0 .1 .0.clone()).collect();
            assert_eq!(exact, upper.difference(&lower).cloned().collect());
        }
    }

    #[test]
    fn small_bases() {
        let (_, s4) = Case::S4.setups().unwrap().remove(1);
        let odd = bidegree_basis_with_parity(&s4, 1, 1, Parity::Odd);
        assert_eq!(odd, vec![Coderivation::phi(2, &[2, 3]), Coderivation::phi(2, &[3, 2])]);
        let (_, s6) = Case::S6Mu0.setups().unwrap().remove(1);
        assert_eq!(bidegree_basis_with_parity(&s6, 0, 1, Parity::Even), vec![Coderivation::phi(2, &[3])]);
        assert_eq!(bidegree_basis_with_parity(&s6, 0, 2, Parity::Odd), vec![Coderivation::phi(2, &[3, 3])]);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
