//! Cochain complexes `C^n(W) = Hom(W^n, W)` and graded Hochschild cohomology
//! of a codifferential.

use alloc::vec::Vec;

use crate::coderivation::{bracket, is_codifferential, Coderivation, Term};
use crate::graded::{GradedSpace, MultiIndex, Parity};
use crate::linalg::{Echelon, ExactMatrix, SparseVec, Subspace};
use crate::Error;

/// Ordered basis of `C^n`, optionally restricted to one parity.
///
/// Order is target-major, then the source multi-index lexicographically.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    space: GradedSpace,
    degree: usize,
    parity: Option<Parity>,
    elems: Vec<Term>,
    // position in `elems` of every element of the full basis, by full index
    slot: Vec<Option<usize>>,
}

impl CochainBasis {
    pub fn new(space: GradedSpace, degree: usize) -> Self {
        Self::build(space, degree, None)
    }

    pub fn with_parity(space: GradedSpace, degree: usize, parity: Parity) -> Self {
        Self::build(space, degree, Some(parity))
    }

    fn build(space: GradedSpace, degree: usize, parity: Option<Parity>) -> Self {
        let words = space.words(degree);
        let mut elems = Vec::new();
        let mut slot = Vec::with_capacity(space.dim() * words.len());
        for t in space.indices() {
            for w in &words {
                let p = space.parity_unchecked(t) + space.word_parity(w.as_slice());
                if parity.is_none_or(|q| q == p) {
                    slot.push(Some(elems.len()));
                    elems.push((t, w.clone()));
                } else {
                    slot.push(None);
                }
            }
        }
        CochainBasis { space, degree, parity, elems, slot }
    }

    pub fn space(&self) -> GradedSpace {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Term] {
        &self.elems
    }

    pub fn elem_parity(&self, i: usize) -> Parity {
        let (t, w) = &self.elems[i];
        self.space.parity_unchecked(*t) + self.space.word_parity(w.as_slice())
    }

    pub fn index_of(&self, target: u8, sources: &MultiIndex) -> Option<usize> {
        if sources.len() != self.degree || !self.space.contains(target) {
            return None;
        }
        let dim = self.space.dim();
        let mut k = target as usize - 1;
        for &s in sources.as_slice() {
            if !self.space.contains(s) {
                return None;
            }
            k = k * dim + (s as usize - 1);
        }
        self.slot[k]
    }

    pub fn to_vector(&self, f: &Coderivation) -> Result<SparseVec, Error> {
        if f.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut v = Vec::with_capacity(f.len());
        for ((t, s), c) in f.terms() {
            match self.index_of(*t, s) {
                Some(i) => v.push((i, c.clone())),
                None => return Err(Error::BidegreeViolation),
            }
        }
        v.sort_by_key(|e| e.0);
        Ok(v)
    }

    pub fn from_vector(&self, v: &SparseVec, parity: Parity) -> Coderivation {
        let mut c = Coderivation::zero(self.space, parity);
        for (i, x) in v {
            c.accumulate(self.elems[*i].clone(), x);
        }
        c
    }

    pub fn element(&self, i: usize) -> Coderivation {
        let (t, s) = &self.elems[i];
        Coderivation::term(self.space, crate::Scalar::one(), *t, s.as_slice()).expect("basis element in range")
    }
}

/// Images `D(e_b)` of the parity-`p` basis of `C^n`, as vectors in the
/// parity-`p+1` basis of `C^{n+1}`.
fn block_images(d: &Coderivation, src: &CochainBasis, dst: &CochainBasis) -> Vec<SparseVec> {
    (0..src.len())
        .map(|i| dst.to_vector(&bracket(d, &src.element(i))).expect("coboundary lands in C^{n+1}"))
        .collect()
}

fn check(d: &Coderivation) -> Result<(), Error> {
    if d.arities().iter().any(|&a| a != 2) || !is_codifferential(d) {
        return Err(Error::NotCodifferential);
    }
    Ok(())
}

/// Matrix of `D: C^n -> C^{n+1}` in the full documented bases (rows index `C^{n+1}`).
pub fn coboundary_matrix(d: &Coderivation, n: usize) -> Result<ExactMatrix, Error> {
    check(d)?;
    let src = CochainBasis::new(d.space(), n);
    let dst = CochainBasis::new(d.space(), n + 1);
    ExactMatrix::from_sparse_cols(dst.len(), &block_images(d, &src, &dst))
}

/// `(even, odd)` dimensions of `H^0 .. H^max_degree`, from ranks only.
pub fn cohomology_dims(d: &Coderivation, max_degree: usize) -> Result<Vec<(usize, usize)>, Error> {
    check(d)?;
    let space = d.space();
    // rank[n][p] = rank of D on C^n_p
    let mut rank = Vec::with_capacity(max_degree + 1);
    let mut size = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let mut r = [0usize; 2];
        let mut s = [0usize; 2];
        for p in [Parity::Even, Parity::Odd] {
            let src = CochainBasis::with_parity(space, n, p);
            let dst = CochainBasis::with_parity(space, n + 1, p.flip());
            let mut e = Echelon::new();
            for v in block_images(d, &src, &dst) {
                e.insert_forward(&v);
            }
            r[p.bit() as usize] = e.rank();
            s[p.bit() as usize] = src.len();
        }
        rank.push(r);
        size.push(s);
    }
    let mut out = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let mut h = [0usize; 2];
        for p in 0..2 {
            let z = size[n][p] - rank[n][p];
            let b = if n == 0 { 0 } else { rank[n - 1][1 - p] };
            h[p] = z - b;
        }
        out.push((h[0], h[1]));
    }
    Ok(out)
}

/// One parity block `H^n_p = Z^n_p / B^n_p` with canonical representatives.
#[derive(Clone, Debug)]
pub struct Cohomology {
    d: Coderivation,
    basis: CochainBasis,
    next: CochainBasis,
    parity: Parity,
    coboundaries: Subspace,
    cocycles: Subspace,
    reps: Subspace,
}

impl Cohomology {
    pub fn new(d: &Coderivation, n: usize, parity: Parity) -> Result<Self, Error> {
        check(d)?;
        let space = d.space();
        let basis = CochainBasis::with_parity(space, n, parity);
        let next = CochainBasis::with_parity(space, n + 1, parity.flip());
        let images = block_images(d, &basis, &next);
        let dmat = ExactMatrix::from_sparse_cols(next.len(), &images)?;
        let cocycles = crate::linalg::nullspace(&dmat);
        let coboundaries = if n == 0 {
            Subspace::zero(basis.len())
        } else {
            let prev = CochainBasis::with_parity(space, n - 1, parity.flip());
            Subspace::span(basis.len(), block_images(d, &prev, &basis))
        };
        let reps = Subspace::span(basis.len(), cocycles.basis().iter().map(|z| coboundaries.reduce_mod(z)));
        Ok(Cohomology { d: d.clone(), basis, next, parity, coboundaries, cocycles, reps })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn basis(&self) -> &CochainBasis {
        &self.basis
    }

    pub fn cocycle_space(&self) -> &Subspace {
        &self.cocycles
    }

    pub fn coboundary_space(&self) -> &Subspace {
        &self.coboundaries
    }

    /// Canonical representatives: reduced mod `B`, then in reduced echelon form.
    pub fn representatives(&self) -> Vec<Coderivation> {
        self.reps.basis().iter().map(|v| self.basis.from_vector(v, self.parity)).collect()
    }

    pub fn representative_vectors(&self) -> Vec<SparseVec> {
        self.reps.basis()
    }

    pub fn is_cocycle(&self, f: &Coderivation) -> Result<bool, Error> {
        let v = self.basis.to_vector(f)?;
        let img = bracket(&self.d, &self.basis.from_vector(&v, self.parity));
        Ok(self.next.to_vector(&img)?.is_empty())
    }

    /// Canonical coset representative of `f + B^n`.
    pub fn reduce(&self, f: &Coderivation) -> Result<Coderivation, Error> {
        if f.is_zero() {
            return Ok(Coderivation::zero(self.basis.space(), self.parity));
        }
        if f.parity() != self.parity {
            return Err(Error::BidegreeViolation);
        }
        if !self.is_cocycle(f)? {
            return Err(Error::NotCocycle);
        }
        let v = self.basis.to_vector(f)?;
        Ok(self.basis.from_vector(&self.coboundaries.reduce_mod(&v), self.parity))
    }

    /// Coefficients of the class of `f` on [`Cohomology::representatives`].
    pub fn coordinates(&self, f: &Coderivation) -> Result<Vec<crate::Scalar>, Error> {
        let r = self.reduce(f)?;
        let v = self.basis.to_vector(&r)?;
        self.reps.coordinates(&v).ok_or(Error::NotCocycle)
    }

    pub fn is_coboundary(&self, f: &Coderivation) -> Result<bool, Error> {
        Ok(self.coboundaries.contains(&self.basis.to_vector(f)?))
    }
}

/// Graded dimensions and representatives of `H^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub representatives: Vec<Coderivation>,
}

impl CohomologyReport {
    pub fn total(&self) -> usize {
        self.even_dim + self.odd_dim
    }
}

pub fn cohomology(d: &Coderivation, n: usize) -> Result<CohomologyReport, Error> {
    let even = Cohomology::new(d, n, Parity::Even)?;
    let odd = Cohomology::new(d, n, Parity::Odd)?;
    let mut representatives = even.representatives();
    representatives.extend(odd.representatives());
    Ok(CohomologyReport { degree: n, even_dim: even.dim(), odd_dim: odd.dim(), representatives })
}

/// Canonical representative of the class of the cocycle `f` (any parity, pure degree).
pub fn reduce(d: &Coderivation, f: &Coderivation) -> Result<Coderivation, Error> {
    let ar = f.arities();
    let n = match ar.len() {
        0 => return Ok(f.clone()),
        1 => *ar.iter().next().unwrap(),
        _ => return Err(Error::BidegreeViolation),
    };
    Cohomology::new(d, n, f.parity())?.reduce(f)
}

/// `(|C^n_even|, |C^n_odd|)`.
pub fn cochain_dims(space: GradedSpace, n: usize) -> (usize, usize) {
    let e = CochainBasis::with_parity(space, n, Parity::Even).len();
    let o = CochainBasis::with_parity(space, n, Parity::Odd).len();
    (e, o)
}

/// Block-diagonal check helper: every column of `D` on `C^n_p` only has
/// entries in `C^{n+1}_{p+1}`.
pub fn parity_flip_holds(d: &Coderivation, n: usize) -> Result<bool, Error> {
    check(d)?;
    let full = CochainBasis::new(d.space(), n);
    for i in 0..full.len() {
        let f = full.element(i);
        let img = bracket(d, &f);
        if !img.is_zero() && img.parity() != f.parity().flip() {
            return Ok(false);
        }
        for ((t, s), _) in img.terms() {
            if d.space().parity_of(*t, s)? != f.parity().flip() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
