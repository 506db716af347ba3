//! Exact sparse linear algebra over Q(i).
//!
//! Vectors are sorted `(column, value)` lists without zeros. Elimination
//! pivots on the first nonzero entry; there is no magnitude pivoting since
//! arithmetic is exact, and results are deterministic.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;
use crate::Error;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn sparse_get(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|p| &v[p].1)
}

/// `a + f * b`.
pub fn axpy(a: &SparseVec, f: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(f * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(v: &SparseVec, f: &Scalar) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * f)).collect()
}

pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut s = Scalar::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                s += &(&a[i].1 * &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        ExactMatrix { rows: n, cols: n, data }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.push(sparse_from_dense(r));
        }
        Ok(ExactMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_sparse_rows(cols: usize, data: Vec<SparseVec>) -> Result<Self, Error> {
        for r in &data {
            if let Some((i, _)) = r.last() {
                if *i >= cols {
                    return Err(Error::DimensionMismatch { expected: cols, found: i + 1 });
                }
            }
        }
        Ok(ExactMatrix { rows: data.len(), cols, data })
    }

    /// Builds a matrix from its columns.
    pub fn from_sparse_cols(rows: usize, cols: &[SparseVec]) -> Result<Self, Error> {
        let mut data = vec![Vec::new(); rows];
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c {
                if *i >= rows {
                    return Err(Error::DimensionMismatch { expected: rows, found: i + 1 });
                }
                data[*i].push((j, x.clone()));
            }
        }
        Ok(ExactMatrix { rows, cols: cols.len(), data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        sparse_get(&self.data[i], j).cloned().unwrap_or_default()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data.iter().map(|r| sparse_to_dense(r, self.cols)).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j].push((i, x.clone()));
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn mul_sparse(&self, x: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, r) in self.data.iter().enumerate() {
            let s = sparse_dot(r, x);
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(sparse_to_dense(&self.mul_sparse(&sparse_from_dense(x)), self.rows))
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().fold(Vec::new(), |acc, (k, x)| axpy(&acc, x, &other.data[*k])))
            .collect();
        Ok(ExactMatrix { rows: self.rows, cols: other.cols, data })
    }
}

/// Incremental row echelon form.
///
/// Rows are keyed by pivot column and normalized to pivot 1. While
/// `reduced` is false rows are only forward-eliminated; [`Echelon::reduce`]
/// finishes the back-substitution.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
    reduced: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new(), reduced: true }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Eliminates every pivot column of `self` from `v`.
    ///
    /// For an echelon basis this yields a remainder that depends only on the
    /// span of the rows when `self` is fully reduced.
    pub fn remainder(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut pos = 0;
        while pos < v.len() {
            let c = v[pos].0;
            if let Some(row) = self.rows.get(&c) {
                let f = -v[pos].1.clone();
                v = axpy(&v, &f, row);
            } else {
                pos += 1;
            }
        }
        v
    }

    /// Adds `v` to the row space; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = self.remainder(v);
        let (p, lead) = r.first().cloned()?;
        let inv = lead.inv().expect("nonzero pivot");
        let r = sparse_scale(&r, &inv);
        if self.reduced {
            for row in self.rows.values_mut() {
                if let Some(f) = sparse_get(row, p).cloned() {
                    *row = axpy(row, &-f, &r);
                }
            }
        }
        self.rows.insert(p, r);
        Some(p)
    }

    /// Inserts without maintaining reducedness (faster when only the rank
    /// or a later [`Echelon::reduce`] is needed).
    pub fn insert_forward(&mut self, v: &SparseVec) -> Option<usize> {
        self.reduced = false;
        let r = self.remainder(v);
        let (p, lead) = r.first().cloned()?;
        let inv = lead.inv().expect("nonzero pivot");
        self.rows.insert(p, sparse_scale(&r, &inv));
        Some(p)
    }

    /// Back-substitution to reduced row echelon form.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for (n, &p) in pivots.iter().enumerate() {
            let row = self.rows[&p].clone();
            for &q in &pivots[n + 1..] {
                let other = self.rows.get_mut(&q).unwrap();
                if let Some(f) = sparse_get(other, p).cloned() {
                    *other = axpy(other, &-f, &row);
                }
            }
        }
        self.reduced = true;
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn into_rows(mut self) -> Vec<SparseVec> {
        self.reduce();
        self.rows.into_values().collect()
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &ExactMatrix) -> Rref {
    let mut e = Echelon::new();
    for r in &m.data {
        e.insert_forward(r);
    }
    e.reduce();
    let pivots: Vec<usize> = e.pivots().collect();
    let rank = pivots.len();
    let mut data = e.into_rows();
    data.resize(m.rows, Vec::new());
    Rref { matrix: ExactMatrix { rows: m.rows, cols: m.cols, data }, rank, pivots }
}

pub fn rank(m: &ExactMatrix) -> usize {
    let mut e = Echelon::new();
    for r in &m.data {
        e.insert_forward(r);
    }
    e.rank()
}

/// Rank of the span of a list of sparse vectors.
pub fn rank_of(vs: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert_forward(v);
    }
    e.rank()
}

/// Linear subspace of `K^ambient` held in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    ech: Echelon,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.ech.rows == other.ech.rows
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, ech: Echelon::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, (0..ambient).map(|i| vec![(i, Scalar::one())]))
    }

    pub fn span<I: IntoIterator<Item = SparseVec>>(ambient: usize, vs: I) -> Self {
        let mut ech = Echelon::new();
        for v in vs {
            ech.insert_forward(&v);
        }
        ech.reduce();
        Subspace { ambient, ech }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.ech.pivots().collect()
    }

    /// Echelon basis, ordered by pivot.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.ech.rows.values().cloned().collect()
    }

    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.ech.insert(v).is_some()
    }

    /// Canonical representative of `x + span`.
    pub fn reduce_mod(&self, x: &SparseVec) -> SparseVec {
        self.ech.remainder(x)
    }

    pub fn reduce_mod_dense(&self, x: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: x.len() });
        }
        Ok(sparse_to_dense(&self.reduce_mod(&sparse_from_dense(x)), self.ambient))
    }

    pub fn contains(&self, x: &SparseVec) -> bool {
        self.reduce_mod(x).is_empty()
    }

    /// Coordinates of `x` in the echelon basis; `None` when `x` is not in the span.
    pub fn coordinates(&self, x: &SparseVec) -> Option<Vec<Scalar>> {
        let mut r = x.clone();
        let mut out = Vec::with_capacity(self.dim());
        for (p, row) in &self.ech.rows {
            let f = sparse_get(&r, *p).cloned().unwrap_or_default();
            if !f.is_zero() {
                r = axpy(&r, &-f.clone(), row);
            }
            out.push(f);
        }
        r.is_empty().then_some(out)
    }
}

/// Basis of `{x : M x = 0}`.
pub fn nullspace(m: &ExactMatrix) -> Subspace {
    let r = rref(m);
    let pivots = &r.pivots;
    let mut vs = Vec::new();
    let mut is_pivot = vec![false; m.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    for f in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v: SparseVec = Vec::new();
        for (k, &p) in pivots.iter().enumerate() {
            if let Some(x) = sparse_get(r.matrix.row(k), f) {
                v.push((p, -x));
            }
        }
        v.push((f, Scalar::one()));
        v.sort_by_key(|e| e.0);
        vs.push(v);
    }
    Subspace::span(m.cols, vs)
}

/// Some `x` with `M x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &ExactMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, Error> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    let rows: Vec<SparseVec> = m
        .data
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            if !bi.is_zero() {
                r.push((m.cols, bi.clone()));
            }
            r
        })
        .collect();
    Ok(solve_augmented(m.cols, &rows).map(|x| sparse_to_dense(&x, m.cols)))
}

/// Solves a sparse system given as augmented rows (column `ncols` holds
/// the right-hand side). Free variables are set to zero; returns `None`
/// when inconsistent.
pub fn solve_augmented(ncols: usize, rows: &[SparseVec]) -> Option<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert_forward(r);
    }
    if e.row(ncols).is_some() {
        return None;
    }
    e.reduce();
    let mut x = Vec::new();
    for (p, row) in e.rows() {
        if let Some(v) = sparse_get(row, ncols) {
            x.push((*p, v.clone()));
        }
    }
    Some(x)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut e = Echelon::new();
    for (i, r) in m.data.iter().enumerate() {
        let mut row = r.clone();
        row.push((n + i, Scalar::one()));
        e.insert_forward(&row);
    }
    if (0..n).any(|p| e.row(p).is_none()) {
        return None;
    }
    e.reduce();
    let mut data = Vec::with_capacity(n);
    for p in 0..n {
        let row = e.row(p).expect("full rank");
        data.push(row.iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v.clone())).collect());
    }
    Some(ExactMatrix { rows: n, cols: n, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_identity_and_zero() {
        assert_eq!(rref(&ExactMatrix::identity(3)).rank, 3);
        assert_eq!(rref(&ExactMatrix::zero(2, 5)).rank, 0);
        assert_eq!(nullspace(&ExactMatrix::identity(3)).dim(), 0);
        assert_eq!(nullspace(&ExactMatrix::zero(2, 5)).dim(), 5);
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = ExactMatrix::from_dense(&[vec![s(1), s(2)], vec![s(2), s(4)]]).unwrap();
        assert!(solve(&m, &[s(1), s(3)]).unwrap().is_none());
        let x = solve(&m, &[s(1), s(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![s(1), s(2)]);
    }

    #[test]
    fn reduce_mod_is_canonical() {
        let sub = Subspace::span(3, [vec![(0, s(1)), (1, s(1))]]);
        let x = vec![(1, s(5))];
        let y = axpy(&x, &s(7), &vec![(0, s(1)), (1, s(1))]);
        assert_eq!(sub.reduce_mod(&x), sub.reduce_mod(&y));
        assert!(sub.contains(&vec![(0, s(2)), (1, s(2))]));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = ExactMatrix::from_dense(&[vec![s(1), s(2), s(3)], vec![s(0), s(1), s(1)]]).unwrap();
        let n = nullspace(&m);
        assert_eq!(n.dim(), 1);
        for v in n.basis() {
            assert!(m.mul_sparse(&v).is_empty());
        }
    }
}
