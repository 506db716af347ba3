//! Z/2-graded spaces with a fixed basis, and multi-indices into them.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// `(-1)^(self * other)` as a boolean "negate?".
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.bit() + o.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A graded space `p|q` with basis `v_1..v_{p+q}`; `v_i` is even iff `i <= p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedSpace {
    pub even_dim: usize,
    pub odd_dim: usize,
}

impl GradedSpace {
    /// The 1|2 space `W = <v1 | v2, v3>`.
    pub const STANDARD: GradedSpace = GradedSpace { even_dim: 1, odd_dim: 2 };

    pub const fn new(even_dim: usize, odd_dim: usize) -> Self {
        GradedSpace { even_dim, odd_dim }
    }

    pub fn dim(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    pub fn contains(&self, i: u8) -> bool {
        i >= 1 && (i as usize) <= self.dim()
    }

    pub fn parity(&self, i: u8) -> Result<Parity, Error> {
        if !self.contains(i) {
            return Err(Error::IndexOutOfRange { index: i as usize, dim: self.dim() });
        }
        Ok(self.parity_unchecked(i))
    }

    pub(crate) fn parity_unchecked(&self, i: u8) -> Parity {
        if (i as usize) <= self.even_dim {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = u8> {
        1..=(self.dim() as u8)
    }

    /// Parity of `phi_i^I`: `|v_i| + |v_I|`.
    pub fn parity_of(&self, target: u8, sources: &MultiIndex) -> Result<Parity, Error> {
        let mut p = self.parity(target)?;
        for &s in sources.as_slice() {
            p = p + self.parity(s)?;
        }
        Ok(p)
    }

    pub fn word_parity(&self, word: &[u8]) -> Parity {
        word.iter().fold(Parity::Even, |p, &i| p + self.parity_unchecked(i))
    }

    /// All multi-indices of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<MultiIndex> {
        let dim = self.dim() as u8;
        let mut out = Vec::new();
        if n > 0 && dim == 0 {
            return out;
        }
        let mut cur: Vec<u8> = alloc::vec![1; n];
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < dim {
                    cur[k] += 1;
                    for c in cur.iter_mut().skip(k + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even_dim, self.odd_dim)
    }
}

/// Ordered tuple `(i_1, ..., i_n)` of 1-based basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn new(indices: &[u8]) -> Self {
        MultiIndex(indices.to_vec())
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// `I` with its `k`-th entry (0-based) replaced by the whole of `j`.
    pub fn insert_at(&self, k: usize, j: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.len() + j.len());
        v.extend_from_slice(&self.0[..k]);
        v.extend_from_slice(&j.0);
        v.extend_from_slice(&self.0[k + 1..]);
        MultiIndex(v)
    }
}

impl From<&[u8]> for MultiIndex {
    fn from(s: &[u8]) -> Self {
        MultiIndex::new(s)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "{}", i)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_arithmetic() {
        use Parity::*;
        assert_eq!(Even + Even, Even);
        assert_eq!(Even + Odd, Odd);
        assert_eq!(Odd + Odd, Even);
    }

    #[test]
    fn parity_of_basis_cochains() {
        let w = GradedSpace::STANDARD;
        assert_eq!(w.parity_of(1, &MultiIndex::new(&[1, 3])).unwrap(), Parity::Odd);
        assert_eq!(w.parity_of(2, &MultiIndex::new(&[2, 2])).unwrap(), Parity::Odd);
        assert_eq!(w.parity_of(1, &MultiIndex::new(&[1, 1])).unwrap(), Parity::Even);
        assert!(w.parity_of(4, &MultiIndex::new(&[1])).is_err());
    }

    #[test]
    fn words_are_lexicographic() {
        let w = GradedSpace::STANDARD;
        let ws = w.words(2);
        assert_eq!(ws.len(), 9);
        assert_eq!(ws[0], MultiIndex::new(&[1, 1]));
        assert_eq!(ws[1], MultiIndex::new(&[1, 2]));
        assert_eq!(ws[8], MultiIndex::new(&[3, 3]));
        assert_eq!(w.words(0), alloc::vec![MultiIndex::empty()]);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }
}
