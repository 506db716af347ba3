//! Coderivations of the tensor coalgebra, stored as sparse sums of `phi_i^I`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::graded::{GradedSpace, MultiIndex, Parity};
use crate::scalar::Scalar;
use crate::Error;

/// Key of a basis cochain: `(target i, sources I)` for `phi_i^I`.
pub type Term = (u8, MultiIndex);

/// Formal linear combination of tensor words.
pub type TensorSum = BTreeMap<MultiIndex, Scalar>;

/// A homogeneous element of `C(W) = Hom(T(W), W)`.
///
/// Zero coefficients are never stored. Equality compares the space and the
/// term map; the declared parity only matters for the zero cochain and is
/// ignored by `==`.
#[derive(Clone)]
pub struct Coderivation {
    space: GradedSpace,
    parity: Parity,
    terms: BTreeMap<Term, Scalar>,
}

impl PartialEq for Coderivation {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms == other.terms
    }
}

impl Eq for Coderivation {}

impl Coderivation {
    pub fn zero(space: GradedSpace, parity: Parity) -> Self {
        Coderivation { space, parity, terms: BTreeMap::new() }
    }

    /// `coeff * phi_target^sources`, parity inferred.
    pub fn term(space: GradedSpace, coeff: Scalar, target: u8, sources: &[u8]) -> Result<Self, Error> {
        let sources = MultiIndex::new(sources);
        let parity = space.parity_of(target, &sources)?;
        let mut c = Coderivation::zero(space, parity);
        if !coeff.is_zero() {
            c.terms.insert((target, sources), coeff);
        }
        Ok(c)
    }

    /// `phi_target^sources` with coefficient 1 on the standard 1|2 space.
    ///
    /// Panics on out-of-range indices; meant for literals.
    pub fn phi(target: u8, sources: &[u8]) -> Self {
        Coderivation::term(GradedSpace::STANDARD, Scalar::one(), target, sources)
            .expect("basis cochain literal out of range")
    }

    /// Builds a cochain from `(coeff, target, sources)` triples, checking
    /// ranges and homogeneity against `parity`.
    pub fn from_terms<I, S>(space: GradedSpace, parity: Parity, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Scalar, u8, S)>,
        S: AsRef<[u8]>,
    {
        let mut c = Coderivation::zero(space, parity);
        for (coeff, target, sources) in terms {
            c.add_term(coeff, target, sources.as_ref())?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, coeff: Scalar, target: u8, sources: &[u8]) -> Result<(), Error> {
        let sources = MultiIndex::new(sources);
        let p = self.space.parity_of(target, &sources)?;
        if p != self.parity {
            return Err(Error::Inhomogeneous { target, sources });
        }
        self.accumulate((target, sources), &coeff);
        Ok(())
    }

    /// Adds `coeff` to the coefficient of `key` without parity checks.
    pub(crate) fn accumulate(&mut self, key: Term, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub(crate) fn from_map(space: GradedSpace, parity: Parity, terms: BTreeMap<Term, Scalar>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Coderivation { space, parity, terms }
    }

    pub fn space(&self) -> GradedSpace {
        self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Term, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, target: u8, sources: &[u8]) -> Scalar {
        self.terms.get(&(target, MultiIndex::new(sources))).cloned().unwrap_or_default()
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|(_, s)| s.len()).collect()
    }

    /// The part of `self` of the given arity.
    pub fn arity_part(&self, n: usize) -> Coderivation {
        let terms = self.terms.iter().filter(|((_, s), _)| s.len() == n).map(|(k, v)| (k.clone(), v.clone())).collect();
        Coderivation::from_map(self.space, self.parity, terms)
    }

    pub fn scale(&self, c: &Scalar) -> Coderivation {
        if c.is_zero() {
            return Coderivation::zero(self.space, self.parity);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Coderivation::from_map(self.space, self.parity, terms)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Coderivation, c: &Scalar) -> Coderivation {
        let mut out = self.clone();
        out.add_scaled_assign(other, c);
        out
    }

    pub fn add_scaled_assign(&mut self, other: &Coderivation, c: &Scalar) {
        assert_eq!(self.space, other.space, "coderivations on different spaces");
        if other.is_zero() || c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.parity = other.parity;
        }
        assert_eq!(self.parity, other.parity, "adding coderivations of different parity");
        for (k, v) in &other.terms {
            self.accumulate(k.clone(), &(v * c));
        }
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Coderivation {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, v)| {
                let w = f(v);
                (!w.is_zero()).then(|| (k.clone(), w))
            })
            .collect();
        Coderivation::from_map(self.space, self.parity, terms)
    }

    /// Relabels basis indices by `sigma` (1-based, `sigma[i-1]` is the image of `i`).
    pub fn relabel(&self, sigma: &[u8]) -> Coderivation {
        let mut out = Coderivation::zero(self.space, self.parity);
        for ((t, s), c) in &self.terms {
            let s2 = MultiIndex(s.0.iter().map(|&i| sigma[i as usize - 1]).collect());
            out.accumulate((sigma[*t as usize - 1], s2), c);
        }
        out
    }
}

/// Composition from the insertion formula:
/// `phi_i^I o phi_j^J = sum_k (-1)^{(|v_{i_1}|+..+|v_{i_{k-1}}|) |phi_j^J|} delta_{i_k, j} phi_i^{I with J at k}`.
pub fn compose(f: &Coderivation, g: &Coderivation) -> Coderivation {
    assert_eq!(f.space, g.space, "coderivations on different spaces");
    let space = f.space;
    let mut out = Coderivation::zero(space, f.parity + g.parity);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    let gp = g.parity;
    for ((i, big_i), a) in &f.terms {
        let mut prefix = Parity::Even;
        for (k, &ik) in big_i.as_slice().iter().enumerate() {
            for ((j, big_j), b) in g.terms.range((ik, MultiIndex::empty())..) {
                if *j != ik {
                    break;
                }
                let c = a * b;
                let c = if prefix.koszul(gp) { -c } else { c };
                out.accumulate((*i, big_i.insert_at(k, big_j)), &c);
            }
            prefix = prefix + space.parity_unchecked(ik);
        }
    }
    out
}

/// Graded commutator `[f, g] = f o g - (-1)^{|f||g|} g o f`.
pub fn bracket(f: &Coderivation, g: &Coderivation) -> Coderivation {
    let fg = compose(f, g);
    let gf = compose(g, f);
    let sign = if f.parity.koszul(g.parity) { Scalar::one() } else { -Scalar::one() };
    fg.add_scaled(&gf, &sign)
}

/// `[d, d] = 0` for an odd `d`.
pub fn is_codifferential(d: &Coderivation) -> bool {
    (d.is_zero() || d.parity == Parity::Odd) && compose(d, d).is_zero()
}

/// Hochschild coboundary `D(f) = [d, f]`; rejects `d` with `[d, d] != 0`.
pub fn coboundary(d: &Coderivation, f: &Coderivation) -> Result<Coderivation, Error> {
    if d.space != f.space {
        return Err(Error::SpaceMismatch);
    }
    if !is_codifferential(d) {
        return Err(Error::NotCodifferential);
    }
    Ok(bracket(d, f))
}

/// Applies the coderivation extension of `f` to a single tensor word:
/// `f(w_1..w_n) = sum (-1)^{|f|(|w_1|+..+|w_{k-1}|)} w_1..w_{k-1} f(w_k..w_{k+l-1}) w_{k+l}..w_n`.
pub fn evaluate(f: &Coderivation, word: &MultiIndex) -> TensorSum {
    let mut out = TensorSum::new();
    let w = word.as_slice();
    let space = f.space;
    for ((i, big_i), c) in &f.terms {
        let l = big_i.len();
        if l > w.len() {
            continue;
        }
        let mut prefix = Parity::Even;
        for k in 0..=(w.len() - l) {
            if &w[k..k + l] == big_i.as_slice() {
                let mut nw = Vec::with_capacity(w.len() + 1 - l);
                nw.extend_from_slice(&w[..k]);
                nw.push(*i);
                nw.extend_from_slice(&w[k + l..]);
                let c = if prefix.koszul(f.parity) { -c.clone() } else { c.clone() };
                add_to_sum(&mut out, MultiIndex(nw), &c);
            }
            if k < w.len() {
                prefix = prefix + space.parity_unchecked(w[k]);
            }
        }
    }
    out
}

/// Linear extension of [`evaluate`] to a formal sum of words.
pub fn evaluate_sum(f: &Coderivation, x: &TensorSum) -> TensorSum {
    let mut out = TensorSum::new();
    for (w, c) in x {
        for (w2, c2) in evaluate(f, w) {
            add_to_sum(&mut out, w2, &(c * &c2));
        }
    }
    out
}

fn add_to_sum(s: &mut TensorSum, w: MultiIndex, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match s.get_mut(&w) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                s.remove(&w);
            }
        }
        None => {
            s.insert(w, c.clone());
        }
    }
}

impl Add for &Coderivation {
    type Output = Coderivation;
    fn add(self, o: &Coderivation) -> Coderivation {
        self.add_scaled(o, &Scalar::one())
    }
}

impl Sub for &Coderivation {
    type Output = Coderivation;
    fn sub(self, o: &Coderivation) -> Coderivation {
        self.add_scaled(o, &-Scalar::one())
    }
}

impl Add for Coderivation {
    type Output = Coderivation;
    fn add(self, o: Coderivation) -> Coderivation {
        &self + &o
    }
}

impl Sub for Coderivation {
    type Output = Coderivation;
    fn sub(self, o: Coderivation) -> Coderivation {
        &self - &o
    }
}

impl Neg for &Coderivation {
    type Output = Coderivation;
    fn neg(self) -> Coderivation {
        self.scale(&-Scalar::one())
    }
}

fn fmt_indices(f: &mut fmt::Formatter<'_>, idx: &[u8]) -> fmt::Result {
    if idx.iter().all(|&i| i < 10) {
        for i in idx {
            write!(f, "{}", i)?;
        }
        Ok(())
    } else {
        for (n, i) in idx.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i)?;
        }
        Ok(())
    }
}

impl fmt::Display for Coderivation {
    /// Renders e.g. `psi1^13 - psi1^31 + 2*phi1^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, ((t, s), c)) in self.terms.iter().enumerate() {
            let name = if self.parity.is_odd() { "psi" } else { "phi" };
            let neg = c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into());
            let mag = if neg { -c } else { c.clone() };
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                if mag.is_real() {
                    write!(f, "{}*", mag)?;
                } else {
                    write!(f, "({})*", mag)?;
                }
            }
            write!(f, "{}{}^", name, t)?;
            fmt_indices(f, s.as_slice())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coderivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coderivation[{} {}]({})", self.space, self.parity, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(t: u8, s: &[u8]) -> Coderivation {
        Coderivation::phi(t, s)
    }

    #[test]
    fn square_of_psi_2_22_vanishes() {
        let m = psi(2, &[2, 2]);
        assert!(compose(&m, &m).is_zero());
        assert!(is_codifferential(&m));
    }

    #[test]
    fn evaluate_cancels_by_koszul_sign() {
        let m = psi(2, &[2, 2]);
        assert!(evaluate(&m, &MultiIndex::new(&[2, 2, 2])).is_empty());
        let d = &(&psi(1, &[1, 3]) - &psi(1, &[3, 1])) + &psi(3, &[1, 1]);
        let out = evaluate(&d, &MultiIndex::new(&[1, 3]));
        assert_eq!(out.len(), 1);
        assert_eq!(out.get(&MultiIndex::new(&[1])), Some(&Scalar::one()));
    }

    #[test]
    fn compose_with_zero() {
        let f = psi(1, &[1, 3]);
        let z = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
        assert!(compose(&f, &z).is_zero());
    }

    #[test]
    fn homogeneity_is_enforced() {
        let mut c = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
        assert!(c.add_term(Scalar::one(), 1, &[1, 1]).is_err());
        assert!(c.add_term(Scalar::one(), 4, &[1, 1]).is_err());
        assert!(c.add_term(Scalar::one(), 1, &[1, 2]).is_ok());
    }

    #[test]
    fn display() {
        let d = &(&psi(1, &[1, 3]) - &psi(1, &[3, 1])) + &psi(2, &[2, 2]).scale(&Scalar::from_int(2));
        assert_eq!(alloc::format!("{}", d), "psi1^13 - psi1^31 + 2*psi2^22");
    }
}
