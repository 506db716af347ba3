//! Multivariate polynomials in the deformation parameters `t_1 .. t_r`, with
//! a small Buchberger implementation for ideal membership.
//!
//! Monomials are ordered by graded reverse lexicographic order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::scalar::Scalar;

/// Exponent vector, compared in grevlex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            e.push(a.checked_sub(*b)?);
        }
        Some(Monomial(e))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        let mut r = Scalar::one();
        for (v, e) in values.iter().zip(&self.0) {
            if *e > 0 {
                r *= &v.pow(*e);
            }
        }
        r
    }

    /// All exponent vectors of total degree `n` in `nvars` variables, in
    /// lexicographically decreasing order of exponents.
    pub fn of_degree(nvars: usize, n: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(n);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=n).rev() {
                prefix.push(e);
                rec(nvars, n - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if n == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, n, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // smaller exponent in the last differing variable wins
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl ParamPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ParamPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Scalar::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn homogeneous_part(&self, n: u32) -> ParamPolynomial {
        Self::from_terms(self.nvars, self.terms.iter().filter(|(m, _)| m.degree() == n).map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn scale(&self, c: &Scalar) -> ParamPolynomial {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> ParamPolynomial {
        Self::from_terms(self.nvars, self.terms.iter().map(|(k, x)| (k.mul(m), x * c)))
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |s, (m, c)| s + c * &m.eval(values))
    }

    /// Substitute `t_i = sum_j map[i][j] s_j` (a linear change of parameters).
    pub fn substitute_linear(&self, map: &[Vec<Scalar>]) -> ParamPolynomial {
        let nnew = map.first().map_or(0, |r| r.len());
        let lin: Vec<ParamPolynomial> = map
            .iter()
            .map(|row| Self::from_terms(nnew, row.iter().enumerate().map(|(j, c)| (Monomial::var(nnew, j), c.clone()))))
            .collect();
        let mut out = Self::zero(nnew);
        for (m, c) in &self.terms {
            let mut t = Self::constant(nnew, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    t = &t * &lin[i];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Substitute `t_i = value`, keeping the number of variables.
    pub fn substitute_value(&self, i: usize, value: &Scalar) -> ParamPolynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let k = core::mem::replace(&mut e.0[i], 0);
            out.add_term(e, c * &value.pow(k));
        }
        out
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    /// Roots of a polynomial in the single variable `i` of degree at most 2,
    /// within `Q(i)`. `None` if the polynomial is not of that shape or is zero.
    pub fn univariate_roots(&self, i: usize) -> Option<Vec<Scalar>> {
        let mut c = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        for (m, x) in &self.terms {
            if m.0.iter().enumerate().any(|(j, e)| j != i && *e > 0) || m.0[i] > 2 {
                return None;
            }
            c[m.0[i] as usize] = x.clone();
        }
        let [c0, c1, c2] = c;
        if c2.is_zero() {
            if c1.is_zero() {
                return if c0.is_zero() { None } else { Some(Vec::new()) };
            }
            return Some(vec![-&(&c0 / &c1)]);
        }
        let disc = &(&c1 * &c1) - &(&(&c0 * &c2) * &Scalar::from_int(4));
        let two_a = &c2 * &Scalar::from_int(2);
        Some(match disc.sqrt() {
            None => Vec::new(),
            Some(r) if r.is_zero() => vec![-&(&c1 / &two_a)],
            Some(r) => vec![&(&-&c1 - &r) / &two_a, &(&-&c1 + &r) / &two_a],
        })
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> ParamPolynomial {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(j, e)| if *e == 1 { alloc::format!("{}{}", var, j + 1) } else { alloc::format!("{}{}^{}", var, j + 1, e) })
                .collect();
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff_needed = mono.is_empty() || !mag.is_one();
            if coeff_needed {
                if mag.is_real() {
                    let _ = write!(s, "{}", mag);
                } else {
                    let _ = write!(s, "({})", mag);
                }
                if !mono.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&mono.join("*"));
        }
        s
    }
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl core::ops::Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, o: &ParamPolynomial) -> ParamPolynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl core::ops::Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, o: &ParamPolynomial) -> ParamPolynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }
}

impl core::ops::Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, o: &ParamPolynomial) -> ParamPolynomial {
        let mut r = ParamPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            for (n, x) in &o.terms {
                r.add_term(m.mul(n), c * x);
            }
        }
        r
    }
}

/// Remainder of `p` on division by `basis` (full reduction).
pub fn reduce(p: &ParamPolynomial, basis: &[ParamPolynomial]) -> ParamPolynomial {
    let mut p = p.clone();
    let mut rem = ParamPolynomial::zero(p.nvars);
    while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let mut divided = false;
        for g in basis {
            let (gm, gc) = match g.leading() {
                Some(t) => t,
                None => continue,
            };
            if let Some(q) = lm.div(gm) {
                let f = &lc * &gc.inv().expect("nonzero");
                p = &p - &g.mul_term(&q, &f);
                divided = true;
                break;
            }
        }
        if !divided {
            rem.add_term(lm.clone(), lc.clone());
            p.add_term(lm, -lc);
        }
    }
    rem
}

fn s_polynomial(f: &ParamPolynomial, g: &ParamPolynomial) -> ParamPolynomial {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm).unwrap(), &fc.inv().unwrap());
    let b = g.mul_term(&l.div(gm).unwrap(), &gc.inv().unwrap());
    &a - &b
}

/// Reduced Groebner basis (grevlex) of the ideal generated by `gens`.
pub fn groebner(gens: &[ParamPolynomial]) -> Vec<ParamPolynomial> {
    let mut g: Vec<ParamPolynomial> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (fi, fj) = (g[i].leading().unwrap().0.clone(), g[j].leading().unwrap().0.clone());
        // coprime leading monomials: the pair reduces to zero
        if fi.mul(&fj) == fi.lcm(&fj) {
            continue;
        }
        let r = reduce(&s_polynomial(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(r.monic());
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    }
    // minimalize
    let mut keep: Vec<ParamPolynomial> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let lm = p.leading().unwrap().0;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let qm = q.leading().unwrap().0;
            j != i && lm.div(qm).is_some() && (qm != lm || j < i)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    // interreduce
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<ParamPolynomial> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let lead = keep[i].leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut tail = keep[i].clone();
        tail.add_term(lead.0.clone(), -lead.1.clone());
        let mut r = reduce(&tail, &others);
        r.add_term(lead.0, lead.1);
        out.push(r.monic());
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

pub fn ideal_contains(gb: &[ParamPolynomial], p: &ParamPolynomial) -> bool {
    reduce(p, gb).is_zero()
}

/// Equality of the ideals generated by `a` and `b` (mutual membership).
pub fn ideals_equal(a: &[ParamPolynomial], b: &[ParamPolynomial]) -> bool {
    let ga = groebner(a);
    let gb = groebner(b);
    b.iter().all(|p| ideal_contains(&ga, p)) && a.iter().all(|p| ideal_contains(&gb, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, i: usize) -> ParamPolynomial {
        ParamPolynomial::var(n, i)
    }

    #[test]
    fn grevlex_order() {
        // x1^2 > x1 x2 > x2^2 > x1 x3 (grevlex with x1 > x2 > x3)
        let m = |e: &[u32]| Monomial(e.to_vec());
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        assert!(m(&[1, 1, 0]) > m(&[0, 2, 0]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert!(m(&[0, 0, 3]) > m(&[2, 0, 0]));
    }

    #[test]
    fn membership() {
        let (x, y) = (t(2, 0), t(2, 1));
        let f = &x * &(&y - &x);
        let g = f.scale(&Scalar::from_int(-3));
        assert!(ideals_equal(std::slice::from_ref(&f), &[g]));
        assert!(!ideals_equal(std::slice::from_ref(&f), &[&x * &y]));
        let gb = groebner(&[&x * &y, &y * &y]);
        assert!(ideal_contains(&gb, &(&(&x * &y) * &x)));
        assert!(!ideal_contains(&gb, &(&x * &x)));
    }

    #[test]
    fn linear_substitution() {
        let (x, y) = (t(2, 0), t(2, 1));
        let p = &x * &y;
        // x = s1 + s2, y = s2
        let map = vec![vec![Scalar::one(), Scalar::one()], vec![Scalar::zero(), Scalar::one()]];
        let q = p.substitute_linear(&map);
        assert_eq!(q, &(&x * &y) + &(&y * &y));
        assert_eq!(q.to_string(), "t1*t2 + t2^2");
    }
}
