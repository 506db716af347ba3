//! The 28 codifferentials on the 1|2 space and the reference data stated for
//! them (cohomology table, graded splits, flags, centers, opposite partners,
//! parameter counts and jump targets).
//!
//! Reference data is only ever compared against computed values.

use alloc::vec::Vec;

use crate::coderivation::Coderivation;
use crate::graded::{GradedSpace, Parity};
use crate::scalar::Scalar;
use crate::Error;

pub const COUNT: usize = 28;

// (coefficient, target, sources)
type Raw = &'static [(i64, u8, [u8; 2])];

const TERMS: [Raw; COUNT] = [
    &[(1, 1, [1, 3]), (-1, 1, [3, 1]), (1, 3, [1, 1]), (1, 2, [2, 2]), (-1, 3, [3, 3])],
    &[(1, 1, [1, 3]), (-1, 1, [3, 1]), (1, 3, [1, 1]), (-1, 3, [3, 3])],
    &[(1, 2, [2, 2]), (1, 3, [3, 3]), (-1, 1, [1, 2])],
    &[(1, 2, [2, 2]), (1, 3, [3, 3]), (1, 1, [2, 1])],
    &[(1, 2, [2, 2]), (1, 3, [3, 3]), (1, 1, [2, 1]), (-1, 1, [1, 3])],
    &[(1, 2, [2, 2]), (1, 3, [3, 3]), (1, 1, [2, 1]), (-1, 1, [1, 2])],
    &[(1, 2, [2, 2]), (1, 3, [3, 3])],
    &[(1, 3, [3, 3]), (1, 2, [1, 1]), (1, 1, [3, 1]), (-1, 1, [1, 3]), (1, 2, [3, 2]), (1, 2, [2, 3])],
    &[(1, 3, [3, 3]), (1, 2, [1, 1])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3]), (1, 2, [2, 3])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1]), (1, 2, [2, 3])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1]), (-1, 1, [1, 3]), (1, 2, [2, 3])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1]), (-1, 1, [1, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (1, 2, [2, 3])],
    &[(1, 3, [3, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3]), (1, 2, [2, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1]), (1, 2, [2, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (1, 2, [2, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3])],
    &[(1, 3, [3, 3]), (1, 1, [3, 1])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3]), (1, 1, [3, 1])],
    &[(1, 3, [3, 3]), (-1, 1, [1, 3]), (1, 1, [3, 1]), (1, 2, [2, 3]), (1, 2, [3, 2])],
    &[(1, 3, [3, 3])],
    &[(1, 2, [1, 1]), (1, 2, [3, 3])],
    &[(1, 2, [1, 1])],
    &[(1, 2, [3, 3])],
];

const TABLE: [[usize; 5]; COUNT] = [
    [2, 0, 0, 0, 0],
    [2, 1, 1, 1, 1],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [3, 2, 2, 2, 2],
    [3, 1, 1, 1, 1],
    [2, 1, 1, 1, 1],
    [2, 1, 2, 2, 1],
    [0, 3, 0, 0, 0],
    [0, 3, 0, 0, 0],
    [0, 1, 0, 1, 0],
    [0, 1, 0, 1, 0],
    [1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1],
    [1, 1, 2, 2, 2],
    [1, 1, 2, 2, 2],
    [1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1],
    [3, 2, 2, 2, 2],
    [1, 1, 2, 2, 2],
    [1, 1, 2, 2, 2],
    [3, 3, 3, 3, 3],
    [3, 4, 6, 12, 24],
    [3, 4, 8, 16, 32],
    [2, 2, 3, 5, 6],
    [3, 4, 9, 18, 32],
    [3, 5, 9, 17, 33],
];

/// A stated graded split `h^degree = even|odd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub degree: usize,
    pub even: usize,
    pub odd: usize,
}

const fn sp(degree: usize, even: usize, odd: usize) -> Split {
    Split { degree, even, odd }
}

/// Stated properties. `None` means the property is not stated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metadata {
    pub unital: Option<bool>,
    pub commutative: Option<bool>,
    pub nilpotent: Option<bool>,
    /// Spanning vectors of the center in `W` coordinates.
    pub center: Option<Vec<[i64; 3]>>,
    pub opposite: Option<usize>,
    pub parameters: Option<usize>,
    /// Stated jump targets; `Some(empty)` for rigid entries.
    pub jumps: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub index: usize,
    pub codifferential: Coderivation,
    pub expected_row: [usize; 5],
    pub splits: Vec<Split>,
    pub metadata: Metadata,
}

impl CatalogEntry {
    pub fn name(&self) -> alloc::string::String {
        alloc::format!("d{}", self.index)
    }
}

fn splits(k: usize) -> Vec<Split> {
    let zeros = |even: usize, odd: usize| -> Vec<Split> {
        let mut v = alloc::vec![sp(0, even, odd)];
        v.extend((1..=4).map(|n| sp(n, 0, 0)));
        v
    };
    match k {
        1 => zeros(0, 2),
        3..=5 => zeros(0, 1),
        7 => alloc::vec![sp(2, 1, 0)],
        8 => alloc::vec![sp(1, 1, 0), sp(2, 0, 1), sp(3, 1, 0), sp(4, 0, 1)],
        9 => alloc::vec![sp(2, 1, 1)],
        16 | 17 => alloc::vec![sp(2, 2, 0)],
        21 | 22 => alloc::vec![sp(3, 2, 0)],
        24 => alloc::vec![sp(2, 3, 3)],
        25 => alloc::vec![sp(2, 4, 4), sp(3, 8, 8)],
        26 => alloc::vec![sp(2, 1, 2), sp(3, 3, 2)],
        27 => alloc::vec![sp(2, 5, 4), sp(3, 6, 11)],
        28 => alloc::vec![sp(2, 5, 4), sp(3, 9, 8)],
        _ => Vec::new(),
    }
}

fn metadata(k: usize) -> Metadata {
    let mut m = Metadata {
        unital: None,
        commutative: None,
        nilpotent: None,
        center: None,
        opposite: None,
        parameters: None,
        jumps: None,
    };
    let v23 = alloc::vec![[0, 1, 0], [0, 0, 1]];
    let jumps = |s: &[usize]| Some(s.to_vec());
    match k {
        1 => {
            m.unital = Some(true);
            m.center = Some(v23);
            m.parameters = Some(0);
            m.jumps = jumps(&[]);
        }
        2 => {
            m.unital = Some(false);
            m.center = Some(v23);
            m.parameters = Some(1);
            m.jumps = jumps(&[1]);
        }
        3 | 4 => {
            m.unital = Some(false);
            m.center = Some(alloc::vec![[0, 0, 1]]);
            m.opposite = Some(7 - k);
        }
        5 => {
            m.unital = Some(false);
            m.center = Some(alloc::vec![[0, 1, 1]]);
            m.opposite = Some(5);
        }
        6 => {
            m.unital = Some(true);
            m.commutative = Some(true);
            m.jumps = jumps(&[1]);
        }
        7 => {
            m.unital = Some(false);
            m.commutative = Some(true);
        }
        8 => {
            m.unital = Some(true);
            m.commutative = Some(false);
            m.center = Some(v23);
            m.jumps = jumps(&[1]);
        }
        9 => {
            m.unital = Some(false);
            m.center = Some(v23);
            m.jumps = jumps(&[1]);
        }
        10..=15 | 18 | 19 | 21 | 22 => {
            m.unital = Some(false);
            m.commutative = Some(false);
            m.opposite = Some(match k {
                10 => 11,
                11 => 10,
                12 => 13,
                13 => 12,
                14 => 15,
                15 => 14,
                18 => 19,
                19 => 18,
                21 => 22,
                _ => 21,
            });
            if k == 21 {
                m.parameters = Some(2);
                m.jumps = jumps(&[3, 5]);
            }
            if k == 22 {
                m.parameters = Some(2);
                m.jumps = jumps(&[4, 5]);
            }
        }
        16 | 17 => {
            m.unital = Some(false);
            m.center = Some(alloc::vec![[1, 0, 0]]);
            m.opposite = Some(33 - k);
        }
        20 => {
            m.unital = Some(false);
            m.commutative = Some(true);
            m.jumps = jumps(&[7]);
        }
        23 => {
            m.unital = Some(false);
            m.commutative = Some(true);
            m.parameters = Some(2);
            m.jumps = jumps(&[1, 2, 7]);
        }
        24 => {
            m.unital = Some(true);
            m.commutative = Some(true);
            m.parameters = Some(3);
            m.jumps = jumps(&[1, 5, 7, 8]);
        }
        25 => {
            m.unital = Some(false);
            m.commutative = Some(true);
            m.parameters = Some(4);
            m.jumps = jumps(&[1, 3, 4, 6, 7, 9]);
        }
        26 => {
            m.unital = Some(false);
            m.nilpotent = Some(true);
            m.center = Some(v23);
            m.jumps = jumps(&[1, 2, 8, 9]);
        }
        27 => {
            m.nilpotent = Some(true);
            m.center = Some(v23);
            m.parameters = Some(4);
            m.jumps = jumps(&[1, 2, 8, 9, 26]);
        }
        28 => {
            m.nilpotent = Some(true);
            m.commutative = Some(true);
            m.parameters = Some(5);
            m.jumps = jumps(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 18, 19, 20, 21, 22, 23, 24, 25, 26]);
        }
        _ => {}
    }
    m
}

/// The codifferential `d_k`.
pub fn codifferential(k: usize) -> Result<Coderivation, Error> {
    if !(1..=COUNT).contains(&k) {
        return Err(Error::NotInCatalog(k));
    }
    let mut d = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
    for &(c, t, s) in TERMS[k - 1] {
        d.add_term(Scalar::from_int(c), t, &s)?;
    }
    Ok(d)
}

pub fn get(k: usize) -> Result<CatalogEntry, Error> {
    Ok(CatalogEntry {
        index: k,
        codifferential: codifferential(k)?,
        expected_row: TABLE[k - 1],
        splits: splits(k),
        metadata: metadata(k),
    })
}

/// The Table 1 totals for `d_k`, verbatim.
pub fn expected_row(k: usize) -> Result<[usize; 5], Error> {
    if !(1..=COUNT).contains(&k) {
        return Err(Error::NotInCatalog(k));
    }
    Ok(TABLE[k - 1])
}

pub fn all() -> Vec<CatalogEntry> {
    (1..=COUNT).map(|k| get(k).expect("index in range")).collect()
}

/// The variant of `d14` printed in its section heading (`psi_3^31` in place
/// of `psi_1^31`). `phi_3^31` is even, so the variant is not a homogeneous
/// odd cochain and construction fails.
pub fn d14_heading_variant() -> Result<Coderivation, Error> {
    let mut d = Coderivation::zero(GradedSpace::STANDARD, Parity::Odd);
    for &(c, t, s) in &[(1, 3, [3, 3]), (1, 3, [3, 1]), (-1, 1, [1, 3]), (1, 2, [2, 3])] {
        d.add_term(Scalar::from_int(c), t, &s)?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coderivation::is_codifferential;

    #[test]
    fn entries_are_codifferentials() {
        for e in all() {
            assert!(is_codifferential(&e.codifferential), "d{}", e.index);
        }
        assert!(matches!(d14_heading_variant(), Err(Error::Inhomogeneous { target: 3, .. })));
    }

    #[test]
    fn literal_entries() {
        let d1 = codifferential(1).unwrap();
        assert_eq!(d1.len(), 5);
        assert_eq!(d1.coeff(1, &[3, 1]), Scalar::from_int(-1));
        assert_eq!(codifferential(25).unwrap().len(), 1);
        assert_eq!(expected_row(24).unwrap(), [3, 4, 6, 12, 24]);
        assert!(get(0).is_err() && get(29).is_err());
    }

    #[test]
    fn partners_are_symmetric() {
        for e in all() {
            if let Some(p) = e.metadata.opposite {
                assert_eq!(get(p).unwrap().metadata.opposite, Some(e.index));
            }
        }
    }
}
