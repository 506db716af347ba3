//! Exact computer algebra for codifferentials on small Z/2-graded spaces.
//!
//! An associative multiplication on a 2|1-dimensional space `A` is encoded as an
//! odd quadratic codifferential `d` on the parity-reversed 1|2 space `W = ΠA`,
//! with associativity equivalent to `[d, d] = 0`. This crate provides the
//! coderivation calculus, exact linear algebra over Q(i), Hochschild
//! cohomology, algebra invariants, the 28-entry catalog, extension
//! enumeration, versal deformations with obstruction relations, jump
//! detection and graded isomorphism search.
//!
//! Everything runs on exact Gaussian rationals; no floating point is used.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod catalog;
pub mod coderivation;
pub mod deformations;
pub mod equivalence;
pub mod extensions;
pub mod graded;
pub mod hochschild;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use coderivation::Coderivation;
pub use graded::{GradedSpace, MultiIndex, Parity};
pub use scalar::Scalar;

use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    IndexOutOfRange { index: usize, dim: usize },
    Inhomogeneous { target: u8, sources: MultiIndex },
    SpaceMismatch,
    NotCodifferential,
    NotCocycle,
    DimensionMismatch { expected: usize, found: usize },
    NotInCatalog(usize),
    SingularAutomorphism,
    BidegreeViolation,
    RelationViolated { relation: usize },
    Unsupported(&'static str),
    InvalidSetup(&'static str),
    MaurerCartan,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, dim } => {
                write!(f, "basis index {} out of range 1..={}", index, dim)
            }
            Error::Inhomogeneous { target, sources } => {
                write!(f, "term with target {} and sources {} has the wrong parity", target, sources)
            }
            Error::SpaceMismatch => f.write_str("operands live on different graded spaces"),
            Error::NotCodifferential => f.write_str("[d, d] != 0: not a codifferential"),
            Error::NotCocycle => f.write_str("cochain is not a cocycle"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}, found {}", expected, found)
            }
            Error::NotInCatalog(k) => write!(f, "no catalog entry d{}", k),
            Error::SingularAutomorphism => f.write_str("automorphism is not invertible"),
            Error::BidegreeViolation => f.write_str("cochain has the wrong bidegree"),
            Error::RelationViolated { relation } => {
                write!(f, "parameter values violate relation {}", relation)
            }
            Error::Unsupported(what) => write!(f, "unsupported: {}", what),
            Error::InvalidSetup(what) => write!(f, "invalid extension setup: {}", what),
            Error::MaurerCartan => f.write_str("lambda does not solve the Maurer-Cartan equation with psi = 0"),
        }
    }
}

impl core::error::Error for Error {}
