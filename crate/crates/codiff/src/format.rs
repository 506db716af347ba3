//! The JSON codifferential format.
//!
//! ```json
//! {"space": {"even": 1, "odd": 2},
//!  "terms": [{"target": 1, "sources": [1, 3], "coeff": {"re": "1", "im": "0"}}]}
//! ```
//!
//! Rationals are `"p"` or `"p/q"` strings. Terms are emitted in the canonical
//! `(target, sources)` order, so emit after parse is byte-identical for any
//! file produced by [`emit`].

use std::path::Path;

use codiff_core::scalar::{parse_rational, rational_to_string};
use codiff_core::{Coderivation, GradedSpace, MultiIndex, Parity, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("term {term}: basis index {index} out of range 1..={dim}")]
    IndexOutOfRange { term: usize, index: u32, dim: usize },
    #[error("term {term}: parity {found} differs from the parity {expected} of the first term")]
    Inhomogeneous { term: usize, expected: Parity, found: Parity },
    #[error("term {term}: invalid coefficient {value:?} (expected \"p\" or \"p/q\")")]
    BadCoefficient { term: usize, value: String },
    #[error("term {term}: duplicate (target, sources) pair")]
    DuplicateTerm { term: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub even: usize,
    pub odd: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffJson {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub target: u32,
    pub sources: Vec<u32>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodifferentialJson {
    pub space: SpaceJson,
    pub terms: Vec<TermJson>,
}

pub fn scalar_to_json(c: &Scalar) -> CoeffJson {
    CoeffJson { re: rational_to_string(c.re()), im: rational_to_string(c.im()) }
}

pub fn scalar_from_json(c: &CoeffJson, term: usize) -> Result<Scalar, FormatError> {
    let part = |s: &str| {
        if s.contains('.') || s.contains('e') || s.contains('E') {
            return Err(FormatError::BadCoefficient { term, value: s.into() });
        }
        parse_rational(s).map_err(|_| FormatError::BadCoefficient { term, value: s.into() })
    };
    Ok(Scalar::new(part(&c.re)?, part(&c.im)?))
}

pub fn to_json(d: &Coderivation) -> CodifferentialJson {
    let space = d.space();
    CodifferentialJson {
        space: SpaceJson { even: space.even_dim, odd: space.odd_dim },
        terms: d
            .terms()
            .map(|((t, s), c)| TermJson {
                target: *t as u32,
                sources: s.as_slice().iter().map(|&x| x as u32).collect(),
                coeff: scalar_to_json(c),
            })
            .collect(),
    }
}

/// Checks indices and parity term by term so each failure names its term.
/// An empty term list is the odd zero cochain.
pub fn from_json(j: &CodifferentialJson) -> Result<Coderivation, FormatError> {
    let space = GradedSpace::new(j.space.even, j.space.odd);
    let dim = space.dim();
    let mut parity = None;
    let mut out: Option<Coderivation> = None;
    for (n, t) in j.terms.iter().enumerate() {
        for &i in std::iter::once(&t.target).chain(&t.sources) {
            if i == 0 || i as usize > dim {
                return Err(FormatError::IndexOutOfRange { term: n, index: i, dim });
            }
        }
        let target = t.target as u8;
        let sources: Vec<u8> = t.sources.iter().map(|&x| x as u8).collect();
        let p = space.parity_of(target, &MultiIndex::new(&sources)).expect("indices checked");
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => return Err(FormatError::Inhomogeneous { term: n, expected: q, found: p }),
            _ => {}
        }
        let c = scalar_from_json(&t.coeff, n)?;
        let d = out.get_or_insert_with(|| Coderivation::zero(space, p));
        if !d.coeff(target, &sources).is_zero() {
            return Err(FormatError::DuplicateTerm { term: n });
        }
        if !c.is_zero() {
            d.add_term(c, target, &sources).expect("parity checked");
        }
    }
    Ok(out.unwrap_or_else(|| Coderivation::zero(space, Parity::Odd)))
}

pub fn emit(d: &Coderivation) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(d)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Coderivation, FormatError> {
    from_json(&serde_json::from_str(text)?)
}

pub fn read_file(path: &Path) -> Result<Coderivation, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

/// `dK.json` files of a directory, sorted by `K`.
pub fn read_catalog_dir(dir: &Path) -> Result<Vec<(usize, Coderivation)>, FormatError> {
    let io = |source| FormatError::Io { path: dir.display().to_string(), source };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let Some(k) = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_prefix('d'))
            .and_then(|n| n.strip_suffix(".json"))
            .and_then(|n| n.parse::<usize>().ok())
        else {
            continue;
        };
        out.push((k, read_file(&path)?));
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}
