//! Isomorphism witnesses found once and checked in. Set
//! `CODIFF_UPDATE_GOLDEN=1` to rewrite the file after an intended change.

use std::path::Path;

use codiff::format::{from_json, scalar_from_json, scalar_to_json, to_json, CodifferentialJson, CoeffJson};
use codiff_core::algebra::opposite;
use codiff_core::equivalence::{find_isomorphism, verify, CatalogIndex, GradedAutomorphism, DEFAULT_BUDGET};
use codiff_core::extensions::Case;
use codiff_core::{catalog, Coderivation, GradedSpace, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct Witness {
    label: String,
    source: CodifferentialJson,
    /// 0 is the zero codifferential.
    target: usize,
    matrix: Vec<Vec<CoeffJson>>,
}

fn path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden/witnesses.json")
}

fn target(k: usize) -> Coderivation {
    if k == 0 {
        Coderivation::zero(GradedSpace::STANDARD, codiff_core::Parity::Odd)
    } else {
        catalog::codifferential(k).unwrap()
    }
}

fn witness(label: String, source: &Coderivation, k: usize, g: &GradedAutomorphism) -> Witness {
    Witness {
        label,
        source: to_json(source),
        target: k,
        matrix: g.to_dense().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect(),
    }
}

fn compute() -> Vec<Witness> {
    let idx = CatalogIndex::new().unwrap();
    let mut out = Vec::new();
    for case in Case::ALL {
        for (n, (_, c)) in case.enumerate().unwrap().into_iter().enumerate() {
            let (k, g) = idx.identify_with_witness(&c.codifferential, DEFAULT_BUDGET).unwrap().unwrap();
            out.push(witness(format!("{} class {}", case.name(), n + 1), &c.codifferential, k, &g.unwrap()));
        }
    }
    let d2 = catalog::codifferential(2).unwrap() + Coderivation::phi(2, &[2, 2]).scale(&Scalar::from_int(3));
    let g = find_isomorphism(&d2, &target(1), DEFAULT_BUDGET).unwrap().witness.unwrap();
    out.push(witness("d2 + 3 psi_2^22".into(), &d2, 1, &g));
    let op5 = opposite(&catalog::codifferential(5).unwrap());
    let g = find_isomorphism(&op5, &target(5), DEFAULT_BUDGET).unwrap().witness.unwrap();
    out.push(witness("opposite of d5".into(), &op5, 5, &g));
    out
}

#[test]
fn golden_witnesses_reproduce_and_verify() {
    let fresh = compute();
    if std::env::var_os("CODIFF_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path().parent().unwrap()).unwrap();
        std::fs::write(path(), serde_json::to_string_pretty(&fresh).unwrap() + "\n").unwrap();
    }
    let stored: Vec<Witness> = serde_json::from_str(&std::fs::read_to_string(path()).unwrap()).unwrap();
    assert_eq!(stored, fresh, "witness search is no longer deterministic or changed");
    for w in &stored {
        let rows: Vec<Vec<Scalar>> =
            w.matrix.iter().map(|r| r.iter().map(|c| scalar_from_json(c, 0).unwrap()).collect()).collect();
        let g = GradedAutomorphism::new(GradedSpace::STANDARD, &rows).unwrap();
        assert!(verify(&g, &from_json(&w.source).unwrap(), &target(w.target)), "{}", w.label);
    }
    let targets: std::collections::BTreeSet<usize> = stored.iter().map(|w| w.target).collect();
    assert_eq!(targets, (0..=28).collect());
}
