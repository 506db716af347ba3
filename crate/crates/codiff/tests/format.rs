use std::path::Path;

use codiff::format::{emit, parse, read_catalog_dir, read_file, FormatError};
use codiff::sample;
use codiff_core::{catalog, Parity};

fn data(p: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(p)
}

#[test]
fn catalog_round_trips_bit_exactly() {
    for e in catalog::all() {
        let text = emit(&e.codifferential);
        let back = parse(&text).unwrap();
        assert_eq!(back, e.codifferential, "{}", e.name());
        assert_eq!(emit(&back), text);
    }
}

#[test]
fn shipped_files_match_builtin() {
    let files = read_catalog_dir(&data("catalog")).unwrap();
    assert_eq!(files.len(), catalog::COUNT);
    for (k, d) in files {
        assert_eq!(d, catalog::codifferential(k).unwrap(), "d{}", k);
        let text = std::fs::read_to_string(data(&format!("catalog/d{}.json", k))).unwrap();
        assert_eq!(emit(&d), text, "d{} is not in canonical form", k);
    }
    assert_eq!(read_file(&data("catalog/d2.json")).unwrap(), catalog::codifferential(2).unwrap());
}

#[test]
fn random_cochains_round_trip() {
    let mut r = sample::rng(7);
    for arity in 0..=3 {
        for _ in 0..50 {
            let p = sample::parity(&mut r);
            let c = sample::cochain(&mut r, arity, p);
            let text = emit(&c);
            let back = parse(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(emit(&back), text);
        }
    }
}

fn one_term(target: u32, sources: &str, re: &str) -> String {
    format!(
        r#"{{"space": {{"even": 1, "odd": 2}}, "terms": [{{"target": {}, "sources": {}, "coeff": {{"re": "{}", "im": "0"}}}}]}}"#,
        target, sources, re
    )
}

#[test]
fn each_error_has_its_own_diagnostic() {
    assert!(matches!(parse(&one_term(4, "[1, 1]", "1")), Err(FormatError::IndexOutOfRange { index: 4, .. })));
    assert!(matches!(parse(&one_term(1, "[0, 1]", "1")), Err(FormatError::IndexOutOfRange { index: 0, .. })));
    assert!(matches!(parse(&one_term(1, "[1, 3]", "1.5")), Err(FormatError::BadCoefficient { .. })));
    assert!(matches!(parse(&one_term(1, "[1, 3]", "1/0")), Err(FormatError::BadCoefficient { .. })));
    assert!(matches!(parse("{\"space\": "), Err(FormatError::Json(_))));
    assert!(matches!(parse(r#"{"space": {"even": 1, "odd": 2}, "terms": [], "extra": 1}"#), Err(FormatError::Json(_))));
    let mixed = r#"{"space": {"even": 1, "odd": 2}, "terms": [
        {"target": 1, "sources": [1, 3], "coeff": {"re": "1", "im": "0"}},
        {"target": 1, "sources": [1, 1], "coeff": {"re": "1", "im": "0"}}]}"#;
    assert!(matches!(
        parse(mixed),
        Err(FormatError::Inhomogeneous { term: 1, expected: Parity::Odd, found: Parity::Even })
    ));
    let dup = r#"{"space": {"even": 1, "odd": 2}, "terms": [
        {"target": 1, "sources": [1, 3], "coeff": {"re": "1", "im": "0"}},
        {"target": 1, "sources": [1, 3], "coeff": {"re": "2", "im": "0"}}]}"#;
    assert!(matches!(parse(dup), Err(FormatError::DuplicateTerm { term: 1 })));

    let messages: Vec<String> = [one_term(4, "[1, 1]", "1"), one_term(1, "[1, 3]", "x"), "[".into(), mixed.into()]
        .iter()
        .map(|t| parse(t).unwrap_err().to_string())
        .collect();
    for (i, a) in messages.iter().enumerate() {
        for b in &messages[i + 1..] {
            assert_ne!(a, b);
        }
    }
}

#[test]
fn gaussian_and_fractional_coefficients() {
    let text = r#"{"space": {"even": 1, "odd": 2}, "terms": [{"target": 2, "sources": [2, 2], "coeff": {"re": "-3/6", "im": "2/4"}}]}"#;
    let d = parse(text).unwrap();
    let j = codiff::format::to_json(&d);
    assert_eq!(j.terms[0].coeff.re, "-1/2");
    assert_eq!(j.terms[0].coeff.im, "1/2");
}

#[test]
fn empty_term_list_is_the_zero_codifferential() {
    let d = parse(r#"{"space": {"even": 1, "odd": 2}, "terms": []}"#).unwrap();
    assert!(d.is_zero());
    assert_eq!(d.parity(), Parity::Odd);
}
