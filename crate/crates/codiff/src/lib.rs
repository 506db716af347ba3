//! File formats, reports and the command layer for the `codiff` tool.
//!
//! All mathematics lives in `codiff-core`; this crate adds the JSON
//! codifferential format, the checked-in data and errata, report rendering
//! and the reproduction checks.

pub mod checks;
pub mod commands;
pub mod errata;
pub mod format;
pub mod report;
pub mod sample;

use std::path::Path;

use codiff_core::deformations::SamplePlan;
use serde::Deserialize;

pub const DEFAULT_SEEDS: &str = include_str!("../data/seeds.json");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedListJson {
    seeds: Vec<String>,
    samples_per_branch: usize,
}

/// Parses a seed list: `{"seeds": ["3", "-7/2", ...], "samples_per_branch": 3}`.
pub fn parse_seed_list(text: &str) -> Result<SamplePlan, String> {
    let j: SeedListJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut seeds = Vec::new();
    for s in &j.seeds {
        let q = codiff_core::scalar::parse_rational(s).map_err(|e| e.to_string())?;
        let x = codiff_core::Scalar::from_rational(q);
        if x.is_zero() || seeds.contains(&x) {
            return Err(format!("seed {:?} must be nonzero and distinct", s));
        }
        seeds.push(x);
    }
    if j.samples_per_branch == 0 {
        return Err("samples_per_branch must be positive".into());
    }
    Ok(SamplePlan { seeds, samples_per_branch: j.samples_per_branch })
}

pub fn read_seed_list(path: &Path) -> Result<SamplePlan, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_seed_list(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

pub fn default_plan() -> SamplePlan {
    parse_seed_list(DEFAULT_SEEDS).expect("checked-in seed list parses")
}
