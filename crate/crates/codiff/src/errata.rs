//! Known discrepancies between computed values and the stated source values.
//!
//! A discrepancy is whitelisted when an errata entry has the same key and,
//! if the entry records a computed value, the same computed value. A changed
//! computation therefore shows up as unexpected again.

use std::path::Path;

use serde::{Deserialize, Serialize};

pub const DEFAULT_ERRATA: &str = include_str!("../data/errata.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrataEntry {
    pub key: String,
    pub stated: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Errata {
    pub version: u32,
    pub entries: Vec<ErrataEntry>,
}

impl Errata {
    pub fn builtin() -> Errata {
        serde_json::from_str(DEFAULT_ERRATA).expect("checked-in errata parses")
    }

    pub fn load(path: &Path) -> Result<Errata, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))
    }

    pub fn empty() -> Errata {
        Errata { version: 1, entries: Vec::new() }
    }

    pub fn lookup(&self, key: &str) -> Option<&ErrataEntry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn whitelists(&self, key: &str, computed: &str) -> bool {
        self.lookup(key).is_some_and(|e| e.computed.as_deref().is_none_or(|c| c == computed))
    }
}
