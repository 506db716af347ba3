//! Reports: one JSON value per command, with the text rendering derived
//! from it.

use serde::Serialize;
use serde_json::{json, Value};

use crate::errata::Errata;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub key: String,
    pub stated: String,
    pub computed: String,
    /// Reported for the record; does not decide any pass/fail verdict.
    pub informational: bool,
    pub whitelisted: bool,
}

impl Discrepancy {
    pub fn new(key: impl Into<String>, stated: impl ToString, computed: impl ToString) -> Self {
        Discrepancy {
            key: key.into(),
            stated: stated.to_string(),
            computed: computed.to_string(),
            informational: false,
            whitelisted: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub body: Value,
    pub discrepancies: Vec<Discrepancy>,
    render: fn(&Value) -> String,
}

impl Report {
    pub fn new(command: impl Into<String>, body: Value, render: fn(&Value) -> String) -> Self {
        Report { command: command.into(), body, discrepancies: Vec::new(), render }
    }

    pub fn with_discrepancies(mut self, d: Vec<Discrepancy>) -> Self {
        self.discrepancies = d;
        self
    }

    pub fn apply_errata(&mut self, errata: &Errata) {
        for d in &mut self.discrepancies {
            d.whitelisted = errata.whitelists(&d.key, &d.computed);
        }
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| !d.whitelisted)
    }

    pub fn exit_code(&self) -> i32 {
        if self.unexpected().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "result": self.body,
            "discrepancies": self.discrepancies,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = (self.render)(&self.body);
        if !out.ends_with('\n') {
            out.push('\n');
        }
        if !self.discrepancies.is_empty() {
            out.push_str("\ndiscrepancies:\n");
            let rows: Vec<Vec<String>> = self
                .discrepancies
                .iter()
                .map(|d| {
                    let status = match (d.whitelisted, d.informational) {
                        (true, _) => "known (errata)",
                        (false, true) => "informational",
                        (false, false) => "UNEXPECTED",
                    };
                    vec![d.key.clone(), d.stated.clone(), d.computed.clone(), status.into()]
                })
                .collect();
            out.push_str(&table(&["key", "stated", "computed", "status"], &rows));
        }
        out
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            if i < width.len() {
                width[i] = width[i].max(c.chars().count());
            }
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{:<w$}  ", c, w = width[i]));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Renders a JSON value as `key: value` lines, nesting by indentation.
pub fn render_plain(v: &Value) -> String {
    fn go(v: &Value, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                        out.push_str(&format!("{}{}:\n", pad, k));
                        go(x, indent + 2, out);
                    } else {
                        out.push_str(&format!("{}{}: {}\n", pad, k, scalar_text(x)));
                    }
                }
            }
            Value::Array(a) => {
                for x in a {
                    if x.is_object() {
                        out.push_str(&format!("{}-\n", pad));
                        go(x, indent + 2, out);
                    } else {
                        out.push_str(&format!("{}- {}\n", pad, scalar_text(x)));
                    }
                }
            }
            x => out.push_str(&format!("{}{}\n", pad, scalar_text(x))),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out
}

pub fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        x => x.to_string(),
    }
}
