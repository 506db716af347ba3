//! One report builder per subcommand. `main` only parses arguments, applies
//! the errata and prints.

use std::collections::BTreeSet;

use codiff_core::algebra::{fingerprint, opposite, to_multiplication, Fingerprint};
use codiff_core::catalog::{self, CatalogEntry};
use codiff_core::deformations::{catalog_jumps, BranchOutcome, DeformationFamily};
use codiff_core::equivalence::{find_isomorphism, GradedAutomorphism};
use codiff_core::extensions::{Case, StableCount};
use codiff_core::hochschild::cohomology_dims;
use codiff_core::poly::ParamPolynomial;
use codiff_core::Coderivation;
use serde_json::{json, Value};

use crate::checks::{self, Context, Section};
use crate::report::{render_plain, scalar_text, table, Discrepancy, Report};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("unknown catalog entry {0:?} (expected d1..d28)")]
    UnknownEntry(String),
    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
    #[error("{0}")]
    Core(#[from] codiff_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// Accepts `dK` or `K`.
pub fn parse_entry(s: &str) -> Result<usize, CommandError> {
    s.strip_prefix('d')
        .unwrap_or(s)
        .parse::<usize>()
        .ok()
        .filter(|k| (1..=catalog::COUNT).contains(k))
        .ok_or_else(|| CommandError::UnknownEntry(s.into()))
}

pub fn matrix_json(g: &GradedAutomorphism) -> Value {
    json!(g.to_dense().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn dims_text(p: (usize, usize)) -> String {
    format!("{}|{}", p.0, p.1)
}

fn fingerprint_json(f: &Fingerprint) -> Value {
    json!({
        "cohomology": f.cohomology.iter().map(|&p| dims_text(p)).collect::<Vec<_>>(),
        "center": dims_text(f.center),
        "unital": f.unital,
        "graded_commutative": f.graded_commutative,
        "nilpotent": f.nilpotent,
        "left_annihilator": dims_text(f.left_annihilator),
        "right_annihilator": dims_text(f.right_annihilator),
    })
}

fn monomial_text(m: &codiff_core::poly::Monomial) -> String {
    ParamPolynomial::from_terms(m.0.len(), [(m.clone(), codiff_core::Scalar::one())]).to_string()
}

pub fn catalog_list() -> Report {
    let rows: Vec<Value> = catalog::all()
        .iter()
        .map(|e| json!({"entry": e.name(), "codifferential": e.codifferential.to_string(), "table_row": e.expected_row}))
        .collect();
    Report::new("catalog list", json!(rows), |v| {
        let rows: Vec<Vec<String>> = v
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| vec![scalar_text(&r["entry"]), scalar_text(&r["table_row"]), scalar_text(&r["codifferential"])])
            .collect();
        table(&["entry", "h0..h4", "codifferential"], &rows)
    })
}

fn entry_json(e: &CatalogEntry) -> Value {
    let m = &e.metadata;
    json!({
        "entry": e.name(),
        "codifferential": e.codifferential.to_string(),
        "file": crate::format::to_json(&e.codifferential),
        "table_row": e.expected_row,
        "stated_splits": e.splits.iter().map(|s| format!("h{} = {}|{}", s.degree, s.even, s.odd)).collect::<Vec<_>>(),
        "stated": {
            "unital": m.unital,
            "commutative": m.commutative,
            "nilpotent": m.nilpotent,
            "center": m.center,
            "opposite": m.opposite.map(|k| format!("d{}", k)),
            "parameters": m.parameters,
            "jumps": m.jumps.as_ref().map(|j| j.iter().map(|k| format!("d{}", k)).collect::<Vec<_>>()),
        },
    })
}

pub fn catalog_show(k: usize) -> Result<Report, CommandError> {
    let e = catalog::get(k)?;
    Ok(Report::new("catalog show", entry_json(&e), |v| {
        let mut v = v.clone();
        v.as_object_mut().expect("object").remove("file");
        render_plain(&v)
    }))
}

/// Writes `dK.json` for every entry into `dir`.
pub fn catalog_export(dir: &std::path::Path) -> Result<Report, CommandError> {
    std::fs::create_dir_all(dir).map_err(|e| CommandError::Usage(format!("{}: {}", dir.display(), e)))?;
    let mut written = Vec::new();
    for e in catalog::all() {
        let path = dir.join(format!("{}.json", e.name()));
        std::fs::write(&path, crate::format::emit(&e.codifferential))
            .map_err(|err| CommandError::Usage(format!("{}: {}", path.display(), err)))?;
        written.push(path.display().to_string());
    }
    Ok(Report::new("catalog export", json!({"written": written}), render_plain))
}

pub fn cohomology(k: usize, max_degree: usize) -> Result<Report, CommandError> {
    let e = catalog::get(k)?;
    let dims = cohomology_dims(&e.codifferential, max_degree)?;
    let mut disc = Vec::new();
    let rows: Vec<Value> = dims
        .iter()
        .enumerate()
        .map(|(n, &(a, b))| {
            let stated = e.expected_row.get(n).copied();
            if let Some(s) = stated {
                if s != a + b {
                    disc.push(Discrepancy::new(format!("table1/d{}/h{}", k, n), s, a + b));
                }
            }
            for sp in e.splits.iter().filter(|sp| sp.degree == n) {
                if (sp.even, sp.odd) != (a, b) {
                    disc.push(Discrepancy::new(format!("splits/d{}/h{}", k, n), dims_text((sp.even, sp.odd)), dims_text((a, b))));
                }
            }
            json!({"degree": n, "even": a, "odd": b, "total": a + b, "stated_total": stated})
        })
        .collect();
    let body = json!({"entry": e.name(), "degrees": rows});
    Ok(Report::new("cohomology", body, |v| {
        let rows: Vec<Vec<String>> = v["degrees"]
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| {
                let stated = if r["stated_total"].is_null() { "-".into() } else { scalar_text(&r["stated_total"]) };
                vec![format!("h{}", r["degree"]), format!("{}|{}", r["even"], r["odd"]), scalar_text(&r["total"]), stated]
            })
            .collect();
        format!("{}\n{}", scalar_text(&v["entry"]), table(&["degree", "even|odd", "total", "table"], &rows))
    })
    .with_discrepancies(disc))
}

pub fn analyze(ctx: &Context, k: usize) -> Result<Report, CommandError> {
    let e = catalog::get(k)?;
    let d = &e.codifferential;
    let m = to_multiplication(d);
    let center = m.center();
    let partner = ctx.index().identify(&opposite(d))?;
    let fp = ctx.index().fingerprint(k).expect("indexed");
    let mut disc = Vec::new();
    let computed = [("unital", m.unit().is_some()), ("commutative", m.is_graded_commutative()), ("nilpotent", m.is_nilpotent())];
    for ((name, c), stated) in computed.iter().zip([e.metadata.unital, e.metadata.commutative, e.metadata.nilpotent]) {
        if let Some(s) = stated {
            if s != *c {
                disc.push(Discrepancy::new(format!("metadata/d{}/{}", k, name), s, c));
            }
        }
    }
    if let Some(p) = e.metadata.opposite {
        if partner != Some(p) {
            disc.push(Discrepancy::new(format!("metadata/d{}/opposite", k), format!("d{}", p), format!("{:?}", partner)));
        }
    }
    let body = json!({
        "entry": e.name(),
        "unital": m.unit().is_some(),
        "unit": m.unit().map(|u| u.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "graded_commutative": m.is_graded_commutative(),
        "ungraded_commutative": m.is_commutative_ungraded(),
        "nilpotent": m.is_nilpotent(),
        "center": dims_text(center.dims()),
        "center_basis": center.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "opposite": partner.map(|p| if p == 0 { "0".to_string() } else { format!("d{}", p) }),
        "fingerprint": fingerprint_json(fp),
    });
    Ok(Report::new("analyze", body, render_plain).with_discrepancies(disc))
}

pub fn fingerprint_file(ctx: &Context, path: &std::path::Path) -> Result<Report, CommandError> {
    let d = crate::format::read_file(path)?;
    let fp = fingerprint(&d)?;
    let k = ctx.index().identify(&d)?;
    let body = json!({
        "codifferential": d.to_string(),
        "fingerprint": fingerprint_json(&fp),
        "catalog": k.map(|k| if k == 0 { "0".to_string() } else { format!("d{}", k) }),
    });
    Ok(Report::new("fingerprint", body, render_plain))
}

pub fn extensions_enumerate(ctx: &Context, case: Case) -> Result<Report, CommandError> {
    let idx = ctx.index();
    let mut rows = Vec::new();
    for (stage, c) in case.enumerate()? {
        let found = idx.identify_with_witness(&c.codifferential, codiff_core::equivalence::DEFAULT_BUDGET)?;
        rows.push(json!({
            "stage": format!("{:?}", stage).to_lowercase(),
            "lambda": c.lambda.to_string(),
            "psi": c.psi.to_string(),
            "tau": c.tau.to_string(),
            "codifferential": c.codifferential.to_string(),
            "catalog": found.as_ref().map(|f| if f.0 == 0 { "0".to_string() } else { format!("d{}", f.0) }),
            "witness": found.as_ref().and_then(|f| f.1.as_ref()).map(matrix_json),
        }));
    }
    Ok(Report::new("extensions enumerate", json!({"case": case.name(), "classes": rows}), |v| {
        let rows: Vec<Vec<String>> = v["classes"]
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| {
                let w = if r["witness"].is_null() { "none".into() } else { scalar_text(&r["witness"]) };
                vec![scalar_text(&r["stage"]), scalar_text(&r["catalog"]), scalar_text(&r["codifferential"]), w]
            })
            .collect();
        format!("case {}\n{}", scalar_text(&v["case"]), table(&["stage", "catalog", "codifferential", "witness"], &rows))
    }))
}

pub fn extensions_stable(r: usize, s: usize, n: usize) -> Result<Report, CommandError> {
    let StableCount { m, n, classes, max_nonzero_pairs } = codiff_core::extensions::stable_count(r, s, n)?;
    Ok(Report::new(
        "extensions stable",
        json!({"m": dims_text(m), "n": n, "classes": classes, "max_nonzero_pairs": max_nonzero_pairs}),
        render_plain,
    ))
}

pub fn deform(k: usize, order: usize) -> Result<Report, CommandError> {
    let d = catalog::codifferential(k)?;
    let family = DeformationFamily::infinitesimal_universal(&d)?.extend_order(order.max(1))?;
    let body = json!({
        "entry": format!("d{}", k),
        "parameters": family.parameter_count(),
        "order": family.order(),
        "closed": family.is_closed(),
        "directions": family.directions().iter().enumerate().map(|(i, x)| format!("t{}: {}", i + 1, x)).collect::<Vec<_>>(),
        "higher_order_terms": family.higher_order_terms().map(|(m, c)| format!("{}: {}", monomial_text(m), c)).collect::<Vec<_>>(),
        "obstruction_classes": family.obstruction_classes().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "relations": family.relations().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    Ok(Report::new("deform", body, render_plain))
}

fn outcome_text(o: &BranchOutcome) -> String {
    match o {
        BranchOutcome::Jump(k) => format!("jump to d{}", k),
        BranchOutcome::NoJump => "no jump".into(),
        BranchOutcome::Unidentified => "unidentified".into(),
        BranchOutcome::Unstable => "unstable".into(),
    }
}

pub fn jumps(ctx: &Context, k: usize) -> Result<Report, CommandError> {
    let rep = catalog_jumps(k, &ctx.plan, ctx.index(), checks::MAX_ORDER)?;
    let mut disc = Vec::new();
    let edges = rep.out_edges();
    if let Some(stated) = &catalog::get(k)?.metadata.jumps {
        let stated: BTreeSet<usize> = stated.iter().copied().collect();
        if stated != edges {
            disc.push(Discrepancy::new(format!("jumps/d{}", k), checks::set_text(&stated), checks::set_text(&edges)));
        }
    }
    let branches: Vec<Value> = rep
        .branches
        .iter()
        .map(|b| {
            json!({
                "branch": b.name,
                "stated": b.stated_target.map(|t| format!("d{}", t)),
                "outcome": outcome_text(&b.outcome),
                "samples": b.samples.iter().map(|s| json!({
                    "point": s.frame_values.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "identified": s.identified.map(|i| format!("d{}", i)),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let body = json!({
        "entry": format!("d{}", k),
        "parameters": rep.parameters,
        "order": rep.order,
        "closed": rep.closed,
        "out_edges": edges.iter().map(|t| format!("d{}", t)).collect::<Vec<_>>(),
        "branches": branches,
    });
    Ok(Report::new("jumps", body, |v| {
        let rows: Vec<Vec<String>> = v["branches"]
            .as_array()
            .expect("rows")
            .iter()
            .map(|b| {
                let stated = if b["stated"].is_null() { "-".into() } else { scalar_text(&b["stated"]) };
                vec![scalar_text(&b["branch"]), stated, scalar_text(&b["outcome"])]
            })
            .collect();
        format!(
            "{}: {} parameters, order {}, out-edges {}\n{}",
            scalar_text(&v["entry"]),
            v["parameters"],
            v["order"],
            scalar_text(&v["out_edges"]),
            table(&["branch", "stated", "outcome"], &rows)
        )
    })
    .with_discrepancies(disc))
}

pub fn jump_graph(ctx: &Context, dot: Option<&std::path::Path>) -> Result<Report, CommandError> {
    let graph = checks::jump_graph(ctx)?;
    if let Some(path) = dot {
        std::fs::write(path, graph.to_dot()).map_err(|e| CommandError::Usage(format!("{}: {}", path.display(), e)))?;
    }
    let outcome = checks::jumps(ctx);
    Ok(Report::new("jump-graph", json!({"edges": outcome.body, "self_loops": graph.self_loops(), "transitivity_violations": graph.transitivity_violations()}), render_plain)
        .with_discrepancies(outcome.discrepancies))
}

pub fn iso(a: &Coderivation, b: &Coderivation, budget: usize) -> Result<Report, CommandError> {
    let out = find_isomorphism(a, b, budget)?;
    let body = json!({
        "witness": out.witness.as_ref().map(matrix_json),
        "fingerprint_differences": out.fingerprint_differences,
        "attempts": out.attempts,
        "budget_exhausted": out.budget_exhausted,
    });
    Ok(Report::new("iso", body, |v| {
        if v["witness"].is_null() {
            let why = v["fingerprint_differences"].as_array().filter(|a| !a.is_empty()).map(|_| {
                format!(" (fingerprints differ: {})", scalar_text(&v["fingerprint_differences"]))
            });
            format!("none found{}\n", why.unwrap_or_default())
        } else {
            let rows: Vec<Vec<String>> = v["witness"]
                .as_array()
                .expect("rows")
                .iter()
                .map(|r| r.as_array().expect("row").iter().map(scalar_text).collect())
                .collect();
            let mut s = String::from("witness (column j is the image of v_j):\n");
            for r in rows {
                s.push_str(&format!("  [{}]\n", r.join(", ")));
            }
            s
        }
    }))
}

pub fn table1(ctx: &Context) -> Report {
    let o = ctx.run(Section::Table1);
    Report::new("table1", o.body, |v| {
        let rows: Vec<Vec<String>> = v
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| {
                let mut row = vec![scalar_text(&r["entry"])];
                for c in r["cells"].as_array().expect("cells") {
                    let mark = if c["match"] == true { "" } else { "*" };
                    row.push(format!("{}{}", c["computed"], mark));
                }
                row.push(scalar_text(&r["splits"]));
                row
            })
            .collect();
        format!(
            "{}(* computed value differs from the table)\n",
            table(&["entry", "h0", "h1", "h2", "h3", "h4", "even|odd by degree"], &rows)
        )
    })
    .with_discrepancies(o.discrepancies)
}

pub fn reproduce_all(ctx: &Context, only: &[Section]) -> (Report, Vec<checks::Outcome>) {
    let sections: Vec<Section> = if only.is_empty() { Section::ALL.to_vec() } else { only.to_vec() };
    let outcomes: Vec<checks::Outcome> = sections.iter().map(|&s| ctx.run(s)).collect();
    let body: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "criterion": o.section.id(),
                "section": o.section.name(),
                "title": o.section.title(),
                "passed": o.passed,
                "summary": o.summary,
                "details": o.body,
            })
        })
        .collect();
    let disc = outcomes.iter().flat_map(|o| o.discrepancies.clone()).collect();
    let report = Report::new("reproduce-all", json!(body), |v| {
        let rows: Vec<Vec<String>> = v
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| {
                vec![
                    scalar_text(&r["criterion"]),
                    scalar_text(&r["section"]),
                    if r["passed"] == true { "PASS".into() } else { "FAIL".into() },
                    scalar_text(&r["summary"]),
                ]
            })
            .collect();
        table(&["#", "section", "verdict", "summary"], &rows)
    })
    .with_discrepancies(disc);
    (report, outcomes)
}
