use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use codiff::checks::{Context, Section};
use codiff::commands::{self, parse_entry, CommandError};
use codiff::errata::Errata;
use codiff::report::Report;
use codiff_core::equivalence::DEFAULT_BUDGET;
use codiff_core::extensions::Case;

/// Exact classification tools for codifferentials on the 1|2 space.
#[derive(Parser)]
#[command(name = "codiff", version)]
struct Cli {
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Deformation sample points, as {"seeds": [...], "samples_per_branch": n}.
    #[arg(long, global = true, value_name = "FILE")]
    seed_list: Option<PathBuf>,
    /// Errata whitelist replacing the built-in one.
    #[arg(long, global = true, value_name = "FILE")]
    errata: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog entries d1..d28.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Hochschild cohomology dimensions by degree and parity.
    Cohomology {
        #[arg(long)]
        alg: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Unit, commutativity, nilpotency, center and opposite partner.
    Analyze {
        #[arg(long)]
        alg: String,
    },
    /// Fingerprint of a codifferential file and its catalog match.
    Fingerprint {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Extension classes of small algebras.
    Extensions {
        #[command(subcommand)]
        cmd: ExtensionsCmd,
    },
    /// Versal deformation: directions, higher-order terms, relations.
    Deform {
        #[arg(long)]
        alg: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Jump deformations of one entry, branch by branch.
    Jumps {
        #[arg(long)]
        alg: String,
    },
    /// Jump graph of the whole catalog.
    JumpGraph {
        /// Write the graph in DOT format.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Search for an even automorphism carrying one codifferential to another.
    Iso {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Cohomology totals of all entries against the printed table.
    Table1,
    /// Every reproduction check, with one verdict per criterion.
    ReproduceAll {
        /// Comma-separated sections (names or criterion numbers).
        #[arg(long, value_delimiter = ',', value_parser = parse_section)]
        only: Vec<Section>,
        /// Directory of dK.json files used by the validity check.
        #[arg(long, value_name = "DIR")]
        data: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { entry: String },
    /// Write every entry as dK.json into a directory.
    Export { dir: PathBuf },
}

#[derive(Subcommand)]
enum ExtensionsCmd {
    /// Extension classes of one of the concrete setups.
    Enumerate {
        #[arg(long, value_parser = parse_case)]
        case: Case,
    },
    /// Class count for C^n extended by the zero algebra on an r|s space.
    Stable {
        #[arg(long)]
        even: usize,
        #[arg(long)]
        odd: usize,
        #[arg(long)]
        n: usize,
    },
}

fn parse_case(s: &str) -> Result<Case, String> {
    Case::parse(s).ok_or_else(|| format!("expected one of {}", Case::ALL.map(|c| c.name()).join(", ")))
}

fn parse_section(s: &str) -> Result<Section, String> {
    Section::parse(s).ok_or_else(|| format!("expected one of {} or 1..10", Section::ALL.map(|c| c.name()).join(", ")))
}

fn run(cli: &Cli, ctx: &Context) -> Result<Report, CommandError> {
    Ok(match &cli.cmd {
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => commands::catalog_list(),
            CatalogCmd::Show { entry } => commands::catalog_show(parse_entry(entry)?)?,
            CatalogCmd::Export { dir } => commands::catalog_export(dir)?,
        },
        Cmd::Cohomology { alg, max_degree } => commands::cohomology(parse_entry(alg)?, *max_degree)?,
        Cmd::Analyze { alg } => commands::analyze(ctx, parse_entry(alg)?)?,
        Cmd::Fingerprint { input } => commands::fingerprint_file(ctx, input)?,
        Cmd::Extensions { cmd } => match cmd {
            ExtensionsCmd::Enumerate { case } => commands::extensions_enumerate(ctx, *case)?,
            ExtensionsCmd::Stable { even, odd, n } => commands::extensions_stable(*even, *odd, *n)?,
        },
        Cmd::Deform { alg, order } => commands::deform(parse_entry(alg)?, *order)?,
        Cmd::Jumps { alg } => commands::jumps(ctx, parse_entry(alg)?)?,
        Cmd::JumpGraph { dot } => commands::jump_graph(ctx, dot.as_deref())?,
        Cmd::Iso { a, b, budget } => {
            let a = codiff::format::read_file(a)?;
            let b = codiff::format::read_file(b)?;
            commands::iso(&a, &b, *budget)?
        }
        Cmd::Table1 => commands::table1(ctx),
        Cmd::ReproduceAll { only, data } => {
            let (mut report, _) = commands::reproduce_all(ctx, only);
            if let Some(dir) = data {
                let entries = codiff::format::read_catalog_dir(dir)?;
                let validity = codiff::checks::validity(&entries);
                let rows = report.body.as_array_mut().expect("rows");
                for r in rows.iter_mut().filter(|r| r["section"] == "validity") {
                    r["passed"] = validity.passed.into();
                    r["summary"] = validity.summary.clone().into();
                    r["details"] = validity.body.clone();
                }
                report.discrepancies.retain(|d| !d.key.starts_with("validity/"));
                report.discrepancies.extend(validity.discrepancies);
            }
            report
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let errata = match &cli.errata {
        Some(p) => Errata::load(p),
        None => Ok(Errata::builtin()),
    };
    let plan = match &cli.seed_list {
        Some(p) => codiff::read_seed_list(p),
        None => Ok(codiff::default_plan()),
    };
    let (errata, plan) = match (errata, plan) {
        (Ok(e), Ok(p)) => (e, p),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let ctx = Context::new(plan);
    match run(&cli, &ctx) {
        Ok(mut report) => {
            report.apply_errata(&errata);
            if cli.json {
                print!("{}", report.to_json_string());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
