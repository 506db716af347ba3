//! One PASS/FAIL line per reproduction criterion. All comparisons are exact
//! (integer dimensions, exact rational coefficients, set equality), so no
//! numeric tolerance applies.

use std::process::ExitCode;
use std::time::Instant;

use codiff::checks::{Context, Section};

fn main() -> ExitCode {
    let ctx = Context::new(codiff::default_plan());
    let start = Instant::now();
    let mut passed = 0;
    for section in Section::ALL {
        let t = Instant::now();
        let o = ctx.run(section);
        println!("{}  [tolerance: exact, {:.1}s]", o.line(), t.elapsed().as_secs_f64());
        for d in &o.discrepancies {
            let tag = if d.informational { "note" } else { "mismatch" };
            println!("      {} {}: stated {}, computed {}", tag, d.key, d.stated, d.computed);
        }
        passed += o.passed as usize;
    }
    println!("acceptance: {}/{} criteria PASS in {:.1}s", passed, Section::ALL.len(), start.elapsed().as_secs_f64());
    if passed == Section::ALL.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
