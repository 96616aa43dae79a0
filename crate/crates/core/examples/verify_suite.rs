//! Runs a check suite and prints the JSON report.
//!
//! cargo run --example verify_suite -- all

use singular_heat::verify::{run_suite, Suite};

fn main() -> singular_heat::Result<()> {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("quick").parse()?;
    let reports = run_suite(suite);
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(())
}
