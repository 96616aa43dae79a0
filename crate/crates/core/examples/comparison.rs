//! Ordered data give ordered solutions.

use singular_heat::fields::{make_grid, Params};
use singular_heat::scheme::SolveConfig;
use singular_heat::verify::check_comparison;
use singular_heat::InitialData;

fn main() -> singular_heat::Result<()> {
    let grid = make_grid(1, 12.0, 256)?;
    let params = Params::new(1, 0.5, 0.2)?;
    let v0 = InitialData::Gauss { a: 1.0 }.sample(&grid)?;
    let u0 = v0.scale(2.0);
    let report = check_comparison(&u0, &v0, &params, &SolveConfig::default(), 1e-6)?;
    println!("{}", report.summary_line());
    Ok(())
}
