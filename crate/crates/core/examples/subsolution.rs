//! The explicit sub-solution w against its own Duhamel integral and
//! against a computed solution.

use singular_heat::fields::{make_grid, Params};
use singular_heat::scheme::{monotone_solve, SolveConfig};
use singular_heat::verify::{check_lower_bound, check_subsolution};
use singular_heat::InitialData;

fn main() -> singular_heat::Result<()> {
    let params = Params::new(1, 0.5, 0.3)?;
    let fine = make_grid(1, 12.0, 512)?;
    println!(
        "{}",
        check_subsolution(&params, &fine, &[0.25, 1.0], 1e-3)?.summary_line()
    );

    let grid = make_grid(1, 12.0, 256)?;
    let config = SolveConfig {
        output_times: vec![0.5, 1.0, 2.0],
        ..SolveConfig::default()
    };
    let traj = monotone_solve(&InitialData::Bump.sample(&grid)?, &params, &config)?;
    let report = check_lower_bound(&traj, &params, 5e-3)?;
    println!("{}", report.summary_line());
    for w in &report.witnesses {
        println!("  {} {:?}", w.location, w.values);
    }
    Ok(())
}
