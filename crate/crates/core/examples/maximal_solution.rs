//! The monotone scheme from zero data: u_n decreases in n toward the
//! maximal solution, which for γ = 0 is ((1-q)t)^{1/(1-q)}.

use singular_heat::fields::{make_grid, GridFunction, Params};
use singular_heat::scheme::{monotone_solve, SolveConfig};

fn main() -> singular_heat::Result<()> {
    let grid = make_grid(1, 12.0, 256)?;
    let params = Params::new(1, 0.5, 0.0)?;
    let config = SolveConfig {
        n_schedule: SolveConfig::doubling_schedule(12),
        early_stop: false,
        ..SolveConfig::default()
    };
    let traj = monotone_solve(&GridFunction::zeros(grid), &params, &config)?;
    for (n, gap) in traj.metadata.n_schedule_used.iter().skip(1).zip(&traj.metadata.n_gaps) {
        println!("n={n:<6} gap to previous {gap:.3e}");
    }
    let u = traj.final_snapshot().values()[grid.nearest_origin()];
    println!("u(0,1) = {u:.6}   maximal solution 0.25");
    Ok(())
}
