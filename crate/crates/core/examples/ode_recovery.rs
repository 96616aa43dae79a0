//! With γ = 0 and constant data the equation reduces to u' = u^q; the
//! windowed Picard solver reproduces (c^{1-q} + (1-q)t)^{1/(1-q)}.

use singular_heat::fields::{make_grid, GridFunction, Params};
use singular_heat::scheme::{Nonlinearity, SolveConfig, Solver};

fn main() -> singular_heat::Result<()> {
    let q = 0.5;
    let grid = make_grid(1, 12.0, 256)?;
    let params = Params::new(1, q, 0.0)?;
    let config = SolveConfig {
        output_times: vec![0.25, 0.5, 1.0],
        ..SolveConfig::default()
    };
    let u0 = GridFunction::constant(grid, 1.0);
    let solver = Solver::new(&grid, &params, &config)?;
    let mesh = solver.mesh_for(Nonlinearity::Power, &u0)?;
    let traj = solver.solve(&u0, Nonlinearity::Power, &mesh)?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let exact = (1.0 + (1.0 - q) * t).powf(1.0 / (1.0 - q));
        println!(
            "t={t:<5} u(0) = {:.8}  exact {exact:.8}",
            snap.values()[grid.nearest_origin()]
        );
    }
    println!(
        "windows {}  max residual {:.2e}",
        traj.metadata.windows,
        traj.max_residual()
    );
    Ok(())
}
