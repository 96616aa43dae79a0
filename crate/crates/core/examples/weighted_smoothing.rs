//! S_γ(t)1 near the origin scales like η₁ t^{-γ/2}.

use singular_heat::constants::eta1;
use singular_heat::fields::{make_grid, GridFunction};
use singular_heat::semigroup::apply_weighted_heat;
use singular_heat::verify::check_smoothing_exponent;

fn main() -> singular_heat::Result<()> {
    let gamma = 0.5;
    let grid = make_grid(1, 24.0, 8192)?;
    let one = GridFunction::constant(grid, 1.0);
    let e1 = eta1(gamma, 1)?;
    for t in [0.25, 1.0, 4.0] {
        let v = apply_weighted_heat(&one, t, gamma)?.values()[grid.nearest_origin()];
        println!(
            "t={t:<5} S_γ(t)1 = {v:.6}   η₁ t^(-γ/2) = {:.6}",
            e1 * t.powf(-gamma / 2.0)
        );
    }
    let report = check_smoothing_exponent(gamma, 1, &[0.25, 0.5, 1.0, 2.0, 4.0])?;
    println!("{}", report.summary_line());
    Ok(())
}
