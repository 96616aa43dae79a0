//! The discrete heat semigroup against the exact flow of a Gaussian.

use singular_heat::fields::{make_grid, sample};
use singular_heat::semigroup::{apply_heat, gaussian_exact, HeatOperator, DEFAULT_TAIL_TOLERANCE};

fn main() -> singular_heat::Result<()> {
    let grid = make_grid(1, 12.0, 1024)?;
    let a = 0.25;
    let u0 = sample(|x| gaussian_exact(a, 0.0, x), &grid)?;
    for t in [0.5, 1.0, 2.0] {
        let u = apply_heat(&u0, t)?;
        let err = (0..grid.len())
            .map(|i| (u.values()[i] - gaussian_exact(a, t, &grid.node(i)[..1])).abs())
            .fold(0.0, f64::max);
        let op = HeatOperator::new(&grid, t, DEFAULT_TAIL_TOLERANCE)?;
        println!("t={t:<4} sup error {err:.3e}  kernel mass {:.15}", op.mass());
    }
    Ok(())
}
