//! Two discretizations of the monotone scheme coalesce below Λ³ times the
//! a-priori envelope when Λ(γ) < 1.

use singular_heat::constants::{gamma_star, lambda_gamma};
use singular_heat::verify::check_uniqueness_contraction;

fn main() -> singular_heat::Result<()> {
    let q = 0.5;
    let gs = gamma_star(q, 1)?;
    for gamma in [0.0, 0.25 * gs.gamma_star, 0.5 * gs.gamma_star] {
        let report = check_uniqueness_contraction(q, gamma, 1, 1.0, 1e-6)?;
        println!(
            "gamma={gamma:.4} Lambda={:.4}  {}",
            lambda_gamma(q, gamma, 1)?,
            report.summary_line()
        );
    }
    Ok(())
}
