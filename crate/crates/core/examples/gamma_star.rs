//! Uniqueness threshold γ* for several q and dimensions.

use singular_heat::constants::{gamma_star, lambda_gamma};

fn main() -> singular_heat::Result<()> {
    println!(
        "{:>4} {:>3} {:>12} {:>14} {:>12}",
        "q", "N", "gamma*", "Lambda(g*)", "Lambda(g*/2)"
    );
    for n_dim in 1..=3 {
        for q in [0.2, 0.5, 0.8] {
            let gs = gamma_star(q, n_dim)?;
            let half = lambda_gamma(q, gs.gamma_star / 2.0, n_dim)?;
            let mark = if gs.crossed { "" } else { "  (no crossing)" };
            println!(
                "{q:>4} {n_dim:>3} {:>12.8} {:>14.10} {half:>12.6}{mark}",
                gs.gamma_star, gs.lambda_at_gamma_star
            );
        }
    }
    Ok(())
}
