//! Heat flow of radial non-increasing data peaks next to the origin; the
//! step datum keeps a sup gap of 1/2.

use singular_heat::fields::make_grid;
use singular_heat::verify::{check_heaviside_gap, check_max_at_origin, RadialProfile};

fn main() -> singular_heat::Result<()> {
    let grid = make_grid(2, 8.0, 64)?;
    for profile in RadialProfile::random_family(5, 3) {
        let r = check_max_at_origin(&profile, 1.0, &grid)?;
        println!("{}  {}", r.summary_line(), serde_json::to_string(&profile)?);
    }
    let line = make_grid(1, 20.0, 131_072)?;
    println!("{}", check_heaviside_gap(&[0.01, 1.0], &line)?.summary_line());
    Ok(())
}
