//! The extremal solution of the singular Gronwall inequality against the
//! Mittag-Leffler envelope.

use singular_heat::verify::{check_gronwall, gronwall_extremal, GronwallInstance};

fn main() -> singular_heat::Result<()> {
    for alpha in [0.0, 0.25, 0.5] {
        let inst = GronwallInstance {
            a: 1.0,
            m: 1.0,
            alpha,
            t: 1.0,
        };
        let psi = gronwall_extremal(&inst, 4096)?;
        let (_, end) = psi[psi.len() - 1];
        println!(
            "alpha={alpha:<5} psi(1) = {end:.8}  envelope {:.8}  {}",
            inst.envelope(1.0)?,
            check_gronwall(&inst, 4096)?.summary_line()
        );
    }
    Ok(())
}
