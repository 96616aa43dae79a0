//! The C_k recursion and its fixed point [(1-q)η₀]^{1/(1-q)}.

use singular_heat::constants::ck_sequence;

fn main() -> singular_heat::Result<()> {
    let seq = ck_sequence(0.5, 0.3, 1, 1.0, 200)?;
    for k in [1usize, 2, 5, 10, 50, 200] {
        println!(
            "C_{k:<4} {:.12}  lower bound {:.12}",
            seq.values[k - 1],
            seq.lower_bounds[k - 1]
        );
    }
    println!("fixed point {:.12}  residual {:.2e}", seq.fixed_point, seq.residual);
    Ok(())
}
