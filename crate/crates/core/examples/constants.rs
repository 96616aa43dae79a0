//! Scalar constants for one parameter set, with the closed forms they are
//! checked against.
//!
//! cargo run --example constants -- 0.5 0.3 1

use singular_heat::constants::{beta_gamma_closed_form, eta1_quadrature, ConstantsReport};
use singular_heat::Params;

fn main() -> singular_heat::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let q = args.first().copied().unwrap_or(0.5);
    let gamma = args.get(1).copied().unwrap_or(0.3);
    let n_dim = args.get(2).map_or(1, |&n| n as usize);
    let params = Params::new(n_dim, q, gamma)?;

    let report = ConstantsReport::compute(&params)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("eta1 by quadrature   {:.12}", eta1_quadrature(gamma, n_dim)?);
    println!("beta closed form     {:.12}", beta_gamma_closed_form(q, gamma)?);
    Ok(())
}
