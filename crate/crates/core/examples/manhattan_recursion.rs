//! Staircase regions of the 2D Manhattan model: the polynomial recursion against enumeration.
//!
//! cargo run --release --example manhattan_recursion

use edm::manhattan2d::{delta_region, expected_r, r_polynomial};
use edm::partition::exact_partition_function;
use edm::potential::Potential;

fn main() -> edm::Result<()> {
    let (rho1, rho2, mu) = (0.3, 0.6, 1.0);
    let potential = Potential::manhattan_from_weights(&[rho1, rho2], mu)?;
    for n in 0..=4 {
        let r = r_polynomial(n, rho1, rho2, mu)?;
        let moment = expected_r(&r, n, rho1, rho2)?;
        let region = delta_region(n);
        let exact = if region.len() <= 14 { format!("{:.12}", exact_partition_function(&region, &potential)?) } else { "-".into() };
        println!("N={n}: {} sites, {} terms, E R_N = {moment:.12}, enumeration {exact}", region.len(), r.len());
    }
    println!("R_1 = {}", r_polynomial(1, rho1, rho2, mu)?);
    Ok(())
}
