//! Moment Lyapunov exponent over a (mu, rho) grid, written as CSV to stdout.
//!
//! cargo run --release --example mle_surface > surface.csv

use edm::spectral1d::{mle_1d, mle_upper_bound, SolverParams};

fn main() -> edm::Result<()> {
    println!("mu,rho,mle,upper_bound");
    for i in 0..=8 {
        let mu = 0.25 * 2f64.powf(i as f64 / 2.0);
        for j in 1..=9 {
            let rho = j as f64 / 10.0;
            let mle = mle_1d(mu, rho, SolverParams::default())?;
            println!("{mu},{rho},{mle},{}", mle_upper_bound(mu, rho)?.bound);
        }
    }
    Ok(())
}
