//! Growth rate of 1D Manhattan product moments: leading eigenvalue, moment ratios and the upper bound.
//!
//! cargo run --example spectral_mle

use edm::spectral1d::{leading_eigenvalue, mle_upper_bound, moment_ratio, log_product_moment_1d, SolverParams};

fn main() -> edm::Result<()> {
    let (mu, rho) = (1.0, 0.5);
    let eig = leading_eigenvalue(mu, rho, SolverParams::default())?;
    println!("lambda = {:.15} after {} iterations (K = {})", eig.lambda, eig.iters, eig.truncation);
    for n in [10, 50, 200] {
        println!("q_(N+1,0)/q_(N,0) at N={n}: {:.15}", moment_ratio(mu, rho, n)?);
    }
    println!("ln M_200 / 200 = {:.12}", log_product_moment_1d(mu, rho, 200)? / 200.0);
    let bound = mle_upper_bound(mu, rho)?;
    println!("mle = {:.12}, upper bound = {:.12}", eig.lambda.ln(), bound.bound);
    Ok(())
}
