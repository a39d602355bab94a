//! Generating polynomials T_N and their consistency with the Hermite recursion.
//!
//! cargo run --example pantograph_check

use edm::pantograph::{default_sample_points, hermite_to_generating, pantograph_residual, t_sequence};
use edm::spectral1d::{leading_eigenvalue, q_sequence, HermiteVector, SolverParams};

fn main() -> edm::Result<()> {
    let (mu, rho) = (1.0, 0.5);
    let ts = t_sequence(mu, rho, 12);
    let qs = q_sequence(mu, rho, 12)?;
    for (n, (t, q)) in ts.iter().zip(&qs).enumerate().take(4) {
        println!("T_{n}: {:?}  (from Hermite: {:?})", t.coeffs, hermite_to_generating(q).coeffs);
    }
    println!("T_12(0) = M_12 = {:.12}", ts[12].eval(0.0));

    let eig = leading_eigenvalue(mu, rho, SolverParams::fixed(64))?;
    let t = hermite_to_generating(&HermiteVector { coeffs: eig.eigvec.clone(), truncation: eig.truncation });
    let residual = pantograph_residual(&t, eig.lambda, mu, rho, &default_sample_points());
    println!("pantograph residual of the eigenvector on [-2,2]: {residual:.2e}");
    Ok(())
}
