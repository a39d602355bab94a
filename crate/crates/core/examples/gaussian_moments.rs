//! Partition functions as Gaussian product moments. With a monomer-free rigid kernel
//! the product moment counts domino tilings.
//!
//! cargo run --example gaussian_moments

use edm::kernel::{isserlis_product_moment, kernel_from_potential, moment_residual, GaussianKernel};
use edm::lattice::Region;
use edm::partition::exact_partition_function;
use edm::potential::Potential;

fn main() -> edm::Result<()> {
    let dominoes = GaussianKernel::rigid(vec![1.0, 1.0], 0.0);
    for (w, h) in [(2, 2), (2, 3), (2, 4), (4, 4)] {
        let tilings = isserlis_product_moment(&dominoes, &Region::rectangle(w, h)?)?;
        println!("{w}x{h} domino tilings: {tilings:.0}");
    }

    let region = Region::rectangle(3, 2)?;
    let potential = Potential::manhattan_from_weights(&[0.3, 0.6], 1.5)?;
    let z = exact_partition_function(&region, &potential)?;
    let m = isserlis_product_moment(&kernel_from_potential(&potential)?, &region)?;
    println!("3x2 Manhattan: Z = {z:.12}, M = {m:.12}, relative residual {:.1e}", moment_residual(&region, &potential)?);
    Ok(())
}
