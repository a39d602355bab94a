//! Exact partition function of a short 1D chain by listing every monomer-dimer configuration.
//!
//! cargo run --example exact_enumeration

use edm::lattice::Region;
use edm::partition::{configuration_count, enumerate_configurations, exact_partition_function, free_energy};
use edm::potential::Potential;

fn main() -> edm::Result<()> {
    let region = Region::interval(6)?;
    let potential = Potential::manhattan_from_weights(&[0.5], 1.0)?;

    let listed = enumerate_configurations(&region)?.count();
    println!("configurations on {} sites: {listed} (count formula: {})", region.len(), configuration_count(region.len()));

    let z = exact_partition_function(&region, &potential)?;
    println!("Z = {z:.12}");
    println!("F = {:.12}", free_energy(&region, &potential)?);
    Ok(())
}
