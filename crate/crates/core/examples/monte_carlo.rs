//! Monte Carlo estimates of product moments with each field sampler, next to the exact value.
//!
//! cargo run --release --example monte_carlo

use edm::kernel::{isserlis_product_moment, GaussianKernel};
use edm::lattice::Region;
use edm::sampling::{mc_product_moment, FieldModel, SamplerSpec};

fn main() -> edm::Result<()> {
    let n = 200_000;
    let seed = 2024;

    let square = Region::rectangle(2, 2)?;
    let rigid = SamplerSpec::new(FieldModel::MovingAverage { rho: vec![1.0, 1.0] }, 0.0);
    let est = mc_product_moment(&rigid, &square, n, seed)?;
    println!("2x2 rigid, moving average: {:.4} +- {:.4} (exact 2)", est.mean, est.std_error);

    let rect = Region::rectangle(3, 2)?;
    let exact = isserlis_product_moment(&GaussianKernel::manhattan(vec![0.4, 0.7], 1.0), &rect)?;
    let pickard = SamplerSpec::new(FieldModel::Pickard { rho1: 0.4, rho2: 0.7 }, 1.0);
    let est = mc_product_moment(&pickard, &rect, n, seed)?;
    println!("3x2 Manhattan, Pickard: {:.4} +- {:.4} (exact {exact:.4})", est.mean, est.std_error);

    let chain = Region::interval(5)?;
    let aar = SamplerSpec::new(FieldModel::AlternatingAr { rho1: 0.3, rho2: 0.6 }, 1.0);
    let est = mc_product_moment(&aar, &chain, n, seed)?;
    println!("5-site zigzag chain, alternating AR: {:.4} +- {:.4}", est.mean, est.std_error);
    println!("{}", est.to_json(seed));
    Ok(())
}
