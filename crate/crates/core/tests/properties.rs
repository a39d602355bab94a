mod common;

use common::*;
use edm::kernel::{isserlis_product_moment, kernel_from_potential, GaussianKernel};
use edm::lattice::{Region, Site};
use edm::manhattan2d::{delta_region, r_polynomial, expected_r, SparsePolynomial};
use edm::pantograph::{hermite_to_generating, t_sequence};
use edm::partition::exact_partition_function;
use edm::potential::{Energy, Potential};
use edm::spectral1d::{advance_q_truncated, product_moment_1d, q_sequence, HermiteVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_moment_equals_partition_function(seed in any::<u64>(), dimension in 1usize..=3, n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = if dimension == 1 { n as i64 + 2 } else { 3 };
        let region = random_region(&mut rng, dimension, n, side);
        let potential = random_admissible_table(&mut rng, dimension, 1);
        let z = exact_partition_function(&region, &potential).unwrap();
        let m = isserlis_product_moment(&kernel_from_potential(&potential).unwrap(), &region).unwrap();
        let brute = brute_force_z(&region, &potential);
        prop_assert!(rel(z, brute) <= 1e-12, "{z} vs {brute}");
        prop_assert!(rel(z, m) <= 1e-9, "{z} vs {m}");
    }

    #[test]
    fn rigid_motions_preserve_partition_function(
        seed in any::<u64>(),
        n in 1usize..=7,
        shift in proptest::collection::vec(-5i64..5, 2),
        alpha in proptest::collection::vec(0.05f64..2.0, 2),
        v in -1.0f64..2.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = random_region(&mut rng, 2, n, 3);
        let pot = Potential::manhattan(alpha.clone(), Energy::Finite(v), 1.0).unwrap();
        let z = exact_partition_function(&region, &pot).unwrap();
        let moved = exact_partition_function(&region.translated(&Site(shift)).unwrap(), &pot).unwrap();
        let flipped = exact_partition_function(&region.negated().unwrap(), &pot).unwrap();
        let swapped_pot = Potential::manhattan(vec![alpha[1], alpha[0]], Energy::Finite(v), 1.0).unwrap();
        let swapped = exact_partition_function(&region.permuted(&[1, 0]).unwrap(), &swapped_pot).unwrap();
        prop_assert!(rel(z, moved) < 1e-13);
        prop_assert!(rel(z, flipped) < 1e-13);
        prop_assert!(rel(z, swapped) < 1e-13);
    }

    #[test]
    fn partition_function_grows_with_weights(seed in any::<u64>(), n in 1usize..=8, mu in 0.0f64..3.0, dmu in 0.0f64..1.0, rho in 0.01f64..0.95, drho in 0.0f64..0.04) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = random_region(&mut rng, 1, n, 12);
        let z = |m: f64, r: f64| exact_partition_function(&region, &Potential::manhattan_from_weights(&[r], m).unwrap()).unwrap();
        let base = z(mu, rho);
        prop_assert!(z(mu + dmu, rho) >= base * (1.0 - 1e-14));
        prop_assert!(z(mu, rho + drho) >= base * (1.0 - 1e-14));
    }

    #[test]
    fn rescaling_the_field_scales_the_moment(seed in any::<u64>(), n in 1usize..=8, factor in 0.2f64..3.0, mu in 0.0f64..2.0, rho in 0.05f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = random_region(&mut rng, 2, n, 3);
        let kernel = GaussianKernel::manhattan(vec![rho, 0.5 * rho], mu);
        let m = isserlis_product_moment(&kernel, &region).unwrap();
        let scaled = isserlis_product_moment(&kernel.rescaled(factor), &region).unwrap();
        let want = m * factor.powi(n as i32);
        prop_assert!((scaled - want).abs() <= 1e-12 * want.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn one_dimensional_routes_agree(mu in 0.0f64..4.0, rho in 0.01f64..0.99, n in 0usize..=9) {
        let q = product_moment_1d(mu, rho, n).unwrap();
        if n == 0 {
            prop_assert_eq!(q, 1.0);
        } else {
            let region = Region::interval(n).unwrap();
            let m = isserlis_product_moment(&GaussianKernel::manhattan(vec![rho], mu), &region).unwrap();
            let z = exact_partition_function(&region, &Potential::manhattan_from_weights(&[rho], mu).unwrap()).unwrap();
            prop_assert!((q - m).abs() <= 1e-9 * q.abs().max(1e-300));
            prop_assert!((q - z).abs() <= 1e-9 * q.abs().max(1e-300));
        }
    }

    #[test]
    fn nonnegative_coefficients_stay_nonnegative(mu in 1e-3f64..5.0, rho in 0.01f64..0.99, coeffs in proptest::collection::vec(0.0f64..10.0, 2..40)) {
        let q = HermiteVector { truncation: coeffs.len() - 1, coeffs };
        let next = advance_q_truncated(&q, mu, rho);
        prop_assert!(next.coeffs.iter().all(|&c| c >= 0.0));
        if q.coeffs.iter().any(|&c| c > 0.0) {
            prop_assert!(next.coeffs[0] > 0.0 || q.coeffs[0] == 0.0 && q.coeffs[1] == 0.0);
        }
    }

    #[test]
    fn generating_functions_match_hermite_coefficients(mu in 0.0f64..3.0, rho in 0.01f64..0.99) {
        let ts = t_sequence(mu, rho, 30);
        let qs = q_sequence(mu, rho, 30).unwrap();
        for (t, q) in ts.iter().zip(&qs) {
            let g = hermite_to_generating(q);
            let scale = t.coeffs.iter().fold(1e-300f64, |m, c| m.max(c.abs()));
            for k in 0..t.coeffs.len().max(g.coeffs.len()) {
                let a = t.coeffs.get(k).copied().unwrap_or(0.0);
                let b = g.coeffs.get(k).copied().unwrap_or(0.0);
                prop_assert!((a - b).abs() <= 1e-10 * scale);
            }
            prop_assert!((t.coeffs[0] - q.coeffs[0]).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn staircase_recursion_matches_enumeration(rho1 in 0.05f64..0.95, rho2 in 0.05f64..0.95, mu in 0.0f64..2.5) {
        let pot = Potential::manhattan_from_weights(&[rho1, rho2], mu).unwrap();
        for level in 1..=2 {
            let r = r_polynomial(level, rho1, rho2, mu).unwrap();
            let m = expected_r(&r, level, rho1, rho2).unwrap();
            let z = exact_partition_function(&delta_region(level), &pot).unwrap();
            prop_assert!((m - z).abs() <= 1e-10 * z.max(1e-300));
            let back: SparsePolynomial = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }
    }

    #[test]
    fn region_json_round_trips(seed in any::<u64>(), dimension in 1usize..=3, n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = random_region(&mut rng, dimension, n, 10);
        let back: Region = serde_json::from_str(&serde_json::to_string(&region).unwrap()).unwrap();
        prop_assert_eq!(back, region);
    }
}
