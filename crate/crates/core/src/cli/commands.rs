use std::path::Path;

use rayon::prelude::*;
use serde::de::DeserializeOwned;

use super::output::{checks_json, Check, JsonObject};
use super::*;
use crate::kernel::{
    check_admissibility, isserlis_product_moment_with_cap, kernel_from_potential, product_moment_from_covariance,
    GaussianKernel,
};
use crate::lattice::Region;
use crate::manhattan2d::{delta_region, expected_r, r_polynomial};
use crate::numeric::{fmt17, rel_diff};
use crate::pantograph::{default_sample_points, hermite_to_generating, pantograph_residual, t_sequence};
use crate::partition::{
    configuration_count, enumerate_configurations_with_cap, exact_partition_function_with_cap, free_energy_from_z,
};
use crate::potential::Potential;
use crate::sampling::{mc_product_moment, FieldModel, SamplerSpec};
use crate::spectral1d::{
    leading_eigenvalue, mle_upper_bound, moment_ratio, operator_norm_bound, q_sequence, transfer_matrix,
    HermiteVector,
};

type CliResult<T> = std::result::Result<T, CliError>;

/// Largest region for which `mc` reports the exact moment alongside the estimate.
const MC_ORACLE_SITES: usize = 20;

pub(super) fn execute(command: &Command) -> CliResult<i32> {
    match command {
        Command::Exact(a) => exact(a),
        Command::Moment(a) => moment(a),
        Command::Mc(a) => mc(a),
        Command::Manhattan2d(a) => manhattan2d(a),
        Command::Spectral1d(a) => spectral1d(a),
        Command::Pantograph(a) => pantograph(a),
        Command::Surface(a) => surface(a),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn write_artifact(out: &OutputArgs, body: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Reports the checks, writes the artifact and picks the exit code.
fn finish(out: &OutputArgs, body: JsonObject, checks: &[Check], numeric_failure: bool) -> CliResult<i32> {
    for c in checks {
        eprintln!("{}", c.line());
    }
    write_artifact(out, &body.raw("checks", checks_json(checks)).pretty())?;
    let failed = checks.iter().any(|c| !c.passed);
    Ok(if failed || numeric_failure { 1 } else { 0 })
}

fn exact(a: &ExactArgs) -> CliResult<i32> {
    let region: Region = read_json(&a.region)?;
    let potential: Potential = read_json(&a.potential)?;
    let z = exact_partition_function_with_cap(&region, &potential, a.cap)?;
    let free_energy = free_energy_from_z(z, potential.temperature()).unwrap_or(f64::INFINITY);
    let count = configuration_count(region.len());
    let mut checks = Vec::new();
    if region.len() <= 10 {
        let listed = enumerate_configurations_with_cap(&region, a.cap)?.count();
        let residual = if count == listed.into() { 0.0 } else { 1.0 };
        checks.push(Check::at_most("configuration stream length", residual, 0.0));
    }
    let body = JsonObject::new()
        .text("command", "exact")
        .int("sites", region.len())
        .num("Z", z)
        .num("F", free_energy)
        .flag("feasible", z > 0.0)
        .int("configurations", count);
    finish(&a.out, body, &checks, false)
}

fn moment(a: &MomentArgs) -> CliResult<i32> {
    let region: Region = read_json(&a.region)?;
    let potential: Potential = read_json(&a.potential)?;
    let kernel = kernel_from_potential(&potential)?;
    let adm = check_admissibility(&potential, a.radius);
    let m = isserlis_product_moment_with_cap(&kernel, &region, a.cap)?;
    let z = exact_partition_function_with_cap(&region, &potential, a.cap)?;
    let residual = (z - m).abs() / z.max(f64::MIN_POSITIVE);
    let checks = [Check::at_most("gaussian moment equals partition function", residual, 1e-9)];
    let body = JsonObject::new()
        .text("command", "moment")
        .int("sites", region.len())
        .num("mu", kernel.mu)
        .num("M", m)
        .num("Z", z)
        .num("residual", residual)
        .flag("admissible", adm.ok)
        .num("admissibility_lhs", adm.lhs)
        .num("admissibility_rhs", adm.rhs)
        .num("admissibility_tail", adm.tail);
    finish(&a.out, body, &checks, false)
}

fn rho_pair(rho: &[f64]) -> CliResult<(f64, f64)> {
    match *rho {
        [r] => Ok((r, r)),
        [r1, r2] => Ok((r1, r2)),
        _ => Err(CliError::Usage(format!("expected one or two correlations, got {}", rho.len()))),
    }
}

/// Pairwise covariance of the simulated field over the region's sites.
fn field_covariance(field: &FieldModel, region: &Region) -> Vec<Vec<f64>> {
    let sites = region.sites();
    let n = sites.len();
    let mut cov = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            cov[i][j] = match field {
                FieldModel::MovingAverage { rho } => {
                    GaussianKernel::rigid(rho.clone(), 0.0).covariance(&sites[j].sub(&sites[i]))
                }
                FieldModel::Pickard { rho1, rho2 } => {
                    let d = sites[j].sub(&sites[i]);
                    let mut c = rho1.powi(d.0[0].unsigned_abs() as i32);
                    if d.dimension() > 1 {
                        c *= rho2.powi(d.0[1].unsigned_abs() as i32);
                    }
                    c
                }
                FieldModel::AlternatingAr { rho1, rho2 } => {
                    (i.min(j)..i.max(j)).map(|t| if t % 2 == 0 { *rho1 } else { *rho2 }).product()
                }
            };
        }
    }
    cov
}

fn mc(a: &McArgs) -> CliResult<i32> {
    let region: Region = read_json(&a.region)?;
    let field = match a.sampler {
        SamplerName::Ma => FieldModel::MovingAverage { rho: a.rho.clone() },
        SamplerName::Pickard => {
            let (rho1, rho2) = rho_pair(&a.rho)?;
            FieldModel::Pickard { rho1, rho2 }
        }
        SamplerName::Aar => {
            let (rho1, rho2) = rho_pair(&a.rho)?;
            FieldModel::AlternatingAr { rho1, rho2 }
        }
    };
    let spec = SamplerSpec { field, mu: a.mu, white_noise: a.white_noise };
    let est = mc_product_moment(&spec, &region, a.n, a.seed)?;
    if est.relative_error() > 1.0 {
        eprintln!("warning: relative standard error {} exceeds 1", fmt17(est.relative_error()));
    }
    let mut body = JsonObject::new()
        .text("command", "mc")
        .text("sampler", &format!("{:?}", a.sampler).to_lowercase())
        .int("sites", region.len())
        .num("mean", est.mean)
        .num("std_error", est.std_error)
        .int("n", est.n_samples)
        .int("seed", a.seed);
    let mut checks = Vec::new();
    if region.len() <= MC_ORACLE_SITES {
        let exact = product_moment_from_covariance(a.mu, &field_covariance(&spec.field, &region))?;
        body = body.num("exact", exact);
        let z = (est.mean - exact).abs() / est.std_error.max(f64::MIN_POSITIVE);
        checks.push(Check::at_most("standard errors from exact moment", z, 4.0));
    }
    finish(&a.out, body, &checks, false)
}

fn manhattan2d(a: &Manhattan2dArgs) -> CliResult<i32> {
    let r = r_polynomial(a.level, a.rho1, a.rho2, a.mu)?;
    let m = expected_r(&r, a.level, a.rho1, a.rho2)?;
    let region = delta_region(a.level);
    if let Some(path) = &a.dump_polynomial {
        let text = serde_json::to_string(&r).expect("polynomial serialises");
        std::fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source })?;
    }
    let mut checks = Vec::new();
    let swapped = expected_r(&r_polynomial(a.level, a.rho2, a.rho1, a.mu)?, a.level, a.rho2, a.rho1)?;
    checks.push(Check::at_most("axis swap symmetry", rel_diff(m, swapped), 1e-10));
    if a.level <= 3 && a.rho1 > 0.0 && a.rho2 > 0.0 {
        let potential = Potential::manhattan_from_weights(&[a.rho1, a.rho2], a.mu)?;
        let z = exact_partition_function_with_cap(&region, &potential, region.len())?;
        checks.push(Check::at_most("recursion equals enumeration", rel_diff(m, z), 1e-8));
    }
    let body = JsonObject::new()
        .text("command", "manhattan2d")
        .int("N", a.level)
        .num("rho1", a.rho1)
        .num("rho2", a.rho2)
        .num("mu", a.mu)
        .int("sites", region.len())
        .int("degree", r.degree())
        .int("terms", r.len())
        .num("moment", m);
    finish(&a.out, body, &checks, false)
}

fn spectral1d(a: &Spectral1dArgs) -> CliResult<i32> {
    let eig = leading_eigenvalue(a.mu, a.rho, a.solver.params())?;
    let bound = mle_upper_bound(a.mu, a.rho)?;
    let norm_bound = operator_norm_bound(a.mu, a.rho)?;
    let norm = transfer_matrix(a.mu, a.rho, eig.truncation)?.spectral_norm(1e-14, 1_000_000);
    let mle = eig.lambda.ln();
    let mut checks = vec![
        Check::at_most("exponent below upper bound", mle - bound.bound, 0.0),
        Check::at_most("truncated norm below operator bound", norm / norm_bound - 1.0, 1e-6),
    ];
    if a.rho <= 0.9 {
        let ratio = moment_ratio(a.mu, a.rho, 200)?;
        checks.push(Check::at_most("moment ratio at N=200 matches eigenvalue", (ratio - eig.lambda).abs(), 1e-6));
    }
    if !eig.converged {
        eprintln!("error: power iteration did not converge after {} iterations", eig.iters);
    }
    let body = JsonObject::new()
        .text("command", "spectral1d")
        .num("mu", a.mu)
        .num("rho", a.rho)
        .num("lambda", eig.lambda)
        .num("mle", mle)
        .num("upper_bound", bound.bound)
        .num("mutual_information_term", bound.mutual_information_term)
        .num("operator_norm_bound", norm_bound)
        .num("truncated_norm", norm)
        .flag("converged", eig.converged)
        .int("iters", eig.iters)
        .int("truncation", eig.truncation)
        .flag("slow", eig.slow);
    finish(&a.out, body, &checks, !eig.converged)
}

fn pantograph(a: &PantographArgs) -> CliResult<i32> {
    let ts = t_sequence(a.mu, a.rho, a.level);
    let qs = q_sequence(a.mu, a.rho, a.level)?;
    let at_zero: Vec<f64> = ts.iter().map(|t| t.coeffs[0]).collect();
    let moments: Vec<f64> = qs.iter().map(|q| q.coeffs[0]).collect();
    let worst_zero = at_zero.iter().zip(&moments).map(|(t, m)| rel_diff(*t, *m)).fold(0.0, f64::max);
    let worst_coeff = ts
        .iter()
        .zip(&qs)
        .map(|(t, q)| {
            let g = hermite_to_generating(q);
            let scale = t.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);
            (0..t.coeffs.len().max(g.coeffs.len()))
                .map(|k| {
                    let x = t.coeffs.get(k).copied().unwrap_or(0.0);
                    let y = g.coeffs.get(k).copied().unwrap_or(0.0);
                    (x - y).abs() / scale
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let checks = [
        Check::at_most("value at zero equals product moment", worst_zero, 1e-10),
        Check::at_most("generating function equals Hermite coefficients", worst_coeff, 1e-10),
    ];
    let mut body = JsonObject::new()
        .text("command", "pantograph")
        .num("mu", a.mu)
        .num("rho", a.rho)
        .int("N", a.level)
        .nums("values_at_zero", &at_zero)
        .nums("T_N", &ts[a.level].coeffs);
    let mut numeric_failure = false;
    if a.mu > 0.0 {
        let eig = leading_eigenvalue(a.mu, a.rho, a.solver.params())?;
        let t = hermite_to_generating(&HermiteVector { coeffs: eig.eigvec.clone(), truncation: eig.truncation });
        let residual = pantograph_residual(&t, eig.lambda, a.mu, a.rho, &default_sample_points());
        eprintln!("pantograph residual on [-2,2]: {}", fmt17(residual));
        numeric_failure = !eig.converged;
        body = body.num("lambda", eig.lambda).num("residual", residual).flag("converged", eig.converged);
    } else {
        eprintln!("note: no eigenvector for mu = 0, residual skipped");
    }
    finish(&a.out, body, &checks, numeric_failure)
}

/// `start:stop:points` with both ends included.
pub(crate) fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("grid must be start:stop:points, got '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect())
}

fn surface(a: &SurfaceArgs) -> CliResult<i32> {
    let mus = parse_grid(&a.mu_grid)?;
    let rhos = parse_grid(&a.rho_grid)?;
    if let Some(mu) = mus.iter().find(|&&m| !(m > 0.0)) {
        return Err(CliError::Usage(format!("mu grid values must be positive, got {mu}")));
    }
    if let Some(rho) = rhos.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(CliError::Usage(format!("rho grid values must lie in (0,1), got {rho}")));
    }
    let points: Vec<(f64, f64)> = mus.iter().flat_map(|&m| rhos.iter().map(move |&r| (m, r))).collect();
    let params = a.solver.params();
    let rows = points
        .par_iter()
        .map(|&(mu, rho)| {
            let eig = leading_eigenvalue(mu, rho, params)?;
            let bound = mle_upper_bound(mu, rho)?;
            Ok((mu, rho, eig.lambda, eig.lambda.ln(), bound.bound, eig.converged, eig.iters))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut csv = String::from("mu,rho,lambda,mle,upper_bound,converged,iters\n");
    for (mu, rho, lambda, mle, bound, converged, iters) in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt17(*mu),
            fmt17(*rho),
            fmt17(*lambda),
            fmt17(*mle),
            fmt17(*bound),
            converged,
            iters
        ));
    }
    if let Some(path) = &a.emit_plot_data {
        let mut plot = String::from("# mu rho mle\n");
        for block in rows.chunks(rhos.len()) {
            for (mu, rho, _, mle, ..) in block {
                plot.push_str(&format!("{} {} {}\n", fmt17(*mu), fmt17(*rho), fmt17(*mle)));
            }
            plot.push('\n');
        }
        std::fs::write(path, plot).map_err(|source| CliError::Write { path: path.clone(), source })?;
    }
    write_artifact(&a.out, &csv)?;
    let stuck = rows.iter().filter(|r| !r.5).count();
    if stuck > 0 {
        eprintln!("error: {stuck} grid point(s) did not converge");
        return Ok(1);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.5:2:3").unwrap(), vec![0.5, 1.25, 2.0]);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("a:2:3").is_err());
    }

    #[test]
    fn aar_covariance_is_product_of_steps() {
        let region = Region::interval(4).unwrap();
        let c = field_covariance(&FieldModel::AlternatingAr { rho1: 0.5, rho2: 0.2 }, &region);
        assert_eq!(c[0][1], 0.5);
        assert_eq!(c[1][2], 0.2);
        assert!((c[0][3] - 0.05).abs() < 1e-16);
        assert_eq!(c[3][0], c[0][3]);
    }
}
