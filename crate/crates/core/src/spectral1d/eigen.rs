use serde::Serialize;

use super::transfer::{check_params, transfer_matrix};
use crate::error::{EdmError, Result};

pub const DEFAULT_TRUNCATION: usize = 64;
pub const MAX_TRUNCATION: usize = 4096;
/// From this correlation on the spectral gap is small and the truncation is raised.
pub const SLOW_RHO: f64 = 0.95;
pub const SLOW_TRUNCATION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub truncation: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Double the truncation until successive eigenvalues agree to `tol`.
    pub adaptive: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { truncation: DEFAULT_TRUNCATION, tol: 1e-12, max_iter: 100_000, adaptive: true }
    }
}

impl SolverParams {
    pub fn fixed(truncation: usize) -> Self {
        SolverParams { truncation, adaptive: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub lambda: f64,
    /// Normalised so that the constant coefficient is 1.
    pub eigvec: Vec<f64>,
    pub iters: usize,
    pub converged: bool,
    pub truncation: usize,
    /// Set when the correlation is close enough to 1 that convergence is slow.
    pub slow: bool,
}

/// Power iteration from the constant function, rescaled by the constant coefficient,
/// so the successive scalings are the ratios `q_{N+1,0} / q_{N,0}` of the truncated recursion.
fn power_iteration(mu: f64, rho: f64, truncation: usize, tol: f64, max_iter: usize) -> Result<EigenResult> {
    let g = transfer_matrix(mu, rho, truncation)?;
    let n = g.size();
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    let mut w = vec![0.0; n];
    let mut lambda = f64::NAN;
    for iter in 1..=max_iter {
        g.apply_into(&v, &mut w);
        let next = w[0];
        let mut shift = 0.0f64;
        let mut size = 0.0f64;
        for (a, b) in v.iter_mut().zip(&w) {
            let scaled = b / next;
            shift = shift.max((scaled - *a).abs());
            size = size.max(scaled.abs());
            *a = scaled;
        }
        // the scaling alone can repeat by coincidence before the vector settles
        let done = (next - lambda).abs() < tol * next && shift < tol * size;
        lambda = next;
        if done {
            return Ok(EigenResult { lambda, eigvec: v, iters: iter, converged: true, truncation, slow: false });
        }
    }
    Ok(EigenResult { lambda, eigvec: v, iters: max_iter, converged: false, truncation, slow: false })
}

/// Leading eigenvalue of the transfer operator.
pub fn leading_eigenvalue(mu: f64, rho: f64, params: SolverParams) -> Result<EigenResult> {
    check_params(mu, rho)?;
    if mu == 0.0 {
        return Err(EdmError::InvalidParams("the eigenvalue problem needs mu > 0".into()));
    }
    if params.truncation < 8 {
        return Err(EdmError::InvalidParams(format!("truncation must be at least 8, got {}", params.truncation)));
    }
    if !(params.tol > 0.0) || params.max_iter == 0 {
        return Err(EdmError::InvalidParams("tolerance and iteration limit must be positive".into()));
    }
    let slow = rho >= SLOW_RHO;
    let mut k = if slow { params.truncation.max(SLOW_TRUNCATION) } else { params.truncation };
    let mut best = power_iteration(mu, rho, k, params.tol, params.max_iter)?;
    if params.adaptive {
        let mut iters = best.iters;
        while 2 * k <= MAX_TRUNCATION {
            k *= 2;
            let next = power_iteration(mu, rho, k, params.tol, params.max_iter)?;
            iters += next.iters;
            let agree = (next.lambda - best.lambda).abs() < params.tol * next.lambda;
            best = next;
            if agree {
                break;
            }
        }
        best.iters = iters;
    }
    best.slow = slow;
    Ok(best)
}

/// Moment Lyapunov exponent `ln lambda`.
pub fn mle_1d(mu: f64, rho: f64, params: SolverParams) -> Result<f64> {
    let r = leading_eigenvalue(mu, rho, params)?;
    if !r.converged {
        return Err(EdmError::NotConverged { best: r.lambda.ln(), iters: r.iters });
    }
    Ok(r.lambda.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBound {
    pub bound: f64,
    /// `-ln(1 - rho^2) / 2`, the mutual information between neighbouring values.
    pub mutual_information_term: f64,
}

/// `ln(mu^2 + (1+rho^2)/(1-rho^2)) / 2 - ln(1-rho^2) / 2`.
pub fn mle_upper_bound(mu: f64, rho: f64) -> Result<UpperBound> {
    check_params(mu, rho)?;
    let g2 = 1.0 - rho * rho;
    let mi = -0.5 * g2.ln();
    Ok(UpperBound { bound: 0.5 * (mu * mu + (1.0 + rho * rho) / g2).ln() + mi, mutual_information_term: mi })
}

/// Bound `sqrt(mu^2 + (1+rho^2)/gamma^2) / gamma` on the operator norm, `gamma = sqrt(1-rho^2)`.
pub fn operator_norm_bound(mu: f64, rho: f64) -> Result<f64> {
    check_params(mu, rho)?;
    let g2 = 1.0 - rho * rho;
    Ok((mu * mu + (1.0 + rho * rho) / g2).sqrt() / g2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral1d::transfer::moment_ratio;

    #[test]
    fn small_rho_approaches_mu() {
        let r = leading_eigenvalue(1.0, 0.01, SolverParams::fixed(32)).unwrap();
        assert!(r.converged);
        assert!((r.lambda - 1.0).abs() < 0.02);
        let e = std::f64::consts::E;
        assert!((mle_1d(e, 0.01, SolverParams::default()).unwrap() - 1.0).abs() < 0.02);
        let gaps: Vec<f64> = [0.2, 0.1, 0.05, 0.01]
            .iter()
            .map(|&rho| (leading_eigenvalue(1.0, rho, SolverParams::default()).unwrap().lambda - 1.0).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn truncation_stability_and_ratio() {
        let a = leading_eigenvalue(1.0, 0.5, SolverParams::fixed(32)).unwrap();
        let b = leading_eigenvalue(1.0, 0.5, SolverParams::fixed(64)).unwrap();
        assert!((a.lambda - b.lambda).abs() < 1e-8);
        let ratio = moment_ratio(1.0, 0.5, 200).unwrap();
        assert!((ratio - b.lambda).abs() < 1e-6);
        assert!((b.eigvec[0] - 1.0).abs() < 1e-15);
        assert!(b.eigvec.iter().all(|&c| c >= 0.0));
    }

    #[test]
    fn mle_grows_with_rho() {
        let m: Vec<f64> = [0.1, 0.5, 0.9].iter().map(|&r| mle_1d(1.0, r, SolverParams::default()).unwrap()).collect();
        assert!(m[0] < m[1] && m[1] < m[2]);
    }

    #[test]
    fn bound_examples() {
        let b = mle_upper_bound(1.0, 0.5).unwrap();
        let want = 0.5 * (8.0f64 / 3.0).ln() + 0.5 * (4.0f64 / 3.0).ln();
        assert!((b.bound - want).abs() < 1e-15);
        assert!((b.bound - 0.6342).abs() < 1e-4);
        assert!((b.mutual_information_term - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        let mu: f64 = 2.0;
        let tiny = mle_upper_bound(mu, 1e-9).unwrap().bound;
        assert!((tiny - 0.5 * (1.0 + mu * mu).ln()).abs() < 1e-12);
        assert!(tiny >= mu.ln());
        assert!((operator_norm_bound(1.0, 0.5).unwrap().ln() - b.bound).abs() < 1e-14);
    }

    #[test]
    fn mle_below_bound() {
        for &mu in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            for &rho in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let m = mle_1d(mu, rho, SolverParams::default()).unwrap();
                assert!(m <= mle_upper_bound(mu, rho).unwrap().bound);
            }
        }
    }

    #[test]
    fn rejects() {
        assert!(matches!(leading_eigenvalue(0.0, 0.5, SolverParams::default()), Err(EdmError::InvalidParams(_))));
        assert!(matches!(leading_eigenvalue(1.0, 0.5, SolverParams::fixed(4)), Err(EdmError::InvalidParams(_))));
        let stuck = SolverParams { max_iter: 2, adaptive: false, ..SolverParams::default() };
        assert!(matches!(mle_1d(1.0, 0.5, stuck), Err(EdmError::NotConverged { .. })));
        let slow = leading_eigenvalue(1.0, 0.96, SolverParams::default()).unwrap();
        assert!(slow.slow && slow.truncation >= SLOW_TRUNCATION);
    }
}
