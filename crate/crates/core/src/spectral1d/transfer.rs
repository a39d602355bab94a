use crate::error::{EdmError, Result};

/// Coefficients in the orthonormal Hermite basis `H_k / sqrt(k!)`, indices `0..=truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteVector {
    pub coeffs: Vec<f64>,
    pub truncation: usize,
}

impl HermiteVector {
    /// The constant function 1.
    pub fn unit(truncation: usize) -> Self {
        let mut coeffs = vec![0.0; truncation + 1];
        coeffs[0] = 1.0;
        HermiteVector { coeffs, truncation }
    }

    /// Number of leading entries up to the last nonzero one.
    pub fn support(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

pub(crate) fn check_params(mu: f64, rho: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(EdmError::InvalidParams(format!("mu must be finite and nonnegative, got {mu}")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(EdmError::InvalidParams(format!("rho must lie in (0,1), got {rho}")));
    }
    Ok(())
}

/// Tridiagonal matrix of the transfer operator in the orthonormal Hermite basis,
/// truncated to indices `0..=truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    mu: f64,
    rho: f64,
    truncation: usize,
    /// `rho^k` for each column.
    powers: Vec<f64>,
}

pub fn transfer_matrix(mu: f64, rho: f64, truncation: usize) -> Result<TransferMatrix> {
    check_params(mu, rho)?;
    if truncation < 1 {
        return Err(EdmError::InvalidParams("truncation must be at least 1".into()));
    }
    let powers = (0..=truncation + 1).map(|k| rho.powi(k as i32)).collect();
    Ok(TransferMatrix { mu, rho, truncation, powers })
}

impl TransferMatrix {
    pub fn size(&self) -> usize {
        self.truncation + 1
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let p = self.powers[col];
        if row == col {
            self.mu * p
        } else if row == col + 1 {
            (row as f64).sqrt() * p
        } else if row + 1 == col {
            (col as f64).sqrt() * p
        } else {
            0.0
        }
    }

    /// `G v` on the truncated space.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        let mut out = vec![0.0; n];
        self.apply_into(v, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.size();
        for k in 0..n {
            let mut acc = self.mu * self.powers[k] * v[k];
            if k > 0 {
                acc += (k as f64).sqrt() * self.powers[k - 1] * v[k - 1];
            }
            if k + 1 < n {
                acc += ((k + 1) as f64).sqrt() * self.powers[k + 1] * v[k + 1];
            }
            out[k] = acc;
        }
    }

    /// `G^T v`.
    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|k| {
                let mut acc = self.entry(k, k) * v[k];
                if k > 0 {
                    acc += self.entry(k - 1, k) * v[k - 1];
                }
                if k + 1 < n {
                    acc += self.entry(k + 1, k) * v[k + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        (0..n).map(|j| (0..n).map(|k| self.entry(j, k)).collect()).collect()
    }

    /// `D G D^-1` with `D = diag(rho^{k/2})`, a symmetric matrix with the same spectrum.
    pub fn symmetrized(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let d: Vec<f64> = (0..n).map(|k| self.rho.powf(k as f64 / 2.0)).collect();
        (0..n).map(|j| (0..n).map(|k| d[j] * self.entry(j, k) / d[k]).collect()).collect()
    }

    /// Largest singular value, by power iteration on `G^T G`.
    pub fn spectral_norm(&self, tol: f64, max_iter: usize) -> f64 {
        let n = self.size();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut sigma2 = 0.0;
        for _ in 0..max_iter {
            let w = self.apply_transpose(&self.apply(&v));
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v = w.into_iter().map(|x| x / norm).collect();
            let done = (norm - sigma2).abs() <= tol * norm;
            sigma2 = norm;
            if done {
                break;
            }
        }
        sigma2.sqrt()
    }
}

/// One exact step `q_k <- sqrt(k) rho^{k-1} q_{k-1} + mu rho^k q_k + sqrt(k+1) rho^{k+1} q_{k+1}`.
pub fn advance_q(q: &HermiteVector, mu: f64, rho: f64) -> Result<HermiteVector> {
    check_params(mu, rho)?;
    let support = q.support();
    if support + 1 > q.truncation + 1 {
        return Err(EdmError::TruncationOverflow { support: support + 1, truncation: q.truncation });
    }
    Ok(advance_q_truncated(q, mu, rho))
}

/// The same step with anything beyond the truncation discarded.
pub fn advance_q_truncated(q: &HermiteVector, mu: f64, rho: f64) -> HermiteVector {
    let n = q.truncation + 1;
    let c = &q.coeffs;
    let mut out = vec![0.0; n];
    let mut pk = 1.0; // rho^k
    for k in 0..n {
        let mut acc = mu * pk * c[k];
        if k > 0 {
            acc += (k as f64).sqrt() * (pk / rho) * c[k - 1];
        }
        if k + 1 < n {
            acc += ((k + 1) as f64).sqrt() * pk * rho * c[k + 1];
        }
        out[k] = acc;
        pk *= rho;
    }
    HermiteVector { coeffs: out, truncation: q.truncation }
}

/// The exact coefficient vectors `q_0 .. q_N`.
pub fn q_sequence(mu: f64, rho: f64, n: usize) -> Result<Vec<HermiteVector>> {
    let mut q = HermiteVector::unit(n);
    let mut out = vec![q.clone()];
    for _ in 0..n {
        q = advance_q(&q, mu, rho)?;
        out.push(q.clone());
    }
    Ok(out)
}

/// `M_N = q_{N,0}` for the chain of `N` sites.
pub fn product_moment_1d(mu: f64, rho: f64, n: usize) -> Result<f64> {
    let mut q = HermiteVector::unit(n);
    for _ in 0..n {
        q = advance_q(&q, mu, rho)?;
    }
    Ok(q.coeffs[0])
}

/// State of the recursion kept as `exp(log_scale) * q` with `q` renormalised each step.
#[derive(Debug, Clone)]
pub struct ScaledRecursion {
    pub q: HermiteVector,
    pub log_scale: f64,
    mu: f64,
    rho: f64,
}

impl ScaledRecursion {
    pub fn new(mu: f64, rho: f64, truncation: usize) -> Result<Self> {
        check_params(mu, rho)?;
        Ok(ScaledRecursion { q: HermiteVector::unit(truncation), log_scale: 0.0, mu, rho })
    }

    /// Advances one step and returns the ratio `q_{N+1,0} / q_{N,0}`.
    pub fn step(&mut self) -> f64 {
        let before = self.q.coeffs[0];
        let next = advance_q_truncated(&self.q, self.mu, self.rho);
        let ratio = next.coeffs[0] / before;
        let scale = next.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale > 0.0 {
            self.q = HermiteVector { coeffs: next.coeffs.iter().map(|c| c / scale).collect(), truncation: next.truncation };
            self.log_scale += scale.ln();
        } else {
            self.q = next;
        }
        ratio
    }

    /// `ln q_{N,0}` for the current step.
    pub fn log_moment(&self) -> f64 {
        self.log_scale + self.q.coeffs[0].ln()
    }
}

/// `ln M_N`, computed without overflow for large `N`.
pub fn log_product_moment_1d(mu: f64, rho: f64, n: usize) -> Result<f64> {
    let mut rec = ScaledRecursion::new(mu, rho, n.max(1))?;
    for _ in 0..n {
        rec.step();
    }
    Ok(rec.log_moment())
}

/// `q_{N+1,0} / q_{N,0}`.
pub fn moment_ratio(mu: f64, rho: f64, n: usize) -> Result<f64> {
    let mut rec = ScaledRecursion::new(mu, rho, n + 1)?;
    for _ in 0..n {
        rec.step();
    }
    Ok(rec.step())
}
