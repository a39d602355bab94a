//! Exponential generating functions of the Hermite coefficients and the
//! functional-differential equation their limit satisfies.

use serde::{Deserialize, Serialize};

use crate::spectral1d::HermiteVector;

/// Polynomial in one variable, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensePolynomial1D {
    pub coeffs: Vec<f64>,
}

impl DensePolynomial1D {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        DensePolynomial1D { coeffs }
    }

    pub fn one() -> Self {
        DensePolynomial1D { coeffs: vec![1.0] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return DensePolynomial1D { coeffs: vec![0.0] };
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * t + k as f64 * c)
    }
}

/// `(mu + t) T(rho t) + rho T'(rho t)`.
pub fn advance_t(t: &DensePolynomial1D, mu: f64, rho: f64) -> DensePolynomial1D {
    let n = t.coeffs.len();
    let mut scaled = Vec::with_capacity(n);
    let mut p = 1.0;
    for c in &t.coeffs {
        scaled.push(c * p);
        p *= rho;
    }
    let mut out = vec![0.0; n + 1];
    for (j, s) in scaled.iter().enumerate() {
        out[j] += mu * s;
        out[j + 1] += s;
        if j > 0 {
            out[j - 1] += j as f64 * s;
        }
    }
    DensePolynomial1D::new(out)
}

/// `T_0 .. T_N` starting from `T_0 = 1`.
pub fn t_sequence(mu: f64, rho: f64, n: usize) -> Vec<DensePolynomial1D> {
    let mut cur = DensePolynomial1D::one();
    let mut out = vec![cur.clone()];
    for _ in 0..n {
        cur = advance_t(&cur, mu, rho);
        out.push(cur.clone());
    }
    out
}

/// `sum_k q_k t^k / sqrt(k!)`.
pub fn hermite_to_generating(q: &HermiteVector) -> DensePolynomial1D {
    let mut inv_sqrt_fact = 1.0;
    let coeffs = q
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                inv_sqrt_fact /= (k as f64).sqrt();
            }
            c * inv_sqrt_fact
        })
        .collect();
    DensePolynomial1D::new(coeffs)
}

/// `T_N(0)` for `N = 0..=n_max`.
pub fn value_at_zero_chain(mu: f64, rho: f64, n_max: usize) -> Vec<f64> {
    t_sequence(mu, rho, n_max).iter().map(|t| t.coeffs[0]).collect()
}

/// `T_{N+1}(0) / T_N(0)`, renormalising the polynomial every step.
pub fn value_at_zero_ratio(mu: f64, rho: f64, n: usize) -> f64 {
    let mut cur = DensePolynomial1D::one();
    for _ in 0..n {
        cur = advance_t(&cur, mu, rho);
        let scale = cur.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale > 0.0 {
            cur.coeffs.iter_mut().for_each(|c| *c /= scale);
        }
    }
    advance_t(&cur, mu, rho).coeffs[0] / cur.coeffs[0]
}

/// 101 equally spaced points on `[-2, 2]`.
pub fn default_sample_points() -> Vec<f64> {
    (0..=100).map(|i| -2.0 + 4.0 * i as f64 / 100.0).collect()
}

/// `max |T'(x) - (lambda/rho) T(x/rho) + ((mu + x/rho)/rho) T(x)|` over the sample points.
pub fn pantograph_residual(t: &DensePolynomial1D, lambda: f64, mu: f64, rho: f64, points: &[f64]) -> f64 {
    points
        .iter()
        .map(|&x| {
            let r = t.eval_derivative(x) - lambda / rho * t.eval(x / rho) + (mu + x / rho) / rho * t.eval(x);
            r.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral1d::{leading_eigenvalue, product_moment_1d, q_sequence, SolverParams};

    #[test]
    fn first_generating_functions() {
        let (mu, rho) = (0.7, 0.35);
        let ts = t_sequence(mu, rho, 3);
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            assert!((ts[1].eval(x) - (mu + x)).abs() < 1e-14);
            assert!((ts[2].eval(x) - ((mu + x) * (mu + rho * x) + rho)).abs() < 1e-13);
            let t3 = (mu + x) * ((mu + rho * x) * (mu + rho * rho * x) + rho)
                + rho * (mu + rho * rho * x + rho * (mu + rho * x));
            assert!((ts[3].eval(x) - t3).abs() < 1e-12);
        }
        for (n, t) in ts.iter().enumerate() {
            assert_eq!(t.degree(), n);
        }
    }

    #[test]
    fn hermite_coefficients_map() {
        let one = HermiteVector::unit(3);
        assert_eq!(hermite_to_generating(&one).coeffs, vec![1.0]);
        let (mu, rho) = (1.2, 0.5);
        let q = q_sequence(mu, rho, 2).unwrap();
        assert_eq!(hermite_to_generating(&q[1]).coeffs, vec![mu, 1.0]);
        let t2 = hermite_to_generating(&q[2]);
        assert!((t2.coeffs[2] - rho).abs() < 1e-15);
        assert!((t2.coeffs[1] - mu * (1.0 + rho)).abs() < 1e-15);
    }

    #[test]
    fn values_at_zero() {
        let (mu, rho) = (0.9, 0.4);
        let v = value_at_zero_chain(mu, rho, 12);
        assert_eq!(v[1], mu);
        assert!((v[2] - (mu * mu + rho)).abs() < 1e-15);
        for (n, x) in v.iter().enumerate() {
            let m = product_moment_1d(mu, rho, n).unwrap();
            assert!((x - m).abs() <= 1e-12 * m);
        }
        let lambda = leading_eigenvalue(mu, rho, SolverParams::default()).unwrap().lambda;
        assert!((value_at_zero_ratio(mu, rho, 200) - lambda).abs() < 1e-6);
    }

    #[test]
    fn derivative() {
        let p = DensePolynomial1D::new(vec![1.0, 2.0, 3.0, 0.0]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.derivative().coeffs, vec![2.0, 6.0]);
        assert_eq!(p.eval_derivative(2.0), 14.0);
    }

    #[test]
    fn eigenvector_satisfies_pantograph() {
        let (mu, rho) = (1.0, 0.01);
        let r = leading_eigenvalue(mu, rho, SolverParams::fixed(64)).unwrap();
        let t = hermite_to_generating(&HermiteVector { coeffs: r.eigvec.clone(), truncation: 64 });
        let pts: Vec<f64> = (0..=20).map(|i| -1.0 + i as f64 / 10.0).collect();
        assert!(pantograph_residual(&t, r.lambda, mu, rho, &pts) < 1e-3);
        let junk = DensePolynomial1D::new(vec![1.0, -0.5, 0.25]);
        assert!(pantograph_residual(&junk, r.lambda, mu, rho, &pts) > 0.1);
    }

    #[test]
    fn residual_shrinks_with_truncation() {
        let (mu, rho) = (2.0, 0.9);
        let pts = default_sample_points();
        let res: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&k| {
                let r = leading_eigenvalue(mu, rho, SolverParams::fixed(k)).unwrap();
                let t = hermite_to_generating(&HermiteVector { coeffs: r.eigvec.clone(), truncation: r.truncation });
                pantograph_residual(&t, r.lambda, mu, rho, &pts)
            })
            .collect();
        assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
        assert!(res[2] < 1e-8);
    }
}
