use crate::error::{EdmError, Result};

/// Probabilists' Hermite polynomial `H_k(x)`.
pub fn hermite_polynomial(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..k {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `E H_k(X)` for `X ~ N(m, s^2)`, which equals `u^k H_k(m/u)` with `u = sqrt(1 - s^2)`.
pub fn gauss_hermite_expectation(k: usize, m: f64, s: f64) -> Result<f64> {
    let var = s * s;
    if !(var < 1.0) {
        return Err(EdmError::InvalidVariance(var));
    }
    let u = (1.0 - var).sqrt();
    // u^k H_k(m/u) expanded so that no division by u is needed
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..k {
        let next = m * cur - j as f64 * u * u * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Monomial coefficients of `H_0 .. H_n`, row `k` holding `H_k`.
pub fn hermite_monomial_table(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for k in 0..n {
        let mut next = vec![0.0; k + 2];
        for (i, c) in rows[k].iter().enumerate() {
            next[i + 1] += c;
        }
        if k > 0 {
            for (i, c) in rows[k - 1].iter().enumerate() {
                next[i] -= k as f64 * c;
            }
        }
        rows.push(next);
    }
    rows
}

/// Converts `sum_k q_k H_k / sqrt(k!)` to monomial coefficients.
pub fn hermite_to_monomial(q: &[f64]) -> Vec<f64> {
    if q.is_empty() {
        return Vec::new();
    }
    let table = hermite_monomial_table(q.len() - 1);
    let mut out = vec![0.0; q.len()];
    let mut inv_sqrt_fact = 1.0;
    for (k, (qk, row)) in q.iter().zip(&table).enumerate() {
        if k > 0 {
            inv_sqrt_fact /= (k as f64).sqrt();
        }
        for (i, c) in row.iter().enumerate() {
            out[i] += qk * inv_sqrt_fact * c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(hermite_polynomial(0, 2.5), 1.0);
        assert_eq!(hermite_polynomial(1, 2.5), 2.5);
        assert_eq!(hermite_polynomial(2, 3.0), 8.0);
        // x^3 - 3x
        assert_eq!(hermite_polynomial(3, 2.0), 2.0);
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(gauss_hermite_expectation(0, 0.3, 0.5).unwrap(), 1.0);
        for k in 0..8 {
            assert!((gauss_hermite_expectation(k, 1.3, 0.0).unwrap() - hermite_polynomial(k, 1.3)).abs() < 1e-12);
        }
        assert!((gauss_hermite_expectation(2, 0.0, 0.6).unwrap() + 0.64).abs() < 1e-15);
        assert!(matches!(gauss_hermite_expectation(2, 0.0, 1.0), Err(EdmError::InvalidVariance(_))));
        // E H_3(X) = E X^3 - 3 E X = m^3 + 3 m s^2 - 3 m
        let (m, s) = (0.7, 0.4);
        let want = m * m * m + 3.0 * m * s * s - 3.0 * m;
        assert!((gauss_hermite_expectation(3, m, s).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn table_matches_recurrence() {
        let t = hermite_monomial_table(6);
        for (k, row) in t.iter().enumerate() {
            let x: f64 = -1.7;
            let v: f64 = row.iter().enumerate().map(|(i, c)| c * x.powi(i as i32)).sum();
            assert!((v - hermite_polynomial(k, x)).abs() < 1e-11);
        }
        assert_eq!(hermite_to_monomial(&[0.0, 0.0, 2f64.sqrt()]), vec![-1.0, 0.0, 1.0]);
    }
}
