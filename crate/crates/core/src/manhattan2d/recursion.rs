use std::collections::HashMap;

use super::polynomial::{bump, indexed_variables, Accumulator, Exponents, SparsePolynomial, DEFAULT_TERM_CAP};
use super::zigzag::gamma_set;
use crate::error::{EdmError, Result};
use crate::numeric::{binomial, gaussian_moment, CompensatedSum};

/// Largest monomial degree accepted by [`expected_r`].
pub const MAX_MOMENT_SLOTS: usize = 24;

fn check_rho(name: &str, r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(EdmError::InvalidParams(format!("{name} must lie in [0,1), got {r}")))
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu >= 0.0 {
        Ok(())
    } else {
        Err(EdmError::InvalidParams(format!("mu must be finite and nonnegative, got {mu}")))
    }
}

/// `mu + s`, the conditional moment for the single-site region.
pub fn r0_polynomial(mu: f64) -> Result<SparsePolynomial> {
    check_mu(mu)?;
    Ok(SparsePolynomial::linear(indexed_variables(1), mu, &[(0, 1.0)]))
}

/// `E (L + g e)^a` over a standard normal `e`, where
/// `L = rho2 x - rho1 rho2 y + rho1 z`, as terms in `(x, y, z)`.
fn noise_averaged_power(a: u8, rho1: f64, rho2: f64) -> Vec<([u8; 3], f64)> {
    let g2 = (1.0 - rho1 * rho1) * (1.0 - rho2 * rho2);
    let (cx, cy, cz) = (rho2, -rho1 * rho2, rho1);
    let mut out: HashMap<[u8; 3], CompensatedSum> = HashMap::new();
    for m in (0..=a).step_by(2) {
        let outer = binomial(a as u32, m as u32) * g2.powi(m as i32 / 2) * gaussian_moment(m as u32);
        let p = a - m;
        for i in 0..=p {
            for j in 0..=p - i {
                let l = p - i - j;
                let multinomial = binomial(p as u32, i as u32) * binomial((p - i) as u32, j as u32);
                let c = outer * multinomial * cx.powi(i as i32) * cy.powi(j as i32) * cz.powi(l as i32);
                if c != 0.0 {
                    out.entry([i, j, l]).or_default().add(c);
                }
            }
        }
    }
    let mut terms: Vec<([u8; 3], f64)> = out.into_iter().map(|(e, s)| (e, s.value())).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    terms
}

/// One step of the conditional moment recursion: maps the level `N-1`
/// polynomial to the level `N` polynomial in `2N+1` variables.
pub fn advance_r(prev: &SparsePolynomial, level: usize, rho1: f64, rho2: f64, mu: f64) -> Result<SparsePolynomial> {
    advance_r_with_cap(prev, level, rho1, rho2, mu, DEFAULT_TERM_CAP)
}

pub fn advance_r_with_cap(
    prev: &SparsePolynomial,
    level: usize,
    rho1: f64,
    rho2: f64,
    mu: f64,
    cap: usize,
) -> Result<SparsePolynomial> {
    if level == 0 {
        return Err(EdmError::InvalidParams("advance_r needs level >= 1".into()));
    }
    check_rho("rho1", rho1)?;
    check_rho("rho2", rho2)?;
    check_mu(mu)?;
    let old_n = 2 * level - 1;
    let new_n = 2 * level + 1;
    if prev.num_variables() != old_n {
        return Err(EdmError::DimensionMismatch { expected: old_n, found: prev.num_variables() });
    }

    // Exponent vectors hold the remaining even old variables first, then the new ones.
    // Odd old entries coincide with even new entries and move over directly.
    let evens = level;
    let mut acc = Accumulator::default();
    for (e, c) in prev.terms() {
        let mut mixed = vec![0u8; evens + new_n];
        for (i, &a) in e.iter().enumerate() {
            if i % 2 == 0 {
                mixed[i / 2] = a;
            } else {
                let slot = evens + i + 1;
                mixed[slot] = bump(mixed[slot], a)?;
            }
        }
        acc.add(mixed, *c);
    }

    let mut cache: HashMap<u8, Vec<([u8; 3], f64)>> = HashMap::new();
    for k in 0..evens {
        let terms = acc.into_terms();
        acc = Accumulator::default();
        for (e, c) in terms {
            let a = e[k];
            if a == 0 {
                acc.add(e, c);
                continue;
            }
            let sub = cache.entry(a).or_insert_with(|| noise_averaged_power(a, rho1, rho2));
            for (t, cs) in sub.iter() {
                let mut next = e.clone();
                next[k] = 0;
                for (d, &by) in t.iter().enumerate() {
                    let slot = evens + 2 * k + d;
                    next[slot] = bump(next[slot], by)?;
                }
                acc.add(next, c * cs);
            }
            if acc.len() > cap {
                acc.check_cap(cap)?;
            }
        }
    }

    let terms = acc.into_terms().into_iter().map(|(e, c)| (e[evens..].to_vec(), c)).collect();
    let mut r = SparsePolynomial::from_terms(indexed_variables(new_n), terms);
    r = r.mul_affine(mu, 0, cap)?;
    r = r.mul_affine(mu, 2 * level, cap)?;
    for k in 0..level {
        r = r.mul_affine(mu, 2 * k + 1, cap)?;
    }
    Ok(r)
}

/// The level `N` conditional moment polynomial, built from the single-site case.
pub fn r_polynomial(level: usize, rho1: f64, rho2: f64, mu: f64) -> Result<SparsePolynomial> {
    let mut r = r0_polynomial(mu)?;
    for n in 1..=level {
        r = advance_r(&r, n, rho1, rho2, mu)?;
    }
    Ok(r)
}

struct ChainMoments<'a> {
    cov: &'a [Vec<f64>],
    memo: HashMap<Exponents, f64>,
}

impl ChainMoments<'_> {
    // E s^a by Gaussian integration by parts on the first occupied slot.
    fn moment(&mut self, a: &[u8]) -> f64 {
        let total: usize = a.iter().map(|&x| x as usize).sum();
        if total == 0 {
            return 1.0;
        }
        if total % 2 == 1 {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(a) {
            return v;
        }
        let i = a.iter().position(|&x| x > 0).expect("nonzero exponent");
        let mut rest = a.to_vec();
        rest[i] -= 1;
        let mut sum = CompensatedSum::new();
        for j in 0..rest.len() {
            if rest[j] == 0 || self.cov[i][j] == 0.0 {
                continue;
            }
            let mult = rest[j] as f64;
            let mut sub = rest.clone();
            sub[j] -= 1;
            sum.add(self.cov[i][j] * mult * self.moment(&sub));
        }
        let v = sum.value();
        self.memo.insert(a.to_vec(), v);
        v
    }
}

/// `E R(Sigma)` for a centred Gaussian vector with the chain covariance of level `N`.
pub fn expected_r(r: &SparsePolynomial, level: usize, rho1: f64, rho2: f64) -> Result<f64> {
    check_rho("rho1", rho1)?;
    check_rho("rho2", rho2)?;
    let n = 2 * level + 1;
    if r.num_variables() != n {
        return Err(EdmError::DimensionMismatch { expected: n, found: r.num_variables() });
    }
    let cov = gamma_set(level).covariance(rho1, rho2);
    let mut moments = ChainMoments { cov: &cov, memo: HashMap::new() };
    let mut sum = CompensatedSum::new();
    for (e, c) in r.terms() {
        let slots: usize = e.iter().map(|&x| x as usize).sum();
        if slots > MAX_MOMENT_SLOTS {
            return Err(EdmError::DegreeOverflow(format!("monomial with {slots} slots exceeds {MAX_MOMENT_SLOTS}")));
        }
        sum.add(c * moments.moment(e));
    }
    Ok(sum.value())
}

/// Product moment of the Manhattan field over the staircase region of level `N`.
pub fn delta_product_moment(level: usize, rho1: f64, rho2: f64, mu: f64) -> Result<f64> {
    expected_r(&r_polynomial(level, rho1, rho2, mu)?, level, rho1, rho2)
}
