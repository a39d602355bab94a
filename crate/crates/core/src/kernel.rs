//! The auxiliary Gaussian field of a dimer potential and its product moments.
//!
//! A potential is mapped to a field with mean `mu = exp(-beta V)` and covariance
//! `C(z) = exp(-beta W(z))`. Product moments over a region are evaluated exactly
//! by the Isserlis pair-partition expansion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{EdmError, Result};
use crate::lattice::{Region, Site};
use crate::partition::{exact_partition_function_with_cap, DEFAULT_ENUMERATION_CAP};
use crate::potential::{DimerPotential, Energy, Potential};

/// Default half-width of the summation box for closed-form kernels.
pub const DEFAULT_ADMISSIBILITY_RADIUS: u32 = 32;

/// Relative slack when comparing the two sides of the dominance inequality.
const DOMINANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub z: Site,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Covariance function of the auxiliary field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CovarianceModel {
    /// Moving-average field: `C(0) = 2 sum rho_k`, `C(±e_k) = rho_k`, zero elsewhere.
    Rigid { rho: Vec<f64> },
    /// Pickard field: `C(z) = prod rho_k^|z_k|`.
    Manhattan { rho: Vec<f64> },
    /// Finite support; `C0` is the value at the origin.
    Table {
        #[serde(rename = "C0")]
        c0: f64,
        #[serde(with = "support_entries")]
        support: BTreeMap<Site, f64>,
    },
}

mod support_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<Site, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        map.iter().map(|(z, c)| SupportEntry { z: z.clone(), c: *c }).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Site, f64>, D::Error> {
        Ok(Vec::<SupportEntry>::deserialize(d)?.into_iter().map(|e| (e.z, e.c)).collect())
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Mean and covariance of a homogeneous Gaussian field on `Z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    pub dimension: usize,
    pub mu: f64,
    pub covariance: CovarianceModel,
    /// Multiplies every covariance value.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    /// Variance of independent white noise added at every site (enters `C(0)` only).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub white_noise: f64,
}

impl GaussianKernel {
    pub fn new(dimension: usize, mu: f64, covariance: CovarianceModel) -> Self {
        GaussianKernel { dimension, mu, covariance, scale: 1.0, white_noise: 0.0 }
    }

    pub fn manhattan(rho: Vec<f64>, mu: f64) -> Self {
        Self::new(rho.len(), mu, CovarianceModel::Manhattan { rho })
    }

    pub fn rigid(rho: Vec<f64>, mu: f64) -> Self {
        Self::new(rho.len(), mu, CovarianceModel::Rigid { rho })
    }

    pub fn covariance(&self, z: &Site) -> f64 {
        let base = match &self.covariance {
            CovarianceModel::Rigid { rho } => {
                if z.is_origin() {
                    2.0 * rho.iter().sum::<f64>()
                } else {
                    let nonzero: Vec<_> = z.coords().iter().enumerate().filter(|(_, &c)| c != 0).collect();
                    match nonzero.as_slice() {
                        [(k, &c)] if c.abs() == 1 => rho[*k],
                        _ => 0.0,
                    }
                }
            }
            CovarianceModel::Manhattan { rho } => {
                z.coords().iter().zip(rho).map(|(&c, &r)| r.powi(c.abs() as i32)).product()
            }
            CovarianceModel::Table { c0, support } => {
                if z.is_origin() {
                    *c0
                } else {
                    support.get(z).copied().unwrap_or(0.0)
                }
            }
        };
        let noise = if z.is_origin() { self.white_noise } else { 0.0 };
        self.scale * base + noise
    }

    /// `rho_k` for the closed-form kernels.
    pub fn rho(&self) -> Option<&[f64]> {
        match &self.covariance {
            CovarianceModel::Rigid { rho } | CovarianceModel::Manhattan { rho } => Some(rho),
            CovarianceModel::Table { .. } => None,
        }
    }

    /// Conditional standard deviations `gamma_k = sqrt(1 - rho_k^2)` of the Manhattan kernel.
    pub fn gamma(&self) -> Option<Vec<f64>> {
        match &self.covariance {
            CovarianceModel::Manhattan { rho } => Some(rho.iter().map(|r| (1.0 - r * r).sqrt()).collect()),
            _ => None,
        }
    }

    /// The field `factor * xi + white noise`: mean scales by `factor`,
    /// covariance by `factor^2`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let mut k = self.clone();
        k.mu *= factor;
        k.scale *= factor * factor;
        k.white_noise *= factor * factor;
        k
    }

    pub fn with_white_noise(&self, variance: f64) -> Self {
        let mut k = self.clone();
        k.white_noise = variance;
        k
    }
}

/// Builds the auxiliary kernel of a potential.
pub fn kernel_from_potential(potential: &Potential) -> Result<GaussianKernel> {
    let beta = potential.beta();
    let n = potential.dimension();
    let mu = potential.monomer_energy().boltzmann(beta);
    let covariance = match potential.dimer() {
        DimerPotential::Rigid { alpha } => CovarianceModel::Rigid { rho: alpha.iter().map(|a| (-beta * a).exp()).collect() },
        DimerPotential::Manhattan { alpha } => {
            CovarianceModel::Manhattan { rho: alpha.iter().map(|a| (-beta * a).exp()).collect() }
        }
        DimerPotential::Table { entries, .. } => {
            let support: BTreeMap<Site, f64> = entries
                .iter()
                .filter(|(z, w)| !z.is_origin() && w.is_finite())
                .map(|(z, w)| (z.clone(), w.boltzmann(beta)))
                .collect();
            let off_diagonal: f64 = support.values().sum();
            let c0 = match entries.get(&Site::origin(n)) {
                Some(w0) => {
                    let c0 = w0.boltzmann(beta);
                    if c0 < off_diagonal * (1.0 - DOMINANCE_SLACK) {
                        return Err(EdmError::InadmissiblePotential { lhs: c0, rhs: off_diagonal });
                    }
                    c0
                }
                None => off_diagonal,
            };
            CovarianceModel::Table { c0, support }
        }
    };
    Ok(GaussianKernel::new(n, mu, covariance))
}

/// Both sides of the diagonal-dominance condition `C(0) >= sum_{z != 0} C(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub ok: bool,
    /// `exp(-beta W(0))` for the canonical (or tabulated) extension of `W` to the origin.
    pub lhs: f64,
    /// Off-diagonal sum over `0 < |z|_inf <= radius` (full support for tables).
    pub rhs: f64,
    /// Exact remainder of the off-diagonal sum beyond the radius.
    pub tail: f64,
}

/// Checks the dominance condition using the canonical origin values
/// `2 sum rho_k` (rigid) and `prod (1+rho_k)/(1-rho_k)` (Manhattan).
pub fn check_admissibility(potential: &Potential, radius: u32) -> Admissibility {
    let beta = potential.beta();
    let (lhs, rhs, tail) = match potential.dimer() {
        DimerPotential::Rigid { alpha } => {
            let rho: Vec<f64> = alpha.iter().map(|a| (-beta * a).exp()).collect();
            let total = 2.0 * rho.iter().sum::<f64>();
            (total, if radius >= 1 { total } else { 0.0 }, 0.0)
        }
        DimerPotential::Manhattan { alpha } => {
            let rho: Vec<f64> = alpha.iter().map(|a| (-beta * a).exp()).collect();
            let full: f64 = rho.iter().map(|r| (1.0 + r) / (1.0 - r)).product();
            // sum over |z_k| <= radius factorises per axis
            let boxed: f64 = rho.iter().map(|r| 1.0 + 2.0 * r * (1.0 - r.powi(radius as i32)) / (1.0 - r)).product();
            (full, boxed - 1.0, full - boxed)
        }
        DimerPotential::Table { dimension, entries } => {
            let off: f64 = entries.iter().filter(|(z, _)| !z.is_origin()).map(|(_, w)| w.boltzmann(beta)).sum();
            let lhs = entries.get(&Site::origin(*dimension)).map(|w| w.boltzmann(beta)).unwrap_or(off);
            (lhs, off, 0.0)
        }
    };
    Admissibility { ok: lhs >= rhs * (1.0 - DOMINANCE_SLACK), lhs, rhs, tail }
}

pub fn isserlis_product_moment(kernel: &GaussianKernel, region: &Region) -> Result<f64> {
    isserlis_product_moment_with_cap(kernel, region, DEFAULT_ENUMERATION_CAP)
}

/// `M = sum_D mu^(N - #D) sum_{pairings of D} prod C(x - y)`.
///
/// Evaluated by dynamic programming over subsets of remaining sites: the
/// lowest remaining site either contributes `mu` or is paired with a later
/// one. `C(0)` is never read.
pub fn isserlis_product_moment_with_cap(kernel: &GaussianKernel, region: &Region, cap: usize) -> Result<f64> {
    if region.len() > cap {
        return Err(EdmError::RegionTooLarge { sites: region.len(), cap });
    }
    if region.len() > 28 {
        return Err(EdmError::RegionTooLarge { sites: region.len(), cap: 28 });
    }
    if region.dimension() != kernel.dimension {
        return Err(EdmError::DimensionMismatch { expected: region.dimension(), found: kernel.dimension });
    }
    let sites = region.sites();
    let n = sites.len();
    let mut cov = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = kernel.covariance(&sites[j].sub(&sites[i]));
            cov[i * n + j] = c;
            cov[j * n + i] = c;
        }
    }
    Ok(pair_partition_sum(n, kernel.mu, &cov))
}

/// Product moment `E prod_i (mean + s_i)` for a centred Gaussian vector with
/// covariance matrix `cov`. Diagonal entries are not used.
pub fn product_moment_from_covariance(mean: f64, cov: &[Vec<f64>]) -> Result<f64> {
    let n = cov.len();
    if n > 28 {
        return Err(EdmError::RegionTooLarge { sites: n, cap: 28 });
    }
    if let Some(row) = cov.iter().find(|r| r.len() != n) {
        return Err(EdmError::DimensionMismatch { expected: n, found: row.len() });
    }
    let flat: Vec<f64> = cov.iter().flatten().copied().collect();
    Ok(pair_partition_sum(n, mean, &flat))
}

/// Weighted pair-partition sum over all subsets of `n` items, with `weight`
/// per unpaired item and `pair[i*n+j]` per pair.
pub(crate) fn pair_partition_sum(n: usize, weight: f64, pair: &[f64]) -> f64 {
    let size = 1usize << n;
    let mut table = vec![0.0f64; size];
    table[0] = 1.0;
    for mask in 1..size {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut value = if weight != 0.0 { weight * table[rest] } else { 0.0 };
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let c = pair[i * n + j];
            if c != 0.0 {
                value += c * table[rest & !(1 << j)];
            }
        }
        table[mask] = value;
    }
    table[size - 1]
}

/// `|Z - M| / max(Z, eps)`: the discrepancy between enumeration and the
/// Gaussian product moment.
pub fn moment_residual(region: &Region, potential: &Potential) -> Result<f64> {
    moment_residual_with_cap(region, potential, DEFAULT_ENUMERATION_CAP)
}

pub fn moment_residual_with_cap(region: &Region, potential: &Potential, cap: usize) -> Result<f64> {
    let z = exact_partition_function_with_cap(region, potential, cap)?;
    let kernel = kernel_from_potential(potential)?;
    let m = isserlis_product_moment_with_cap(&kernel, region, cap)?;
    Ok((z - m).abs() / z.max(f64::MIN_POSITIVE))
}

/// Real part of `sum_{|z|_inf <= radius} C(z) exp(-i lambda.z)`. Table
/// kernels are summed over their full support.
pub fn spectral_density(kernel: &GaussianKernel, point: &[f64], radius: u32) -> Result<f64> {
    if point.len() != kernel.dimension {
        return Err(EdmError::DimensionMismatch { expected: kernel.dimension, found: point.len() });
    }
    let phase = |z: &Site| z.coords().iter().zip(point).map(|(&c, &l)| c as f64 * l).sum::<f64>();
    let total = match &kernel.covariance {
        CovarianceModel::Table { support, .. } => {
            let origin = Site::origin(kernel.dimension);
            kernel.covariance(&origin)
                + support.keys().map(|z| kernel.covariance(z) * phase(z).cos()).sum::<f64>()
        }
        _ => {
            let r = radius as i64;
            let mut z = vec![-r; kernel.dimension];
            let mut sum = 0.0;
            loop {
                let site = Site(z.clone());
                let c = kernel.covariance(&site);
                if c != 0.0 {
                    sum += c * phase(&site).cos();
                }
                let mut d = 0;
                loop {
                    if d == z.len() {
                        return Ok(sum);
                    }
                    if z[d] < r {
                        z[d] += 1;
                        break;
                    }
                    z[d] = -r;
                    d += 1;
                }
            }
        }
    };
    Ok(total)
}

/// `ln M / #region`, the finite-volume moment Lyapunov exponent.
pub fn finite_size_mle(kernel: &GaussianKernel, region: &Region) -> Result<f64> {
    let m = isserlis_product_moment(kernel, region)?;
    if m <= 0.0 {
        return Err(EdmError::NonpositiveMoment(m));
    }
    Ok(m.ln() / region.len() as f64)
}

/// The extension `W(0)` implied by the canonical `C(0)` of a closed-form potential.
pub fn canonical_origin_energy(potential: &Potential) -> Energy {
    let lhs = check_admissibility(potential, DEFAULT_ADMISSIBILITY_RADIUS).lhs;
    Energy::from_boltzmann(lhs, potential.beta())
}
