//! Simulation of the auxiliary Gaussian fields and Monte Carlo product moments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EdmError, Result};
use crate::lattice::{Region, Site};
use crate::numeric::{fmt17, pairwise_reduce};
use crate::rng::NormalStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    MovingAverage,
    Pickard2D,
    AlternatingAR,
}

/// One realisation of a field over a region.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub region: Region,
    /// `values[i]` belongs to `region.sites()[i]`.
    pub values: Vec<f64>,
    pub seed: u64,
    pub kind: FieldKind,
}

/// Covariance structure of a simulated field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldModel {
    /// `xi_x = mu + sum_k sqrt(rho_k) (eta_{x - e_k/2} + eta_{x + e_k/2})`.
    MovingAverage { rho: Vec<f64> },
    /// Unilateral Pickard field with `C(z) = rho1^|z1| rho2^|z2|`; an AR(1)
    /// chain with coefficient `rho1` on one-dimensional regions.
    Pickard { rho1: f64, rho2: f64 },
    /// Alternating AR chain laid along the region's site order.
    AlternatingAr { rho1: f64, rho2: f64 },
}

impl FieldModel {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldModel::MovingAverage { .. } => FieldKind::MovingAverage,
            FieldModel::Pickard { .. } => FieldKind::Pickard2D,
            FieldModel::AlternatingAr { .. } => FieldKind::AlternatingAR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub field: FieldModel,
    pub mu: f64,
    /// Variance of extra independent noise added at each site.
    #[serde(default)]
    pub white_noise: f64,
}

impl SamplerSpec {
    pub fn new(field: FieldModel, mu: f64) -> Self {
        SamplerSpec { field, mu, white_noise: 0.0 }
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: u64,
}

impl MCEstimate {
    pub fn to_json(&self, seed: u64) -> String {
        format!(
            "{{\"mean\":{},\"std_error\":{},\"n\":{},\"seed\":{}}}",
            fmt17(self.mean),
            fmt17(self.std_error),
            self.n_samples,
            seed
        )
    }

    pub fn relative_error(&self) -> f64 {
        self.std_error / self.mean.abs()
    }
}

fn unit_interval_open(name: &str, r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(EdmError::InvalidParams(format!("{name} must lie in (0,1), got {r}")))
    }
}

#[derive(Debug, Clone)]
enum Plan {
    MovingAverage {
        midpoints: usize,
        /// Per site: (midpoint index, weight) pairs.
        taps: Vec<Vec<(usize, f64)>>,
    },
    Grid {
        rho1: f64,
        rho2: f64,
        width: usize,
        height: usize,
        /// Raster index of each region site.
        index: Vec<usize>,
    },
    Chain {
        rho1: f64,
        rho2: f64,
        len: usize,
    },
}

/// A sampler compiled for one region.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: SamplerSpec,
    region: Region,
    plan: Plan,
}

impl Sampler {
    pub fn new(spec: &SamplerSpec, region: &Region) -> Result<Self> {
        if !(spec.white_noise >= 0.0) {
            return Err(EdmError::InvalidParams("white noise variance must be nonnegative".into()));
        }
        let plan = match &spec.field {
            FieldModel::MovingAverage { rho } => {
                if rho.len() != region.dimension() {
                    return Err(EdmError::DimensionMismatch { expected: region.dimension(), found: rho.len() });
                }
                if rho.iter().any(|&r| !(r >= 0.0)) {
                    return Err(EdmError::InvalidParams("rho_k must be nonnegative".into()));
                }
                // midpoint x + e_k/2 is keyed by 2x + e_k on the doubled lattice
                let mut keys = BTreeMap::new();
                let mut raw_taps = Vec::with_capacity(region.len());
                for site in region.sites() {
                    let doubled: Vec<i64> = site.coords().iter().map(|c| 2 * c).collect();
                    let mut taps = Vec::with_capacity(2 * rho.len());
                    for (k, &r) in rho.iter().enumerate() {
                        for sign in [-1, 1] {
                            let mut key = doubled.clone();
                            key[k] += sign;
                            taps.push((Site(key), r.sqrt()));
                        }
                    }
                    for (key, _) in &taps {
                        keys.entry(key.clone()).or_insert(0usize);
                    }
                    raw_taps.push(taps);
                }
                for (i, v) in keys.values_mut().enumerate() {
                    *v = i;
                }
                let taps = raw_taps.into_iter().map(|t| t.into_iter().map(|(key, w)| (keys[&key], w)).collect()).collect();
                Plan::MovingAverage { midpoints: keys.len(), taps }
            }
            FieldModel::Pickard { rho1, rho2 } => {
                unit_interval_open("rho1", *rho1)?;
                let (lo, hi) = region.bounding_box();
                match region.dimension() {
                    1 => {
                        let width = (hi.0[0] - lo.0[0] + 1) as usize;
                        let index = region.sites().iter().map(|s| (s.0[0] - lo.0[0]) as usize).collect();
                        Plan::Grid { rho1: *rho1, rho2: 0.0, width, height: 1, index }
                    }
                    2 => {
                        unit_interval_open("rho2", *rho2)?;
                        let width = (hi.0[0] - lo.0[0] + 1) as usize;
                        let height = (hi.0[1] - lo.0[1] + 1) as usize;
                        let index = region
                            .sites()
                            .iter()
                            .map(|s| (s.0[0] - lo.0[0]) as usize + width * (s.0[1] - lo.0[1]) as usize)
                            .collect();
                        Plan::Grid { rho1: *rho1, rho2: *rho2, width, height, index }
                    }
                    d => return Err(EdmError::InvalidParams(format!("Pickard sampler supports dimensions 1 and 2, not {d}"))),
                }
            }
            FieldModel::AlternatingAr { rho1, rho2 } => {
                unit_interval_open("rho1", *rho1)?;
                unit_interval_open("rho2", *rho2)?;
                Plan::Chain { rho1: *rho1, rho2: *rho2, len: region.len() }
            }
        };
        Ok(Sampler { spec: spec.clone(), region: region.clone(), plan })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Draws the field values for sample `index` under `seed` into `out`.
    pub fn fill(&self, seed: u64, index: u64, scratch: &mut Vec<f64>, out: &mut [f64]) {
        let mut stream = NormalStream::new(seed, index);
        let mu = self.spec.mu;
        match &self.plan {
            Plan::MovingAverage { midpoints, taps } => {
                scratch.clear();
                scratch.extend((0..*midpoints).map(|_| stream.normal()));
                for (x, site_taps) in out.iter_mut().zip(taps) {
                    *x = mu + site_taps.iter().map(|&(m, w)| w * scratch[m]).sum::<f64>();
                }
            }
            Plan::Grid { rho1, rho2, width, height, index } => {
                scratch.clear();
                scratch.resize(width * height, 0.0);
                pickard_raster(*rho1, *rho2, *width, *height, &mut stream, scratch);
                for (x, &i) in out.iter_mut().zip(index) {
                    *x = mu + scratch[i];
                }
            }
            Plan::Chain { rho1, rho2, len } => {
                scratch.clear();
                scratch.resize(*len, 0.0);
                alternating_ar_into(*rho1, *rho2, &mut stream, scratch);
                for (x, s) in out.iter_mut().zip(scratch.iter()) {
                    *x = mu + s;
                }
            }
        }
        if self.spec.white_noise > 0.0 {
            let sd = self.spec.white_noise.sqrt();
            for x in out.iter_mut() {
                *x += sd * stream.normal();
            }
        }
    }

    pub fn sample(&self, seed: u64, index: u64) -> FieldSample {
        let mut values = vec![0.0; self.region.len()];
        self.fill(seed, index, &mut Vec::new(), &mut values);
        FieldSample { region: self.region.clone(), values, seed, kind: self.spec.field.kind() }
    }
}

/// Centred Pickard field on a `width x height` raster, row by row.
fn pickard_raster(rho1: f64, rho2: f64, width: usize, height: usize, stream: &mut NormalStream, out: &mut [f64]) {
    let g1 = (1.0 - rho1 * rho1).sqrt();
    let g2 = (1.0 - rho2 * rho2).sqrt();
    for k in 0..height {
        for j in 0..width {
            let w = stream.normal();
            let idx = j + width * k;
            out[idx] = match (j, k) {
                (0, 0) => w,
                (_, 0) => rho1 * out[idx - 1] + g1 * w,
                (0, _) => rho2 * out[idx - width] + g2 * w,
                _ => {
                    -rho1 * rho2 * out[idx - width - 1] + rho2 * out[idx - width] + rho1 * out[idx - 1] + g1 * g2 * w
                }
            };
        }
    }
}

fn alternating_ar_into(rho1: f64, rho2: f64, stream: &mut NormalStream, out: &mut [f64]) {
    let g1 = (1.0 - rho1 * rho1).sqrt();
    let g2 = (1.0 - rho2 * rho2).sqrt();
    if out.is_empty() {
        return;
    }
    out[0] = stream.normal();
    for j in 0..out.len() - 1 {
        let w = stream.normal();
        out[j + 1] = if j % 2 == 0 { rho1 * out[j] + g1 * w } else { rho2 * out[j] + g2 * w };
    }
}

pub fn sample_moving_average(rho: &[f64], mu: f64, region: &Region, seed: u64) -> Result<FieldSample> {
    let spec = SamplerSpec::new(FieldModel::MovingAverage { rho: rho.to_vec() }, mu);
    Ok(Sampler::new(&spec, region)?.sample(seed, 0))
}

/// Unilateral Pickard field on `{0..width-1} x {0..height-1}`.
pub fn sample_pickard_2d(rho1: f64, rho2: f64, mu: f64, width: usize, height: usize, seed: u64) -> Result<FieldSample> {
    unit_interval_open("rho1", rho1)?;
    unit_interval_open("rho2", rho2)?;
    let region = Region::rectangle(width, height)?;
    let spec = SamplerSpec::new(FieldModel::Pickard { rho1, rho2 }, mu);
    Ok(Sampler::new(&spec, &region)?.sample(seed, 0))
}

/// The `2N+1` centred values of the alternating AR chain.
pub fn sample_alternating_ar(rho1: f64, rho2: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    unit_interval_open("rho1", rho1)?;
    unit_interval_open("rho2", rho2)?;
    let mut out = vec![0.0; 2 * n + 1];
    alternating_ar_into(rho1, rho2, &mut NormalStream::new(seed, 0), &mut out);
    Ok(out)
}

const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn combine(a: &Moments, b: &Moments) -> Moments {
        let count = a.count + b.count;
        if count == 0.0 {
            return *a;
        }
        let delta = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + delta * b.count / count,
            m2: a.m2 + b.m2 + delta * delta * a.count * b.count / count,
        }
    }
}

/// Runs `f` over samples `0..n_samples` in fixed chunks and reduces the
/// per-chunk moments with a pairwise tree, so the result is independent of
/// thread scheduling.
pub fn mc_estimate<F>(sampler: &Sampler, n_samples: u64, seed: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n_samples < 2 {
        return Err(EdmError::InvalidParams("n_samples must be at least 2".into()));
    }
    let chunks = n_samples.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = Vec::new();
            let mut values = vec![0.0; sampler.region.len()];
            let mut m = Moments { count: 0.0, mean: 0.0, m2: 0.0 };
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_samples) {
                sampler.fill(seed, i, &mut scratch, &mut values);
                let x = f(&values);
                m.count += 1.0;
                let delta = x - m.mean;
                m.mean += delta / m.count;
                m.m2 += delta * (x - m.mean);
            }
            m
        })
        .collect();
    let total = pairwise_reduce(&partial, &Moments::combine).expect("at least one chunk");
    let variance = total.m2 / (total.count - 1.0);
    Ok(MCEstimate { mean: total.mean, std_error: (variance / total.count).sqrt(), n_samples })
}

/// Monte Carlo estimate of `E prod_{x in region} xi_x`.
pub fn mc_product_moment(spec: &SamplerSpec, region: &Region, n_samples: u64, seed: u64) -> Result<MCEstimate> {
    let sampler = Sampler::new(spec, region)?;
    mc_estimate(&sampler, n_samples, seed, |v| v.iter().product())
}
