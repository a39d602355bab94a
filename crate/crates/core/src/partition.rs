//! Exact enumeration of dimer-monomer configurations and partition functions.
//!
//! Configurations are generated by the recursion "take the first unassigned
//! site; make it a monomer, or pair it with each later unassigned site". The
//! stream order is therefore canonical: monomer before pairings, partners in
//! increasing site index.

use num_bigint::BigUint;

use crate::error::{EdmError, Result};
use crate::lattice::{Region, Site};
use crate::numeric::CompensatedSum;
use crate::potential::{Energy, Potential};

/// Largest region enumerated unless the caller raises the cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// A partition of a region into dimers (pairs) and monomers (singletons).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub dimers: Vec<(Site, Site)>,
    pub monomers: Vec<Site>,
}

impl Configuration {
    pub fn site_count(&self) -> usize {
        self.monomers.len() + 2 * self.dimers.len()
    }
}

const UNASSIGNED: usize = usize::MAX;

/// Lazy stream over all configurations of a region.
pub struct Configurations<'a> {
    region: &'a Region,
    /// `partner[i] == i` for a monomer, `UNASSIGNED` if free.
    partner: Vec<usize>,
    /// Decision stack: (site, current choice).
    stack: Vec<(usize, usize)>,
    started: bool,
    finished: bool,
}

impl<'a> Configurations<'a> {
    fn new(region: &'a Region) -> Self {
        Configurations {
            region,
            partner: vec![UNASSIGNED; region.len()],
            stack: Vec::with_capacity(region.len()),
            started: false,
            finished: false,
        }
    }

    fn descend(&mut self) {
        while let Some(i) = self.partner.iter().position(|&p| p == UNASSIGNED) {
            self.partner[i] = i;
            self.stack.push((i, i));
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((i, choice)) = self.stack.pop() {
            self.partner[i] = UNASSIGNED;
            if choice != i {
                self.partner[choice] = UNASSIGNED;
            }
            let next = (choice + 1..self.partner.len()).find(|&j| self.partner[j] == UNASSIGNED);
            if let Some(j) = next {
                self.partner[i] = j;
                self.partner[j] = i;
                self.stack.push((i, j));
                return true;
            }
        }
        false
    }

    fn current(&self) -> Configuration {
        let sites = self.region.sites();
        let mut dimers = Vec::new();
        let mut monomers = Vec::new();
        for (i, &p) in self.partner.iter().enumerate() {
            if p == i {
                monomers.push(sites[i].clone());
            } else if p > i {
                dimers.push((sites[i].clone(), sites[p].clone()));
            }
        }
        Configuration { dimers, monomers }
    }
}

impl Iterator for Configurations<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.current());
        }
        if self.advance() {
            self.descend();
            Some(self.current())
        } else {
            self.finished = true;
            None
        }
    }
}

fn check_cap(region: &Region, cap: usize) -> Result<()> {
    if region.len() > cap {
        Err(EdmError::RegionTooLarge { sites: region.len(), cap })
    } else {
        Ok(())
    }
}

fn check_dimension(region: &Region, potential: &Potential) -> Result<()> {
    if region.dimension() != potential.dimension() {
        Err(EdmError::DimensionMismatch { expected: region.dimension(), found: potential.dimension() })
    } else {
        Ok(())
    }
}

pub fn enumerate_configurations(region: &Region) -> Result<Configurations<'_>> {
    enumerate_configurations_with_cap(region, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_configurations_with_cap(region: &Region, cap: usize) -> Result<Configurations<'_>> {
    check_cap(region, cap)?;
    Ok(Configurations::new(region))
}

/// Number of partitions of an `n`-set into pairs and singletons
/// (telephone numbers), `a(n) = a(n-1) + (n-1) a(n-2)`.
pub fn configuration_count(n_sites: usize) -> BigUint {
    let mut prev = BigUint::from(1u32);
    let mut cur = BigUint::from(1u32);
    for n in 2..=n_sites {
        let next = &cur + &prev * BigUint::from(n - 1);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `U = (#monomers) V + sum over dimers of W(x - y)`.
pub fn config_energy(config: &Configuration, potential: &Potential) -> Result<Energy> {
    let n = potential.dimension();
    let sites = config.monomers.iter().chain(config.dimers.iter().flat_map(|(x, y)| [x, y]));
    if let Some(bad) = sites.into_iter().find(|s| s.dimension() != n) {
        return Err(EdmError::DimensionMismatch { expected: bad.dimension(), found: n });
    }
    let monomer_part = if config.monomers.is_empty() {
        Energy::ZERO
    } else {
        potential.monomer_energy().scale(config.monomers.len() as f64)
    };
    let dimer_part: Energy = config.dimers.iter().map(|(x, y)| potential.dimer_energy(&x.sub(y))).sum();
    Ok(monomer_part + dimer_part)
}

pub fn exact_partition_function(region: &Region, potential: &Potential) -> Result<f64> {
    exact_partition_function_with_cap(region, potential, DEFAULT_ENUMERATION_CAP)
}

/// `Z = sum over configurations of exp(-beta U)`.
///
/// Walks the same recursion as [`enumerate_configurations`] but carries the
/// running Boltzmann weight, so subtrees whose weight is already zero (an
/// infinite energy term) are skipped.
pub fn exact_partition_function_with_cap(region: &Region, potential: &Potential, cap: usize) -> Result<f64> {
    check_cap(region, cap)?;
    check_dimension(region, potential)?;
    let n = region.len();
    let beta = potential.beta();
    let sites = region.sites();
    let monomer = potential.monomer_energy().boltzmann(beta);
    let mut pair = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pair[i * n + j] = potential.dimer_energy(&sites[i].sub(&sites[j])).boltzmann(beta);
            }
        }
    }

    struct Walk<'a> {
        n: usize,
        monomer: f64,
        pair: &'a [f64],
        acc: CompensatedSum,
    }

    impl Walk<'_> {
        fn visit(&mut self, free: u64, weight: f64) {
            if free == 0 {
                self.acc.add(weight);
                return;
            }
            let i = free.trailing_zeros() as usize;
            let rest = free & !(1u64 << i);
            if self.monomer > 0.0 {
                self.visit(rest, weight * self.monomer);
            }
            let mut others = rest;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let w = self.pair[i * self.n + j];
                if w > 0.0 {
                    self.visit(rest & !(1u64 << j), weight * w);
                }
            }
        }
    }

    if n > 63 {
        return Err(EdmError::RegionTooLarge { sites: n, cap: 63 });
    }
    let mut walk = Walk { n, monomer, pair: &pair, acc: CompensatedSum::new() };
    walk.visit((1u64 << n) - 1, 1.0);
    Ok(walk.acc.value())
}

/// `F = -T ln Z`.
pub fn free_energy(region: &Region, potential: &Potential) -> Result<f64> {
    let z = exact_partition_function(region, potential)?;
    free_energy_from_z(z, potential.temperature())
}

pub fn free_energy_from_z(z: f64, temperature: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(EdmError::InfeasibleSystem);
    }
    Ok(-temperature * z.ln())
}
