//! Monomer and dimer energies.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{EdmError, Result};
use crate::lattice::Site;

/// An energy value that may be `+inf` (a forbidden state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energy {
    Finite(f64),
    Infinite,
}

impl Energy {
    pub const ZERO: Energy = Energy::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, Energy::Finite(_))
    }

    /// `exp(-beta * E)`, exactly zero for `+inf`.
    pub fn boltzmann(self, beta: f64) -> f64 {
        match self {
            Energy::Finite(e) => (-beta * e).exp(),
            Energy::Infinite => 0.0,
        }
    }

    /// Inverse of [`Energy::boltzmann`]: the energy whose factor is `weight`.
    pub fn from_boltzmann(weight: f64, beta: f64) -> Energy {
        if weight <= 0.0 {
            Energy::Infinite
        } else {
            Energy::Finite(-weight.ln() / beta)
        }
    }

    pub fn scale(self, k: f64) -> Energy {
        match self {
            Energy::Finite(e) => Energy::Finite(k * e),
            Energy::Infinite => Energy::Infinite,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Energy::Finite(e) => e,
            Energy::Infinite => f64::INFINITY,
        }
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        match (self, rhs) {
            (Energy::Finite(a), Energy::Finite(b)) => Energy::Finite(a + b),
            _ => Energy::Infinite,
        }
    }
}

impl std::iter::Sum for Energy {
    fn sum<I: Iterator<Item = Energy>>(iter: I) -> Energy {
        iter.fold(Energy::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Energy::Finite(e) => write!(f, "{e}"),
            Energy::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Energy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Energy::Finite(e) => s.serialize_f64(*e),
            Energy::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Energy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Energy::Finite(x)),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "+inf" | "Infinity") => Ok(Energy::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub z: Site,
    #[serde(rename = "W")]
    pub w: Energy,
}

/// The dimer potential `W(z)` on nonzero lattice vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DimerPotential {
    /// Nearest-neighbour dimers only, `W(±e_k) = alpha_k`.
    Rigid { alpha: Vec<f64> },
    /// `W(z) = sum_k alpha_k |z_k|`.
    Manhattan { alpha: Vec<f64> },
    /// Explicit symmetric table; vectors not listed have `W = +inf`.
    /// An entry for the zero vector sets the extension `W(0)`.
    Table {
        dimension: usize,
        #[serde(with = "table_entries")]
        entries: BTreeMap<Site, Energy>,
    },
}

mod table_entries {
    use super::*;

    pub fn serialize<S: Serializer>(map: &BTreeMap<Site, Energy>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<TableEntry> = map.iter().map(|(z, w)| TableEntry { z: z.clone(), w: *w }).collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Site, Energy>, D::Error> {
        let list = Vec::<TableEntry>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for e in list {
            if map.insert(e.z.clone(), e.w).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate table entry {}", e.z)));
            }
        }
        Ok(map)
    }
}

impl DimerPotential {
    pub fn dimension(&self) -> usize {
        match self {
            DimerPotential::Rigid { alpha } | DimerPotential::Manhattan { alpha } => alpha.len(),
            DimerPotential::Table { dimension, .. } => *dimension,
        }
    }

    /// `W(z)` for a nonzero vector `z`.
    pub fn energy(&self, z: &Site) -> Energy {
        match self {
            DimerPotential::Rigid { alpha } => {
                let mut axis = None;
                for (k, &c) in z.coords().iter().enumerate() {
                    match c {
                        0 => {}
                        1 | -1 if axis.is_none() => axis = Some(k),
                        _ => return Energy::Infinite,
                    }
                }
                match axis {
                    Some(k) => Energy::Finite(alpha[k]),
                    None => Energy::Infinite,
                }
            }
            DimerPotential::Manhattan { alpha } => {
                Energy::Finite(z.coords().iter().zip(alpha).map(|(&c, a)| a * c.abs() as f64).sum())
            }
            DimerPotential::Table { entries, .. } => entries.get(z).copied().unwrap_or(Energy::Infinite),
        }
    }
}

/// Monomer energy, dimer potential and inverse temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potential {
    #[serde(rename = "V")]
    monomer_energy: Energy,
    beta: f64,
    dimer: DimerPotential,
}

#[derive(Deserialize)]
struct PotentialDoc {
    #[serde(rename = "V")]
    monomer_energy: Energy,
    beta: f64,
    dimer: DimerPotential,
}

impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PotentialDoc::deserialize(d)?;
        Potential::new(doc.monomer_energy, doc.dimer, doc.beta).map_err(serde::de::Error::custom)
    }
}

impl Potential {
    pub fn new(monomer_energy: Energy, dimer: DimerPotential, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(EdmError::InvalidPotential(format!("beta must be positive, got {beta}")));
        }
        if let Energy::Finite(v) = monomer_energy {
            if !v.is_finite() {
                return Err(EdmError::InvalidPotential("monomer energy must be finite or \"inf\"".into()));
            }
        }
        if dimer.dimension() == 0 {
            return Err(EdmError::InvalidPotential("dimension must be positive".into()));
        }
        match &dimer {
            DimerPotential::Rigid { alpha } => {
                if alpha.iter().any(|a| !a.is_finite()) {
                    return Err(EdmError::InvalidPotential("rigid alpha_k must be finite".into()));
                }
            }
            DimerPotential::Manhattan { alpha } => {
                if alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                    return Err(EdmError::InvalidPotential("Manhattan alpha_k must be positive".into()));
                }
            }
            DimerPotential::Table { dimension, entries } => {
                for (z, w) in entries {
                    if z.dimension() != *dimension {
                        return Err(EdmError::DimensionMismatch { expected: *dimension, found: z.dimension() });
                    }
                    if let Energy::Finite(x) = w {
                        if !x.is_finite() {
                            return Err(EdmError::InvalidPotential(format!("W{z} is not a number")));
                        }
                    }
                    if entries.get(&z.neg()) != Some(w) {
                        return Err(EdmError::InvalidPotential(format!("table is not symmetric at {z}")));
                    }
                }
            }
        }
        Ok(Potential { monomer_energy, beta, dimer })
    }

    pub fn rigid(alpha: Vec<f64>, monomer_energy: Energy, beta: f64) -> Result<Self> {
        Self::new(monomer_energy, DimerPotential::Rigid { alpha }, beta)
    }

    pub fn manhattan(alpha: Vec<f64>, monomer_energy: Energy, beta: f64) -> Result<Self> {
        Self::new(monomer_energy, DimerPotential::Manhattan { alpha }, beta)
    }

    /// Manhattan potential at `beta = 1` parametrised by its Boltzmann factors
    /// `rho_k = exp(-alpha_k)` and `mu = exp(-V)`.
    pub fn manhattan_from_weights(rho: &[f64], mu: f64) -> Result<Self> {
        if rho.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(EdmError::InvalidParams("Manhattan rho_k must lie in (0,1)".into()));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(EdmError::InvalidParams("mu must be nonnegative".into()));
        }
        Self::manhattan(rho.iter().map(|r| -r.ln()).collect(), Energy::from_boltzmann(mu, 1.0), 1.0)
    }

    /// Rigid potential at `beta = 1` with `rho_k = exp(-alpha_k)` and `mu = exp(-V)`.
    pub fn rigid_from_weights(rho: &[f64], mu: f64) -> Result<Self> {
        if rho.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(EdmError::InvalidParams("rigid rho_k must be positive".into()));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(EdmError::InvalidParams("mu must be nonnegative".into()));
        }
        Self::rigid(rho.iter().map(|r| -r.ln()).collect(), Energy::from_boltzmann(mu, 1.0), 1.0)
    }

    pub fn dimension(&self) -> usize {
        self.dimer.dimension()
    }

    pub fn monomer_energy(&self) -> Energy {
        self.monomer_energy
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn dimer(&self) -> &DimerPotential {
        &self.dimer
    }

    /// `W(z)` for a nonzero lattice vector.
    pub fn dimer_energy(&self, z: &Site) -> Energy {
        self.dimer.energy(z)
    }

    pub fn with_monomer_energy(&self, v: Energy) -> Result<Self> {
        Self::new(v, self.dimer.clone(), self.beta)
    }

    pub fn with_dimer(&self, dimer: DimerPotential) -> Result<Self> {
        Self::new(self.monomer_energy, dimer, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_energies() {
        let p = Potential::rigid(vec![0.5, 2.0], Energy::ZERO, 1.0).unwrap();
        assert_eq!(p.dimer_energy(&[1, 0].into()), Energy::Finite(0.5));
        assert_eq!(p.dimer_energy(&[0, -1].into()), Energy::Finite(2.0));
        assert_eq!(p.dimer_energy(&[1, 1].into()), Energy::Infinite);
        assert_eq!(p.dimer_energy(&[2, 0].into()), Energy::Infinite);
    }

    #[test]
    fn manhattan_is_weighted_l1() {
        let p = Potential::manhattan(vec![1.0, 3.0], Energy::ZERO, 1.0).unwrap();
        assert_eq!(p.dimer_energy(&[-2, 1].into()), Energy::Finite(5.0));
        assert!(Potential::manhattan(vec![0.0], Energy::ZERO, 1.0).is_err());
    }

    #[test]
    fn infinity_propagates() {
        assert_eq!(Energy::Finite(1.0) + Energy::Infinite, Energy::Infinite);
        assert_eq!(Energy::Infinite.boltzmann(3.0), 0.0);
        assert_eq!(Energy::from_boltzmann(0.0, 1.0), Energy::Infinite);
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let mut entries = BTreeMap::new();
        entries.insert(Site::from([1]), Energy::Finite(1.0));
        let dimer = DimerPotential::Table { dimension: 1, entries: entries.clone() };
        assert!(matches!(Potential::new(Energy::ZERO, dimer, 1.0), Err(EdmError::InvalidPotential(_))));
        entries.insert(Site::from([-1]), Energy::Finite(1.0));
        let dimer = DimerPotential::Table { dimension: 1, entries };
        assert!(Potential::new(Energy::ZERO, dimer, 1.0).is_ok());
    }

    #[test]
    fn json_forms() {
        let text = r#"{"V":"inf","beta":2.0,"dimer":{"kind":"rigid","alpha":[0.0,0.0]}}"#;
        let p: Potential = serde_json::from_str(text).unwrap();
        assert_eq!(p.monomer_energy(), Energy::Infinite);
        assert_eq!(serde_json::to_string(&p).unwrap(), text);

        let table = r#"{"V":0.5,"beta":1.0,"dimer":{"kind":"table","dimension":1,"entries":[{"z":[-2],"W":"inf"},{"z":[2],"W":"inf"}]}}"#;
        let p: Potential = serde_json::from_str(table).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), table);

        let bad = r#"{"V":0,"beta":1,"dimer":{"kind":"table","dimension":1,"entries":[{"z":[1],"W":1}]}}"#;
        assert!(serde_json::from_str::<Potential>(bad).is_err());
    }
}
