//! Integer lattice sites and finite regions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EdmError, Result};

/// A point of the integer lattice `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(pub Vec<i64>);

impl Site {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Site(coords.into())
    }

    pub fn origin(dimension: usize) -> Self {
        Site(vec![0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Lattice vector `self - other`.
    pub fn sub(&self, other: &Site) -> Site {
        Site(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Site) -> Site {
        Site(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Site {
        Site(self.0.iter().map(|c| -c).collect())
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<[i64; 1]> for Site {
    fn from(c: [i64; 1]) -> Self {
        Site(c.to_vec())
    }
}

impl From<[i64; 2]> for Site {
    fn from(c: [i64; 2]) -> Self {
        Site(c.to_vec())
    }
}

impl From<[i64; 3]> for Site {
    fn from(c: [i64; 3]) -> Self {
        Site(c.to_vec())
    }
}

/// How the sites of a region are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SiteOrder {
    #[default]
    Lexicographic,
    /// Caller-supplied order, e.g. the zigzag labelling of a boundary chain.
    Explicit,
}

/// A nonempty finite set of lattice sites with a canonical ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    dimension: usize,
    sites: Vec<Site>,
    #[serde(skip_serializing_if = "is_lexicographic")]
    order: SiteOrder,
}

fn is_lexicographic(order: &SiteOrder) -> bool {
    *order == SiteOrder::Lexicographic
}

#[derive(Deserialize)]
struct RegionDoc {
    dimension: usize,
    sites: Vec<Site>,
    #[serde(default)]
    order: SiteOrder,
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = RegionDoc::deserialize(d)?;
        let built = match doc.order {
            SiteOrder::Lexicographic => Region::new(doc.dimension, doc.sites),
            SiteOrder::Explicit => Region::with_order(doc.dimension, doc.sites),
        };
        built.map_err(serde::de::Error::custom)
    }
}

impl Region {
    /// Builds a region in lexicographic order.
    pub fn new(dimension: usize, sites: Vec<Site>) -> Result<Self> {
        let mut region = Self::with_order(dimension, sites)?;
        region.sites.sort();
        region.order = SiteOrder::Lexicographic;
        Ok(region)
    }

    /// Builds a region keeping the given site order.
    pub fn with_order(dimension: usize, sites: Vec<Site>) -> Result<Self> {
        if dimension == 0 {
            return Err(EdmError::InvalidRegion("dimension must be positive".into()));
        }
        if sites.is_empty() {
            return Err(EdmError::InvalidRegion("region must contain a site".into()));
        }
        if let Some(bad) = sites.iter().find(|s| s.dimension() != dimension) {
            return Err(EdmError::DimensionMismatch { expected: dimension, found: bad.dimension() });
        }
        let unique: BTreeSet<&Site> = sites.iter().collect();
        if unique.len() != sites.len() {
            return Err(EdmError::InvalidRegion("duplicate sites".into()));
        }
        Ok(Region { dimension, sites, order: SiteOrder::Explicit })
    }

    /// The discrete interval `{0, ..., len-1}` in `Z`.
    pub fn interval(len: usize) -> Result<Self> {
        Self::new(1, (0..len as i64).map(|k| Site(vec![k])).collect())
    }

    /// The rectangle `{0..width-1} x {0..height-1}`.
    pub fn rectangle(width: usize, height: usize) -> Result<Self> {
        Self::boxed(&[width, height])
    }

    /// The box `{0..s_1-1} x ... x {0..s_n-1}`.
    pub fn boxed(sides: &[usize]) -> Result<Self> {
        let mut sites = vec![Vec::<i64>::new()];
        for &side in sides {
            sites = sites
                .into_iter()
                .flat_map(|prefix| {
                    (0..side as i64).map(move |c| {
                        let mut s = prefix.clone();
                        s.push(c);
                        s
                    })
                })
                .collect();
        }
        Self::new(sides.len(), sites.into_iter().map(Site).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn order(&self) -> SiteOrder {
        self.order
    }

    pub fn translated(&self, shift: &Site) -> Result<Self> {
        self.map_sites(|s| s.add(shift))
    }

    pub fn negated(&self) -> Result<Self> {
        self.map_sites(Site::neg)
    }

    /// Applies a coordinate permutation: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dimension {
            return Err(EdmError::DimensionMismatch { expected: self.dimension, found: perm.len() });
        }
        self.map_sites(|s| Site(perm.iter().map(|&p| s.0[p]).collect()))
    }

    fn map_sites(&self, f: impl Fn(&Site) -> Site) -> Result<Self> {
        let sites = self.sites.iter().map(f).collect();
        match self.order {
            SiteOrder::Lexicographic => Region::new(self.dimension, sites),
            SiteOrder::Explicit => Region::with_order(self.dimension, sites),
        }
    }

    /// Smallest and largest coordinate along each axis.
    pub fn bounding_box(&self) -> (Site, Site) {
        let mut lo = self.sites[0].clone();
        let mut hi = self.sites[0].clone();
        for s in &self.sites[1..] {
            for d in 0..self.dimension {
                lo.0[d] = lo.0[d].min(s.0[d]);
                hi.0[d] = hi.0[d].max(s.0[d]);
            }
        }
        (lo, hi)
    }
}
