use serde::{Deserialize, Serialize};

use crate::lattice::{Region, Site};

/// `{(j, k) : j, k >= 0, j + k = level}` with `j` ascending.
pub fn level_set(level: usize) -> Vec<Site> {
    let l = level as i64;
    (0..=l).map(|j| Site(vec![j, l - j])).collect()
}

/// The `2N+1` sites of the zigzag chain at level `N`, in chain order from
/// `(0,-N)` to `(-N,0)`. Even positions lie on the diagonal `j+k = -N`, odd
/// positions on `j+k = -N-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagChain {
    pub level: usize,
    pub sites: Vec<Site>,
}

impl ZigzagChain {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Pairwise `rho1^|dz1| rho2^|dz2|` along the chain.
    pub fn covariance(&self, rho1: f64, rho2: f64) -> Vec<Vec<f64>> {
        self.sites
            .iter()
            .map(|a| {
                self.sites
                    .iter()
                    .map(|b| {
                        let d = a.sub(b);
                        rho1.powi(d.0[0].unsigned_abs() as i32) * rho2.powi(d.0[1].unsigned_abs() as i32)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn region(&self) -> Region {
        Region::with_order(2, self.sites.clone()).expect("zigzag sites are distinct")
    }
}

pub fn gamma_set(level: usize) -> ZigzagChain {
    let n = level as i64;
    let mut sites = Vec::with_capacity(2 * level + 1);
    for k in 0..=n {
        sites.push(Site(vec![-k, -(n - k)]));
        if k < n {
            sites.push(Site(vec![-(k + 1), -(n - k)]));
        }
    }
    ZigzagChain { level, sites }
}

/// Union of the chains at levels `0..=N`; has `N(N+5)/2 + 1` sites.
pub fn delta_region(level: usize) -> Region {
    let mut sites: Vec<Site> = (0..=level).flat_map(|l| gamma_set(l).sites).collect();
    sites.sort();
    sites.dedup();
    Region::new(2, sites).expect("nonempty two-dimensional region")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn level_sets() {
        assert_eq!(level_set(0), vec![Site::from([0, 0])]);
        assert_eq!(level_set(2), vec![Site::from([0, 2]), Site::from([1, 1]), Site::from([2, 0])]);
        for l in 0..10 {
            assert_eq!(level_set(l).len(), l + 1);
        }
    }

    // Reflected pair of adjacent level sets with the two extreme sites removed.
    fn gamma_by_sets(level: usize) -> BTreeSet<Site> {
        let mut s: BTreeSet<Site> = level_set(level + 1).into_iter().chain(level_set(level)).map(|x| x.neg()).collect();
        let n = level as i64 + 1;
        s.remove(&Site::from([0, -n]));
        s.remove(&Site::from([-n, 0]));
        s
    }

    #[test]
    fn chains_match_set_definition() {
        assert_eq!(gamma_set(0).sites, vec![Site::from([0, 0])]);
        assert_eq!(gamma_set(1).sites, vec![Site::from([0, -1]), Site::from([-1, -1]), Site::from([-1, 0])]);
        for n in 0..8 {
            let g = gamma_set(n);
            assert_eq!(g.len(), 2 * n + 1);
            assert_eq!(g.sites.iter().cloned().collect::<BTreeSet<_>>(), gamma_by_sets(n));
            assert_eq!(g.sites[0], Site::from([0, -(n as i64)]));
            assert_eq!(g.sites[2 * n], Site::from([-(n as i64), 0]));
            for w in g.sites.windows(2) {
                assert_eq!(w[0].sub(&w[1]).0.iter().map(|c| c.abs()).sum::<i64>(), 1);
            }
        }
    }

    #[test]
    fn chain_covariance_alternates() {
        let (r1, r2) = (0.3, 0.8);
        for n in 1..6 {
            let c = gamma_set(n).covariance(r1, r2);
            for i in 0..2 * n {
                let want = if i % 2 == 0 { r1 } else { r2 };
                assert!((c[i][i + 1] - want).abs() < 1e-15);
                assert_eq!(c[i][i], 1.0);
            }
            // monotone path: covariance is the product of the steps between
            for i in 0..=2 * n {
                for j in i..=2 * n {
                    let prod: f64 = (i..j).map(|t| if t % 2 == 0 { r1 } else { r2 }).product();
                    assert!((c[i][j] - prod).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn delta_sizes() {
        assert_eq!(delta_region(0).len(), 1);
        let d1 = delta_region(1);
        assert_eq!(d1.len(), 4);
        for s in [[0, 0], [0, -1], [-1, -1], [-1, 0]] {
            assert!(d1.sites().contains(&Site::from(s)));
        }
        assert_eq!(delta_region(3).len(), 13);
        for n in 0..12 {
            assert_eq!(delta_region(n).len(), n * (n + 5) / 2 + 1);
        }
    }
}
