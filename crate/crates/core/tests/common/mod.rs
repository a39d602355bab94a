#![allow(dead_code)]

use edm::lattice::{Region, Site};
use edm::potential::{DimerPotential, Energy, Potential};
use rand::Rng;
use std::collections::BTreeMap;

/// Sum of Boltzmann weights by direct recursion over the site list: the
/// first site is a monomer or bonds to any later site.
pub fn brute_force_z(region: &Region, potential: &Potential) -> f64 {
    fn go(sites: &[Site], potential: &Potential) -> f64 {
        let Some((first, rest)) = sites.split_first() else { return 1.0 };
        let beta = potential.beta();
        let mut total = potential.monomer_energy().boltzmann(beta) * go(rest, potential);
        for i in 0..rest.len() {
            let w = potential.dimer_energy(&first.sub(&rest[i])).boltzmann(beta);
            if w != 0.0 {
                let mut others = rest.to_vec();
                others.remove(i);
                total += w * go(&others, potential);
            }
        }
        total
    }
    go(region.sites(), potential)
}

/// `E prod (mean + s_i)` by expanding over partial pairings, one site at a time.
pub fn pairing_moment(mean: f64, cov: &[Vec<f64>]) -> f64 {
    fn go(idx: &[usize], mean: f64, cov: &[Vec<f64>]) -> f64 {
        let Some((&first, rest)) = idx.split_first() else { return 1.0 };
        let mut total = mean * go(rest, mean, cov);
        for (k, &j) in rest.iter().enumerate() {
            let mut others = rest.to_vec();
            others.remove(k);
            total += cov[first][j] * go(&others, mean, cov);
        }
        total
    }
    let idx: Vec<usize> = (0..cov.len()).collect();
    go(&idx, mean, cov)
}

/// Domino tilings of a `w x h` board by filling the first empty cell.
pub fn domino_tilings(w: usize, h: usize) -> u64 {
    fn go(board: &mut Vec<bool>, w: usize, h: usize) -> u64 {
        let Some(pos) = board.iter().position(|&b| !b) else { return 1 };
        let (x, y) = (pos % w, pos / w);
        let mut count = 0;
        board[pos] = true;
        if x + 1 < w && !board[pos + 1] {
            board[pos + 1] = true;
            count += go(board, w, h);
            board[pos + 1] = false;
        }
        if y + 1 < h && !board[pos + w] {
            board[pos + w] = true;
            count += go(board, w, h);
            board[pos + w] = false;
        }
        board[pos] = false;
        count
    }
    go(&mut vec![false; w * h], w, h)
}

/// Number of partial matchings of `n` labelled points, by listing them.
pub fn matchings_by_listing(n: usize) -> u64 {
    fn go(free: Vec<usize>) -> u64 {
        let Some((&a, rest)) = free.split_first() else { return 1 };
        let mut c = go(rest.to_vec());
        for k in 0..rest.len() {
            let mut others = rest.to_vec();
            others.remove(k);
            c += go(others);
        }
        let _ = a;
        c
    }
    go((0..n).collect())
}

/// Random region of `n` distinct sites inside a box of side `side`.
pub fn random_region(rng: &mut impl Rng, dimension: usize, n: usize, side: i64) -> Region {
    assert!((side as f64).powi(dimension as i32) >= n as f64, "box too small for {n} sites");
    let mut sites = std::collections::BTreeSet::new();
    while sites.len() < n {
        sites.insert(Site((0..dimension).map(|_| rng.gen_range(0..side)).collect::<Vec<_>>()));
    }
    Region::new(dimension, sites.into_iter().collect()).unwrap()
}

/// Symmetric table potential with support in the box of the given radius whose
/// origin weight dominates the rest, so the matching field exists.
pub fn random_admissible_table(rng: &mut impl Rng, dimension: usize, radius: i64) -> Potential {
    let beta = rng.gen_range(0.5..2.0);
    let mut entries = BTreeMap::new();
    let mut total = 0.0;
    let mut z = vec![-radius; dimension];
    loop {
        let site = Site(z.clone());
        if !site.is_origin() && site.neg() > site {
            let energy = if rng.gen_bool(0.15) { Energy::Infinite } else { Energy::Finite(rng.gen_range(-0.5..3.0)) };
            total += 2.0 * energy.boltzmann(beta);
            entries.insert(site.neg(), energy);
            entries.insert(site, energy);
        }
        let mut k = 0;
        loop {
            if k == dimension {
                let c0 = total * rng.gen_range(1.0..1.5) + 1e-3;
                entries.insert(Site::origin(dimension), Energy::from_boltzmann(c0, beta));
                let v = if rng.gen_bool(0.1) { Energy::Infinite } else { Energy::Finite(rng.gen_range(-1.0..2.0)) };
                return Potential::new(v, DimerPotential::Table { dimension, entries }, beta).unwrap();
            }
            z[k] += 1;
            if z[k] <= radius {
                break;
            }
            z[k] = -radius;
            k += 1;
        }
    }
}

pub fn covariance_matrix(kernel: &edm::kernel::GaussianKernel, region: &Region) -> Vec<Vec<f64>> {
    let s = region.sites();
    s.iter().map(|a| s.iter().map(|b| kernel.covariance(&b.sub(a))).collect()).collect()
}
