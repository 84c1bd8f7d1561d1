use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{ball_size, binomial, combinations, flip_masks, subset_mask};
use crate::error::{invalid, Error, Result};
use crate::oracle::AmplitudeOracle;

pub const SUPPORT_TOL: f64 = 1e-12;
pub const MAX_SUPPORT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    Pairwise,
    Block,
}

/// Sparse reversible kernel over supp(π). Rows hold off-diagonal entries
/// sorted by column; the diagonal is kept separately.
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub n: usize,
    pub k: usize,
    pub kernel: Kernel,
    pub support: Vec<u64>,
    pub pi: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    /// Σ_{r=1}^{k} C(n, r).
    pub neighbor_count: u64,
    pub rows: Vec<Vec<(u32, f64)>>,
    pub diag: Vec<f64>,
    index: HashMap<u64, u32>,
}

impl ChainModel {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.index.get(&x).map(|&i| i as usize)
    }

    /// P(x, y) for support indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let row = &self.rows[i];
        match row.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(p) => row[p].1,
            Err(_) => 0.0,
        }
    }

    pub fn pi_min(&self) -> f64 {
        self.pi.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// y = S^{1/2} P S^{-1/2} v (symmetric).
    pub fn apply_symmetrized(&self, v: &[f64], y: &mut [f64]) {
        let sq: &[f64] = &self.sqrt_pi();
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut acc = self.diag[i] * v[i];
            for &(j, p) in &self.rows[i] {
                acc += p * sq[i] / sq[j as usize] * v[j as usize];
            }
            *yi = acc;
        });
    }

    pub fn sqrt_pi(&self) -> Vec<f64> {
        self.pi.iter().map(|p| p.sqrt()).collect()
    }

    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.diag[i] + self.rows[i].iter().map(|e| e.1).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_detailed_balance_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for &(j, p) in &self.rows[i] {
                let back = self.entry(j as usize, i);
                worst = worst.max((self.pi[i] * p - self.pi[j as usize] * back).abs());
            }
        }
        worst
    }

    /// max_y |(πP)(y) − π(y)|.
    pub fn max_stationarity_error(&self) -> f64 {
        let mut out: Vec<f64> = self.pi.iter().zip(&self.diag).map(|(p, d)| p * d).collect();
        for i in 0..self.len() {
            for &(j, p) in &self.rows[i] {
                out[j as usize] += self.pi[i] * p;
            }
        }
        out.iter().zip(&self.pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Connected components of the transition graph, by BFS.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(i) = stack.pop() {
                for &(j, p) in &self.rows[i] {
                    if p > 0.0 && !seen[j as usize] {
                        seen[j as usize] = true;
                        stack.push(j as usize);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }
}

/// The pairwise heat-bath kernel.
pub fn build_chain(oracle: &AmplitudeOracle, k: usize, tol: f64) -> Result<ChainModel> {
    build_chain_with(oracle, k, tol, Kernel::Pairwise)
}

pub fn build_chain_with(oracle: &AmplitudeOracle, k: usize, tol: f64, kernel: Kernel) -> Result<ChainModel> {
    let n = oracle.n();
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let amps_all = oracle.query_all()?;
    let mut support = Vec::new();
    let mut amplitudes = Vec::new();
    let mut pi = Vec::new();
    for (x, a) in amps_all.iter().enumerate() {
        if a.norm_sqr() > tol {
            support.push(x as u64);
            amplitudes.push(*a);
            pi.push(a.norm_sqr());
        }
    }
    if support.len() > MAX_SUPPORT {
        return Err(Error::SupportTooLarge {
            size: support.len(),
            max: MAX_SUPPORT,
        });
    }
    let index: HashMap<u64, u32> = support.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let neighbor_count = ball_size(n, k);
    let rows: Vec<Vec<(u32, f64)>> = match kernel {
        Kernel::Pairwise => {
            let masks = flip_masks(n, k);
            let inv_n = 1.0 / neighbor_count as f64;
            support
                .par_iter()
                .enumerate()
                .map(|(i, &x)| {
                    let mut row: Vec<(u32, f64)> = masks
                        .iter()
                        .filter_map(|&m| {
                            index.get(&(x ^ m)).map(|&j| {
                                let pj = pi[j as usize];
                                (j, inv_n * pj / (pi[i] + pj))
                            })
                        })
                        .collect();
                    row.sort_unstable_by_key(|e| e.0);
                    row
                })
                .collect()
        }
        Kernel::Block => {
            let blocks: Vec<u64> = combinations(n, k).iter().map(|c| subset_mask(c, n)).collect();
            let inv_b = 1.0 / binomial(n, k) as f64;
            let subs: Vec<Vec<u64>> = blocks.iter().map(|&b| submasks(b)).collect();
            support
                .par_iter()
                .enumerate()
                .map(|(_, &x)| {
                    let mut acc: HashMap<u32, f64> = HashMap::new();
                    for sub in &subs {
                        let w: f64 = sub.iter().map(|&u| amps_all[(x ^ u) as usize].norm_sqr()).sum();
                        for &u in sub.iter().filter(|&&u| u != 0) {
                            if let Some(&j) = index.get(&(x ^ u)) {
                                *acc.entry(j).or_default() += inv_b * pi[j as usize] / w;
                            }
                        }
                    }
                    let mut row: Vec<(u32, f64)> = acc.into_iter().collect();
                    row.sort_unstable_by_key(|e| e.0);
                    row
                })
                .collect()
        }
    };
    let diag = rows
        .iter()
        .map(|r| 1.0 - r.iter().map(|e| e.1).sum::<f64>())
        .collect();
    Ok(ChainModel {
        n,
        k,
        kernel,
        support,
        pi,
        amplitudes,
        neighbor_count,
        rows,
        diag,
        index,
    })
}

/// All submasks of `m`, including 0.
pub(crate) fn submasks(m: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut s = m;
    while s != 0 {
        out.push(s);
        s = (s - 1) & m;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{make_haar_random, make_uniform, make_w};

    #[test]
    fn two_state_chain() {
        let o = AmplitudeOracle::from_pure_state(&make_uniform(1).unwrap());
        let c = build_chain(&o, 1, SUPPORT_TOL).unwrap();
        assert_eq!(c.neighbor_count, 1);
        assert!((c.entry(0, 1) - 0.5).abs() < 1e-15);
        assert!((c.entry(0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn w3_k2_entries() {
        let o = AmplitudeOracle::from_pure_state(&make_w(3).unwrap());
        let c = build_chain(&o, 2, SUPPORT_TOL).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.neighbor_count, 6);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 5.0 / 6.0 } else { 1.0 / 12.0 };
                assert!((c.entry(i, j) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn kernels_are_reversible_and_agree_at_k1() {
        let o = AmplitudeOracle::from_pure_state(&make_haar_random(6, 4).unwrap());
        for kernel in [Kernel::Pairwise, Kernel::Block] {
            for k in 1..=3 {
                let c = build_chain_with(&o, k, SUPPORT_TOL, kernel).unwrap();
                assert!(c.max_row_sum_error() < 1e-12);
                assert!(c.max_detailed_balance_error() < 1e-12);
                assert!(c.max_stationarity_error() < 1e-12);
                assert!(c.diag.iter().all(|&d| d >= -1e-15));
            }
        }
        let a = build_chain_with(&o, 1, SUPPORT_TOL, Kernel::Pairwise).unwrap();
        let b = build_chain_with(&o, 1, SUPPORT_TOL, Kernel::Block).unwrap();
        for i in 0..a.len() {
            for j in 0..a.len() {
                assert!((a.entry(i, j) - b.entry(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn submask_enumeration() {
        assert_eq!(submasks(0b101), vec![0, 0b001, 0b100, 0b101]);
    }
}
