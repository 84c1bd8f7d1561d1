use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ChainModel, SpectralReport};
use crate::bits::qubit_mask;
use crate::error::{Error, Result};

pub const MAX_CONGESTION_SUPPORT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongestionReport {
    pub rho_gamma: f64,
    pub max_path_len: usize,
    /// Pairs whose block-flip path left the support and used a detour.
    pub detoured_pairs: u64,
    pub bottleneck: (u64, u64),
}

impl CongestionReport {
    /// 1 − λ1 ≥ 1/ρ(Γ) within `tol`.
    pub fn bound_holds(&self, spectral: &SpectralReport, tol: f64) -> bool {
        1.0 / self.rho_gamma <= spectral.gap + tol
    }
}

/// BFS tree rooted at `root`: parent pointers toward the root, neighbours
/// visited in ascending support index.
fn bfs_parents(chain: &ChainModel, root: usize) -> Vec<u32> {
    let mut parent = vec![u32::MAX; chain.len()];
    parent[root] = root as u32;
    let mut q = VecDeque::from([root]);
    while let Some(i) = q.pop_front() {
        for &(j, p) in &chain.rows[i] {
            if p > 0.0 && parent[j as usize] == u32::MAX {
                parent[j as usize] = i as u32;
                q.push_back(j as usize);
            }
        }
    }
    parent
}

fn loop_erase(path: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(path.len());
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for v in path {
        if let Some(&p) = pos.get(&v) {
            for u in out.drain(p + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// Canonical path from support index `a` to `b`: flip the differing bits in
/// ascending-position blocks of size ≤ k; if a block lands outside the
/// support, finish along the BFS geodesic toward `b`.
fn canonical_path(
    chain: &ChainModel,
    a: usize,
    b: usize,
    tree: &mut dyn FnMut(usize) -> std::sync::Arc<Vec<u32>>,
) -> (Vec<usize>, bool) {
    let n = chain.n;
    let (x, y) = (chain.support[a], chain.support[b]);
    let diff: Vec<usize> = (0..n).filter(|&q| (x ^ y) & qubit_mask(q, n) != 0).collect();
    let mut path = vec![a];
    let mut cur = x;
    let mut detoured = false;
    for block in diff.chunks(chain.k) {
        let m = block.iter().fold(0, |acc, &q| acc | qubit_mask(q, n));
        match chain.index_of(cur ^ m) {
            Some(j) => {
                cur ^= m;
                path.push(j);
            }
            None => {
                detoured = true;
                let parents = tree(b);
                let mut i = *path.last().expect("non-empty path");
                while i != b {
                    i = parents[i] as usize;
                    path.push(i);
                }
                break;
            }
        }
    }
    (loop_erase(path), detoured)
}

type EdgeLoads = HashMap<(u32, u32), f64>;

/// ρ(Γ) = max_e (1/Q(e)) Σ_{γ_xy ∋ e} π(x)π(y)|γ_xy| over unordered pairs.
pub fn congestion_bound(chain: &ChainModel) -> Result<CongestionReport> {
    let m = chain.len();
    if m > MAX_CONGESTION_SUPPORT {
        return Err(Error::SupportTooLarge {
            size: m,
            max: MAX_CONGESTION_SUPPORT,
        });
    }
    if !chain.is_connected() {
        return Err(Error::Disconnected);
    }
    let chunk = 64;
    let starts: Vec<usize> = (0..m).step_by(chunk).collect();
    let partial: Vec<(EdgeLoads, usize, u64)> = starts
        .par_iter()
        .map(|&s0| {
            let mut loads: EdgeLoads = HashMap::new();
            let mut trees: HashMap<usize, std::sync::Arc<Vec<u32>>> = HashMap::new();
            let mut max_len = 0;
            let mut detours = 0u64;
            for a in s0..(s0 + chunk).min(m) {
                for b in a + 1..m {
                    let mut tree = |root: usize| {
                        trees
                            .entry(root)
                            .or_insert_with(|| std::sync::Arc::new(bfs_parents(chain, root)))
                            .clone()
                    };
                    let (path, detoured) = canonical_path(chain, a, b, &mut tree);
                    detours += detoured as u64;
                    let len = path.len() - 1;
                    max_len = max_len.max(len);
                    let w = chain.pi[a] * chain.pi[b] * len as f64;
                    for e in path.windows(2) {
                        let key = (e[0].min(e[1]) as u32, e[0].max(e[1]) as u32);
                        *loads.entry(key).or_default() += w;
                    }
                }
            }
            (loads, max_len, detours)
        })
        .collect();
    let mut total: EdgeLoads = HashMap::new();
    let mut max_path_len = 0;
    let mut detoured_pairs = 0;
    for (loads, len, det) in partial {
        max_path_len = max_path_len.max(len);
        detoured_pairs += det;
        let mut keys: Vec<_> = loads.into_iter().collect();
        keys.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        for (k, v) in keys {
            *total.entry(k).or_default() += v;
        }
    }
    let mut edges: Vec<_> = total.into_iter().collect();
    edges.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut rho_gamma: f64 = 0.0;
    let mut bottleneck = (0, 0);
    for ((i, j), load) in edges {
        let q = chain.pi[i as usize] * chain.entry(i as usize, j as usize);
        let c = load / q;
        if c > rho_gamma {
            rho_gamma = c;
            bottleneck = (chain.support[i as usize], chain.support[j as usize]);
        }
    }
    Ok(CongestionReport {
        rho_gamma,
        max_path_len,
        detoured_pairs,
        bottleneck,
    })
}

/// τ ≤ ρ(Γ)(ln(1/π_min) + ln(1/ε)).
pub fn mixing_time_bound(rho_gamma: f64, pi_min: f64, eps: f64) -> f64 {
    rho_gamma * ((1.0 / pi_min).ln() + (1.0 / eps).ln())
}
