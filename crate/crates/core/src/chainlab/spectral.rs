use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ChainModel;
use crate::error::{invalid, Result};
use crate::linalg::{highest_eigenpair, lowest_eigenpair, sorted_symmetric_eigen, LanczosOptions};

/// Supports up to this size use a dense symmetric eigensolve.
pub const DENSE_SPECTRAL_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    Dense,
    SparseIterative,
    Connectivity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Second-largest eigenvalue of P.
    pub lambda1: f64,
    pub gap: f64,
    /// 1/gap; infinite for reducible chains.
    pub tau: f64,
    /// Smallest eigenvalue of P, when computed.
    pub lambda_min: Option<f64>,
    /// 1 − max(λ1, |λ_min|).
    pub abs_gap: Option<f64>,
    pub connected: bool,
    pub method: SpectralMethod,
}

impl SpectralReport {
    fn from_values(lambda1: f64, lambda_min: f64, method: SpectralMethod) -> Self {
        let lambda1 = lambda1.min(1.0);
        let gap = (1.0 - lambda1).max(0.0);
        Self {
            lambda1,
            gap,
            tau: if gap > 0.0 { 1.0 / gap } else { f64::INFINITY },
            lambda_min: Some(lambda_min),
            abs_gap: Some(1.0 - lambda1.max(lambda_min.abs())),
            connected: true,
            method,
        }
    }
}

pub fn dense_symmetrized(chain: &ChainModel) -> DMatrix<f64> {
    let sq = chain.sqrt_pi();
    let m = chain.len();
    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = chain.diag[i];
        for &(j, p) in &chain.rows[i] {
            a[(i, j as usize)] = p * sq[i] / sq[j as usize];
        }
    }
    // symmetrise rounding noise
    (&a + a.transpose()) * 0.5
}

pub fn spectral_gap(chain: &ChainModel) -> Result<SpectralReport> {
    let m = chain.len();
    if m < 2 {
        return Err(invalid(format!("spectral gap needs support ≥ 2, got {m}")));
    }
    if !chain.is_connected() {
        return Ok(SpectralReport {
            lambda1: 1.0,
            gap: 0.0,
            tau: f64::INFINITY,
            lambda_min: None,
            abs_gap: Some(0.0),
            connected: false,
            method: SpectralMethod::Connectivity,
        });
    }
    if m <= DENSE_SPECTRAL_LIMIT {
        let (vals, _) = sorted_symmetric_eigen(dense_symmetrized(chain));
        return Ok(SpectralReport::from_values(vals[m - 2], vals[0], SpectralMethod::Dense));
    }
    let mut top = chain.sqrt_pi();
    let nrm = top.iter().map(|v| v * v).sum::<f64>().sqrt();
    top.iter_mut().for_each(|v| *v /= nrm);
    let opts = LanczosOptions {
        tol: 1e-10,
        krylov: 150,
        ..Default::default()
    };
    let apply = |v: &[f64], y: &mut [f64]| chain.apply_symmetrized(v, y);
    let l1 = highest_eigenpair(apply, m, &[top], &opts)?;
    let lmin = lowest_eigenpair(apply, m, &[], &opts)?;
    Ok(SpectralReport::from_values(l1.value, lmin.value, SpectralMethod::SparseIterative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainlab::{build_chain, build_chain_with, Kernel, SUPPORT_TOL};
    use crate::oracle::AmplitudeOracle;
    use crate::statekit::{make_ghz, make_haar_random, make_uniform, make_w};

    #[test]
    fn two_state_gap() {
        let o = AmplitudeOracle::from_pure_state(&make_uniform(1).unwrap());
        let r = spectral_gap(&build_chain(&o, 1, SUPPORT_TOL).unwrap()).unwrap();
        assert!(r.lambda1.abs() < 1e-14);
        assert!((r.tau - 1.0).abs() < 1e-12);
    }

    #[test]
    fn structural_disconnections() {
        let g = AmplitudeOracle::from_pure_state(&make_ghz(5).unwrap());
        let r = spectral_gap(&build_chain(&g, 1, SUPPORT_TOL).unwrap()).unwrap();
        assert!(!r.connected && r.gap == 0.0 && r.tau.is_infinite());
        let w = AmplitudeOracle::from_pure_state(&make_w(6).unwrap());
        assert_eq!(spectral_gap(&build_chain(&w, 1, SUPPORT_TOL).unwrap()).unwrap().gap, 0.0);
        assert!(spectral_gap(&build_chain(&w, 2, SUPPORT_TOL).unwrap()).unwrap().gap > 0.0);
    }

    #[test]
    fn iterative_matches_dense() {
        let o = AmplitudeOracle::from_pure_state(&make_haar_random(11, 5).unwrap());
        for kernel in [Kernel::Pairwise, Kernel::Block] {
            let c = build_chain_with(&o, 2, SUPPORT_TOL, kernel).unwrap();
            let it = spectral_gap(&c).unwrap();
            assert_eq!(it.method, SpectralMethod::SparseIterative);
            let (vals, _) = sorted_symmetric_eigen(dense_symmetrized(&c));
            let m = vals.len();
            assert!((vals[m - 1] - 1.0).abs() < 1e-10);
            assert!((it.lambda1 - vals[m - 2]).abs() < 1e-9, "{} vs {}", it.lambda1, vals[m - 2]);
            assert!((it.lambda_min.unwrap() - vals[0]).abs() < 1e-9);
        }
    }
}
