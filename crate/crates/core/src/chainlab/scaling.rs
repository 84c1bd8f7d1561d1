use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_chain_with, congestion_bound, spectral_gap, Kernel, SUPPORT_TOL};
use crate::error::Result;
use crate::oracle::AmplitudeOracle;
use crate::statekit::PureState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub seed: u64,
    pub tau: f64,
    pub rho_gamma: Option<f64>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub n: usize,
    pub mean_tau: f64,
    pub max_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub k: usize,
    pub rows: Vec<ScalingRow>,
    pub summary: Vec<ScalingSummary>,
    /// Least-squares slope of ln(mean τ) against ln n over finite means.
    pub exponent: Option<f64>,
    pub all_finite: bool,
}

pub const SCALING_CSV_HEADER: &str = "n,seed,tau,rho_gamma,gap";

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCALING_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let rg = r.rho_gamma.map(|v| format!("{v:.10e}")).unwrap_or_default();
            out.push_str(&format!("{},{},{:.10e},{},{:.10e}\n", r.n, r.seed, r.tau, rg, r.gap));
        }
        out
    }
}

/// Least-squares slope of y on x.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Exact τ of the pairwise chain for every (n, seed); optional congestion
/// for supports within the all-pairs limit.
pub fn scaling_study<F>(
    family: F,
    n_range: &[usize],
    k: usize,
    seeds: &[u64],
    with_congestion: bool,
) -> Result<ScalingTable>
where
    F: Fn(usize, u64) -> Result<PureState> + Sync,
{
    let grid: Vec<(usize, u64)> = n_range
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let rows: Vec<ScalingRow> = grid
        .par_iter()
        .map(|&(n, seed)| {
            let psi = family(n, seed)?;
            let oracle = AmplitudeOracle::from_pure_state(&psi);
            let chain = build_chain_with(&oracle, k, SUPPORT_TOL, Kernel::Pairwise)?;
            let spec = spectral_gap(&chain)?;
            let rho_gamma = if with_congestion && spec.connected && chain.len() <= super::MAX_CONGESTION_SUPPORT {
                Some(congestion_bound(&chain)?.rho_gamma)
            } else {
                None
            };
            Ok(ScalingRow {
                n,
                seed,
                tau: spec.tau,
                rho_gamma,
                gap: spec.gap,
            })
        })
        .collect::<Result<_>>()?;
    let summary: Vec<ScalingSummary> = n_range
        .iter()
        .map(|&n| {
            let taus: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.tau).collect();
            ScalingSummary {
                n,
                mean_tau: taus.iter().sum::<f64>() / taus.len() as f64,
                max_tau: taus.iter().cloned().fold(0.0, f64::max),
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = summary
        .iter()
        .filter(|s| s.mean_tau.is_finite())
        .map(|s| (s.n as f64, s.mean_tau))
        .collect();
    Ok(ScalingTable {
        k,
        all_finite: rows.iter().all(|r| r.tau.is_finite()),
        exponent: loglog_slope(&pts),
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::make_dicke;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, 3.0 * (n as f64).powi(2))).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dicke_scaling_is_finite() {
        let t = scaling_study(|n, _| make_dicke(n, n / 2), &[4, 6, 8], 2, &[0], true).unwrap();
        assert!(t.all_finite);
        assert!(t.to_csv().starts_with(SCALING_CSV_HEADER));
        // τ grows with n
        assert!(t.summary[2].mean_tau > t.summary[0].mean_tau);
        assert!(t.rows.iter().all(|r| r.rho_gamma.is_some()));
    }
}
