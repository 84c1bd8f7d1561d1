//! Two-sided bounds on the Uhlmann fidelity with a mixed target
//! σ = Σ p_i |ψ_i⟩⟨ψ_i| from per-component pure-state fidelities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimator::estimate_multi;
use crate::oracle::AmplitudeOracle;
use crate::shadowmeas::ShadowRecord;

pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this are rounding noise and are zeroed before square roots.
const ZERO_EIG: f64 = 1e-13;

fn root(v: f64) -> f64 {
    if v < ZERO_EIG {
        0.0
    } else {
        v.sqrt()
    }
}

pub struct MixedTarget {
    pub components: Vec<(f64, AmplitudeOracle)>,
}

impl MixedTarget {
    pub fn new(components: Vec<(f64, AmplitudeOracle)>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("mixed target needs at least one component"));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.iter().any(|c| c.0 < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("weights must be non-negative and sum to 1 (sum {total})")));
        }
        let n = components[0].1.n();
        if components.iter().any(|c| c.1.n() != n) {
            return Err(invalid("components differ in qubit count"));
        }
        Ok(Self { components })
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityBounds {
    pub lower: f64,
    pub upper: f64,
    /// Number of inputs clamped into [0, 1].
    pub clamped: usize,
}

/// (Σ p_i √f_i)² ≤ F(ρ, σ) ≤ (Σ √(p_i f_i))².
pub fn fidelity_bounds(f: &[f64], p: &[f64]) -> Result<FidelityBounds> {
    if f.len() != p.len() || f.is_empty() {
        return Err(invalid("f and p must be non-empty and of equal length"));
    }
    let total: f64 = p.iter().sum();
    if p.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(invalid("p must be a probability vector"));
    }
    let mut clamped = 0;
    let fc: Vec<f64> = f
        .iter()
        .map(|&v| {
            let c = v.clamp(0.0, 1.0);
            if c != v {
                clamped += 1;
            }
            c
        })
        .collect();
    let lower = fc.iter().zip(p).map(|(f, p)| p * f.sqrt()).sum::<f64>().powi(2);
    let upper = fc.iter().zip(p).map(|(f, p)| (p * f).sqrt()).sum::<f64>().powi(2);
    Ok(FidelityBounds { lower, upper, clamped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixedVerdict {
    Above,
    Below,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEstimate {
    pub p: f64,
    pub f: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedCertificate {
    pub lower: f64,
    pub upper: f64,
    pub threshold: f64,
    pub verdict: MixedVerdict,
    pub per_component: Vec<ComponentEstimate>,
    /// Standard errors of widening applied to each f_i before bounding.
    pub widening: f64,
    pub clamped: usize,
}

/// Verdict from `lower > threshold` / `upper < threshold`, where the bounds
/// use f_i ∓ widening·stderr_i. The records are shared by all components.
pub fn certify_mixed(
    records: &[ShadowRecord],
    target: &MixedTarget,
    k: usize,
    threshold: f64,
    widening: f64,
) -> Result<MixedCertificate> {
    let oracles: Vec<&AmplitudeOracle> = target.components.iter().map(|c| &c.1).collect();
    let ests = estimate_multi(records, &oracles, k)?;
    let p = target.weights();
    let f_lo: Vec<f64> = ests.iter().map(|e| e.f_hat - widening * e.stderr).collect();
    let f_hi: Vec<f64> = ests.iter().map(|e| e.f_hat + widening * e.stderr).collect();
    let lo = fidelity_bounds(&f_lo, &p)?;
    let hi = fidelity_bounds(&f_hi, &p)?;
    let verdict = if lo.lower > threshold {
        MixedVerdict::Above
    } else if hi.upper < threshold {
        MixedVerdict::Below
    } else {
        MixedVerdict::Inconclusive
    };
    Ok(MixedCertificate {
        lower: lo.lower,
        upper: hi.upper,
        threshold,
        verdict,
        per_component: ests
            .iter()
            .zip(&p)
            .map(|(e, &p)| ComponentEstimate {
                p,
                f: e.f_hat,
                stderr: e.stderr,
            })
            .collect(),
        widening,
        clamped: lo.clamped + hi.clamped,
    })
}

/// Hermitian square root of a PSD matrix; eigenvalues down to −1e-10 are
/// treated as zero.
pub fn sqrtm_psd(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(root(v), 0.0)));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

fn check_dense(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> Result<()> {
    if rho.shape() != sigma.shape() || rho.nrows() != rho.ncols() {
        return Err(invalid("density matrices must be square and of equal size"));
    }
    if rho.nrows() > 1 << 8 {
        return Err(Error::DenseTooLarge {
            n: rho.nrows().trailing_zeros() as usize,
            max: 8,
        });
    }
    Ok(())
}

/// F(ρ, σ) = ‖√ρ √σ‖₁² via singular values.
pub fn uhlmann_exact(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> Result<f64> {
    check_dense(rho, sigma)?;
    let prod = sqrtm_psd(rho)? * sqrtm_psd(sigma)?;
    let sv = prod.singular_values();
    Ok(sv.iter().sum::<f64>().powi(2))
}

/// F(ρ, σ) = (Tr √(√ρ σ √ρ))² via a second eigen-decomposition.
pub fn uhlmann_via_eigen(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> Result<f64> {
    check_dense(rho, sigma)?;
    let sr = sqrtm_psd(rho)?;
    let inner = &sr * sigma * &sr;
    let herm = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
    let tr: f64 = herm
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&v| root(v))
        .sum();
    Ok(tr * tr)
}

/// (Σ √(r_i p_i))², the fidelity of two states diagonal in a common basis.
pub fn bhattacharyya(r: &[f64], p: &[f64]) -> f64 {
    r.iter().zip(p).map(|(a, b)| (a * b).sqrt()).sum::<f64>().powi(2)
}

/// Σ p_i |ψ_i⟩⟨ψ_i| from amplitude vectors.
pub fn mixture_density(components: &[(f64, &[Complex64])]) -> DMatrix<Complex64> {
    let dim = components[0].1.len();
    let mut m = DMatrix::zeros(dim, dim);
    for &(p, a) in components {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += a[i] * a[j].conj() * p;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{make_basis, make_haar_random};

    #[test]
    fn bounds_examples() {
        let b = fidelity_bounds(&[0.7], &[1.0]).unwrap();
        assert!((b.lower - 0.7).abs() < 1e-15 && (b.upper - 0.7).abs() < 1e-15);
        let b = fidelity_bounds(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-15 && (b.upper - 0.5).abs() < 1e-15);
        let b = fidelity_bounds(&[1.2, -0.1], &[0.5, 0.5]).unwrap();
        assert_eq!(b.clamped, 2);
    }

    #[test]
    fn orthogonal_components_hit_upper_bound() {
        let a = make_basis(2, 0).unwrap();
        let b = make_basis(2, 3).unwrap();
        let rho = mixture_density(&[(1.0, a.amplitudes())]);
        let sigma = mixture_density(&[(0.5, a.amplitudes()), (0.5, b.amplitudes())]);
        assert!((uhlmann_exact(&rho, &sigma).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_routes_agree() {
        let s: Vec<_> = (0..4).map(|i| make_haar_random(3, i).unwrap()).collect();
        let rho = mixture_density(&[(0.6, s[0].amplitudes()), (0.4, s[1].amplitudes())]);
        let sigma = mixture_density(&[(0.3, s[2].amplitudes()), (0.7, s[3].amplitudes())]);
        let a = uhlmann_exact(&rho, &sigma).unwrap();
        let b = uhlmann_via_eigen(&rho, &sigma).unwrap();
        let c = uhlmann_exact(&sigma, &rho).unwrap();
        assert!((a - b).abs() < 1e-9 && (a - c).abs() < 1e-9, "{a} {b} {c}");
        assert!((uhlmann_exact(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let pure = mixture_density(&[(1.0, s[0].amplitudes())]);
        let pure2 = mixture_density(&[(1.0, s[1].amplitudes())]);
        assert!((uhlmann_exact(&pure, &pure2).unwrap() - s[0].fidelity(&s[1])).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_psd() {
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        m[(1, 1)] = Complex64::new(-0.1, 0.0);
        assert!(matches!(sqrtm_psd(&m), Err(Error::NotPsd { .. })));
    }
}
