use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{PureState, MAX_DENSE_QUBITS};
use crate::error::{invalid, Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// ρ = (1 − p)|ψ⟩⟨ψ| + p I/2^n
    White,
    /// RY(θ) on every qubit, θ = strength.
    Coherent,
    /// Computational-basis dephasing ρ = (1 − p)|ψ⟩⟨ψ| + p diag(|ψ|²).
    Dephasing,
    /// Independent phase flip ρ → (1 − p)ρ + p ZρZ on every qubit.
    LocalDephasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub strength: f64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, strength: f64) -> Result<Self> {
        let s = Self { model, strength };
        s.validate()?;
        Ok(s)
    }

    pub fn none() -> Self {
        Self { model: NoiseModel::White, strength: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            NoiseModel::Coherent if self.strength.is_finite() => Ok(()),
            NoiseModel::Coherent => Err(invalid("coherent angle must be finite")),
            _ if (0.0..=1.0).contains(&self.strength) => Ok(()),
            _ => Err(invalid(format!("noise strength {} outside [0, 1]", self.strength))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisyKind {
    Pure,
    WhiteMixture,
    TrajectoryEnsemble,
    DenseDensity,
}

/// A lab state. The dense form, when present, also stores its eigen-mixture
/// so that measurement rounds can draw a pure component directly.
#[derive(Debug, Clone)]
pub struct NoisyState {
    kind: NoisyKind,
    base: PureState,
    noise: Option<NoiseSpec>,
    prepared: PureState,
    base_cdf: Option<Vec<f64>>,
    density: Option<DMatrix<Complex64>>,
    mixture: Vec<(f64, PureState)>,
}

/// One pure component drawn from a lab state's ensemble.
#[derive(Debug)]
pub enum Branch<'a> {
    State(&'a PureState),
    Owned(PureState),
    /// Maximally mixed component: every outcome uniform.
    Uniform,
    /// A computational basis state.
    Basis(u64),
}

pub fn cumulative(p: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    p.map(|v| {
        acc += v;
        acc
    })
    .collect()
}

/// Index drawn from a cumulative weight vector.
pub fn sample_cdf(cdf: &[f64], rng: &mut Rng) -> usize {
    let total = *cdf.last().expect("non-empty cdf");
    let u = rng.random::<f64>() * total;
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

pub fn apply_noise(psi: &PureState, spec: NoiseSpec) -> Result<NoisyState> {
    spec.validate()?;
    let n = psi.n();
    let (kind, prepared, base_cdf) = match spec.model {
        NoiseModel::White => (NoisyKind::WhiteMixture, psi.clone(), None),
        NoiseModel::Coherent => {
            let mut s = psi.clone();
            for q in 0..n {
                s.apply_ry(q, spec.strength);
            }
            (NoisyKind::Pure, s, None)
        }
        NoiseModel::Dephasing => (
            NoisyKind::TrajectoryEnsemble,
            psi.clone(),
            Some(cumulative(psi.amplitudes().iter().map(|a| a.norm_sqr()))),
        ),
        NoiseModel::LocalDephasing => (NoisyKind::TrajectoryEnsemble, psi.clone(), None),
    };
    Ok(NoisyState {
        kind,
        base: psi.clone(),
        noise: Some(spec),
        prepared,
        base_cdf,
        density: None,
        mixture: Vec::new(),
    })
}

fn outer(v: &PureState) -> DMatrix<Complex64> {
    let a = v.amplitudes();
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj())
}

fn check_dense(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        Err(Error::DenseTooLarge { n, max: MAX_DENSE_QUBITS })
    } else {
        Ok(())
    }
}

impl NoisyState {
    pub fn pure(psi: &PureState) -> Self {
        apply_noise(psi, NoiseSpec::none()).expect("zero white noise is valid")
    }

    /// Lab state given directly as a density matrix (n ≤ 10).
    pub fn from_density(n: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        check_dense(n)?;
        if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
            return Err(invalid("density matrix has wrong shape"));
        }
        let mixture = eigen_mixture(n, &rho)?;
        let base = mixture
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|m| m.1.clone())
            .expect("non-empty mixture");
        let cdf = cumulative(mixture.iter().map(|m| m.0));
        let mixture = mixture
            .into_iter()
            .zip(cdf)
            .map(|((_, s), c)| (c, s))
            .collect();
        Ok(Self {
            kind: NoisyKind::DenseDensity,
            prepared: base.clone(),
            base,
            noise: None,
            base_cdf: None,
            density: Some(rho),
            mixture,
        })
    }

    pub fn kind(&self) -> NoisyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn noise(&self) -> Option<NoiseSpec> {
        self.noise
    }

    /// Dense ρ, built on demand (n ≤ 10).
    pub fn density(&self) -> Result<DMatrix<Complex64>> {
        if let Some(d) = &self.density {
            return Ok(d.clone());
        }
        let n = self.n();
        check_dense(n)?;
        let spec = self.noise.unwrap_or(NoiseSpec::none());
        let p = spec.strength;
        let dim = 1usize << n;
        let b = self.base.amplitudes();
        Ok(match spec.model {
            NoiseModel::White => {
                let mut m = outer(&self.base) * Complex64::new(1.0 - p, 0.0);
                for i in 0..dim {
                    m[(i, i)] += p / dim as f64;
                }
                m
            }
            NoiseModel::Coherent => outer(&self.prepared),
            NoiseModel::Dephasing => {
                let mut m = outer(&self.base) * Complex64::new(1.0 - p, 0.0);
                for i in 0..dim {
                    m[(i, i)] += p * b[i].norm_sqr();
                }
                m
            }
            NoiseModel::LocalDephasing => DMatrix::from_fn(dim, dim, |i, j| {
                let d = ((i ^ j) as u64).count_ones() as i32;
                b[i] * b[j].conj() * (1.0 - 2.0 * p).powi(d)
            }),
        })
    }

    /// Same state carrying its dense density and eigen-mixture.
    pub fn to_dense(&self) -> Result<Self> {
        let mut d = Self::from_density(self.n(), self.density()?)?;
        d.base = self.base.clone();
        d.noise = self.noise;
        Ok(d)
    }

    /// Exact ⟨ψ|ρ|ψ⟩.
    pub fn true_fidelity(&self, psi: &PureState) -> Result<f64> {
        if psi.n() != self.n() {
            return Err(invalid("target and lab state differ in qubit count"));
        }
        if let Some(rho) = &self.density {
            let a = psi.amplitudes();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..a.len() {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..a.len() {
                    row += rho[(i, j)] * a[j];
                }
                acc += a[i].conj() * row;
            }
            return Ok(acc.re);
        }
        let spec = self.noise.unwrap_or(NoiseSpec::none());
        let p = spec.strength;
        let overlap = psi.fidelity(&self.base);
        let dim = psi.dim() as f64;
        Ok(match spec.model {
            NoiseModel::White => (1.0 - p) * overlap + p / dim,
            NoiseModel::Coherent => psi.fidelity(&self.prepared),
            NoiseModel::Dephasing => {
                let diag: f64 = psi
                    .amplitudes()
                    .iter()
                    .zip(self.base.amplitudes())
                    .map(|(t, b)| t.norm_sqr() * b.norm_sqr())
                    .sum();
                (1.0 - p) * overlap + p * diag
            }
            NoiseModel::LocalDephasing => local_dephasing_fidelity(psi, &self.base, p),
        })
    }

    /// Alias used by tests mirroring the mixture definition.
    pub fn fidelity_vs(&self, psi: &PureState) -> Result<f64> {
        self.true_fidelity(psi)
    }

    /// Computational-basis distribution ⟨x|ρ|x⟩. Both dephasing channels
    /// leave it equal to that of the base state.
    pub fn z_distribution(&self) -> Vec<f64> {
        if let Some(d) = &self.density {
            return (0..d.nrows()).map(|i| d[(i, i)].re.max(0.0)).collect();
        }
        let spec = self.noise.unwrap_or(NoiseSpec::none());
        match spec.model {
            NoiseModel::Coherent => self.prepared.probabilities(),
            NoiseModel::White => {
                let u = spec.strength / self.base.dim() as f64;
                self.base
                    .probabilities()
                    .into_iter()
                    .map(|q| (1.0 - spec.strength) * q + u)
                    .collect()
            }
            NoiseModel::Dephasing | NoiseModel::LocalDephasing => self.base.probabilities(),
        }
    }

    /// Draw one pure component of the ensemble.
    pub fn sample_branch(&self, rng: &mut Rng) -> Branch<'_> {
        if self.kind == NoisyKind::DenseDensity {
            let cdf: Vec<f64> = self.mixture.iter().map(|m| m.0).collect();
            return Branch::State(&self.mixture[sample_cdf(&cdf, rng)].1);
        }
        let spec = self.noise.unwrap_or(NoiseSpec::none());
        let p = spec.strength;
        match spec.model {
            NoiseModel::Coherent => Branch::State(&self.prepared),
            NoiseModel::White => {
                if p > 0.0 && rng.random::<f64>() < p {
                    Branch::Uniform
                } else {
                    Branch::State(&self.base)
                }
            }
            NoiseModel::Dephasing => {
                if p > 0.0 && rng.random::<f64>() < p {
                    let cdf = self.base_cdf.as_ref().expect("cdf built for dephasing");
                    Branch::Basis(sample_cdf(cdf, rng) as u64)
                } else {
                    Branch::State(&self.base)
                }
            }
            NoiseModel::LocalDephasing => {
                let n = self.n();
                let mut mask = 0u64;
                for q in 0..n {
                    if rng.random::<f64>() < p {
                        mask |= crate::bits::qubit_mask(q, n);
                    }
                }
                if mask == 0 {
                    Branch::State(&self.base)
                } else {
                    let mut s = self.base.clone();
                    s.apply_z_mask(mask);
                    Branch::Owned(s)
                }
            }
        }
    }
}

pub fn true_fidelity(rho: &NoisyState, psi: &PureState) -> Result<f64> {
    rho.true_fidelity(psi)
}

/// Σ_E p^{|E|}(1−p)^{n−|E|} |⟨ψ|Z_E|φ⟩|², evaluated with one Walsh-Hadamard
/// transform of c_x = conj(ψ_x) φ_x.
fn local_dephasing_fidelity(psi: &PureState, phi: &PureState, p: f64) -> f64 {
    let n = psi.n();
    let mut c: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .collect();
    let dim = c.len();
    let mut h = 1;
    while h < dim {
        for i in (0..dim).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (c[j], c[j + h]);
                c[j] = a + b;
                c[j + h] = a - b;
            }
        }
        h *= 2;
    }
    c.iter()
        .enumerate()
        .map(|(e, v)| {
            let w = (e as u64).count_ones() as i32;
            p.powi(w) * (1.0 - p).powi(n as i32 - w) * v.norm_sqr()
        })
        .sum()
}

fn eigen_mixture(n: usize, rho: &DMatrix<Complex64>) -> Result<Vec<(f64, PureState)>> {
    let herm_err = (rho - rho.adjoint()).camax();
    if herm_err > 1e-9 {
        return Err(invalid(format!("density matrix not Hermitian (err {herm_err:e})")));
    }
    let tr: f64 = (0..rho.nrows()).map(|i| rho[(i, i)].re).sum();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("density matrix trace {tr} ≠ 1")));
    }
    let eig = rho.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let mut out = Vec::new();
    for (i, &w) in eig.eigenvalues.iter().enumerate() {
        if w > 1e-14 {
            let v = eig.eigenvectors.column(i).iter().copied().collect();
            out.push((w, PureState::new(n, v)?));
        }
    }
    Ok(out)
}
