use serde::{Deserialize, Serialize};

use super::{check_qubits, PureState, MAX_QUBITS};
use crate::bits::qubit_mask;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dense_from_operator, lowest_eigenpair, sorted_symmetric_eigen, LanczosOptions};

/// Open-boundary spin chains. All four models are real in the Z basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HamiltonianModel {
    /// −J Σ Z_i Z_{i+1} − h Σ X_i
    Tfim { j: f64, h: f64 },
    /// Σ_i J_i (X X + Y Y + Δ Z Z) on bond (i, i+1), with J_i = J on bonds
    /// starting at even 0-based i and J′ otherwise.
    Bxxz { j: f64, j_prime: f64, delta: f64 },
    /// (J1/4) Σ σ_i·σ_{i+1} + (J2/4) Σ σ_i·σ_{i+2}
    J1j2 { j1: f64, j2: f64 },
    /// −Σ_{i=1}^{n−2} Z_{i−1} X_i Z_{i+1}
    Cluster,
}

impl HamiltonianModel {
    pub fn name(&self) -> &'static str {
        match self {
            HamiltonianModel::Tfim { .. } => "tfim",
            HamiltonianModel::Bxxz { .. } => "bxxz",
            HamiltonianModel::J1j2 { .. } => "j1j2",
            HamiltonianModel::Cluster => "cluster",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub n: usize,
    pub model: HamiltonianModel,
}

impl HamiltonianSpec {
    pub fn tfim(n: usize, j: f64, h: f64) -> Self {
        Self { n, model: HamiltonianModel::Tfim { j, h } }
    }
    pub fn bxxz(n: usize, j: f64, j_prime: f64, delta: f64) -> Self {
        Self { n, model: HamiltonianModel::Bxxz { j, j_prime, delta } }
    }
    pub fn j1j2(n: usize, j1: f64, j2: f64) -> Self {
        Self { n, model: HamiltonianModel::J1j2 { j1, j2 } }
    }
    pub fn cluster(n: usize) -> Self {
        Self { n, model: HamiltonianModel::Cluster }
    }
}

/// coeff · ⊗ Pauli, stored as flip mask (X or Y), sign mask (Z or Y) and
/// the real factor i^{#Y}.
#[derive(Debug, Clone, Copy)]
struct PauliTerm {
    coeff: f64,
    flip: u64,
    sign: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum P {
    X,
    Y,
    Z,
}

fn term(n: usize, coeff: f64, ops: &[(usize, P)]) -> PauliTerm {
    let (mut flip, mut sign, mut ny) = (0u64, 0u64, 0);
    for &(q, p) in ops {
        let m = qubit_mask(q, n);
        match p {
            P::X => flip |= m,
            P::Y => {
                flip |= m;
                sign |= m;
                ny += 1;
            }
            P::Z => sign |= m,
        }
    }
    debug_assert!(ny % 2 == 0);
    let phase = if ny % 4 == 0 { 1.0 } else { -1.0 };
    PauliTerm { coeff: coeff * phase, flip, sign }
}

/// Sparse real Hamiltonian as a sum of Pauli strings.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<PauliTerm>,
}

fn heisenberg(n: usize, a: usize, b: usize, cxy: f64, cz: f64, out: &mut Vec<PauliTerm>) {
    out.push(term(n, cxy, &[(a, P::X), (b, P::X)]));
    out.push(term(n, cxy, &[(a, P::Y), (b, P::Y)]));
    out.push(term(n, cz, &[(a, P::Z), (b, P::Z)]));
}

impl Hamiltonian {
    pub fn from_spec(spec: &HamiltonianSpec) -> Result<Self> {
        let n = spec.n;
        check_qubits(n, MAX_QUBITS)?;
        let mut terms = Vec::new();
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match spec.model {
            HamiltonianModel::Tfim { j, h } => {
                if !finite(&[j, h]) {
                    return Err(invalid("non-finite TFIM coupling"));
                }
                for i in 0..n.saturating_sub(1) {
                    terms.push(term(n, -j, &[(i, P::Z), (i + 1, P::Z)]));
                }
                for i in 0..n {
                    terms.push(term(n, -h, &[(i, P::X)]));
                }
            }
            HamiltonianModel::Bxxz { j, j_prime, delta } => {
                if !finite(&[j, j_prime, delta]) {
                    return Err(invalid("non-finite bXXZ coupling"));
                }
                for i in 0..n.saturating_sub(1) {
                    let c = if i % 2 == 0 { j } else { j_prime };
                    heisenberg(n, i, i + 1, c, c * delta, &mut terms);
                }
            }
            HamiltonianModel::J1j2 { j1, j2 } => {
                if !finite(&[j1, j2]) {
                    return Err(invalid("non-finite J1-J2 coupling"));
                }
                for i in 0..n.saturating_sub(1) {
                    heisenberg(n, i, i + 1, j1 / 4.0, j1 / 4.0, &mut terms);
                }
                for i in 0..n.saturating_sub(2) {
                    heisenberg(n, i, i + 2, j2 / 4.0, j2 / 4.0, &mut terms);
                }
            }
            HamiltonianModel::Cluster => {
                if n < 3 {
                    return Err(invalid("cluster Hamiltonian needs n ≥ 3"));
                }
                for i in 1..n - 1 {
                    terms.push(term(n, -1.0, &[(i - 1, P::Z), (i, P::X), (i + 1, P::Z)]));
                }
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// y = H v.
    pub fn apply(&self, v: &[f64], y: &mut [f64]) {
        for (x, yx) in y.iter_mut().enumerate() {
            let x = x as u64;
            let mut acc = 0.0;
            for t in &self.terms {
                let src = x ^ t.flip;
                let s = if (src & t.sign).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                acc += t.coeff * s * v[src as usize];
            }
            *yx = acc;
        }
    }

    pub fn expectation(&self, v: &[f64]) -> f64 {
        let mut w = vec![0.0; v.len()];
        self.apply(v, &mut w);
        v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|a| a * a).sum::<f64>()
    }

    pub fn dense(&self) -> Result<nalgebra::DMatrix<f64>> {
        if self.n > 12 {
            return Err(Error::DenseTooLarge { n: self.n, max: 12 });
        }
        Ok(dense_from_operator(|v, y| self.apply(v, y), self.dim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    Lanczos,
    Dense,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub state: PureState,
    pub energy: f64,
    /// E_1 − E_0.
    pub gap: f64,
    /// Set when the gap is below [`DEGENERACY_TOL`].
    pub degenerate: bool,
    pub residual: f64,
    pub method: EigenMethod,
}

pub const DEGENERACY_TOL: f64 = 1e-8;
const DENSE_FALLBACK_DIM: usize = 4096;

fn canonical_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual(h: &Hamiltonian, v: &[f64], e: f64) -> f64 {
    let mut w = vec![0.0; v.len()];
    h.apply(v, &mut w);
    w.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt()
}

/// Lowest eigenvector of the Hamiltonian plus the gap to the next level.
/// Degenerate ground spaces are returned with `degenerate = true`.
pub fn ground_state(spec: &HamiltonianSpec) -> Result<GroundState> {
    let h = Hamiltonian::from_spec(spec)?;
    let dim = h.dim();
    let opts = LanczosOptions {
        tol: 1e-10,
        ..Default::default()
    };
    let apply = |v: &[f64], y: &mut [f64]| h.apply(v, y);
    let lanczos = lowest_eigenpair(apply, dim, &[], &opts).and_then(|g| {
        if dim == 1 {
            return Ok((g, f64::INFINITY));
        }
        // a fresh start vector: deflating the first one can leave it with no
        // weight on the rest of a degenerate ground space
        let opts1 = LanczosOptions {
            seed: opts.seed ^ 0x9e37_79b9,
            ..opts.clone()
        };
        let e1 = lowest_eigenpair(apply, dim, &[g.vector.clone()], &opts1)?;
        Ok((g, e1.value))
    });
    let (mut vector, energy, e1, method) = match lanczos {
        Ok((g, e1)) => (g.vector, g.value, e1, EigenMethod::Lanczos),
        Err(err) if dim <= DENSE_FALLBACK_DIM => {
            let _ = err;
            let (vals, vecs) = sorted_symmetric_eigen(h.dense()?);
            let e1 = vals.get(1).copied().unwrap_or(f64::INFINITY);
            (vecs.column(0).iter().copied().collect(), vals[0], e1, EigenMethod::Dense)
        }
        Err(err) => return Err(err),
    };
    canonical_sign(&mut vector);
    let res = residual(&h, &vector, energy);
    if res > 1e-8 {
        return Err(Error::NonConvergence { residual: res });
    }
    let gap = e1 - energy;
    Ok(GroundState {
        state: PureState::from_real(h.n(), &vector)?,
        energy,
        gap,
        degenerate: gap < DEGENERACY_TOL,
        residual: res,
        method,
    })
}
