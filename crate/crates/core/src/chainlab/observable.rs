use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{build_chain_with, ChainModel, Kernel, SUPPORT_TOL};
use crate::error::{Error, Result};
use crate::oracle::AmplitudeOracle;

pub const MAX_OBSERVABLE_QUBITS: usize = 10;

/// L_xy = Ψ(x) Ψ*(y) P(x, y)/π(y) on the support, zero elsewhere.
pub fn observable_from_chain(chain: &ChainModel) -> Result<DMatrix<Complex64>> {
    if chain.n > MAX_OBSERVABLE_QUBITS {
        return Err(Error::DenseTooLarge {
            n: chain.n,
            max: MAX_OBSERVABLE_QUBITS,
        });
    }
    let dim = 1usize << chain.n;
    let mut l = DMatrix::zeros(dim, dim);
    for i in 0..chain.len() {
        let xi = chain.support[i] as usize;
        let ai = chain.amplitudes[i];
        l[(xi, xi)] = Complex64::new(chain.diag[i], 0.0);
        for &(j, p) in &chain.rows[i] {
            let j = j as usize;
            let yj = chain.support[j] as usize;
            l[(xi, yj)] = ai * chain.amplitudes[j].conj() * (p / chain.pi[j]);
        }
    }
    Ok(l)
}

/// The operator whose expectation in ρ equals the mean shadow overlap.
pub fn build_observable(oracle: &AmplitudeOracle, k: usize) -> Result<DMatrix<Complex64>> {
    build_observable_with(oracle, k, Kernel::Block)
}

pub fn build_observable_with(oracle: &AmplitudeOracle, k: usize, kernel: Kernel) -> Result<DMatrix<Complex64>> {
    if oracle.n() > MAX_OBSERVABLE_QUBITS {
        return Err(Error::DenseTooLarge {
            n: oracle.n(),
            max: MAX_OBSERVABLE_QUBITS,
        });
    }
    observable_from_chain(&build_chain_with(oracle, k, SUPPORT_TOL, kernel)?)
}

/// Re Tr(L ρ).
pub fn trace_product(l: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..l.nrows() {
        for j in 0..l.ncols() {
            acc += l[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors.
pub fn hermitian_spectrum(l: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let sym = (l + l.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(l.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Second-largest eigenvalue of L.
pub fn observable_lambda1(l: &DMatrix<Complex64>) -> f64 {
    hermitian_spectrum(l).0[1]
}
