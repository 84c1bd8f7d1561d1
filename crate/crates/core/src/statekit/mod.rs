//! Target states, Hamiltonian ground states and noisy lab states.
//!
//! Pure states are dense 2^n amplitude vectors (n ≤ 16). Noisy states keep
//! the noiseless vector plus the channel parameters; a dense density matrix
//! is only materialised on request for n ≤ 10.

mod families;
mod hamiltonian;
mod noise;

pub use families::*;
pub use hamiltonian::*;
pub use noise::*;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::qubit_mask;
use crate::error::{invalid, Error, Result};

pub const MAX_QUBITS: usize = 16;
pub const MAX_DENSE_QUBITS: usize = 10;

pub(crate) fn check_qubits(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        Err(Error::QubitCount { n, min: 1, max })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector, normalising it. Length must be 2^n.
    pub fn new(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        if amps.len() != 1 << n {
            return Err(invalid(format!(
                "amplitude vector of length {} for n = {n}",
                amps.len()
            )));
        }
        let nrm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(invalid("state has zero or non-finite norm"));
        }
        amps.iter_mut().for_each(|a| *a /= nrm);
        Ok(Self { n, amps })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::new(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: u64) -> Complex64 {
        self.amps[x as usize]
    }

    pub fn prob(&self, x: u64) -> f64 {
        self.amps[x as usize].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn support_size(&self, tol: f64) -> usize {
        self.amps.iter().filter(|a| a.norm_sqr() > tol).count()
    }

    /// Applies a 2×2 unitary `u` (row-major) to qubit `q`.
    pub fn apply_1q(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let m = qubit_mask(q, self.n) as usize;
        for x in 0..self.amps.len() {
            if x & m == 0 {
                let a0 = self.amps[x];
                let a1 = self.amps[x | m];
                self.amps[x] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[x | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, [[h, h], [h, -h]]);
    }

    pub fn apply_s(&mut self, q: usize) {
        self.apply_phase(q, Complex64::i());
    }

    pub fn apply_sdg(&mut self, q: usize) {
        self.apply_phase(q, -Complex64::i());
    }

    pub fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let m = qubit_mask(q, self.n) as usize;
        self.amps
            .iter_mut()
            .enumerate()
            .filter(|(x, _)| x & m != 0)
            .for_each(|(_, a)| *a *= phase);
    }

    pub fn apply_ry(&mut self, q: usize, theta: f64) {
        let c = Complex64::new((theta / 2.0).cos(), 0.0);
        let s = Complex64::new((theta / 2.0).sin(), 0.0);
        self.apply_1q(q, [[c, -s], [s, c]]);
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let m = qubit_mask(a, self.n) as usize | qubit_mask(b, self.n) as usize;
        self.amps
            .iter_mut()
            .enumerate()
            .filter(|(x, _)| x & m == m)
            .for_each(|(_, v)| *v = -*v);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let c = qubit_mask(control, self.n) as usize;
        let t = qubit_mask(target, self.n) as usize;
        for x in 0..self.amps.len() {
            if x & c != 0 && x & t == 0 {
                self.amps.swap(x, x | t);
            }
        }
    }

    /// Multiplies by Z on every qubit in `mask`.
    pub fn apply_z_mask(&mut self, mask: u64) {
        for (x, a) in self.amps.iter_mut().enumerate() {
            if (x as u64 & mask).count_ones() % 2 == 1 {
                *a = -*a;
            }
        }
    }
}
