use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{check_qubits, PureState, MAX_QUBITS};
use crate::bits::{binomial, qubit_mask};
use crate::error::{invalid, Result};
use crate::rng::{rng_from, Rng};

/// Haar-random state from normalised i.i.d. complex Gaussian amplitudes.
pub fn make_haar_random(n: usize, seed: u64) -> Result<PureState> {
    check_qubits(n, 24)?;
    let mut rng = rng_from(seed);
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::new(n, amps)
}

/// Random IQP phases: `a` has one entry per qubit, `b` one per pair `i < j`
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqpPhases {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl IqpPhases {
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = rng_from(seed);
        let a = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let b = (0..n * (n - 1) / 2)
            .map(|_| rng.random_range(0.0..2.0 * PI))
            .collect();
        Self { a, b }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            b: vec![0.0; n * (n - 1) / 2],
        }
    }

    /// f(x) = Σ a_i x_i + Σ_{i<j} b_ij x_i x_j.
    pub fn phase(&self, x: u64, n: usize) -> f64 {
        let bit = |q: usize| (x & qubit_mask(q, n)) != 0;
        let mut f = 0.0;
        let mut p = 0;
        for i in 0..n {
            let xi = bit(i);
            if xi {
                f += self.a[i];
            }
            for j in i + 1..n {
                if xi && bit(j) {
                    f += self.b[p];
                }
                p += 1;
            }
        }
        f
    }
}

pub fn phase_state_from(n: usize, phases: &IqpPhases) -> Result<PureState> {
    check_qubits(n, 20)?;
    if phases.a.len() != n || phases.b.len() != n * (n - 1) / 2 {
        return Err(invalid("IQP phase vector lengths do not match n"));
    }
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let amps = (0..1u64 << n)
        .map(|x| Complex64::from_polar(amp, phases.phase(x, n)))
        .collect();
    PureState::new(n, amps)
}

/// H^⊗n · diag(e^{if}) · H^⊗n |0^n⟩.
pub fn iqp_from(n: usize, phases: &IqpPhases) -> Result<PureState> {
    let mut s = phase_state_from(n, phases)?;
    hadamard_all(&mut s);
    Ok(s)
}

pub fn make_iqp(n: usize, seed: u64) -> Result<PureState> {
    iqp_from(n, &IqpPhases::random(n, seed))
}

/// The IQP state with the final Hadamard layer dropped. Shares phases with
/// [`make_iqp`] for the same seed.
pub fn make_phase_state(n: usize, seed: u64) -> Result<PureState> {
    phase_state_from(n, &IqpPhases::random(n, seed))
}

/// In-place fast Walsh-Hadamard transform, normalised (= H^⊗n).
pub fn hadamard_all(s: &mut PureState) {
    let dim = s.dim();
    let amps = &mut s.amps;
    let mut h = 1;
    while h < dim {
        for i in (0..dim).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (amps[j], amps[j + h]);
                amps[j] = (a + b) * FRAC_1_SQRT_2;
                amps[j + h] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        h *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

pub fn clifford_circuit_state(n: usize, gates: &[CliffordGate]) -> Result<PureState> {
    check_qubits(n, MAX_QUBITS)?;
    let mut s = make_basis(n, 0)?;
    for &g in gates {
        match g {
            CliffordGate::H(q) if q < n => s.apply_h(q),
            CliffordGate::S(q) if q < n => s.apply_s(q),
            CliffordGate::Cnot(c, t) if c < n && t < n && c != t => s.apply_cnot(c, t),
            other => return Err(invalid(format!("gate {other:?} invalid for n = {n}"))),
        }
    }
    Ok(s)
}

/// Random word in {H, S, CNOT} applied to |0^n⟩. The word length grows
/// quadratically in n so the walk on the stabilizer set is well mixed.
pub fn random_clifford_gates(n: usize, seed: u64) -> Vec<CliffordGate> {
    let mut rng = rng_from(seed);
    let len = 20 * n * n + 40;
    (0..len)
        .map(|_| random_gate(n, &mut rng))
        .collect()
}

fn random_gate(n: usize, rng: &mut Rng) -> CliffordGate {
    let kinds = if n >= 2 { 3 } else { 2 };
    match rng.random_range(0..kinds) {
        0 => CliffordGate::H(rng.random_range(0..n)),
        1 => CliffordGate::S(rng.random_range(0..n)),
        _ => {
            let c = rng.random_range(0..n);
            let mut t = rng.random_range(0..n - 1);
            if t >= c {
                t += 1;
            }
            CliffordGate::Cnot(c, t)
        }
    }
}

pub fn make_stabilizer(n: usize, seed: u64) -> Result<PureState> {
    check_qubits(n, MAX_QUBITS)?;
    clifford_circuit_state(n, &random_clifford_gates(n, seed))
}

pub fn make_basis(n: usize, x: u64) -> Result<PureState> {
    check_qubits(n, 24)?;
    if x >> n != 0 {
        return Err(invalid(format!("basis index {x} out of range for n = {n}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[x as usize] = Complex64::new(1.0, 0.0);
    PureState::new(n, amps)
}

fn weight_state(n: usize, w: u32) -> Result<PureState> {
    let amps = (0..1u64 << n)
        .map(|x| Complex64::new(if x.count_ones() == w { 1.0 } else { 0.0 }, 0.0))
        .collect();
    PureState::new(n, amps)
}

pub fn make_w(n: usize) -> Result<PureState> {
    check_qubits(n, 24)?;
    if n < 2 {
        return Err(invalid("W state needs n ≥ 2"));
    }
    weight_state(n, 1)
}

pub fn make_dicke(n: usize, k_exc: usize) -> Result<PureState> {
    check_qubits(n, 24)?;
    if k_exc == 0 || k_exc >= n {
        return Err(invalid(format!("Dicke excitation {k_exc} needs 1 ≤ k ≤ n−1")));
    }
    debug_assert!(binomial(n, k_exc) > 0);
    weight_state(n, k_exc as u32)
}

pub fn make_ghz(n: usize) -> Result<PureState> {
    check_qubits(n, 24)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    amps[(1 << n) - 1] = Complex64::new(1.0, 0.0);
    PureState::new(n, amps)
}

pub fn make_uniform(n: usize) -> Result<PureState> {
    check_qubits(n, 24)?;
    PureState::new(n, vec![Complex64::new(1.0, 0.0); 1 << n])
}

/// Product of independent Haar-random single-qubit states.
pub fn make_random_product(n: usize, seed: u64) -> Result<PureState> {
    check_qubits(n, 24)?;
    let mut rng = rng_from(seed);
    let factors: Vec<[Complex64; 2]> = (0..n)
        .map(|_| {
            let v = [
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            ];
            let nrm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / nrm, v[1] / nrm]
        })
        .collect();
    product_state(&factors)
}

/// ⊗_q (f_q[0]|0⟩ + f_q[1]|1⟩), qubit 0 first.
pub fn product_state(factors: &[[Complex64; 2]]) -> Result<PureState> {
    let n = factors.len();
    check_qubits(n, 24)?;
    let amps = (0..1u64 << n)
        .map(|x| {
            (0..n).fold(Complex64::new(1.0, 0.0), |acc, q| {
                acc * factors[q][((x >> (n - 1 - q)) & 1) as usize]
            })
        })
        .collect();
    PureState::new(n, amps)
}

/// Linear cluster state: CZ on neighbouring pairs applied to |+⟩^⊗n.
pub fn cluster_state(n: usize) -> Result<PureState> {
    let mut s = make_uniform(n)?;
    for q in 0..n.saturating_sub(1) {
        s.apply_cz(q, q + 1);
    }
    Ok(s)
}

/// Product of singlets (|01⟩ − |10⟩)/√2. `shift = false` pairs (0,1),(2,3),…;
/// `shift = true` pairs (1,2),(3,4),…,(n−1,0). Requires even n.
pub fn dimer_state(n: usize, shift: bool) -> Result<PureState> {
    check_qubits(n, 24)?;
    if n % 2 != 0 {
        return Err(invalid("dimer state needs even n"));
    }
    let pairs: Vec<(usize, usize)> = (0..n / 2)
        .map(|i| {
            if shift {
                (2 * i + 1, (2 * i + 2) % n)
            } else {
                (2 * i, 2 * i + 1)
            }
        })
        .collect();
    let amps = (0..1u64 << n)
        .map(|x| {
            let mut sign = 1.0;
            for &(a, b) in &pairs {
                let xa = (x & qubit_mask(a, n)) != 0;
                let xb = (x & qubit_mask(b, n)) != 0;
                if xa == xb {
                    return Complex64::new(0.0, 0.0);
                }
                // |01⟩ − |10⟩ with `a` as the first factor
                if xa {
                    sign = -sign;
                }
            }
            Complex64::new(sign, 0.0)
        })
        .collect();
    PureState::new(n, amps)
}

/// Serializable description of a pure target or lab state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateFamily {
    Haar,
    Iqp,
    Phase,
    Stabilizer,
    W,
    Dicke { k_exc: usize },
    Ghz,
    Basis { index: u64 },
    Uniform,
    Product,
    Cluster,
    Dimer { shift: bool },
    Ground { hamiltonian: super::HamiltonianSpec },
}

impl StateFamily {
    pub fn name(&self) -> String {
        match self {
            StateFamily::Haar => "haar".into(),
            StateFamily::Iqp => "iqp".into(),
            StateFamily::Phase => "phase".into(),
            StateFamily::Stabilizer => "stabilizer".into(),
            StateFamily::W => "w".into(),
            StateFamily::Dicke { k_exc } => format!("dicke{k_exc}"),
            StateFamily::Ghz => "ghz".into(),
            StateFamily::Basis { index } => format!("basis{index}"),
            StateFamily::Uniform => "uniform".into(),
            StateFamily::Product => "product".into(),
            StateFamily::Cluster => "cluster".into(),
            StateFamily::Dimer { shift } => {
                if *shift {
                    "dimer-minus".into()
                } else {
                    "dimer-plus".into()
                }
            }
            StateFamily::Ground { hamiltonian } => hamiltonian.model.name().into(),
        }
    }

    /// Builds the state on `n` qubits. Seeded families use `seed`; for
    /// `Ground` the Hamiltonian's own `n` is replaced by the argument.
    pub fn build(&self, n: usize, seed: u64) -> Result<PureState> {
        match self {
            StateFamily::Haar => make_haar_random(n, seed),
            StateFamily::Iqp => make_iqp(n, seed),
            StateFamily::Phase => make_phase_state(n, seed),
            StateFamily::Stabilizer => make_stabilizer(n, seed),
            StateFamily::W => make_w(n),
            StateFamily::Dicke { k_exc } => make_dicke(n, *k_exc),
            StateFamily::Ghz => make_ghz(n),
            StateFamily::Basis { index } => make_basis(n, *index),
            StateFamily::Uniform => make_uniform(n),
            StateFamily::Product => make_random_product(n, seed),
            StateFamily::Cluster => cluster_state(n),
            StateFamily::Dimer { shift } => dimer_state(n, *shift),
            StateFamily::Ground { hamiltonian } => {
                let mut h = hamiltonian.clone();
                h.n = n;
                Ok(super::ground_state(&h)?.state)
            }
        }
    }
}
