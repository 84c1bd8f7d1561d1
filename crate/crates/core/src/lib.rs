//! Shadow-overlap fidelity estimation.
//!
//! A lab state ρ is measured with `k` qubits in random Pauli bases and the
//! remaining `n - k` qubits in the computational basis. Query access to the
//! amplitudes of a target |ψ⟩ turns each round into a local overlap ω whose
//! median-of-means estimates ⟨ψ|ρ|ψ⟩ up to a bias controlled by the mixing
//! time of a Markov chain induced by |ψ|².
//!
//! Module map:
//!
//! - [`statekit`]: target-state families, Hamiltonian ground states, noisy lab states.
//! - [`oracle`]: counted amplitude queries and conditional reduced states.
//! - [`shadowmeas`]: simulated measurement rounds and the on-disk record format.
//! - [`estimator`]: local overlaps, median-of-means, sample planning, bias mitigation.
//! - [`chainlab`]: the induced chain, exact spectral gaps, the implicit observable, path congestion.
//! - [`glepcheck`]: the empirical applicability test (rejection sampling, support size, condition tests).
//! - [`mixedcert`]: two-sided fidelity bounds for mixed targets.
//! - [`bench`]: experiment configs, the linear XEB baseline and the experiment runners.
//!
//! Bitstring convention used throughout: qubit 0 is the leftmost character of
//! a bitstring and the most significant bit of the integer index.

pub mod bench;
pub mod bits;
pub mod chainlab;
pub mod error;
pub mod estimator;
pub mod glepcheck;
pub mod linalg;
pub mod mixedcert;
pub mod oracle;
pub mod rng;
pub mod shadowmeas;
pub mod statekit;

pub use error::{Error, Result};
pub use num_complex::Complex64;
