//! Counted amplitude access Ψ(x) = ⟨x|ψ⟩ and the conditional k-qubit states
//! used in the query phase of the estimator.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex64;

use crate::bits::{qubit_mask, scatter};
use crate::error::{invalid, Error, Result};
use crate::statekit::PureState;

/// Branches with Σ|Ψ|² below this are treated as impossible.
pub const ZERO_CONDITIONAL: f64 = 1e-24;

type AmpFn = dyn Fn(u64) -> Complex64 + Send + Sync;

enum Source {
    Vector(Arc<[Complex64]>),
    Function(Arc<AmpFn>),
}

pub struct AmplitudeOracle {
    n: usize,
    source: Source,
    queries: AtomicU64,
}

impl fmt::Debug for AmplitudeOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmplitudeOracle")
            .field("n", &self.n)
            .field("queries", &self.queries())
            .finish()
    }
}

impl AmplitudeOracle {
    pub fn from_pure_state(psi: &PureState) -> Self {
        Self {
            n: psi.n(),
            source: Source::Vector(psi.amplitudes().into()),
            queries: AtomicU64::new(0),
        }
    }

    /// Oracle backed by a closed-form amplitude function (n ≤ 63).
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        if n == 0 || n > 63 {
            return Err(Error::QubitCount { n, min: 1, max: 63 });
        }
        Ok(Self {
            n,
            source: Source::Function(Arc::new(f)),
            queries: AtomicU64::new(0),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn query(&self, x: u64) -> Complex64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        match &self.source {
            Source::Vector(v) => v[x as usize],
            Source::Function(f) => f(x),
        }
    }

    pub fn prob(&self, x: u64) -> f64 {
        self.query(x).norm_sqr()
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// All 2^n amplitudes (2^n queries).
    pub fn query_all(&self) -> Result<Vec<Complex64>> {
        if self.n > 24 {
            return Err(Error::QubitCount { n: self.n, min: 1, max: 24 });
        }
        Ok((0..1u64 << self.n).map(|x| self.query(x)).collect())
    }

    /// Σ_x |Ψ(x)|², exact for n ≤ 20 (2^n queries).
    pub fn norm_sq(&self) -> Result<f64> {
        if self.n > 20 {
            return Err(Error::QubitCount { n: self.n, min: 1, max: 20 });
        }
        Ok((0..1u64 << self.n).map(|x| self.prob(x)).sum())
    }
}

pub fn from_pure_state(psi: &PureState) -> AmplitudeOracle {
    AmplitudeOracle::from_pure_state(psi)
}

pub fn prob(oracle: &AmplitudeOracle, x: u64) -> f64 {
    oracle.prob(x)
}

/// Normalised Ψ restricted to x_{A^c} = z.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    pub subset: Vec<usize>,
    pub z: Vec<u8>,
    pub amplitudes: Vec<Complex64>,
    pub norm_sq: f64,
}

/// Fixed-bit index for the complement of `subset` filled with `z`.
pub(crate) fn complement_index(subset: &[usize], z: &[u8], n: usize) -> u64 {
    let mut zi = 0;
    let mut base = 0u64;
    for q in 0..n {
        if subset.binary_search(&q).is_err() {
            if z[zi] == 1 {
                base |= qubit_mask(q, n);
            }
            zi += 1;
        }
    }
    base
}

pub(crate) fn validate_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() || subset.len() > n {
        return Err(invalid(format!("subset size {} invalid for n = {n}", subset.len())));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset[subset.len() - 1] >= n {
        return Err(invalid("subset must be strictly increasing and inside 0..n"));
    }
    Ok(())
}

/// Issues exactly 2^k queries.
pub fn conditional_state(
    oracle: &AmplitudeOracle,
    subset: &[usize],
    z: &[u8],
) -> Result<ConditionalState> {
    let n = oracle.n();
    validate_subset(subset, n)?;
    let k = subset.len();
    if z.len() != n - k {
        return Err(invalid(format!("z has length {} but n − k = {}", z.len(), n - k)));
    }
    let base = complement_index(subset, z, n);
    let mut amps: Vec<Complex64> = (0..1u64 << k)
        .map(|u| oracle.query(base | scatter(u, subset, n)))
        .collect();
    let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq < ZERO_CONDITIONAL {
        return Err(Error::ZeroConditional { norm_sq });
    }
    let nrm = norm_sq.sqrt();
    amps.iter_mut().for_each(|a| *a /= nrm);
    Ok(ConditionalState {
        subset: subset.to_vec(),
        z: z.to_vec(),
        amplitudes: amps,
        norm_sq,
    })
}
