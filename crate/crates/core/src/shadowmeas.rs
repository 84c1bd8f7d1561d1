//! Simulated measurement rounds: a random k-subset measured in random Pauli
//! bases, the rest in Z. Records never touch a target oracle, so one dataset
//! can be reused against any number of targets.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::seq::index::sample as sample_indices;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{format_bits, parse_bits, qubit_bit};
use crate::error::{invalid, Error, Result};
use crate::rng::{stream_rng, Rng};
use crate::statekit::{cumulative, sample_cdf, Branch, NoisyState, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn symbol(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'X' => Ok(Basis::X),
            'Y' => Ok(Basis::Y),
            'Z' => Ok(Basis::Z),
            other => Err(invalid(format!("unknown basis symbol {other:?}"))),
        }
    }
}

/// One round. `subset` is 0-based and strictly increasing; `s[j]` is the
/// outcome of qubit `subset[j]` in `bases[j]`; `z` lists the remaining
/// qubits' Z outcomes in ascending qubit order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RecordWire", into = "RecordWire")]
pub struct ShadowRecord {
    pub subset: Vec<usize>,
    pub bases: Vec<Basis>,
    pub s: Vec<u8>,
    pub z: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordWire {
    #[serde(rename = "A")]
    a: Vec<usize>,
    bases: String,
    s: String,
    z: String,
}

impl From<ShadowRecord> for RecordWire {
    fn from(r: ShadowRecord) -> Self {
        RecordWire {
            a: r.subset,
            bases: r.bases.iter().map(|b| b.symbol()).collect(),
            s: format_bits(&r.s),
            z: format_bits(&r.z),
        }
    }
}

impl TryFrom<RecordWire> for ShadowRecord {
    type Error = Error;
    fn try_from(w: RecordWire) -> Result<Self> {
        let rec = ShadowRecord {
            subset: w.a,
            bases: w.bases.chars().map(Basis::from_symbol).collect::<Result<_>>()?,
            s: parse_bits(&w.s)?,
            z: parse_bits(&w.z)?,
        };
        rec.validate()?;
        Ok(rec)
    }
}

impl ShadowRecord {
    pub fn k(&self) -> usize {
        self.subset.len()
    }

    pub fn n(&self) -> usize {
        self.subset.len() + self.z.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.subset.len();
        if k == 0 || self.bases.len() != k || self.s.len() != k {
            return Err(invalid("record fields A, bases, s must share length k ≥ 1"));
        }
        crate::oracle::validate_subset(&self.subset, self.n())
    }
}

fn rotate_into_z(state: &PureState, subset: &[usize], bases: &[Basis]) -> Vec<Complex64> {
    let mut s = state.clone();
    for (&q, &b) in subset.iter().zip(bases) {
        match b {
            Basis::X => s.apply_h(q),
            Basis::Y => {
                s.apply_sdg(q);
                s.apply_h(q);
            }
            Basis::Z => {}
        }
    }
    s.amplitudes().to_vec()
}

fn born_sample(amps: &[Complex64], rng: &mut Rng) -> u64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (x, a) in amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = x;
        }
        acc += p;
        if u < acc {
            return x as u64;
        }
    }
    last_nonzero as u64
}

/// Draws one round from `rho` using `rng`.
pub fn sample_round_with(rho: &NoisyState, k: usize, rng: &mut Rng) -> Result<ShadowRecord> {
    let n = rho.n();
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let mut subset = sample_indices(rng, n, k).into_vec();
    subset.sort_unstable();
    let bases: Vec<Basis> = (0..k)
        .map(|_| match rng.random_range(0..3) {
            0 => Basis::X,
            1 => Basis::Y,
            _ => Basis::Z,
        })
        .collect();
    let x = match rho.sample_branch(rng) {
        Branch::State(s) => born_sample(&rotate_into_z(s, &subset, &bases), rng),
        Branch::Owned(s) => born_sample(&rotate_into_z(&s, &subset, &bases), rng),
        Branch::Uniform => rng.random_range(0..1u64 << n),
        Branch::Basis(b) => {
            let mut x = b;
            for (&q, &basis) in subset.iter().zip(&bases) {
                if basis != Basis::Z && rng.random::<bool>() {
                    x ^= crate::bits::qubit_mask(q, n);
                }
            }
            x
        }
    };
    let s = subset.iter().map(|&q| qubit_bit(x, q, n)).collect();
    let z = (0..n)
        .filter(|q| subset.binary_search(q).is_err())
        .map(|q| qubit_bit(x, q, n))
        .collect();
    Ok(ShadowRecord { subset, bases, s, z })
}

pub fn sample_round(rho: &NoisyState, k: usize, seed: u64) -> Result<ShadowRecord> {
    sample_round_with(rho, k, &mut crate::rng::rng_from(seed))
}

/// `t` independent rounds; round `i` uses the generator derived from
/// `(seed, i)`, so the output is identical for any thread count.
pub fn sample_batch(rho: &NoisyState, k: usize, t: usize, seed: u64) -> Result<Vec<ShadowRecord>> {
    if t == 0 {
        return Err(invalid("batch size T must be at least 1"));
    }
    (0..t)
        .into_par_iter()
        .map(|i| sample_round_with(rho, k, &mut stream_rng(seed, i as u64)))
        .collect()
}

/// Computational-basis samples of `rho`, for the XEB baseline. Draws from
/// the exact diagonal of ρ, so channels that preserve it give identical
/// samples for a fixed seed.
pub fn sample_z_basis(rho: &NoisyState, t: usize, seed: u64) -> Vec<u64> {
    let cdf = cumulative(rho.z_distribution().into_iter());
    (0..t)
        .into_par_iter()
        .map(|i| sample_cdf(&cdf, &mut stream_rng(seed, i as u64)) as u64)
        .collect()
}

pub fn write_ndjson<W: Write>(records: &[ShadowRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ndjson<R: BufRead>(r: R) -> Result<Vec<ShadowRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
