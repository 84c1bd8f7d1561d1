//! Local overlaps, median-of-means, sample planning and bias mitigation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::oracle::{conditional_state, AmplitudeOracle};
use crate::shadowmeas::{Basis, ShadowRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapSample {
    pub omega: f64,
    pub record_index: usize,
}

/// ½(I + 3(−1)^s σ_b) = 3|s⟩⟨s| − I in the measured basis.
fn shadow_factor(basis: Basis, s: u8) -> [[Complex64; 2]; 2] {
    let sg = if s == 0 { 1.5 } else { -1.5 };
    let h = Complex64::new(0.5, 0.0);
    let z = Complex64::new(0.0, 0.0);
    match basis {
        Basis::Z => {
            let d = Complex64::new(0.5 + sg, 0.0);
            let e = Complex64::new(0.5 - sg, 0.0);
            [[d, z], [z, e]]
        }
        Basis::X => {
            let o = Complex64::new(sg, 0.0);
            [[h, o], [o, h]]
        }
        Basis::Y => [[h, Complex64::new(0.0, -sg)], [Complex64::new(0.0, sg), h]],
    }
}

/// ω = ⟨Ψ_{A,z}| ⊗_{i∈A} (3|s_i⟩⟨s_i| − I) |Ψ_{A,z}⟩. Issues 2^k queries.
pub fn omega(record: &ShadowRecord, oracle: &AmplitudeOracle) -> Result<f64> {
    if record.n() != oracle.n() {
        return Err(invalid(format!(
            "record spans {} qubits, oracle has {}",
            record.n(),
            oracle.n()
        )));
    }
    record.validate()?;
    let cs = conditional_state(oracle, &record.subset, &record.z)?;
    let k = record.k();
    let mut v = cs.amplitudes.clone();
    for j in 0..k {
        let m = shadow_factor(record.bases[j], record.s[j]);
        let mask = 1usize << (k - 1 - j);
        for u in 0..v.len() {
            if u & mask == 0 {
                let (a0, a1) = (v[u], v[u | mask]);
                v[u] = m[0][0] * a0 + m[0][1] * a1;
                v[u | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
    Ok(cs
        .amplitudes
        .iter()
        .zip(&v)
        .map(|(c, w)| (c.conj() * w).re)
        .sum())
}

pub fn local_overlap(record: &ShadowRecord, oracle: &AmplitudeOracle) -> Result<OverlapSample> {
    Ok(OverlapSample {
        omega: omega(record, oracle)?,
        record_index: 0,
    })
}

/// ω for every record, in record order. Zero-weight branches are dropped and
/// their indices returned.
pub fn collect_overlaps(
    records: &[ShadowRecord],
    oracle: &AmplitudeOracle,
) -> Result<(Vec<OverlapSample>, Vec<usize>)> {
    let results: Vec<Result<f64>> = records.par_iter().map(|r| omega(r, oracle)).collect();
    let mut samples = Vec::with_capacity(records.len());
    let mut dropped = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(w) => samples.push(OverlapSample {
                omega: w,
                record_index: i,
            }),
            Err(Error::ZeroConditional { .. }) => dropped.push(i),
            Err(e) => return Err(e),
        }
    }
    Ok((samples, dropped))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebiasSummary {
    pub e_omega: f64,
    pub lambda1: f64,
    pub deb1: f64,
    pub deb2: f64,
    pub deb3: f64,
    pub f_min: f64,
    pub mid: f64,
    pub interval: [f64; 2],
    /// Worst-case |mid − F| given E[ω] and λ1.
    pub mid_bound: f64,
}

pub fn debias(e_omega: f64, lambda1: f64) -> Result<DebiasSummary> {
    if !(0.0..1.0).contains(&lambda1) {
        return Err(invalid(format!("λ1 = {lambda1} must lie in [0, 1)")));
    }
    let deb1 = e_omega - lambda1;
    let deb2 = (e_omega - lambda1) / (1.0 - lambda1);
    let f_min = deb1.max(deb2);
    let mid = (e_omega + f_min) / 2.0;
    let deb3 = e_omega - lambda1 * (1.0 - e_omega);
    let mid_bound = (lambda1 / 2.0).min((1.0 - e_omega) * lambda1 / (2.0 * (1.0 - lambda1)));
    Ok(DebiasSummary {
        e_omega,
        lambda1,
        deb1,
        deb2,
        deb3,
        f_min,
        mid,
        interval: [f_min, e_omega],
        mid_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub f_hat: f64,
    pub batch_means: Vec<f64>,
    #[serde(rename = "K")]
    pub k_batches: usize,
    #[serde(rename = "T")]
    pub t_total: usize,
    pub t_used: usize,
    /// Rounds whose conditional vanished. They enter the batches as ω = 0,
    /// matching an observable that is zero off the target's support.
    pub dropped: usize,
    /// Plain mean over the rounds that entered batches.
    pub mean: f64,
    pub stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub debias: Option<DebiasSummary>,
}

impl FidelityEstimate {
    /// Attaches the debias family computed from the plain mean.
    pub fn with_debias(mut self, lambda1: f64) -> Result<Self> {
        let d = debias(self.mean, lambda1)?;
        self.interval = Some(d.interval);
        self.debias = Some(d);
        Ok(self)
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        (v[m / 2 - 1] + v[m / 2]) / 2.0
    }
}

/// Median of `k` contiguous batch means; the remainder `len mod k` is dropped.
pub fn median_of_means(values: &[f64], k: usize) -> Result<(f64, Vec<f64>)> {
    if k == 0 {
        return Err(invalid("batch count K must be at least 1"));
    }
    if values.len() < k {
        return Err(Error::EmptyBatch {
            rounds: values.len(),
            batches: k,
        });
    }
    let tb = values.len() / k;
    let means: Vec<f64> = values
        .chunks_exact(tb)
        .take(k)
        .map(|c| c.iter().sum::<f64>() / tb as f64)
        .collect();
    let mut sorted = means.clone();
    Ok((median(&mut sorted), means))
}

/// Median-of-means estimate from one ω per round; `zero_rounds` of them are
/// zero-conditional rounds already set to 0.
pub fn estimate_from_omegas(omegas: &[f64], k: usize, zero_rounds: usize) -> Result<FidelityEstimate> {
    let (f_hat, batch_means) = median_of_means(omegas, k)?;
    let t_used = (omegas.len() / k) * k;
    let used = &omegas[..t_used];
    let mean = used.iter().sum::<f64>() / t_used as f64;
    let var = if t_used > 1 {
        used.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (t_used - 1) as f64
    } else {
        0.0
    };
    Ok(FidelityEstimate {
        f_hat,
        batch_means,
        k_batches: k,
        t_total: omegas.len(),
        t_used,
        dropped: zero_rounds,
        mean,
        stderr: (var / t_used as f64).sqrt(),
        interval: None,
        debias: None,
    })
}

pub fn estimate(records: &[ShadowRecord], oracle: &AmplitudeOracle, k: usize) -> Result<FidelityEstimate> {
    if k == 0 {
        return Err(invalid("batch count K must be at least 1"));
    }
    if records.len() < k {
        return Err(Error::EmptyBatch {
            rounds: records.len(),
            batches: k,
        });
    }
    let (samples, dropped) = collect_overlaps(records, oracle)?;
    let mut omegas = vec![0.0; records.len()];
    for s in &samples {
        omegas[s.record_index] = s.omega;
    }
    estimate_from_omegas(&omegas, k, dropped.len())
}

/// One estimate per target from the same records.
pub fn estimate_multi(
    records: &[ShadowRecord],
    oracles: &[&AmplitudeOracle],
    k: usize,
) -> Result<Vec<FidelityEstimate>> {
    if let Some(first) = oracles.first() {
        if oracles.iter().any(|o| o.n() != first.n()) {
            return Err(invalid("all targets must share the qubit count"));
        }
    }
    oracles.iter().map(|o| estimate(records, o, k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePlan {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Mixing-time bound of the target (or the largest over targets).
    pub tau: f64,
    #[serde(default = "default_c_b")]
    pub c_b: f64,
    #[serde(rename = "M", default = "default_targets")]
    pub targets: usize,
}

fn default_c_b() -> f64 {
    1.0
}

fn default_targets() -> usize {
    1
}

/// 2^{2k+1} τ² / (c_b ε)² · ln(2M/δ), without rounding or range checks.
pub fn rounds_formula(k: usize, max_tau: f64, c_b: f64, epsilon: f64, delta: f64, targets: usize) -> f64 {
    (2.0f64).powi(2 * k as i32 + 1) * max_tau.powi(2) / (c_b * epsilon).powi(2)
        * (2.0 * targets as f64 / delta).ln()
}

impl SamplePlan {
    fn validate(&self, max_tau: f64) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid(format!("ε = {} outside (0, 1)", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!("δ = {} outside (0, 1)", self.delta)));
        }
        if self.k == 0 || self.targets == 0 {
            return Err(invalid("k and M must be at least 1"));
        }
        if !(max_tau >= 1.0 && max_tau.is_finite()) {
            return Err(invalid(format!("τ = {max_tau} must be finite and ≥ 1")));
        }
        let r = self.c_b / max_tau;
        if !(r > 0.0 && r < 1.0) {
            return Err(invalid(format!("c_b/τ = {r} outside (0, 1)")));
        }
        Ok(())
    }

    /// Unrounded round count for `max_tau`.
    pub fn exact_rounds(&self, max_tau: f64) -> Result<f64> {
        self.validate(max_tau)?;
        Ok(rounds_formula(self.k, max_tau, self.c_b, self.epsilon, self.delta, self.targets))
    }

    /// Batch count K = 2⌈ln(2M/δ)⌉.
    pub fn batches(&self) -> usize {
        batch_count(self.delta, self.targets)
    }
}

pub fn batch_count(delta: f64, targets: usize) -> usize {
    2 * ((2.0 * targets as f64 / delta).ln().ceil().max(1.0) as usize)
}

pub fn plan_samples(plan: &SamplePlan, max_tau: f64) -> Result<u64> {
    Ok(plan.exact_rounds(max_tau)?.ceil() as u64)
}

fn check_power(lambda1: f64, k_pow: usize) -> Result<()> {
    if k_pow == 0 {
        return Err(invalid("power order must be at least 1"));
    }
    if !(0.0..1.0).contains(&lambda1) {
        return Err(invalid(format!("λ1 = {lambda1}: λ1^k = 1 or outside [0, 1)")));
    }
    Ok(())
}

fn mean(v: impl ExactSizeIterator<Item = f64>) -> Result<f64> {
    let len = v.len();
    if len == 0 {
        return Err(invalid("no samples"));
    }
    Ok(v.sum::<f64>() / len as f64)
}

/// mean((ω^k − λ1^k)/(1 − λ1^k)).
pub fn power_moment(omegas: &[f64], lambda1: f64, k_pow: usize) -> Result<f64> {
    check_power(lambda1, k_pow)?;
    let lk = lambda1.powi(k_pow as i32);
    mean(omegas.iter().map(|w| (w.powi(k_pow as i32) - lk) / (1.0 - lk)))
}

/// mean((ω^{k+1} − λ1 ω^k)/(1 − λ1)).
pub fn richardson(omegas: &[f64], lambda1: f64, k_pow: usize) -> Result<f64> {
    check_power(lambda1, k_pow)?;
    mean(
        omegas
            .iter()
            .map(|w| (w.powi(k_pow as i32 + 1) - lambda1 * w.powi(k_pow as i32)) / (1.0 - lambda1)),
    )
}

/// Smallest k with λ1^k ≤ ε.
pub fn power_order(lambda1: f64, epsilon: f64) -> usize {
    if lambda1 <= 0.0 {
        return 1;
    }
    (epsilon.ln() / lambda1.ln()).ceil().max(1.0) as usize
}
