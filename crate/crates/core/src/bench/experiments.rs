use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::*;
use super::xeb::xeb;
use crate::chainlab::{build_chain, build_chain_with, scaling_study, spectral_gap, Kernel, ScalingTable, SUPPORT_TOL};
use crate::error::{invalid, Result};
use crate::estimator::{batch_count, estimate, estimate_multi, FidelityEstimate};
use crate::glepcheck::{run_check, GlepReport};
use crate::mixedcert::{certify_mixed, mixture_density, uhlmann_exact, MixedCertificate, MixedTarget};
use crate::oracle::AmplitudeOracle;
use crate::rng::label_seed;
use crate::shadowmeas::{sample_batch, sample_z_basis, ShadowRecord};
use crate::statekit::{
    apply_noise, cluster_state, dimer_state, ground_state, make_random_product, HamiltonianSpec, NoiseModel,
    NoiseSpec, NoisyState, PureState,
};

/// Dense truth is only attempted up to this many qubits.
pub const MAX_TRUTH_QUBITS: usize = 10;
/// Default confidence used to pick the batch count K.
pub const DEFAULT_DELTA: f64 = 0.05;

pub const BENCH_CSV_HEADER: &str = "state,noise,strength,true_f,shadow_f,stderr,xeb";
pub const HAM_CSV_HEADER: &str = "model,target,param,noise,true_f,shadow_f,stderr,degenerate";

fn batches_or_default(batches: Option<usize>, targets: usize) -> usize {
    batches.unwrap_or_else(|| batch_count(DEFAULT_DELTA, targets.max(1)))
}

fn noise_name(model: NoiseModel) -> &'static str {
    match model {
        NoiseModel::White => "white",
        NoiseModel::Coherent => "coherent",
        NoiseModel::Dephasing => "dephasing",
        NoiseModel::LocalDephasing => "local-dephasing",
    }
}

fn lab_state(lab: &LabSpec, n: usize) -> Result<(PureState, NoisyState)> {
    let psi = lab.state.build(n, lab.state_seed)?;
    let rho = apply_noise(&psi, lab.noise.unwrap_or_else(NoiseSpec::none))?;
    Ok((psi, rho))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub state: String,
    pub noise: String,
    pub strength: f64,
    pub true_f: f64,
    pub shadow_f: f64,
    pub stderr: f64,
    pub xeb: f64,
}

fn rows_csv<T: Serialize>(header: &str, rows: &[T]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    let body = w.into_inner().expect("in-memory writer");
    format!("{header}\n{}", String::from_utf8(body).expect("utf-8 rows"))
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    rows_csv(BENCH_CSV_HEADER, rows)
}

/// Shadow estimate, exact fidelity and linear XEB over the state × noise grid.
pub fn run_benchmark_noise(cfg: &BenchNoiseConfig) -> Result<Vec<BenchRow>> {
    if cfg.n > MAX_TRUTH_QUBITS {
        return Err(invalid(format!("benchmark-noise needs n ≤ {MAX_TRUTH_QUBITS} for exact truth")));
    }
    if cfg.xeb_samples == 0 || cfg.rounds == 0 {
        return Err(invalid("rounds and xeb_samples must be positive"));
    }
    let batches = batches_or_default(cfg.batches, 1);
    let states: Vec<(String, PureState)> = cfg
        .states
        .iter()
        .map(|s| Ok((s.name(), s.build(cfg.n, cfg.state_seed)?)))
        .collect::<Result<_>>()?;
    let mut cells = Vec::new();
    for (si, _) in states.iter().enumerate() {
        for grid in &cfg.noise {
            for &strength in &grid.strengths {
                cells.push((si, NoiseSpec::new(grid.model, strength)?));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(si, spec)| {
            let (name, psi) = &states[si];
            let label = format!("{name}/{}/{}", noise_name(spec.model), spec.strength);
            let seed = label_seed(cfg.seed, &label);
            let rho = apply_noise(psi, spec)?;
            let oracle = AmplitudeOracle::from_pure_state(psi);
            let records = sample_batch(&rho, cfg.k, cfg.rounds, seed)?;
            let est = estimate(&records, &oracle, batches)?;
            // one XEB seed per state: channels that keep diag(ρ) then give the same samples
            let zs = sample_z_basis(&rho, cfg.xeb_samples, label_seed(cfg.seed, &format!("{name}/xeb")));
            Ok(BenchRow {
                state: name.clone(),
                noise: noise_name(spec.model).into(),
                strength: spec.strength,
                true_f: rho.true_fidelity(psi)?,
                shadow_f: est.f_hat,
                stderr: est.stderr,
                xeb: xeb(&zs, &oracle)?.value,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamRow {
    pub model: String,
    pub target: String,
    /// Swept parameter of the target (r, α, or the product-state seed).
    pub param: f64,
    /// White-noise strength on the lab state.
    pub noise: f64,
    pub true_f: f64,
    pub shadow_f: f64,
    pub stderr: f64,
    pub degenerate: bool,
}

pub fn ham_csv(rows: &[HamRow]) -> String {
    rows_csv(HAM_CSV_HEADER, rows)
}

struct Target {
    label: String,
    param: f64,
    state: PureState,
    degenerate: bool,
}

fn ground_target(spec: &HamiltonianSpec, label: String, param: f64) -> Result<Target> {
    let g = ground_state(spec)?;
    Ok(Target {
        label,
        param,
        state: g.state,
        degenerate: g.degenerate,
    })
}

fn fixed_target(label: &str, param: f64, state: PureState) -> Target {
    Target {
        label: label.into(),
        param,
        state,
        degenerate: false,
    }
}

/// Lab and target list of one sweep. The lab's degeneracy flag is folded
/// into every row, since a degenerate lab state is an arbitrary ground vector.
fn sweep_states(sweep: &HamSweep, n: usize) -> Result<(String, Target, Vec<Target>)> {
    Ok(match sweep {
        HamSweep::Bxxz { delta, lab_r, r_grid } => {
            let lab = ground_target(&HamiltonianSpec::bxxz(n, 1.0, *lab_r, *delta), "lab".into(), *lab_r)?;
            let targets = r_grid
                .par_iter()
                .map(|&r| ground_target(&HamiltonianSpec::bxxz(n, 1.0, r, *delta), format!("r={r}"), r))
                .collect::<Result<_>>()?;
            ("bxxz".into(), lab, targets)
        }
        HamSweep::J1j2 { lab_alpha, alpha_grid } => {
            let lab = ground_target(&HamiltonianSpec::j1j2(n, 1.0, *lab_alpha), "lab".into(), *lab_alpha)?;
            let targets = alpha_grid
                .par_iter()
                .map(|&a| ground_target(&HamiltonianSpec::j1j2(n, 1.0, a), format!("alpha={a}"), a))
                .collect::<Result<_>>()?;
            ("j1j2".into(), lab, targets)
        }
        HamSweep::ClusterProducts { products } => {
            let lab = fixed_target("lab", 0.0, cluster_state(n)?);
            let mut targets = vec![fixed_target("cluster", 0.0, lab.state.clone())];
            for s in 0..*products {
                targets.push(fixed_target(&format!("product-{s}"), s as f64, make_random_product(n, s as u64)?));
            }
            ("cluster".into(), lab, targets)
        }
        HamSweep::Dimers => {
            let lab = ground_target(&HamiltonianSpec::j1j2(n, 1.0, 0.5), "lab".into(), 0.5)?;
            let targets = vec![
                fixed_target("dimer-plus", 0.5, dimer_state(n, false)?),
                fixed_target("dimer-minus", 0.5, dimer_state(n, true)?),
                fixed_target("product-0", 0.5, make_random_product(n, 0)?),
            ];
            ("majumdar-ghosh".into(), lab, targets)
        }
    })
}

/// Lab state fixed at one parameter, targets swept; one dataset per
/// (sweep, noise level) is reused against every target.
pub fn run_hamiltonian_phase(cfg: &HamPhaseConfig) -> Result<Vec<HamRow>> {
    if cfg.n > 12 {
        return Err(invalid("hamiltonian-phase supports n ≤ 12"));
    }
    let mut rows = Vec::new();
    for (si, sweep) in cfg.sweeps.iter().enumerate() {
        let (model, lab, targets) = sweep_states(sweep, cfg.n)?;
        let oracles: Vec<AmplitudeOracle> = targets.iter().map(|t| AmplitudeOracle::from_pure_state(&t.state)).collect();
        let refs: Vec<&AmplitudeOracle> = oracles.iter().collect();
        let batches = batches_or_default(cfg.batches, targets.len());
        let per_noise: Vec<Vec<HamRow>> = cfg
            .noise_levels
            .par_iter()
            .map(|&p| {
                let rho = apply_noise(&lab.state, NoiseSpec::new(NoiseModel::White, p)?)?;
                let seed = label_seed(cfg.seed, &format!("{si}/{model}/{p}"));
                let records = sample_batch(&rho, cfg.k, cfg.rounds, seed)?;
                let ests = estimate_multi(&records, &refs, batches)?;
                targets
                    .iter()
                    .zip(ests)
                    .map(|(t, e)| {
                        Ok(HamRow {
                            model: model.clone(),
                            target: t.label.clone(),
                            param: t.param,
                            noise: p,
                            true_f: rho.true_fidelity(&t.state)?,
                            shadow_f: e.f_hat,
                            stderr: e.stderr,
                            degenerate: t.degenerate || lab.degenerate,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        rows.extend(per_noise.into_iter().flatten());
    }
    Ok(rows)
}

pub fn run_scaling(cfg: &ScalingConfig) -> Result<ScalingTable> {
    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|s| cfg.seed + s).collect();
    let family = cfg.family.clone();
    scaling_study(move |n, s| family.build(n, s), &cfg.ns, cfg.k, &seeds, cfg.with_congestion)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlepRun {
    pub state_seed: u64,
    pub report: GlepReport,
    /// Exact τ of the pairwise chain, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlepSummary {
    pub family: String,
    pub n: usize,
    pub runs: Vec<GlepRun>,
    pub pass_rate: f64,
    pub within_budget: bool,
}

pub fn run_glep(cfg: &GlepConfig) -> Result<GlepSummary> {
    let runs: Vec<GlepRun> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|i| {
            let state_seed = cfg.state_seed + i;
            let psi = cfg.family.build(cfg.n, state_seed)?;
            let oracle = AmplitudeOracle::from_pure_state(&psi);
            let report = run_check(&oracle, &cfg.params, label_seed(cfg.seed, &format!("glep/{i}")))?;
            let tau = if cfg.with_chain {
                Some(spectral_gap(&build_chain(&oracle, cfg.params.k, SUPPORT_TOL)?)?.tau)
            } else {
                None
            };
            Ok(GlepRun { state_seed, report, tau })
        })
        .collect::<Result<_>>()?;
    let passes = runs.iter().filter(|r| r.report.verdict == crate::glepcheck::Verdict::Pass).count();
    Ok(GlepSummary {
        family: cfg.family.name(),
        n: cfg.n,
        pass_rate: passes as f64 / runs.len().max(1) as f64,
        within_budget: runs.iter().all(|r| r.report.queries_used <= r.report.query_budget),
        runs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedReport {
    pub certificate: MixedCertificate,
    /// Exact Uhlmann fidelity when the lab state is small enough.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<f64>,
}

pub fn run_mixed(cfg: &MixedCertConfig) -> Result<MixedReport> {
    let (_, rho) = lab_state(&cfg.lab, cfg.n)?;
    let states: Vec<(f64, PureState)> = cfg
        .components
        .iter()
        .map(|c| Ok((c.p, c.state.build(cfg.n, c.state_seed)?)))
        .collect::<Result<_>>()?;
    let target = MixedTarget::new(
        states
            .iter()
            .map(|(p, s)| (*p, AmplitudeOracle::from_pure_state(s)))
            .collect(),
    )?;
    let batches = batches_or_default(cfg.batches, states.len());
    let records = sample_batch(&rho, cfg.k, cfg.rounds, label_seed(cfg.seed, "mixed"))?;
    let certificate = certify_mixed(&records, &target, batches, cfg.threshold, cfg.widening)?;
    let exact = if cfg.n <= 8 {
        let comps: Vec<(f64, &[crate::Complex64])> = states.iter().map(|(p, s)| (*p, s.amplitudes())).collect();
        Some(uhlmann_exact(&rho.density()?, &mixture_density(&comps))?)
    } else {
        None
    };
    Ok(MixedReport { certificate, exact })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetEstimate {
    pub label: String,
    pub estimate: FidelityEstimate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub true_f: Option<f64>,
    /// `Some(true)` when the estimate clears the threshold by three standard errors.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    pub targets: Vec<TargetEstimate>,
}

fn resolved_targets(cfg: &EstimateConfig) -> Vec<TargetSpec> {
    if cfg.targets.is_empty() {
        vec![TargetSpec {
            state: cfg.lab.state.clone(),
            state_seed: cfg.lab.state_seed,
            label: Some("lab".into()),
        }]
    } else {
        cfg.targets.clone()
    }
}

/// λ1 of the block observable, through the sparse chain.
fn block_lambda1(oracle: &AmplitudeOracle, k: usize) -> Result<f64> {
    Ok(spectral_gap(&build_chain_with(oracle, k, SUPPORT_TOL, Kernel::Block)?)?.lambda1)
}

/// Estimates against every target of `cfg` from an existing dataset.
/// `rho` supplies exact truth when available.
pub fn estimate_targets(
    cfg: &EstimateConfig,
    records: &[ShadowRecord],
    rho: Option<&NoisyState>,
) -> Result<EstimateReport> {
    let specs = resolved_targets(cfg);
    let states: Vec<PureState> = specs
        .iter()
        .map(|t| t.state.build(cfg.n, t.state_seed))
        .collect::<Result<_>>()?;
    let oracles: Vec<AmplitudeOracle> = states.iter().map(AmplitudeOracle::from_pure_state).collect();
    let refs: Vec<&AmplitudeOracle> = oracles.iter().collect();
    let batches = batches_or_default(cfg.batches, specs.len());
    let ests = estimate_multi(records, &refs, batches)?;
    let targets = specs
        .iter()
        .zip(states.iter().zip(&oracles))
        .zip(ests)
        .map(|((spec, (psi, oracle)), mut est)| {
            if cfg.debias && cfg.n <= 14 {
                // a disconnected chain has λ1 = 1 and no debiased value
                let l1 = block_lambda1(oracle, cfg.k)?;
                if l1 < 1.0 - 1e-12 {
                    est = est.with_debias(l1)?;
                }
            }
            let true_f = match rho {
                Some(r) if cfg.n <= MAX_TRUTH_QUBITS => Some(r.true_fidelity(psi)?),
                _ => None,
            };
            let certified = cfg.threshold.map(|t| est.f_hat - 3.0 * est.stderr > t);
            Ok(TargetEstimate {
                label: spec.label(),
                estimate: est,
                true_f,
                certified,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EstimateReport {
        n: cfg.n,
        k: cfg.k,
        rounds: records.len(),
        targets,
    })
}

/// Draws the dataset of `cfg`'s lab state.
pub fn sample_dataset(cfg: &EstimateConfig) -> Result<(NoisyState, Vec<ShadowRecord>)> {
    let (_, rho) = lab_state(&cfg.lab, cfg.n)?;
    let records = sample_batch(&rho, cfg.k, cfg.rounds, label_seed(cfg.seed, "dataset"))?;
    Ok((rho, records))
}

pub fn run_estimate(cfg: &EstimateConfig) -> Result<EstimateReport> {
    let (rho, records) = sample_dataset(cfg)?;
    estimate_targets(cfg, &records, Some(&rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::StateFamily;

    fn small_bench() -> BenchNoiseConfig {
        BenchNoiseConfig {
            n: 4,
            k: 2,
            rounds: 2000,
            batches: None,
            seed: 9,
            states: vec![StateFamily::Phase, StateFamily::Iqp],
            state_seed: 1,
            noise: vec![NoiseGrid {
                model: NoiseModel::Dephasing,
                strengths: vec![0.0, 0.5],
            }],
            xeb_samples: 500,
        }
    }

    #[test]
    fn benchmark_is_reproducible_and_ordered() {
        let a = bench_csv(&run_benchmark_noise(&small_bench()).unwrap());
        let b = bench_csv(&run_benchmark_noise(&small_bench()).unwrap());
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], BENCH_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("phase,dephasing,0.0,"));
        assert!(lines[4].starts_with("iqp,dephasing,0.5,"));
    }

    #[test]
    fn phase_state_xeb_is_zero() {
        for r in run_benchmark_noise(&small_bench()).unwrap() {
            if r.state == "phase" {
                assert!(r.xeb.abs() < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn target_equal_to_lab_gives_one() {
        let cfg = EstimateConfig {
            n: 4,
            k: 2,
            rounds: 4000,
            batches: None,
            seed: 2,
            lab: LabSpec {
                state: StateFamily::W,
                state_seed: 0,
                noise: None,
            },
            targets: vec![],
            debias: true,
            threshold: Some(0.9),
        };
        let rep = run_estimate(&cfg).unwrap();
        let t = &rep.targets[0];
        assert!((t.estimate.f_hat - 1.0).abs() < 0.05);
        assert!((t.true_f.unwrap() - 1.0).abs() < 1e-12);
        assert!(t.estimate.debias.is_some());
        assert_eq!(t.certified, Some(true));
    }
}
