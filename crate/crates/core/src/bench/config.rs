use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::glepcheck::GlepParams;
use crate::statekit::{HamiltonianModel, HamiltonianSpec, NoiseModel, NoiseSpec, StateFamily};

pub const CONFIG_VERSION: u64 = 1;

/// A lab state: a pure family member plus optional noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabSpec {
    pub state: StateFamily,
    #[serde(default)]
    pub state_seed: u64,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub state: StateFamily,
    #[serde(default)]
    pub state_seed: u64,
    #[serde(default)]
    pub label: Option<String>,
}

impl TargetSpec {
    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}-{}", self.state.name(), self.state_seed))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseGrid {
    pub model: NoiseModel,
    pub strengths: Vec<f64>,
}

fn default_bench_states() -> Vec<StateFamily> {
    vec![
        StateFamily::Iqp,
        StateFamily::Phase,
        StateFamily::Stabilizer,
        StateFamily::Ground {
            hamiltonian: HamiltonianSpec {
                n: 0,
                model: HamiltonianModel::Tfim { j: 1.0, h: 1.0 },
            },
        },
    ]
}

fn default_noise_grid() -> Vec<NoiseGrid> {
    let p = vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    vec![
        NoiseGrid {
            model: NoiseModel::White,
            strengths: p.clone(),
        },
        NoiseGrid {
            model: NoiseModel::Coherent,
            strengths: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
        },
        NoiseGrid {
            model: NoiseModel::Dephasing,
            strengths: p,
        },
    ]
}

fn default_xeb_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchNoiseConfig {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    #[serde(default)]
    pub batches: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bench_states")]
    pub states: Vec<StateFamily>,
    #[serde(default)]
    pub state_seed: u64,
    #[serde(default = "default_noise_grid")]
    pub noise: Vec<NoiseGrid>,
    #[serde(default = "default_xeb_samples")]
    pub xeb_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HamSweep {
    /// Lab: ground state at J′/J = `lab_r`; targets sweep `r_grid`. J = 1.
    Bxxz { delta: f64, lab_r: f64, r_grid: Vec<f64> },
    /// Lab: ground state at J2/J1 = `lab_alpha`; targets sweep `alpha_grid`. J1 = 1.
    J1j2 { lab_alpha: f64, alpha_grid: Vec<f64> },
    /// Lab: the cluster state; targets: `products` random product states and the cluster state.
    ClusterProducts { products: usize },
    /// Lab: J1-J2 ground state at α = 0.5; targets: both dimer coverings and a random product state.
    Dimers,
}

fn default_noise_levels() -> Vec<f64> {
    vec![0.0, 0.3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamPhaseConfig {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    #[serde(default)]
    pub batches: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// White-noise strengths applied to the lab state.
    #[serde(default = "default_noise_levels")]
    pub noise_levels: Vec<f64>,
    pub sweeps: Vec<HamSweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub family: StateFamily,
    pub ns: Vec<usize>,
    pub k: usize,
    pub seeds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub with_congestion: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlepConfig {
    pub family: StateFamily,
    pub n: usize,
    #[serde(default = "one")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// State seed of run i is `state_seed + i` for seeded families.
    #[serde(default)]
    pub state_seed: u64,
    #[serde(default)]
    pub params: GlepParams,
    /// Also report the exact mixing time of the induced chain.
    #[serde(default)]
    pub with_chain: bool,
}

fn one() -> usize {
    1
}

fn default_widening() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedComponentSpec {
    pub p: f64,
    pub state: StateFamily,
    #[serde(default)]
    pub state_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedCertConfig {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    #[serde(default)]
    pub batches: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub lab: LabSpec,
    pub components: Vec<MixedComponentSpec>,
    pub threshold: f64,
    #[serde(default = "default_widening")]
    pub widening: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    #[serde(default)]
    pub batches: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub lab: LabSpec,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
    /// Attach debiased values using λ1 of the exact observable (n ≤ 14).
    #[serde(default)]
    pub debias: bool,
    /// Optional certification threshold reported per target.
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    BenchmarkNoise(BenchNoiseConfig),
    Scaling(ScalingConfig),
    Glep(GlepConfig),
    HamiltonianPhase(HamPhaseConfig),
    MixedCert(MixedCertConfig),
    Estimate(EstimateConfig),
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::BenchmarkNoise(_) => "benchmark-noise",
            ExperimentConfig::Scaling(_) => "scaling",
            ExperimentConfig::Glep(_) => "glep",
            ExperimentConfig::HamiltonianPhase(_) => "hamiltonian-phase",
            ExperimentConfig::MixedCert(_) => "mixed-cert",
            ExperimentConfig::Estimate(_) => "estimate",
        }
    }

    /// Replaces the master seed.
    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::BenchmarkNoise(c) => c.seed = seed,
            ExperimentConfig::Scaling(c) => c.seed = seed,
            ExperimentConfig::Glep(c) => c.seed = seed,
            ExperimentConfig::HamiltonianPhase(c) => c.seed = seed,
            ExperimentConfig::MixedCert(c) => c.seed = seed,
            ExperimentConfig::Estimate(c) => c.seed = seed,
        }
    }

    /// JSON with the schema version field.
    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Value::Object(m) = &mut v {
            m.insert("version".into(), Value::from(CONFIG_VERSION));
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// Parses a versioned config; unknown fields are rejected.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    match obj.remove("version").and_then(|x| x.as_u64()) {
        Some(CONFIG_VERSION) => {}
        Some(other) => {
            return Err(Error::Config(format!(
                "unsupported config version {other} (expected {CONFIG_VERSION})"
            )))
        }
        None => return Err(Error::Config("missing integer field `version`".into())),
    }
    serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
}
