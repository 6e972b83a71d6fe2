//! TOML run configuration.
//!
//! Every key is optional. Command-line flags override file values, which
//! override the defaults below. Unknown keys are rejected.

use std::path::Path;

use qmean_core::{AdaptiveConfig, Method, MleGrid, NoiseModel, RangeSchedule};
use qmean_oracle::{Tolerances, VerifyConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::experiments::ExperimentSpec;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub noise: NoiseSection,
    pub adaptive: AdaptiveSection,
    pub mle: MleSection,
    pub experiment: ExperimentSection,
    pub oracle: OracleSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub p_q: f64,
    pub qubits: u32,
    /// Survival probability assumed by the estimator; defaults to `p_q`.
    pub likelihood_p_q: Option<f64>,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            p_q: 0.995,
            qubits: 20,
            likelihood_p_q: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptiveSection {
    pub shots: u64,
    pub steps: usize,
    pub delta: f64,
    /// Largest level the doubling schedule may offer.
    pub range_cap: Option<u32>,
    /// Explicit candidate levels per step, replacing the doubling schedule.
    pub ranges: Option<Vec<Vec<u32>>>,
    pub method: MethodName,
}

impl Default for AdaptiveSection {
    fn default() -> Self {
        Self {
            shots: 500,
            steps: 8,
            delta: AdaptiveConfig::DEFAULT_DELTA,
            range_cap: None,
            ranges: None,
            method: MethodName::Adaptive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Adaptive,
    Standard,
    NonAdaptive,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Self {
        match m {
            MethodName::Adaptive => Method::Adaptive,
            MethodName::Standard => Method::Standard,
            MethodName::NonAdaptive => Method::NonAdaptive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MleSection {
    pub domain_margin: f64,
    pub global_points_per_level: u32,
    pub window_points_per_level: u32,
    pub window_constant: f64,
    pub refine_tolerance: f64,
    pub recheck_margin: f64,
}

impl Default for MleSection {
    fn default() -> Self {
        let g = MleGrid::default();
        Self {
            domain_margin: g.domain_margin,
            global_points_per_level: g.global_points_per_level,
            window_points_per_level: g.window_points_per_level,
            window_constant: g.window_constant,
            refine_tolerance: g.refine_tolerance,
            recheck_margin: g.recheck_margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub targets: Vec<f64>,
    /// Trials per cell; 1000 for the normality study and 100 otherwise
    /// when unset.
    pub trials: Option<u64>,
    pub seed: u64,
    pub steps_list: Vec<usize>,
    pub shot_list: Vec<u64>,
    pub grid_points: usize,
    pub calibration_offsets: Vec<f64>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            targets: vec![0.042, 0.5],
            trials: None,
            seed: 0,
            steps_list: (2..=8).collect(),
            shot_list: vec![5, 50, 500],
            grid_points: 1000,
            calibration_offsets: vec![0.0, 0.001, -0.001, 0.005, -0.005],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub qubits: Vec<u32>,
    pub instances: u64,
    pub levels: Vec<u32>,
    pub survivals: Vec<f64>,
    pub probability_tolerance: f64,
    pub qfi_tolerance: f64,
    pub three_valued_tolerance: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            qubits: v.qubits,
            instances: v.instances,
            levels: v.levels,
            survivals: v.survivals,
            probability_tolerance: v.tolerances.probability,
            qfi_tolerance: v.tolerances.qfi,
            three_valued_tolerance: v.tolerances.three_valued,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<String>,
    /// Worker threads; the rayon default when unset.
    pub jobs: Option<usize>,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            message: e.to_string().trim_end().to_owned(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn true_noise(&self) -> Result<NoiseModel> {
        Ok(NoiseModel::new(self.noise.p_q, self.noise.qubits)?)
    }

    pub fn likelihood_noise(&self) -> Result<NoiseModel> {
        let p = self.noise.likelihood_p_q.unwrap_or(self.noise.p_q);
        Ok(NoiseModel::new(p, self.noise.qubits)?)
    }

    pub fn adaptive_config(&self) -> Result<AdaptiveConfig> {
        let a = &self.adaptive;
        let schedule = match &a.ranges {
            Some(r) => RangeSchedule::Explicit(r.clone()),
            None => RangeSchedule::Doubling { cap: a.range_cap },
        };
        let m = &self.mle;
        let mut config = AdaptiveConfig::new(a.shots, a.steps, self.likelihood_noise()?)
            .with_delta(a.delta)
            .with_schedule(schedule);
        config.grid = MleGrid {
            domain_margin: m.domain_margin,
            global_points_per_level: m.global_points_per_level,
            window_points_per_level: m.window_points_per_level,
            window_constant: m.window_constant,
            refine_tolerance: m.refine_tolerance,
            recheck_margin: m.recheck_margin,
        };
        config.validate()?;
        Ok(config)
    }

    /// Spec for the sweeps, using `default_trials` unless trials are set.
    pub fn experiment_spec(&self, default_trials: u64) -> Result<ExperimentSpec> {
        let e = &self.experiment;
        let trials = e.trials.unwrap_or(default_trials);
        let mut spec = ExperimentSpec::new(self.adaptive_config()?, e.targets.clone(), trials);
        spec.true_noise = self.true_noise()?;
        spec.method = self.adaptive.method.into();
        spec.steps_list = e.steps_list.clone();
        spec.calibration_offsets = e.calibration_offsets.clone();
        spec.base_seed = e.seed;
        Ok(spec)
    }

    pub fn verify_config(&self) -> VerifyConfig {
        let o = &self.oracle;
        VerifyConfig {
            qubits: o.qubits.clone(),
            instances: o.instances,
            levels: o.levels.clone(),
            survivals: o.survivals.clone(),
            seed: self.experiment.seed,
            tolerances: Tolerances {
                probability: o.probability_tolerance,
                qfi: o.qfi_tolerance,
                three_valued: o.three_valued_tolerance,
            },
        }
    }
}
