//! Monte Carlo studies over many independent runs.
//!
//! Trial `i` of every cell draws from `RandomStream::new(base_seed, i)`, so
//! cells that differ only in a setting share their random numbers and every
//! table is reproducible regardless of thread count.

use qmean_core::engine::{fisher_report, method_alphas, total_fisher};
use qmean_core::stats;
use qmean_core::{
    alpha_b, alpha_b_default_cap, quantum_fisher, run_method, AdaptiveConfig, AmplifiedLevel,
    ExpectedOutcomes, FisherKind, Method, NoiseModel, RandomStream, SampledOutcomes, TargetValue,
    Trajectory,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Errors beyond this many asymptotic standard deviations count as outliers.
pub const OUTLIER_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Mean values `cos(theta*)` to sweep.
    pub targets: Vec<f64>,
    pub trials: u64,
    /// Shots, default steps, range schedule and the estimator's noise model.
    pub config: AdaptiveConfig,
    /// Noise used to sample outcomes.
    pub true_noise: NoiseModel,
    pub method: Method,
    /// Step counts `M` for the RMSE and calibration sweeps.
    pub steps_list: Vec<usize>,
    /// Relative errors applied to `p_q` in the calibration sweep.
    pub calibration_offsets: Vec<f64>,
    pub base_seed: u64,
}

impl ExperimentSpec {
    pub fn new(config: AdaptiveConfig, targets: Vec<f64>, trials: u64) -> Self {
        Self {
            targets,
            trials,
            true_noise: config.likelihood_noise,
            steps_list: vec![config.steps],
            config,
            method: Method::Adaptive,
            calibration_offsets: Vec::new(),
            base_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(CliError::invalid("at least one target is required"));
        }
        for &t in &self.targets {
            TargetValue::from_mean_value(t)?;
        }
        if self.trials == 0 {
            return Err(CliError::invalid("trials must be at least 1"));
        }
        if self.steps_list.is_empty() || self.steps_list.contains(&0) {
            return Err(CliError::invalid("steps list must hold positive integers"));
        }
        if self.true_noise.n_qubits() != self.config.likelihood_noise.n_qubits() {
            return Err(CliError::invalid(
                "true and assumed noise models act on different qubit counts",
            ));
        }
        self.config.validate()?;
        Ok(())
    }

    fn with_steps(&self, steps: usize) -> AdaptiveConfig {
        self.config.clone().with_steps(steps)
    }
}

/// `trials` independent runs with streams `(seed, 0..trials)`.
pub fn run_trials(
    config: &AdaptiveConfig,
    method: Method,
    theta_true: f64,
    true_noise: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut stream = RandomStream::new(seed, i);
            let mut source = SampledOutcomes {
                stream: &mut stream,
                theta_true,
                true_noise: *true_noise,
            };
            run_method(config, method, &mut source).map_err(CliError::from)
        })
        .collect()
}

fn rms(errors: &[f64]) -> f64 {
    stats::root_mean_square(errors)
}

/// Errors and summary of one `(target, M)` cell.
struct CellResult {
    errors: Vec<f64>,
    max_total_queries: u64,
}

fn run_cell(
    config: &AdaptiveConfig,
    method: Method,
    target: f64,
    true_noise: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<CellResult> {
    let theta = TargetValue::from_mean_value(target)?.theta();
    let runs = run_trials(config, method, theta, true_noise, trials, seed)?;
    Ok(CellResult {
        errors: runs.iter().map(|t| t.final_mean_value() - target).collect(),
        max_total_queries: runs.iter().map(|t| t.total_queries).max().unwrap_or(0),
    })
}

/// One row of the RMSE sweep. All bounds are on the RMSE scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub target: f64,
    pub steps: usize,
    pub max_total_queries: u64,
    pub rmse: f64,
    /// RMSE over trials that are not outliers.
    pub rmse_filtered: f64,
    pub outliers: u64,
    /// `sqrt((1 - c^2) / I_c,tot)` along the asymptotic level sequence.
    pub ccr_bound: f64,
    /// `sqrt((1 - c^2) / I_q,tot)` along the asymptotic level sequence.
    pub qcr_bound: f64,
    /// Best RMSE any schedule can reach with `max_total_queries` queries.
    pub precision_limit: f64,
    /// Noiseless Heisenberg scaling `sqrt(1 - c^2) / N_q`.
    pub heisenberg_reference: f64,
}

pub fn rmse_sweep(spec: &ExperimentSpec) -> Result<Vec<RmseRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &target in &spec.targets {
        let theta = TargetValue::from_mean_value(target)?.theta();
        for &steps in &spec.steps_list {
            let config = spec.with_steps(steps);
            let cell = run_cell(
                &config,
                spec.method,
                target,
                &spec.true_noise,
                spec.trials,
                spec.base_seed,
            )?;
            let report = fisher_report(theta, &spec.true_noise, &config, spec.method)?;
            let ccr = report.ccr_bound.sqrt();
            let cutoff = OUTLIER_FACTOR * ccr;
            let kept: Vec<f64> = cell
                .errors
                .iter()
                .copied()
                .filter(|e| e.abs() <= cutoff)
                .collect();
            let s2 = 1.0 - target * target;
            rows.push(RmseRow {
                target,
                steps,
                max_total_queries: cell.max_total_queries,
                rmse: rms(&cell.errors),
                rmse_filtered: if kept.is_empty() {
                    f64::NAN
                } else {
                    rms(&kept)
                },
                outliers: (cell.errors.len() - kept.len()) as u64,
                ccr_bound: ccr,
                qcr_bound: report.qcr_bound.sqrt(),
                precision_limit: qmean_core::mse_lower_bound(
                    cell.max_total_queries,
                    &spec.true_noise,
                    Some(target),
                )?
                .sqrt(),
                heisenberg_reference: s2.sqrt() / cell.max_total_queries as f64,
            });
        }
    }
    Ok(rows)
}

/// Asymptotic Fisher information of the three methods at one target.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeRow {
    pub target: f64,
    pub adaptive_classical: f64,
    pub adaptive_quantum: f64,
    pub standard_classical: f64,
    pub non_adaptive_classical: f64,
    /// CCR bounds (MSE scale) of the three methods.
    pub adaptive_ccr: f64,
    pub standard_ccr: f64,
    pub non_adaptive_ccr: f64,
    /// `I_q,tot / I_c,tot` of the adaptive sequence.
    pub quantum_over_classical: f64,
    /// `(N*_q I_q(alpha_B) / alpha_B) / I_q,tot`: gap to the best schedule
    /// with the same number of queries.
    pub limit_over_quantum: f64,
    /// `I_c,tot(adaptive) / I_c,tot(standard)`.
    pub improvement: f64,
}

/// Mean values `i / (points + 1)` for `i = 1..=points`.
pub fn landscape_grid(points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| i as f64 / (points + 1) as f64)
        .collect()
}

pub fn fisher_landscape(spec: &ExperimentSpec, grid_points: usize) -> Result<Vec<LandscapeRow>> {
    if grid_points < 2 {
        return Err(CliError::invalid("grid needs at least 2 points"));
    }
    spec.config.validate()?;
    let noise = spec.true_noise;
    let config = &spec.config;
    let ab = alpha_b(&noise, alpha_b_default_cap(&noise)?)?;
    let per_query_limit = quantum_fisher(AmplifiedLevel::new(ab)?, &noise) / ab as f64;
    landscape_grid(grid_points)
        .into_par_iter()
        .map(|target| {
            let theta = TargetValue::from_mean_value(target)?.theta();
            let s2 = 1.0 - target * target;
            let classical = |method| -> Result<(f64, Vec<u32>)> {
                let alphas = method_alphas(method, theta, &noise, config)?;
                let f = total_fisher(&alphas, theta, &noise, config.shots, FisherKind::Classical)?;
                Ok((f, alphas))
            };
            let (adaptive_classical, alphas) = classical(Method::Adaptive)?;
            let adaptive_quantum =
                total_fisher(&alphas, theta, &noise, config.shots, FisherKind::Quantum)?;
            let (standard_classical, _) = classical(Method::Standard)?;
            let (non_adaptive_classical, _) = classical(Method::NonAdaptive)?;
            let queries = config.shots as f64 * alphas.iter().map(|&a| a as f64).sum::<f64>();
            Ok(LandscapeRow {
                target,
                adaptive_classical,
                adaptive_quantum,
                standard_classical,
                non_adaptive_classical,
                adaptive_ccr: s2 / adaptive_classical,
                standard_ccr: s2 / standard_classical,
                non_adaptive_ccr: s2 / non_adaptive_classical,
                quantum_over_classical: adaptive_quantum / adaptive_classical,
                limit_over_quantum: queries * per_query_limit / adaptive_quantum,
                improvement: adaptive_classical / standard_classical,
            })
        })
        .collect()
}

/// Per-step statistics of `alpha_k / alpha*_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub target: f64,
    pub shots: u64,
    pub step: usize,
    pub asymptotic_alpha: u32,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    /// Fraction of trials with `alpha_k = alpha*_k`.
    pub step_match: f64,
}

/// Fraction of trials whose whole level sequence equals the asymptotic one.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceMatch {
    pub target: f64,
    pub shots: u64,
    pub trials: u64,
    pub full_match: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub sequences: Vec<SequenceMatch>,
}

pub fn alpha_convergence(spec: &ExperimentSpec, shot_list: &[u64]) -> Result<ConvergenceReport> {
    spec.validate()?;
    if shot_list.is_empty() || shot_list.contains(&0) {
        return Err(CliError::invalid("shot list must hold positive integers"));
    }
    let mut rows = Vec::new();
    let mut sequences = Vec::new();
    for &target in &spec.targets {
        let theta = TargetValue::from_mean_value(target)?.theta();
        let star = method_alphas(
            spec.method,
            theta,
            &spec.config.likelihood_noise,
            &spec.config,
        )?;
        for &shots in shot_list {
            let config = spec.config.clone().with_shots(shots);
            let runs = run_trials(
                &config,
                spec.method,
                theta,
                &spec.true_noise,
                spec.trials,
                spec.base_seed,
            )?;
            for (k, &a_star) in star.iter().enumerate() {
                let ratios: Vec<f64> = runs
                    .iter()
                    .map(|t| t.alphas[k] as f64 / a_star as f64)
                    .collect();
                let hits = runs.iter().filter(|t| t.alphas[k] == a_star).count();
                rows.push(ConvergenceRow {
                    target,
                    shots,
                    step: k + 1,
                    asymptotic_alpha: a_star,
                    mean_ratio: stats::mean(&ratios),
                    std_ratio: if ratios.len() > 1 {
                        stats::variance(&ratios).sqrt()
                    } else {
                        0.0
                    },
                    step_match: hits as f64 / runs.len() as f64,
                });
            }
            let full = runs.iter().filter(|t| t.alphas == star).count();
            sequences.push(SequenceMatch {
                target,
                shots,
                trials: spec.trials,
                full_match: full as f64 / runs.len() as f64,
            });
        }
    }
    Ok(ConvergenceReport { rows, sequences })
}

/// Level sequence of a run fed with exact expected counts `round(N P)`.
pub fn expected_count_alphas(config: &AdaptiveConfig, target: f64) -> Result<Vec<u32>> {
    let theta = TargetValue::from_mean_value(target)?.theta();
    let mut source = ExpectedOutcomes {
        theta_true: theta,
        true_noise: config.likelihood_noise,
    };
    Ok(run_method(config, Method::Adaptive, &mut source)?.alphas)
}

/// Distribution of the standardized final estimate at one target.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalitySummary {
    pub target: f64,
    pub shots: u64,
    pub steps: usize,
    pub trials: u64,
    /// Asymptotic total classical Fisher information.
    pub fisher_total: f64,
    /// MSE-scale CCR bound `(1 - c^2) / fisher_total`.
    pub ccr_bound: f64,
    pub outliers: u64,
    pub outlier_fraction: f64,
    /// Moments and KS test of `z` over non-outliers.
    pub z_mean: f64,
    pub z_variance: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    /// Fraction of all trials with `|z| <= 3`.
    pub mass_within_3sigma: f64,
}

/// One trial of the normality study.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalitySample {
    pub target: f64,
    pub trial: u64,
    pub estimate: f64,
    /// `sqrt(I*_c,tot) (cos theta_hat - c) / sqrt(1 - c^2)`.
    pub z: f64,
    pub outlier: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub summaries: Vec<NormalitySummary>,
    pub samples: Vec<NormalitySample>,
}

pub fn normality_study(spec: &ExperimentSpec) -> Result<NormalityReport> {
    spec.validate()?;
    let config = &spec.config;
    let mut summaries = Vec::new();
    let mut samples = Vec::new();
    for &target in &spec.targets {
        let theta = TargetValue::from_mean_value(target)?.theta();
        let report = fisher_report(theta, &spec.true_noise, config, spec.method)?;
        let runs = run_trials(
            config,
            spec.method,
            theta,
            &spec.true_noise,
            spec.trials,
            spec.base_seed,
        )?;
        let scale = (report.classical_total / (1.0 - target * target)).sqrt();
        let cutoff = OUTLIER_FACTOR * report.ccr_bound.sqrt();
        let mut kept = Vec::new();
        let mut within = 0u64;
        for (i, t) in runs.iter().enumerate() {
            let err = t.final_mean_value() - target;
            let z = scale * err;
            let outlier = err.abs() > cutoff;
            if !outlier {
                kept.push(z);
            }
            if z.abs() <= 3.0 {
                within += 1;
            }
            samples.push(NormalitySample {
                target,
                trial: i as u64,
                estimate: t.final_mean_value(),
                z,
                outlier,
            });
        }
        let outliers = runs.len() as u64 - kept.len() as u64;
        let ks = stats::ks_statistic_normal(&kept);
        summaries.push(NormalitySummary {
            target,
            shots: config.shots,
            steps: config.steps,
            trials: spec.trials,
            fisher_total: report.classical_total,
            ccr_bound: report.ccr_bound,
            outliers,
            outlier_fraction: outliers as f64 / runs.len() as f64,
            z_mean: stats::mean(&kept),
            z_variance: stats::variance(&kept),
            ks_statistic: ks,
            ks_p_value: stats::ks_p_value(ks, kept.len()),
            mass_within_3sigma: within as f64 / runs.len() as f64,
        });
    }
    Ok(NormalityReport { summaries, samples })
}

/// RMSE with a miscalibrated `p_q` in the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub target: f64,
    pub offset: f64,
    pub assumed_p_q: f64,
    pub steps: usize,
    pub max_total_queries: u64,
    pub rmse: f64,
    /// RMSE-scale QCR bound of the perfectly calibrated estimator.
    pub calibrated_qcr_bound: f64,
    pub rmse_over_bound: f64,
}

pub fn calibration_sweep(spec: &ExperimentSpec) -> Result<Vec<CalibrationRow>> {
    spec.validate()?;
    if spec.calibration_offsets.is_empty() {
        return Err(CliError::invalid(
            "calibration sweep needs at least one offset",
        ));
    }
    let truth = spec.true_noise;
    let mut rows = Vec::new();
    for &target in &spec.targets {
        let theta = TargetValue::from_mean_value(target)?.theta();
        for &offset in &spec.calibration_offsets {
            let assumed = truth.with_p_q(truth.p_q() * (1.0 + offset))?;
            for &steps in &spec.steps_list {
                let calibrated = spec.with_steps(steps).with_likelihood_noise(truth);
                let bound = fisher_report(theta, &truth, &calibrated, spec.method)?
                    .qcr_bound
                    .sqrt();
                let config = calibrated.with_likelihood_noise(assumed);
                let cell = run_cell(
                    &config,
                    spec.method,
                    target,
                    &truth,
                    spec.trials,
                    spec.base_seed,
                )?;
                let rmse = rms(&cell.errors);
                rows.push(CalibrationRow {
                    target,
                    offset,
                    assumed_p_q: assumed.p_q(),
                    steps,
                    max_total_queries: cell.max_total_queries,
                    rmse,
                    calibrated_qcr_bound: bound,
                    rmse_over_bound: rmse / bound,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(trials: u64) -> ExperimentSpec {
        let nm = NoiseModel::new(0.995, 20).unwrap();
        ExperimentSpec::new(AdaptiveConfig::new(100, 3, nm), vec![0.5], trials)
    }

    #[test]
    fn single_trial_sweep_emits_rows() {
        let mut s = spec(1);
        s.steps_list = vec![1, 2, 3];
        let rows = rmse_sweep(&s).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r.rmse >= 0.0);
            assert!(r.ccr_bound >= r.qcr_bound && r.qcr_bound > 0.0);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(1);
        s.targets = vec![1.0];
        assert!(rmse_sweep(&s).is_err());
        let mut s = spec(0);
        s.targets = vec![0.2];
        assert!(rmse_sweep(&s).is_err());
        assert!(fisher_landscape(&spec(1), 1).is_err());
        assert!(calibration_sweep(&spec(1)).is_err());
    }

    #[test]
    fn standard_baseline_is_constant_sum() {
        let s = spec(1);
        let rows = fisher_landscape(&s, 5).unwrap();
        let nm = s.true_noise;
        for r in rows {
            let theta = r.target.acos();
            let one = AmplifiedLevel::new(1).unwrap();
            let want = 100.0 * 3.0 * qmean_core::classical_fisher(one, theta, &nm).unwrap();
            assert!(((r.standard_classical - want) / want).abs() < 1e-12);
            assert!(r.adaptive_classical > 0.0);
            assert!(r.quantum_over_classical >= 1.0);
        }
    }

    #[test]
    fn expected_counts_reach_asymptotic_sequence() {
        let nm = NoiseModel::new(0.995, 20).unwrap();
        let cfg = AdaptiveConfig::new(1_000_000, 8, nm);
        for target in [0.042f64, 0.5] {
            let star = qmean_core::asymptotic_alphas(target.acos(), &nm, &cfg).unwrap();
            assert_eq!(expected_count_alphas(&cfg, target).unwrap(), star);
        }
    }

    #[test]
    fn deterministic_tables() {
        let mut s = spec(4);
        s.base_seed = 11;
        assert_eq!(rmse_sweep(&s).unwrap(), rmse_sweep(&s).unwrap());
    }
}
