use super::likelihood::{mle_search, PreviousEstimate};
use super::objective::optimize_alpha;
use super::{AdaptiveConfig, MeasurementRecord, Method, Trajectory};
use crate::error::Result;
use crate::model::{self, outcome_pair, AmplifiedLevel, NoiseModel};
use crate::sampler::RandomStream;
use alloc::vec::Vec;

/// Supplies the number of "1" outcomes for a step.
pub trait OutcomeSource {
    fn outcome(&mut self, level: AmplifiedLevel, shots: u64) -> Result<u64>;
}

/// Binomial draws at the true angle.
pub struct SampledOutcomes<'a> {
    pub stream: &'a mut RandomStream,
    pub theta_true: f64,
    pub true_noise: NoiseModel,
}

impl OutcomeSource for SampledOutcomes<'_> {
    fn outcome(&mut self, level: AmplifiedLevel, shots: u64) -> Result<u64> {
        self.stream
            .sample_step(level, self.theta_true, &self.true_noise, shots)
    }
}

/// Noise-free data: `round(N * P)` hits at the true angle.
#[derive(Debug, Clone, Copy)]
pub struct ExpectedOutcomes {
    pub theta_true: f64,
    pub true_noise: NoiseModel,
}

impl OutcomeSource for ExpectedOutcomes {
    fn outcome(&mut self, level: AmplifiedLevel, shots: u64) -> Result<u64> {
        model::check_theta(self.theta_true)?;
        let (p, _) = outcome_pair(level, self.theta_true, &self.true_noise);
        let x = libm::round(p.clamp(0.0, 1.0) * shots as f64) as u64;
        Ok(x.min(shots))
    }
}

/// One adaptive run with binomial sampling under `true_noise`.
pub fn run_adaptive(
    config: &AdaptiveConfig,
    theta_true: f64,
    true_noise: &NoiseModel,
    stream: &mut RandomStream,
) -> Result<Trajectory> {
    model::check_theta(theta_true)?;
    let mut source = SampledOutcomes {
        stream,
        theta_true,
        true_noise: *true_noise,
    };
    run_method(config, Method::Adaptive, &mut source)
}

/// One run of `method` fed by `source`.
///
/// The likelihood and the level optimization use `config.likelihood_noise`.
pub fn run_method(
    config: &AdaptiveConfig,
    method: Method,
    source: &mut impl OutcomeSource,
) -> Result<Trajectory> {
    config.validate()?;
    let noise = &config.likelihood_noise;
    let steps = config.steps;
    let mut records: Vec<MeasurementRecord> = Vec::with_capacity(steps);
    let mut estimates = Vec::with_capacity(steps);
    let mut alphas = Vec::with_capacity(steps);
    let mut degenerate_steps = Vec::new();
    let mut next_alpha = 1u32;
    let mut previous: Option<PreviousEstimate> = None;

    for k in 1..=steps {
        let level = AmplifiedLevel::new(next_alpha)?;
        let hits = source.outcome(level, config.shots)?;
        records.push(MeasurementRecord::new(level, config.shots, hits)?);
        alphas.push(next_alpha);

        let theta_hat = mle_search(&records, noise, &config.grid, previous)?;
        estimates.push(theta_hat);

        if k == steps {
            break;
        }
        next_alpha = match method.fixed_level(k + 1) {
            Some(a) => a,
            None => {
                let range = config.range_schedule.range(k)?;
                let choice = optimize_alpha(theta_hat, &range, noise, config.delta)?;
                if choice.degenerate {
                    degenerate_steps.push(k);
                }
                choice.alpha
            }
        };
        let fisher_total: f64 = records
            .iter()
            .map(|r| {
                r.shots() as f64 * model::classical_fisher_unchecked(r.level(), theta_hat, noise)
            })
            .sum();
        previous = Some(PreviousEstimate {
            theta: theta_hat,
            fisher_total,
        });
    }

    let total_queries = config.shots * alphas.iter().map(|&a| a as u64).sum::<u64>();
    Ok(Trajectory {
        records,
        estimates,
        alphas,
        total_queries,
        degenerate_steps,
    })
}
