//! Adaptive maximum-likelihood estimation of `<O> = cos(theta*)`.
//!
//! One run proceeds in `M` steps. Step `k` reads out `N` copies of the
//! level-`alpha_k` state, recomputes the maximum-likelihood estimate from
//! every record so far, and then picks `alpha_{k+1}` from the range `D_k` by
//! maximizing regularized Fisher information per query at the current
//! estimate. `alpha_1 = 1` is fixed.

mod asymptotic;
mod likelihood;
mod objective;
mod run;

pub use asymptotic::{
    alpha_bc, asymptotic_alphas, asymptotic_total_fisher, ccr_qcr_bounds, fisher_report,
    method_alphas, total_fisher, FisherKind, FisherReport,
};
pub use likelihood::{log_likelihood, mle_search, PreviousEstimate, LIKELIHOOD_CLAMP};
pub use objective::{objective, optimize_alpha, regularizer, AlphaChoice, TIE_TOLERANCE};
pub use run::{run_adaptive, run_method, ExpectedOutcomes, OutcomeSource, SampledOutcomes};

use crate::error::{Error, Result};
use crate::model::{AmplifiedLevel, NoiseModel};
use alloc::format;
use alloc::vec::Vec;

/// Outcome of the `N` readouts at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    level: AmplifiedLevel,
    shots: u64,
    hits: u64,
}

impl MeasurementRecord {
    pub fn new(level: AmplifiedLevel, shots: u64, hits: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if hits > shots {
            return Err(Error::HitsExceedShots { hits, shots });
        }
        Ok(Self { level, shots, hits })
    }

    pub fn level(&self) -> AmplifiedLevel {
        self.level
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }
}

/// Candidate levels `D_k` for the optimization after step `k` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeSchedule {
    /// `D_k = {2, 3, ..., 2^(k+1)}`, optionally truncated at `cap`.
    Doubling { cap: Option<u32> },
    /// `D_k` given explicitly; entry `k - 1` is used after step `k`.
    Explicit(Vec<Vec<u32>>),
}

impl Default for RangeSchedule {
    fn default() -> Self {
        RangeSchedule::Doubling { cap: None }
    }
}

impl RangeSchedule {
    /// `D_k` for `k >= 1`.
    pub fn range(&self, k: usize) -> Result<Vec<u32>> {
        if k == 0 {
            return Err(Error::Config(format!("range index starts at 1, got {k}")));
        }
        let levels = match self {
            RangeSchedule::Doubling { cap } => {
                let top = if k + 1 >= 32 {
                    u32::MAX
                } else {
                    1u32 << (k + 1)
                };
                let top = cap.map_or(top, |c| top.min(c));
                (2..=top).collect::<Vec<_>>()
            }
            RangeSchedule::Explicit(sets) => sets
                .get(k - 1)
                .cloned()
                .ok_or_else(|| Error::Config(format!("no optimization range for step {k}")))?,
        };
        if levels.is_empty() {
            return Err(Error::EmptyRange);
        }
        if let Some(&bad) = levels.iter().find(|&&a| a < 2) {
            return Err(Error::LevelBelowTwo(bad));
        }
        Ok(levels)
    }
}

/// Parameters of the narrowing brute-force likelihood search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleGrid {
    /// Search domain is `(margin, pi - margin)`.
    pub domain_margin: f64,
    /// Global grid has `points_per_level * alpha_max + 1` points.
    pub global_points_per_level: u32,
    /// Window spacing is at most `pi / (window_points_per_level * alpha_max)`.
    pub window_points_per_level: u32,
    /// Window half-width is `window_constant / sqrt(total Fisher)`.
    pub window_constant: f64,
    /// Absolute tolerance of the golden-section refinement.
    pub refine_tolerance: f64,
    /// The global re-check replaces the window optimum only if it is better
    /// by more than this many log-likelihood units.
    pub recheck_margin: f64,
}

impl Default for MleGrid {
    fn default() -> Self {
        Self {
            domain_margin: 1e-6,
            global_points_per_level: 40,
            window_points_per_level: 20,
            window_constant: 5.0,
            refine_tolerance: 1e-10,
            recheck_margin: 1e-6,
        }
    }
}

/// Settings of one adaptive run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveConfig {
    /// Shots `N` per step.
    pub shots: u64,
    /// Number of steps `M`.
    pub steps: usize,
    /// Regularization strength in `(0, 1]`.
    pub delta: f64,
    pub range_schedule: RangeSchedule,
    /// Noise assumed by the likelihood and the level optimization. Differs
    /// from the sampling noise only when studying miscalibration.
    pub likelihood_noise: NoiseModel,
    pub grid: MleGrid,
}

impl AdaptiveConfig {
    pub const DEFAULT_DELTA: f64 = 0.95;

    pub fn new(shots: u64, steps: usize, likelihood_noise: NoiseModel) -> Self {
        Self {
            shots,
            steps,
            delta: Self::DEFAULT_DELTA,
            range_schedule: RangeSchedule::default(),
            likelihood_noise,
            grid: MleGrid::default(),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn with_schedule(mut self, schedule: RangeSchedule) -> Self {
        self.range_schedule = schedule;
        self
    }

    pub fn with_likelihood_noise(mut self, noise: NoiseModel) -> Self {
        self.likelihood_noise = noise;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::Config(format!(
                "delta must lie in (0, 1], got {}",
                self.delta
            )));
        }
        for k in 1..self.steps {
            self.range_schedule.range(k)?;
        }
        let g = &self.grid;
        let positive = |x: f64| x > 0.0;
        if !(positive(g.domain_margin) && g.domain_margin < 0.5)
            || g.global_points_per_level == 0
            || g.window_points_per_level == 0
            || !positive(g.window_constant)
            || !positive(g.refine_tolerance)
            || !(positive(g.recheck_margin) || g.recheck_margin == 0.0)
        {
            return Err(Error::Config("invalid likelihood search grid".into()));
        }
        Ok(())
    }
}

/// How the amplified levels are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Regularized Fisher-per-query optimization at each step.
    Adaptive,
    /// `alpha_k = 1` for every step: plain sampling, no amplification.
    Standard,
    /// `alpha_1 = 1`, `alpha_k = 2^k` for `k >= 2`.
    NonAdaptive,
}

impl Method {
    /// Preset level of step `k` (1-based), `None` for the adaptive method.
    pub fn fixed_level(self, k: usize) -> Option<u32> {
        match self {
            Method::Adaptive => None,
            Method::Standard => Some(1),
            Method::NonAdaptive if k <= 1 => Some(1),
            Method::NonAdaptive => Some(if k >= 32 { u32::MAX } else { 1u32 << k }),
        }
    }
}

/// Full output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<MeasurementRecord>,
    /// `theta_hat_k` after each step.
    pub estimates: Vec<f64>,
    pub alphas: Vec<u32>,
    /// `N * sum(alpha_k)`.
    pub total_queries: u64,
    /// Steps `k` whose optimization found the objective zero on all of `D_k`.
    pub degenerate_steps: Vec<usize>,
}

impl Trajectory {
    pub fn final_estimate(&self) -> f64 {
        *self
            .estimates
            .last()
            .expect("trajectory has at least one step")
    }

    /// `cos(theta_hat_M)`.
    pub fn final_mean_value(&self) -> f64 {
        crate::fmath::cos(self.final_estimate())
    }

    pub fn hits(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.hits()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn doubling_schedule() {
        let s = RangeSchedule::default();
        assert_eq!(s.range(1).unwrap(), vec![2, 3, 4]);
        assert_eq!(s.range(2).unwrap(), (2..=8).collect::<Vec<_>>());
        assert_eq!(s.range(7).unwrap().len(), 255);
        let capped = RangeSchedule::Doubling { cap: Some(5) };
        assert_eq!(capped.range(3).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(
            RangeSchedule::Doubling { cap: Some(1) }.range(1),
            Err(Error::EmptyRange)
        );
        assert!(s.range(0).is_err());
    }

    #[test]
    fn explicit_schedule_validation() {
        let s = RangeSchedule::Explicit(vec![vec![2, 3], vec![1, 4]]);
        assert_eq!(s.range(1).unwrap(), vec![2, 3]);
        assert_eq!(s.range(2), Err(Error::LevelBelowTwo(1)));
        assert!(s.range(3).is_err());
    }

    #[test]
    fn record_validation() {
        let l = AmplifiedLevel::new(3).unwrap();
        assert!(MeasurementRecord::new(l, 10, 11).is_err());
        assert!(MeasurementRecord::new(l, 0, 0).is_err());
        assert!(MeasurementRecord::new(l, 10, 10).is_ok());
    }

    #[test]
    fn config_validation() {
        let nm = NoiseModel::new(0.995, 20).unwrap();
        assert!(AdaptiveConfig::new(500, 8, nm).validate().is_ok());
        assert!(AdaptiveConfig::new(0, 8, nm).validate().is_err());
        assert!(AdaptiveConfig::new(500, 0, nm).validate().is_err());
        assert!(AdaptiveConfig::new(500, 8, nm)
            .with_delta(0.0)
            .validate()
            .is_err());
        let short = RangeSchedule::Explicit(vec![vec![2]]);
        assert!(AdaptiveConfig::new(500, 3, nm)
            .with_schedule(short)
            .validate()
            .is_err());
    }

    #[test]
    fn method_levels() {
        assert_eq!(Method::Adaptive.fixed_level(3), None);
        assert_eq!(Method::Standard.fixed_level(5), Some(1));
        assert_eq!(Method::NonAdaptive.fixed_level(1), Some(1));
        assert_eq!(Method::NonAdaptive.fixed_level(2), Some(4));
        assert_eq!(Method::NonAdaptive.fixed_level(8), Some(256));
    }
}
