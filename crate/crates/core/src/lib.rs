//! Noisy amplitude-amplified mean-value estimation.
//!
//! `qmean-core` holds the pure part of the toolkit: the closed-form
//! measurement model of amplitude-amplified states under global
//! depolarization ([`model`]), a seedable binomial sampler ([`sampler`]) and
//! the adaptive maximum-likelihood estimator together with its asymptotic
//! Fisher-information machinery ([`engine`]).
//!
//! The crate is `no_std` and only needs `alloc`. Transcendental functions
//! come from `libm`, so results do not depend on the platform math library.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod engine;
mod error;
mod fmath;
pub mod model;
pub mod sampler;
pub mod stats;

pub use engine::{
    alpha_bc, asymptotic_alphas, asymptotic_total_fisher, ccr_qcr_bounds, fisher_report,
    log_likelihood, method_alphas, mle_search, objective, optimize_alpha, regularizer,
    run_adaptive, run_method, total_fisher, AdaptiveConfig, AlphaChoice, ExpectedOutcomes,
    FisherKind, FisherReport, MeasurementRecord, Method, MleGrid, OutcomeSource, PreviousEstimate,
    RangeSchedule, SampledOutcomes, Trajectory,
};
pub use error::{Error, Result};
pub use model::{
    alpha_b, alpha_b_default_cap, classical_fisher, epsilon_n, kappa, kappa_inf, mse_lower_bound,
    prob_one, quantum_fisher, three_valued_fisher, total_qfi_bound, AmplifiedLevel, NoiseModel,
    Parity, TargetValue,
};
pub use sampler::RandomStream;
