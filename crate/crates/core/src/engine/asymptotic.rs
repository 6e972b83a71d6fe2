use super::objective::optimize_alpha;
use super::{AdaptiveConfig, Method};
use crate::error::Result;
use crate::fmath;
use crate::model::{
    self, alpha_b, alpha_b_default_cap, mse_lower_bound, quantum_fisher, AmplifiedLevel, NoiseModel,
};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FisherKind {
    Classical,
    Quantum,
}

/// Level sequence the adaptive method settles on when every estimate equals
/// the true angle. The first level is always 1.
pub fn asymptotic_alphas(
    theta_true: f64,
    noise: &NoiseModel,
    config: &AdaptiveConfig,
) -> Result<Vec<u32>> {
    method_alphas(Method::Adaptive, theta_true, noise, config)
}

/// Level sequence of `method` at the true angle.
pub fn method_alphas(
    method: Method,
    theta_true: f64,
    noise: &NoiseModel,
    config: &AdaptiveConfig,
) -> Result<Vec<u32>> {
    model::check_theta(theta_true)?;
    config.validate()?;
    let mut out = Vec::with_capacity(config.steps);
    out.push(1);
    for k in 2..=config.steps {
        let alpha = match method.fixed_level(k) {
            Some(a) => a,
            None => {
                let range = config.range_schedule.range(k - 1)?;
                optimize_alpha(theta_true, &range, noise, config.delta)?.alpha
            }
        };
        out.push(alpha);
    }
    Ok(out)
}

/// `shots * sum_k I(alpha_k; theta)`.
pub fn total_fisher(
    alphas: &[u32],
    theta: f64,
    noise: &NoiseModel,
    shots: u64,
    kind: FisherKind,
) -> Result<f64> {
    model::check_theta(theta)?;
    let mut acc = 0.0;
    for &a in alphas {
        let level = AmplifiedLevel::new(a)?;
        acc += match kind {
            FisherKind::Classical => model::classical_fisher_unchecked(level, theta, noise),
            FisherKind::Quantum => quantum_fisher(level, noise),
        };
    }
    Ok(shots as f64 * acc)
}

/// Total Fisher information of the asymptotic adaptive sequence.
pub fn asymptotic_total_fisher(
    theta_true: f64,
    noise: &NoiseModel,
    config: &AdaptiveConfig,
    kind: FisherKind,
) -> Result<f64> {
    let alphas = asymptotic_alphas(theta_true, noise, config)?;
    total_fisher(&alphas, theta_true, noise, config.shots, kind)
}

/// Asymptotic classical and quantum Cramer-Rao bounds on the MSE of
/// `cos(theta_hat)`.
pub fn ccr_qcr_bounds(
    theta_true: f64,
    noise: &NoiseModel,
    config: &AdaptiveConfig,
) -> Result<(f64, f64)> {
    let report = fisher_report(theta_true, noise, config, Method::Adaptive)?;
    Ok((report.ccr_bound, report.qcr_bound))
}

/// Asymptotic Fisher summary of one method at one target.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport {
    pub alphas: Vec<u32>,
    /// `N * sum_k alpha_k`.
    pub queries: u64,
    pub classical_total: f64,
    pub quantum_total: f64,
    /// `(1 - cos^2) / classical_total`.
    pub ccr_bound: f64,
    /// `(1 - cos^2) / quantum_total`.
    pub qcr_bound: f64,
    /// Best achievable MSE for the same number of queries.
    pub precision_limit: f64,
}

pub fn fisher_report(
    theta_true: f64,
    noise: &NoiseModel,
    config: &AdaptiveConfig,
    method: Method,
) -> Result<FisherReport> {
    let alphas = method_alphas(method, theta_true, noise, config)?;
    let classical_total = total_fisher(
        &alphas,
        theta_true,
        noise,
        config.shots,
        FisherKind::Classical,
    )?;
    let quantum_total = total_fisher(
        &alphas,
        theta_true,
        noise,
        config.shots,
        FisherKind::Quantum,
    )?;
    let c = fmath::cos(theta_true);
    let s2 = 1.0 - c * c;
    let queries = config.shots * alphas.iter().map(|&a| a as u64).sum::<u64>();
    Ok(FisherReport {
        ccr_bound: s2 / classical_total,
        qcr_bound: s2 / quantum_total,
        precision_limit: mse_lower_bound(queries, noise, Some(c))?,
        alphas,
        queries,
        classical_total,
        quantum_total,
    })
}

/// Unconstrained maximizer of the regularized Fisher information per query
/// at `theta`, searched up to `4 * alpha_B`.
pub fn alpha_bc(theta: f64, noise: &NoiseModel, delta: f64) -> Result<u32> {
    model::check_theta(theta)?;
    let cap = 4 * alpha_b(noise, alpha_b_default_cap(noise)?)?;
    let range: Vec<u32> = (1..=cap).collect();
    Ok(optimize_alpha(theta, &range, noise, delta)?.alpha)
}
