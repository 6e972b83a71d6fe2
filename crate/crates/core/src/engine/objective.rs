use crate::error::{Error, Result};
use crate::fmath;
use crate::model::{self, AmplifiedLevel, NoiseModel};

/// Relative tolerance under which two objective values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// `sin^2(alpha theta) / (1 - delta cos^2(alpha theta))`.
///
/// Zero wherever `sin(alpha theta)` is zero, including `delta = 1`.
pub fn regularizer(alpha: u32, theta: f64, delta: f64) -> f64 {
    let (s, c) = fmath::sin_cos(alpha as f64 * theta);
    let (s2, c2) = (s * s, c * c);
    if s2 == 0.0 {
        return 0.0;
    }
    // 1 - delta c^2 = (1 - delta) c^2 + s^2
    s2 / ((1.0 - delta) * c2 + s2)
}

/// Regularized classical Fisher information per query.
pub fn objective(alpha: u32, theta_hat: f64, noise: &NoiseModel, delta: f64) -> Result<f64> {
    let level = AmplifiedLevel::new(alpha)?;
    model::check_theta(theta_hat)?;
    Ok(objective_unchecked(level, theta_hat, noise, delta))
}

pub(crate) fn objective_unchecked(
    level: AmplifiedLevel,
    theta_hat: f64,
    noise: &NoiseModel,
    delta: f64,
) -> f64 {
    let alpha = level.alpha();
    model::classical_fisher_unchecked(level, theta_hat, noise) / alpha as f64
        * regularizer(alpha, theta_hat, delta)
}

/// Chosen level and whether the choice was forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaChoice {
    pub alpha: u32,
    /// The objective vanished on the whole range; `alpha` is then the
    /// smallest candidate.
    pub degenerate: bool,
}

/// Exhaustive maximization of [`objective`] over `range`.
///
/// Candidates within [`TIE_TOLERANCE`] of the maximum resolve to the
/// smallest level.
pub fn optimize_alpha(
    theta_hat: f64,
    range: &[u32],
    noise: &NoiseModel,
    delta: f64,
) -> Result<AlphaChoice> {
    model::check_theta(theta_hat)?;
    if range.is_empty() {
        return Err(Error::EmptyRange);
    }
    let mut values = alloc::vec::Vec::with_capacity(range.len());
    let mut best: f64 = 0.0;
    for &alpha in range {
        let v = objective_unchecked(AmplifiedLevel::new(alpha)?, theta_hat, noise, delta);
        best = best.max(v);
        values.push(v);
    }
    let smallest = *range.iter().min().expect("range is non-empty");
    if best.is_nan() || best <= 0.0 {
        return Ok(AlphaChoice {
            alpha: smallest,
            degenerate: true,
        });
    }
    let threshold = best * (1.0 - TIE_TOLERANCE);
    let alpha = range
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v >= threshold)
        .map(|(&a, _)| a)
        .min()
        .expect("the maximizer passes its own threshold");
    Ok(AlphaChoice {
        alpha,
        degenerate: false,
    })
}
