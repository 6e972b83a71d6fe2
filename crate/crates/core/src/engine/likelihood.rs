use super::{MeasurementRecord, MleGrid};
use crate::error::{Error, Result};
use crate::fmath;
use crate::model::{self, outcome_pair, NoiseModel};
use core::f64::consts::{FRAC_PI_2, PI};

/// Floor applied to outcome probabilities before taking logarithms.
pub const LIKELIHOOD_CLAMP: f64 = 1e-300;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Estimate from the previous step, used to center the search window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreviousEstimate {
    pub theta: f64,
    /// Classical Fisher information of all records so far, at `theta`.
    pub fisher_total: f64,
}

/// Binomial log-likelihood of `records` without the combinatorial constants.
pub fn log_likelihood(
    theta: f64,
    records: &[MeasurementRecord],
    likelihood_noise: &NoiseModel,
) -> Result<f64> {
    model::check_theta(theta)?;
    Ok(log_likelihood_unchecked(theta, records, likelihood_noise))
}

fn log_likelihood_unchecked(theta: f64, records: &[MeasurementRecord], noise: &NoiseModel) -> f64 {
    let mut acc = 0.0;
    for r in records {
        let (p1, p0) = outcome_pair(r.level(), theta, noise);
        let x = r.hits() as f64;
        let y = (r.shots() - r.hits()) as f64;
        if x > 0.0 {
            acc += x * fmath::ln(p1.max(LIKELIHOOD_CLAMP));
        }
        if y > 0.0 {
            acc += y * fmath::ln(p0.max(LIKELIHOOD_CLAMP));
        }
    }
    acc
}

/// Maximum-likelihood estimate of `theta` from `records`.
///
/// Without `previous`, the full domain is scanned. With it, a window of
/// half-width `min(pi/2, c_w / sqrt(fisher_total))` around the previous
/// estimate is scanned first and a global scan only overrides it when it is
/// clearly better. The best grid point is refined by golden section.
pub fn mle_search(
    records: &[MeasurementRecord],
    likelihood_noise: &NoiseModel,
    grid: &MleGrid,
    previous: Option<PreviousEstimate>,
) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let alpha_max = records
        .iter()
        .map(|r| r.level().alpha())
        .max()
        .expect("records are non-empty") as f64;
    let f = |t: f64| log_likelihood_unchecked(t, records, likelihood_noise);
    let lo = grid.domain_margin;
    let hi = PI - grid.domain_margin;

    let global_points = grid.global_points_per_level as f64 * alpha_max + 1.0;
    let global = || {
        let (t, _, step) = scan(lo, hi, global_points as usize, &f);
        refine(&f, t, step, lo, hi, grid.refine_tolerance)
    };

    let (theta, value) = match previous {
        None => global(),
        Some(prev) => {
            let half = if prev.fisher_total > 0.0 && prev.fisher_total.is_finite() {
                (grid.window_constant / fmath::sqrt(prev.fisher_total)).min(FRAC_PI_2)
            } else {
                FRAC_PI_2
            };
            let w_lo = (prev.theta - half).max(lo);
            let w_hi = (prev.theta + half).min(hi);
            let spacing = PI / (grid.window_points_per_level as f64 * alpha_max);
            let points = (fmath::ceil((w_hi - w_lo) / spacing) as usize + 1).max(3);
            let (t, _, step) = scan(w_lo, w_hi, points, &f);
            let (wt, wv) = refine(&f, t, step, w_lo, w_hi, grid.refine_tolerance);
            let (gt, gv) = global();
            if gv > wv + grid.recheck_margin {
                (gt, gv)
            } else {
                (wt, wv)
            }
        }
    };
    if !value.is_finite() {
        return Err(Error::NonFiniteLikelihood(value));
    }
    Ok(theta)
}

/// Uniform scan of `points >= 2` values on `[lo, hi]`; returns the best point,
/// its value and the spacing.
fn scan(lo: f64, hi: f64, points: usize, f: &impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (lo, f(lo));
    for i in 1..points {
        let t = if i == points - 1 {
            hi
        } else {
            lo + i as f64 * step
        };
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    (best.0, best.1, step)
}

/// Golden-section maximization on `[center - step, center + step]`, clipped
/// to `[lo, hi]`. Never returns a point worse than `center`.
fn refine(
    f: &impl Fn(f64) -> f64,
    center: f64,
    step: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let fc = f(center);
    let mut a = (center - step).max(lo);
    let mut b = (center + step).min(hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let t = 0.5 * (a + b);
    let ft = f(t);
    if ft >= fc {
        (t, ft)
    } else {
        (center, fc)
    }
}
