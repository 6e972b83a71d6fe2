//! Closed-form measurement model of noisy amplitude-amplified states.
//!
//! A prepare-and-measure cycle at amplified level `alpha` consumes `alpha`
//! queries to the state-preparation oracle. Odd levels (`alpha = 2m + 1`)
//! are read out with the observable projector, even levels
//! (`alpha = 2m + 2`) with the all-zeros projector. Every oracle call is
//! followed by global depolarization with survival probability `p_q`, so a
//! level-`alpha` state keeps weight `p_q^alpha` on the ideal state.
//!
//! All functions here are pure.

use crate::error::{Error, Result};
use crate::fmath;
use core::f64::consts::PI;

/// `|cos((m+1) theta)|` below this is treated as the singular point of
/// [`epsilon_n`] and [`kappa`].
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Global depolarization acting on an `n`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p_q: f64,
    n_qubits: u32,
}

impl NoiseModel {
    pub fn new(p_q: f64, n_qubits: u32) -> Result<Self> {
        if !(p_q > 0.0 && p_q <= 1.0) {
            return Err(Error::InvalidSurvival(p_q));
        }
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        Ok(Self { p_q, n_qubits })
    }

    /// Noiseless channel on `n` qubits.
    pub fn ideal(n_qubits: u32) -> Result<Self> {
        Self::new(1.0, n_qubits)
    }

    /// Survival probability per oracle call.
    pub fn p_q(&self) -> f64 {
        self.p_q
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Hilbert-space dimension `2^n` as a float (exact up to 52 qubits,
    /// `inf` beyond 1023).
    pub fn d(&self) -> f64 {
        libm::exp2(self.n_qubits as f64)
    }

    /// `1/d = 2^-n`.
    pub fn inv_d(&self) -> f64 {
        fmath::exp2_neg(self.n_qubits)
    }

    /// Survival weight `p_q^alpha` after `alpha` oracle calls.
    pub fn survival(&self, alpha: u32) -> f64 {
        fmath::powu(self.p_q, alpha as u64)
    }

    /// Same noise on the same register with a different survival probability.
    pub fn with_p_q(&self, p_q: f64) -> Result<Self> {
        Self::new(p_q, self.n_qubits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `alpha = 2m + 1`, observable-projector readout.
    Odd,
    /// `alpha = 2m + 2`, all-zeros-projector readout.
    Even,
}

/// Number of oracle queries spent on one prepare-and-measure cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmplifiedLevel(u32);

impl AmplifiedLevel {
    pub fn new(alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::ZeroLevel);
        }
        Ok(Self(alpha))
    }

    pub fn alpha(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0 % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Number of applications of the amplification operator `Q`.
    pub fn m(self) -> u32 {
        match self.parity() {
            Parity::Odd => (self.0 - 1) / 2,
            Parity::Even => (self.0 - 2) / 2,
        }
    }

    fn even(self) -> Result<Self> {
        match self.parity() {
            Parity::Even => Ok(self),
            Parity::Odd => Err(Error::OddLevel(self.0)),
        }
    }
}

/// Unknown rotation angle `theta* = arccos <O>` with `theta* in (0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetValue {
    theta: f64,
}

impl TargetValue {
    pub fn from_theta(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { theta })
    }

    pub fn from_mean_value(mean_value: f64) -> Result<Self> {
        if !(mean_value > -1.0 && mean_value < 1.0) {
            return Err(Error::MeanValueOutOfRange(mean_value));
        }
        Ok(Self {
            theta: fmath::acos(mean_value),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mean_value(&self) -> f64 {
        fmath::cos(self.theta)
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

/// `(P, 1 - P)` for the "1" outcome, each evaluated without cancellation.
///
/// Odd:  `P = (1 - eta)/2 + eta sin^2(alpha theta / 2)`.
/// Even: `P = (1 - 1/d)(1 - eta) + eta sin^2(alpha theta / 2)`,
/// `1 - P = (1 - eta)/d + eta cos^2(alpha theta / 2)`.
pub(crate) fn outcome_pair(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> (f64, f64) {
    let alpha = level.alpha();
    let eta = noise.survival(alpha);
    let (s, c) = fmath::sin_cos(0.5 * alpha as f64 * theta);
    let (s2, c2) = (s * s, c * c);
    match level.parity() {
        Parity::Odd => {
            let mixed = 0.5 * (1.0 - eta);
            (mixed + eta * s2, mixed + eta * c2)
        }
        Parity::Even => {
            let inv_d = noise.inv_d();
            let one_minus_eta = 1.0 - eta;
            (
                (1.0 - inv_d) * one_minus_eta + eta * s2,
                one_minus_eta * inv_d + eta * c2,
            )
        }
    }
}

/// Probability of the "1" outcome at level `alpha`.
pub fn prob_one(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<f64> {
    check_theta(theta)?;
    Ok(outcome_pair(level, theta, noise).0)
}

/// Classical Fisher information of the two-outcome readout at level `alpha`.
///
/// Exactly zero wherever `sin(alpha theta)` evaluates to zero, including the
/// noiseless `0/0` points.
pub fn classical_fisher(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<f64> {
    check_theta(theta)?;
    Ok(classical_fisher_unchecked(level, theta, noise))
}

pub(crate) fn classical_fisher_unchecked(
    level: AmplifiedLevel,
    theta: f64,
    noise: &NoiseModel,
) -> f64 {
    let alpha = level.alpha() as f64;
    let eta = noise.survival(level.alpha());
    let s = fmath::sin(alpha * theta);
    let num = alpha * alpha * eta * eta * s * s;
    if num == 0.0 {
        return 0.0;
    }
    let (p, q) = outcome_pair(level, theta, noise);
    let den = 4.0 * p * q;
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

/// Quantum Fisher information of the depolarized level-`alpha` state.
/// Independent of theta.
pub fn quantum_fisher(level: AmplifiedLevel, noise: &NoiseModel) -> f64 {
    let alpha = level.alpha() as f64;
    let eta = noise.survival(level.alpha());
    let floor = 2.0 * noise.inv_d();
    alpha * alpha * eta * eta / (floor + (1.0 - floor) * eta)
}

/// Fisher information of the ideal three-outcome POVM
/// `{|0><0|, A^dag|1bar><1bar|A, rest}` on an even-level state.
pub fn three_valued_fisher(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<f64> {
    let level = level.even()?;
    check_theta(theta)?;
    let alpha = level.alpha() as f64;
    let eta = noise.survival(level.alpha());
    let s = fmath::sin(alpha * theta);
    let num = alpha * alpha * eta * eta * s * s;
    if num == 0.0 {
        return Ok(0.0);
    }
    // braces = a - eta^2 cos^2 / a with a = eta + 2(1 - eta)/d,
    // and a^2 - eta^2 cos^2 = (a - eta)(a + eta) + eta^2 sin^2.
    let excess = 2.0 * (1.0 - eta) * noise.inv_d();
    let a = eta + excess;
    let braces = (excess * (a + eta) + eta * eta * s * s) / a;
    if braces == 0.0 {
        return Ok(0.0);
    }
    Ok(num / braces)
}

struct EvenTerms {
    eta: f64,
    sin2: f64,
    cos2: f64,
}

fn even_terms(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<EvenTerms> {
    let level = level.even()?;
    check_theta(theta)?;
    let half = (level.m() + 1) as f64 * theta;
    let (s, c) = fmath::sin_cos(half);
    Ok(EvenTerms {
        eta: noise.survival(level.alpha()),
        sin2: s * s,
        cos2: c * c,
    })
}

fn epsilon_from(terms: &EvenTerms, noise: &NoiseModel) -> Result<f64> {
    let cos_abs = fmath::sqrt(terms.cos2);
    if cos_abs < SINGULARITY_TOL {
        return Err(Error::Singularity(cos_abs));
    }
    let inv_d = noise.inv_d();
    let EvenTerms { eta, cos2, .. } = *terms;
    let one_minus_eta = 1.0 - eta;
    Ok(one_minus_eta * inv_d / (eta * cos2) * (1.0 - one_minus_eta * inv_d - 2.0 * eta * cos2))
}

/// Finite-dimension correction `epsilon_n(m; theta)` of the even-readout
/// Fisher information. Vanishes like `2^-n`; singular where
/// `cos((m+1) theta) = 0`.
pub fn epsilon_n(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<f64> {
    let terms = even_terms(level, theta, noise)?;
    epsilon_from(&terms, noise)
}

/// Ratio `kappa` between the even-readout classical Fisher information and
/// the quantum Fisher information (up to the `1 + 2(1-eta)/(d eta)` factor).
pub fn kappa(level: AmplifiedLevel, theta: f64, noise: &NoiseModel) -> Result<f64> {
    let terms = even_terms(level, theta, noise)?;
    let eps = epsilon_from(&terms, noise)?;
    Ok(terms.sin2 / (1.0 - terms.eta * terms.cos2 + eps))
}

/// Large-register limit of [`kappa`], in `[0, 1)` for `p_q < 1`.
pub fn kappa_inf(level: AmplifiedLevel, theta: f64, p_q: f64) -> Result<f64> {
    if !(p_q > 0.0 && p_q <= 1.0) {
        return Err(Error::InvalidSurvival(p_q));
    }
    // Register size does not enter the limit; any valid model will do.
    let noise = NoiseModel::new(p_q, 1)?;
    let terms = even_terms(level, theta, &noise)?;
    if terms.sin2 == 0.0 {
        return Ok(0.0);
    }
    // 1 - eta cos^2 = (1 - eta) cos^2 + sin^2
    Ok(terms.sin2 / ((1.0 - terms.eta) * terms.cos2 + terms.sin2))
}

/// Quantum Fisher information per query, `I_q(alpha) / alpha`.
fn qfi_per_query(alpha: u32, noise: &NoiseModel) -> f64 {
    // alpha >= 1 by construction at every call site
    quantum_fisher(AmplifiedLevel(alpha), noise) / alpha as f64
}

/// Default search cap for [`alpha_b`]: `max(64, ceil(-8 / ln p_q))`.
pub fn alpha_b_default_cap(noise: &NoiseModel) -> Result<u32> {
    if noise.p_q() >= 1.0 {
        return Err(Error::Unbounded);
    }
    let cap = fmath::ceil(-8.0 / fmath::ln(noise.p_q()));
    Ok(clamp_to_u32(cap).max(64))
}

fn clamp_to_u32(x: f64) -> u32 {
    if x >= u32::MAX as f64 {
        u32::MAX
    } else {
        x as u32
    }
}

/// Level with the largest quantum Fisher information per query, the
/// smallest one on ties.
///
/// `search_cap` must reach `ceil(-2 / ln p_q)`, past which the objective is
/// decreasing.
pub fn alpha_b(noise: &NoiseModel, search_cap: u32) -> Result<u32> {
    if noise.p_q() >= 1.0 {
        return Err(Error::Unbounded);
    }
    let required = clamp_to_u32(fmath::ceil(-2.0 / fmath::ln(noise.p_q()))).max(1);
    if search_cap < required {
        return Err(Error::SearchCapTooSmall {
            cap: search_cap,
            required,
        });
    }
    let mut best = 1;
    let mut best_value = qfi_per_query(1, noise);
    for alpha in 2..=search_cap {
        let value = qfi_per_query(alpha, noise);
        if value > best_value {
            best = alpha;
            best_value = value;
        }
    }
    Ok(best)
}

/// Upper bound on the total quantum Fisher information reachable with
/// `n_queries` oracle queries split into any product of amplified states.
pub fn total_qfi_bound(n_queries: u64, noise: &NoiseModel) -> Result<f64> {
    if n_queries == 0 {
        return Err(Error::ZeroQueries);
    }
    let floor = 2.0 * noise.inv_d();
    let single_block = |alpha: u64| {
        let eta = fmath::powu(noise.p_q(), alpha);
        eta * eta / (floor + (1.0 - floor) * eta)
    };
    let nq = n_queries as f64;
    if noise.p_q() >= 1.0 {
        return Ok(nq * nq * single_block(n_queries));
    }
    let ab = alpha_b(noise, alpha_b_default_cap(noise)?)? as u64;
    if n_queries <= ab {
        Ok(nq * nq * single_block(n_queries))
    } else {
        Ok(nq * ab as f64 * single_block(ab))
    }
}

/// Lower bound on the MSE of any unbiased estimator of theta given
/// `n_queries` queries. With `mean_value`, the bound is for `cos(theta)`
/// instead, scaled by `1 - <O>^2`.
pub fn mse_lower_bound(n_queries: u64, noise: &NoiseModel, mean_value: Option<f64>) -> Result<f64> {
    let scale = match mean_value {
        None => 1.0,
        Some(v) if v > -1.0 && v < 1.0 => 1.0 - v * v,
        Some(v) => return Err(Error::MeanValueOutOfRange(v)),
    };
    Ok(scale / total_qfi_bound(n_queries, noise)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn lvl(a: u32) -> AmplifiedLevel {
        AmplifiedLevel::new(a).unwrap()
    }

    fn noise(p: f64, n: u32) -> NoiseModel {
        NoiseModel::new(p, n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::new(0.0, 3).is_err());
        assert!(NoiseModel::new(1.0000001, 3).is_err());
        assert!(NoiseModel::new(f64::NAN, 3).is_err());
        assert!(NoiseModel::new(0.5, 0).is_err());
        let nm = noise(0.9, 20);
        assert_eq!(nm.d(), 1048576.0);
        assert_eq!(nm.inv_d() * nm.d(), 1.0);
    }

    #[test]
    fn level_parity_and_m() {
        assert!(AmplifiedLevel::new(0).is_err());
        assert_eq!(lvl(1).parity(), Parity::Odd);
        assert_eq!(lvl(1).m(), 0);
        assert_eq!(lvl(2).parity(), Parity::Even);
        assert_eq!(lvl(2).m(), 0);
        assert_eq!(lvl(7).m(), 3);
        assert_eq!(lvl(8).m(), 3);
    }

    #[test]
    fn target_value_round_trip() {
        let t = TargetValue::from_mean_value(0.5).unwrap();
        assert!((t.theta() - FRAC_PI_3).abs() < 1e-15);
        assert!((t.mean_value() - 0.5).abs() < 1e-15);
        assert!(TargetValue::from_mean_value(1.0).is_err());
        assert!(TargetValue::from_theta(0.0).is_err());
        assert!(TargetValue::from_theta(PI).is_err());
    }

    #[test]
    fn prob_one_examples() {
        let p = prob_one(lvl(1), FRAC_PI_2, &noise(0.9, 20)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let p = prob_one(lvl(2), FRAC_PI_3, &noise(1.0, 20)).unwrap();
        assert!((p - 0.75).abs() < 1e-15);
        assert!(prob_one(lvl(1), 0.0, &noise(0.9, 2)).is_err());
        assert!(prob_one(lvl(1), 3.2, &noise(0.9, 2)).is_err());
    }

    #[test]
    fn prob_one_matches_textbook_form() {
        // Direct transcription of the two branches, without the
        // cancellation-free rearrangement.
        for &(a, t, p, n) in &[(3u32, 1.0, 0.995, 2u32), (4, 0.3, 0.9, 5), (9, 2.5, 0.7, 1)] {
            let eta = libm::pow(p, a as f64);
            let d = libm::exp2(n as f64);
            let direct = if a % 2 == 1 {
                0.5 - 0.5 * eta * libm::cos(a as f64 * t)
            } else {
                let s = libm::sin(0.5 * a as f64 * t);
                (d - 1.0) / d + eta * (s * s - (d - 1.0) / d)
            };
            let got = prob_one(lvl(a), t, &noise(p, n)).unwrap();
            assert!((got - direct).abs() < 1e-14, "{a} {t} {p} {n}");
        }
    }

    #[test]
    fn classical_fisher_examples() {
        let v = classical_fisher(lvl(3), 0.7, &noise(1.0, 20)).unwrap();
        assert!(rel(v, 9.0) < 1e-12);
        let v = classical_fisher(lvl(4), FRAC_PI_4, &noise(0.9, 20)).unwrap();
        // sin(pi) evaluates to ~1.2e-16 and 1 - P is ~3e-7, so the value is
        // zero up to rounding.
        assert!(v < 1e-20, "{v}");
    }

    #[test]
    fn classical_fisher_zero_numerator_is_zero() {
        // eta underflows to zero: numerator-first rule, not NaN.
        let v = classical_fisher(lvl(3000), 1.0, &noise(0.5, 3)).unwrap();
        assert_eq!(v, 0.0);
        // Noiseless near-zero of sin(alpha theta) keeps the alpha^2 limit.
        let v = classical_fisher(lvl(2), FRAC_PI_2, &noise(1.0, 3)).unwrap();
        assert!(rel(v, 4.0) < 1e-9);
    }

    #[test]
    fn classical_fisher_matches_score_variance() {
        // (dP/dtheta)^2 / (P (1 - P)) with a central difference of P.
        let nm = noise(0.95, 10);
        let (a, t, h) = (lvl(2), 0.9, 1e-6);
        let dp = (prob_one(a, t + h, &nm).unwrap() - prob_one(a, t - h, &nm).unwrap()) / (2.0 * h);
        let p = prob_one(a, t, &nm).unwrap();
        let oracle = dp * dp / (p * (1.0 - p));
        let got = classical_fisher(a, t, &nm).unwrap();
        assert!(rel(got, oracle) < 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn quantum_fisher_examples() {
        assert!(rel(quantum_fisher(lvl(1), &noise(1.0, 5)), 1.0) < 1e-15);
        let v = quantum_fisher(lvl(2), &noise(0.9, 3));
        assert!(rel(v, 2.6244 / 0.8575) < 1e-12);
    }

    #[test]
    fn three_valued_examples() {
        let nm = noise(0.9, 4);
        let v = three_valued_fisher(lvl(2), FRAC_PI_4, &nm).unwrap();
        assert!(rel(v, quantum_fisher(lvl(2), &nm)) < 1e-12);
        let v = three_valued_fisher(lvl(2), FRAC_PI_2, &nm).unwrap();
        assert!(v < 1e-28);
        assert_eq!(
            three_valued_fisher(lvl(3), 0.5, &nm),
            Err(Error::OddLevel(3))
        );
    }

    #[test]
    fn three_valued_matches_first_line_transcription() {
        for &(a, t, p, n) in &[
            (4u32, 0.6, 0.95, 3u32),
            (6, 1.9, 0.8, 2),
            (2, 0.3, 0.99, 12),
        ] {
            let eta = libm::pow(p, a as f64);
            let d = libm::exp2(n as f64);
            let mp1 = (a / 2) as f64;
            let s2 = libm::sin(2.0 * mp1 * t).powi(2);
            let c2 = libm::cos(2.0 * mp1 * t).powi(2);
            let braces =
                eta + 2.0 * (1.0 - eta) / d - d * eta * eta * c2 / (d * eta + 2.0 * (1.0 - eta));
            let direct = 4.0 * eta * eta * mp1 * mp1 * s2 / braces;
            let got = three_valued_fisher(lvl(a), t, &noise(p, n)).unwrap();
            assert!(rel(got, direct) < 1e-12);
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_n(lvl(2), 0.5, &noise(1.0, 10)).unwrap(), 0.0);
        let mut prev = epsilon_n(lvl(2), 0.5, &noise(0.95, 10)).unwrap().abs();
        for n in 11..=20 {
            let cur = epsilon_n(lvl(2), 0.5, &noise(0.95, n)).unwrap().abs();
            assert!(cur <= 0.5 * prev * (1.0 + 1e-12), "n={n}");
            prev = cur;
        }
        assert!(matches!(
            epsilon_n(lvl(2), FRAC_PI_2, &noise(0.9, 3)),
            Err(Error::Singularity(_))
        ));
        assert!(epsilon_n(lvl(3), 0.5, &noise(0.9, 3)).is_err());
    }

    #[test]
    fn epsilon_solves_fisher_rearrangement() {
        // Independent route: solve I_c = I_q * sin^2 (1 + 2(1-eta)/(d eta))
        // / (1 - eta cos^2 + eps) for eps.
        let nm = noise(0.95, 8);
        let (a, t) = (lvl(4), 0.7);
        let eta = nm.survival(4);
        let d = nm.d();
        let ic = classical_fisher(a, t, &nm).unwrap();
        let iq = quantum_fisher(a, &nm);
        let s2 = libm::sin(2.0 * t).powi(2);
        let c2 = 1.0 - s2;
        let oracle = iq * s2 * (1.0 + 2.0 * (1.0 - eta) / (d * eta)) / ic - (1.0 - eta * c2);
        let got = epsilon_n(a, t, &nm).unwrap();
        assert!(
            (got - oracle).abs() < 1e-12 * oracle.abs().max(1e-3),
            "{got} {oracle}"
        );
    }

    #[test]
    fn kappa_examples() {
        assert!((kappa_inf(lvl(2), FRAC_PI_2, 0.9).unwrap() - 1.0).abs() < 1e-15);
        let small = kappa_inf(lvl(2), 1e-9, 0.9).unwrap();
        assert!(small < 1e-15);
        let nm = noise(0.95, 12);
        let (a, t) = (lvl(2), 0.8);
        let eta = nm.survival(2);
        let lhs = classical_fisher(a, t, &nm).unwrap();
        let rhs = kappa(a, t, &nm).unwrap()
            * quantum_fisher(a, &nm)
            * (1.0 + 2.0 * (1.0 - eta) / (nm.d() * eta));
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn alpha_b_examples() {
        assert_eq!(alpha_b(&noise(0.995, 20), 3000).unwrap(), 199);
        let cap = alpha_b_default_cap(&noise(0.995, 20)).unwrap();
        assert_eq!(cap, 1596);
        assert_eq!(alpha_b(&noise(0.995, 20), cap).unwrap(), 199);
        assert_eq!(alpha_b(&noise(0.5, 2), 100).unwrap(), 1);
        assert_eq!(alpha_b(&noise(1.0, 2), 100), Err(Error::Unbounded));
        assert!(matches!(
            alpha_b(&noise(0.995, 20), 10),
            Err(Error::SearchCapTooSmall { .. })
        ));
    }

    #[test]
    fn alpha_b_matches_exhaustive_scan() {
        let nm = noise(0.999, 20);
        let f = |a: u32| {
            let eta = libm::pow(0.999, a as f64);
            let floor = libm::exp2(-19.0);
            a as f64 * eta * eta / (floor + (1.0 - floor) * eta)
        };
        let mut best = 1;
        for a in 2..=5000 {
            if f(a) > f(best) {
                best = a;
            }
        }
        assert_eq!(alpha_b(&nm, 5000).unwrap(), best);
    }

    #[test]
    fn total_bound_examples() {
        let nm = noise(0.995, 20);
        let b1 = total_qfi_bound(1, &nm).unwrap();
        assert!(rel(b1, quantum_fisher(lvl(1), &nm)) < 1e-15);
        let iq_b = quantum_fisher(lvl(199), &nm);
        for r in [2u64, 3] {
            let b = total_qfi_bound(r * 199, &nm).unwrap();
            assert!(rel(b, r as f64 * iq_b) < 1e-12);
        }
        assert!(total_qfi_bound(0, &nm).is_err());
    }

    #[test]
    fn mse_bound_examples() {
        let nm = noise(0.995, 20);
        let expected = (libm::exp2(-19.0) + (1.0 - libm::exp2(-19.0)) * 0.995) / (0.995 * 0.995);
        let got = mse_lower_bound(1, &nm, None).unwrap();
        assert!(rel(got, expected) < 1e-14);
        let with_zero = mse_lower_bound(1000, &nm, Some(0.0)).unwrap();
        assert_eq!(with_zero, mse_lower_bound(1000, &nm, None).unwrap());
        assert!(mse_lower_bound(10, &nm, Some(1.0)).is_err());
        // Fig.-2-style precision-limit value at one million queries.
        let v = mse_lower_bound(1_000_000, &nm, Some(0.5)).unwrap();
        let iq_b = quantum_fisher(lvl(199), &nm);
        let recomputed = 0.75 * 199.0 / (1e6 * iq_b);
        assert!(rel(v, recomputed) < 1e-12);
    }

    #[test]
    fn parity_symmetry() {
        let nm = noise(0.93, 4);
        for a in 1..=12 {
            for i in 1..50 {
                let t = PI * i as f64 / 50.0;
                let p = prob_one(lvl(a), t, &nm).unwrap();
                let q = prob_one(lvl(a), PI - t, &nm).unwrap();
                if a % 2 == 0 {
                    assert!((p - q).abs() < 1e-12);
                } else {
                    assert!((p + q - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
