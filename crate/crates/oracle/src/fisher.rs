use crate::circuit::{amplified_state, three_valued_of};
use crate::error::{OracleError, Result};
use crate::system::{CMatrix, SmallSystem, C64};
use nalgebra::SymmetricEigen;
use qmean_core::{AmplifiedLevel, NoiseModel, Parity};

/// Central-difference step in `theta`; the derivative is Richardson
/// extrapolated from steps `h` and `h / 2`.
pub const FD_STEP: f64 = 1e-5;

/// Eigenvalue sums below this are treated as the kernel of the SLD.
const SLD_CUTOFF: f64 = 1e-12;

/// Outcome probabilities below this carry no Fisher information.
const PROB_CUTOFF: f64 = 1e-14;

fn central<T, F>(theta: f64, f: F) -> Result<T>
where
    F: Fn(f64) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let h = FD_STEP;
    let d1 = (f(theta + h)? - f(theta - h)?) * (0.5 / h);
    let d2 = (f(theta + 0.5 * h)? - f(theta - 0.5 * h)?) * (1.0 / h);
    Ok(d2 * (4.0 / 3.0) - d1 * (1.0 / 3.0))
}

/// Wrapper so matrices and probability triples share the difference code.
struct Diff<T>(T);

impl std::ops::Sub for Diff<CMatrix> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Diff(self.0 - rhs.0)
    }
}

impl std::ops::Mul<f64> for Diff<CMatrix> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Diff(self.0 * C64::from(k))
    }
}

impl std::ops::Sub for Diff<[f64; 3]> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Diff(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl std::ops::Mul<f64> for Diff<[f64; 3]> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Diff(self.0.map(|x| x * k))
    }
}

/// Quantum Fisher information of the level-`alpha` state from the symmetric
/// logarithmic derivative, `2 sum |<i|d rho|j>|^2 / (l_i + l_j)`.
pub fn oracle_qfi(sys: &SmallSystem, level: AmplifiedLevel, noise: &NoiseModel) -> Result<f64> {
    let theta = sys.theta_star();
    let rho = amplified_state(sys, level, noise)?;
    let d_rho = central(theta, |t| {
        Ok(Diff(amplified_state(&sys.with_theta(t)?, level, noise)?))
    })?
    .0;
    let eig = SymmetricEigen::new(rho);
    let v = &eig.eigenvectors;
    let d = v.adjoint() * d_rho * v;
    let lambda = &eig.eigenvalues;
    let mut acc = 0.0;
    for i in 0..lambda.len() {
        for j in 0..lambda.len() {
            let sum = lambda[i] + lambda[j];
            if sum > SLD_CUTOFF {
                acc += 2.0 * d[(i, j)].norm_sqr() / sum;
            }
        }
    }
    Ok(acc)
}

/// Classical Fisher information of the three-valued even readout. The
/// readout stays fixed at the instance's own `A` while the state is
/// re-prepared at nearby angles.
pub fn oracle_three_valued_fisher(
    sys: &SmallSystem,
    level: AmplifiedLevel,
    noise: &NoiseModel,
) -> Result<f64> {
    if level.parity() != Parity::Even {
        return Err(OracleError::Core(qmean_core::Error::OddLevel(
            level.alpha(),
        )));
    }
    let theta = sys.theta_star();
    let probs = three_valued_of(sys, &amplified_state(sys, level, noise)?);
    let dp = central(theta, |t| {
        let rho = amplified_state(&sys.with_theta(t)?, level, noise)?;
        Ok(Diff(three_valued_of(sys, &rho)))
    })?
    .0;
    Ok(probs
        .iter()
        .zip(dp)
        .filter(|(&p, _)| p > PROB_CUTOFF)
        .map(|(&p, d)| d * d / p)
        .sum())
}
