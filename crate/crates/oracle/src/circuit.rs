use crate::error::{OracleError, Result};
use crate::system::{CMatrix, SmallSystem, C64};
use qmean_core::{AmplifiedLevel, NoiseModel, Parity};

/// Allowed deviation of `Q` restricted to the `A`-subspace from the ideal
/// rotation.
pub const GROVER_TOLERANCE: f64 = 1e-10;

/// `Q = A (2|0><0| - I) A^dag O`, checked to act as
/// `[[cos t, sin t], [-sin t, cos t]]` on `{|0bar>, |1bar>}` and to leave
/// that subspace invariant.
pub fn build_grover(sys: &SmallSystem) -> Result<CMatrix> {
    let dim = sys.dim();
    let mut refl = -CMatrix::identity(dim, dim);
    refl[(0, 0)] = C64::from(1.0);
    let q = sys.a() * refl * sys.a().adjoint() * sys.o();

    let (b0, b1) = sys.subspace_basis();
    let (s, c) = sys.theta_star().sin_cos();
    let expected = [[c, s], [-s, c]];
    let mut dev: f64 = 0.0;
    for (j, col) in [&b0, &b1].into_iter().enumerate() {
        let image = &q * col;
        let c0 = b0.dotc(&image);
        let c1 = b1.dotc(&image);
        dev = dev
            .max((c0 - C64::from(expected[0][j])).norm())
            .max((c1 - C64::from(expected[1][j])).norm());
        let leak = &image - &b0 * c0 - &b1 * c1;
        dev = dev.max(leak.norm());
    }
    if dev > GROVER_TOLERANCE {
        return Err(OracleError::NotARotation(dev));
    }
    Ok(q)
}

/// Global depolarizing channel `rho -> p rho + (1 - p) I / d`.
pub fn depolarize(rho: &CMatrix, p: f64) -> CMatrix {
    let dim = rho.nrows();
    let mixed = CMatrix::identity(dim, dim) * C64::from((1.0 - p) / dim as f64);
    rho * C64::from(p) + mixed
}

fn conjugate(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u * rho * u.adjoint()
}

fn check_noise(sys: &SmallSystem, noise: &NoiseModel) -> Result<()> {
    if noise.n_qubits() != sys.n_qubits() {
        return Err(OracleError::DimensionMismatch {
            noise: noise.n_qubits(),
            system: sys.n_qubits(),
        });
    }
    Ok(())
}

/// Density matrix after the level-`alpha` circuit, depolarized after every
/// call to `A` or `A^dag`.
///
/// Odd `alpha = 2m + 1`: `Q^m A |0>`. Even `alpha = 2m + 2`:
/// `A^dag O Q^m A |0>`.
pub fn amplified_state(
    sys: &SmallSystem,
    level: AmplifiedLevel,
    noise: &NoiseModel,
) -> Result<CMatrix> {
    check_noise(sys, noise)?;
    let dim = sys.dim();
    let p = noise.p_q();
    let a = sys.a();
    let a_dag = a.adjoint();
    let o = sys.o();
    let mut refl = -CMatrix::identity(dim, dim);
    refl[(0, 0)] = C64::from(1.0);

    let mut rho = CMatrix::zeros(dim, dim);
    rho[(0, 0)] = C64::from(1.0);
    rho = depolarize(&conjugate(a, &rho), p);
    for _ in 0..level.m() {
        rho = conjugate(o, &rho);
        rho = depolarize(&conjugate(&a_dag, &rho), p);
        rho = conjugate(&refl, &rho);
        rho = depolarize(&conjugate(a, &rho), p);
    }
    if level.parity() == Parity::Even {
        rho = conjugate(o, &rho);
        rho = depolarize(&conjugate(&a_dag, &rho), p);
    }
    Ok(rho)
}

/// Probability of outcome "1": `tr[(I - O)/2 rho]` for odd levels,
/// `1 - <0|rho|0>` for even levels.
pub fn oracle_prob_one(
    sys: &SmallSystem,
    level: AmplifiedLevel,
    noise: &NoiseModel,
) -> Result<f64> {
    let rho = amplified_state(sys, level, noise)?;
    Ok(prob_one_of(sys, level, &rho))
}

pub(crate) fn prob_one_of(sys: &SmallSystem, level: AmplifiedLevel, rho: &CMatrix) -> f64 {
    match level.parity() {
        Parity::Odd => 0.5 * (rho.trace() - (sys.o() * rho).trace()).re,
        Parity::Even => 1.0 - rho[(0, 0)].re,
    }
}

/// Outcome probabilities of the three-valued even readout
/// `{|0><0|, A^dag|1bar><1bar|A, rest}`.
pub fn oracle_three_valued(
    sys: &SmallSystem,
    level: AmplifiedLevel,
    noise: &NoiseModel,
) -> Result<[f64; 3]> {
    if level.parity() != Parity::Even {
        return Err(qmean_core::Error::OddLevel(level.alpha()).into());
    }
    let rho = amplified_state(sys, level, noise)?;
    Ok(three_valued_of(sys, &rho))
}

/// Three-valued probabilities of `rho` with the readout built from `povm`.
pub(crate) fn three_valued_of(povm: &SmallSystem, rho: &CMatrix) -> [f64; 3] {
    let (_, b1) = povm.subspace_basis();
    let w = povm.a().adjoint() * b1;
    let p0 = rho[(0, 0)].re;
    let p1 = w.dotc(&(rho * &w)).re;
    let total = rho.trace().re;
    [p0, p1, total - p0 - p1]
}
