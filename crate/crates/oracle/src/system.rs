use crate::error::{OracleError, Result};
use nalgebra::{Complex, DMatrix, DVector};
use qmean_core::{RandomStream, TargetValue};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const MAX_QUBITS: u32 = 4;
/// Random instances with `|<O>|` above this are redrawn.
pub const MAX_MEAN_VALUE: f64 = 0.999;

const MATRIX_TOL: f64 = 1e-12;
const EIGENSTATE_TOL: f64 = 1e-10;
const MAX_ATTEMPTS: u32 = 1000;

/// Explicit `(A, O)` pair on `n <= 4` qubits.
#[derive(Debug, Clone)]
pub struct SmallSystem {
    n_qubits: u32,
    a: CMatrix,
    o: CMatrix,
    label: String,
    state: CVector,
    mean_value: f64,
}

impl SmallSystem {
    /// Validates `A` (unitary), `O` (Hermitian, `O^2 = I`) and rejects
    /// `A|0>` being an eigenstate of `O`.
    pub fn new(a: CMatrix, o: CMatrix) -> Result<Self> {
        Self::with_label(a, o, "custom".to_owned())
    }

    fn with_label(a: CMatrix, o: CMatrix, label: String) -> Result<Self> {
        let dim = a.nrows();
        let n_qubits = dim.trailing_zeros();
        if !dim.is_power_of_two() || n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(OracleError::QubitCount(n_qubits));
        }
        for m in [&a, &o] {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(OracleError::Shape {
                    rows: m.nrows(),
                    cols: m.ncols(),
                    dim,
                });
            }
        }
        let eye = CMatrix::identity(dim, dim);
        let dev = max_abs(&(a.adjoint() * &a - &eye));
        if dev > MATRIX_TOL {
            return Err(OracleError::NotUnitary(dev));
        }
        let dev = max_abs(&(&o - o.adjoint())).max(max_abs(&(&o * &o - &eye)));
        if dev > MATRIX_TOL {
            return Err(OracleError::NotInvolution(dev));
        }
        let state = a.column(0).into_owned();
        let o_state = &o * &state;
        let mean_value = state.dotc(&o_state).re;
        if (&o_state - &state * C64::from(mean_value)).norm() < EIGENSTATE_TOL {
            return Err(OracleError::Eigenstate);
        }
        Ok(Self {
            n_qubits,
            a,
            o,
            label,
            state,
            mean_value,
        })
    }

    /// Haar-like random `A` (QR of a complex Gaussian matrix with the phases
    /// of `R` removed) and a uniformly random non-identity Pauli string `O`.
    /// Instances with `|<O>| > MAX_MEAN_VALUE` are redrawn from the same
    /// stream.
    pub fn random(n_qubits: u32, stream: &mut RandomStream) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(OracleError::QubitCount(n_qubits));
        }
        let dim = 1usize << n_qubits;
        for _ in 0..MAX_ATTEMPTS {
            let a = random_unitary(dim, stream);
            let label = random_pauli_label(n_qubits, stream);
            let o = pauli_string(&label);
            match Self::with_label(a, o, label) {
                Ok(sys) if sys.mean_value.abs() <= MAX_MEAN_VALUE => return Ok(sys),
                Ok(_) | Err(OracleError::Eigenstate) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(OracleError::RejectionLimit {
            limit: MAX_MEAN_VALUE,
            attempts: MAX_ATTEMPTS,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn o(&self) -> &CMatrix {
        &self.o
    }

    /// Pauli string of `O` (most significant qubit first), or `"custom"`.
    pub fn observable_label(&self) -> &str {
        &self.label
    }

    /// `|A> = A|0>`.
    pub fn a_state(&self) -> &CVector {
        &self.state
    }

    /// `<A|O|A> = cos(theta*)`.
    pub fn mean_value(&self) -> f64 {
        self.mean_value
    }

    pub fn theta_star(&self) -> f64 {
        self.mean_value.clamp(-1.0, 1.0).acos()
    }

    /// Orthonormal basis `{|0bar>, |1bar>}` of `span{|A>, O|A>}` with
    /// `|0bar> = |A>`.
    pub fn subspace_basis(&self) -> (CVector, CVector) {
        let zero = self.state.clone();
        let mut one = &self.o * &self.state - &self.state * C64::from(self.mean_value);
        let norm = one.norm();
        one /= C64::from(norm);
        (zero, one)
    }

    /// Same `O`, with `A` replaced by `U(theta) A` where `U` rotates inside
    /// the `A`-subspace so that `<O>` becomes `cos(theta)`.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        TargetValue::from_theta(theta)?;
        let dim = self.dim();
        let half = 0.5 * self.theta_star();
        let plus = (&self.state + &self.o * &self.state) / C64::from(2.0 * half.cos());
        let minus = (&self.state - &self.o * &self.state) / C64::from(2.0 * half.sin());
        let delta = 0.5 * (theta - self.theta_star());
        let (s, c) = delta.sin_cos();
        let proj = &plus * plus.adjoint() + &minus * minus.adjoint();
        let rot = &minus * plus.adjoint() - &plus * minus.adjoint();
        let u = CMatrix::identity(dim, dim) + proj * C64::from(c - 1.0) + rot * C64::from(s);
        Self::with_label(u * &self.a, self.o.clone(), self.label.clone())
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_unitary(dim: usize, stream: &mut RandomStream) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(
            stream.standard_normal() * scale,
            stream.standard_normal() * scale,
        )
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&CVector::from_fn(dim, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / C64::from(d.norm())
        } else {
            C64::from(1.0)
        }
    }));
    q * phases
}

fn random_pauli_label(n_qubits: u32, stream: &mut RandomStream) -> String {
    loop {
        let label: String = (0..n_qubits)
            .map(|_| ['I', 'X', 'Y', 'Z'][(stream.next_u64() % 4) as usize])
            .collect();
        if label.chars().any(|c| c != 'I') {
            return label;
        }
    }
}

/// Kronecker product of single-qubit Paulis, leftmost factor most
/// significant.
pub(crate) fn pauli_string(label: &str) -> CMatrix {
    let (o, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let im = C64::new(0.0, 1.0);
    label.chars().fold(CMatrix::identity(1, 1), |acc, ch| {
        let p = match ch {
            'X' => CMatrix::from_row_slice(2, 2, &[o, i, i, o]),
            'Y' => CMatrix::from_row_slice(2, 2, &[o, -im, im, o]),
            'Z' => CMatrix::from_row_slice(2, 2, &[i, o, o, -i]),
            _ => CMatrix::identity(2, 2),
        };
        acc.kronecker(&p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instances_are_valid() {
        let mut s = RandomStream::new(5, 0);
        for n in 1..=4 {
            let sys = SmallSystem::random(n, &mut s).unwrap();
            assert_eq!(sys.dim(), 1 << n);
            assert!(sys.mean_value().abs() <= MAX_MEAN_VALUE);
            assert!(sys.observable_label().chars().any(|c| c != 'I'));
            let (z, o) = sys.subspace_basis();
            assert!(z.dotc(&o).norm() < 1e-12);
            assert!((o.norm() - 1.0).abs() < 1e-12);
        }
        assert!(SmallSystem::random(5, &mut s).is_err());
    }

    #[test]
    fn rejects_eigenstate_and_bad_matrices() {
        let z = pauli_string("Z");
        let eye = CMatrix::identity(2, 2);
        assert!(matches!(
            SmallSystem::new(eye.clone(), z.clone()),
            Err(OracleError::Eigenstate)
        ));
        let not_unitary = eye.clone() * C64::from(2.0);
        assert!(matches!(
            SmallSystem::new(not_unitary, z.clone()),
            Err(OracleError::NotUnitary(_))
        ));
        assert!(matches!(
            SmallSystem::new(eye.clone(), eye.clone() * C64::from(0.5)),
            Err(OracleError::NotInvolution(_))
        ));
    }

    #[test]
    fn single_qubit_rotation_angle() {
        // A = R_y(phi): <Z> = cos(phi)
        let phi: f64 = 1.1;
        let (s, c) = (0.5 * phi).sin_cos();
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[C64::from(c), C64::from(-s), C64::from(s), C64::from(c)],
        );
        let sys = SmallSystem::new(a, pauli_string("Z")).unwrap();
        assert!((sys.theta_star() - phi).abs() < 1e-12);
    }

    #[test]
    fn reprepared_family_hits_requested_angle() {
        let mut s = RandomStream::new(8, 1);
        let sys = SmallSystem::random(3, &mut s).unwrap();
        for theta in [0.2, 1.0, 2.9] {
            let moved = sys.with_theta(theta).unwrap();
            assert!((moved.theta_star() - theta).abs() < 1e-10);
        }
        let same = sys.with_theta(sys.theta_star()).unwrap();
        assert!(max_abs(&(same.a() - sys.a())) < 1e-12);
    }

    #[test]
    fn pauli_products() {
        let xz = pauli_string("XZ");
        assert_eq!(xz.nrows(), 4);
        let sq = &xz * &xz;
        assert!(max_abs(&(sq - CMatrix::identity(4, 4))) < 1e-15);
        // trace zero
        assert!(xz.trace().norm() < 1e-15);
    }
}
