use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("qubit count {0} outside 1..=4")]
    QubitCount(u32),
    #[error("matrix is {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("A is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("O is not a Hermitian involution (max deviation {0:e})")]
    NotInvolution(f64),
    #[error("A|0> is an eigenstate of O")]
    Eigenstate,
    #[error("no instance with |<O>| <= {limit} after {attempts} draws")]
    RejectionLimit { limit: f64, attempts: u32 },
    #[error("noise model acts on {noise} qubits, system has {system}")]
    DimensionMismatch { noise: u32, system: u32 },
    #[error("Grover operator is not a rotation by theta on the A-subspace (deviation {0:e})")]
    NotARotation(f64),
    #[error(transparent)]
    Core(#[from] qmean_core::Error),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;
