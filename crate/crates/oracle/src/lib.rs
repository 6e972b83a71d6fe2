//! Brute-force reference for the closed-form model in `qmean-core`.
//!
//! A [`SmallSystem`] holds an explicit state-preparation unitary `A` and a
//! Pauli observable `O` on at most four qubits. The amplified circuits are
//! simulated on full density matrices with a global depolarizing channel
//! after every oracle call, and probabilities and Fisher information are
//! read off directly. Agreement with the closed forms is checked by
//! [`verify_grid`].

#![forbid(unsafe_code)]

mod circuit;
mod error;
mod fisher;
mod system;
mod verify;

pub use circuit::{
    amplified_state, build_grover, depolarize, oracle_prob_one, oracle_three_valued,
    GROVER_TOLERANCE,
};
pub use error::{OracleError, Result};
pub use fisher::{oracle_qfi, oracle_three_valued_fisher, FD_STEP};
pub use system::{CMatrix, CVector, SmallSystem, C64, MAX_MEAN_VALUE, MAX_QUBITS};
pub use verify::{verify_grid, Tolerances, VerifyConfig, VerifyReport, VerifyRow};
