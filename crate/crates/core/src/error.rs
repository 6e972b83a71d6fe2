use alloc::string::String;

/// Errors raised by model evaluation, sampling and estimation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("theta must lie in (0, pi), got {0}")]
    ThetaOutOfRange(f64),
    #[error("mean value must lie in (-1, 1), got {0}")]
    MeanValueOutOfRange(f64),
    #[error("amplified level must be at least 1")]
    ZeroLevel,
    #[error("survival probability p_q must lie in (0, 1], got {0}")]
    InvalidSurvival(f64),
    #[error("qubit count must be at least 1")]
    ZeroQubits,
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("query count must be at least 1")]
    ZeroQueries,
    #[error("operation requires an even amplified level, got {0}")]
    OddLevel(u32),
    #[error("|cos((m+1) theta)| = {0:e} is below the singularity tolerance")]
    Singularity(f64),
    #[error("alpha_B is unbounded when p_q = 1")]
    Unbounded,
    #[error("search cap {cap} is below the required minimum {required}")]
    SearchCapTooSmall { cap: u32, required: u32 },
    #[error("optimization range is empty")]
    EmptyRange,
    #[error("optimization range may only contain levels >= 2, got {0}")]
    LevelBelowTwo(u32),
    #[error("measurement record list is empty")]
    EmptyRecords,
    #[error("record has {hits} hits out of {shots} shots")]
    HitsExceedShots { hits: u64, shots: u64 },
    #[error("log-likelihood is not finite at theta = {0}")]
    NonFiniteLikelihood(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
