use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("atomic level {k} is not a valid slot of block (m1={m1}, m2={m2})")]
    InvalidSlot { m1: usize, m2: usize, k: usize },

    #[error("unknown atom '{0}' (expected one of: li6, rb87)")]
    UnknownAtom(String),

    #[error("invalid atom parameters: {0}")]
    InvalidAtom(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "closed-form dynamics require equal detunings, got delta13={delta13}, \
         delta23={delta23}; use the numeric oracle path"
    )]
    UnequalDetuning { delta13: f64, delta23: f64 },

    #[error("block (m1={m1}, m2={m2}) has vanishing effective coupling; dark-state normalization is singular")]
    DegenerateBlock { m1: usize, m2: usize },

    #[error("packet lattice (M0={found}) does not match the expected lattice (M0={expected})")]
    LatticeMismatch { expected: usize, found: usize },

    #[error("atomic amplitudes are all zero")]
    ZeroAmplitudes,

    #[error("truncated state needs {required} slots, above the budget of {budget}")]
    Capacity { required: usize, budget: usize },

    #[error("Mandel parameter undefined for a vacuum mode (<n> = {0:e})")]
    VacuumMode(f64),

    #[error("density matrix trace deviates from one by {0:e}")]
    TraceDeviation(f64),

    #[error("density matrix has eigenvalue {0:e} below the positivity tolerance")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("oracle comparison failed: deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    OracleMismatch { deviation: f64, tolerance: f64 },

    #[error(transparent)]
    Config(#[from] crate::scenario::ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
