use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("{0} has no multiplicative inverse modulo {1}")]
    ZeroInverse(u32, u32),
    #[error("expected {expected} coordinates, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operands live in different spaces ({0})")]
    DimensionMismatch(String),
    #[error("Dickson classification requires d != 1 mod 3, got d = {0}")]
    UnsupportedModulus(u32),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("outside the diagonal third-level characterization: {0}")]
    OutsideCharacterization(String),
    #[error("dense oracle limited to d in {{3, 5}} and n <= 2, got d = {d}, n = {n}")]
    OracleScaleExceeded { d: u32, n: usize },
    #[error("generators do not commute (symplectic product {0})")]
    NonCommuting(u32),
    #[error("context is incompatible with the state: {0}")]
    IncompatibleContext(String),
    #[error("probe set is missing point {0:?}")]
    IncompleteProbe(Vec<u32>),
    #[error("empirical model is inconsistent: {0}")]
    InfeasibleModel(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
