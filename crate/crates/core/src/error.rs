use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("matrix is not Hermitian (max |rho - rho^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("eigenvalue {value:e} is below the admissible floor")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not pure (purity = {purity})")]
    NotPure { purity: f64 },

    #[error("unknown {kind} `{value}`")]
    Unknown { kind: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
