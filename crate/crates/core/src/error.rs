use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("truncation N = {n} too small, need N > {need}")]
    TruncationTooSmall { n: i64, need: i64 },
    #[error("ellipticity violated: {0}")]
    Ellipticity(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("symbol not projectively realizable at N = {n}: eigenvalue {value} inside [0.25, 0.75]")]
    NoSpectralGap { n: i64, value: f64 },
    #[error("unstable index across truncation scales (N, index): {0:?}")]
    UnstableIndex(Vec<(i64, i64)>),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("eta not converged: {0}")]
    EtaNotConverged(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inversion quality: residual {0:e} above tolerance")]
    InversionQuality(f64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
