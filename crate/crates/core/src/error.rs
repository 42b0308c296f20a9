use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("columns are not orthonormal (Gram defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },

    #[error("unitary completion found {found} of {needed} columns")]
    CompletionFailure { found: usize, needed: usize },

    #[error("trace is {re} + {im}i, expected 1")]
    NotUnitTrace { re: f64, im: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("bad probability vector: {0}")]
    BadProbabilityVector(String),

    #[error("channel output is not a density matrix: {0}")]
    OutputNotDensity(Box<Error>),

    #[error("mixing matrix is not unitary (defect {defect:.3e})")]
    NotUnitaryMixer { defect: f64 },

    #[error(
        "ambiguous eigenbranch matching at sample {sample}, branch {branch}: best overlap {best:.3e}, runner-up {second:.3e}"
    )]
    AmbiguousMatching {
        sample: usize,
        branch: usize,
        best: f64,
        second: f64,
    },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("Kraus set is not complete (defect {defect:.3e})")]
    CompletenessDefect { defect: f64 },

    #[error("need at least 2 samples, got {samples}")]
    TooFewSamples { samples: usize },

    #[error(
        "degenerate transport overlap for operator {operator}, branch {branch} at step {step} (|overlap| = {magnitude:.3e})"
    )]
    DegenerateOverlap {
        operator: usize,
        branch: usize,
        step: usize,
        magnitude: f64,
    },
}

impl Error {
    /// Stable machine-readable name, used for structured CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite => "NonFinite",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::CompletionFailure { .. } => "CompletionFailure",
            Error::NotUnitTrace { .. } => "NotUnitTrace",
            Error::NotPsd { .. } => "NotPSD",
            Error::BadProbabilityVector(_) => "BadProbabilityVector",
            Error::OutputNotDensity(_) => "OutputNotDensity",
            Error::NotUnitaryMixer { .. } => "NotUnitaryMixer",
            Error::AmbiguousMatching { .. } => "AmbiguousMatching",
            Error::BadParams(_) => "BadParams",
            Error::InvalidTrajectory(_) => "InvalidTrajectory",
            Error::CompletenessDefect { .. } => "CompletenessDefect",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::DegenerateOverlap { .. } => "DegenerateOverlap",
        }
    }
}
