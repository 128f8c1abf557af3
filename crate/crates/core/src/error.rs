use thiserror::Error;

/// Failure modes shared across the decomposition modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix has a degenerate spectrum (minimum eigenvalue gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("index {index} is out of range for {context}")]
    IndexOutOfRange { index: usize, context: &'static str },
    #[error("no diagonal/off-diagonal solution found within the search budget")]
    NoSolutionFound,
    #[error("no symmetry relation fits (best residual {best_residual:.3e})")]
    NoRelationFound { best_residual: f64 },
    #[error("no logarithm branch puts the generator in the split's P space (best foreign residual {best_foreign:.3e})")]
    BranchSelectionFailed { best_foreign: f64 },
    #[error("unknown Cartan split {0:?}")]
    UnknownSplit(String),
    #[error("operation requires split {expected}, got {found}")]
    WrongSplit {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
