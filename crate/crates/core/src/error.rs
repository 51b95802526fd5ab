use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |A - A†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix has a negative eigenvalue {0:.3e} beyond tolerance")]
    NegativeSpectrum(f64),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state trace {0:.12} differs from 1")]
    TraceError(f64),
    #[error("vector norm {0:.12} differs from 1")]
    NormError(f64),
    #[error("Fock truncation keeps only {kept:.6} of the coherent-state norm")]
    TruncationTooLossy { kept: f64 },
    #[error("coupling eta = {0} outside [0, 1]")]
    EtaOutOfRange(f64),
    #[error("the inverse damping map is singular at eta = 0")]
    EtaZero,
    #[error("state is unphysical (minimum eigenvalue {0:.3e})")]
    Unphysical(f64),
    #[error("expected a two-qubit state, got dims {0}x{1}")]
    NotTwoQubit(usize, usize),
    #[error("input state is separable")]
    SeparableInput,
    #[error("operation requires a normally ordered spec, got {0}")]
    WrongOrdering(String),
    #[error("invalid moment matrix spec: {0}")]
    InvalidSpec(String),
    #[error("moment matrix is not Hermitian (max |M - M†| = {0:.3e})")]
    NotHermitianResult(f64),
    #[error("witness determinant has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::NegativeSpectrum(_)
                | Error::NonFinite
                | Error::NotHermitianResult(_)
                | Error::ImaginaryResidue(_)
                | Error::Unphysical(_)
        )
    }
}
