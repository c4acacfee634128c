use thiserror::Error;

/// Errors raised by constructors, verifiers and the file layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("expected a {expected}-basis polynomial")]
    WrongBasis { expected: &'static str },

    #[error("Newton nodes of the pencil and the polynomial differ")]
    NodeMismatch,

    #[error("polynomial vanishes at every sample point; ansatz recovery is ill-posed")]
    IllPosed,

    #[error("ansatz vector is zero")]
    ZeroAnsatz,

    #[error("Z-block determinant condition violated (sigma_min = {sigma_min:e})")]
    SingularZBlock { sigma_min: f64 },

    #[error("no admissible Z block found after {0} attempts")]
    ZSearchFailed(usize),

    #[error("witness reduction does not reproduce diag(Q_N, I) (relative residual {residual:e})")]
    WitnessMismatch { residual: f64 },

    #[error("pencil is singular: det(A - sB) vanishes for every trial shift")]
    SingularPencil,

    #[error("determinant polynomials share a factor; the common zero set is not finite")]
    SharedFactor,

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
