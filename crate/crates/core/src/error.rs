use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2, 4 or 8)")]
    InvalidDimension(usize),

    #[error("kronecker product of dimensions {left} and {right} exceeds 8")]
    DimensionOverflow { left: usize, right: usize },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("diagonal entry {index} has imaginary part {imag:e}")]
    ComplexDiagonal { index: usize, imag: f64 },

    #[error("X-matrix is diagonal; the rank-four criterion needs some c_i != 0")]
    DiagonalXMatrix,

    #[error("product vector has a zero entry")]
    ZeroEntry,

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("X-matrix is not a rank-four separable state: {0}")]
    NotRank4Separable(String),

    #[error("pairing has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("invalid witness parameters s = {s}, t = {t}: need s, t > 0 and |st - 8| < 1e-9")]
    InvalidWitness { s: f64, t: f64 },

    #[error("grid yields only {0} kernel vectors (need at least 8)")]
    GridTooSmall(usize),

    #[error("nullspace is ill-conditioned: relative singular-value gap {gap:e} below {limit:e}; refine the grid")]
    IllConditioned { gap: f64, limit: f64 },

    #[error("no PPT state with negative pairing found: {0}")]
    DetectionFailed(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
