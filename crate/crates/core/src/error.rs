use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not diagonal (entry ({row}, {col}) = {value})")]
    NotDiagonal { row: usize, col: usize, value: f64 },

    #[error("degenerate coefficient matrix: |det(2A+J)| = {det:e} <= {tol:e}")]
    Degenerate { det: f64, tol: f64 },

    #[error("grid cannot resolve annulus k = {k}: 2^-k = {inner} < 2h = {twice_h}")]
    Unresolvable { k: u32, inner: f64, twice_h: f64 },

    #[error("measure support radius {radius} exceeds grid half-width {halfwidth}")]
    SupportExceedsGrid { radius: f64, halfwidth: f64 },

    #[error("argument {0} is a pole of the Gamma function")]
    GammaPole(String),

    #[error("order z = {0} is outside the function regime Re(z) > 0")]
    OutOfRegime(String),

    #[error("vanishing norm: {0}")]
    VanishingNorm(&'static str),

    #[error("ill-conditioned fit: relative spread {spread:e} exceeds {threshold:e}")]
    IllConditioned { spread: f64, threshold: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
