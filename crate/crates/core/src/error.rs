use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("singular coefficients: |ad - bc| = {det_modulus:e} is below the degeneracy threshold")]
    SingularMap { det_modulus: f64 },

    #[error("coefficients must be finite")]
    NonFinite,

    /// Operation is only defined for nonidentity maps (every point is fixed).
    #[error("the identity map has no isolated fixed points or multipliers")]
    IdentityMap,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The theory covers this size but the implementation does not.
    #[error("unsupported operator size {size} (supported: {max} or less)")]
    UnsupportedSize { size: usize, max: usize },

    /// The three topological criteria disagreed; some gated quantity sits
    /// near its threshold.
    #[error(
        "indeterminate: criteria disagree (trace={trace}, eigen={eigen}, multiplier={multiplier}); margin {margin:e}"
    )]
    Indeterminate {
        trace: bool,
        eigen: bool,
        multiplier: bool,
        margin: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
