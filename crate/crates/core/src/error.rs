use thiserror::Error;

use crate::series::{fmt_scalar, Scalar};

/// Every failure the kernel can report.
///
/// Variants split into mathematical obstructions (the input is well formed
/// but the requested object does not exist or cannot be certified at the
/// working order) and malformed input. [`FrescoError::is_math`] tells them
/// apart; the CLI maps the two groups to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrescoError {
    #[error("series is not a unit (constant term is 0)")]
    NotAUnit,

    #[error("resonant coefficient b^{m} in {context}: coefficient {} must vanish", fmt_scalar(.coeff))]
    Obstruction {
        m: usize,
        coeff: Scalar,
        context: String,
    },

    #[error("annihilator has the wrong shape: {0}")]
    BadAnnihilatorShape(String),

    #[error("vector is not a generator: {0}")]
    NotAGenerator(String),

    #[error("working order {order} too small to resolve {what}")]
    ResonanceAtTruncation { order: usize, what: String },

    #[error("working order {have} too small, need at least {needed} for {what}")]
    OrderTooSmall {
        needed: usize,
        have: usize,
        what: String,
    },

    #[error("module is not [λ]-primitive: invariants lie in several classes mod Z")]
    NotPrimitive,

    #[error("submodule is not normal: {0}")]
    NotNormal(String),

    #[error("classes do not form a prefix of the class order")]
    ClassNotSmallest,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid change of variable: {0}")]
    InvalidChangeOfVariable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl FrescoError {
    /// True for mathematical obstructions, false for malformed input.
    pub fn is_math(&self) -> bool {
        !matches!(
            self,
            FrescoError::InvalidPresentation(_)
                | FrescoError::InvalidChangeOfVariable(_)
                | FrescoError::Parse(_)
                | FrescoError::IndexOutOfRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, FrescoError>;
