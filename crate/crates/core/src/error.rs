use thiserror::Error;

/// Errors raised by the library. Each variant carries a short human context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("divisor is not monic of degree one in a")]
    DivisorNotMonic,
    #[error("polynomial does not split over Q: {0}")]
    NotFullySplit(String),
    #[error("saturation did not stabilize: {0}")]
    NotStabilized(String),
    #[error("module is not regular at this precision")]
    NotRegular,
    #[error("module is not geometric: {0}")]
    NotGeometric(String),
    #[error("invalid change of variable: {0}")]
    InvalidTheta(String),
    #[error("not a fresco: {0}")]
    NotAFresco(String),
    #[error("submodule is not normal: {0}")]
    NotNormal(String),
    #[error("ambiguous Jordan-Hölder selection: {0}")]
    SelectionAmbiguous(String),
    #[error("Bernstein polynomial mismatch: {0}")]
    BernsteinMismatch(String),
    #[error("rank of the generated module did not stabilize: {0}")]
    RankNotStabilized(String),
    #[error("field does not contain tau")]
    FieldTooSmall,
    #[error("embedding is not minimal: {0}")]
    NotMinimalEmbedding(String),
    #[error("not primitive: {0}")]
    NotPrimitive(String),
    #[error("canonicalization failed: {0}")]
    CanonicalizationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
}

impl Error {
    /// Module-qualified code used by the CLI and the C interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotAUnit(_) => "scalars.NotAUnit",
            Error::SyntaxError { .. } => "ab_algebra.SyntaxError",
            Error::DivisorNotMonic => "ab_algebra.DivisorNotMonic",
            Error::NotFullySplit(_) => "ab_algebra.NotFullySplit",
            Error::NotStabilized(_) => "ab_module.NotStabilized",
            Error::NotRegular => "ab_module.NotRegular",
            Error::NotGeometric(_) => "ab_module.NotGeometric",
            Error::InvalidTheta(_) => "ab_module.InvalidTheta",
            Error::NotAFresco(_) => "fresco.NotAFresco",
            Error::NotNormal(_) => "fresco.NotNormal",
            Error::SelectionAmbiguous(_) => "fresco.SelectionAmbiguous",
            Error::BernsteinMismatch(_) => "fresco.BernsteinMismatch",
            Error::RankNotStabilized(_) => "xi.RankNotStabilized",
            Error::FieldTooSmall => "xi.FieldTooSmall",
            Error::NotMinimalEmbedding(_) => "xi.NotMinimalEmbedding",
            Error::NotPrimitive(_) => "theme.NotPrimitive",
            Error::CanonicalizationFailed(_) => "theme.CanonicalizationFailed",
            Error::InvalidInput(_) => "io.InvalidInput",
            Error::PrecisionTooLow(_) => "ab_module.PrecisionTooLow",
        }
    }

    /// Parse and input errors, as opposed to mathematical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::SyntaxError { .. } | Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
