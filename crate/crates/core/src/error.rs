use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants map one-to-one onto the documented error names so the CLI can
/// print them verbatim as the `reason` of a negative verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty tuple (no nonzero member)")]
    EmptyTuple,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("components are not homogeneous of a common degree")]
    NotHomogeneous,
    #[error("form is not divisible by the norm form")]
    NotDivisible,
    #[error("norm form is identically zero (r + s = 0)")]
    DegenerateNorm,
    #[error("form is not hermitian-symmetric")]
    NotHermitianSymmetric,
    #[error("form does not have hermitian rank one")]
    NotRankOne,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("not an orthogonal pair")]
    NotAnOrthogonalPair,
    #[error("pair is not quasi-standard (multiplier rank {rank})")]
    NotQuasiStandard { rank: usize },
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("rank-one multiplier is not positive")]
    SignatureObstruction,
    #[error("source signature has no null directions")]
    SourceNotDegenerate,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("generation exhausted after {0} retries")]
    GenerationExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::VariableCountMismatch { .. } => "VariableCountMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::EmptyTuple => "EmptyTuple",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::NotDivisible => "NotDivisible",
            Error::DegenerateNorm => "DegenerateNorm",
            Error::NotHermitianSymmetric => "NotHermitianSymmetric",
            Error::NotRankOne => "NotRankOne",
            Error::ZeroForm => "ZeroForm",
            Error::NoSolution => "NoSolution",
            Error::NotHermitian => "NotHermitian",
            Error::NotAnOrthogonalPair => "NotAnOrthogonalPair",
            Error::NotQuasiStandard { .. } => "NotQuasiStandard",
            Error::GenericityFailure(_) => "GenericityFailure",
            Error::SignatureObstruction => "SignatureObstruction",
            Error::SourceNotDegenerate => "SourceNotDegenerate",
            Error::InvalidSignature(_) => "InvalidSignature",
            Error::GenerationExhausted(_) => "GenerationExhausted",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
