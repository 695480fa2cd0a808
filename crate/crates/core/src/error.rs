use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("(q - q^-1) vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("quotient is not a Gaussian integer")]
    NonIntegralQuotient,
    #[error("invalid two-bridge code ({p}, {q}): gcd must be 1")]
    InvalidCode { p: i64, q: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("crossing {0} not found")]
    CrossingNotFound(usize),
    #[error("diagram already has a singular crossing")]
    SecondSingularCrossing,
    #[error("skein tree exceeded the node budget of {0}")]
    ResourceLimit(u64),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("phase i^{phase} does not match signature {sigma}")]
    PhaseMismatch { phase: u8, sigma: i64 },
    #[error("determinant is zero")]
    ZeroDeterminant,
    #[error("no signature within 1 of {sigma0} matches phase i^{phase}")]
    NoAdmissibleSigma { phase: u8, sigma0: i64 },
    #[error("HOMFLY polynomial is not alternating")]
    NotAlternating,
    #[error("t-exponent parity violated at a^{m} q^{n} with sigma {sigma}")]
    ParityViolation { m: i64, n: i64, sigma: i64 },
    #[error("input is not a knot")]
    NotAKnot,
    #[error("input is not a two-component link")]
    NotATwoComponentLink,
    #[error("P-tilde is not a Laurent polynomial")]
    FractionalRemainder,
    #[error("diagrams are not related by a crossing change")]
    DiagramsNotRelated,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("N = {0} is outside the proven range N > 4")]
    RankOutOfRange(i64),
}

impl Error {
    /// Process exit code used by the CLI and status code used over FFI.
    /// 2: bad input, 3: resource limit, 4: rank gate, 5: a checked identity
    /// failed.
    pub fn code(&self) -> i32 {
        match self {
            Error::InvalidCode { .. }
            | Error::InvalidParameter(_)
            | Error::MalformedDiagram(_)
            | Error::CrossingNotFound(_)
            | Error::SecondSingularCrossing
            | Error::ZeroDeterminant
            | Error::NotAKnot
            | Error::NotATwoComponentLink
            | Error::DiagramsNotRelated
            | Error::Parse(_) => 2,
            Error::ResourceLimit(_) => 3,
            Error::RankOutOfRange(_) => 4,
            Error::DenominatorVanishes
            | Error::NonIntegralQuotient
            | Error::InternalInconsistency(_)
            | Error::PhaseMismatch { .. }
            | Error::NoAdmissibleSigma { .. }
            | Error::NotAlternating
            | Error::ParityViolation { .. }
            | Error::FractionalRemainder => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
