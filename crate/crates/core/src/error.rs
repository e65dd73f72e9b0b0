use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("Gamma pole at {0}")]
    Pole(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("no convergence after {terms} terms: {what}")]
    Convergence { what: String, terms: usize },

    #[error("series diverges: {0}")]
    DivergentSeries(String),

    #[error("division by the zero rational function")]
    DivideByZero,

    #[error("hypergeometric terms are not comparable: {0}")]
    NonComparable(String),

    #[error("shift moves a Gamma argument by a non-integer amount: {0}")]
    NonIntegerShift(String),

    #[error("modular root identification failed: {0}")]
    RootIdentification(String),

    #[error("singular curve: g2^3 - 27 g3^2 = 0")]
    SingularCurve,

    #[error("negative discriminant: curves with complex 2-torsion are not supported")]
    ComplexRootsUnsupported,

    #[error("argument is a lattice point: {0}")]
    LatticePole(String),

    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudgetExceeded(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn convergence(what: impl Into<String>, terms: usize) -> Self {
        Error::Convergence {
            what: what.into(),
            terms,
        }
    }
}

pub(crate) fn convergence(what: impl Into<String>, terms: usize) -> Error {
    Error::convergence(what, terms)
}
