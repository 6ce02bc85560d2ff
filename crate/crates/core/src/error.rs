use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    RingMismatch,
    Shape(String),
    IllDefinedMap(String),
    NotAChainComplex { degree: usize },
    NotAChainMap { degree: usize },
    SimplicialIdentity { level: usize, i: usize, j: usize, identity: &'static str },
    InsufficientTruncation { needed: usize, available: usize },
    UnsupportedOracleInput(String),
    NotFibrant { level: usize },
    SearchBoundExceeded(String),
    Precondition(String),
    NonzeroObstruction { stage: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch => write!(f, "operands live over different rings"),
            Error::Shape(s) => write!(f, "shape mismatch: {}", s),
            Error::IllDefinedMap(s) => write!(f, "ill-defined module map: {}", s),
            Error::NotAChainComplex { degree } => {
                write!(f, "d∘d ≠ 0: d_{} ∘ d_{} is nonzero", degree, degree + 1)
            }
            Error::NotAChainMap { degree } => {
                write!(f, "map does not commute with differentials in degree {}", degree)
            }
            Error::SimplicialIdentity { level, i, j, identity } => write!(
                f,
                "simplicial identity {} fails at level {} for (i, j) = ({}, {})",
                identity, level, i, j
            ),
            Error::InsufficientTruncation { needed, available } => write!(
                f,
                "insufficient truncation: level {} needed, {} available",
                needed, available
            ),
            Error::UnsupportedOracleInput(s) => write!(f, "unsupported oracle input: {}", s),
            Error::NotFibrant { level } => {
                write!(f, "input is not Reedy fibrant at external level {}", level)
            }
            Error::SearchBoundExceeded(s) => write!(f, "search bound exceeded: {}", s),
            Error::Precondition(s) => write!(f, "precondition violated: {}", s),
            Error::NonzeroObstruction { stage } => {
                write!(f, "nonzero obstruction class at stage {}", stage)
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
