use std::fmt;

use thiserror::Error as ThisError;

/// A single violated descriptor clause together with the offending data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Short clause name, e.g. `"condition (m)"` or `"comparable types"`.
    pub clause: &'static str,
    pub message: String,
}

impl Violation {
    pub fn new(clause: &'static str, message: impl Into<String>) -> Self {
        Violation {
            clause,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.clause, self.message)
    }
}

/// All violations found by descriptor validation, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationList(pub Vec<Violation>);

impl fmt::Display for ViolationList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("p-adic valuation of zero is undefined")]
    UndefinedValuation,
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: u64 },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("progression {a} + {d}t contains no primes to report: gcd({a}, {d}) != 1")]
    EmptyProgression { a: i64, d: u64 },
    #[error("{x} is not reducible modulo {m}: denominator shares a factor with the modulus")]
    NotReducible { x: String, m: u64 },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid descriptor: {0}")]
    Invalid(ViolationList),
    #[error("malformed {kind}: {reason}")]
    Shape { kind: &'static str, reason: String },
    #[error("not an endomorphism: {0}")]
    NotAnEndomorphism(String),
    #[error("closure cap {cap} exceeded after {reached} elements")]
    CapExceeded { cap: usize, reached: usize },
    #[error("rank {rank} is not a perfect cube")]
    NotRealizable { rank: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generation failed: {0}")]
    GenerationFailure(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
}

impl Error {
    pub fn invalid(violations: Vec<Violation>) -> Self {
        Error::Invalid(ViolationList(violations))
    }

    pub fn shape(kind: &'static str, reason: impl Into<String>) -> Self {
        Error::Shape {
            kind,
            reason: reason.into(),
        }
    }

    /// The violation list when this is a validation error.
    pub fn violations(&self) -> Option<&[Violation]> {
        match self {
            Error::Invalid(list) => Some(&list.0),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
