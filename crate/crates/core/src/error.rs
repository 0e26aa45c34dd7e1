use std::fmt;

use crate::roots::RootResult;

/// Which end of an open interval `(a, b)` a condition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// The left end `a`, approached from above.
    Lower,
    /// The right end `b`, approached from below.
    Upper,
}

impl Endpoint {
    pub fn opposite(self) -> Endpoint {
        match self {
            Endpoint::Lower => Endpoint::Upper,
            Endpoint::Upper => Endpoint::Lower,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Lower => f.write_str("lower"),
            Endpoint::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: argument {x} is outside the domain")]
    Domain { what: String, x: f64 },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("g' vanishes at x = {x}")]
    DegenerateDerivative { x: f64 },

    #[error("missing capability: {0}")]
    Capability(String),

    #[error("g vanishes at x = {x}")]
    Division { x: f64 },

    #[error("rule not applicable: {0}")]
    WrongRule(String),

    #[error("f and g are not declared to vanish at the {0} endpoint")]
    WrongEndpoint(Endpoint),

    #[error("sign of H at the {0} endpoint is ambiguous (|limit| = {1:e} is below the zero threshold)")]
    AmbiguousEndpoint(Endpoint, f64),

    #[error("no sign change found: {0}")]
    NoRoot(String),

    #[error("root search did not converge after {} iterations (bracket width {:e})", .0.iterations, .0.bracket_final.width())]
    NonConvergence(Box<RootResult>),

    #[error("invalid lemma input: {0}")]
    InvalidLemmaInput(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("unknown catalog entry: {0}")]
    Catalog(String),

    #[error("inequality chain violated: {0}")]
    Violation(String),

    #[error("inconsistent rule inputs: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
