//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the algebra engine, the checkers and the CLI front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("substitution makes a denominator identically zero")]
    ZeroDenominator,
    #[error("pole of order {order} along {form}")]
    HigherOrderPole { form: String, order: u32 },
    #[error("denominator {0} is not of the form x_a or x_a - x_b")]
    NonStandardDenominator(String),
    #[error("too many variables: at most {0} are supported")]
    TooManyVariables(usize),
    #[error("overlapping indices in stuffle/shuffle arguments")]
    OverlappingIndices,
    #[error("empty word")]
    EmptyWord,
    #[error("reduce called on a function that is not translation invariant")]
    NotTranslationInvariant,
    #[error("symmetry precondition violated: {0}")]
    SymmetryViolation(String),
    #[error("weight is not set")]
    WeightUnset,
    #[error("missing component in depth {0}")]
    MissingComponent(usize),
    #[error("identity only holds for even weight, got weight {0}")]
    OddWeight(i64),
    #[error("pole of order 2 at x_{0}=0 outside the structured case")]
    DoublePole(usize),
    #[error("filtration degree exceeds depth {0}")]
    ExceedsDepth(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole shape violation: {0}")]
    PoleShape(String),
    #[error("divisibility precondition fails: {0}")]
    Divisibility(String),
    #[error("ansatz too large: {size} unknowns exceed cap {cap}")]
    AnsatzTooLarge { size: usize, cap: usize },
    #[error("empty basis")]
    EmptyBasis,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("solution not unique: kernel dimension {0}")]
    NonUnique(usize),
    #[error("component is not polynomial")]
    NonPolynomial,
    #[error("word longer than the depth support {0}")]
    WordTooLong(usize),
    #[error("denominator divisible by {0}")]
    DenominatorDivisible(u64),
    #[error("parse error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
