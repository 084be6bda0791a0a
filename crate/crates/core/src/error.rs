use std::fmt;

use thiserror::Error;

/// Source position inside DSL input, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible scalars: {left} and {right}")]
    ScalarMismatch { left: String, right: String },

    #[error("arity mismatch in {context}: expected {expected}, found {found}")]
    ArityMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("maps live in different hom-sets: {left} and {right}")]
    HomMismatch { left: String, right: String },

    #[error("operation requires ℚ≥0-algebra, but the semiring is {semiring}")]
    RequiresRationalAlgebra { semiring: String },

    #[error("partition budget exceeded: order {order} needs {needed} partitions, budget is {budget}")]
    BudgetExceeded {
        order: usize,
        needed: u128,
        budget: u128,
    },

    #[error("malformed slot: {0}")]
    MalformedSlot(String),

    #[error("jet is not pointed: component {component} has a nonzero constant term")]
    NotPointed { component: usize },

    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("order {requested} exceeds jet truncation order {order}")]
    OutOfOrder { requested: usize, order: usize },

    #[error("unknown jet primitive `{0}`")]
    UnknownPrimitive(String),

    #[error("unknown semiring token `{0}` (expected nat, rat or zmod:<m> with m >= 2)")]
    UnknownSemiring(String),

    #[error("unknown model token `{0}` (expected poly or jet:<K> with K >= 1)")]
    UnknownModel(String),

    #[error("jet model requires the rational semiring, not {0}")]
    JetNeedsRationals(String),

    #[error("invalid scalar `{value}` for semiring {semiring}")]
    InvalidScalar { value: String, semiring: String },

    #[error("{pos}: syntax error: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },

    #[error("{pos}: {message}")]
    Elaboration { pos: Pos, message: String },

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
