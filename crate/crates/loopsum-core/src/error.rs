//! Crate-wide error type.
//!
//! Algebraic failure modes are ordinary values here: a failed exact division
//! carries its remainder and an inconsistent interpolation carries both
//! conflicting values, because those outcomes are findings, not crashes.

use thiserror::Error;

use crate::laurent::LaurentPoly;

/// Errors produced by the algebra layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// Division by zero in the coefficient field.
    #[error("division by zero in Q(w)")]
    DivisionByZero,

    /// Two polynomials were combined but live over different variable sets.
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },

    /// A variable name was required to exist (or not exist) and did not.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// A variable name occurred twice while building a variable set.
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    /// A substitution or evaluation used the constant zero where a unit of the
    /// Laurent ring is required.
    #[error("zero is not allowed for `{0}` (Laurent exponents may be negative)")]
    ZeroValue(String),

    /// An evaluation point does not cover the polynomial's variables.
    #[error("evaluation point misses variable `{0}`")]
    MissingAssignment(String),

    /// Determinant of a non-square matrix was requested.
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    /// A matrix builder was called with a variable count that violates the
    /// kind's size rule.
    #[error("matrix size rule violated for {kind}: {detail}")]
    SizeRule { kind: String, detail: String },

    /// Exact division left a nonzero remainder. The remainder is preserved:
    /// a divisibility failure in a sum-rule ratio is a meaningful result.
    #[error("not divisible ({context}); remainder has {} terms", remainder.term_count())]
    NotDivisible {
        remainder: Box<LaurentPoly>,
        context: String,
    },

    /// A surplus interpolation node disagreed with the fitted polynomial; both
    /// values are carried so the disagreement is reproducible.
    #[error("interpolation surplus check failed at node {node}: fitted value != recurrence value")]
    InconsistentInterpolation {
        node: String,
        fitted: Box<LaurentPoly>,
        recurrence: Box<LaurentPoly>,
    },

    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}
