//! Shared error type for the whole engine.
//!
//! Every fallible public operation returns [`Error`]. Certified failure modes
//! (budgets, tower caps) are distinguished from usage errors so the CLI can map
//! them to exit codes.

/// Errors surfaced by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Division by the zero element of a field tower.
    #[error("division by zero")]
    DivisionByZero,

    /// Two elements from structurally different towers were combined.
    #[error("elements belong to different field towers")]
    TowerMismatch,

    /// A p-th root was requested in characteristic zero.
    #[error("p-th roots are only defined in positive characteristic")]
    CharacteristicZero,

    /// The zero polynomial was passed where a nonzero one is required.
    #[error("zero polynomial")]
    ZeroPolynomial,

    /// Attempted to extend a tower by a reducible polynomial.
    #[error("minimal polynomial is reducible: {0}")]
    ReducibleMinimalPolynomial(String),

    /// The tower shape is outside the supported family
    /// (base QQ or GF(p), at most one transcendental step, algebraic degree <= 32).
    #[error("unsupported field tower shape: {0}")]
    UnsupportedTower(String),

    /// Vertex dissolution exceeded its step budget (certified failure).
    #[error("vertex dissolution exceeded its budget of {budget} steps")]
    DissolutionBudget { budget: usize },

    /// A search/enumeration budget was exhausted (certified failure).
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// The input is quasi-regular and the requested operation does not apply.
    #[error("input is quasi-regular: {0}")]
    QuasiRegular(String),

    /// A parse error with source position (1-based line and column).
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// The requested operation is not defined for the given input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal invariant was violated; indicates a bug, never expected data.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Filesystem or output error from the CLI layer.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
