use crate::diagram::Colour;

/// Errors surfaced by the engine.
///
/// Mixing scalars over different `n` is a programming error and panics
/// instead; every error here is reachable from user input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero in Q(sqrt n)")]
    DivisionByZero,

    #[error("colour mismatch: {0} vs {1}")]
    ColourMismatch(Colour, Colour),

    #[error("arity error: {0}")]
    Arity(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("type error at {line}:{col}: {msg}")]
    Type { line: usize, col: usize, msg: String },
}
