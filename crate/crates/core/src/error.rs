use thiserror::Error;

/// Errors surfaced by every public entry point of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AskError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration needs {} points, budget is {budget}", show_needed(*.needed))]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("not a Lie algebra: {0}")]
    NotLieAlgebra(String),

    #[error("non-integral structure constants: {0}")]
    NonIntegralStructureConstants(String),

    #[error("not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, AskError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(AskError::InvalidInput(msg.into()))
}

fn show_needed(n: u128) -> String {
    if n == u128::MAX {
        "more than 2^128".into()
    } else {
        n.to_string()
    }
}
