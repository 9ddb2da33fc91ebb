use std::fmt;

/// Syntax error with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("too many distinct variables ({count}, limit {limit})")]
    TooManyVariables { count: usize, limit: usize },
    #[error("CNF conversion would exceed {cap} clauses")]
    CnfCap { cap: usize },
    #[error("step limit of {0} reached")]
    StepLimit(usize),
    #[error("oracle refuses {count} variables (limit {limit})")]
    OracleCap { count: usize, limit: usize },
    #[error("assignment does not cover variable {0}")]
    MissingVariable(String),
    #[error("binary implication graph contains a cycle")]
    CyclicGraph,
    #[error("scope path does not address an area")]
    InvalidPath,
    #[error("clause id {0} does not address a clause")]
    InvalidClause(u32),
    #[error("formula is not a flat CNF")]
    NotCnf,
    #[error("equivalence check failed after step {step}")]
    OracleMismatch { step: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
