//! Simplification of propositional formulas held as existential graphs.

pub mod big;
pub mod cli;
pub mod eg;
pub mod engine;
pub mod error;
pub mod gen;
pub mod oracle;
pub mod parse;
pub mod render;
pub mod rules;
pub mod work;

pub use eg::{Formula, Literal, Names, Node, VarId};
pub use error::{Error, ParseError, Result};
