//! Weighted finite-state acceptors and transducers over the tropical
//! (min, +) semiring.
//!
//! An acceptor is a transducer whose arcs all carry identical input and
//! output labels, so a single [`Fst`] type covers both. Machines are plain
//! data and are `Send + Sync`; nothing mutates them after construction.

mod compose;
mod fst;
mod ops;
mod path;
mod symbol;
mod text;
mod weight;

pub use compose::compose;
pub use fst::{Fst, StateId, Transition};
pub use ops::{invert, linear_acceptor, project_output, trim};
pub use path::{best_path, k_best, k_best_unique, shortest_distance_to_final, Path};
pub use symbol::{Label, SymbolTable, EPSILON, EPSILON_LABEL};
pub use text::{read_text, read_text_inferring_symbols, write_text};
pub use weight::{format_cost, Weight};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FsmError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol label {0:?}")]
    InvalidLabel(String),
    #[error("symbol table is full")]
    TableFull,
    #[error("invalid weight {0}: costs must be finite and non-negative, probabilities in (0, 1]")]
    InvalidWeight(f64),
    #[error("state {0} does not exist")]
    InvalidState(StateId),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl FsmError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        FsmError::Parse {
            line,
            message: message.into(),
        }
    }
}
