use std::io;

use thiserror::Error;

use crate::board::{BoardVertex, Topology};
use crate::engine::Progress;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid board: {0}")]
    InvalidBoard(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{op} is not supported on {topology} boards")]
    UnsupportedTopology {
        op: &'static str,
        topology: Topology,
    },

    #[error("not a pseudotour: square {square} has degree {degree}")]
    NotAPseudotour { square: String, degree: usize },

    #[error("cross graph structure error at vertex {vertex}: degree {degree}")]
    Structure { vertex: BoardVertex, degree: usize },

    #[error("node budget of {budget} exhausted after {} completed subtrees", progress.completed)]
    BudgetExhausted {
        budget: u64,
        progress: Box<Progress>,
    },

    #[error("board has {squares} squares; the oracle accepts at most {max}")]
    TooLarge { squares: usize, max: usize },

    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("corrupt census database {path} (line {line}): {reason}; move the file aside or truncate it after the last valid line")]
    CorruptCensus {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}
