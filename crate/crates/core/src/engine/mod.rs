//! Distributions, moves, exact solvability and exhaustive pebbling-number sweeps.

mod compositions;
mod distribution;
mod potential;
mod solve;
mod sweep;

use thiserror::Error;

use crate::graph::{GraphError, VertexId};

pub use compositions::{binomial, composition_count, enumerate_distributions, rank, unrank, Compositions};
pub use distribution::{apply_move, Distribution, DistributionJson, Move, MoveSequence};
pub use potential::{potential, TargetView};
pub use solve::{is_solvable, is_solvable_with, Decision, Limits, SolveOutcome, Solver};
pub use sweep::{
    lower_bound, pebbling_number, pebbling_number_vertex, t_pebbling_number, vertex_lower_bound, Budget, Checkpoint,
    LevelRecord, LowerBound, PebblingReport, SweepOptions, Witness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} holds {have} pebble(s); a move needs 2")]
    InsufficientPebbles { vertex: VertexId, have: u32 },
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("t must be at least 1")]
    InvalidT,
    #[error("distribution has {got} entries, graph has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("move {step} cannot be replayed: {reason}")]
    ReplayFailed { step: usize, reason: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
