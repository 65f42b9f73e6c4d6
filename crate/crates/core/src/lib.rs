//! Exact graph pebbling.
//!
//! * [`graph`]: paths, cycles, complete graphs, middle graphs, vertex deletion,
//!   Cartesian products and their fibers.
//! * [`engine`]: distributions and moves, exact t-solvability search, pebbling and
//!   t-pebbling numbers by exhaustive sweeps.
//! * [`strategy`]: constructive collection strategies that emit replayable move
//!   sequences.
//! * [`formula`]: closed-form values, bounds and inequalities checked against the
//!   search engine or by exact arithmetic.
//!
//! Closed forms are generic over [`scalar::ExactInt`]; the aliases below are the
//! arbitrary-precision defaults.

pub mod engine;
pub mod formula;
pub mod graph;
pub mod scalar;
pub mod strategy;

pub use engine::{Distribution, Move, MoveSequence};
pub use graph::{Graph, VertexId, VertexLabel};

/// Arbitrary-precision integer used by the claim registry.
pub type Exact = num_bigint::BigInt;
/// Arbitrary-precision rational used by the claim registry.
pub type ExactRatio = num_rational::BigRational;
/// Fixed-width rational, for callers that know their values fit.
pub type Ratio64 = num_rational::Ratio<i64>;
pub type Ratio128 = num_rational::Ratio<i128>;
