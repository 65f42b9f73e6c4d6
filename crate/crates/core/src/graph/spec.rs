use std::fmt;
use std::str::FromStr;

use super::{complete, cycle, middle_cycle, middle_graph, middle_path_trimmed, path, Graph, GraphError};

/// Shorthand for a named family member, e.g. `path:4`, `m-cycle:2`,
/// `m-path-trimmed:5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// `M(C_{2n})`
    MiddleCycle(usize),
    /// `M(P_n)`
    MiddlePath(usize),
    /// `M(P_n) - {v1, vn}`
    MiddlePathTrimmed(usize),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match *self {
            GraphSpec::Path(n) => path(n),
            GraphSpec::Cycle(n) => cycle(n),
            GraphSpec::Complete(n) => complete(n),
            GraphSpec::MiddleCycle(n) => middle_cycle(n),
            GraphSpec::MiddlePath(n) => middle_graph(&path(n)?),
            GraphSpec::MiddlePathTrimmed(n) => middle_path_trimmed(n),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::MiddleCycle(n) => write!(f, "m-cycle:{n}"),
            GraphSpec::MiddlePath(n) => write!(f, "m-path:{n}"),
            GraphSpec::MiddlePathTrimmed(n) => write!(f, "m-path-trimmed:{n}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidParameter(format!("unrecognised graph spec `{s}`"));
        let (family, n) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        Ok(match family.trim() {
            "path" => GraphSpec::Path(n),
            "cycle" => GraphSpec::Cycle(n),
            "complete" => GraphSpec::Complete(n),
            "m-cycle" | "middle-cycle" => GraphSpec::MiddleCycle(n),
            "m-path" | "middle-path" => GraphSpec::MiddlePath(n),
            "m-path-trimmed" | "middle-path-trimmed" => GraphSpec::MiddlePathTrimmed(n),
            _ => return Err(bad()),
        })
    }
}
