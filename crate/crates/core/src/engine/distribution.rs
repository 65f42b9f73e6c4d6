use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::graph::{Graph, VertexId};

/// Pebble counts over the vertices of one graph, with a cached total.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Distribution {
    counts: Vec<u32>,
    total: u64,
}

impl Distribution {
    pub fn empty(vertices: usize) -> Self {
        Distribution {
            counts: vec![0; vertices],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        let total = counts.iter().map(|&c| c as u64).sum();
        Distribution { counts, total }
    }

    pub fn from_pairs(vertices: usize, pairs: &[(VertexId, u32)]) -> Self {
        let mut d = Distribution::empty(vertices);
        for &(v, c) in pairs {
            d.add(v, c);
        }
        d
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.counts[v]
    }

    pub fn set(&mut self, v: VertexId, c: u32) {
        self.total = self.total - self.counts[v] as u64 + c as u64;
        self.counts[v] = c;
    }

    pub fn add(&mut self, v: VertexId, c: u32) {
        self.counts[v] += c;
        self.total += c as u64;
    }

    /// Pebbles on a vertex subset.
    pub fn sum_over(&self, vertices: &[VertexId]) -> u64 {
        vertices.iter().map(|&v| self.counts[v] as u64).sum()
    }

    /// Vertices holding at least one pebble.
    pub fn support(&self) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v, c))
    }

    /// Pointwise `self <= other`.
    pub fn is_dominated_by(&self, other: &Distribution) -> bool {
        self.counts.len() == other.counts.len() && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Applies `m` in place after checking it is legal in `g`.
    pub fn apply(&mut self, g: &Graph, m: Move) -> Result<(), EngineError> {
        if m.from >= self.len() || m.to >= self.len() || !g.adjacent(m.from, m.to) {
            return Err(EngineError::NotAdjacent(m.from, m.to));
        }
        if self.counts[m.from] < 2 {
            return Err(EngineError::InsufficientPebbles {
                vertex: m.from,
                have: self.counts[m.from],
            });
        }
        self.counts[m.from] -= 2;
        self.counts[m.to] += 1;
        self.total -= 1;
        Ok(())
    }

    pub fn to_json(&self, g: &Graph) -> DistributionJson {
        DistributionJson {
            counts: self.support().map(|(v, c)| (g.label(v).to_string(), c)).collect(),
        }
    }

    pub fn from_json(g: &Graph, json: &DistributionJson) -> Result<Self, EngineError> {
        let mut d = Distribution::empty(g.vertex_count());
        for (label, &c) in &json.counts {
            d.add(g.resolve(label)?, c);
        }
        Ok(d)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts)
    }
}

/// `{"counts": {"v2": 10, "u1": 3}}`; zero entries may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub counts: BTreeMap<String, u32>,
}

/// Take two pebbles off `from`, put one on the adjacent `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: VertexId,
    pub to: VertexId,
}

impl Move {
    pub fn new(from: VertexId, to: VertexId) -> Self {
        Move { from, to }
    }
}

/// Pure form of [`Distribution::apply`].
pub fn apply_move(g: &Graph, d: &Distribution, m: Move) -> Result<Distribution, EngineError> {
    let mut out = d.clone();
    out.apply(g, m)?;
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveSequence { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays every move from `start`, failing on the first illegal one.
    pub fn replay(&self, g: &Graph, start: &Distribution) -> Result<Distribution, EngineError> {
        let mut d = start.clone();
        for (i, &m) in self.moves.iter().enumerate() {
            d.apply(g, m).map_err(|e| EngineError::ReplayFailed {
                step: i,
                reason: e.to_string(),
            })?;
        }
        Ok(d)
    }

    /// `[["u3","u2"],["u2","u1"]]`
    pub fn to_json(&self, g: &Graph) -> Vec<[String; 2]> {
        self.moves
            .iter()
            .map(|m| [g.label(m.from).to_string(), g.label(m.to).to_string()])
            .collect()
    }

    pub fn from_json(g: &Graph, json: &[[String; 2]]) -> Result<Self, EngineError> {
        let moves = json
            .iter()
            .map(|[a, b]| Ok(Move::new(g.resolve(a)?, g.resolve(b)?)))
            .collect::<Result<Vec<_>, EngineError>>()?;
        Ok(MoveSequence { moves })
    }
}
