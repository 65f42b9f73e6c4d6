//! Finite simple connected graphs with structured vertex labels, plus the
//! constructors for the families used throughout the crate.

mod families;
mod io;
mod label;
mod spec;

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use families::{
    cartesian_product, complete, cycle, delete_vertices, fiber, fiber_vertices, middle_cycle, middle_cycle_u,
    middle_graph, middle_path_trimmed, path, Side,
};
pub use io::GraphJson;
pub use label::{LabelSpec, VertexLabel};
pub use spec::GraphSpec;

/// Index of a vertex inside one [`Graph`].
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("malformed vertex label `{0}`")]
    BadLabel(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("edge {0}-{1} is a loop, a repeat, or out of range")]
    BadEdge(usize, usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a product graph: {0}")]
    NotAProduct(String),
    #[error("malformed graph file: {0}")]
    Format(String),
}

/// Immutable simple connected graph.
///
/// Neighbors are kept as sorted lists for iteration and as a bit matrix for
/// constant-time adjacency tests.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, VertexId>,
    neighbors: Vec<Vec<VertexId>>,
    adjacency: FixedBitSet,
    edge_count: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.neighbors == other.neighbors
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges, duplicate labels and
    /// disconnected or empty results.
    pub fn new(
        labels: Vec<VertexLabel>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateLabel(l.to_string()));
            }
        }
        let mut adjacency = FixedBitSet::with_capacity(n * n);
        let mut neighbors = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (a, b) in edges {
            if a == b || a >= n || b >= n || adjacency.contains(a * n + b) {
                return Err(GraphError::BadEdge(a, b));
            }
            adjacency.insert(a * n + b);
            adjacency.insert(b * n + a);
            neighbors[a].push(b);
            neighbors[b].push(a);
            edge_count += 1;
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let g = Graph {
            labels,
            index,
            neighbors,
            adjacency,
            edge_count,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v]
    }

    pub fn id(&self, label: &VertexLabel) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn id_or_err(&self, label: &VertexLabel) -> Result<VertexId, GraphError> {
        self.id(label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
    }

    /// Resolves a user-typed label, accepting the `u{i}` shorthand.
    pub fn resolve(&self, text: &str) -> Result<VertexId, GraphError> {
        let spec: LabelSpec = text.parse()?;
        spec.candidates()
            .iter()
            .find_map(|l| self.id(l))
            .ok_or_else(|| GraphError::UnknownLabel(text.to_string()))
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors[v].len()
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        let n = self.vertex_count();
        a < n && b < n && self.adjacency.contains(a * n + b)
    }

    /// Edges as `(a, b)` with `a < b`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Breadth-first distances from `source`; unreachable vertices get `usize::MAX`.
    pub fn distances_from(&self, source: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: VertexId, b: VertexId) -> usize {
        self.distances_from(a)[b]
    }

    /// Distance between two labelled vertices.
    pub fn distance_between(&self, a: &VertexLabel, b: &VertexLabel) -> Result<usize, GraphError> {
        let (a, b) = (self.id_or_err(a)?, self.id_or_err(b)?);
        Ok(self.distance(a, b))
    }

    pub fn eccentricity(&self, v: VertexId) -> usize {
        self.distances_from(v).into_iter().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.eccentricity(v))
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Induced subgraph on `keep`, in the given order. Must stay connected.
    pub fn induced(&self, keep: &[VertexId]) -> Result<Graph, GraphError> {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            if v >= self.vertex_count() {
                return Err(GraphError::InvalidParameter(format!("vertex {v} out of range")));
            }
            pos[v] = i;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges: Vec<_> = self
            .edges()
            .filter(|&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|(a, b)| (pos[a], pos[b]))
            .collect();
        Graph::new(labels, edges)
    }

    /// True when `map` is a bijection onto `other`'s vertices preserving adjacency
    /// in both directions.
    pub fn is_isomorphic_via(&self, other: &Graph, map: impl Fn(VertexId) -> Option<VertexId>) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edge_count != other.edge_count {
            return false;
        }
        let mut image = Vec::with_capacity(n);
        let mut hit = vec![false; n];
        for v in 0..n {
            match map(v) {
                Some(w) if w < n && !hit[w] => {
                    hit[w] = true;
                    image.push(w);
                }
                _ => return false,
            }
        }
        self.edges().all(|(a, b)| other.adjacent(image[a], image[b]))
    }

    /// Stable content hash (SHA-256 of the canonical JSON form).
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(&GraphJson::from(self)).expect("graph json");
        hex::encode(Sha256::digest(&json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new((0..3).map(VertexLabel::Original).collect(), [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn rejects_loops_repeats_and_disconnection() {
        let labels: Vec<_> = (0..3).map(VertexLabel::Original).collect();
        assert_eq!(
            Graph::new(labels.clone(), [(0, 0)]).unwrap_err(),
            GraphError::BadEdge(0, 0)
        );
        assert_eq!(
            Graph::new(labels.clone(), [(0, 1), (1, 0)]).unwrap_err(),
            GraphError::BadEdge(1, 0)
        );
        assert_eq!(
            Graph::new(labels.clone(), [(0, 1)]).unwrap_err(),
            GraphError::Disconnected
        );
        assert_eq!(Graph::new(vec![], []).unwrap_err(), GraphError::Empty);
        let dup = vec![VertexLabel::Original(0), VertexLabel::Original(0)];
        assert!(matches!(Graph::new(dup, [(0, 1)]), Err(GraphError::DuplicateLabel(_))));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = triangle();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(g.adjacent(a, b), a != b);
            }
        }
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn induced_checks_connectivity() {
        let g = path(3).unwrap();
        assert_eq!(g.induced(&[0, 2]).unwrap_err(), GraphError::Disconnected);
        let sub = g.induced(&[1, 2]).unwrap();
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn resolve_shorthand() {
        let g = middle_cycle(2).unwrap();
        assert_eq!(g.label(g.resolve("u0").unwrap()), &VertexLabel::edge(0, 1));
        assert_eq!(g.label(g.resolve("u3").unwrap()), &VertexLabel::edge(0, 3));
        assert_eq!(g.label(g.resolve("u(2,3)").unwrap()), &VertexLabel::edge(2, 3));
        assert!(matches!(g.resolve("v9"), Err(GraphError::UnknownLabel(_))));
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        assert_eq!(cycle(5).unwrap().content_hash(), cycle(5).unwrap().content_hash());
        assert_ne!(cycle(5).unwrap().content_hash(), path(5).unwrap().content_hash());
    }
}
