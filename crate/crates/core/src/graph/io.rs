use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, VertexLabel};

/// On-disk graph form: canonical label strings and index pairs.
///
/// ```json
/// {"vertices": ["v0", "u(0,1)", "v1"], "edges": [[0, 1], [1, 2]]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.labels().iter().map(|l| l.to_string()).collect(),
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(json: GraphJson) -> Result<Self, Self::Error> {
        let labels = json
            .vertices
            .iter()
            .map(|s| s.parse::<VertexLabel>())
            .collect::<Result<Vec<_>, _>>()?;
        Graph::new(labels, json.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from(self)).expect("graph json")
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let json: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
        Graph::try_from(json)
    }

    /// Graphviz rendering, one node per label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for l in self.labels() {
            let shape = if l.is_edge_vertex() { "box" } else { "ellipse" };
            writeln!(out, "  \"{l}\" [shape={shape}];").unwrap();
        }
        for (a, b) in self.edges() {
            writeln!(out, "  \"{}\" -- \"{}\";", self.label(a), self.label(b)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::{cartesian_product, middle_cycle, path};

    use super::*;

    #[test]
    fn json_round_trip_of_product() {
        let g = cartesian_product(&middle_cycle(2).unwrap(), &path(2).unwrap()).unwrap();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(matches!(Graph::from_json("{"), Err(GraphError::Format(_))));
        let loops = r#"{"vertices":["v0","v1"],"edges":[[0,0]]}"#;
        assert!(Graph::from_json(loops).is_err());
        let shorthand = r#"{"vertices":["v0","u0"],"edges":[[0,1]]}"#;
        assert!(matches!(Graph::from_json(shorthand), Err(GraphError::BadLabel(_))));
    }

    #[test]
    fn dot_lists_every_label() {
        let g = middle_cycle(2).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph G {"));
        assert_eq!(dot.matches(" -- ").count(), g.edge_count());
        assert!(dot.contains("\"u(0,3)\" [shape=box]"));
    }
}
