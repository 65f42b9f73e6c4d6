use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, VertexId, VertexLabel};

/// Path on `n` vertices `v1 .. vn` (1-based, as the path strategies index them).
pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("path needs n >= 1".into()));
    }
    let labels = (1..=n).map(VertexLabel::Original).collect();
    Graph::new(labels, (1..n).map(|i| (i - 1, i)))
}

/// Cycle on `n` vertices `v0 .. v{n-1}` (0-based).
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("cycle needs n >= 3".into()));
    }
    let labels = (0..n).map(VertexLabel::Original).collect();
    Graph::new(labels, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete graph on `v0 .. v{n-1}`.
pub fn complete(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let labels = (0..n).map(VertexLabel::Original).collect();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    Graph::new(labels, edges)
}

/// Middle graph: every edge `ab` is subdivided by a new vertex, and two new
/// vertices are joined when their edges share an endpoint. Edges between original
/// vertices are not kept.
///
/// Edge vertices are named by the endpoints' `Original` indices when every label
/// of `g` is an `Original`, and by vertex position otherwise.
pub fn middle_graph(g: &Graph) -> Result<Graph, GraphError> {
    let n = g.vertex_count();
    let name: Vec<usize> = if g.labels().iter().all(|l| matches!(l, VertexLabel::Original(_))) {
        g.labels()
            .iter()
            .map(|l| match l {
                VertexLabel::Original(i) => *i,
                _ => unreachable!(),
            })
            .collect()
    } else {
        (0..n).collect()
    };
    let mut labels = g.labels().to_vec();
    let mut edges = Vec::new();
    let mut incident: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (a, b) in g.edges() {
        let x = labels.len();
        labels.push(VertexLabel::edge(name[a], name[b]));
        edges.push((a, x));
        edges.push((b, x));
        incident[a].push(x);
        incident[b].push(x);
    }
    for list in &incident {
        for (i, &x) in list.iter().enumerate() {
            for &y in &list[i + 1..] {
                edges.push((x, y));
            }
        }
    }
    Graph::new(labels, edges)
}

/// `M(C_{2n})`: originals `v0 .. v{2n-1}`, with `u_i` inserted into `v_i v_{i+1 mod 2n}`.
pub fn middle_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter("middle cycle needs n >= 2".into()));
    }
    middle_graph(&cycle(2 * n)?)
}

/// Label of `u_i` in `M(C_{2n})`.
pub fn middle_cycle_u(n: usize, i: usize) -> VertexLabel {
    VertexLabel::edge(i % (2 * n), (i + 1) % (2 * n))
}

/// `M(P_n) - {v1, vn}`: spine `u_1 .. u_{n-1}` with `v_2 .. v_{n-1}` hanging off
/// consecutive spine pairs.
pub fn middle_path_trimmed(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("trimmed middle path needs n >= 3".into()));
    }
    delete_vertices(
        &middle_graph(&path(n)?)?,
        &[VertexLabel::Original(1), VertexLabel::Original(n)],
    )
}

/// Induced subgraph after removing `labels`. A deletion that disconnects the graph
/// is an error, since pebbling numbers are only defined for connected graphs.
pub fn delete_vertices(g: &Graph, labels: &[VertexLabel]) -> Result<Graph, GraphError> {
    let mut drop = HashSet::new();
    for l in labels {
        drop.insert(g.id_or_err(l)?);
    }
    let keep: Vec<_> = (0..g.vertex_count()).filter(|v| !drop.contains(v)).collect();
    g.induced(&keep)
}

/// Cartesian product; vertex `(a, b)` gets id `a * |V(h)| + b`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let nh = h.vertex_count();
    let mut labels = Vec::with_capacity(g.vertex_count() * nh);
    for a in g.labels() {
        for b in h.labels() {
            labels.push(VertexLabel::pair(a.clone(), b.clone()));
        }
    }
    let mut edges = Vec::with_capacity(g.vertex_count() * h.edge_count() + nh * g.edge_count());
    for a in 0..g.vertex_count() {
        for (b, c) in h.edges() {
            edges.push((a * nh + b, a * nh + c));
        }
    }
    for (a, c) in g.edges() {
        for b in 0..nh {
            edges.push((a * nh + b, c * nh + b));
        }
    }
    Graph::new(labels, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Vertices of the fiber through `anchor`: with `Side::Left` these are all
/// `(anchor, *)`, a copy of the right factor.
pub fn fiber_vertices(p: &Graph, side: Side, anchor: &VertexLabel) -> Result<Vec<VertexId>, GraphError> {
    let mut out = Vec::new();
    for (v, l) in p.labels().iter().enumerate() {
        let (a, b) = l
            .as_pair()
            .ok_or_else(|| GraphError::NotAProduct(format!("vertex {l} is not a pair")))?;
        let component = match side {
            Side::Left => a,
            Side::Right => b,
        };
        if component == anchor {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(GraphError::UnknownLabel(anchor.to_string()));
    }
    Ok(out)
}

pub fn fiber(p: &Graph, side: Side, anchor: &VertexLabel) -> Result<Graph, GraphError> {
    p.induced(&fiber_vertices(p, side, anchor)?)
}
