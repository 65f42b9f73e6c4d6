use std::fmt;
use std::str::FromStr;

use super::GraphError;

/// Structured name of a vertex.
///
/// `Original(i)` is a vertex of the base graph (`v{i}`), `EdgeVertex(i, j)` is the
/// vertex inserted into the edge `v_i v_j` by the middle-graph construction
/// (`u({i},{j})`), and `Pair(a, b)` is a vertex of a Cartesian product (`({a}|{b})`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Original(usize),
    EdgeVertex(usize, usize),
    Pair(Box<VertexLabel>, Box<VertexLabel>),
}

impl VertexLabel {
    /// Edge vertex with its endpoints stored in sorted order.
    pub fn edge(a: usize, b: usize) -> Self {
        if a <= b {
            VertexLabel::EdgeVertex(a, b)
        } else {
            VertexLabel::EdgeVertex(b, a)
        }
    }

    pub fn pair(left: VertexLabel, right: VertexLabel) -> Self {
        VertexLabel::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_pair(&self) -> Option<(&VertexLabel, &VertexLabel)> {
        match self {
            VertexLabel::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_edge_vertex(&self) -> bool {
        matches!(self, VertexLabel::EdgeVertex(..))
    }

    /// Number of nested product levels.
    pub fn depth(&self) -> usize {
        match self {
            VertexLabel::Pair(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Original(i) => write!(f, "v{i}"),
            VertexLabel::EdgeVertex(i, j) => write!(f, "u({i},{j})"),
            VertexLabel::Pair(a, b) => write!(f, "({a}|{b})"),
        }
    }
}

/// A label as typed by a user: canonical labels plus the `u{i}` shorthand, which
/// names the vertex inserted into the edge leaving `v_i` along a path or cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelSpec {
    Original(usize),
    Edge(usize, usize),
    EdgeShort(usize),
    Pair(Box<LabelSpec>, Box<LabelSpec>),
}

impl LabelSpec {
    /// Canonical labels this spec may denote, most specific first.
    pub fn candidates(&self) -> Vec<VertexLabel> {
        match self {
            LabelSpec::Original(i) => vec![VertexLabel::Original(*i)],
            LabelSpec::Edge(i, j) => vec![VertexLabel::edge(*i, *j)],
            LabelSpec::EdgeShort(i) => {
                let mut out = vec![VertexLabel::edge(*i, i + 1)];
                if *i > 0 {
                    // closing edge of a cycle: u_{N-1} sits on v_{N-1} v_0
                    out.push(VertexLabel::edge(0, *i));
                }
                out
            }
            LabelSpec::Pair(a, b) => {
                let (left, right) = (a.candidates(), b.candidates());
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        out.push(VertexLabel::pair(l.clone(), r.clone()));
                    }
                }
                out
            }
        }
    }

    /// The canonical label if the spec contains no shorthand.
    pub fn exact(&self) -> Option<VertexLabel> {
        match self {
            LabelSpec::Original(i) => Some(VertexLabel::Original(*i)),
            LabelSpec::Edge(i, j) => Some(VertexLabel::edge(*i, *j)),
            LabelSpec::EdgeShort(_) => None,
            LabelSpec::Pair(a, b) => Some(VertexLabel::pair(a.exact()?, b.exact()?)),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self) -> GraphError {
        GraphError::BadLabel(self.src.to_string())
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), GraphError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err())
    }

    fn spec(&mut self) -> Result<LabelSpec, GraphError> {
        match self.peek() {
            Some(b'v') => {
                self.pos += 1;
                Ok(LabelSpec::Original(self.number()?))
            }
            Some(b'u') => {
                self.pos += 1;
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let i = self.number()?;
                    self.eat(b',')?;
                    let j = self.number()?;
                    self.eat(b')')?;
                    if i == j {
                        return Err(self.err());
                    }
                    Ok(LabelSpec::Edge(i, j))
                } else {
                    Ok(LabelSpec::EdgeShort(self.number()?))
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.spec()?;
                self.eat(b'|')?;
                let b = self.spec()?;
                self.eat(b')')?;
                Ok(LabelSpec::Pair(Box::new(a), Box::new(b)))
            }
            _ => Err(self.err()),
        }
    }
}

impl FromStr for LabelSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let mut p = Parser { src: trimmed, pos: 0 };
        let spec = p.spec()?;
        if p.pos != trimmed.len() {
            return Err(p.err());
        }
        Ok(spec)
    }
}

impl FromStr for VertexLabel {
    type Err = GraphError;

    /// Parses canonical label strings only; `u3`-style shorthand needs a graph to
    /// resolve against (see [`super::Graph::resolve`]).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<LabelSpec>()?
            .exact()
            .ok_or_else(|| GraphError::BadLabel(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_vertex_is_sorted() {
        assert_eq!(VertexLabel::edge(3, 1), VertexLabel::EdgeVertex(1, 3));
    }

    #[test]
    fn display_and_parse_agree() {
        let l = VertexLabel::pair(
            VertexLabel::edge(0, 1),
            VertexLabel::pair(VertexLabel::Original(2), VertexLabel::edge(4, 3)),
        );
        let s = l.to_string();
        assert_eq!(s, "(u(0,1)|(v2|u(3,4)))");
        assert_eq!(s.parse::<VertexLabel>().unwrap(), l);
        assert_eq!(l.depth(), 2);
    }

    #[test]
    fn shorthand_needs_context() {
        assert!("u3".parse::<VertexLabel>().is_err());
        let spec: LabelSpec = "(u0|v1)".parse().unwrap();
        assert_eq!(
            spec.candidates()[0],
            VertexLabel::pair(VertexLabel::edge(0, 1), VertexLabel::Original(1))
        );
        let spec: LabelSpec = "u3".parse().unwrap();
        assert_eq!(
            spec.candidates(),
            vec![VertexLabel::edge(3, 4), VertexLabel::edge(0, 3)]
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "w1", "u(1,1)", "v", "(v1|v2", "v1x", "u(1;2)"] {
            assert!(bad.parse::<LabelSpec>().is_err(), "{bad}");
        }
    }
}
