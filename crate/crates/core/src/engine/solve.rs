use std::cmp::Reverse;
use std::time::Instant;

use rustc_hash::FxHashSet;
use serde::Serialize;
use smallvec::SmallVec;

use super::{Distribution, EngineError, Move, MoveSequence, TargetView};
use crate::graph::{Graph, VertexId};
use crate::strategy::greedy;

/// Caps on a single solvability decision.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 5_000_000,
            deadline: None,
        }
    }
}

/// Which stage of [`Solver::solve`] settled the question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    AlreadyOnTarget,
    DirectDoubling,
    Greedy,
    PotentialCutoff,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub solvable: bool,
    pub witness: Option<MoveSequence>,
    pub nodes_explored: u64,
    pub decided_by: Decision,
}

/// Transposition-table key: the count vector in vertex order, LEB128 packed
/// behind a length prefix.
type Key = SmallVec<[u8; 40]>;

fn push_varint(out: &mut Key, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub(crate) fn encode(counts: &[u32]) -> Key {
    let mut key = Key::new();
    push_varint(&mut key, counts.len() as u64);
    for &c in counts {
        push_varint(&mut key, c as u64);
    }
    key
}

/// Decides t-solvability for one target; reusable across many distributions.
///
/// Stages: pebbles already on the target; a vertex holding `need * 2^dist`;
/// the greedy collectors; the potential cutoff; then depth-first search over
/// distributions with a per-call transposition table of failed states.
pub struct Solver<'g> {
    graph: &'g Graph,
    view: TargetView,
    t: u32,
    limits: Limits,
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g Graph, target: VertexId, t: u32, limits: Limits) -> Result<Self, EngineError> {
        if target >= graph.vertex_count() {
            return Err(EngineError::UnknownVertex(target));
        }
        if t == 0 {
            return Err(EngineError::InvalidT);
        }
        Ok(Solver {
            graph,
            view: TargetView::new(graph, target),
            t,
            limits,
        })
    }

    pub fn target(&self) -> VertexId {
        self.view.target
    }

    pub fn view(&self) -> &TargetView {
        &self.view
    }

    pub fn solve(&self, d: &Distribution) -> Result<SolveOutcome, EngineError> {
        if d.len() != self.graph.vertex_count() {
            return Err(EngineError::SizeMismatch {
                expected: self.graph.vertex_count(),
                got: d.len(),
            });
        }
        self.solve_counts(d.counts())
    }

    pub fn solve_counts(&self, counts: &[u32]) -> Result<SolveOutcome, EngineError> {
        let target = self.view.target;
        let done = |solvable, witness: Option<Vec<Move>>, nodes, decided_by| SolveOutcome {
            solvable,
            witness: witness.map(MoveSequence::new),
            nodes_explored: nodes,
            decided_by,
        };
        if counts[target] >= self.t {
            return Ok(done(true, Some(Vec::new()), 1, Decision::AlreadyOnTarget));
        }
        let mut work = counts.to_vec();
        if let Some(moves) = direct_doubling(self.graph, &self.view, &mut work, self.t) {
            return Ok(done(true, Some(moves), 1, Decision::DirectDoubling));
        }
        if let Some(moves) = greedy::greedy_moves(self.graph, &self.view, counts, self.t) {
            return Ok(done(true, Some(moves), 1, Decision::Greedy));
        }
        let pot = self.view.scaled_potential(counts);
        let goal = self.view.scaled_goal(self.t);
        if let (Some(p), Some(g)) = (pot, goal) {
            if p < g {
                return Ok(done(false, None, 1, Decision::PotentialCutoff));
            }
        }
        let mut search = Search {
            graph: self.graph,
            view: &self.view,
            t: self.t,
            goal,
            limits: self.limits,
            failed: FxHashSet::default(),
            path: Vec::new(),
            nodes: 0,
        };
        let mut work = counts.to_vec();
        let found = search.dfs(&mut work, pot)?;
        let witness = found.then(|| std::mem::take(&mut search.path));
        Ok(done(found, witness, search.nodes, Decision::Search))
    }
}

/// One-shot decision with default limits.
pub fn is_solvable(g: &Graph, d: &Distribution, target: VertexId, t: u32) -> Result<SolveOutcome, EngineError> {
    is_solvable_with(g, d, target, t, Limits::default())
}

pub fn is_solvable_with(
    g: &Graph,
    d: &Distribution,
    target: VertexId,
    t: u32,
    limits: Limits,
) -> Result<SolveOutcome, EngineError> {
    Solver::new(g, target, t, limits)?.solve(d)
}

/// If some vertex alone holds `need * 2^dist`, pushes its pebbles straight in.
fn direct_doubling(g: &Graph, view: &TargetView, counts: &mut [u32], t: u32) -> Option<Vec<Move>> {
    let need = t.saturating_sub(counts[view.target]) as u128;
    let v = (0..counts.len())
        .find(|&v| v != view.target && view.dist[v] < 96 && counts[v] as u128 >= need << view.dist[v])?;
    // exactly need * 2^(D-i-1) moves out of the i-th vertex of a shortest path
    let mut moves = Vec::new();
    let mut cur = v;
    while cur != view.target {
        let next = *g.neighbors(cur).iter().find(|&&x| view.dist[x] + 1 == view.dist[cur])?;
        let sends = (need << (view.dist[cur] - 1)) as u32;
        counts[cur] -= 2 * sends;
        counts[next] += sends;
        moves.extend(std::iter::repeat_n(Move::new(cur, next), sends as usize));
        cur = next;
    }
    debug_assert!(counts[view.target] >= t);
    Some(moves)
}

struct Search<'a> {
    graph: &'a Graph,
    view: &'a TargetView,
    t: u32,
    goal: Option<u128>,
    limits: Limits,
    failed: FxHashSet<Key>,
    path: Vec<Move>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, counts: &mut Vec<u32>, pot: Option<u128>) -> Result<bool, EngineError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(EngineError::BudgetExceeded(format!(
                "solvability search passed {} nodes",
                self.limits.max_nodes
            )));
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.limits.deadline {
                if Instant::now() > deadline {
                    return Err(EngineError::BudgetExceeded("time limit reached".into()));
                }
            }
        }
        let target = self.view.target;
        if counts[target] >= self.t {
            return Ok(true);
        }
        let mark = self.path.len();
        let mut scratch = counts.clone();
        if let Some(moves) = direct_doubling(self.graph, self.view, &mut scratch, self.t) {
            self.path.extend(moves);
            return Ok(true);
        }
        let key = encode(counts);
        if self.failed.contains(&key) {
            return Ok(false);
        }

        let mut options: SmallVec<[(VertexId, VertexId, Option<u128>); 32]> = SmallVec::new();
        for (v, &c) in counts.iter().enumerate() {
            // moves off the target never help: an acyclic solution exists
            if v == target || c < 2 {
                continue;
            }
            for &w in self.graph.neighbors(v) {
                let next = match (pot, self.goal) {
                    (Some(p), Some(goal)) => {
                        let q = p - 2 * self.view.scale[v] + self.view.scale[w];
                        if q < goal {
                            continue;
                        }
                        Some(q)
                    }
                    _ => None,
                };
                options.push((v, w, next));
            }
        }
        let dist = &self.view.dist;
        options.sort_by_key(|&(v, w, _)| (Reverse(counts[v]), Reverse(dist[v] as i64 - dist[w] as i64)));

        for (v, w, next) in options {
            counts[v] -= 2;
            counts[w] += 1;
            self.path.push(Move::new(v, w));
            let found = self.dfs(counts, next);
            counts[v] += 2;
            counts[w] -= 1;
            if found? {
                return Ok(true);
            }
            self.path.truncate(mark);
        }
        self.failed.insert(key);
        Ok(false)
    }
}
