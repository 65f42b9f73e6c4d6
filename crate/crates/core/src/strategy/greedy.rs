//! Cheap sufficient checks: pebbles only ever step along shortest paths toward
//! the target. A failure here says nothing about solvability.

use crate::engine::{Distribution, Move, TargetView};
use crate::graph::{Graph, VertexId};

use super::{CaseTag, StrategyError, StrategyReport};

/// Pushes every pair from `start` one hop inward, then onward from each hop,
/// until the target is reached or a vertex on the way holds fewer than two.
pub(crate) fn push_toward(g: &Graph, view: &TargetView, counts: &mut [u32], start: VertexId, moves: &mut Vec<Move>) {
    let mut cur = start;
    while cur != view.target && counts[cur] >= 2 {
        let next = best_hop(view, counts, cur);
        debug_assert!(g.adjacent(cur, next));
        let k = counts[cur] / 2;
        counts[cur] -= 2 * k;
        counts[next] += k;
        moves.extend(std::iter::repeat_n(Move::new(cur, next), k as usize));
        cur = next;
    }
}

/// Inward neighbor to send to: one with an odd count pairs up the new arrival,
/// otherwise the richest.
fn best_hop(view: &TargetView, counts: &[u32], v: VertexId) -> VertexId {
    let toward = &view.toward[v];
    toward
        .iter()
        .copied()
        .max_by_key(|&w| (counts[w] % 2 == 1, counts[w], std::cmp::Reverse(w)))
        .expect("every non-target vertex of a connected graph has an inward neighbor")
}

fn richest_first(g: &Graph, view: &TargetView, counts: &mut [u32], t: u32, moves: &mut Vec<Move>) -> bool {
    while counts[view.target] < t {
        let pick = (0..counts.len())
            .filter(|&v| v != view.target && counts[v] >= 2)
            .max_by_key(|&v| (counts[v], std::cmp::Reverse(view.dist[v]), std::cmp::Reverse(v)));
        match pick {
            Some(v) => push_toward(g, view, counts, v, moves),
            None => return false,
        }
    }
    true
}

fn layered(view: &TargetView, counts: &mut [u32], t: u32, moves: &mut Vec<Move>) -> bool {
    let mut order: Vec<VertexId> = (0..counts.len()).filter(|&v| v != view.target).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(view.dist[v]), v));
    for v in order {
        if counts[v] >= 2 {
            let next = best_hop(view, counts, v);
            let k = counts[v] / 2;
            counts[v] -= 2 * k;
            counts[next] += k;
            moves.extend(std::iter::repeat_n(Move::new(v, next), k as usize));
        }
    }
    counts[view.target] >= t
}

/// Tries richest-first path pushes, then a layer-by-layer inward sweep.
pub fn greedy_moves(g: &Graph, view: &TargetView, counts: &[u32], t: u32) -> Option<Vec<Move>> {
    let mut work = counts.to_vec();
    let mut moves = Vec::new();
    if richest_first(g, view, &mut work, t, &mut moves) {
        return Some(moves);
    }
    work.copy_from_slice(counts);
    moves.clear();
    layered(view, &mut work, t, &mut moves).then_some(moves)
}

/// Greedy collection as a strategy report. `succeeded: false` is inconclusive.
pub fn greedy_solver(g: &Graph, d: &Distribution, target: VertexId, t: u32) -> Result<StrategyReport, StrategyError> {
    if target >= g.vertex_count() {
        return Err(StrategyError::UnsupportedTarget(format!("vertex {target}")));
    }
    let view = TargetView::new(g, target);
    let moves = greedy_moves(g, &view, d.counts(), t).unwrap_or_default();
    let mut report = StrategyReport::from_moves(g, d, target, t, moves, CaseTag::Greedy)?;
    if !report.succeeded {
        report.sequence.moves.clear();
        report.delivered = d.get(target);
        report.note("greedy collection fell short; this is not a proof of unsolvability");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::is_solvable;
    use crate::graph::{cycle, path};

    #[test]
    fn path_examples() {
        let g = path(3).unwrap();
        let r = greedy_solver(&g, &Distribution::from_counts(vec![4, 0, 0]), 2, 1).unwrap();
        assert!(r.succeeded);
        assert_eq!(r.sequence.len(), 3);
        let d = Distribution::from_counts(vec![3, 0, 0]);
        let r = greedy_solver(&g, &d, 2, 1).unwrap();
        assert!(!r.succeeded);
        assert!(!is_solvable(&g, &d, 2, 1).unwrap().solvable);
    }

    #[test]
    fn stuck_on_single_pebbles() {
        let g = cycle(6).unwrap();
        let d = Distribution::from_counts(vec![0, 1, 1, 1, 1, 1]);
        let r = greedy_solver(&g, &d, 0, 1).unwrap();
        assert!(!r.succeeded);
        assert!(r.sequence.is_empty());
    }

    #[test]
    fn odd_neighbor_preferred() {
        // v4 on C6 reaches v0 via v5 or v3; v5's odd pebble completes a pair
        let g = cycle(6).unwrap();
        let d = Distribution::from_counts(vec![0, 0, 0, 0, 2, 1]);
        let r = greedy_solver(&g, &d, 0, 1).unwrap();
        assert!(r.succeeded);
    }
}
