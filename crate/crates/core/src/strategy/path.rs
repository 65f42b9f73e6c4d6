//! Collecting pebbles along a path `v_1 .. v_n` onto `v_k`.
//!
//! Weights are normalised per side: `sum_{i<k} 2^(i-1) p(v_i) + sum_{j>k} 2^(n-j) p(v_j)`,
//! so the far end of each side has weight 1. Pushing every pair inward along a
//! side delivers exactly `floor(side weight / 2^(side length))` pebbles.

use crate::engine::Distribution;
use crate::graph::{Graph, VertexId};

use super::{CaseTag, Exec, StrategyError, StrategyReport};

/// A path inside an ambient graph, with a 1-based target index `k`.
#[derive(Clone, Debug)]
pub struct PathContext<'a> {
    pub path: Vec<VertexId>,
    pub distribution: &'a Distribution,
    pub target_index: usize,
}

impl PathContext<'_> {
    fn validate(&self, g: &Graph) -> Result<(), StrategyError> {
        let n = self.path.len();
        if n == 0 || self.target_index == 0 || self.target_index > n {
            return Err(StrategyError::Structure(format!(
                "target index {} outside 1..={n}",
                self.target_index
            )));
        }
        if n > 120 {
            return Err(StrategyError::Structure(
                "paths longer than 120 vertices are not supported".into(),
            ));
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &self.path {
            if v >= g.vertex_count() || std::mem::replace(&mut seen[v], true) {
                return Err(StrategyError::Structure(format!("vertex {v} repeated or out of range")));
            }
        }
        if let Some(w) = self.path.windows(2).find(|w| !g.adjacent(w[0], w[1])) {
            return Err(StrategyError::Structure(format!(
                "{} and {} are not adjacent",
                g.label(w[0]),
                g.label(w[1])
            )));
        }
        Ok(())
    }
}

fn side_weights(counts: &[u32], path: &[VertexId], k: usize) -> (u128, u128) {
    let n = path.len();
    let left = (1..k).fold(0u128, |acc, i| {
        acc.saturating_add((counts[path[i - 1]] as u128).saturating_mul(1u128 << (i - 1)))
    });
    let right = (k + 1..=n).fold(0u128, |acc, j| {
        acc.saturating_add((counts[path[j - 1]] as u128).saturating_mul(1u128 << (n - j)))
    });
    (left, right)
}

/// Two-sided weight of the path with respect to `v_k` (pebbles on `v_k` excluded).
pub fn path_weight(ctx: &PathContext) -> u128 {
    let (l, r) = side_weights(ctx.distribution.counts(), &ctx.path, ctx.target_index);
    l.saturating_add(r)
}

/// Weight that guarantees `t` pebbles on `v_k`:
/// `t 2^(k-1) + 2^(n-k) - 1` when `k >= (n+1)/2`, else `2^(k-1) + t 2^(n-k) - 1`.
/// At `k = n` this is the one-sided `t 2^(n-1)`.
pub fn path_threshold(n: usize, k: usize, t: u32) -> u128 {
    let t = t as u128;
    if 2 * k > n {
        (t << (k - 1)) + (1u128 << (n - k)) - 1
    } else {
        (1u128 << (k - 1)) + (t << (n - k)) - 1
    }
}

/// Pebbles a side can deliver to its inner end by pushing every pair inward.
/// `side` runs from the far end toward the target.
fn capacity(counts: &[u32], side: &[VertexId]) -> u64 {
    side.iter().fold(0u64, |carry, &v| (carry + counts[v] as u64) / 2)
}

/// Sends exactly `r` pebbles into `target` from `side` (far end first), using
/// as few pebbles as the path allows. Requires `r <= capacity`.
fn deliver(exec: &mut Exec, side: &[VertexId], target: VertexId, r: u64) {
    if r == 0 || side.is_empty() {
        return;
    }
    let len = side.len();
    let mut send = vec![0u64; len];
    send[len - 1] = r;
    for i in (1..len).rev() {
        send[i - 1] = (2 * send[i]).saturating_sub(exec.counts[side[i]] as u64);
    }
    debug_assert!(2 * send[0] <= exec.counts[side[0]] as u64);
    for i in 0..len {
        let next = if i + 1 < len { side[i + 1] } else { target };
        exec.send(side[i], next, send[i] as u32);
    }
}

/// Brings `exec.counts[v_k]` up to `t` if the two sides allow it, following the
/// two-case argument: the long side alone, or the short side's `s` plus `t - s`
/// from the long side. Leaves `exec` untouched and returns `None` on failure.
pub(crate) fn collect(exec: &mut Exec, path: &[VertexId], k: usize, t: u32) -> Option<CaseTag> {
    let n = path.len();
    let target = path[k - 1];
    let need = t.saturating_sub(exec.counts[target]) as u64;
    if need == 0 {
        return Some(CaseTag::AlreadyOnTarget);
    }
    let left: Vec<VertexId> = path[..k - 1].to_vec();
    let right: Vec<VertexId> = path[k..].iter().rev().copied().collect();
    let (long, short) = if 2 * k > n { (left, right) } else { (right, left) };
    let cap_long = capacity(&exec.counts, &long);
    if cap_long >= need {
        deliver(exec, &long, target, need);
        return Some(if short.is_empty() {
            CaseTag::PathSingleSided
        } else {
            CaseTag::PathLongSide
        });
    }
    let s = capacity(&exec.counts, &short).min(need);
    if cap_long + s < need {
        return None;
    }
    deliver(exec, &short, target, s);
    deliver(exec, &long, target, need - s);
    Some(CaseTag::PathShortSideAssist)
}

/// Moves at least `t` pebbles onto `v_k` when the two-sided weight meets
/// [`path_threshold`].
pub fn collect_on_path(g: &Graph, ctx: &PathContext, t: u32) -> Result<StrategyReport, StrategyError> {
    ctx.validate(g)?;
    let (n, k) = (ctx.path.len(), ctx.target_index);
    let weight = path_weight(ctx);
    let threshold = path_threshold(n, k, t);
    if weight < threshold {
        return Err(StrategyError::PreconditionNotMet(format!(
            "path weight {weight} is below the threshold {threshold} for t = {t}, k = {k}, n = {n}"
        )));
    }
    let mut exec = Exec::new(ctx.distribution.counts().to_vec());
    let tag = collect(&mut exec, &ctx.path, k, t).unwrap_or(CaseTag::PathLongSide);
    let target = ctx.path[k - 1];
    let mut report = StrategyReport::from_moves(g, ctx.distribution, target, t, exec.moves, tag)?;
    report.note(format!("weight {weight} >= threshold {threshold}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    fn ctx(d: &Distribution, k: usize) -> PathContext<'_> {
        PathContext {
            path: (0..d.len()).collect(),
            distribution: d,
            target_index: k,
        }
    }

    #[test]
    fn weight_examples() {
        let d = Distribution::from_counts(vec![4, 0, 0]);
        assert_eq!(path_weight(&ctx(&d, 3)), 4);
        let d = Distribution::from_counts(vec![1, 1, 0]);
        assert_eq!(path_weight(&ctx(&d, 3)), 3);
        let d = Distribution::from_counts(vec![4, 0, 0, 1]);
        assert_eq!(path_weight(&ctx(&d, 3)), 5);
    }

    #[test]
    fn thresholds() {
        assert_eq!(path_threshold(3, 3, 1), 4);
        assert_eq!(path_threshold(4, 3, 1), 5);
        assert_eq!(path_threshold(4, 1, 2), 16);
        assert_eq!(path_threshold(5, 2, 1), 2 + 8 - 1);
        // both forms coincide at t = 1
        for n in 1..10 {
            for k in 1..=n {
                let a = (1u128 << (k - 1)) + (1u128 << (n - k)) - 1;
                assert_eq!(path_threshold(n, k, 1), a);
            }
        }
    }

    #[test]
    fn collect_examples() {
        let g = path(3).unwrap();
        let d = Distribution::from_counts(vec![4, 0, 0]);
        let r = collect_on_path(&g, &ctx(&d, 3), 1).unwrap();
        assert!(r.succeeded);
        assert_eq!((r.delivered, r.sequence.len()), (1, 3));
        assert_eq!(r.case_tag, CaseTag::PathSingleSided);

        let d = Distribution::from_counts(vec![8, 0, 0]);
        let r = collect_on_path(&g, &ctx(&d, 3), 2).unwrap();
        assert_eq!(r.delivered, 2);

        let g4 = path(4).unwrap();
        let d = Distribution::from_counts(vec![4, 0, 0, 1]);
        let r = collect_on_path(&g4, &ctx(&d, 3), 1).unwrap();
        assert!(r.succeeded);
        assert_eq!(r.case_tag, CaseTag::PathLongSide);
        assert_eq!(r.sequence.moves.iter().filter(|m| m.from == 3).count(), 0);
    }

    #[test]
    fn short_side_assists() {
        let g = path(5).unwrap();
        // k = 4: long side v1..v3, short side v5
        let d = Distribution::from_counts(vec![14, 0, 0, 0, 3]);
        let r = collect_on_path(&g, &ctx(&d, 4), 2).unwrap();
        assert_eq!(r.case_tag, CaseTag::PathShortSideAssist);
        assert_eq!(r.delivered, 2);
    }

    #[test]
    fn below_threshold_is_a_precondition_error() {
        let g = path(3).unwrap();
        let d = Distribution::from_counts(vec![3, 0, 0]);
        assert!(matches!(
            collect_on_path(&g, &ctx(&d, 3), 1),
            Err(StrategyError::PreconditionNotMet(_))
        ));
        let bad = PathContext {
            path: vec![0, 2],
            distribution: &d,
            target_index: 2,
        };
        assert!(matches!(collect_on_path(&g, &bad, 1), Err(StrategyError::Structure(_))));
    }

    #[test]
    fn demand_driven_matches_capacity() {
        let counts = vec![5u32, 1, 0, 3, 0];
        let side: Vec<VertexId> = (0..5).collect();
        let cap = capacity(&counts, &side[..4]);
        for r in 0..=cap {
            let mut exec = Exec::new(counts.clone());
            deliver(&mut exec, &side[..4], 4, r);
            assert_eq!(exec.counts[4] as u64, r);
        }
    }
}
