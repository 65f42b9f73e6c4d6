//! `M(P_n) - {v_1, v_n}` with `2^(n-2) + n - 2` pebbles: rungs donate pairs to
//! the spine, then the spine is collected as a path.

use crate::engine::Distribution;
use crate::graph::{Graph, VertexId};

use super::layout::{MiddlePathLayout, PathRole};
use super::path::collect;
use super::{CaseTag, Exec, StrategyError, StrategyReport};

/// Pebbling number of the trimmed middle path of order `n`, for `n < 130`.
pub(crate) fn trimmed_path_number(n: usize) -> u128 {
    (1u128 << (n - 2)) + n as u128 - 2
}

/// Each rung `v_m` (except `skip`) sends half its pebbles to `u_m` when
/// `m <= landing`, else to `u_{m-1}`.
fn donate(exec: &mut Exec, layout: &MiddlePathLayout, landing: usize, skip: Option<usize>) {
    for m in 2..layout.n {
        if Some(m) == skip {
            continue;
        }
        let from = layout.v(m);
        let to = if m <= landing { layout.u(m) } else { layout.u(m - 1) };
        let k = exec.counts[from] / 2;
        exec.send(from, to, k);
    }
}

/// Puts one pebble on the vertex with role `role`, touching only layout
/// vertices. `exec` is left unchanged on failure.
pub(crate) fn collect_one(exec: &mut Exec, layout: &MiddlePathLayout, role: PathRole) -> Option<CaseTag> {
    let target = match role {
        PathRole::Spine(k) => layout.u(k),
        PathRole::Rung(k) => layout.v(k),
    };
    if exec.counts[target] >= 1 {
        return Some(CaseTag::AlreadyOnTarget);
    }
    match role {
        PathRole::Spine(k) => {
            let mut scratch = exec.clone();
            donate(&mut scratch, layout, k, None);
            collect(&mut scratch, &layout.spine, k, 1)?;
            *exec = scratch;
            Some(CaseTag::MiddlePathSpineTarget)
        }
        PathRole::Rung(k) => {
            // the written argument lands on u_{k-1}; at small n only u_k works
            let n = layout.n;
            let order = if 2 * k > n { [k - 1, k] } else { [k, k - 1] };
            for landing in order {
                let mut scratch = exec.clone();
                donate(&mut scratch, layout, landing, Some(k));
                if collect(&mut scratch, &layout.spine, landing, 2).is_some() {
                    scratch.send(layout.u(landing), target, 1);
                    *exec = scratch;
                    return Some(CaseTag::MiddlePathRungTarget);
                }
            }
            None
        }
    }
}

/// Runs the strategy on an explicit layout inside `g`.
pub fn run_middle_path(
    g: &Graph,
    layout: &MiddlePathLayout,
    d: &Distribution,
    target: VertexId,
) -> Result<StrategyReport, StrategyError> {
    layout.validate(g)?;
    let role = layout
        .role_of(target)
        .ok_or_else(|| StrategyError::UnsupportedTarget(format!("{} is not on the layout", g.label(target))))?;
    let have = d.sum_over(&layout.vertices()) as u128;
    let need = trimmed_path_number(layout.n);
    if have < need {
        return Err(StrategyError::PreconditionNotMet(format!(
            "{have} pebbles on the trimmed middle path of order {}, need 2^{} + {} = {need}",
            layout.n,
            layout.n - 2,
            layout.n - 2
        )));
    }
    let mut exec = Exec::new(d.counts().to_vec());
    let tag = collect_one(&mut exec, layout, role);
    let mut report = StrategyReport::from_moves(
        g,
        d,
        target,
        1,
        exec.moves,
        tag.unwrap_or(match role {
            PathRole::Spine(_) => CaseTag::MiddlePathSpineTarget,
            PathRole::Rung(_) => CaseTag::MiddlePathRungTarget,
        }),
    )?;
    if tag.is_none() {
        report.note("spine collection fell short of its threshold");
    }
    Ok(report)
}

/// The strategy on the graph built by `middle_path_trimmed(n)`.
pub fn middle_path_strategy(
    g: &Graph,
    n: usize,
    d: &Distribution,
    target: VertexId,
) -> Result<StrategyReport, StrategyError> {
    let layout = MiddlePathLayout::standard(g, n)?;
    run_middle_path(g, &layout, d, target)
}

/// One pebble on each of `v_2 .. v_{n-1}` and `2^(n-2) - 1` on `u_{n-1}`;
/// target `u_1`. Size `2^(n-2) + n - 3`, one short of the pebbling number.
pub fn cor24_witness(g: &Graph, n: usize) -> Result<(Distribution, VertexId), StrategyError> {
    let layout = MiddlePathLayout::standard(g, n)?;
    if n > 33 {
        return Err(StrategyError::Structure(format!("n = {n} overflows pebble counts")));
    }
    let mut d = Distribution::empty(g.vertex_count());
    for m in 2..n {
        d.set(layout.v(m), 1);
    }
    d.add(layout.u(n - 1), (1u32 << (n - 2)) - 1);
    Ok((d, layout.u(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{enumerate_distributions, is_solvable};
    use crate::graph::middle_path_trimmed;

    fn dist(g: &Graph, pairs: &[(&str, u32)]) -> Distribution {
        let mut d = Distribution::empty(g.vertex_count());
        for &(l, c) in pairs {
            d.set(g.resolve(l).unwrap(), c);
        }
        d
    }

    #[test]
    fn spine_examples() {
        let g = middle_path_trimmed(4).unwrap();
        let d = dist(&g, &[("u3", 4), ("v2", 1), ("v3", 1)]);
        let r = middle_path_strategy(&g, 4, &d, g.resolve("u1").unwrap()).unwrap();
        assert!(r.succeeded);
        assert_eq!(r.sequence.len(), 3);

        let g = middle_path_trimmed(3).unwrap();
        let d = dist(&g, &[("u2", 2), ("v2", 1)]);
        let r = middle_path_strategy(&g, 3, &d, g.resolve("u1").unwrap()).unwrap();
        assert!(r.succeeded);
    }

    #[test]
    fn witnesses() {
        for (n, size) in [(3, 2), (4, 5), (5, 10)] {
            let g = middle_path_trimmed(n).unwrap();
            let (d, target) = cor24_witness(&g, n).unwrap();
            assert_eq!(d.total(), size);
            assert_eq!(target, g.resolve("u1").unwrap());
            assert!(!is_solvable(&g, &d, target, 1).unwrap().solvable);
        }
    }

    #[test]
    fn precondition() {
        let g = middle_path_trimmed(4).unwrap();
        let d = dist(&g, &[("u3", 5)]);
        assert!(matches!(
            middle_path_strategy(&g, 4, &d, 0),
            Err(StrategyError::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn exhaustive_small_orders() {
        for n in 3..=5 {
            let g = middle_path_trimmed(n).unwrap();
            let k = trimmed_path_number(n) as u64;
            for target in 0..g.vertex_count() {
                for d in enumerate_distributions(&g, k) {
                    let r = middle_path_strategy(&g, n, &d, target).unwrap();
                    assert!(r.succeeded, "n={n} target={} d={:?}", g.label(target), d.counts());
                }
            }
        }
    }
}
