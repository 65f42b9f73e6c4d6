//! t pebbles to any vertex of `M(C_{2n})` from `t 2^(n+1) + 2n - 2`.
//!
//! The target is rotated to `u_0` or `v_0`. For `u_0`, each round hands
//! `2^n + n` pebbles of the heavier half to the trimmed-middle-path strategy.
//! For `v_0`, everything is collected down one of the two spines
//! `v_0 u_0 .. u_{n-1} v_n` or `v_0 u_{2n-1} .. u_n v_n`.

use crate::engine::{Distribution, Limits, Move, Solver};
use crate::graph::{Graph, VertexId};

use super::layout::{CycleRole, MiddleCycleLayout, MiddlePathLayout, PathRole};
use super::middle_path::{collect_one, trimmed_path_number};
use super::path::collect;
use super::{CaseTag, Exec, StrategyError, StrategyReport};

#[derive(Clone, Copy, Debug, Default)]
pub struct CycleOptions {
    /// Budget for the exact search that closes a base round no half can.
    pub search_limits: Limits,
}

/// `t 2^(n+1) + 2n - 2`, or `None` on overflow.
pub(crate) fn cycle_bound(n: usize, t: u32) -> Option<u128> {
    (t as u128)
        .checked_mul(1u128.checked_shl(n as u32 + 1)?)?
        .checked_add(2 * n as u128 - 2)
}

struct Outcome {
    tags: Vec<CaseTag>,
    notes: Vec<String>,
}

/// The strategy on the graph built by `middle_cycle(n)`.
pub fn middle_cycle_t_strategy(
    g: &Graph,
    n: usize,
    d: &Distribution,
    target: VertexId,
    t: u32,
) -> Result<StrategyReport, StrategyError> {
    let layout = MiddleCycleLayout::standard(g, n)?;
    run_middle_cycle(g, &layout, d, target, t, &CycleOptions::default())
}

/// Runs the strategy on an explicit layout inside `g`; only layout vertices are used.
pub fn run_middle_cycle(
    g: &Graph,
    layout: &MiddleCycleLayout,
    d: &Distribution,
    target: VertexId,
    t: u32,
    opts: &CycleOptions,
) -> Result<StrategyReport, StrategyError> {
    if t == 0 {
        return Err(StrategyError::PreconditionNotMet("t must be at least 1".into()));
    }
    layout.validate(g)?;
    let n = layout.n;
    let role = layout
        .role_of(target)
        .ok_or_else(|| StrategyError::UnsupportedTarget(format!("{} is not on the middle cycle", g.label(target))))?;
    let have = d.sum_over(&layout.vertices()) as u128;
    let bound = cycle_bound(n, t).ok_or_else(|| StrategyError::Structure("bound overflows".into()))?;
    if have < bound {
        return Err(StrategyError::PreconditionNotMet(format!(
            "{have} pebbles on M(C_{}), need t 2^{} + {} = {bound}",
            2 * n,
            n + 1,
            2 * n - 2
        )));
    }
    if n > 28 {
        return Err(StrategyError::Structure(format!(
            "n = {n} is too large for pebble counts"
        )));
    }
    let (rot, is_u) = match role {
        CycleRole::U(i) => (layout.rotated(i), true),
        CycleRole::V(i) => (layout.rotated(i), false),
    };
    let mut exec = Exec::new(d.counts().to_vec());
    let out = if is_u {
        u_target(g, &rot, &mut exec, t, opts)?
    } else {
        v_target(&rot, &mut exec, t)
    };
    let main = out
        .tags
        .iter()
        .copied()
        .find(|&c| c != CaseTag::AlreadyOnTarget)
        .unwrap_or(CaseTag::AlreadyOnTarget);
    let mut report = StrategyReport::from_moves(g, d, target, t, exec.moves, main)?;
    report.tags = out.tags;
    report.notes = out.notes;
    Ok(report)
}

fn u_target(
    g: &Graph,
    l: &MiddleCycleLayout,
    exec: &mut Exec,
    t: u32,
    opts: &CycleOptions,
) -> Result<Outcome, StrategyError> {
    let n = l.n;
    let u0 = l.u[0];
    let quota = trimmed_path_number(n + 2) as u64;
    let halves = [("A", l.half_a()), ("B", l.half_b())];
    let mut out = Outcome {
        tags: Vec::new(),
        notes: Vec::new(),
    };
    let mut round = 0;
    while exec.counts[u0] < t {
        round += 1;
        let weight = |h: &MiddlePathLayout| -> u64 {
            h.vertices()
                .iter()
                .filter(|&&x| x != u0)
                .map(|&x| exec.counts[x] as u64)
                .sum()
        };
        let (wa, wb) = (weight(&halves[0].1), weight(&halves[1].1));
        let mut order = [0usize, 1];
        if wb > wa {
            order.swap(0, 1);
        }
        let (name, heavy) = (&halves[order[0]].0, &halves[order[0]].1);
        let heavy_weight = wa.max(wb);

        if heavy_weight >= quota {
            let sub = take(exec, heavy, u0, quota);
            let mut scratch = Exec::new(sub);
            if collect_one(&mut scratch, heavy, PathRole::Spine(1)).is_some() {
                exec.replay(&scratch.moves);
                out.tags.push(CaseTag::CycleHalfPeel);
                out.notes.push(format!(
                    "round {round}: half {name} holds {heavy_weight} >= 2^{n} + {n}; one pebble to u_0"
                ));
                continue;
            }
        }
        // base round: the halves are too light for the quota
        let mut done = false;
        for &h in &order {
            let (name, half) = (&halves[h].0, &halves[h].1);
            let sub = take(exec, half, u0, u64::MAX);
            let mut scratch = Exec::new(sub);
            if collect_one(&mut scratch, half, PathRole::Spine(1)).is_some() {
                exec.replay(&scratch.moves);
                out.tags.push(CaseTag::CycleBaseHalf);
                out.notes.push(format!("round {round}: half {name} alone reaches u_0"));
                done = true;
                break;
            }
        }
        if done {
            continue;
        }
        match search_within(g, &l.vertices(), &exec.counts, u0, t, opts.search_limits) {
            Ok(Some(moves)) => {
                exec.replay(&moves);
                out.tags.push(CaseTag::CycleBaseSearch);
                out.notes
                    .push(format!("round {round}: closed by exact search ({} moves)", moves.len()));
            }
            Ok(None) => {
                out.notes
                    .push(format!("round {round}: exact search finds no way to reach {t} on u_0"));
                break;
            }
            Err(e) => {
                out.notes.push(format!("round {round}: exact search inconclusive: {e}"));
                break;
            }
        }
    }
    if out.tags.is_empty() {
        out.tags.push(CaseTag::AlreadyOnTarget);
    }
    Ok(out)
}

/// Up to `limit` pebbles of `half`, excluding `skip`, nearest the first spine vertex first.
fn take(exec: &Exec, half: &MiddlePathLayout, skip: VertexId, limit: u64) -> Vec<u32> {
    let mut sub = vec![0u32; exec.counts.len()];
    let mut left = limit;
    let order = (1..half.n).flat_map(|k| {
        let rung = (k >= 2).then(|| half.v(k));
        std::iter::once(half.u(k)).chain(rung)
    });
    for x in order {
        if x == skip || left == 0 {
            continue;
        }
        let c = (exec.counts[x] as u64).min(left);
        sub[x] = c as u32;
        left -= c;
    }
    sub
}

/// Exact search restricted to the subgraph induced by `keep`.
fn search_within(
    g: &Graph,
    keep: &[VertexId],
    counts: &[u32],
    target: VertexId,
    t: u32,
    limits: Limits,
) -> Result<Option<Vec<Move>>, StrategyError> {
    if keep.len() == g.vertex_count() {
        let out = Solver::new(g, target, t, limits)?.solve_counts(counts)?;
        return Ok(out.witness.map(|w| w.moves));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let sub = g.induced(&keep)?;
    let local: Vec<u32> = keep.iter().map(|&x| counts[x]).collect();
    let local_target = keep.binary_search(&target).expect("target is a layout vertex");
    let out = Solver::new(&sub, local_target, t, limits)?.solve_counts(&local)?;
    Ok(out
        .witness
        .map(|w| w.moves.iter().map(|m| Move::new(keep[m.from], keep[m.to])).collect()))
}

fn v_target(l: &MiddleCycleLayout, exec: &mut Exec, t: u32) -> Outcome {
    let (n, len) = (l.n, 2 * l.n);
    let (v0, vn) = (l.v[0], l.v[n]);
    let mut out = Outcome {
        tags: Vec::new(),
        notes: Vec::new(),
    };
    let have = exec.counts[v0];
    if have >= t {
        out.tags.push(CaseTag::AlreadyOnTarget);
        return out;
    }
    let r = (t - have) as u64;
    let full = r << (n + 1);
    // spines listed from v_n toward v_0
    let spine_a: Vec<VertexId> = std::iter::once(vn)
        .chain((0..n).rev().map(|i| l.u[i]))
        .chain(std::iter::once(v0))
        .collect();
    let spine_b: Vec<VertexId> = std::iter::once(vn)
        .chain((n..len).map(|i| l.u[i]))
        .chain(std::iter::once(v0))
        .collect();
    let k = n + 2;
    let pvn = exec.counts[vn] as u64;
    if pvn >= full {
        collect(exec, &spine_a, k, t);
        out.tags.push(CaseTag::CycleSpineDirect);
        out.notes.push(format!("p(v_{n}) = {pvn} >= {r} * 2^{}", n + 1));
        return out;
    }
    let h = full - pvn;
    let sum = |xs: &mut dyn Iterator<Item = VertexId>| xs.map(|x| exec.counts[x] as u64).sum::<u64>();
    let side_a = sum(&mut (0..n).map(|i| l.u[i]).chain((1..n).map(|i| l.v[i])));
    let side_b = sum(&mut (n..len).map(|i| l.u[i]).chain((n + 1..len).map(|i| l.v[i])));
    let use_a = side_a >= side_b;
    let (name, spine, q) = if use_a {
        ("A'", &spine_a, sum(&mut (0..n).map(|i| l.u[i])))
    } else {
        ("B'", &spine_b, sum(&mut (n..len).map(|i| l.u[i])))
    };
    out.notes.push(format!(
        "h = {h}; heavier side {name} ({} vs {}); q = {q}, ceil(h/2) = {}",
        side_a.max(side_b),
        side_a.min(side_b),
        h.div_ceil(2)
    ));
    let tag = if q >= h.div_ceil(2) {
        CaseTag::CycleSpineWeight
    } else {
        // each rung tops up its spine neighbor nearer v_0
        let rungs: Vec<(VertexId, VertexId)> = if use_a {
            (1..n).map(|j| (l.v[j], l.u[j - 1])).collect()
        } else {
            (n + 1..len).map(|j| (l.v[j], l.u[j])).collect()
        };
        for (from, to) in rungs {
            let c = exec.counts[from] / 2;
            exec.send(from, to, c);
        }
        CaseTag::CycleSpineTopUp
    };
    if collect(exec, spine, k, t).is_none() {
        out.notes.push("spine weight fell short".into());
    }
    out.tags.push(tag);
    out
}
