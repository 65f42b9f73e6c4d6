//! Exact pebbling numbers by sweeping every distribution of each size.
//!
//! Levels start at the largest per-target lower bound and go up; a level is
//! passed when every distribution of that size is t-solvable for every target.
//! Passing level `k` implies passing `k + 1` (each larger distribution contains
//! a passing one), so the first passed level is the answer.
//!
//! A level is cut into chunks of consecutive colex ranks, checked in parallel;
//! the reported unsolvable distribution is always the lowest-ranked one, so
//! results do not depend on the thread count.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compositions::{composition_count, unrank, Compositions};
use super::{is_solvable, Distribution, EngineError, Limits, Solver};
use crate::graph::{Graph, VertexId};

/// Caps on a whole pebbling-number computation. Hitting one gives an
/// inconclusive report, never a number.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Total search nodes over all solvability calls.
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Node cap for each single solvability call.
    pub per_call_nodes: u64,
    /// Levels with more distributions than this are not attempted.
    pub max_level_size: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
            per_call_nodes: 5_000_000,
            max_level_size: 10_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub budget: Budget,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
    /// Distributions per chunk.
    pub chunk: u128,
    /// Resume from / save progress to this file.
    pub checkpoint: Option<PathBuf>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: Budget::default(),
            threads: 0,
            chunk: 4096,
            checkpoint: None,
        }
    }
}

/// An unsolvable distribution and the target it fails for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub distribution: Distribution,
    pub target: VertexId,
}

impl Witness {
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "target": g.label(self.target).to_string(),
            "size": self.distribution.total(),
            "distribution": self.distribution.to_json(g),
        })
    }
}

#[derive(Clone, Debug)]
pub struct LowerBound {
    pub value: u128,
    /// Unsolvable distributions of size `value - 1`, each confirmed by the solver.
    pub witnesses: Vec<Witness>,
}

/// `max(|V|, 2^diameter)`: one pebble on every vertex but the target, and
/// `2^D - 1` pebbles at distance `D` from it, are both stuck.
pub fn lower_bound(g: &Graph) -> Result<LowerBound, EngineError> {
    let n = g.vertex_count();
    let diam = g.diameter();
    let pow = 1u128
        .checked_shl(diam as u32)
        .filter(|_| diam < 127)
        .unwrap_or(u128::MAX);
    let mut witnesses = Vec::new();
    let target = 0;
    let ones = Distribution::from_counts((0..n).map(|v| u32::from(v != target)).collect());
    witnesses.push(certify(g, ones, target, 1)?);
    if diam < 32 {
        let (a, b) = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| g.distance(a, b) == diam)
            .expect("some pair realises the diameter");
        let d = Distribution::from_pairs(n, &[(a, (pow - 1) as u32)]);
        witnesses.push(certify(g, d, b, 1)?);
    }
    Ok(LowerBound {
        value: (n as u128).max(pow),
        witnesses,
    })
}

/// `max(|V| + t - 1, t 2^ecc(v))`, the trivial bound for one target: `t - 1` on `v`
/// with one pebble everywhere else is stuck, and so is `t 2^ecc - 1` on a farthest vertex.
pub fn vertex_lower_bound(g: &Graph, v: VertexId, t: u32) -> Result<LowerBound, EngineError> {
    if v >= g.vertex_count() {
        return Err(EngineError::UnknownVertex(v));
    }
    if t == 0 {
        return Err(EngineError::InvalidT);
    }
    let n = g.vertex_count();
    let dist = g.distances_from(v);
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let far = dist.iter().position(|&d| d == ecc).unwrap();
    let mut counts: Vec<u32> = (0..n).map(|x| u32::from(x != v)).collect();
    counts[v] = t - 1;
    let mut witnesses = vec![certify(g, Distribution::from_counts(counts), v, t)?];
    let heavy = (t as u128).checked_shl(ecc as u32).filter(|_| ecc < 96);
    if let Some(h) = heavy.filter(|&h| h > 0 && h - 1 <= u32::MAX as u128) {
        if ecc > 0 {
            witnesses.push(certify(g, Distribution::from_pairs(n, &[(far, (h - 1) as u32)]), v, t)?);
        }
    }
    let value = (n as u128 + t as u128 - 1).max(heavy.unwrap_or(u128::MAX));
    Ok(LowerBound { value, witnesses })
}

fn certify(g: &Graph, d: Distribution, target: VertexId, t: u32) -> Result<Witness, EngineError> {
    let out = is_solvable(g, &d, target, t)?;
    assert!(!out.solvable, "lower-bound witness turned out solvable");
    Ok(Witness {
        distribution: d,
        target,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    pub k: u64,
    /// Distributions examined (up to the first failure).
    pub checked: u128,
    pub all_solvable: bool,
}

#[derive(Clone, Debug)]
pub struct PebblingReport {
    pub t: u32,
    pub targets: Vec<VertexId>,
    /// Whether the caller narrowed the targets (e.g. by asserting symmetry).
    pub targets_restricted: bool,
    /// The exact value, or `None` when a budget ran out.
    pub value: Option<u64>,
    pub inconclusive: Option<String>,
    /// Largest unsolvable distribution found (size `value - 1` when exact).
    pub witness: Option<Witness>,
    pub start_level: u64,
    pub levels: Vec<LevelRecord>,
    pub nodes: u64,
}

impl PebblingReport {
    pub fn exact(&self) -> Result<u64, EngineError> {
        self.value
            .ok_or_else(|| EngineError::BudgetExceeded(self.inconclusive.clone().unwrap_or_default()))
    }

    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "t": self.t,
            "targets": self.targets.iter().map(|&v| g.label(v).to_string()).collect::<Vec<_>>(),
            "targets_restricted": self.targets_restricted,
            "verdict": if self.value.is_some() { "exact" } else { "inconclusive" },
            "value": self.value,
            "reason": self.inconclusive,
            "witness": self.witness.as_ref().map(|w| w.to_json(g)),
            "start_level": self.start_level,
            "levels": self.levels,
            "nodes": self.nodes,
        })
    }
}

/// Sweep progress, written after every batch of chunks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub graph_hash: String,
    pub t: u32,
    pub targets: Vec<VertexId>,
    pub k: u64,
    /// Colex rank of the next unchecked distribution at level `k`.
    pub cursor: u128,
    /// `"running"`, `"exact"` or `"inconclusive"`.
    pub verdict: String,
    pub value: Option<u64>,
    pub witness: Option<(Vec<u32>, VertexId)>,
    pub nodes: u64,
}

impl Checkpoint {
    fn load(path: &PathBuf) -> Result<Option<Self>, EngineError> {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| EngineError::Checkpoint(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(EngineError::Checkpoint(format!("{}: {e}", path.display()))),
        }
    }

    fn save(&self, path: &PathBuf) -> Result<(), EngineError> {
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text)
            .and_then(|_| std::fs::rename(&tmp, path))
            .map_err(|e| EngineError::Checkpoint(format!("{}: {e}", path.display())))
    }
}

enum Found {
    Unsolvable(u128, Vec<u32>, VertexId),
    Stop(EngineError),
}

struct Sweep<'g> {
    solvers: Vec<Solver<'g>>,
    parts: usize,
    budget: Budget,
    started: Instant,
    nodes: AtomicU64,
}

impl Sweep<'_> {
    fn over_budget(&self) -> Option<EngineError> {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes.load(Ordering::Relaxed) > max {
                return Some(EngineError::BudgetExceeded(format!("sweep passed {max} search nodes")));
            }
        }
        if let Some(max) = self.budget.max_time {
            if self.started.elapsed() > max {
                return Some(EngineError::BudgetExceeded(format!("sweep passed {:.1?}", max)));
            }
        }
        None
    }

    fn check_chunk(&self, k: u64, lo: u128, hi: u128) -> Option<Found> {
        let mut c = unrank(self.parts, k, lo)?;
        let mut idx = lo;
        loop {
            for s in &self.solvers {
                match s.solve_counts(&c) {
                    Ok(out) => {
                        self.nodes.fetch_add(out.nodes_explored, Ordering::Relaxed);
                        if !out.solvable {
                            return Some(Found::Unsolvable(idx, c, s.target()));
                        }
                    }
                    Err(e) => return Some(Found::Stop(e)),
                }
            }
            idx += 1;
            if idx.is_multiple_of(256) {
                if let Some(e) = self.over_budget() {
                    return Some(Found::Stop(e));
                }
            }
            if idx >= hi || !Compositions::advance(&mut c) {
                return None;
            }
        }
    }
}

/// Least `k` such that every size-`k` distribution is t-solvable for every
/// vertex in `targets` (all vertices when `None`).
pub fn t_pebbling_number(
    g: &Graph,
    t: u32,
    targets: Option<&[VertexId]>,
    opts: &SweepOptions,
) -> Result<PebblingReport, EngineError> {
    if t == 0 {
        return Err(EngineError::InvalidT);
    }
    let restricted = targets.is_some();
    let targets: Vec<VertexId> = match targets {
        Some(list) if !list.is_empty() => list.to_vec(),
        Some(_) => return Err(EngineError::Checkpoint("empty target list".into())),
        None => (0..g.vertex_count()).collect(),
    };
    if let Some(&bad) = targets.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(EngineError::UnknownVertex(bad));
    }
    let run = || sweep(g, t, &targets, restricted, opts);
    if opts.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| EngineError::Checkpoint(format!("thread pool: {e}")))?
            .install(run)
    } else {
        run()
    }
}

/// `f(G)`, or the maximum of `f(G, v)` over `targets`.
pub fn pebbling_number(
    g: &Graph,
    targets: Option<&[VertexId]>,
    opts: &SweepOptions,
) -> Result<PebblingReport, EngineError> {
    t_pebbling_number(g, 1, targets, opts)
}

/// `f(G, v)`.
pub fn pebbling_number_vertex(g: &Graph, v: VertexId, opts: &SweepOptions) -> Result<PebblingReport, EngineError> {
    t_pebbling_number(g, 1, Some(&[v]), opts)
}

fn sweep(
    g: &Graph,
    t: u32,
    targets: &[VertexId],
    restricted: bool,
    opts: &SweepOptions,
) -> Result<PebblingReport, EngineError> {
    let budget = opts.budget;
    let started = Instant::now();
    let limits = Limits {
        max_nodes: budget.per_call_nodes,
        deadline: budget.max_time.map(|d| started + d),
    };
    let mut start = 0u128;
    let mut witness: Option<Witness> = None;
    for &v in targets {
        let lb = vertex_lower_bound(g, v, t)?;
        if lb.value > start {
            start = lb.value;
            witness = lb.witnesses.into_iter().max_by_key(|w| w.distribution.total());
        }
    }
    let start_level = u64::try_from(start).map_err(|_| EngineError::BudgetExceeded("lower bound overflows".into()))?;
    let mut report = PebblingReport {
        t,
        targets: targets.to_vec(),
        targets_restricted: restricted,
        value: None,
        inconclusive: None,
        witness,
        start_level,
        levels: Vec::new(),
        nodes: 0,
    };

    let hash = g.content_hash();
    let mut k = start_level;
    let mut cursor = 0u128;
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = Checkpoint::load(path)? {
            if cp.graph_hash != hash || cp.t != t || cp.targets != targets {
                return Err(EngineError::Checkpoint(format!(
                    "{} belongs to a different graph, t or target list",
                    path.display()
                )));
            }
            k = cp.k;
            cursor = cp.cursor;
            report.nodes = cp.nodes;
            if let Some((counts, target)) = cp.witness {
                report.witness = Some(Witness {
                    distribution: Distribution::from_counts(counts),
                    target,
                });
            }
            if cp.verdict == "exact" {
                report.value = cp.value;
                return Ok(report);
            }
        }
    }

    let solvers = targets
        .iter()
        .map(|&v| Solver::new(g, v, t, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let state = Sweep {
        solvers,
        parts: g.vertex_count(),
        budget,
        started,
        nodes: AtomicU64::new(report.nodes),
    };
    let chunk = opts.chunk.max(1);
    let batch = (rayon::current_num_threads().max(1) * 8) as u128;
    let save = |report: &PebblingReport, k: u64, cursor: u128, verdict: &str, nodes: u64| -> Result<(), EngineError> {
        if let Some(path) = &opts.checkpoint {
            Checkpoint {
                graph_hash: hash.clone(),
                t,
                targets: targets.to_vec(),
                k,
                cursor,
                verdict: verdict.into(),
                value: report.value,
                witness: report
                    .witness
                    .as_ref()
                    .map(|w| (w.distribution.counts().to_vec(), w.target)),
                nodes,
            }
            .save(path)?;
        }
        Ok(())
    };

    loop {
        let size = composition_count(k, g.vertex_count());
        if size > budget.max_level_size {
            report.inconclusive = Some(format!(
                "level {k} has {size} distributions, over the cap of {}",
                budget.max_level_size
            ));
            break;
        }
        let mut found = None;
        while cursor < size {
            let chunks = (size - cursor).div_ceil(chunk).min(batch);
            let base = cursor;
            let hit = (0..chunks as u64).into_par_iter().find_map_first(|j| {
                let lo = base + j as u128 * chunk;
                state.check_chunk(k, lo, (lo + chunk).min(size))
            });
            if hit.is_some() {
                found = hit;
                break;
            }
            cursor = (base + chunks * chunk).min(size);
            save(&report, k, cursor, "running", state.nodes.load(Ordering::Relaxed))?;
        }
        match found {
            None => {
                report.levels.push(LevelRecord {
                    k,
                    checked: size,
                    all_solvable: true,
                });
                report.value = Some(k);
                break;
            }
            Some(Found::Unsolvable(idx, counts, target)) => {
                report.levels.push(LevelRecord {
                    k,
                    checked: idx + 1,
                    all_solvable: false,
                });
                report.witness = Some(Witness {
                    distribution: Distribution::from_counts(counts),
                    target,
                });
                k += 1;
                cursor = 0;
                save(&report, k, 0, "running", state.nodes.load(Ordering::Relaxed))?;
            }
            Some(Found::Stop(e)) => {
                report.inconclusive = Some(match e {
                    EngineError::BudgetExceeded(r) => r,
                    other => return Err(other),
                });
                break;
            }
        }
    }
    report.nodes = state.nodes.load(Ordering::Relaxed);
    let verdict = if report.value.is_some() {
        "exact"
    } else {
        "inconclusive"
    };
    save(&report, k, cursor, verdict, report.nodes)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, middle_cycle, path};

    fn exact(g: &Graph) -> u64 {
        pebbling_number(g, None, &SweepOptions::default())
            .unwrap()
            .exact()
            .unwrap()
    }

    #[test]
    fn small_families() {
        assert_eq!(exact(&complete(3).unwrap()), 3);
        assert_eq!(exact(&complete(5).unwrap()), 5);
        assert_eq!(exact(&path(2).unwrap()), 2);
        assert_eq!(exact(&path(4).unwrap()), 8);
        assert_eq!(exact(&cycle(4).unwrap()), 4);
        assert_eq!(exact(&cycle(5).unwrap()), 5);
    }

    #[test]
    fn t_pebbling() {
        let g = complete(3).unwrap();
        let r = t_pebbling_number(&g, 2, None, &SweepOptions::default()).unwrap();
        assert_eq!(r.value, Some(5));
        let w = r.witness.unwrap();
        assert_eq!(w.distribution.total(), 4);
        assert!(!is_solvable(&g, &w.distribution, w.target, 2).unwrap().solvable);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(&complete(5).unwrap()).unwrap().value, 5);
        let lb = lower_bound(&middle_cycle(2).unwrap()).unwrap();
        assert_eq!(lb.value, 8);
        assert_eq!(lb.witnesses.len(), 2);
        let p3 = path(3).unwrap();
        let lb = lower_bound(&p3).unwrap();
        assert_eq!(lb.witnesses[1].distribution.total(), 3);
        let v = vertex_lower_bound(&p3, 1, 1).unwrap();
        assert_eq!(v.value, 3);
    }

    #[test]
    fn budget_gives_inconclusive() {
        let g = middle_cycle(3).unwrap();
        let r = pebbling_number(&g, None, &SweepOptions::default()).unwrap();
        assert_eq!(r.value, None);
        assert!(r.inconclusive.unwrap().contains("distributions"));
        let opts = SweepOptions {
            budget: Budget {
                max_nodes: Some(10),
                ..Budget::default()
            },
            chunk: 16,
            ..SweepOptions::default()
        };
        let r = pebbling_number(&middle_cycle(2).unwrap(), None, &opts).unwrap();
        assert!(r.value.is_none());
        assert!(r.exact().is_err());
    }

    #[test]
    fn thread_count_does_not_change_answers() {
        let g = cycle(6).unwrap();
        let mut reports = Vec::new();
        for (threads, chunk) in [(1, 7), (3, 64), (2, 4096)] {
            let opts = SweepOptions {
                threads,
                chunk,
                ..SweepOptions::default()
            };
            let r = pebbling_number(&g, Some(&[0]), &opts).unwrap();
            reports.push((r.value, r.witness.map(|w| w.distribution)));
        }
        assert!(reports.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(reports[0].0, Some(8));
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("sweep.json");
        let g = middle_cycle(2).unwrap();
        let opts = SweepOptions {
            chunk: 512,
            checkpoint: Some(file.clone()),
            ..SweepOptions::default()
        };
        let r = pebbling_number(&g, Some(&[0]), &opts).unwrap();
        assert_eq!(r.value, Some(10));
        let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(cp.verdict, "exact");
        // a finished checkpoint answers at once
        let again = pebbling_number(&g, Some(&[0]), &opts).unwrap();
        assert_eq!(again.value, Some(10));
        // a mid-sweep checkpoint resumes at its cursor
        let mid = Checkpoint {
            k: 10,
            cursor: 5000,
            verdict: "running".into(),
            value: None,
            ..cp.clone()
        };
        std::fs::write(&file, serde_json::to_string(&mid).unwrap()).unwrap();
        let resumed = pebbling_number(&g, Some(&[0]), &opts).unwrap();
        assert_eq!(resumed.value, Some(10));
        assert_eq!(resumed.levels[0].checked, composition_count(10, 8));
        // wrong graph
        assert!(pebbling_number(&path(3).unwrap(), Some(&[0]), &opts).is_err());
    }
}
