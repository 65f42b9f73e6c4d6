//! `M(C_{2n}) x M(C_{2m})`: every fiber copy of the smaller factor sends what it
//! can into the fiber copy of the larger factor through the target, which then
//! finishes on its own.

use serde::Serialize;

use crate::engine::Distribution;
use crate::graph::{middle_cycle, Graph, VertexId, VertexLabel};

use super::layout::MiddleCycleLayout;
use super::middle_cycle::{cycle_bound, run_middle_cycle, CycleOptions};
use super::{CaseTag, Exec, StrategyError, StrategyReport};

/// Factor orders and label lists of a product of two middle even cycles.
#[derive(Clone, Debug)]
pub struct ProductLayout {
    /// Left factor is `M(C_{2n})`.
    pub n: usize,
    /// Right factor is `M(C_{2m})`.
    pub m: usize,
    pub left: Vec<VertexLabel>,
    pub right: Vec<VertexLabel>,
}

fn factor_order(labels: &[VertexLabel]) -> Result<usize, StrategyError> {
    let c = labels.len();
    if !c.is_multiple_of(4) || c < 8 {
        return Err(StrategyError::Structure(format!(
            "a factor with {c} vertices is not the middle graph of an even cycle"
        )));
    }
    let n = c / 4;
    let expect = middle_cycle(n)?;
    let mut a: Vec<_> = expect.labels().to_vec();
    let mut b = labels.to_vec();
    a.sort();
    b.sort();
    if a != b {
        return Err(StrategyError::Structure(format!(
            "factor labels do not match M(C_{})",
            2 * n
        )));
    }
    Ok(n)
}

impl ProductLayout {
    pub fn from_graph(gp: &Graph) -> Result<Self, StrategyError> {
        let mut left: Vec<VertexLabel> = Vec::new();
        let mut right: Vec<VertexLabel> = Vec::new();
        for l in gp.labels() {
            let (a, b) = l
                .as_pair()
                .ok_or_else(|| StrategyError::Structure(format!("{l} is not a product vertex")))?;
            if !left.contains(a) {
                left.push(a.clone());
            }
            if !right.contains(b) {
                right.push(b.clone());
            }
        }
        if left.len() * right.len() != gp.vertex_count() {
            return Err(StrategyError::Structure("vertex set is not a full product".into()));
        }
        let n = factor_order(&left)?;
        let m = factor_order(&right)?;
        let layout = ProductLayout { n, m, left, right };
        // adjacency is checked fiber by fiber
        for a in &layout.left {
            layout.row(gp, a)?;
        }
        for b in &layout.right {
            layout.column(gp, b)?;
        }
        Ok(layout)
    }

    /// The left-anchored fiber `{(a, .)}`, a copy of `M(C_{2m})`.
    pub fn row(&self, gp: &Graph, a: &VertexLabel) -> Result<MiddleCycleLayout, StrategyError> {
        MiddleCycleLayout::from_labels(gp, self.m, |l| VertexLabel::pair(a.clone(), l))
    }

    /// The right-anchored fiber `{(., b)}`, a copy of `M(C_{2n})`.
    pub fn column(&self, gp: &Graph, b: &VertexLabel) -> Result<MiddleCycleLayout, StrategyError> {
        MiddleCycleLayout::from_labels(gp, self.n, |l| VertexLabel::pair(l, b.clone()))
    }

    /// Whether the pipeline's guarantee applies: `m, n >= 5` and `|n - m| >= 2`.
    pub fn hypothesis_holds(&self) -> bool {
        self.n >= 5 && self.m >= 5 && self.n.abs_diff(self.m) >= 2
    }
}

/// Largest `t` with `t 2^(m+1) + 2m - 2 <= p`, or 0 below the pebbling number.
pub(crate) fn fiber_quota(p: u64, m: usize) -> u64 {
    let base = 2 * m as u64 - 2;
    if p < (1u64 << (m + 1)) + base {
        0
    } else {
        (p - base) >> (m + 1)
    }
}

/// Collects one pebble on a product vertex of `M(C_{2n}) x M(C_{2m})`.
pub fn product_collection_strategy(
    gp: &Graph,
    d: &Distribution,
    target: VertexId,
) -> Result<StrategyReport, StrategyError> {
    let layout = ProductLayout::from_graph(gp)?;
    if layout.n > 28 || layout.m > 28 {
        return Err(StrategyError::Structure("factors too large for pebble counts".into()));
    }
    let (n, m) = (layout.n, layout.m);
    let f_left = cycle_bound(n, 1).unwrap() as u64;
    let f_right = cycle_bound(m, 1).unwrap() as u64;
    if d.total() < f_left * f_right {
        return Err(StrategyError::PreconditionNotMet(format!(
            "{} pebbles, need f(M(C_{})) f(M(C_{})) = {f_left} * {f_right} = {}",
            d.total(),
            2 * n,
            2 * m,
            f_left * f_right
        )));
    }
    let (x, y) = gp
        .label(target)
        .as_pair()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| StrategyError::UnsupportedTarget(gp.label(target).to_string()))?;
    let guarantee = layout.hypothesis_holds();
    let opts = CycleOptions::default();
    let row = layout.row(gp, &x)?;
    let column = layout.column(gp, &y)?;

    for (fiber, f, what) in [(&column, f_left, "column"), (&row, f_right, "row")] {
        let held = d.sum_over(&fiber.vertices());
        if held >= f {
            let mut report = run_middle_cycle(gp, fiber, d, target, 1, &opts)?;
            report.note(format!("the target's {what} fiber holds {held} >= {f}"));
            report.tags.insert(0, CaseTag::ProductFiberDirect);
            report.case_tag = CaseTag::ProductFiberDirect;
            report.guarantee = Some(guarantee);
            return Ok(report);
        }
    }

    // feeders are copies of the smaller factor; the sink is the larger one
    let swap = n < m;
    let (feeders, sink, small, f_sink) = if swap {
        let feeders = layout
            .right
            .iter()
            .map(|b| {
                Ok((
                    layout.column(gp, b)?,
                    gp.id_or_err(&VertexLabel::pair(x.clone(), b.clone()))?,
                ))
            })
            .collect::<Result<Vec<_>, StrategyError>>()?;
        (feeders, row, n, f_right)
    } else {
        let feeders = layout
            .left
            .iter()
            .map(|a| {
                Ok((
                    layout.row(gp, a)?,
                    gp.id_or_err(&VertexLabel::pair(a.clone(), y.clone()))?,
                ))
            })
            .collect::<Result<Vec<_>, StrategyError>>()?;
        (feeders, column, m, f_left)
    };

    let mut exec = Exec::new(d.counts().to_vec());
    let mut notes = Vec::new();
    if swap {
        notes.push("left factor is the smaller one: columns feed the target's row".to_string());
    }
    let mut loads: Vec<(u64, usize)> = feeders
        .iter()
        .enumerate()
        .map(|(i, (f, _))| (d.sum_over(&f.vertices()), i))
        .collect();
    loads.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut tags = vec![CaseTag::ProductCollection];
    let mut extracted = 0u64;
    for (p, i) in loads {
        let (fiber, landing) = &feeders[i];
        // pebbles already on the landing vertex count for the sink, not the feeder
        let before = exec.counts[*landing];
        let free = p - before as u64;
        let quota = fiber_quota(free, small);
        if quota == 0 {
            continue;
        }
        let mut sub = exec.counts.clone();
        sub[*landing] = 0;
        let sub = Distribution::from_counts(sub);
        let run = run_middle_cycle(gp, fiber, &sub, *landing, quota as u32, &opts)?;
        exec.replay(&run.sequence.moves);
        tags.extend(run.tags.iter().copied().filter(|&t| t != CaseTag::AlreadyOnTarget));
        let got = exec.counts[*landing] - before;
        extracted += got as u64;
        notes.push(format!(
            "fiber through {}: {free} pebbles off the landing vertex, t_k = {quota}, landed {got}",
            gp.label(*landing)
        ));
    }
    notes.push(format!("extracted {extracted} into the target's fiber"));
    let current = Distribution::from_counts(exec.counts.clone());
    let held = current.sum_over(&sink.vertices());
    if held >= f_sink {
        let fin = run_middle_cycle(gp, &sink, &current, target, 1, &opts)?;
        exec.replay(&fin.sequence.moves);
        tags.extend(fin.tags.iter().copied().filter(|&t| t != CaseTag::AlreadyOnTarget));
    } else if current.get(target) == 0 {
        notes.push(format!("target fiber holds {held} < {f_sink}; cannot finish"));
    }
    let mut report = StrategyReport::from_moves(gp, d, target, 1, exec.moves, CaseTag::ProductCollection)?;
    report.tags = tags;
    report.notes = notes;
    report.guarantee = Some(guarantee);
    if !guarantee {
        report.note(format!(
            "(n, m) = ({n}, {m}) is outside m, n >= 5 and |n - m| >= 2; no guarantee"
        ));
    }
    Ok(report)
}

/// Symbolic run of the collection step on the proof's most wasteful loading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstCaseExtraction {
    pub n: usize,
    pub m: usize,
    /// Fibers holding one pebble less than `f(M(C_{2m}))`.
    pub s: usize,
    /// Pebbles per left-anchored fiber.
    pub loads: Vec<u128>,
    /// `t_k` the strategy computes from each load.
    pub quotas: Vec<u128>,
    pub extracted: u128,
    /// Total minus the wasted pebbles, `(sum t_k) 2^(m+1) + R`.
    pub delta: u128,
    pub remainder: u128,
    /// `f(M(C_{2n}))`, what the target's column needs.
    pub needed: u128,
}

impl WorstCaseExtraction {
    pub fn suffices(&self) -> bool {
        self.extracted >= self.needed
    }
}

/// Loads the `4n` fibers of `M(C_{2n}) x M(C_{2m})` with `f(M(C_{2n})) f(M(C_{2m}))`
/// pebbles as wastefully as possible (`s` fibers one short of a single pebble,
/// the rest wasting `2^(m+1) - 1` each except the last, which wastes `R`), and
/// counts what the per-fiber quotas extract.
pub fn worst_case_extraction(n: usize, m: usize, s: usize) -> Result<WorstCaseExtraction, StrategyError> {
    if !(2..=40).contains(&n) || !(2..=40).contains(&m) || s >= 4 * n {
        return Err(StrategyError::PreconditionNotMet(format!(
            "need 2 <= n, m <= 40 and s < 4n, got n = {n}, m = {m}, s = {s}"
        )));
    }
    let fiber = |k: usize| (1u128 << (k + 1)) + 2 * k as u128 - 2;
    let (f_n, f_m) = (fiber(n), fiber(m));
    let unit = 1u128 << (m + 1);
    let base = 2 * m as u128 - 2;
    let fibers = 4 * n;
    let loaded = (fibers - s) as u128;
    let total = f_n * f_m;
    let waste = s as u128 * (f_m - 1) + (loaded - 1) * (unit - 1) + loaded * base;
    let delta = total
        .checked_sub(waste)
        .ok_or_else(|| StrategyError::PreconditionNotMet("wasted pebbles exceed the total".into()))?;
    let (sum_t, remainder) = (delta / unit, delta % unit);
    if sum_t < loaded {
        return Err(StrategyError::PreconditionNotMet(format!(
            "only {sum_t} pebbles to share among {loaded} fibers"
        )));
    }
    let mut loads = vec![f_m - 1; s];
    loads.extend(std::iter::repeat_n(unit + base + unit - 1, fibers - s - 1));
    loads.push((sum_t - (loaded - 1)) * unit + base + remainder);
    debug_assert_eq!(loads.iter().sum::<u128>(), total);
    let quotas: Vec<u128> = loads
        .iter()
        .map(|&p| if p < f_m { 0 } else { (p - base) / unit })
        .collect();
    let extracted = quotas.iter().sum();
    Ok(WorstCaseExtraction {
        n,
        m,
        s,
        loads,
        quotas,
        extracted,
        delta,
        remainder,
        needed: f_n,
    })
}
