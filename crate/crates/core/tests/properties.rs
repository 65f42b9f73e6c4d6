use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use pebbling::engine::{
    apply_move, composition_count, enumerate_distributions, is_solvable, lower_bound, pebbling_number, potential, rank,
    unrank, SweepOptions,
};
use pebbling::graph::{complete, cycle, middle_cycle, middle_path_trimmed, path, Graph, VertexLabel};
use pebbling::strategy::{collect_on_path, path_threshold, PathContext};
use pebbling::{Distribution, Move};
use proptest::prelude::*;

fn family(kind: u8, size: usize) -> Graph {
    match kind % 5 {
        0 => path(2 + size % 5).unwrap(),
        1 => cycle(3 + size % 5).unwrap(),
        2 => complete(2 + size % 4).unwrap(),
        3 => middle_path_trimmed(3 + size % 3).unwrap(),
        _ => middle_cycle(2).unwrap(),
    }
}

/// Random connected graph: a random tree plus extra edges.
fn random_graph() -> impl Strategy<Value = Graph> {
    (
        2usize..8,
        prop::collection::vec(any::<u32>(), 7),
        prop::collection::vec((0usize..8, 0usize..8), 0..6),
    )
        .prop_map(|(n, parents, extra)| {
            let mut edges: HashSet<(usize, usize)> = HashSet::new();
            for v in 1..n {
                let p = parents[v - 1] as usize % v;
                edges.insert((p, v));
            }
            for (a, b) in extra {
                let (a, b) = (a % n, b % n);
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            Graph::new((0..n).map(VertexLabel::Original).collect(), edges).unwrap()
        })
}

fn any_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (any::<u8>(), any::<usize>()).prop_map(|(k, s)| family(k, s)),
        random_graph()
    ]
}

fn graph_and_counts(max_each: u32) -> impl Strategy<Value = (Graph, Vec<u32>, usize)> {
    any_graph().prop_flat_map(move |g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(0..=max_each, n), 0..n)
    })
}

/// Every state reachable by moves, breadth first; the reference for `is_solvable`.
fn naive_solvable(g: &Graph, counts: &[u32], target: usize, t: u32) -> bool {
    let mut seen = HashSet::new();
    let mut frontier = vec![counts.to_vec()];
    while let Some(c) = frontier.pop() {
        if c[target] >= t {
            return true;
        }
        for a in 0..c.len() {
            if c[a] < 2 {
                continue;
            }
            for &b in g.neighbors(a) {
                let mut next = c.clone();
                next[a] -= 2;
                next[b] += 1;
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moves_conserve_and_potential_never_rises((g, counts, target) in graph_and_counts(6), pick in any::<usize>()) {
        let d = Distribution::from_counts(counts);
        let legal: Vec<Move> = (0..g.vertex_count())
            .filter(|&a| d.get(a) >= 2)
            .flat_map(|a| g.neighbors(a).iter().map(move |&b| Move::new(a, b)))
            .collect();
        prop_assume!(!legal.is_empty());
        let m = legal[pick % legal.len()];
        let after = apply_move(&g, &d, m).unwrap();
        prop_assert_eq!(after.total() + 1, d.total());
        let changed = (0..g.vertex_count()).filter(|&v| after.get(v) != d.get(v)).count();
        prop_assert_eq!(changed, 2);

        let before: Ratio<BigInt> = potential(&g, &d, target).unwrap();
        let now: Ratio<BigInt> = potential(&g, &after, target).unwrap();
        prop_assert!(now <= before);
        let toward = g.distance(m.to, target) + 1 == g.distance(m.from, target);
        prop_assert_eq!(now == before, toward);
    }

    #[test]
    fn illegal_moves_are_rejected((g, counts, _t) in graph_and_counts(3), a in any::<usize>(), b in any::<usize>()) {
        let d = Distribution::from_counts(counts);
        let (a, b) = (a % g.vertex_count(), b % g.vertex_count());
        let legal = d.get(a) >= 2 && g.adjacent(a, b);
        prop_assert_eq!(apply_move(&g, &d, Move::new(a, b)).is_ok(), legal);
    }

    #[test]
    fn solver_matches_naive_search((g, counts, target) in graph_and_counts(4), t in 1u32..3) {
        prop_assume!(counts.iter().sum::<u32>() <= 14);
        let d = Distribution::from_counts(counts.clone());
        let out = is_solvable(&g, &d, target, t).unwrap();
        prop_assert_eq!(out.solvable, naive_solvable(&g, &counts, target, t));
        if let Some(w) = out.witness {
            prop_assert!(w.replay(&g, &d).unwrap().get(target) >= t);
        }
    }

    #[test]
    fn adding_a_pebble_keeps_solvability((g, counts, target) in graph_and_counts(5), extra in any::<usize>(), t in 1u32..3) {
        let d = Distribution::from_counts(counts);
        let before = is_solvable(&g, &d, target, t).unwrap();
        prop_assume!(before.solvable);
        let mut bigger = d.clone();
        bigger.add(extra % g.vertex_count(), 1);
        let after = is_solvable(&g, &bigger, target, t).unwrap();
        prop_assert!(after.solvable);
        prop_assert!(after.witness.unwrap().replay(&g, &bigger).unwrap().get(target) >= t);
    }

    #[test]
    fn distances_form_a_metric(g in any_graph(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let n = g.vertex_count();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.distance(a, b), g.distance(b, a));
        prop_assert_eq!(g.distance(a, b) == 0, a == b);
        prop_assert!(g.distance(a, c) <= g.distance(a, b) + g.distance(b, c));
        prop_assert!(g.eccentricity(a) <= g.diameter());
    }

    #[test]
    fn ranks_round_trip(parts in 1usize..7, total in 0u64..9, pick in any::<u64>()) {
        let count = composition_count(total, parts);
        let index = pick as u128 % count;
        let c = unrank(parts, total, index).unwrap();
        prop_assert_eq!(c.iter().map(|&x| x as u64).sum::<u64>(), total);
        prop_assert_eq!(rank(&c), index);
        prop_assert!(unrank(parts, total, count).is_none());
    }

    #[test]
    fn path_threshold_delivers(n in 1usize..9, k in any::<usize>(), t in 1u32..4, raw in prop::collection::vec(0u32..40, 8)) {
        let g = path(n).unwrap();
        let k = 1 + k % n;
        let mut counts: Vec<u32> = raw[..n].to_vec();
        counts[k - 1] = 0;
        let d = Distribution::from_counts(counts);
        let order: Vec<usize> = (0..n).collect();
        let ctx = PathContext { path: order, distribution: &d, target_index: k };
        let r = collect_on_path(&g, &ctx, t);
        if pebbling::strategy::path_weight(&ctx) >= path_threshold(n, k, t) {
            let r = r.unwrap();
            prop_assert!(r.succeeded);
            prop_assert!(r.sequence.replay(&g, &d).unwrap().get(k - 1) >= t);
        } else {
            prop_assert!(r.is_err());
        }
    }
}

#[test]
fn counting_laws() {
    let g = middle_cycle(2).unwrap();
    assert_eq!(enumerate_distributions(&g, 9).count(), 11440);
    assert_eq!(enumerate_distributions(&g, 0).count(), 1);
    assert_eq!(enumerate_distributions(&path(3).unwrap(), 1).count(), 3);
    let all: HashSet<Vec<u32>> = enumerate_distributions(&g, 4).map(|d| d.into_counts()).collect();
    assert_eq!(all.len() as u128, composition_count(4, 8));
}

#[test]
fn oracle_respects_lower_bound() {
    let opts = SweepOptions::default();
    for g in [
        path(4).unwrap(),
        cycle(6).unwrap(),
        complete(4).unwrap(),
        middle_path_trimmed(4).unwrap(),
        middle_cycle(2).unwrap(),
    ] {
        let f = pebbling_number(&g, None, &opts).unwrap().exact().unwrap();
        let lb = lower_bound(&g).unwrap();
        assert!(f as u128 >= lb.value, "{f} < {}", lb.value);
        for w in &lb.witnesses {
            assert!(!is_solvable(&g, &w.distribution, w.target, 1).unwrap().solvable);
        }
    }
}

#[test]
fn path_threshold_is_tight_at_the_far_end() {
    for n in 2..=8usize {
        for t in 1..=3u32 {
            let g = path(n).unwrap();
            let mut counts = vec![0; n];
            counts[0] = t << (n - 1);
            let d = Distribution::from_counts(counts);
            let ctx = PathContext {
                path: (0..n).collect(),
                distribution: &d,
                target_index: n,
            };
            let r = collect_on_path(&g, &ctx, t).unwrap();
            assert_eq!(r.delivered, t, "n={n} t={t}");
        }
    }
}
