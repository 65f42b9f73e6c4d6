use std::collections::BTreeSet;

use pebbling::engine::{composition_count, is_solvable, unrank};
use pebbling::graph::{cartesian_product, middle_cycle, middle_path_trimmed, path, Graph, VertexLabel};
use pebbling::strategy::{
    collect_on_path, cor24_witness, middle_cycle_t_strategy, middle_path_strategy, product_collection_strategy,
    worst_case_extraction, CaseTag, PathContext, StrategyReport,
};
use pebbling::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_distribution(rng: &mut ChaCha8Rng, vertices: usize, size: u64) -> Distribution {
    let index = rng.gen_range(0..composition_count(size, vertices));
    Distribution::from_counts(unrank(vertices, size, index).unwrap())
}

fn check_replay(g: &Graph, d: &Distribution, r: &StrategyReport) {
    let end = r.sequence.replay(g, d).expect("strategy moves replay");
    assert_eq!(end.get(r.target), r.delivered);
}

#[test]
fn path_cases_all_fire() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = BTreeSet::new();
    for _ in 0..3000 {
        let n = rng.gen_range(2..8);
        let k = rng.gen_range(1..=n);
        let t = rng.gen_range(1..4);
        let g = path(n).unwrap();
        let mut counts: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3u32) * rng.gen_range(0..24)).collect();
        counts[k - 1] = 0;
        let d = Distribution::from_counts(counts);
        let ctx = PathContext {
            path: (0..n).collect(),
            distribution: &d,
            target_index: k,
        };
        if let Ok(r) = collect_on_path(&g, &ctx, t) {
            assert!(r.succeeded);
            check_replay(&g, &d, &r);
            seen.insert(r.case_tag);
        }
    }
    for tag in [
        CaseTag::PathSingleSided,
        CaseTag::PathLongSide,
        CaseTag::PathShortSideAssist,
    ] {
        assert!(seen.contains(&tag), "{tag:?} never fired");
    }
}

#[test]
fn cycle_cases_all_fire() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = BTreeSet::new();
    for n in [2usize, 3] {
        let g = middle_cycle(n).unwrap();
        let targets = [g.resolve("u0").unwrap(), g.resolve("v0").unwrap()];
        for i in 0..4000 {
            let t = rng.gen_range(1..3u32);
            let size = t as u64 * (1 << (n + 1)) + 2 * n as u64 - 2 + rng.gen_range(0..3);
            // alternate uniform and concentrated loads so the spine cases appear
            let d = if i % 2 == 0 {
                random_distribution(&mut rng, g.vertex_count(), size)
            } else {
                let mut d = Distribution::empty(g.vertex_count());
                let heavy = rng.gen_range(0..g.vertex_count());
                let share = rng.gen_range(0..=size);
                d.add(heavy, share as u32);
                for _ in share..size {
                    d.add(rng.gen_range(0..g.vertex_count()), 1);
                }
                d
            };
            let target = targets[i % 2];
            let r = middle_cycle_t_strategy(&g, n, &d, target, t).unwrap();
            assert!(r.succeeded, "n={n} t={t} {d} -> {}", g.label(target));
            check_replay(&g, &d, &r);
            seen.extend(r.tags.iter().copied());
        }
    }
    for tag in [
        CaseTag::CycleHalfPeel,
        CaseTag::CycleSpineDirect,
        CaseTag::CycleSpineWeight,
        CaseTag::CycleSpineTopUp,
    ] {
        assert!(seen.contains(&tag), "{tag:?} never fired; saw {seen:?}");
    }
}

#[test]
fn strategies_agree_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=6 {
        let g = middle_path_trimmed(n).unwrap();
        let size = (1u64 << (n - 2)) + n as u64 - 2;
        for _ in 0..300 {
            let d = random_distribution(&mut rng, g.vertex_count(), size);
            let target = rng.gen_range(0..g.vertex_count());
            let r = middle_path_strategy(&g, n, &d, target).unwrap();
            assert!(r.succeeded);
            check_replay(&g, &d, &r);
            assert!(is_solvable(&g, &d, target, 1).unwrap().solvable);
        }
        let (w, target) = cor24_witness(&g, n).unwrap();
        assert!(!is_solvable(&g, &w, target, 1).unwrap().solvable);
    }
}

#[test]
fn product_random_loads_outside_the_hypothesis() {
    let m4 = middle_cycle(2).unwrap();
    let gp = cartesian_product(&m4, &m4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut delivered = 0;
    for _ in 0..200 {
        let d = random_distribution(&mut rng, gp.vertex_count(), 100);
        let target = rng.gen_range(0..gp.vertex_count());
        let r = product_collection_strategy(&gp, &d, target).unwrap();
        assert_eq!(r.guarantee, Some(false));
        check_replay(&gp, &d, &r);
        if r.succeeded {
            delivered += 1;
            assert!(is_solvable(&gp, &d, target, 1).unwrap().solvable);
        }
    }
    assert!(delivered > 150, "only {delivered} of 200 delivered");
}

#[test]
fn product_worst_case_loading_runs() {
    let (n, m) = (7, 5);
    let gp = cartesian_product(&middle_cycle(n).unwrap(), &middle_cycle(m).unwrap()).unwrap();
    let left = middle_cycle(n).unwrap();
    let y = VertexLabel::edge(0, 1);
    let far = VertexLabel::Original(m);
    for s in [1usize, 13, 27] {
        let plan = worst_case_extraction(n, m, s).unwrap();
        let mut d = Distribution::empty(gp.vertex_count());
        // the first s rows (one of them the target's) are the starved ones
        for (a, &load) in left.labels().iter().zip(&plan.loads) {
            let v = gp.id(&VertexLabel::pair(a.clone(), far.clone())).unwrap();
            d.set(v, load as u32);
        }
        let x = left.label(0).clone();
        let target = gp.id(&VertexLabel::pair(x, y.clone())).unwrap();
        let r = product_collection_strategy(&gp, &d, target).unwrap();
        assert_eq!(r.guarantee, Some(true));
        assert_eq!(r.case_tag, CaseTag::ProductCollection);
        assert!(r.succeeded, "s={s}: {:?}", r.notes);
        check_replay(&gp, &d, &r);
        let extracted: u128 = r
            .notes
            .iter()
            .find_map(|n| {
                n.strip_prefix("extracted ")
                    .and_then(|x| x.split(' ').next()?.parse().ok())
            })
            .unwrap();
        assert_eq!(extracted, plan.extracted);
        assert!(plan.suffices());
    }
}
