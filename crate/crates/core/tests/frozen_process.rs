use fpark_core::frozen::{run_frozen, ErState, FrozenState, RunOptions, Sampling, StepEvent, WhiteBlueRule};
use fpark_core::graph::OrientedEdge;
use fpark_core::rng::{tag, EdgeStream, Prng};
use proptest::prelude::*;

/// Sorted vertex sets of the tree components of `G`.
fn tree_components(g: &mut ErState, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = g.table_mut().find(v);
        by_root[r].push(v);
    }
    (0..n).filter(|&r| !by_root[r].is_empty() && g.table().root_surplus(r) == 0).map(|r| by_root[r].clone()).collect()
}

fn white_components(f: &mut FrozenState, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = f.table_mut().find(v);
        by_root[r].push(v);
    }
    (0..n).filter(|&r| !by_root[r].is_empty() && !f.table().root_is_blue(r)).map(|r| by_root[r].clone()).collect()
}

fn drive(
    n: usize,
    m: usize,
    seed: u64,
    rule: WhiteBlueRule,
    mut check: impl FnMut(&mut FrozenState, &mut ErState, &OrientedEdge, StepEvent),
) {
    let mut edges = EdgeStream::new(n, seed).unwrap();
    let mut aux = Prng::stream(seed, tag::AUX);
    let mut f = FrozenState::new(n, rule).unwrap().with_logs();
    let mut g = ErState::new(n).unwrap();
    for _ in 0..m {
        let e = edges.next_edge();
        let ev = f.step(&e, aux.unit());
        g.step(&e);
        check(&mut f, &mut g, &e, ev);
    }
}

#[test]
fn tree_components_of_g_are_white_in_f() {
    for seed in 0..30 {
        let n = 200;
        drive(n, 300, seed, WhiteBlueRule::Orientation, |f, g, _, _| {
            let white = white_components(f, n);
            for t in tree_components(g, n) {
                assert!(white.contains(&t), "seed {seed}: tree {t:?} not white in F");
                // a tree component of G keeps all its edges in F
                let r = f.table_mut().find(t[0]);
                assert_eq!(f.table().root_edges(r), t.len() as u64 - 1);
            }
        });
    }
}

#[test]
fn full_keep_rule_matches_g_forest_exactly() {
    for seed in 0..30 {
        let n = 150;
        drive(n, 250, seed, WhiteBlueRule::Bernoulli(1.0), |f, g, _, _| {
            assert_eq!(white_components(f, n), tree_components(g, n), "seed {seed}");
        });
    }
}

#[test]
fn no_blue_iff_g_acyclic() {
    for seed in 0..50 {
        let n = 100;
        drive(n, 120, seed, WhiteBlueRule::Orientation, |f, g, _, _| {
            assert_eq!(f.frozen_mass() == 0, g.is_acyclic(), "seed {seed}");
        });
    }
}

#[test]
fn blue_components_are_unicyclic() {
    drive(300, 600, 4, WhiteBlueRule::Orientation, |f, _, _, _| {
        let n = f.n();
        for v in 0..n {
            if f.table().is_root(v) && f.table().root_is_blue(v) {
                assert_eq!(f.table().root_surplus(v), 1);
            }
        }
    });
}

#[test]
fn zero_keep_rule_grows_only_by_cycles() {
    drive(200, 400, 8, WhiteBlueRule::Bernoulli(0.0), |_, _, _, ev| {
        assert!(!matches!(ev, StepEvent::Absorb { .. }));
    });
}

#[test]
fn kept_edges_lie_in_g() {
    // kept edges are offered edges, so F is a subgraph of G
    let n = 80;
    let mut offered = Vec::new();
    drive(n, 200, 2, WhiteBlueRule::Orientation, |f, _, e, _| {
        offered.push(*e);
        let kept = f.kept_log().unwrap();
        assert!(kept.iter().all(|k| offered[k.index as usize - 1] == *k));
    });
}

#[test]
fn trajectory_is_reproducible() {
    let a = run_frozen(500, 700, WhiteBlueRule::Orientation, 77, &Sampling::EveryStep, &RunOptions::default()).unwrap();
    let b = run_frozen(500, 700, WhiteBlueRule::Orientation, 77, &Sampling::EveryStep, &RunOptions::default()).unwrap();
    assert_eq!(a.final_mass, b.final_mass);
    assert_eq!(a.snapshots.len(), b.snapshots.len());
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        assert_eq!((x.m, x.frozen_mass, x.discarded), (y.m, y.frozen_mass, y.discarded));
    }
}

proptest! {
    #[test]
    fn bookkeeping_and_monotonicity(seed in any::<u64>(), n in 1usize..60, m in 0usize..200, p in 0.0f64..=1.0) {
        let rule = WhiteBlueRule::from_p(p).unwrap();
        let mut last = (0u64, 0u64);
        let mut mass = 0u64;
        drive(n, m, seed, rule, |f, _, _, ev| {
            assert_eq!(f.kept_edges() + f.discarded(), f.m());
            assert!(f.blue_blue() <= f.discarded());
            assert!(f.frozen_mass() >= last.0 && f.discarded() >= last.1);
            last = (f.frozen_mass(), f.discarded());
            mass += ev.blue_increment() as u64;
            let blue: u64 = f.blue_sizes().iter().sum();
            assert_eq!(blue, f.frozen_mass());
        });
        prop_assert_eq!(mass, last.0);
    }
}
