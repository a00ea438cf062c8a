use fpark_core::coupling::{
    car_passes_edge, car_passes_edge_by_parking, couple_mapping, couple_tree, orient_by_labels, sample_nearly_parked,
    verify_coupling, CoupleOptions, InstructionSet,
};
use fpark_core::numerics::uniform_cayley_tree;
use fpark_core::parking::{park_on_mapping, park_sequence, RootedTree};
use fpark_core::rng::Prng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

/// Pearson statistic of `counts` against `probs`, the last cell taking the
/// remaining mass; panics when above the 1e-4 upper quantile.
fn chi_square(counts: &[u64], probs: &[f64]) {
    let total: u64 = counts.iter().sum();
    let mut p = probs.to_vec();
    let last = 1.0 - p.iter().sum::<f64>();
    p.push(last);
    assert_eq!(p.len(), counts.len());
    let stat: f64 = counts
        .iter()
        .zip(&p)
        .map(|(&c, &q)| {
            let e = q * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let limit = ChiSquared::new((counts.len() - 1) as f64).unwrap().inverse_cdf(1.0 - 1e-4);
    assert!(stat < limit, "chi-square {stat} >= {limit}, counts {counts:?}, probs {p:?}");
}

fn root_degree_law(n: usize, cells: usize) -> Vec<f64> {
    let b = Binomial::new(1.0 / n as f64, (n - 2) as u64).unwrap();
    (0..cells - 1).map(|j| b.pmf(j as u64)).collect()
}

fn root_degree(t: &RootedTree) -> usize {
    t.children()[t.root()].len()
}

#[test]
fn coupled_tree_root_degree() {
    for n in [50usize, 200] {
        let mut counts = [0u64; 4];
        for seed in 0..3000 {
            let run = couple_tree(n, seed, &CoupleOptions::new(0)).unwrap();
            let d = root_degree(&run.tree().unwrap());
            counts[(d - 1).min(3)] += 1;
        }
        chi_square(&counts, &root_degree_law(n, 4));
    }
}

#[test]
fn peeled_tree_root_degree() {
    let n = 50;
    let mut rng = Prng::new(11);
    let mut counts = [0u64; 4];
    for _ in 0..3000 {
        let mut s = InstructionSet::new(n).unwrap();
        while !s.is_complete() {
            let v = (0..n).find(|&v| s.is_peelable(v)).unwrap();
            s.peel_step(v, &mut rng).unwrap();
        }
        let d = root_degree(&s.to_tree().unwrap());
        counts[(d - 1).min(3)] += 1;
    }
    chi_square(&counts, &root_degree_law(n, 4));
}

#[test]
fn coupled_mapping_in_degree() {
    let n = 50;
    let b = Binomial::new(1.0 / n as f64, n as u64).unwrap();
    let mut counts = [0u64; 4];
    for seed in 0..3000 {
        let m = couple_mapping(n, seed, &CoupleOptions::new(0)).unwrap().mapping().unwrap();
        let d = (0..n).filter(|&v| m.target(v) == 0).count();
        counts[d.min(3)] += 1;
    }
    chi_square(&counts, &(0..3).map(|k| b.pmf(k)).collect::<Vec<_>>());
}

#[test]
fn runs_verify_and_repark() {
    for seed in 0..20 {
        let opts = CoupleOptions::new(300);
        let run = couple_tree(200, seed, &opts).unwrap();
        assert!(verify_coupling(&run).is_ok());
        let o = park_sequence(&run.tree().unwrap(), &run.arrivals()).unwrap();
        assert_eq!(o.unparked.iter().map(|&c| c as u64).collect::<Vec<_>>(), run.unparked());
        let run = couple_mapping(200, seed, &opts).unwrap();
        assert!(verify_coupling(&run).is_ok());
        let o = park_on_mapping(&run.mapping().unwrap(), &run.arrivals()).unwrap();
        assert_eq!(o.unparked.iter().map(|&c| c as u64).collect::<Vec<_>>(), run.unparked());
    }
}

#[test]
fn runs_are_reproducible() {
    let opts = CoupleOptions::new(100);
    let a = couple_tree(80, 5, &opts).unwrap();
    let b = couple_tree(80, 5, &opts).unwrap();
    assert_eq!(a.targets, b.targets);
    assert_eq!(a.steps, b.steps);
}

#[test]
fn nearly_parked_samples_root_is_last_free_vertex() {
    for seed in 0..50 {
        let s = sample_nearly_parked(40, seed).unwrap();
        let free: Vec<usize> = (0..40).filter(|&v| !s.outcome.is_occupied(v)).collect();
        assert_eq!(free, vec![s.tree.root()]);
    }
}

#[test]
fn record_rule_matches_parking_up_to_six_vertices() {
    let mut rng = Prng::new(2024);
    for n in 2..=6usize {
        for _ in 0..300 {
            let edges = uniform_cayley_tree(n, &mut rng);
            let mut labels: Vec<usize> = (1..n).collect();
            rng.shuffle(&mut labels);
            let fwd: Vec<bool> = (0..n - 1).map(|_| rng.coin()).collect();
            let oriented = orient_by_labels(&edges, &labels, &fwd).unwrap();
            for i in 1..n - 1 {
                for j in i + 1..n {
                    assert_eq!(
                        car_passes_edge(&edges, &labels, &fwd, i, j).unwrap(),
                        car_passes_edge_by_parking(&oriented, i, j).unwrap()
                    );
                }
            }
        }
    }
}
