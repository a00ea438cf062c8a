use super::mu::MuLaw;
use super::walk::walk_pmf;
use crate::error::{Error, Result};
use crate::rng::{tag, Prng};

/// Cap on rejection attempts for the conditioned walk.
pub const MAX_ATTEMPTS: u64 = 10_000_000;

/// Largest `n` for which the acceptance probability is computed exactly before sampling.
const EXACT_ESTIMATE_LIMIT: usize = 2000;

/// A uniform forest over `1..=n` with `m` edges.
#[derive(Clone, Debug)]
pub struct SampledForest {
    pub n: usize,
    /// Edges as pairs of 1-based labels.
    pub edges: Vec<(u32, u32)>,
    /// Component sizes, non-increasing.
    pub sizes: Vec<usize>,
    pub attempts: u64,
}

/// Uniform labelled tree on `k` vertices (labels `0..k`) from a random Prüfer code.
pub fn uniform_cayley_tree(k: usize, rng: &mut Prng) -> Vec<(usize, usize)> {
    match k {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let code: Vec<usize> = (0..k - 2).map(|_| rng.below_usize(k)).collect();
    prufer_decode(&code, k)
}

fn prufer_decode(code: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &c in code {
        edges.push((leaf, c));
        degree[c] -= 1;
        if c < ptr && degree[c] == 1 {
            leaf = c;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, k - 1));
    edges
}

fn draw_sizes(parts: usize, n: usize, law: &MuLaw, rng: &mut Prng) -> Option<Vec<usize>> {
    let mut sizes = Vec::with_capacity(parts);
    let mut total = 0usize;
    for i in 0..parts {
        let k = law.quantile(rng.unit())?;
        total += k;
        // every remaining part needs at least one vertex
        if total + (parts - i - 1) > n {
            return None;
        }
        sizes.push(k);
    }
    (total == n).then_some(sizes)
}

/// Uniform forest of `F(n, m)`: walk increments conditioned on `S_{n-m} = n`
/// give the sizes, a uniform permutation splits the labels, and every block
/// carries an independent uniform Cayley tree.
pub fn sample_uniform_forest(n: usize, m: usize, seed: u64) -> Result<SampledForest> {
    if n == 0 || m >= n {
        return Err(Error::InvalidSize(format!("need m <= n - 1, got n = {n}, m = {m}")));
    }
    let parts = n - m;
    if n <= EXACT_ESTIMATE_LIMIT && parts > 1 {
        let p = walk_pmf(parts, n);
        if p * (MAX_ATTEMPTS as f64) < 1.0 {
            return Err(Error::Resource(format!(
                "acceptance probability {p:.3e} needs about {:.3e} attempts (cap {MAX_ATTEMPTS})",
                1.0 / p
            )));
        }
    }
    let mut rng = Prng::stream(seed, tag::SAMPLER);
    let mut attempts = 0u64;
    let mut sizes = if parts == 1 {
        attempts = 1;
        vec![n]
    } else {
        let law = MuLaw::new(n);
        loop {
            attempts += 1;
            if let Some(s) = draw_sizes(parts, n, &law, &mut rng) {
                break s;
            }
            if attempts >= MAX_ATTEMPTS {
                return Err(Error::Resource(format!(
                    "no accepted walk after {MAX_ATTEMPTS} attempts for n = {n}, m = {m}"
                )));
            }
        }
    };
    let labels = rng.permutation(n);
    let mut edges = Vec::with_capacity(m);
    let mut offset = 0;
    for &k in &sizes {
        let block = &labels[offset..offset + k];
        for (a, b) in uniform_cayley_tree(k, &mut rng) {
            let (x, y) = (block[a] as u32 + 1, block[b] as u32 + 1);
            edges.push((x.min(y), x.max(y)));
        }
        offset += k;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(SampledForest { n, edges, sizes, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ComponentTable;
    use std::collections::HashMap;

    #[test]
    fn prufer_round_trip_counts() {
        // all 4^2 codes give the 16 distinct trees on 4 vertices
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..4 {
            for b in 0..4 {
                let mut e = prufer_decode(&[a, b], 4);
                for p in e.iter_mut() {
                    *p = (p.0.min(p.1), p.0.max(p.1));
                }
                e.sort();
                seen.insert(e);
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn sampled_forest_is_a_forest() {
        for seed in 0..20 {
            let f = sample_uniform_forest(60, 30, seed).unwrap();
            assert_eq!(f.edges.len(), 30);
            let mut t = ComponentTable::new(60);
            for &(a, b) in &f.edges {
                assert!(matches!(
                    t.union_or_cycle(a as usize - 1, b as usize - 1).unwrap(),
                    crate::graph::UnionOutcome::Merged { .. }
                ));
            }
            assert_eq!(f.sizes.iter().sum::<usize>(), 60);
            assert_eq!(f.sizes.len(), 30);
        }
    }

    #[test]
    fn single_tree_case() {
        let f = sample_uniform_forest(50, 49, 3).unwrap();
        assert_eq!(f.sizes, vec![50]);
        assert_eq!(f.edges.len(), 49);
    }

    #[test]
    fn three_vertices_one_edge_uniform() {
        let draws = 30_000u64;
        let mut hist: HashMap<(u32, u32), u64> = HashMap::new();
        for seed in 0..draws {
            let f = sample_uniform_forest(3, 1, seed).unwrap();
            assert_eq!(f.sizes, vec![2, 1]);
            *hist.entry(f.edges[0]).or_default() += 1;
        }
        assert_eq!(hist.len(), 3);
        let e = draws as f64 / 3.0;
        let chi2: f64 = hist.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 2 degrees of freedom, 0.999 quantile
        assert!(chi2 < 13.8, "chi2 = {chi2}");
    }

    #[test]
    fn hopeless_acceptance_reported() {
        assert!(matches!(sample_uniform_forest(2000, 1998, 1), Err(Error::Resource(_))));
    }
}
