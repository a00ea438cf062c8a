//! Nearly parked trees from labeled, oriented Cayley trees, and the record
//! criterion for a car to use a given redirected edge.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::numerics::uniform_cayley_tree;
use crate::parking::{park_sequence, park_sequence_with_paths, ParkingOutcome, RootedTree};
use crate::rng::{tag, Prng};

use super::peel::Target;
use super::run::{Builder, CouplingKind};

#[derive(Clone, Debug)]
pub struct NearlyParked {
    pub tree: RootedTree,
    /// Arrival vertex of car `i + 1`.
    pub arrivals: Vec<usize>,
    pub outcome: ParkingOutcome,
    /// Edge with label `i + 1` as (tail, head).
    pub labeled_edges: Vec<(usize, usize)>,
}

/// Runs the tree coupling on the oriented edges of a Cayley tree taken in label
/// order. No cycle ever closes, so every car parks and the last free vertex is
/// the root.
pub fn redirect_labeled_tree(n: usize, oriented: &[(usize, usize)]) -> Result<NearlyParked> {
    if n == 0 || oriented.len() + 1 != n {
        return Err(Error::Domain(format!("{} edges for a tree on {n} vertices", oriented.len())));
    }
    let mut b = Builder::new(CouplingKind::Tree, n);
    for (i, &(x, y)) in oriented.iter().enumerate() {
        if x >= n || y >= n {
            return Err(Error::Index(format!("edge ({x}, {y}) with n = {n}")));
        }
        let zeta = b.park(x).expect("no blue tree before a cycle");
        if b.same(zeta, y) {
            return Err(Error::Domain(format!("edge {} closes a cycle", i + 1)));
        }
        b.attach(zeta, Target::Vertex(y));
    }
    let parents: Vec<Option<usize>> = b
        .targets()
        .iter()
        .map(|t| match t {
            Some(Target::Vertex(w)) => Some(*w),
            _ => None,
        })
        .collect();
    let tree = RootedTree::new(&parents)?;
    let arrivals: Vec<usize> = oriented.iter().map(|e| e.0).collect();
    let outcome = park_sequence(&tree, &arrivals)?;
    Ok(NearlyParked { tree, arrivals, outcome, labeled_edges: oriented.to_vec() })
}

/// Uniform nearly parked tree on `n` vertices from a uniform Cayley tree with
/// uniformly labeled and independently oriented edges.
pub fn sample_nearly_parked(n: usize, seed: u64) -> Result<NearlyParked> {
    if n == 0 {
        return Err(Error::InvalidSize("nearly parked tree needs n >= 1".into()));
    }
    let mut rng = Prng::stream(seed, tag::SAMPLER);
    let mut edges = uniform_cayley_tree(n, &mut rng);
    rng.shuffle(&mut edges);
    let oriented: Vec<(usize, usize)> =
        edges.into_iter().map(|(a, b)| if rng.coin() { (a, b) } else { (b, a) }).collect();
    redirect_labeled_tree(n, &oriented)
}

/// Unoriented edge list, labels and orientations in the form taken by
/// [`car_passes_edge`], turned into oriented edges in label order.
pub fn orient_by_labels(edges: &[(usize, usize)], labels: &[usize], forward: &[bool]) -> Result<Vec<(usize, usize)>> {
    let k = edges.len();
    if labels.len() != k || forward.len() != k {
        return Err(Error::Domain("edges, labels and orientations differ in length".into()));
    }
    let mut out = vec![None; k];
    for i in 0..k {
        let l = labels[i];
        if l == 0 || l > k || out[l - 1].is_some() {
            return Err(Error::Domain(format!("labels must be a permutation of 1..={k}")));
        }
        let (a, b) = edges[i];
        out[l - 1] = Some(if forward[i] { (a, b) } else { (b, a) });
    }
    Ok(out.into_iter().map(|e| e.unwrap()).collect())
}

/// Whether car `j` goes through the redirection of edge `i` (labels from 1,
/// `i < j`). Along the path of edges from `e_i` to `e_j` the labels must have
/// `j` as their last ascending record, every earlier record edge must point
/// away from `e_j`, and `e_j` must point away from `e_i`.
pub fn car_passes_edge(
    edges: &[(usize, usize)],
    labels: &[usize],
    forward: &[bool],
    i: usize,
    j: usize,
) -> Result<bool> {
    let oriented = orient_by_labels(edges, labels, forward)?;
    let k = oriented.len();
    if !(1 <= i && i < j && j <= k) {
        return Err(Error::Domain(format!("need 1 <= i < j <= {k}, got i = {i}, j = {j}")));
    }
    let n = k + 1;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (l, &(a, b)) in oriented.iter().enumerate() {
        if a >= n || b >= n {
            return Err(Error::Index(format!("edge ({a}, {b}) with n = {n}")));
        }
        adj[a].push((b, l + 1));
        adj[b].push((a, l + 1));
    }
    // BFS from both ends of e_j; the end of e_i reached first is the near one
    let (cj, dj) = oriented[j - 1];
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![(usize::MAX, 0usize); n];
    let mut queue = VecDeque::new();
    for s in [cj, dj] {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &(w, l) in &adj[v] {
            if l != j && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                via[w] = (v, l);
                queue.push_back(w);
            }
        }
    }
    let (ai, bi) = oriented[i - 1];
    if dist[ai] == usize::MAX || dist[bi] == usize::MAX {
        return Err(Error::Domain("edges do not form a tree".into()));
    }
    let near_i = if dist[ai] < dist[bi] { ai } else { bi };
    // path from e_i to e_j: (label, endpoint towards e_j) for each edge
    let mut path = vec![(i, near_i)];
    let mut v = near_i;
    while dist[v] > 0 {
        let (w, l) = via[v];
        path.push((l, w));
        v = w;
    }
    // v is now the end of e_j nearest to e_i
    let mut record = 0;
    let mut record_edges = Vec::new();
    for &(l, toward_j) in &path {
        if l > record {
            record = l;
            record_edges.push((l, toward_j));
        }
    }
    if j <= record {
        return Ok(false);
    }
    let away_from_j = record_edges.iter().all(|&(l, toward_j)| oriented[l - 1].0 == toward_j);
    let j_away_from_i = oriented[j - 1].0 == v;
    Ok(away_from_j && j_away_from_i)
}

/// The same question answered by parking the cars and looking at the route of
/// car `j`.
pub fn car_passes_edge_by_parking(oriented: &[(usize, usize)], i: usize, j: usize) -> Result<bool> {
    let np = redirect_labeled_tree(oriented.len() + 1, oriented)?;
    let spot_i = np.outcome.spots[i - 1].expect("every car parks") as u32;
    let run = park_sequence_with_paths(&np.tree, &np.arrivals)?;
    Ok(run.paths.expect("paths recorded")[j - 1].contains(&spot_i))
}
