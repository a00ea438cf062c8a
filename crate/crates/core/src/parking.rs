//! Parking on rooted trees and mappings, flux accounting, and the strong, full
//! and near component decompositions.
//!
//! Vertices are 0-based here; cars are numbered from 1 in arrival order.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::coupling::sample_nearly_parked;
use crate::error::{Error, Result};
use crate::graph::ComponentTable;
use crate::numerics::uniform_cayley_tree;
use crate::rng::{derive_seed, Prng};

const NONE: u32 = u32::MAX;

/// Rooted tree on `0..n` with edges oriented towards the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    parent: Vec<u32>,
    root: usize,
}

impl RootedTree {
    /// From a parent array with exactly one `None` (the root).
    pub fn new(parent: &[Option<usize>]) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidSize("tree needs n >= 1".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Domain(format!("{} roots in parent array", roots.len())));
        }
        let mut raw = vec![NONE; n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::Index(format!("parent {p} of {v} with n = {n}")));
                }
                raw[v] = p as u32;
            }
        }
        let tree = Self { parent: raw, root: roots[0] };
        // every vertex must reach the root
        let depths = tree.depths_checked();
        if depths.iter().any(|d| d.is_none()) {
            return Err(Error::Domain("parent array contains a cycle".into()));
        }
        Ok(tree)
    }

    /// Orients the tree with edge list `edges` towards `root`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if n == 0 || root >= n || edges.len() + 1 != n {
            return Err(Error::Domain(format!("{} edges and root {root} for n = {n}", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Index(format!("edge ({a}, {b}) with n = {n}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![NONE; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v as u32;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Domain("edges do not span a tree".into()));
        }
        Ok(Self { parent, root })
    }

    /// Uniform rooted Cayley tree: a Prüfer tree and an independent uniform root.
    pub fn uniform(n: usize, rng: &mut Prng) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("tree needs n >= 1".into()));
        }
        let edges = uniform_cayley_tree(n, rng);
        let root = rng.below_usize(n);
        Self::from_edges(n, &edges, root)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        (0..self.n()).map(|v| self.parent(v)).collect()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for v in 0..self.n() {
            if let Some(p) = self.parent(v) {
                out[p].push(v);
            }
        }
        out
    }

    fn depths_checked(&self) -> Vec<Option<u32>> {
        let n = self.n();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if self.parent[v] != NONE {
                children[self.parent[v] as usize].push(v);
            }
        }
        let mut depth = vec![None; n];
        depth[self.root] = Some(0);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            let d = depth[v].unwrap();
            for &c in &children[v] {
                depth[c] = Some(d + 1);
                stack.push(c);
            }
        }
        depth
    }

    /// Graph distance of every vertex to the root.
    pub fn depths(&self) -> Vec<u32> {
        self.depths_checked().into_iter().map(|d| d.expect("valid tree")).collect()
    }

    /// Unoriented edges `(child, parent)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).filter_map(|v| self.parent(v).map(|p| (v, p))).collect()
    }
}

/// Mapping `sigma` of `0..n` into itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mapping {
    target: Vec<u32>,
}

impl Mapping {
    pub fn new(target: &[usize]) -> Result<Self> {
        let n = target.len();
        if n == 0 {
            return Err(Error::InvalidSize("mapping needs n >= 1".into()));
        }
        if let Some(&t) = target.iter().find(|&&t| t >= n) {
            return Err(Error::Index(format!("target {t} with n = {n}")));
        }
        Ok(Self { target: target.iter().map(|&t| t as u32).collect() })
    }

    pub fn uniform(n: usize, rng: &mut Prng) -> Result<Self> {
        let t: Vec<usize> = (0..n).map(|_| rng.below_usize(n)).collect();
        Self::new(&t)
    }

    /// The tree with the root sent to itself.
    pub fn from_tree(tree: &RootedTree) -> Self {
        Self { target: (0..tree.n()).map(|v| tree.parent(v).unwrap_or(v) as u32).collect() }
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    #[inline]
    pub fn target(&self, v: usize) -> usize {
        self.target[v] as usize
    }

    pub fn targets(&self) -> Vec<usize> {
        self.target.iter().map(|&t| t as usize).collect()
    }
}

/// Result of parking a sequence of cars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParkingOutcome {
    /// Car (1-based) parked on each vertex.
    pub occupant: Vec<Option<u32>>,
    /// Cars that traversed the edge leaving each vertex.
    pub flux: Vec<u64>,
    /// Cars that did not park, in arrival order.
    pub unparked: Vec<u32>,
    pub total_distance: u64,
    /// Parking spot of every car, `None` if it exited.
    pub spots: Vec<Option<u32>>,
    /// Per car, the vertices whose outgoing edge it traversed (heavy mode only).
    pub paths: Option<Vec<Vec<u32>>>,
}

impl ParkingOutcome {
    fn empty(n: usize, cars: usize, with_paths: bool) -> Self {
        Self {
            occupant: vec![None; n],
            flux: vec![0; n],
            unparked: Vec::new(),
            total_distance: 0,
            spots: Vec::with_capacity(cars),
            paths: with_paths.then(|| Vec::with_capacity(cars)),
        }
    }

    pub fn parked(&self) -> usize {
        self.occupant.iter().filter(|o| o.is_some()).count()
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.occupant[v].is_some()
    }

    /// Occupied vertices as a bitmap.
    pub fn occupied_set(&self) -> Vec<bool> {
        self.occupant.iter().map(|o| o.is_some()).collect()
    }
}

fn check_arrivals(n: usize, arrivals: &[usize]) -> Result<()> {
    if let Some(&a) = arrivals.iter().find(|&&a| a >= n) {
        return Err(Error::Index(format!("arrival {a} with n = {n}")));
    }
    Ok(())
}

fn park_tree_impl(tree: &RootedTree, arrivals: &[usize], with_paths: bool) -> Result<ParkingOutcome> {
    let n = tree.n();
    check_arrivals(n, arrivals)?;
    let mut out = ParkingOutcome::empty(n, arrivals.len(), with_paths);
    for (i, &x) in arrivals.iter().enumerate() {
        let car = i as u32 + 1;
        let mut v = x;
        let mut path = Vec::new();
        let spot = loop {
            if out.occupant[v].is_none() {
                break Some(v);
            }
            match tree.parent(v) {
                Some(p) => {
                    out.flux[v] += 1;
                    out.total_distance += 1;
                    if with_paths {
                        path.push(v as u32);
                    }
                    v = p;
                }
                None => break None,
            }
        };
        match spot {
            Some(s) => out.occupant[s] = Some(car),
            None => out.unparked.push(car),
        }
        out.spots.push(spot.map(|s| s as u32));
        if let Some(paths) = out.paths.as_mut() {
            paths.push(path);
        }
    }
    Ok(out)
}

/// Parks the cars one after the other: each takes the first free vertex on its
/// way to the root, and exits if the root is occupied.
pub fn park_sequence(tree: &RootedTree, arrivals: &[usize]) -> Result<ParkingOutcome> {
    park_tree_impl(tree, arrivals, false)
}

/// As `park_sequence`, also recording every car's route.
pub fn park_sequence_with_paths(tree: &RootedTree, arrivals: &[usize]) -> Result<ParkingOutcome> {
    park_tree_impl(tree, arrivals, true)
}

/// Parking on a mapping. A car that comes back to a vertex it already visited
/// is trapped in a loop and exits; every edge it traversed counts once.
pub fn park_on_mapping(map: &Mapping, arrivals: &[usize]) -> Result<ParkingOutcome> {
    let n = map.n();
    check_arrivals(n, arrivals)?;
    let mut out = ParkingOutcome::empty(n, arrivals.len(), false);
    // last car that visited each vertex
    let mut stamp = vec![0u32; n];
    for (i, &x) in arrivals.iter().enumerate() {
        let car = i as u32 + 1;
        let mut v = x;
        let spot = loop {
            if out.occupant[v].is_none() {
                break Some(v);
            }
            if stamp[v] == car {
                break None;
            }
            stamp[v] = car;
            out.flux[v] += 1;
            out.total_distance += 1;
            v = map.target(v);
        };
        match spot {
            Some(s) => out.occupant[s] = Some(car),
            None => out.unparked.push(car),
        }
        out.spots.push(spot.map(|s| s as u32));
    }
    Ok(out)
}

/// Which edges define the components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// Edges with positive flux.
    Strong,
    /// Edges between two occupied vertices.
    Full,
    /// Edges leaving an occupied vertex.
    Near,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertices.
    pub vertices: Vec<usize>,
    /// Cars parked inside, sorted.
    pub cars: Vec<u32>,
    pub contains_root: bool,
}

#[derive(Clone, Debug)]
pub struct ComponentDecomposition {
    pub kind: ComponentKind,
    /// Smallest vertex of each vertex's component.
    pub labels: Vec<usize>,
    /// Whether the edge leaving each vertex is kept.
    pub kept: Vec<bool>,
    pub root_is_blue: bool,
    /// Components ordered by smallest vertex.
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    /// Component sizes, non-increasing, optionally without the root component.
    pub fn sizes(&self, include_root: bool) -> Vec<usize> {
        let mut s: Vec<usize> =
            self.components.iter().filter(|c| include_root || !c.contains_root).map(|c| c.vertices.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn root_component(&self) -> &Component {
        self.components.iter().find(|c| c.contains_root).expect("root component")
    }
}

/// Splits the tree into strong, full or near components. The root component is
/// blue when it is not itself a parked tree of the kind: for near components
/// when the root is occupied, otherwise when cars left through the root.
pub fn decompose(tree: &RootedTree, outcome: &ParkingOutcome, kind: ComponentKind) -> Result<ComponentDecomposition> {
    let n = tree.n();
    if outcome.occupant.len() != n || outcome.flux.len() != n {
        return Err(Error::Domain(format!(
            "outcome over {} vertices does not match a tree on {n}",
            outcome.occupant.len()
        )));
    }
    let occ = |v: usize| outcome.occupant[v].is_some();
    let kept: Vec<bool> = (0..n)
        .map(|v| match tree.parent(v) {
            None => false,
            Some(p) => match kind {
                ComponentKind::Strong => outcome.flux[v] > 0,
                ComponentKind::Full => occ(v) && occ(p),
                ComponentKind::Near => occ(v),
            },
        })
        .collect();
    let mut table = ComponentTable::new(n);
    for v in 0..n {
        if kept[v] {
            table.union_unchecked(v, tree.parent(v).unwrap());
        }
    }
    let labels = table.canonical_labels();
    let mut index_of = vec![usize::MAX; n];
    let mut components: Vec<Component> = Vec::new();
    for v in 0..n {
        let l = labels[v];
        if index_of[l] == usize::MAX {
            index_of[l] = components.len();
            components.push(Component { vertices: Vec::new(), cars: Vec::new(), contains_root: false });
        }
        let c = &mut components[index_of[l]];
        c.vertices.push(v);
        if let Some(car) = outcome.occupant[v] {
            c.cars.push(car);
        }
        if v == tree.root() {
            c.contains_root = true;
        }
    }
    for c in components.iter_mut() {
        c.cars.sort_unstable();
    }
    let root_is_blue = match kind {
        ComponentKind::Near => occ(tree.root()),
        ComponentKind::Full | ComponentKind::Strong => !outcome.unparked.is_empty(),
    };
    Ok(ComponentDecomposition { kind, labels, kept, root_is_blue, components })
}

/// Tree of strong components of a nearly parked tree: disks are the vertices,
/// squares the strong components. A square hangs below the disk its component
/// drains into and has the component's vertices as children.
#[derive(Clone, Debug)]
pub struct BitypeTree {
    pub root: usize,
    pub disk_children: Vec<Vec<usize>>,
    /// Parent disk and member vertices of each square.
    pub squares: Vec<(usize, Vec<usize>)>,
}

impl BitypeTree {
    pub fn disk_count(&self) -> usize {
        self.disk_children.len()
    }

    /// Children counts of the squares, sorted.
    pub fn square_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.squares.iter().map(|s| s.1.len()).collect();
        d.sort_unstable();
        d
    }

    /// Label-free canonical form: `(...)` for disks and `[...]` for squares,
    /// children sorted.
    pub fn shape(&self) -> String {
        self.disk_shape(self.root)
    }

    fn disk_shape(&self, d: usize) -> String {
        let mut parts: Vec<String> = self.disk_children[d].iter().map(|&s| self.square_shape(s)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }

    fn square_shape(&self, s: usize) -> String {
        let mut parts: Vec<String> = self.squares[s].1.iter().map(|&d| self.disk_shape(d)).collect();
        parts.sort();
        format!("[{}]", parts.concat())
    }
}

pub fn bitype_decompose(tree: &RootedTree, outcome: &ParkingOutcome) -> Result<BitypeTree> {
    let n = tree.n();
    if outcome.occupant.len() != n
        || !outcome.unparked.is_empty()
        || outcome.is_occupied(tree.root())
        || outcome.parked() != n - 1
    {
        return Err(Error::Domain("bitype decomposition needs a nearly parked tree".into()));
    }
    let strong = decompose(tree, outcome, ComponentKind::Strong)?;
    let mut disk_children = vec![Vec::new(); n];
    let mut squares = Vec::new();
    for c in strong.components.iter().filter(|c| !c.contains_root) {
        // the bottom vertex is the one whose outgoing edge carries no flux
        let bottom = *c.vertices.iter().find(|&&v| !strong.kept[v]).expect("component bottom");
        let below = tree.parent(bottom).expect("non-root vertex");
        disk_children[below].push(squares.len());
        squares.push((below, c.vertices.clone()));
    }
    Ok(BitypeTree { root: tree.root(), disk_children, squares })
}

/// Largest full and strong components of uniform nearly parked trees.
#[derive(Clone, Debug)]
pub struct CondensationSummary {
    pub n: usize,
    pub samples: usize,
    pub mean_full: f64,
    pub mean_strong: f64,
    pub mean_second_full: f64,
    pub mean_second_strong: f64,
    /// Quantiles 0.1, 0.5, 0.9 of the largest full component over `n`.
    pub full_quantiles: [f64; 3],
    pub strong_quantiles: [f64; 3],
}

fn quantiles(mut v: Vec<f64>) -> [f64; 3] {
    v.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    [q(0.1), q(0.5), q(0.9)]
}

/// Sample `i` uses seed `derive_seed(seed, i)`.
pub fn condensation_stats(n: usize, samples: usize, seed: u64) -> Result<CondensationSummary> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let rows: Vec<Result<[usize; 4]>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_nearly_parked(n, derive_seed(seed, i as u64))?;
            let full = decompose(&s.tree, &s.outcome, ComponentKind::Full)?.sizes(false);
            let strong = decompose(&s.tree, &s.outcome, ComponentKind::Strong)?.sizes(false);
            // the root is empty, so its full and strong components are singletons
            let top = |v: &[usize], k: usize| v.get(k).copied().unwrap_or(0);
            Ok([top(&full, 0), top(&full, 1), top(&strong, 0), top(&strong, 1)])
        })
        .collect();
    let rows: Vec<[usize; 4]> = rows.into_iter().collect::<Result<_>>()?;
    let nf = n as f64;
    let mean = |k: usize| rows.iter().map(|r| r[k] as f64).sum::<f64>() / (samples as f64 * nf);
    Ok(CondensationSummary {
        n,
        samples,
        mean_full: mean(0),
        mean_second_full: mean(1),
        mean_strong: mean(2),
        mean_second_strong: mean(3),
        full_quantiles: quantiles(rows.iter().map(|r| r[0] as f64 / nf).collect()),
        strong_quantiles: quantiles(rows.iter().map(|r| r[2] as f64 / nf).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tree(parents: &[Option<usize>]) -> RootedTree {
        RootedTree::new(parents).unwrap()
    }

    /// The 11-vertex example with nine cars; labels shifted down by one.
    fn example_tree() -> (RootedTree, Vec<usize>) {
        let p = [None, Some(0), Some(0), Some(2), Some(2), Some(2), Some(3), Some(3), Some(5), Some(1), Some(1)];
        let arrivals = [5, 2, 5, 2, 9, 7, 6, 2, 9].iter().map(|x| x - 1).collect();
        (tree(&p), arrivals)
    }

    #[test]
    fn two_vertex_examples() {
        let t = tree(&[None, Some(0)]);
        let o = park_sequence(&t, &[1]).unwrap();
        assert_eq!(o.occupant, vec![None, Some(1)]);
        assert!(o.unparked.is_empty());
        let o = park_sequence(&t, &[0, 0]).unwrap();
        assert_eq!(o.unparked, vec![2]);
        assert_eq!(o.flux, vec![0, 0]);
    }

    #[test]
    fn eleven_vertex_example() {
        let (t, a) = example_tree();
        let o = park_sequence(&t, &a).unwrap();
        assert_eq!(o.unparked, vec![8, 9]);
        assert_eq!(o.total_distance, 6);
        let mut flux: Vec<(usize, u64)> = (0..11).filter(|&v| o.flux[v] > 0).map(|v| (v + 1, o.flux[v])).collect();
        flux.sort();
        assert_eq!(flux, vec![(2, 2), (3, 1), (5, 1), (6, 1), (9, 1)]);
    }

    #[test]
    fn invalid_trees_rejected() {
        assert!(RootedTree::new(&[None, None]).is_err());
        assert!(RootedTree::new(&[None, Some(2), Some(1)]).is_err());
        assert!(RootedTree::new(&[None, Some(5)]).is_err());
        assert!(park_sequence(&tree(&[None]), &[1]).is_err());
    }

    #[test]
    fn mapping_examples() {
        let m = Mapping::new(&[0]).unwrap();
        let o = park_on_mapping(&m, &[0, 0]).unwrap();
        assert_eq!(o.unparked, vec![2]);
        // 2-cycle {0, 1} with pendant 2 -> 0
        let m = Mapping::new(&[1, 0, 0]).unwrap();
        let o = park_on_mapping(&m, &[0, 1, 0]).unwrap();
        assert_eq!(o.unparked, vec![3]);
        assert_eq!(o.flux, vec![1, 1, 0]);
        let o = park_on_mapping(&m, &[0, 1, 2, 2]).unwrap();
        assert_eq!(o.unparked, vec![4]);
        assert_eq!(o.flux, vec![1, 1, 1]);
    }

    #[test]
    fn mapping_from_tree_matches_tree_parking() {
        let mut rng = Prng::new(3);
        for _ in 0..200 {
            let t = RootedTree::uniform(12, &mut rng).unwrap();
            let arrivals: Vec<usize> = (0..6).map(|_| rng.below_usize(12)).collect();
            let a = park_sequence(&t, &arrivals).unwrap();
            if a.is_occupied(t.root()) && !a.unparked.is_empty() {
                continue;
            }
            let b = park_on_mapping(&Mapping::from_tree(&t), &arrivals).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn decompositions_basic() {
        let t = tree(&[None, Some(0), Some(1)]);
        let o = park_sequence(&t, &[]).unwrap();
        for kind in [ComponentKind::Strong, ComponentKind::Full, ComponentKind::Near] {
            let d = decompose(&t, &o, kind).unwrap();
            assert_eq!(d.components.len(), 3);
            assert!(!d.root_is_blue);
        }
        let o = park_sequence(&t, &[2]).unwrap();
        let d = decompose(&t, &o, ComponentKind::Near).unwrap();
        assert_eq!(d.sizes(true), vec![2, 1]);
        let bad = park_sequence(&tree(&[None, Some(0)]), &[1]).unwrap();
        assert!(decompose(&t, &bad, ComponentKind::Near).is_err());
    }

    #[test]
    fn example_decompositions() {
        let (t, a) = example_tree();
        let o = park_sequence(&t, &a).unwrap();
        let near = decompose(&t, &o, ComponentKind::Near).unwrap();
        let full = decompose(&t, &o, ComponentKind::Full).unwrap();
        let strong = decompose(&t, &o, ComponentKind::Strong).unwrap();
        assert!(near.root_is_blue && full.root_is_blue && strong.root_is_blue);
        // occupied: 1, 2, 3, 5, 6, 7, 9 (1-based)
        assert_eq!(near.root_component().vertices, vec![0, 1, 2, 4, 5, 8]);
        assert_eq!(strong.root_component().vertices, vec![0, 1, 2, 4, 5, 8]);
        assert_eq!(full.root_component().vertices, vec![0, 1, 2, 4, 5, 8]);
        assert_eq!(near.sizes(false), vec![2, 1, 1, 1]);
    }

    #[test]
    fn bitype_small_cases() {
        let single = tree(&[None]);
        let o = park_sequence(&single, &[]).unwrap();
        let b = bitype_decompose(&single, &o).unwrap();
        assert_eq!(b.shape(), "()");
        let path = tree(&[None, Some(0)]);
        let o = park_sequence(&path, &[1]).unwrap();
        assert_eq!(bitype_decompose(&path, &o).unwrap().shape(), "([()])");
        let o = park_sequence(&path, &[0]).unwrap();
        assert!(bitype_decompose(&path, &o).is_err());
    }

    #[test]
    fn bitype_with_chain() {
        // path 0 <- 1 <- 2 <- 3, cars at 3, 3, 1: vertices 3 and 2 form one strong
        // component, 1 a second one below it
        let t = tree(&[None, Some(0), Some(1), Some(2)]);
        let o = park_sequence(&t, &[3, 3, 1]).unwrap();
        let b = bitype_decompose(&t, &o).unwrap();
        assert_eq!(b.square_degrees(), vec![1, 2]);
        assert_eq!(b.shape(), "([([()()])])");
    }

    #[test]
    fn condensation_two_vertices() {
        let s = condensation_stats(2, 20, 1).unwrap();
        assert_eq!(s.mean_full, 0.5);
        assert_eq!(s.mean_strong, 0.5);
    }

    fn nested(a: &ComponentDecomposition, b: &ComponentDecomposition) -> bool {
        a.kept.iter().zip(&b.kept).all(|(x, y)| !x || *y)
    }

    proptest! {
        #[test]
        fn abelian_and_conservation(seed in any::<u64>(), n in 1usize..40, cars in 0usize..60) {
            let mut rng = Prng::new(seed);
            let t = RootedTree::uniform(n, &mut rng).unwrap();
            let mut arrivals: Vec<usize> = (0..cars).map(|_| rng.below_usize(n)).collect();
            let a = park_sequence(&t, &arrivals).unwrap();
            prop_assert_eq!(a.parked() + a.unparked.len(), cars);
            prop_assert_eq!(a.total_distance, a.flux.iter().sum::<u64>());
            rng.shuffle(&mut arrivals);
            let b = park_sequence(&t, &arrivals).unwrap();
            prop_assert_eq!(a.occupied_set(), b.occupied_set());
            prop_assert_eq!(&a.flux, &b.flux);
            prop_assert_eq!(a.unparked.len(), b.unparked.len());
        }

        #[test]
        fn components_are_nested(seed in any::<u64>(), n in 1usize..40, cars in 0usize..60) {
            let mut rng = Prng::new(seed);
            let t = RootedTree::uniform(n, &mut rng).unwrap();
            let arrivals: Vec<usize> = (0..cars).map(|_| rng.below_usize(n)).collect();
            let o = park_sequence(&t, &arrivals).unwrap();
            let s = decompose(&t, &o, ComponentKind::Strong).unwrap();
            let f = decompose(&t, &o, ComponentKind::Full).unwrap();
            let nr = decompose(&t, &o, ComponentKind::Near).unwrap();
            prop_assert!(nested(&s, &f));
            prop_assert!(nested(&f, &nr));
        }

        #[test]
        fn mapping_conservation(seed in any::<u64>(), n in 1usize..30, cars in 0usize..50) {
            let mut rng = Prng::new(seed);
            let m = Mapping::uniform(n, &mut rng).unwrap();
            let arrivals: Vec<usize> = (0..cars).map(|_| rng.below_usize(n)).collect();
            let o = park_on_mapping(&m, &arrivals).unwrap();
            prop_assert_eq!(o.parked() + o.unparked.len(), cars);
            prop_assert!(o.flux.iter().all(|&f| f as usize <= cars));
        }
    }
}
