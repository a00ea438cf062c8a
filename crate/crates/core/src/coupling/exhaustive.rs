//! Exact laws of the constructed trees and mappings for tiny `n`, as rationals.
//!
//! States are target vectors. Steps where the car exits leave the state
//! unchanged; they are conditioned out when completing a state, which is
//! exact because the state eventually changes with probability one.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::enumerate::{rat_small, rooted_trees};
use crate::error::{Error, Result};
use crate::parking::{park_sequence, RootedTree};

use super::nearly::redirect_labeled_tree;
use super::peel::{InstructionSet, Target};
use super::run::CouplingKind;

type State = Vec<Option<Target>>;
pub type Law<K> = BTreeMap<K, BigRational>;

const MAX_N: usize = 4;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidSize(format!("exhaustive laws are for 1 <= n <= {MAX_N}, got {n}")));
    }
    Ok(())
}

enum Sink {
    White(usize),
    Trapped,
}

fn sink(kind: CouplingKind, s: &State, x: usize) -> Sink {
    let mut v = x;
    for _ in 0..=s.len() {
        match s[v] {
            None => return Sink::White(v),
            Some(Target::Root) => return Sink::Trapped,
            Some(Target::Vertex(w)) => v = w,
        }
    }
    debug_assert!(kind == CouplingKind::Mapping);
    Sink::Trapped
}

/// Successor states of a car at `x` with edge head `y`, `None` if the car exits.
fn step(kind: CouplingKind, s: &State, x: usize, y: usize) -> Option<Vec<(State, BigRational)>> {
    let zeta = match sink(kind, s, x) {
        Sink::Trapped => return None,
        Sink::White(z) => z,
    };
    let cycle = matches!(sink(kind, s, y), Sink::White(z) if z == zeta);
    let with = |t: Target| {
        let mut next = s.clone();
        next[zeta] = Some(t);
        next
    };
    if kind == CouplingKind::Mapping || !cycle {
        return Some(vec![(with(Target::Vertex(y)), BigRational::one())]);
    }
    let blue: Vec<usize> = (0..s.len()).filter(|&v| matches!(sink(kind, s, v), Sink::Trapped)).collect();
    if blue.is_empty() {
        return Some(vec![(with(Target::Root), BigRational::one())]);
    }
    let w = rat_small(1, blue.len() as i64);
    Some(blue.into_iter().map(|u| (with(Target::Vertex(u)), w.clone())).collect())
}

fn add(law: &mut Law<State>, k: State, p: BigRational) {
    let e = law.entry(k).or_insert_with(BigRational::zero);
    *e += p;
}

/// Law of the final state started from `s` with i.i.d. uniform edges.
fn complete(kind: CouplingKind, s: &State, memo: &mut HashMap<State, Law<State>>) -> Law<State> {
    if s.iter().all(|t| t.is_some()) {
        return Law::from([(s.clone(), BigRational::one())]);
    }
    if let Some(l) = memo.get(s) {
        return l.clone();
    }
    let n = s.len();
    let w = rat_small(1, (n * n) as i64);
    let mut stay = BigRational::zero();
    let mut out = Law::new();
    for x in 0..n {
        for y in 0..n {
            match step(kind, s, x, y) {
                None => stay += &w,
                Some(next) => {
                    for (t, q) in next {
                        for (fin, r) in complete(kind, &t, memo) {
                            add(&mut out, fin, &w * &q * r);
                        }
                    }
                }
            }
        }
    }
    let norm = BigRational::one() - stay;
    for p in out.values_mut() {
        *p /= &norm;
    }
    memo.insert(s.clone(), out.clone());
    out
}

fn law_given_arrivals(kind: CouplingKind, n: usize, arrivals: &[usize]) -> Result<Law<State>> {
    check_n(n)?;
    if let Some(&x) = arrivals.iter().find(|&&x| x >= n) {
        return Err(Error::Index(format!("arrival {x} with n = {n}")));
    }
    let mut current = Law::from([(vec![None; n], BigRational::one())]);
    let w = rat_small(1, n as i64);
    for &x in arrivals {
        let mut next = Law::new();
        for (s, p) in current {
            for y in 0..n {
                match step(kind, &s, x, y) {
                    None => add(&mut next, s.clone(), &p * &w),
                    Some(succ) => {
                        for (t, q) in succ {
                            add(&mut next, t, &p * &w * q);
                        }
                    }
                }
            }
        }
        current = next;
    }
    let mut memo = HashMap::new();
    let mut out = Law::new();
    for (s, p) in current {
        for (fin, r) in complete(kind, &s, &mut memo) {
            add(&mut out, fin, &p * r);
        }
    }
    Ok(out)
}

/// Exact law of the tree built by the tree coupling when the first cars arrive
/// at `arrivals` and all later edges are uniform. Keys are parent arrays.
pub fn tree_law_given_arrivals(n: usize, arrivals: &[usize]) -> Result<Law<Vec<Option<usize>>>> {
    let law = law_given_arrivals(CouplingKind::Tree, n, arrivals)?;
    Ok(law
        .into_iter()
        .map(|(s, p)| {
            let parents = s.iter().map(|t| match t {
                Some(Target::Vertex(w)) => Some(*w),
                _ => None,
            });
            (parents.collect(), p)
        })
        .collect())
}

/// As [`tree_law_given_arrivals`] for the mapping coupling.
pub fn mapping_law_given_arrivals(n: usize, arrivals: &[usize]) -> Result<Law<Vec<usize>>> {
    let law = law_given_arrivals(CouplingKind::Mapping, n, arrivals)?;
    Ok(law
        .into_iter()
        .map(|(s, p)| {
            let t = s.iter().map(|t| match t {
                Some(Target::Vertex(w)) => *w,
                _ => unreachable!("mappings have no root"),
            });
            (t.collect(), p)
        })
        .collect())
}

/// Which vertex a deterministic peeling algorithm explores next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeelOrder {
    Smallest,
    Largest,
    /// Root of the largest white tree, ties to the smallest label.
    LargestTree,
}

fn next_vertex(s: &mut InstructionSet, order: PeelOrder) -> usize {
    let open: Vec<usize> = (0..s.n()).filter(|&v| s.is_peelable(v)).collect();
    match order {
        PeelOrder::Smallest => open[0],
        PeelOrder::Largest => *open.last().unwrap(),
        PeelOrder::LargestTree => {
            let mut best = open[0];
            for &v in &open {
                if s.tree_size(v) > s.tree_size(best) {
                    best = v;
                }
            }
            best
        }
    }
}

/// Exact law of the tree revealed by peeling with a fixed algorithm.
pub fn peel_law(n: usize, order: PeelOrder) -> Result<Law<Vec<Option<usize>>>> {
    check_n(n)?;
    let mut out = Law::new();
    let mut stack = vec![(InstructionSet::new(n)?, BigRational::one())];
    while let Some((mut s, p)) = stack.pop() {
        if s.is_complete() {
            let e = out.entry(s.to_tree()?.parents()).or_insert_with(BigRational::zero);
            *e += p;
            continue;
        }
        let v = next_vertex(&mut s, order);
        for (t, q) in s.peel_distribution(v)? {
            let mut next = s.clone();
            next.reveal(v, t)?;
            stack.push((next, &p * q));
        }
    }
    Ok(out)
}

/// Image of all (tree, labeling, orientation) triples under the redirection
/// construction, with multiplicities, next to the nearly parked configurations
/// found by parking every arrival sequence on every rooted tree.
#[derive(Clone, Debug)]
pub struct NearlyParkedCensus {
    pub constructed: BTreeMap<(Vec<Option<usize>>, Vec<usize>), u64>,
    pub direct: Vec<(Vec<Option<usize>>, Vec<usize>)>,
}

impl NearlyParkedCensus {
    /// Every configuration is produced exactly once.
    pub fn is_bijective(&self) -> bool {
        self.constructed.len() == self.direct.len()
            && self.constructed.values().all(|&c| c == 1)
            && self.direct.iter().all(|k| self.constructed.contains_key(k))
    }

    pub fn inputs(&self) -> u64 {
        self.constructed.values().sum()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

pub fn nearly_parked_census(n: usize) -> Result<NearlyParkedCensus> {
    check_n(n)?;
    let trees = rooted_trees(n);
    let mut constructed = BTreeMap::new();
    // each unrooted tree once, as the rooted tree with root 0
    for parents in trees.iter().filter(|p| p[0].is_none()) {
        let edges: Vec<(usize, usize)> = (0..n).filter_map(|v| parents[v].map(|p| (v, p))).collect();
        for perm in permutations(n - 1) {
            for mask in 0..1u32 << (n - 1) {
                let mut oriented = vec![(0, 0); n - 1];
                for (e, &slot) in perm.iter().enumerate() {
                    let (a, b) = edges[e];
                    oriented[slot] = if mask >> e & 1 == 1 { (a, b) } else { (b, a) };
                }
                let np = redirect_labeled_tree(n, &oriented)?;
                *constructed.entry((np.tree.parents(), np.arrivals)).or_insert(0) += 1;
            }
        }
    }
    let mut direct = Vec::new();
    for parents in &trees {
        let tree = RootedTree::new(parents)?;
        let mut arrivals = vec![0usize; n - 1];
        loop {
            let o = park_sequence(&tree, &arrivals)?;
            if o.unparked.is_empty() && !o.is_occupied(tree.root()) {
                direct.push((parents.clone(), arrivals.clone()));
            }
            let mut i = 0;
            while i < arrivals.len() {
                arrivals[i] += 1;
                if arrivals[i] < n {
                    break;
                }
                arrivals[i] = 0;
                i += 1;
            }
            if i == arrivals.len() {
                break;
            }
        }
    }
    Ok(NearlyParkedCensus { constructed, direct })
}

/// Whether a law gives the same mass `1/count` to exactly `count` outcomes.
pub fn is_uniform<K>(law: &Law<K>, count: usize) -> bool {
    let w = rat_small(1, count as i64);
    law.len() == count && law.values().all(|p| *p == w)
}

/// All arrival prefixes over `0..n` of length at most `max_len`.
pub fn arrival_prefixes(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for x in 0..n {
                let mut q: Vec<usize> = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
