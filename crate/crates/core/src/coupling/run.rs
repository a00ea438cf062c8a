//! Building a mapping or a rooted tree from the oriented edge stream so that
//! parking on it follows the frozen process.

use crate::error::{Error, Result};
use crate::frozen::WhiteBlueRule;
use crate::graph::{ComponentTable, OrientedEdge};
use crate::parking::{Mapping, RootedTree};
use crate::rng::{tag, EdgeStream, Prng};

use super::peel::Target;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingKind {
    Tree,
    Mapping,
}

/// Deliberate faults used to check that the verifier notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replay the frozen side with the reversed orientation rule.
    ReverseOrientation,
    /// At this step, send the parked vertex to a vertex of a third component.
    MutateTarget { step: u64 },
}

/// What car `m` did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepTrace {
    /// Parking spot, `None` if the car exited.
    pub spot: Option<usize>,
    /// Target given to the spot.
    pub target: Option<Target>,
    /// The target differs from the head of the edge.
    pub redirected: bool,
}

#[derive(Clone, Debug)]
pub struct CoupledRun {
    pub kind: CouplingKind,
    pub n: usize,
    pub seed: u64,
    /// Rule of the frozen process the run is compared with.
    pub rule: WhiteBlueRule,
    pub edges: Vec<OrientedEdge>,
    pub steps: Vec<StepTrace>,
    /// Step at which every vertex had its target revealed.
    pub completed_at: Option<u64>,
    /// Final targets, complete when `completed_at` is set.
    pub targets: Vec<Option<Target>>,
}

impl CoupledRun {
    pub fn arrivals(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.tail.index()).collect()
    }

    /// Indices (from 1) of the cars that did not park.
    pub fn unparked(&self) -> Vec<u64> {
        (0..self.steps.len()).filter(|&i| self.steps[i].spot.is_none()).map(|i| i as u64 + 1).collect()
    }

    pub fn tree(&self) -> Result<RootedTree> {
        if self.kind != CouplingKind::Tree || self.completed_at.is_none() {
            return Err(Error::Domain("run did not build a complete tree".into()));
        }
        let parents: Vec<Option<usize>> = self
            .targets
            .iter()
            .map(|t| match t {
                Some(Target::Vertex(w)) => Some(*w),
                _ => None,
            })
            .collect();
        RootedTree::new(&parents)
    }

    pub fn mapping(&self) -> Result<Mapping> {
        if self.kind != CouplingKind::Mapping || self.completed_at.is_none() {
            return Err(Error::Domain("run did not build a complete mapping".into()));
        }
        let t: Vec<usize> = self
            .targets
            .iter()
            .map(|t| match t {
                Some(Target::Vertex(w)) => Ok(*w),
                _ => Err(Error::Domain("mapping with a root target".into())),
            })
            .collect::<Result<_>>()?;
        Mapping::new(&t)
    }
}

#[derive(Clone, Debug)]
pub struct CoupleOptions {
    /// Steps to run at least; the run then continues until complete.
    pub m_min: u64,
    pub edge_cap: u64,
    pub fault: Option<Fault>,
}

impl CoupleOptions {
    pub fn new(m_min: u64) -> Self {
        Self { m_min, edge_cap: 0, fault: None }
    }

    fn cap(&self, n: usize) -> u64 {
        if self.edge_cap > 0 {
            return self.edge_cap;
        }
        let nf = n as f64;
        self.m_min.max((40.0 * nf * (nf.ln() + 2.0)) as u64 + 100)
    }
}

/// Forest of revealed targets. Occupied vertices are exactly the revealed ones.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    kind: CouplingKind,
    target: Vec<Option<Target>>,
    table: ComponentTable,
    members: Vec<Vec<u32>>,
    root: Option<usize>,
    revealed: usize,
}

impl Builder {
    pub(crate) fn new(kind: CouplingKind, n: usize) -> Self {
        Self {
            kind,
            target: vec![None; n],
            table: ComponentTable::new(n),
            members: if kind == CouplingKind::Tree { (0..n as u32).map(|v| vec![v]).collect() } else { Vec::new() },
            root: None,
            revealed: 0,
        }
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.revealed == self.target.len()
    }

    pub(crate) fn targets(&self) -> &[Option<Target>] {
        &self.target
    }

    fn trapped(&mut self, v: usize) -> bool {
        let r = self.table.find(v);
        match self.kind {
            CouplingKind::Tree => self.table.root_is_blue(r),
            CouplingKind::Mapping => self.table.root_has_cycle(r),
        }
    }

    /// Parking spot of a car arriving at `x`.
    pub(crate) fn park(&mut self, x: usize) -> Option<usize> {
        if self.trapped(x) {
            return None;
        }
        let mut v = x;
        while let Some(Target::Vertex(w)) = self.target[v] {
            v = w;
        }
        Some(v)
    }

    pub(crate) fn same(&mut self, a: usize, b: usize) -> bool {
        self.table.same(a, b)
    }

    pub(crate) fn has_root(&self) -> bool {
        self.root.is_some()
    }

    pub(crate) fn blue_vertices(&mut self) -> &[u32] {
        match self.root {
            Some(r) => {
                let c = self.table.find(r);
                &self.members[c]
            }
            None => &[],
        }
    }

    /// Target given to `zeta` when the edge points to `y`; `pick` draws the
    /// index of a blue vertex when a cycle has to be redirected.
    pub(crate) fn choose(&mut self, zeta: usize, y: usize, pick: impl FnOnce(usize) -> usize) -> (Target, bool) {
        if self.kind == CouplingKind::Mapping || !self.same(zeta, y) {
            return (Target::Vertex(y), false);
        }
        if !self.has_root() {
            return (Target::Root, true);
        }
        let blue = self.blue_vertices();
        let u = blue[pick(blue.len())] as usize;
        (Target::Vertex(u), true)
    }

    pub(crate) fn attach(&mut self, zeta: usize, t: Target) {
        debug_assert!(self.target[zeta].is_none());
        self.target[zeta] = Some(t);
        self.revealed += 1;
        match t {
            Target::Root => {
                self.root = Some(zeta);
                let r = self.table.find(zeta);
                self.table.set_blue(r);
            }
            Target::Vertex(w) => {
                if let crate::graph::UnionOutcome::Merged { root, absorbed } = self.table.union_unchecked(zeta, w) {
                    if self.kind == CouplingKind::Tree {
                        let moved = std::mem::take(&mut self.members[absorbed]);
                        self.members[root].extend(moved);
                    }
                }
            }
        }
    }
}

fn couple(kind: CouplingKind, n: usize, seed: u64, opts: &CoupleOptions) -> Result<CoupledRun> {
    let mut stream = EdgeStream::new(n, seed)?;
    let mut redirect = Prng::stream(seed, tag::REDIRECT);
    let cap = opts.cap(n);
    let mut b = Builder::new(kind, n);
    let mut edges = Vec::new();
    let mut steps = Vec::new();
    let mut completed_at = None;
    let mut m = 0u64;
    while m < opts.m_min || completed_at.is_none() {
        if m >= cap {
            return Err(Error::Resource(format!("coupling did not complete within {cap} edges")));
        }
        let e = stream.next_edge();
        m += 1;
        let (x, y) = (e.tail.index(), e.head.index());
        let trace = match b.park(x) {
            None => StepTrace { spot: None, target: None, redirected: false },
            Some(zeta) => {
                let (mut t, redirected) = b.choose(zeta, y, |l| redirect.below_usize(l));
                if opts.fault == Some(Fault::MutateTarget { step: m }) {
                    t = mutate(&mut b, zeta, t);
                }
                b.attach(zeta, t);
                StepTrace { spot: Some(zeta), target: Some(t), redirected }
            }
        };
        edges.push(e);
        steps.push(trace);
        if completed_at.is_none() && b.is_complete() {
            completed_at = Some(m);
        }
    }
    let rule = if opts.fault == Some(Fault::ReverseOrientation) {
        WhiteBlueRule::ReverseOrientation
    } else {
        WhiteBlueRule::Orientation
    };
    Ok(CoupledRun { kind, n, seed, rule, edges, steps, completed_at, targets: b.target })
}

/// A vertex in neither the spot's component nor the intended target's, if any.
fn mutate(b: &mut Builder, zeta: usize, t: Target) -> Target {
    let n = b.target.len();
    for w in 0..n {
        let clash = b.same(w, zeta)
            || match t {
                Target::Vertex(u) => b.same(w, u),
                Target::Root => false,
            };
        if !clash {
            return Target::Vertex(w);
        }
    }
    t
}

/// Mapping built from the edge stream: the car parks at `zeta` and `zeta -> Y`
/// is added. Runs at least `opts.m_min` steps and until every vertex has a
/// target.
pub fn couple_mapping(n: usize, seed: u64, opts: &CoupleOptions) -> Result<CoupledRun> {
    couple(CouplingKind::Mapping, n, seed, opts)
}

/// Rooted tree built from the edge stream: as for mappings, except that an edge
/// closing a cycle becomes `zeta -> root` the first time and `zeta -> U` with
/// `U` uniform on the blue tree afterwards.
pub fn couple_tree(n: usize, seed: u64, opts: &CoupleOptions) -> Result<CoupledRun> {
    couple(CouplingKind::Tree, n, seed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let run = couple_tree(1, 5, &CoupleOptions::new(2)).unwrap();
        assert_eq!(run.steps[0].target, Some(Target::Root));
        assert_eq!(run.steps[1].spot, None);
        assert_eq!(run.completed_at, Some(1));
        assert_eq!(run.tree().unwrap().root(), 0);
        let run = couple_mapping(1, 5, &CoupleOptions::new(2)).unwrap();
        assert_eq!(run.steps[0].target, Some(Target::Vertex(0)));
        assert_eq!(run.unparked(), vec![2]);
        assert_eq!(run.mapping().unwrap().targets(), vec![0]);
    }

    #[test]
    fn runs_complete() {
        for seed in 0..20 {
            let run = couple_tree(40, seed, &CoupleOptions::new(10)).unwrap();
            let t = run.tree().unwrap();
            assert_eq!(t.n(), 40);
            assert!(run.steps.len() as u64 >= run.completed_at.unwrap());
            let run = couple_mapping(40, seed, &CoupleOptions::new(10)).unwrap();
            assert_eq!(run.mapping().unwrap().n(), 40);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let opts = CoupleOptions { m_min: 0, edge_cap: 3, fault: None };
        assert!(matches!(couple_tree(50, 1, &opts), Err(Error::Resource(_))));
    }
}
