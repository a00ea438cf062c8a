//! Peeling exploration of a uniform rooted Cayley tree.

use num_rational::BigRational;

use crate::enumerate::rat_small;
use crate::error::{Error, Result};
use crate::graph::ComponentTable;
use crate::parking::RootedTree;
use crate::rng::Prng;

/// Revealed target of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// The vertex is the root of the tree.
    Root,
    Vertex(usize),
}

/// A compatible set of revealed targets. Its forest has white trees, each
/// rooted at the unique vertex with an unrevealed target, and at most one blue
/// tree, the one containing the revealed root.
#[derive(Clone, Debug)]
pub struct InstructionSet {
    target: Vec<Option<Target>>,
    table: ComponentTable,
    root: Option<usize>,
    revealed: usize,
}

impl InstructionSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("instruction set needs n >= 1".into()));
        }
        Ok(Self { target: vec![None; n], table: ComponentTable::new(n), root: None, revealed: 0 })
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self, v: usize) -> Option<Target> {
        self.target[v]
    }

    pub fn targets(&self) -> &[Option<Target>] {
        &self.target
    }

    pub fn revealed(&self) -> usize {
        self.revealed
    }

    pub fn is_complete(&self) -> bool {
        self.revealed == self.n()
    }

    /// Roots of white trees are exactly the vertices with unrevealed target.
    pub fn is_peelable(&self, v: usize) -> bool {
        v < self.n() && self.target[v].is_none()
    }

    pub fn tree_size(&mut self, v: usize) -> usize {
        self.table.size_of(v)
    }

    pub fn blue_size(&mut self) -> usize {
        self.root.map_or(0, |r| self.table.size_of(r))
    }

    pub fn is_blue(&mut self, v: usize) -> bool {
        match self.root {
            Some(r) => self.table.same(r, v),
            None => false,
        }
    }

    /// Adds `v -> t` after checking compatibility.
    pub fn reveal(&mut self, v: usize, t: Target) -> Result<()> {
        if !self.is_peelable(v) {
            return Err(Error::Domain(format!("vertex {v} is not peelable")));
        }
        match t {
            Target::Root => {
                if self.root.is_some() {
                    return Err(Error::Domain("root already revealed".into()));
                }
                self.root = Some(v);
            }
            Target::Vertex(w) => {
                if w >= self.n() {
                    return Err(Error::Index(format!("target {w} with n = {}", self.n())));
                }
                if self.table.same(v, w) {
                    return Err(Error::Domain(format!("{v} -> {w} closes a cycle")));
                }
                self.table.union_unchecked(v, w);
            }
        }
        self.target[v] = Some(t);
        self.revealed += 1;
        Ok(())
    }

    /// Law of the target of the peeled vertex `v`: with `k` the size of its tree
    /// and `l` that of the blue tree, the root with probability `k/n` when
    /// `l = 0`, a uniform blue vertex with probability `(l+k)/n` when `l >= 1`,
    /// otherwise a uniform vertex outside those trees.
    pub fn peel_distribution(&mut self, v: usize) -> Result<Vec<(Target, BigRational)>> {
        if !self.is_peelable(v) {
            return Err(Error::Domain(format!("vertex {v} is not peelable")));
        }
        let n = self.n();
        let k = self.tree_size(v);
        let l = self.blue_size();
        let mut out = Vec::new();
        if l == 0 {
            out.push((Target::Root, rat_small(k as i64, n as i64)));
        }
        for w in 0..n {
            if self.table.same(v, w) {
                continue;
            }
            let p = if l > 0 && self.is_blue(w) {
                rat_small((l + k) as i64, (n * l) as i64)
            } else {
                rat_small(1, n as i64)
            };
            out.push((Target::Vertex(w), p));
        }
        Ok(out)
    }

    /// Samples the target of `v` from `peel_distribution` and reveals it.
    pub fn peel_step(&mut self, v: usize, rng: &mut Prng) -> Result<Target> {
        if !self.is_peelable(v) {
            return Err(Error::Domain(format!("vertex {v} is not peelable")));
        }
        let n = self.n();
        let k = self.tree_size(v);
        let l = self.blue_size();
        let r = rng.below_usize(n);
        let t = if l == 0 {
            if r < k {
                Target::Root
            } else {
                Target::Vertex(self.rejection(rng, |s, w| !s.table.same(v, w)))
            }
        } else if r < l + k {
            Target::Vertex(self.rejection(rng, |s, w| s.is_blue(w)))
        } else {
            Target::Vertex(self.rejection(rng, |s, w| !s.table.same(v, w) && !s.is_blue(w)))
        };
        self.reveal(v, t)?;
        Ok(t)
    }

    fn rejection(&mut self, rng: &mut Prng, mut accept: impl FnMut(&mut Self, usize) -> bool) -> usize {
        loop {
            let w = rng.below_usize(self.n());
            if accept(self, w) {
                return w;
            }
        }
    }

    pub fn to_tree(&self) -> Result<RootedTree> {
        if !self.is_complete() {
            return Err(Error::Domain("exploration not complete".into()));
        }
        let parents: Vec<Option<usize>> = self
            .target
            .iter()
            .map(|t| match t {
                Some(Target::Vertex(w)) => Some(*w),
                _ => None,
            })
            .collect();
        RootedTree::new(&parents)
    }
}
