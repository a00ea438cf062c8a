//! Union-find substrate for the graph processes.
//!
//! Vertices are numbered `1..=n` at the interface ([`VertexId`]) and
//! `0..n` inside every array.

use std::fmt;

use crate::error::{Error, Result};

/// A vertex label in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    pub fn new(label: u32) -> Result<Self> {
        if label == 0 {
            return Err(Error::Index("vertex labels start at 1".into()));
        }
        Ok(Self(label))
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        Self(index as u32 + 1)
    }

    /// The 1-based label.
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// The 0-based array index.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The `index`-th offered edge `(X_i, Y_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub index: u64,
}

impl OrientedEdge {
    /// Edge from 1-based labels.
    pub fn new(tail: u32, head: u32, index: u64) -> Result<Self> {
        Ok(Self { tail: VertexId::new(tail)?, head: VertexId::new(head)?, index })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    White,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeFilter {
    All,
    White,
    Blue,
}

/// Result of offering an edge to the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnionOutcome {
    /// Two components were merged; `root` is the surviving root.
    Merged { root: usize, absorbed: usize },
    /// Both endpoints were already in the component rooted at `root`.
    CycleClosed { root: usize },
}

/// Disjoint sets over `0..n` with union by size and path halving.
/// Size, color, cycle flag and edge count live at the roots.
#[derive(Clone, Debug)]
pub struct ComponentTable {
    parent: Vec<u32>,
    size: Vec<u32>,
    edges: Vec<u64>,
    blue: Vec<bool>,
    cycle: Vec<bool>,
    components: usize,
}

impl ComponentTable {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize);
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            edges: vec![0; n],
            blue: vec![false; n],
            cycle: vec![false; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let gp = self.parent[self.parent[v] as usize];
            self.parent[v] = gp;
            v = gp as usize;
        }
        v
    }

    /// Root lookup without compression.
    pub fn find_const(&self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
        }
        v
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.len() {
            return Err(Error::Index(format!("vertex index {v} with n = {}", self.len())));
        }
        Ok(())
    }

    /// Adds the edge `{a, b}`. Colors and cycle flags are OR-ed on merges.
    pub fn union_or_cycle(&mut self, a: usize, b: usize) -> Result<UnionOutcome> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.union_unchecked(a, b))
    }

    #[inline]
    pub fn union_unchecked(&mut self, a: usize, b: usize) -> UnionOutcome {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            self.cycle[ra] = true;
            self.edges[ra] += 1;
            return UnionOutcome::CycleClosed { root: ra };
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.edges[big] += self.edges[small] + 1;
        self.blue[big] |= self.blue[small];
        self.cycle[big] |= self.cycle[small];
        self.components -= 1;
        UnionOutcome::Merged { root: big, absorbed: small }
    }

    /// Size of the component rooted at `root`.
    #[inline]
    pub fn root_size(&self, root: usize) -> usize {
        self.size[root] as usize
    }

    pub fn size_of(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r] as usize
    }

    #[inline]
    pub fn root_color(&self, root: usize) -> Color {
        if self.blue[root] {
            Color::Blue
        } else {
            Color::White
        }
    }

    #[inline]
    pub fn root_is_blue(&self, root: usize) -> bool {
        self.blue[root]
    }

    pub fn color_of(&mut self, v: usize) -> Color {
        let r = self.find(v);
        self.root_color(r)
    }

    pub fn set_blue(&mut self, root: usize) {
        debug_assert_eq!(self.parent[root] as usize, root);
        self.blue[root] = true;
    }

    pub fn root_has_cycle(&self, root: usize) -> bool {
        self.cycle[root]
    }

    /// Edges received by the component rooted at `root`.
    pub fn root_edges(&self, root: usize) -> u64 {
        self.edges[root]
    }

    /// Edges minus vertices plus one.
    pub fn root_surplus(&self, root: usize) -> i64 {
        self.edges[root] as i64 - self.size[root] as i64 + 1
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v] as usize == v
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.is_root(v))
    }

    /// Component sizes matching `filter`, non-increasing.
    pub fn component_size_vector(&self, filter: SizeFilter) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .roots()
            .filter(|&r| match filter {
                SizeFilter::All => true,
                SizeFilter::White => !self.blue[r],
                SizeFilter::Blue => self.blue[r],
            })
            .map(|r| self.size[r] as u64)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Canonical partition labels: each vertex gets the smallest vertex of its class.
    pub fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut min_of_root = vec![usize::MAX; n];
        for v in 0..n {
            let r = self.find(v);
            if min_of_root[r] == usize::MAX {
                min_of_root[r] = v;
            }
        }
        (0..n).map(|v| min_of_root[self.find_const(v)]).collect()
    }
}
