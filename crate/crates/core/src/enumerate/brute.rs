use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Upper bound on `n^(n-1+m)` for [`brute_force_parking`].
pub const DEFAULT_PARKING_CAP: u128 = 200_000_000;

/// All rooted labeled trees on `0..n` as parent arrays (`None` at the root).
/// Obtained by filtering the `n^n` maps of `0..n` into itself down to those
/// whose only cycle is a single fixed point.
pub fn rooted_trees(n: usize) -> Vec<Vec<Option<usize>>> {
    assert!(n >= 1 && n <= 7, "rooted tree listing is for tiny n");
    let mut out = Vec::new();
    let mut f = vec![0usize; n];
    loop {
        if is_rooted_tree(&f) {
            out.push(f.iter().enumerate().map(|(v, &t)| if t == v { None } else { Some(t) }).collect());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

fn is_rooted_tree(f: &[usize]) -> bool {
    let n = f.len();
    let fixed = (0..n).filter(|&v| f[v] == v).count();
    if fixed != 1 {
        return false;
    }
    (0..n).all(|start| {
        let mut v = start;
        for _ in 0..n {
            if f[v] == v {
                return true;
            }
            v = f[v];
        }
        false
    })
}

/// Conditions on a (tree, arrival sequence) pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParkingFilter {
    /// Every car parks.
    pub all_park: bool,
    /// The root stays empty.
    pub root_empty: bool,
    /// Exactly this many cars leave through the root.
    pub exits: Option<usize>,
    /// Every edge is crossed by at least one car.
    pub all_edges_positive: bool,
}

impl ParkingFilter {
    pub fn all_park() -> Self {
        Self { all_park: true, ..Self::default() }
    }

    pub fn nearly_parked() -> Self {
        Self { all_park: true, root_empty: true, ..Self::default() }
    }

    pub fn strongly_parked(p: usize) -> Self {
        Self { exits: Some(p), all_edges_positive: true, ..Self::default() }
    }
}

/// Histogram of outcomes over all `n^(n-1)` rooted trees and `n^m` arrival sequences,
/// keyed by (exit count, root occupied, every edge positive).
#[derive(Clone, Debug, Default)]
pub struct ParkingCensus {
    pub n: usize,
    pub m: usize,
    pub cells: BTreeMap<(usize, bool, bool), u64>,
}

impl ParkingCensus {
    pub fn total(&self) -> u64 {
        self.cells.values().sum()
    }

    pub fn count(&self, f: &ParkingFilter) -> BigUint {
        let c: u64 = self
            .cells
            .iter()
            .filter(|((exits, root_occ, all_pos), _)| {
                (!f.all_park || *exits == 0)
                    && (!f.root_empty || !*root_occ)
                    && f.exits.map_or(true, |p| *exits == p)
                    && (!f.all_edges_positive || *all_pos)
            })
            .map(|(_, &c)| c)
            .sum();
        BigUint::from(c)
    }
}

struct Dfs<'a> {
    parent: &'a [Option<usize>],
    occupied: Vec<bool>,
    flux: Vec<u32>,
    positive: usize,
    exits: usize,
    root: usize,
}

impl Dfs<'_> {
    // Returns the parking spot, or None if the car left through the root.
    fn park(&mut self, mut v: usize) -> Option<usize> {
        loop {
            if !self.occupied[v] {
                self.occupied[v] = true;
                return Some(v);
            }
            match self.parent[v] {
                Some(p) => {
                    if self.flux[v] == 0 {
                        self.positive += 1;
                    }
                    self.flux[v] += 1;
                    v = p;
                }
                None => {
                    self.exits += 1;
                    return None;
                }
            }
        }
    }

    fn unpark(&mut self, start: usize, spot: Option<usize>) {
        match spot {
            Some(s) => self.occupied[s] = false,
            None => self.exits -= 1,
        }
        let mut v = start;
        while Some(v) != spot {
            match self.parent[v] {
                Some(p) => {
                    self.flux[v] -= 1;
                    if self.flux[v] == 0 {
                        self.positive -= 1;
                    }
                    v = p;
                }
                None => break,
            }
        }
    }

    fn run(&mut self, left: usize, cells: &mut BTreeMap<(usize, bool, bool), u64>) {
        let n = self.occupied.len();
        if left == 0 {
            let key = (self.exits, self.occupied[self.root], self.positive == n - 1);
            *cells.entry(key).or_insert(0) += 1;
            return;
        }
        for v in 0..n {
            let spot = self.park(v);
            self.run(left - 1, cells);
            self.unpark(v, spot);
        }
    }
}

/// Sequentially parks every arrival sequence on every rooted tree.
pub fn parking_census(n: usize, m: usize, cap: u128) -> Result<ParkingCensus> {
    if n == 0 {
        return Err(Error::InvalidSize("n >= 1 required".into()));
    }
    let work = (n as u128).checked_pow((n - 1 + m) as u32).unwrap_or(u128::MAX);
    if work > cap || n > 7 {
        return Err(Error::Resource(format!("n^(n-1+m) = {work} exceeds cap {cap}")));
    }
    let mut cells = BTreeMap::new();
    for parent in rooted_trees(n) {
        let root = parent.iter().position(|p| p.is_none()).unwrap();
        let mut dfs = Dfs { parent: &parent, occupied: vec![false; n], flux: vec![0; n], positive: 0, exits: 0, root };
        dfs.run(m, &mut cells);
    }
    Ok(ParkingCensus { n, m, cells })
}

/// Number of (rooted tree, arrival sequence) pairs on `n` vertices with `m` cars passing `filter`.
pub fn brute_force_parking(n: usize, m: usize, filter: &ParkingFilter) -> Result<BigUint> {
    Ok(parking_census(n, m, DEFAULT_PARKING_CAP)?.count(filter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rooted_tree_counts() {
        for n in 1..=5usize {
            assert_eq!(rooted_trees(n).len(), n.pow(n as u32 - 1));
        }
    }

    #[test]
    fn spec_values() {
        assert_eq!(brute_force_parking(3, 2, &ParkingFilter::all_park()).unwrap(), BigUint::from(72u32));
        let f = ParkingFilter { all_park: true, all_edges_positive: true, ..Default::default() };
        assert_eq!(brute_force_parking(2, 2, &f).unwrap(), BigUint::from(2u32));
        for n in 1..=5usize {
            let f = ParkingFilter { root_empty: true, ..Default::default() };
            assert_eq!(brute_force_parking(n, 0, &f).unwrap(), BigUint::from(n.pow(n as u32 - 1)));
        }
    }

    #[test]
    fn census_totals() {
        let c = parking_census(3, 3, DEFAULT_PARKING_CAP).unwrap();
        assert_eq!(c.total(), 9 * 27);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(parking_census(5, 10, 1000), Err(Error::Resource(_))));
    }
}
