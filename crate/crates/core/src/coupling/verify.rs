//! Replays a coupled run against the frozen process driven by the same edges.

use std::fmt;

use crate::frozen::{FrozenState, StepEvent};
use crate::graph::ComponentTable;
use crate::parking::{park_on_mapping, park_sequence};
use crate::rng::{tag, Prng};

use super::peel::Target;
use super::run::{CoupledRun, CouplingKind};

/// Full partition comparisons happen at every step up to this size.
pub const FULL_CHECK_LIMIT: usize = 64;
const CHECKPOINTS: u64 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingReport {
    Ok { steps: u64 },
    Failed { m: u64, diff: String },
}

impl CouplingReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, Self::Ok { .. })
    }

    pub fn failing_step(&self) -> Option<u64> {
        match self {
            Self::Ok { .. } => None,
            Self::Failed { m, .. } => Some(*m),
        }
    }
}

impl fmt::Display for CouplingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ok { steps } => write!(f, "ok ({steps} steps)"),
            Self::Failed { m, diff } => write!(f, "failed at m = {m}: {diff}"),
        }
    }
}

/// Canonical labels of a partition in which every vertex flagged in `blue` is
/// put into one class.
fn merged_labels(table: &mut ComponentTable, blue: &[bool]) -> Vec<usize> {
    let n = table.len();
    let mut first = vec![usize::MAX; n + 1];
    (0..n)
        .map(|v| {
            let key = if blue[v] { n } else { table.find(v) };
            if first[key] == usize::MAX {
                first[key] = v;
            }
            first[key]
        })
        .collect()
}

fn frozen_partition(f: &mut FrozenState, merge_blue: bool) -> (Vec<usize>, Vec<bool>) {
    let n = f.n();
    let blue: Vec<bool> = (0..n).map(|v| f.is_blue(v)).collect();
    let merge = if merge_blue { blue.clone() } else { vec![false; n] };
    (merged_labels(f.table_mut(), &merge), blue)
}

/// Partition of the revealed forest, rebuilt from scratch.
fn forest_partition(kind: CouplingKind, targets: &[Option<Target>], merge_blue: bool) -> (Vec<usize>, Vec<bool>) {
    let n = targets.len();
    let mut t = ComponentTable::new(n);
    let mut root = None;
    for (v, tg) in targets.iter().enumerate() {
        match tg {
            Some(Target::Vertex(w)) => {
                t.union_unchecked(v, *w);
            }
            Some(Target::Root) => root = Some(v),
            None => {}
        }
    }
    let blue: Vec<bool> = match kind {
        CouplingKind::Tree => (0..n).map(|v| root.is_some_and(|r| t.same(r, v))).collect(),
        CouplingKind::Mapping => (0..n)
            .map(|v| {
                let r = t.find(v);
                t.root_has_cycle(r)
            })
            .collect(),
    };
    let merge = if merge_blue { blue.clone() } else { vec![false; n] };
    (merged_labels(&mut t, &merge), blue)
}

/// Checks, for every `m`, that the components of the frozen process with all
/// blue components merged are those of the near forest, that the blue sets
/// agree, and that dropped edges are the cars that did not park. For mappings
/// the components are also compared without merging. Finally the cars are
/// parked again on the finished tree or mapping.
pub fn verify_coupling(run: &CoupledRun) -> CouplingReport {
    let n = run.n;
    let fail = |m: u64, diff: String| CouplingReport::Failed { m, diff };
    if run.edges.len() != run.steps.len() {
        return fail(0, "edge and step counts differ".into());
    }
    let mut frozen = match FrozenState::new(n, run.rule) {
        Ok(f) => f,
        Err(e) => return fail(0, e.to_string()),
    };
    let mut aux = Prng::stream(run.seed, tag::AUX);
    let virt = n;
    let mut common = ComponentTable::new(n + 1);
    let mut targets: Vec<Option<Target>> = vec![None; n];
    let total = run.steps.len() as u64;
    let stride = if n <= FULL_CHECK_LIMIT { 1 } else { (total / CHECKPOINTS).max(1) };
    for (i, (e, s)) in run.edges.iter().zip(&run.steps).enumerate() {
        let m = i as u64 + 1;
        let (x, y) = (e.tail.index(), e.head.index());
        let u = aux.unit();
        let event = frozen.step(e, u);
        let f_req = match event {
            StepEvent::WhiteMerge { .. } | StepEvent::Absorb { .. } => Some((x, y)),
            StepEvent::Freeze { .. } => Some((x, virt)),
            StepEvent::Discard { .. } => None,
        };
        if event.is_discard() != s.spot.is_none() {
            return fail(m, format!("frozen event {event:?} but parking spot {:?}", s.spot));
        }
        let t_req = match (s.spot, s.target) {
            (None, None) => None,
            (Some(z), Some(t)) => {
                if targets[z].is_some() {
                    return fail(m, format!("car parked on occupied vertex {z}"));
                }
                if !common.same(x, z) {
                    return fail(m, format!("car from {x} parked at {z} in another component"));
                }
                targets[z] = Some(t);
                match t {
                    Target::Root => Some((z, virt)),
                    Target::Vertex(w) if common.same(z, w) => match run.kind {
                        CouplingKind::Mapping => Some((z, virt)),
                        CouplingKind::Tree => return fail(m, format!("{z} -> {w} closes a cycle in the tree")),
                    },
                    Target::Vertex(w) => Some((z, w)),
                }
            }
            other => return fail(m, format!("inconsistent trace {other:?}")),
        };
        match (f_req, t_req) {
            (None, None) => {}
            (Some((a, b)), Some((c, d))) => {
                let f_pair = sorted(common.find(a), common.find(b));
                let t_pair = sorted(common.find(c), common.find(d));
                if f_pair != t_pair {
                    return fail(m, format!("frozen joins {a} and {b}, parking joins {c} and {d}"));
                }
                common.union_unchecked(a, b);
            }
            _ => return fail(m, format!("frozen event {event:?} against target {:?}", s.target)),
        }
        let blue_mass = common.size_of(virt) as u64 - 1;
        if blue_mass != frozen.frozen_mass() {
            return fail(m, format!("frozen mass {} but blue tree of size {blue_mass}", frozen.frozen_mass()));
        }
        if m % stride == 0 || m == total {
            for merge in [true, false] {
                if !merge && run.kind == CouplingKind::Tree {
                    continue;
                }
                let (fl, fb) = frozen_partition(&mut frozen, merge);
                let (tl, tb) = forest_partition(run.kind, &targets, merge);
                if fb != tb {
                    return fail(m, "blue vertex sets differ".into());
                }
                if fl != tl {
                    let v = (0..n).find(|&v| fl[v] != tl[v]).unwrap();
                    return fail(m, format!("vertex {v}: frozen class of {}, near class of {}", fl[v], tl[v]));
                }
            }
        }
    }
    if let Some(done) = run.completed_at {
        let arrivals = run.arrivals();
        let spots = match run.kind {
            CouplingKind::Tree => run.tree().and_then(|t| park_sequence(&t, &arrivals)),
            CouplingKind::Mapping => run.mapping().and_then(|mp| park_on_mapping(&mp, &arrivals)),
        };
        let spots = match spots {
            Ok(o) => o.spots,
            Err(e) => return fail(done, format!("final structure: {e}")),
        };
        for (i, s) in run.steps.iter().enumerate() {
            if spots[i].map(|v| v as usize) != s.spot {
                return fail(
                    i as u64 + 1,
                    format!("parking on the final structure puts car {} at {:?}", i + 1, spots[i]),
                );
            }
        }
    }
    CouplingReport::Ok { steps: total }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::run::{couple_mapping, couple_tree, CoupleOptions, Fault};

    #[test]
    fn small_runs_pass() {
        for n in [1, 2, 3, 7, 30, 100] {
            for seed in 0..10 {
                let opts = CoupleOptions::new(2 * n as u64);
                let r = verify_coupling(&couple_tree(n, seed, &opts).unwrap());
                assert!(r.is_ok(), "tree n={n} seed={seed}: {r}");
                let r = verify_coupling(&couple_mapping(n, seed, &opts).unwrap());
                assert!(r.is_ok(), "mapping n={n} seed={seed}: {r}");
            }
        }
    }

    #[test]
    fn reversed_orientation_is_caught() {
        let opts = CoupleOptions { m_min: 0, edge_cap: 0, fault: Some(Fault::ReverseOrientation) };
        let run = couple_tree(50, 3, &opts).unwrap();
        // first offered edge between a white and a blue vertex
        let r = verify_coupling(&run);
        assert!(!r.is_ok());
    }

    #[test]
    fn mutated_target_is_caught_at_its_step() {
        let n = 60;
        let clean = couple_tree(n, 9, &CoupleOptions::new(0)).unwrap();
        let step = clean.steps.iter().position(|s| s.redirected).unwrap() as u64 + 1;
        let opts = CoupleOptions { m_min: 0, edge_cap: 0, fault: Some(Fault::MutateTarget { step }) };
        let run = couple_tree(n, 9, &opts).unwrap();
        assert_eq!(verify_coupling(&run).failing_step(), Some(step));
    }
}
