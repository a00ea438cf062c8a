//! The multigraph process `G(n, m)` and the frozen process `F_p(n, m)` driven
//! by the same oriented edge stream, with trajectories and the exact transition
//! kernel of the frozen mass.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::enumerate::{binomial, count_forests, forest_count_or_zero, pow_u, rat, rat_int};
use crate::error::{Error, Result};
use crate::graph::{ComponentTable, OrientedEdge, SizeFilter, UnionOutcome};
use crate::numerics::predicted_jump_rate;
use crate::rng::{tag, EdgeStream, Prng};

/// Default cap on the number of offered edges in one run.
pub const DEFAULT_EDGE_CAP: u64 = 2_000_000_000;

/// Treatment of an edge joining a white and a blue vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WhiteBlueRule {
    /// Keep iff the edge points from the white vertex to the blue one.
    Orientation,
    /// Keep iff the edge points from the blue vertex to the white one. Same law
    /// as `Orientation`, but breaks the coupling with parking.
    ReverseOrientation,
    /// Keep iff the auxiliary uniform is below `p`.
    Bernoulli(f64),
}

impl WhiteBlueRule {
    /// `Orientation` at `p = 1/2`, `Bernoulli(p)` otherwise.
    pub fn from_p(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(if p == 0.5 { Self::Orientation } else { Self::Bernoulli(p) })
    }

    pub fn p(&self) -> f64 {
        match *self {
            Self::Orientation | Self::ReverseOrientation => 0.5,
            Self::Bernoulli(p) => p,
        }
    }

    #[inline]
    fn keeps(&self, tail_is_white: bool, u: f64) -> bool {
        match *self {
            Self::Orientation => tail_is_white,
            Self::ReverseOrientation => !tail_is_white,
            Self::Bernoulli(p) => u < p,
        }
    }
}

/// What one offered edge did to `F_p(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepEvent {
    /// Two white trees joined.
    WhiteMerge { sizes: (usize, usize) },
    /// A white tree closed a cycle and froze.
    Freeze { size: usize },
    /// A white tree was attached to a blue component.
    Absorb { white_size: usize },
    /// The edge was dropped.
    Discard { blue_blue: bool },
}

impl StepEvent {
    /// Increase of the frozen mass.
    pub fn blue_increment(&self) -> usize {
        match *self {
            Self::Freeze { size } => size,
            Self::Absorb { white_size } => white_size,
            _ => 0,
        }
    }

    pub fn is_discard(&self) -> bool {
        matches!(self, Self::Discard { .. })
    }
}

/// State of `F_p(n, m)`.
#[derive(Clone, Debug)]
pub struct FrozenState {
    table: ComponentTable,
    rule: WhiteBlueRule,
    m: u64,
    kept: u64,
    discarded: u64,
    blue_blue: u64,
    frozen_mass: u64,
    kept_log: Option<Vec<OrientedEdge>>,
    discarded_log: Option<Vec<u64>>,
}

impl FrozenState {
    pub fn new(n: usize, rule: WhiteBlueRule) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("frozen process needs n >= 1".into()));
        }
        if let WhiteBlueRule::Bernoulli(p) = rule {
            WhiteBlueRule::from_p(p)?;
        }
        Ok(Self {
            table: ComponentTable::new(n),
            rule,
            m: 0,
            kept: 0,
            discarded: 0,
            blue_blue: 0,
            frozen_mass: 0,
            kept_log: None,
            discarded_log: None,
        })
    }

    /// Also record the kept edges and the indices of dropped edges.
    pub fn with_logs(mut self) -> Self {
        self.kept_log = Some(Vec::new());
        self.discarded_log = Some(Vec::new());
        self
    }

    /// Offers edge `e`; `u` is only read by the Bernoulli rule.
    pub fn step(&mut self, e: &OrientedEdge, u: f64) -> StepEvent {
        let (a, b) = (e.tail.index(), e.head.index());
        self.m += 1;
        let (ra, rb) = (self.table.find(a), self.table.find(b));
        let (blue_a, blue_b) = (self.table.root_is_blue(ra), self.table.root_is_blue(rb));
        let event = match (blue_a, blue_b) {
            (false, false) => {
                let (sa, sb) = (self.table.root_size(ra), self.table.root_size(rb));
                match self.table.union_unchecked(a, b) {
                    UnionOutcome::CycleClosed { root } => {
                        self.table.set_blue(root);
                        StepEvent::Freeze { size: sa }
                    }
                    UnionOutcome::Merged { .. } => StepEvent::WhiteMerge { sizes: (sa, sb) },
                }
            }
            (true, true) => StepEvent::Discard { blue_blue: true },
            _ => {
                if self.rule.keeps(!blue_a, u) {
                    let white_size = self.table.root_size(if blue_a { rb } else { ra });
                    self.table.union_unchecked(a, b);
                    StepEvent::Absorb { white_size }
                } else {
                    StepEvent::Discard { blue_blue: false }
                }
            }
        };
        match event {
            StepEvent::Discard { blue_blue } => {
                self.discarded += 1;
                if blue_blue {
                    self.blue_blue += 1;
                }
                if let Some(log) = self.discarded_log.as_mut() {
                    log.push(e.index);
                }
            }
            _ => {
                self.kept += 1;
                self.frozen_mass += event.blue_increment() as u64;
                if let Some(log) = self.kept_log.as_mut() {
                    log.push(*e);
                }
            }
        }
        event
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn rule(&self) -> WhiteBlueRule {
        self.rule
    }

    /// Edges offered so far.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn kept_edges(&self) -> u64 {
        self.kept
    }

    /// `D(n, m)`, all dropped edges.
    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    /// Dropped edges with both endpoints blue (included in `discarded`).
    pub fn blue_blue(&self) -> u64 {
        self.blue_blue
    }

    pub fn frozen_mass(&self) -> u64 {
        self.frozen_mass
    }

    /// Edges of the white forest.
    pub fn white_edges(&self) -> u64 {
        self.kept - self.frozen_mass
    }

    pub fn table(&self) -> &ComponentTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut ComponentTable {
        &mut self.table
    }

    pub fn kept_log(&self) -> Option<&[OrientedEdge]> {
        self.kept_log.as_deref()
    }

    pub fn discarded_log(&self) -> Option<&[u64]> {
        self.discarded_log.as_deref()
    }

    pub fn is_blue(&mut self, v: usize) -> bool {
        let r = self.table.find(v);
        self.table.root_is_blue(r)
    }

    pub fn white_sizes(&self) -> Vec<u64> {
        self.table.component_size_vector(SizeFilter::White)
    }

    pub fn blue_sizes(&self) -> Vec<u64> {
        self.table.component_size_vector(SizeFilter::Blue)
    }
}

/// `floor(n/2 + lambda n^(2/3) / 2)`, clamped at 0.
pub fn lambda_to_m(n: usize, lambda: f64) -> u64 {
    let nf = n as f64;
    (nf / 2.0 + lambda * nf.powf(2.0 / 3.0) / 2.0).floor().max(0.0) as u64
}

/// `(2m - n) / n^(2/3)`.
pub fn m_to_lambda(n: usize, m: u64) -> f64 {
    (2.0 * m as f64 - n as f64) / (n as f64).powf(2.0 / 3.0)
}

/// When snapshots are taken.
#[derive(Clone, Debug)]
pub enum Sampling {
    EveryStep,
    /// Snapshots after the listed numbers of offered edges.
    Steps(Vec<u64>),
    /// Snapshots at `lambda_to_m(n, lambda)`; points beyond `m_max` are skipped.
    LambdaGrid(Vec<f64>),
}

impl Sampling {
    fn targets(&self, n: usize, m_max: u64) -> Vec<(u64, f64)> {
        let mut out: Vec<(u64, f64)> = match self {
            Self::EveryStep => (0..=m_max).map(|m| (m, m_to_lambda(n, m))).collect(),
            Self::Steps(ms) => ms.iter().map(|&m| (m, m_to_lambda(n, m))).collect(),
            Self::LambdaGrid(ls) => ls.iter().map(|&l| (lambda_to_m(n, l), l)).collect(),
        };
        out.retain(|&(m, _)| m <= m_max);
        out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        out
    }
}

/// Run options shared by `run_frozen` and `run_er`.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub edge_cap: u64,
    /// Keep only the largest `top` sizes per color in snapshots.
    pub top: Option<usize>,
    pub record_jumps: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { edge_cap: DEFAULT_EDGE_CAP, top: None, record_jumps: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrozenSnapshot {
    pub lambda: f64,
    pub m: u64,
    pub kept: u64,
    pub frozen_mass: u64,
    pub discarded: u64,
    pub white: Vec<u64>,
    pub blue: Vec<u64>,
}

/// A jump of the frozen mass at step `m` (1-based) from `mass_before`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JumpRecord {
    pub m: u64,
    pub mass_before: u64,
    pub delta: u64,
}

#[derive(Clone, Debug)]
pub struct FrozenTrajectory {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub m_max: u64,
    pub snapshots: Vec<FrozenSnapshot>,
    pub jumps: Vec<JumpRecord>,
    pub final_mass: u64,
    pub final_discarded: u64,
}

impl FrozenTrajectory {
    /// Frozen mass after `m` offered edges, from the jump record.
    pub fn mass_at(&self, m: u64) -> u64 {
        let idx = self.jumps.partition_point(|j| j.m <= m);
        match self.jumps.get(idx) {
            Some(j) => j.mass_before,
            None => self.final_mass,
        }
    }
}

fn truncate(mut v: Vec<u64>, top: Option<usize>) -> Vec<u64> {
    if let Some(t) = top {
        v.truncate(t);
    }
    v
}

fn check_cap(m_max: u64, opts: &RunOptions) -> Result<()> {
    if m_max > opts.edge_cap {
        return Err(Error::Resource(format!("m_max = {m_max} exceeds the edge cap {}", opts.edge_cap)));
    }
    Ok(())
}

/// Runs `F_p(n, .)` for `m_max` edges. Edges come from the `EDGES` stream of
/// `seed` and the auxiliary uniforms from its `AUX` stream.
pub fn run_frozen(
    n: usize,
    m_max: u64,
    rule: WhiteBlueRule,
    seed: u64,
    sampling: &Sampling,
    opts: &RunOptions,
) -> Result<FrozenTrajectory> {
    check_cap(m_max, opts)?;
    let mut edges = EdgeStream::new(n, seed)?;
    let mut aux = Prng::stream(seed, tag::AUX);
    let mut state = FrozenState::new(n, rule)?;
    let targets = sampling.targets(n, m_max);
    let mut next = 0;
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut jumps = Vec::new();
    let snap = |state: &FrozenState, next: &mut usize, snapshots: &mut Vec<FrozenSnapshot>| {
        while *next < targets.len() && targets[*next].0 == state.m() {
            snapshots.push(FrozenSnapshot {
                lambda: targets[*next].1,
                m: state.m(),
                kept: state.kept_edges(),
                frozen_mass: state.frozen_mass(),
                discarded: state.discarded(),
                white: truncate(state.white_sizes(), opts.top),
                blue: truncate(state.blue_sizes(), opts.top),
            });
            *next += 1;
        }
    };
    snap(&state, &mut next, &mut snapshots);
    for _ in 0..m_max {
        let e = edges.next_edge();
        let u = aux.unit();
        let before = state.frozen_mass();
        let ev = state.step(&e, u);
        if opts.record_jumps && ev.blue_increment() > 0 {
            jumps.push(JumpRecord { m: state.m(), mass_before: before, delta: ev.blue_increment() as u64 });
        }
        snap(&state, &mut next, &mut snapshots);
    }
    Ok(FrozenTrajectory {
        n,
        p: rule.p(),
        seed,
        m_max,
        snapshots,
        jumps,
        final_mass: state.frozen_mass(),
        final_discarded: state.discarded(),
    })
}

/// `G(n, m)`: every offered edge is kept.
#[derive(Clone, Debug)]
pub struct ErState {
    table: ComponentTable,
    m: u64,
}

impl ErState {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("G(n, m) needs n >= 1".into()));
        }
        Ok(Self { table: ComponentTable::new(n), m: 0 })
    }

    pub fn step(&mut self, e: &OrientedEdge) -> UnionOutcome {
        self.m += 1;
        self.table.union_unchecked(e.tail.index(), e.head.index())
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn table(&self) -> &ComponentTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut ComponentTable {
        &mut self.table
    }

    /// `(size, surplus)` per component, by non-increasing size then surplus.
    pub fn components(&self) -> Vec<(u64, i64)> {
        let mut out: Vec<(u64, i64)> =
            self.table.roots().map(|r| (self.table.root_size(r) as u64, self.table.root_surplus(r))).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.table.roots().all(|r| !self.table.root_has_cycle(r))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErSnapshot {
    pub lambda: f64,
    pub m: u64,
    /// `(size, surplus)` pairs.
    pub components: Vec<(u64, i64)>,
}

/// Runs `G(n, .)` on the same edge stream as `run_frozen` with the same seed.
pub fn run_er(n: usize, m_max: u64, seed: u64, sampling: &Sampling, opts: &RunOptions) -> Result<Vec<ErSnapshot>> {
    check_cap(m_max, opts)?;
    let mut edges = EdgeStream::new(n, seed)?;
    let mut state = ErState::new(n)?;
    let targets = sampling.targets(n, m_max);
    let mut next = 0;
    let mut out = Vec::with_capacity(targets.len());
    for step in 0..=m_max {
        if step > 0 {
            state.step(&edges.next_edge());
        }
        while next < targets.len() && targets[next].0 == step {
            let mut comps = state.components();
            if let Some(t) = opts.top {
                comps.truncate(t);
            }
            out.push(ErSnapshot { lambda: targets[next].1, m: step, components: comps });
            next += 1;
        }
    }
    Ok(out)
}

fn check_freezer_args(n_white: u64, m_white: u64, blue_mass: u64, n: u64) -> Result<()> {
    if n_white + blue_mass != n || n == 0 {
        return Err(Error::Domain(format!(
            "inconsistent sizes: n_white = {n_white}, blue mass = {blue_mass}, n = {n}"
        )));
    }
    if n_white > 0 && m_white >= n_white || n_white == 0 && m_white > 0 {
        return Err(Error::Domain(format!("m_white = {m_white} with n_white = {n_white}")));
    }
    Ok(())
}

/// Expected number of components of size `k` in a uniform forest of `F(n', m')`,
/// `binom(n', k) k^(k-2) #F(n' - k, m' - k + 1) / #F(n', m')`.
pub fn expected_tree_count(n_white: u64, m_white: u64, k: u64) -> Result<BigRational> {
    if k == 0 || k > n_white || m_white >= n_white {
        return Err(Error::Domain(format!("k = {k} with n' = {n_white}, m' = {m_white}")));
    }
    if m_white + 1 < k {
        return Ok(BigRational::zero());
    }
    let rest_n = n_white - k;
    let rest_m = m_white + 1 - k;
    if rest_n == 0 && rest_m > 0 || rest_n > 0 && rest_m >= rest_n {
        return Ok(BigRational::zero());
    }
    let cayley = if k == 1 { BigUint::from(1u32) } else { pow_u(k, k - 2) };
    let rest = if rest_n == 0 { BigUint::from(1u32) } else { count_forests(rest_n, rest_m)? };
    Ok(rat(binomial(n_white, k) * cayley * rest, count_forests(n_white, m_white)?))
}

/// Probability that the next edge raises the frozen mass by exactly `k` (and
/// the kept-edge count by one).
pub fn freezer_transition_prob(n_white: u64, m_white: u64, blue_mass: u64, n: u64, k: u64) -> Result<BigRational> {
    check_freezer_args(n_white, m_white, blue_mass, n)?;
    if k == 0 || k > n_white {
        return Err(Error::Domain(format!("jump size {k} outside 1..={n_white}")));
    }
    let weight = rat(BigUint::from(k * k + k * blue_mass), BigUint::from(n * n));
    Ok(expected_tree_count(n_white, m_white, k)? * weight)
}

/// Probability that the next edge changes nothing: `blue_mass / n`.
pub fn freezer_no_change_prob(n_white: u64, m_white: u64, blue_mass: u64, n: u64) -> Result<BigRational> {
    check_freezer_args(n_white, m_white, blue_mass, n)?;
    Ok(rat(BigUint::from(blue_mass), BigUint::from(n)))
}

/// Probability that the next edge joins two white trees:
/// `(n'^2 - sum_k k^2 E[N_k]) / n^2`.
pub fn freezer_merge_prob(n_white: u64, m_white: u64, blue_mass: u64, n: u64) -> Result<BigRational> {
    check_freezer_args(n_white, m_white, blue_mass, n)?;
    let mut same = BigRational::zero();
    for k in 1..=n_white {
        same += expected_tree_count(n_white, m_white, k)? * rat_int(BigUint::from(k * k));
    }
    let total = rat_int(BigUint::from(n_white * n_white));
    Ok((total - same) / rat_int(BigUint::from(n * n)))
}

/// Jumps of the frozen mass binned by scaled size `y = delta / n^(2/3)` inside a
/// window of `lambda`, pooled over trajectories.
#[derive(Clone, Debug)]
pub struct JumpHistogram {
    pub n: usize,
    pub window: (f64, f64),
    pub bins: Vec<(f64, f64)>,
    pub counts: Vec<u64>,
    /// Jumps in the window, including those outside every bin.
    pub total_jumps: u64,
    pub trajectories: usize,
    /// Offered edges inside the window, summed over trajectories.
    pub exposure_steps: u64,
}

impl JumpHistogram {
    /// Empirical per-step density in `y` for bin `i`, to be compared with
    /// `2 n^(-2/3) jump_density` averaged over the visited states.
    pub fn density(&self, i: usize) -> f64 {
        let (lo, hi) = self.bins[i];
        self.counts[i] as f64 / self.exposure_steps as f64 / (hi - lo)
    }
}

fn window_steps(n: usize, window: (f64, f64)) -> (u64, u64) {
    // steps m with lambda(m - 1) in the window, i.e. the edge offered from time lambda
    (lambda_to_m(n, window.0) + 1, lambda_to_m(n, window.1))
}

/// Histogram of frozen-mass jumps; trajectories must carry their jump records.
pub fn empirical_jump_density(
    trajs: &[FrozenTrajectory],
    window: (f64, f64),
    bins: &[(f64, f64)],
) -> Result<JumpHistogram> {
    let first = trajs.first().ok_or_else(|| Error::Domain("no trajectories".into()))?;
    let n = first.n;
    if trajs.iter().any(|t| t.n != n) {
        return Err(Error::Domain("trajectories with different n".into()));
    }
    let scale = (n as f64).powf(2.0 / 3.0);
    let (lo, hi) = window_steps(n, window);
    let mut counts = vec![0u64; bins.len()];
    let mut total = 0u64;
    let mut exposure = 0u64;
    for t in trajs {
        if hi > t.m_max {
            return Err(Error::Domain(format!("window ends at m = {hi} beyond m_max = {}", t.m_max)));
        }
        exposure += hi + 1 - lo;
        for j in t.jumps.iter().filter(|j| j.m >= lo && j.m <= hi) {
            total += 1;
            let y = j.delta as f64 / scale;
            if let Some(i) = bins.iter().position(|&(a, b)| y >= a && y < b) {
                counts[i] += 1;
            }
        }
    }
    Ok(JumpHistogram {
        n,
        window,
        bins: bins.to_vec(),
        counts,
        total_jumps: total,
        trajectories: trajs.len(),
        exposure_steps: exposure,
    })
}

/// Expected jump counts per bin predicted by the limiting kernel: the sum over
/// steps of the window of `2 n^(-2/3) int_bin jump_density(x_m, lambda_m, y, p) dy`,
/// with `lambda` refreshed every `stride` steps.
pub fn jump_compensator(traj: &FrozenTrajectory, window: (f64, f64), bins: &[(f64, f64)], stride: u64) -> Vec<f64> {
    let n = traj.n;
    let scale = (n as f64).powf(2.0 / 3.0);
    let (lo, hi) = window_steps(n, window);
    let stride = stride.max(1);
    let mut out = vec![0.0; bins.len()];
    let mut m = lo;
    while m <= hi {
        let mass = traj.mass_at(m - 1);
        // stop the block at the next jump so the state is constant inside it
        let idx = traj.jumps.partition_point(|j| j.m < m);
        let next_jump = traj.jumps.get(idx).map_or(u64::MAX, |j| j.m);
        let end = (m + stride - 1).min(hi).min(next_jump.max(m));
        let len = (end + 1 - m) as f64;
        let lambda = m_to_lambda(n, (m + end) / 2);
        let x = mass as f64 / scale;
        for (o, &(a, b)) in out.iter_mut().zip(bins) {
            *o += len * 2.0 / scale * predicted_jump_rate(x, lambda, a, b, traj.p);
        }
        m = end + 1;
    }
    out
}

/// White forests of `F(n, m)` over all `n^(2m)` oriented edge sequences with the
/// orientation rule, grouped by (kept edges, frozen mass). White vertices are
/// relabeled increasingly and edges listed as sorted `(min, max)` pairs.
#[derive(Clone, Debug)]
pub struct FreeForestCensus {
    pub n: usize,
    pub m: usize,
    pub groups: BTreeMap<(u64, u64), BTreeMap<Vec<(usize, usize)>, u64>>,
}

impl FreeForestCensus {
    /// Every group puts the same weight on each of the `#F(n - blue, kept - blue)` forests.
    pub fn is_uniform(&self) -> bool {
        for (&(kept, blue), forests) in &self.groups {
            let expected = forest_count_or_zero(self.n as i64 - blue as i64, kept as i64 - blue as i64);
            if BigUint::from(forests.len()) != expected {
                return false;
            }
            let first = forests.values().next().copied();
            if forests.values().any(|&c| Some(c) != first) {
                return false;
            }
        }
        true
    }
}

pub fn free_forest_census(n: usize, m: usize) -> Result<FreeForestCensus> {
    let pairs = (n * n) as u128;
    if n == 0 || pairs.checked_pow(m as u32).map_or(true, |t| t > 20_000_000) {
        return Err(Error::Resource(format!("n^(2m) too large for n = {n}, m = {m}")));
    }
    let total = pairs.pow(m as u32) as u64;
    let mut groups: BTreeMap<(u64, u64), BTreeMap<Vec<(usize, usize)>, u64>> = BTreeMap::new();
    for code in 0..total {
        let mut state = FrozenState::new(n, WhiteBlueRule::Orientation)?.with_logs();
        let mut c = code;
        for i in 0..m {
            let pair = (c % pairs as u64) as usize;
            c /= pairs as u64;
            let e = OrientedEdge::new((pair / n) as u32 + 1, (pair % n) as u32 + 1, i as u64 + 1)?;
            state.step(&e, 0.0);
        }
        let white: Vec<bool> = (0..n).map(|v| !state.is_blue(v)).collect();
        let mut relabel = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if white[v] {
                relabel[v] = next;
                next += 1;
            }
        }
        let mut forest: Vec<(usize, usize)> = state
            .kept_log()
            .unwrap()
            .iter()
            .filter(|e| white[e.tail.index()])
            .map(|e| {
                let (a, b) = (relabel[e.tail.index()], relabel[e.head.index()]);
                (a.min(b), a.max(b))
            })
            .collect();
        forest.sort_unstable();
        let key = (state.kept_edges(), state.frozen_mass());
        *groups.entry(key).or_default().entry(forest).or_insert(0) += 1;
    }
    Ok(FreeForestCensus { n, m, groups })
}
