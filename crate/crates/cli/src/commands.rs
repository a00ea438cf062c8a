//! One function per subcommand. Each returns the table it produced and the
//! replica seeds it used.

use rayon::prelude::*;

use fpark_core::acceptance::{notes, run_criterion, Profile, CRITERIA};
use fpark_core::coupling::{
    couple_mapping, couple_tree, sample_nearly_parked, verify_coupling, CoupleOptions, CouplingKind, Fault,
};
use fpark_core::enumerate::{
    big_ln, brute_force_forests, count_forests, countfp_literal_mismatch, last_car_check, mean_height_exact,
    mean_total_distance_exact, parking_census, pf, pf_full, pf_root, series_identities, sp, sp_flux, ParkingFilter,
    DEFAULT_PARKING_CAP,
};
use fpark_core::frozen::{
    lambda_to_m, m_to_lambda, run_er, run_frozen, RunOptions, Sampling, WhiteBlueRule, DEFAULT_EDGE_CAP,
};
use fpark_core::numerics::{
    airy_ai, airy_ai_prime, airy_p1, britikov_count, jump_density, jump_kernel_g, mu_pmf, p1_left_tail,
    p1_normalization, p1_right_tail, walk_pmf,
};
use fpark_core::parking::{
    bitype_decompose, decompose, park_on_mapping, park_sequence, ComponentKind, Mapping, RootedTree,
};
use fpark_core::rng::{derive_seed, tag, Prng};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

pub type Outcome = (Table, Vec<u64>);

fn seeds(cfg: &ExperimentConfig) -> Vec<u64> {
    (0..cfg.replicas).map(|r| derive_seed(cfg.seed, r)).collect()
}

fn size_cells(v: &[u64], k: usize) -> impl Iterator<Item = Cell> + '_ {
    (0..k).map(move |i| v.get(i).map_or(Cell::UInt(0), |&s| Cell::from(s)))
}

fn run_opts(cfg: &ExperimentConfig, top: usize) -> RunOptions {
    RunOptions { edge_cap: cfg.cap.unwrap_or(DEFAULT_EDGE_CAP), top: Some(top), record_jumps: false }
}

/// Snapshot times: the lambda grid, else `--m`, else `lambda` in -2..=2.
fn sampling(cfg: &ExperimentConfig, n: usize) -> (Sampling, u64) {
    let s = match (&cfg.lambda_grid, cfg.m) {
        (Some(g), _) => Sampling::LambdaGrid(g.clone()),
        (None, Some(m)) => Sampling::Steps(vec![m]),
        (None, None) => Sampling::LambdaGrid(vec![-2.0, -1.0, 0.0, 1.0, 2.0]),
    };
    let m_max = match &s {
        Sampling::LambdaGrid(g) => g.iter().map(|&l| lambda_to_m(n, l)).max().unwrap_or(0),
        Sampling::Steps(v) => v.iter().copied().max().unwrap_or(0),
        Sampling::EveryStep => 0,
    };
    (s, m_max)
}

fn collect<T: Send>(rows: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    rows.into_iter().collect()
}

const FROZEN_COLUMNS: [&str; 12] =
    ["n", "p", "seed", "lambda", "m", "kept_edges", "frozen_mass", "discarded", "c_star", "c1", "c2", "c3"];

fn frozen_rows(n: usize, cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Vec<Cell>>, CliError> {
    let p = cfg.p.unwrap_or(0.5);
    let rule = WhiteBlueRule::from_p(p)?;
    let (s, m_max) = sampling(cfg, n);
    let t = run_frozen(n, m_max, rule, seed, &s, &run_opts(cfg, 3))?;
    Ok(t.snapshots
        .iter()
        .map(|snap| {
            let mut row: Vec<Cell> = vec![
                n.into(),
                p.into(),
                seed.into(),
                snap.lambda.into(),
                snap.m.into(),
                snap.kept.into(),
                snap.frozen_mass.into(),
                snap.discarded.into(),
                snap.blue.first().copied().unwrap_or(0).into(),
            ];
            row.extend(size_cells(&snap.white, 3));
            row
        })
        .collect())
}

pub fn simulate_frozen(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = cfg.require_n()?;
    let seeds = seeds(cfg);
    let rows = collect(seeds.par_iter().map(|&s| frozen_rows(n, cfg, s)).collect())?;
    let mut table = Table::new(&FROZEN_COLUMNS);
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok((table, seeds))
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.n_grid.clone().ok_or_else(|| CliError::invalid("sweep needs --n-grid"))?;
    let seeds = seeds(cfg);
    let jobs: Vec<(usize, u64)> = grid.iter().flat_map(|&n| seeds.iter().map(move |&s| (n as usize, s))).collect();
    let rows = collect(jobs.par_iter().map(|&(n, s)| frozen_rows(n, cfg, s)).collect())?;
    let mut table = Table::new(&FROZEN_COLUMNS);
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok((table, seeds))
}

pub fn simulate_er(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = cfg.require_n()?;
    let seeds = seeds(cfg);
    let (s, m_max) = sampling(cfg, n);
    let opts = run_opts(cfg, usize::MAX);
    let rows = collect(
        seeds
            .par_iter()
            .map(|&seed| {
                let snaps = run_er(n, m_max, seed, &s, &opts)?;
                Ok(snaps
                    .into_iter()
                    .map(|snap| {
                        let surplus: i64 = snap.components.iter().map(|c| c.1).sum();
                        let mut row: Vec<Cell> = vec![n.into(), seed.into(), snap.lambda.into(), snap.m.into()];
                        row.push(snap.components.len().into());
                        row.push(Cell::Int(surplus));
                        row.push((surplus == 0).into());
                        let top = |i: usize| snap.components.get(i);
                        row.extend((0..3).map(|i| top(i).map_or(Cell::Int(0), |c| c.0.into())));
                        row.extend((0..3).map(|i| top(i).map_or(Cell::Int(0), |c| Cell::Int(c.1))));
                        row
                    })
                    .collect::<Vec<_>>())
            })
            .collect(),
    )?;
    let mut table = Table::new(&[
        "n",
        "seed",
        "lambda",
        "m",
        "components",
        "total_surplus",
        "acyclic",
        "c1",
        "c2",
        "c3",
        "s1",
        "s2",
        "s3",
    ]);
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok((table, seeds))
}

pub fn simulate_parking(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = cfg.require_n()?;
    let cars = cfg.m.unwrap_or(n as u64 - 1) as usize;
    let k = cfg.top;
    let mapping = match cfg.kind.as_deref() {
        None | Some("tree") => false,
        Some("mapping") => true,
        Some(o) => return Err(CliError::invalid(format!("simulate-parking: kind must be tree or mapping, got {o}"))),
    };
    let seeds = seeds(cfg);
    let rows = collect(
        seeds
            .par_iter()
            .map(|&seed| {
                let mut rng = Prng::stream(seed, tag::SAMPLER);
                let mut row: Vec<Cell> = vec![n.into(), cars.into(), seed.into()];
                if mapping {
                    let map = Mapping::uniform(n, &mut rng)?;
                    let arrivals: Vec<usize> = (0..cars).map(|_| rng.below_usize(n)).collect();
                    let o = park_on_mapping(&map, &arrivals)?;
                    row.extend([o.parked().into(), o.unparked.len().into(), o.total_distance.into(), Cell::Empty]);
                    row.extend((0..1 + 3 * k).map(|_| Cell::Empty));
                    return Ok(row);
                }
                let tree = RootedTree::uniform(n, &mut rng)?;
                let arrivals: Vec<usize> = (0..cars).map(|_| rng.below_usize(n)).collect();
                let o = park_sequence(&tree, &arrivals)?;
                row.extend([
                    o.parked().into(),
                    o.unparked.len().into(),
                    o.total_distance.into(),
                    o.is_occupied(tree.root()).into(),
                ]);
                let near = decompose(&tree, &o, ComponentKind::Near)?;
                row.push(near.root_component().vertices.len().into());
                for kind in [ComponentKind::Near, ComponentKind::Full, ComponentKind::Strong] {
                    let d = if kind == ComponentKind::Near { near.clone() } else { decompose(&tree, &o, kind)? };
                    let sizes: Vec<u64> = d.sizes(false).into_iter().map(|s| s as u64).collect();
                    row.extend(size_cells(&sizes, k).collect::<Vec<_>>());
                }
                Ok(row)
            })
            .collect(),
    )?;
    let mut cols: Vec<String> =
        ["n", "m", "seed", "parked", "unparked", "total_distance", "root_occupied", "near_root"]
            .map(String::from)
            .to_vec();
    for kind in ["near", "full", "strong"] {
        cols.extend((1..=k).map(|i| format!("{kind}{i}")));
    }
    let mut table = Table { columns: cols, rows: Vec::new() };
    rows.into_iter().for_each(|r| table.push(r));
    Ok((table, seeds))
}

fn parse_fault(s: &str) -> Result<Fault, CliError> {
    if s == "reverse" {
        return Ok(Fault::ReverseOrientation);
    }
    if let Some(step) = s.strip_prefix("mutate:") {
        let step = step.parse().map_err(|_| CliError::invalid(format!("fault: bad step in {s:?}")))?;
        return Ok(Fault::MutateTarget { step });
    }
    Err(CliError::invalid(format!("fault: expected reverse or mutate:<step>, got {s:?}")))
}

pub fn couple_verify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = cfg.require_n()?;
    let m_min = cfg.m.unwrap_or((1.2 * n as f64).ceil() as u64);
    let mut opts = CoupleOptions::new(m_min);
    opts.edge_cap = cfg.cap.unwrap_or(0);
    opts.fault = cfg.fault.as_deref().map(parse_fault).transpose()?;
    let kinds: Vec<CouplingKind> = match cfg.kind.as_deref() {
        None | Some("both") => vec![CouplingKind::Tree, CouplingKind::Mapping],
        Some("tree") => vec![CouplingKind::Tree],
        Some(_) => vec![CouplingKind::Mapping],
    };
    let seeds: Vec<u64> = (0..cfg.replicas).map(|r| cfg.seed + r).collect();
    let jobs: Vec<(u64, CouplingKind)> = seeds.iter().flat_map(|&s| kinds.iter().map(move |&k| (s, k))).collect();
    let rows = collect(
        jobs.par_iter()
            .map(|&(seed, kind)| {
                let run = match kind {
                    CouplingKind::Tree => couple_tree(n, seed, &opts)?,
                    CouplingKind::Mapping => couple_mapping(n, seed, &opts)?,
                };
                let report = verify_coupling(&run);
                let name = if kind == CouplingKind::Tree { "tree" } else { "mapping" };
                Ok(vec![
                    n.into(),
                    seed.into(),
                    Cell::Text(name.into()),
                    run.steps.len().into(),
                    run.completed_at.map_or(Cell::Empty, Cell::from),
                    run.unparked().len().into(),
                    report.is_ok().into(),
                    Cell::Text(report.to_string()),
                ])
            })
            .collect(),
    )?;
    let mut table = Table::new(&["n", "seed", "kind", "steps", "completed_at", "unparked", "ok", "report"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok((table, seeds))
}

/// Seeds of failed rows in a couple-verify table.
pub fn failed_runs(table: &Table) -> Vec<String> {
    table
        .rows
        .iter()
        .filter(|r| r[6] == Cell::Bool(false))
        .map(|r| match (&r[1], &r[2]) {
            (Cell::UInt(s), Cell::Text(k)) => format!("{k} seed {s}"),
            _ => "?".into(),
        })
        .collect()
}

pub fn sample_npt(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = cfg.require_n()?;
    let seeds = seeds(cfg);
    let rows = collect(
        seeds
            .par_iter()
            .map(|&seed| {
                let s = sample_nearly_parked(n, seed)?;
                let depths = s.tree.depths();
                let depth_sum: u64 = depths.iter().map(|&d| d as u64).sum();
                let largest = |k| -> Result<usize, CliError> {
                    Ok(decompose(&s.tree, &s.outcome, k)?.sizes(false).first().copied().unwrap_or(0))
                };
                let small = n <= 64;
                Ok(vec![
                    n.into(),
                    seed.into(),
                    s.tree.root().into(),
                    (depth_sum as f64 / n as f64).into(),
                    (*depths.iter().max().unwrap_or(&0) as u64).into(),
                    s.outcome.total_distance.into(),
                    largest(ComponentKind::Full)?.into(),
                    largest(ComponentKind::Strong)?.into(),
                    if small { Cell::Text(bitype_decompose(&s.tree, &s.outcome)?.shape()) } else { Cell::Empty },
                    if small {
                        Cell::Text(
                            s.tree
                                .parents()
                                .iter()
                                .map(|p| p.map_or("-".into(), |v| v.to_string()))
                                .collect::<Vec<_>>()
                                .join(" "),
                        )
                    } else {
                        Cell::Empty
                    },
                    if small {
                        Cell::Text(s.arrivals.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
                    } else {
                        Cell::Empty
                    },
                ])
            })
            .collect(),
    )?;
    let mut table = Table::new(&[
        "n",
        "seed",
        "root",
        "mean_depth",
        "max_depth",
        "total_distance",
        "largest_full",
        "largest_strong",
        "bitype_shape",
        "parents",
        "arrivals",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok((table, seeds))
}

fn need_m(cfg: &ExperimentConfig) -> Result<u64, CliError> {
    cfg.m.ok_or_else(|| CliError::invalid("missing --m"))
}

fn quantity(cfg: &ExperimentConfig) -> Result<&str, CliError> {
    cfg.quantity.as_deref().ok_or_else(|| CliError::invalid("missing --quantity"))
}

pub fn enumerate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let q = quantity(cfg)?;
    let n = cfg.n.ok_or_else(|| CliError::invalid("missing --n"))?;
    let mut table = Table::new(&["quantity", "n", "m", "value"]);
    let mut row = |m: Option<u64>, value: String| {
        table.push(vec![Cell::Text(q.into()), n.into(), m.map_or(Cell::Empty, Cell::from), Cell::Exact(value)]);
    };
    match q {
        "forests" => row(Some(need_m(cfg)?), count_forests(n, need_m(cfg)?)?.to_string()),
        "pf_root" => row(Some(need_m(cfg)?), pf_root(n, need_m(cfg)?)?.to_string()),
        "pf" => row(Some(need_m(cfg)?), pf(n, need_m(cfg)?)?.to_string()),
        "pf_full" => row(None, pf_full(n)?.to_string()),
        "sp" => row(None, sp(n)?.to_string()),
        "sp_flux" => {
            let p = cfg.flux.unwrap_or(0);
            row(Some(n + p), sp_flux(n, p)?.to_string())
        }
        "mean_height" => row(None, mean_height_exact(n)?.to_string()),
        "mean_distance" => row(None, mean_total_distance_exact(n)?.to_string()),
        "countfp_ratio" => row(Some(need_m(cfg)?), countfp_literal_mismatch(n, need_m(cfg)?)?.to_string()),
        "identities" => {
            table = Table::new(&["identity", "order", "holds", "first_failure"]);
            for r in series_identities(n as usize).into_iter().chain(last_car_check(n as usize)) {
                table.push(vec![
                    Cell::Text(r.name.into()),
                    r.order.into(),
                    r.holds().into(),
                    r.first_failure.map_or(Cell::Empty, Cell::from),
                ]);
            }
        }
        o => return Err(CliError::invalid(format!("enumerate: unknown quantity {o:?}"))),
    }
    Ok((table, Vec::new()))
}

pub fn oracle(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let q = quantity(cfg)?;
    let n = cfg.require_n()?;
    let nu = n as u64;
    let cap = cfg.cap.map_or(DEFAULT_PARKING_CAP, |c| c as u128);
    let (m, brute, formula) = match q {
        "forests" => {
            let m = need_m(cfg)?;
            (m, brute_force_forests(n, m as usize)?, count_forests(nu, m)?)
        }
        "pf_root" | "pf" | "pf_full" | "sp" | "sp_flux" => {
            let m = match q {
                "pf_full" | "sp" => nu,
                "sp_flux" => nu + cfg.flux.unwrap_or(0),
                _ => need_m(cfg)?,
            };
            let census = parking_census(n, m as usize, cap)?;
            let (filter, formula) = match q {
                "pf_root" => (ParkingFilter::nearly_parked(), pf_root(nu, m)?),
                "pf" => (ParkingFilter::all_park(), pf(nu, m)?),
                "pf_full" => (ParkingFilter::all_park(), pf_full(nu)?),
                "sp" => (ParkingFilter::strongly_parked(0), sp(nu)?),
                _ => (ParkingFilter::strongly_parked((m - nu) as usize), sp_flux(nu, m - nu)?),
            };
            (m, census.count(&filter), formula)
        }
        o => return Err(CliError::invalid(format!("oracle: unknown quantity {o:?}"))),
    };
    let mut table = Table::new(&["quantity", "n", "m", "brute_force", "formula", "equal"]);
    table.push(vec![
        Cell::Text(q.into()),
        n.into(),
        m.into(),
        Cell::Exact(brute.to_string()),
        Cell::Exact(formula.to_string()),
        (brute == formula).into(),
    ]);
    Ok((table, Vec::new()))
}

pub fn numerics(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let q = quantity(cfg)?;
    let grid = || cfg.lambda_grid.clone().or_else(|| cfg.x.map(|x| vec![x])).unwrap_or_else(|| vec![0.0]);
    let mut table;
    match q {
        "p1" => {
            table = Table::new(&["x", "p1", "tail_asymptotic"]);
            for x in grid() {
                let tail = match x.total_cmp(&0.0) {
                    std::cmp::Ordering::Less => Cell::Real(p1_left_tail(x)),
                    std::cmp::Ordering::Greater => Cell::Real(p1_right_tail(x)),
                    std::cmp::Ordering::Equal => Cell::Empty,
                };
                table.push(vec![x.into(), airy_p1(x).into(), tail]);
            }
        }
        "airy" => {
            table = Table::new(&["x", "ai", "ai_prime"]);
            for x in grid() {
                table.push(vec![x.into(), airy_ai(x)?.into(), airy_ai_prime(x)?.into()]);
            }
        }
        "p1_normalization" => {
            table = Table::new(&["integral"]);
            table.push(vec![p1_normalization().into()]);
        }
        "walk_pmf" => {
            let n = cfg.require_n()?;
            let m = need_m(cfg)?;
            if m > n as u64 {
                return Err(CliError::invalid("walk_pmf needs m <= n"));
            }
            let prob = walk_pmf(n - m as usize, n);
            let lambda = m_to_lambda(n, m);
            let scaled = (n as f64).powf(2.0 / 3.0) * prob;
            table = Table::new(&["n", "m", "lambda", "probability", "scaled", "p1", "ratio"]);
            table.push(vec![
                n.into(),
                m.into(),
                lambda.into(),
                prob.into(),
                scaled.into(),
                airy_p1(lambda).into(),
                (scaled / airy_p1(lambda)).into(),
            ]);
        }
        "mu" => {
            let k = cfg.n.ok_or_else(|| CliError::invalid("mu needs --n as the step value"))?;
            table = Table::new(&["k", "mu"]);
            table.push(vec![k.into(), mu_pmf(k)?.into()]);
        }
        "britikov" => {
            let n = cfg.n.ok_or_else(|| CliError::invalid("missing --n"))?;
            let m = need_m(cfg)?;
            let (regime, est) = britikov_count(n, m)?;
            let exact = if n <= 20_000 { Cell::Real(big_ln(&count_forests(n, m)?)) } else { Cell::Empty };
            table = Table::new(&["n", "m", "regime", "ln_estimate", "ln_exact"]);
            table.push(vec![n.into(), m.into(), Cell::Text(format!("{regime:?}").to_lowercase()), est.into(), exact]);
        }
        "jump_density" => {
            let x = cfg.x.ok_or_else(|| CliError::invalid("jump_density needs --x"))?;
            let y = cfg.y.ok_or_else(|| CliError::invalid("jump_density needs --y"))?;
            let p = cfg.p.unwrap_or(0.5);
            table = Table::new(&["lambda", "x", "y", "p", "density", "g"]);
            for lambda in cfg.lambda_grid.clone().unwrap_or_else(|| vec![0.0]) {
                table.push(vec![
                    lambda.into(),
                    x.into(),
                    y.into(),
                    p.into(),
                    jump_density(x, lambda, y, p)?.into(),
                    jump_kernel_g(x, lambda, y).into(),
                ]);
            }
        }
        o => return Err(CliError::invalid(format!("numerics: unknown quantity {o:?}"))),
    }
    Ok((table, Vec::new()))
}

pub fn accept(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let profile = match cfg.profile.as_deref() {
        Some("full") => Profile::Full,
        _ => Profile::Quick,
    };
    let ids: Vec<u8> = match &cfg.criteria {
        Some(c) => c.clone(),
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut table = Table::new(&["criterion", "name", "passed", "seconds", "detail"]);
    for id in ids {
        let r = run_criterion(id, profile).ok_or_else(|| CliError::invalid(format!("no criterion {id}")))?;
        eprintln!("{r}");
        table.push(vec![
            r.id.into_cell(),
            Cell::Text(r.name.into()),
            r.passed.into(),
            r.seconds.into(),
            Cell::Text(r.detail),
        ]);
    }
    for note in notes() {
        eprintln!("note: {note}");
        table.push(vec![Cell::Empty, Cell::Text("note".into()), Cell::Empty, Cell::Empty, Cell::Text(note)]);
    }
    Ok((table, Vec::new()))
}

trait IntoCell {
    fn into_cell(self) -> Cell;
}

impl IntoCell for u8 {
    fn into_cell(self) -> Cell {
        Cell::Int(self as i64)
    }
}
