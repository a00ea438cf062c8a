//! Experiment configuration: command-line flags over an optional flat
//! `key = value` file, validated before anything runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use crate::error::CliError;

#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// Flat key = value file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Edges, cars or minimum coupling length, depending on the subcommand.
    #[arg(long)]
    pub m: Option<u64>,
    /// Comma list of values or `start:stop:step`.
    #[arg(long = "lambda-grid", allow_hyphen_values = true)]
    pub lambda_grid: Option<String>,
    /// Comma list of sizes or `start:stop:step` (sweep).
    #[arg(long = "n-grid")]
    pub n_grid: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// quick or full (accept).
    #[arg(long)]
    pub profile: Option<String>,
    /// What to compute (enumerate, oracle, numerics).
    #[arg(long)]
    pub quantity: Option<String>,
    /// tree, mapping or both.
    #[arg(long)]
    pub kind: Option<String>,
    /// Flux parameter of strongly parked counts.
    #[arg(long)]
    pub flux: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Largest number of offered edges, or of brute-force configurations for `oracle`.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Component sizes kept per snapshot.
    #[arg(long)]
    pub top: Option<usize>,
    /// Comma list of acceptance criteria to run.
    #[arg(long)]
    pub criteria: Option<String>,
    /// Fault injected into couple-verify runs: reverse or mutate:<step>.
    #[arg(long)]
    pub fault: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Resolved settings of one invocation. Unset optional values stay `None` and
/// each subcommand applies its own defaults.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: String,
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub lambda_grid: Option<Vec<f64>>,
    pub n_grid: Option<Vec<u64>>,
    pub p: Option<f64>,
    pub replicas: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub profile: Option<String>,
    pub quantity: Option<String>,
    pub kind: Option<String>,
    pub flux: Option<u64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub cap: Option<u64>,
    pub top: usize,
    pub criteria: Option<Vec<u8>>,
    pub fault: Option<String>,
}

const KEYS: [&str; 20] = [
    "n",
    "m",
    "lambda-grid",
    "n-grid",
    "p",
    "replicas",
    "seed",
    "out",
    "format",
    "profile",
    "quantity",
    "kind",
    "flux",
    "x",
    "y",
    "cap",
    "top",
    "criteria",
    "fault",
    "config",
];

/// Parses `key = value` lines; `#` starts a comment, underscores in keys read
/// as dashes.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) || k == "config" {
            return Err(CliError::invalid(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::invalid(format!("config line {}: duplicate key {k:?}", i + 1)));
        }
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::invalid(format!("{key}: cannot parse {v:?}")))
}

/// `a,b,c` or `start:stop:step` with both ends included.
pub fn parse_grid(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let v = if parts.len() == 3 {
        let (a, b, h): (f64, f64, f64) =
            (parse_value(key, parts[0])?, parse_value(key, parts[1])?, parse_value(key, parts[2])?);
        if !(h > 0.0) || !(b >= a) || ((b - a) / h) > 1e6 {
            return Err(CliError::invalid(format!("{key}: bad range {s:?}")));
        }
        let k = ((b - a) / h + 1e-9).floor() as usize;
        (0..=k).map(|i| a + i as f64 * h).collect()
    } else {
        s.split(',').map(|x| parse_value(key, x.trim())).collect::<Result<Vec<f64>, _>>()?
    };
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::invalid(format!("{key}: empty or non-finite grid")));
    }
    Ok(v)
}

fn parse_int_grid(key: &str, s: &str) -> Result<Vec<u64>, CliError> {
    let g = parse_grid(key, s)?;
    g.iter()
        .map(|&x| {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as u64)
            } else {
                Err(CliError::invalid(format!("{key}: {x} is not a positive integer")))
            }
        })
        .collect()
}

impl ExperimentConfig {
    pub fn resolve(subcommand: &str, flags: &Flags, default_format: Format) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => load(path)?,
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);
        macro_rules! pick {
            ($field:ident, $key:expr) => {
                match &flags.$field {
                    Some(v) => Some(v.clone()),
                    None => get($key).map(|v| parse_value($key, v)).transpose()?,
                }
            };
        }
        let n: Option<u64> = pick!(n, "n");
        let m: Option<u64> = pick!(m, "m");
        let p: Option<f64> = pick!(p, "p");
        let replicas: Option<u64> = pick!(replicas, "replicas");
        let seed: Option<u64> = pick!(seed, "seed");
        let out: Option<PathBuf> = pick!(out, "out");
        let flux: Option<u64> = pick!(flux, "flux");
        let x: Option<f64> = pick!(x, "x");
        let y: Option<f64> = pick!(y, "y");
        let cap: Option<u64> = pick!(cap, "cap");
        let top: Option<usize> = pick!(top, "top");
        let text = |f: &Option<String>, k: &str| f.clone().or_else(|| get(k).map(str::to_string));
        let format = match text(&flags.format, "format").as_deref() {
            None => default_format,
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(o) => return Err(CliError::invalid(format!("format: expected csv or json, got {o:?}"))),
        };
        let lambda_grid = text(&flags.lambda_grid, "lambda-grid").map(|s| parse_grid("lambda-grid", &s)).transpose()?;
        let n_grid = text(&flags.n_grid, "n-grid").map(|s| parse_int_grid("n-grid", &s)).transpose()?;
        let criteria = text(&flags.criteria, "criteria")
            .map(|s| s.split(',').map(|c| parse_value::<u8>("criteria", c.trim())).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        let cfg = Self {
            subcommand: subcommand.to_string(),
            n,
            m,
            lambda_grid,
            n_grid,
            p,
            replicas: replicas.unwrap_or(1),
            seed: seed.unwrap_or(0),
            out,
            format,
            profile: text(&flags.profile, "profile"),
            quantity: text(&flags.quantity, "quantity"),
            kind: text(&flags.kind, "kind"),
            flux,
            x,
            y,
            cap,
            top: top.unwrap_or(3),
            criteria,
            fault: text(&flags.fault, "fault"),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n == Some(0) {
            return Err(CliError::invalid_size("n must be at least 1"));
        }
        if self.n.is_some_and(|n| n > u32::MAX as u64) {
            return Err(CliError::invalid_size("n must fit in 32 bits"));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::invalid(format!("p must lie in [0, 1], got {p}")));
            }
        }
        if self.replicas == 0 {
            return Err(CliError::invalid("replicas must be at least 1"));
        }
        if let Some(k) = &self.kind {
            if !["tree", "mapping", "both"].contains(&k.as_str()) {
                return Err(CliError::invalid(format!("kind: expected tree, mapping or both, got {k:?}")));
            }
        }
        if let Some(p) = &self.profile {
            if p != "quick" && p != "full" {
                return Err(CliError::invalid(format!("profile: expected quick or full, got {p:?}")));
            }
        }
        Ok(())
    }

    /// `key=value` lines echoing the resolved settings.
    pub fn echo(&self) -> Vec<String> {
        let v = serde_json::to_value(self).expect("config serializes");
        let mut out = Vec::new();
        if let serde_json::Value::Object(map) = v {
            for (k, v) in map {
                if !v.is_null() {
                    out.push(format!("{k}={v}"));
                }
            }
        }
        out
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.map(|n| n as usize).ok_or_else(|| CliError::invalid("missing --n"))
    }
}

fn load(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse_file(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("g", "-1:1:0.5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("g", "0.25, 3").unwrap(), vec![0.25, 3.0]);
        assert!(parse_grid("g", "1:0:1").is_err());
        assert!(parse_grid("g", "a").is_err());
        assert_eq!(parse_int_grid("g", "100,1000").unwrap(), vec![100, 1000]);
        assert!(parse_int_grid("g", "1.5").is_err());
    }

    #[test]
    fn file_parsing() {
        let f = parse_file("n = 10 # size\n\nlambda_grid=-1,0\n").unwrap();
        assert_eq!(f["n"], "10");
        assert_eq!(f["lambda-grid"], "-1,0");
        assert!(parse_file("bogus = 1").is_err());
        assert!(parse_file("n = 1\nn = 2").is_err());
        assert!(parse_file("n").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = std::env::temp_dir().join(format!("fpark-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.txt");
        fs::write(&path, "n = 10\nseed = 7\n").unwrap();
        let flags = Flags { config: Some(path), n: Some(20), ..Flags::default() };
        let c = ExperimentConfig::resolve("simulate-frozen", &flags, Format::Csv).unwrap();
        assert_eq!(c.n, Some(20));
        assert_eq!(c.seed, 7);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn validation() {
        let bad = Flags { n: Some(0), ..Flags::default() };
        assert_eq!(ExperimentConfig::resolve("x", &bad, Format::Csv).unwrap_err().code(), 2);
        let bad = Flags { p: Some(1.5), ..Flags::default() };
        assert!(ExperimentConfig::resolve("x", &bad, Format::Csv).is_err());
        let bad = Flags { format: Some("xml".into()), ..Flags::default() };
        assert!(ExperimentConfig::resolve("x", &bad, Format::Csv).is_err());
    }
}
