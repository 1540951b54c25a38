//! Iteration-count sweeps over the relaxation factor and their text formats:
//! sweep CSV, key-value config files and edge-condition syntax.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::{initial_guess, BoundarySet, EdgeCondition, GridSpec};
use crate::operator::DiscreteOperator;
use crate::solver::{Sor, SorVariant, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use crate::stencil::Scheme;

pub const DEFAULT_OMEGA_STEP: f64 = 0.005;
pub const CSV_HEADER: [&str; 4] = ["omega", "iterations", "final_norm", "converged"];

/// Inclusive grid `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl OmegaRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start > 0.0 && stop < 2.0 && start <= stop) {
            return Err(Error::InvalidConfig(format!(
                "omega range [{start}, {stop}] must satisfy 0 < start <= stop < 2"
            )));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidConfig(format!("omega step {step} must be positive")));
        }
        Ok(Self { start, stop, step })
    }

    /// The grid points, rounded to 12 decimals so that decimal steps stay
    /// exact in the output.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .filter(|w| *w > 0.0 && *w < 2.0)
            .collect()
    }
}

pub fn omega_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    Ok(OmegaRange::new(start, stop, step)?.values())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub bcs: BoundarySet,
    pub scheme: Scheme,
    pub variant: SorVariant,
    pub omega: OmegaRange,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Default tolerance and budget, `omega` over `[1, 1.995]` in steps of
    /// 0.005.
    pub fn new(grid: GridSpec, bcs: BoundarySet, scheme: Scheme, variant: SorVariant) -> Self {
        Self {
            grid,
            bcs,
            scheme,
            variant,
            omega: OmegaRange { start: 1.0, stop: 1.995, step: DEFAULT_OMEGA_STEP },
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            output: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct SweepRecord {
    pub omega: f64,
    pub iterations: usize,
    pub final_norm: f64,
    pub converged: bool,
}

/// One protocol run per grid value of `omega`, in parallel, ordered by
/// `omega`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    config.bcs.ensure_solvable()?;
    if !(config.tolerance > 0.0) || config.max_iterations == 0 {
        return Err(Error::InvalidConfig("tolerance and max_iterations must be positive".into()));
    }
    let omegas = OmegaRange::new(config.omega.start, config.omega.stop, config.omega.step)?.values();
    let sor = Sor::new(
        DiscreteOperator::new(&config.grid, &config.bcs, config.scheme)?,
        config.variant,
    );
    omegas
        .par_iter()
        .map(|&omega| {
            let mut field = initial_guess(&config.grid, &config.bcs);
            let r = sor.iterate(&mut field, omega, config.tolerance, config.max_iterations)?;
            Ok(SweepRecord {
                omega,
                iterations: r.iterations,
                final_norm: r.final_norm,
                converged: r.converged,
            })
        })
        .collect()
}

/// Converged record with the fewest iterations; ties go to the smaller
/// `omega`.
pub fn sweep_minimum(records: &[SweepRecord]) -> Option<SweepRecord> {
    records
        .iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.iterations.cmp(&b.iterations).then(a.omega.total_cmp(&b.omega)))
        .copied()
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `# key=value` metadata lines, the CSV table, then `# key=value`
/// summary lines.
pub fn write_sweep_csv<W: Write>(
    mut out: W,
    metadata: &[(String, String)],
    records: &[SweepRecord],
    summary: &[(String, String)],
) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("write failed: {e}"));
    for (k, v) in metadata {
        writeln!(out, "# {k}={v}").map_err(io)?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let csv_err = |e: csv::Error| Error::Parse(format!("write failed: {e}"));
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in records {
            w.write_record([
                format_real(r.omega),
                r.iterations.to_string(),
                format_real(r.final_norm),
                r.converged.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
    }
    for (k, v) in summary {
        writeln!(out, "# {k}={v}").map_err(io)?;
    }
    Ok(())
}

/// Parsed sweep CSV: records plus the text of every `#` line.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub records: Vec<SweepRecord>,
    pub comments: Vec<String>,
}

impl SweepTable {
    /// Value of a `# key=value` comment.
    pub fn comment(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| c.strip_prefix(key)?.strip_prefix('='))
    }
}

pub fn parse_sweep_csv(text: &str) -> Result<SweepTable> {
    let comments = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(|l| l.trim().to_string())
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("sweep CSV header: {e}")))?;
    if headers.iter().map(str::trim).ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected sweep CSV header {headers:?}")));
    }
    let records = reader
        .deserialize()
        .map(|r| r.map_err(|e: csv::Error| Error::Parse(format!("sweep CSV row: {e}"))))
        .collect::<Result<Vec<SweepRecord>>>()?;
    Ok(SweepTable { records, comments })
}

/// `dirichlet`, `neumann` or `robin:a,b` (case-insensitive).
pub fn parse_edge_condition(text: &str) -> Result<EdgeCondition> {
    let t = text.trim().to_ascii_lowercase();
    match t.as_str() {
        "dirichlet" => return Ok(EdgeCondition::Dirichlet),
        "neumann" => return Ok(EdgeCondition::Neumann),
        _ => {}
    }
    let coefs = t
        .strip_prefix("robin:")
        .ok_or_else(|| Error::Parse(format!("unknown boundary condition `{text}`")))?;
    let (a, b) = coefs
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("Robin condition `{text}` needs two coefficients")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad Robin coefficient `{}` in `{text}`", s.trim())))
    };
    EdgeCondition::robin(num(a)?, num(b)?)
}

/// Settings read from a key-value config file. Every field is optional;
/// command-line flags fill or override them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub scheme: Option<Scheme>,
    pub variant: Option<SorVariant>,
    pub bc_left: Option<EdgeCondition>,
    pub bc_right: Option<EdgeCondition>,
    pub bc_bottom: Option<EdgeCondition>,
    pub bc_top: Option<EdgeCondition>,
    pub omega_start: Option<f64>,
    pub omega_stop: Option<f64>,
    pub omega_step: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped. Keys match the long flag names; `_` and `-` are interchangeable.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().replace('_', "-").to_ascii_lowercase();
        let value = value.trim();
        let real = |v: &str| v.parse::<f64>().map_err(|_| err(format!("`{key}` needs a number, got `{v}`")));
        let count = |v: &str| v.parse::<usize>().map_err(|_| err(format!("`{key}` needs an integer, got `{v}`")));
        let relabel = |e: Error| err(e.to_string());
        let duplicate = match key.as_str() {
            "nx" => cfg.nx.replace(count(value)?).is_some(),
            "ny" => cfg.ny.replace(count(value)?).is_some(),
            "scheme" => cfg.scheme.replace(value.parse().map_err(relabel)?).is_some(),
            "variant" => cfg.variant.replace(value.parse().map_err(relabel)?).is_some(),
            "bc-left" => cfg.bc_left.replace(parse_edge_condition(value).map_err(relabel)?).is_some(),
            "bc-right" => cfg.bc_right.replace(parse_edge_condition(value).map_err(relabel)?).is_some(),
            "bc-bottom" => cfg.bc_bottom.replace(parse_edge_condition(value).map_err(relabel)?).is_some(),
            "bc-top" => cfg.bc_top.replace(parse_edge_condition(value).map_err(relabel)?).is_some(),
            "omega-start" => cfg.omega_start.replace(real(value)?).is_some(),
            "omega-stop" => cfg.omega_stop.replace(real(value)?).is_some(),
            "omega-step" => cfg.omega_step.replace(real(value)?).is_some(),
            "tol" => cfg.tol.replace(real(value)?).is_some(),
            "max-iters" => cfg.max_iters.replace(count(value)?).is_some(),
            "out" => {
                if value.is_empty() {
                    return Err(err("`out` needs a path".into()));
                }
                cfg.out.replace(PathBuf::from(value)).is_some()
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        };
        if duplicate {
            return Err(err(format!("`{key}` given twice")));
        }
    }
    Ok(cfg)
}

/// Gnuplot script plotting iterations against `omega` from `csv_path`, with
/// an optional vertical marker at the predicted optimum.
pub fn plot_script(csv_path: &str, title: &str, predicted: Option<f64>) -> String {
    let quote = |s: &str| s.replace('\'', "''");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 'omega'\n");
    s.push_str("set ylabel 'iterations'\n");
    s.push_str("set logscale y\n");
    s.push_str(&format!("set title '{}'\n", quote(title)));
    if let Some(w) = predicted {
        s.push_str(&format!("set arrow from {w}, graph 0 to {w}, graph 1 nohead dashtype 2\n"));
    }
    s.push_str(&format!("plot '{}' using 1:2 with linespoints\n", quote(csv_path)));
    s
}
