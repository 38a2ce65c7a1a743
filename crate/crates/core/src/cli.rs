//! Configuration, run orchestration, and file output for the `batstrip`
//! binary.
//!
//! A batch of `runs` optimizations uses seeds `seed`, `seed + 1`, and so on.
//! Every run writes one convergence file (CSV by default, JSON on request)
//! into the output directory, and the batch writes a single
//! `aggregate.json` holding the resolved configuration plus one summary per
//! run. Floating-point values are written in shortest round-trip form, so
//! repeating a seeded batch reproduces the output files byte for byte.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bat::{run, BatParams, RunResult, SearchSpace, Termination};
use crate::bench::BenchFunction;
use crate::design::{CouplerObjective, DesignSpec};
use crate::microstrip::{analyze, CouplerAnalysis, CouplerGeometry};

/// Errors that end a command before or during execution.
///
/// Every variant maps to exit code 2; running out of iteration budget is a
/// reported outcome, not an error.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A flag, config field, or argument failed validation.
    #[error("{0}")]
    InvalidInput(String),
    /// An output file or directory could not be written.
    #[error("output failed: {0}")]
    Output(#[from] std::io::Error),
}

impl From<crate::bat::BatError> for CliError {
    fn from(e: crate::bat::BatError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<crate::design::DesignError> for CliError {
    fn from(e: crate::design::DesignError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<crate::bench::BenchError> for CliError {
    fn from(e: crate::bench::BenchError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<crate::microstrip::ModelError> for CliError {
    fn from(e: crate::microstrip::ModelError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

/// Convergence-file format; the aggregate summary is always JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One `iteration,...` row per record.
    Csv,
    /// An array of record objects with the same fields.
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// One layer of optional settings, either a parsed `--config` file or the
/// command-line flags. Later layers override earlier ones field by field.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigPatch {
    pub target_coupling: Option<f64>,
    pub eps_r: Option<f64>,
    pub pop_size: Option<usize>,
    pub fmin: Option<f64>,
    pub fmax: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub r0: Option<f64>,
    pub a0: Option<f64>,
    pub replace_count: Option<usize>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    /// Bounds in flag syntax, `LO:HI,LO:HI,...`.
    pub bounds: Option<String>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl ConfigPatch {
    /// Parses a JSON config file whose keys match the long flag names.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::InvalidInput(format!("cannot read config {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::InvalidInput(format!("bad config {path:?}: {e}")))
    }
}

/// Fully resolved settings for one batch of runs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Optimizer constants.
    pub params: BatParams,
    /// Design target; bench runs ignore it.
    pub design: DesignSpec,
    /// Search box requested via flag or config file, replacing the design
    /// default or the benchmark's conventional domain.
    pub bounds_override: Option<SearchSpace>,
    /// Seed of the first run; run `i` uses `seed + i`.
    pub seed: u64,
    /// Number of runs in the batch.
    pub runs: usize,
    /// Directory receiving the per-run and aggregate files.
    pub out: PathBuf,
    /// Convergence-file format.
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: BatParams::default(),
            design: DesignSpec::default(),
            bounds_override: None,
            seed: 42,
            runs: 1,
            out: PathBuf::from("runs"),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    /// Applies one settings layer on top of this configuration.
    ///
    /// `bounds_dims` is the dimensionality the bounds string must parse to
    /// for the current command.
    pub fn apply(&mut self, patch: &ConfigPatch, bounds_dims: usize) -> Result<(), CliError> {
        if let Some(v) = patch.target_coupling {
            self.design.target_coupling = v;
        }
        if let Some(v) = patch.eps_r {
            self.design.eps_r = v;
        }
        if let Some(v) = patch.pop_size {
            self.params.pop_size = v;
        }
        if let Some(v) = patch.fmin {
            self.params.f_min = v;
        }
        if let Some(v) = patch.fmax {
            self.params.f_max = v;
        }
        if let Some(v) = patch.alpha {
            self.params.alpha = v;
        }
        if let Some(v) = patch.gamma {
            self.params.gamma = v;
        }
        if let Some(v) = patch.r0 {
            self.params.r0 = v;
        }
        if let Some(v) = patch.a0 {
            self.params.a0 = v;
        }
        if let Some(v) = patch.replace_count {
            self.params.replace_count = v;
        }
        if let Some(v) = patch.max_iter {
            self.params.max_iter = v;
        }
        if let Some(v) = patch.tol {
            self.params.tol = v;
        }
        if let Some(ref v) = patch.bounds {
            self.bounds_override = Some(parse_bounds(v, bounds_dims)?);
        }
        if let Some(v) = patch.seed {
            self.seed = v;
        }
        if let Some(v) = patch.runs {
            if v == 0 {
                return Err(CliError::InvalidInput("runs must be at least 1".into()));
            }
            self.runs = v;
        }
        if let Some(ref v) = patch.out {
            self.out = v.clone();
        }
        if let Some(ref v) = patch.format {
            self.format = v.parse().map_err(CliError::InvalidInput)?;
        }
        Ok(())
    }
}

/// Parses `LO:HI,LO:HI,...` into a search space of exactly `dims` pairs.
pub fn parse_bounds(text: &str, dims: usize) -> Result<SearchSpace, CliError> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for part in text.split(',') {
        let (lo, hi) = part.split_once(':').ok_or_else(|| {
            CliError::InvalidInput(format!("bounds pair '{part}' must look like LO:HI"))
        })?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::InvalidInput(format!("bad bound '{s}' in '{text}'")))
        };
        lower.push(parse(lo)?);
        upper.push(parse(hi)?);
    }
    if lower.len() != dims {
        return Err(CliError::InvalidInput(format!(
            "bounds '{text}' has {} pairs, need {dims}",
            lower.len()
        )));
    }
    Ok(SearchSpace::new(lower, upper)?)
}

/// Shortest decimal string that round-trips to the same `f64`.
pub fn fmt_full(v: f64) -> String {
    format!("{v}")
}

/// A value rounded for display to six significant digits.
pub fn fmt_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0.00000".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (5 - exponent).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}

/// First recorded iteration whose best cost is at or below `threshold`.
///
/// Returns `Some(0)` for a run whose initial population already satisfied
/// the stopping rule (it has no records), and `None` when the run never got
/// down to `threshold`.
pub fn first_iteration_at_or_below(result: &RunResult, threshold: f64) -> Option<usize> {
    if result.history.is_empty() {
        return (result.best_fitness <= threshold).then_some(0);
    }
    result
        .history
        .iter()
        .find(|r| r.best_fitness <= threshold)
        .map(|r| r.iteration)
}

fn termination_label(t: Termination) -> &'static str {
    match t {
        Termination::ToleranceReached => "ToleranceReached",
        Termination::MaxIterations => "MaxIterations",
    }
}

#[derive(Serialize)]
struct AggregateOut<'a> {
    config: &'a ConfigOut<'a>,
    runs: &'a [RunSummaryOut],
}

#[derive(Serialize)]
struct ConfigOut<'a> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    function: Option<&'a str>,
    dims: usize,
    pop_size: usize,
    fmin: f64,
    fmax: f64,
    alpha: f64,
    gamma: f64,
    r0: f64,
    a0: f64,
    replace_count: usize,
    max_iter: usize,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_coupling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    penalty_weight: Option<f64>,
    bounds_lower: Vec<f64>,
    bounds_upper: Vec<f64>,
    seed: u64,
    runs: usize,
    format: String,
}

#[derive(Serialize)]
struct RunSummaryOut {
    seed: u64,
    terminated: &'static str,
    iterations_used: usize,
    best_fitness: f64,
    best_position: Vec<f64>,
    #[serde(rename = "iterations_to_0.01", skip_serializing_if = "Option::is_none")]
    iterations_to_coarse: Option<usize>,
    #[serde(rename = "iterations_to_1e-6", skip_serializing_if = "Option::is_none")]
    iterations_to_fine: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<CouplerGeometry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<CouplerAnalysis>,
}

/// What a batch hands back to the binary.
pub struct BatchReport {
    /// Human-readable per-run table plus a closing status line.
    pub text: String,
    /// True when any run stopped on the iteration budget; maps to exit 3.
    pub budget_exhausted: bool,
}

fn run_file_path(out: &Path, seed: u64, format: OutputFormat) -> PathBuf {
    out.join(format!("run_{seed}.{}", format.extension()))
}

fn write_design_convergence(
    path: &Path,
    result: &RunResult,
    spec: &DesignSpec,
) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    let row = |r: &crate::bat::ConvergenceRecord| -> Result<Vec<String>, CliError> {
        let (w, s, h) = (r.best_position[0], r.best_position[1], r.best_position[2]);
        let a = analyze(&CouplerGeometry {
            w,
            s,
            h,
            eps_r: spec.eps_r,
        })?;
        Ok(vec![
            r.iteration.to_string(),
            fmt_full(r.best_fitness),
            fmt_full(w),
            fmt_full(s),
            fmt_full(h),
            fmt_full(a.zoe),
            fmt_full(a.zoo),
            fmt_full(a.coupling),
        ])
    };
    write_rows(
        &mut file,
        &[
            "iteration",
            "best_fitness",
            "w",
            "s",
            "h",
            "zoe",
            "zoo",
            "coupling",
        ],
        result.history.iter().map(row),
    )?;
    file.flush()?;
    Ok(())
}

fn write_bench_convergence(path: &Path, result: &RunResult, dims: usize) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    let mut header = vec!["iteration".to_string(), "best_fitness".to_string()];
    header.extend((1..=dims).map(|d| format!("x{d}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let row = |r: &crate::bat::ConvergenceRecord| -> Result<Vec<String>, CliError> {
        let mut cells = vec![r.iteration.to_string(), fmt_full(r.best_fitness)];
        cells.extend(r.best_position.iter().map(|v| fmt_full(*v)));
        Ok(cells)
    };
    write_rows(&mut file, &header_refs, result.history.iter().map(row))?;
    file.flush()?;
    Ok(())
}

fn write_rows<I>(file: &mut BufWriter<File>, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: Iterator<Item = Result<Vec<String>, CliError>>,
{
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        writeln!(file, "{}", row?.join(","))?;
    }
    Ok(())
}

fn write_json_records(path: &Path, header: &[&str], rows: Vec<Vec<f64>>) -> Result<(), CliError> {
    let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .into_iter()
        .map(|row| {
            header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect()
        })
        .collect();
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, &objects)
        .map_err(|e| CliError::InvalidInput(format!("serialization failed: {e}")))?;
    writeln!(file)?;
    file.flush()?;
    Ok(())
}

fn design_convergence_json(
    path: &Path,
    result: &RunResult,
    spec: &DesignSpec,
) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(result.history.len());
    for r in &result.history {
        let (w, s, h) = (r.best_position[0], r.best_position[1], r.best_position[2]);
        let a = analyze(&CouplerGeometry {
            w,
            s,
            h,
            eps_r: spec.eps_r,
        })?;
        rows.push(vec![
            r.iteration as f64,
            r.best_fitness,
            w,
            s,
            h,
            a.zoe,
            a.zoo,
            a.coupling,
        ]);
    }
    write_json_records(
        path,
        &[
            "iteration",
            "best_fitness",
            "w",
            "s",
            "h",
            "zoe",
            "zoo",
            "coupling",
        ],
        rows,
    )
}

fn bench_convergence_json(path: &Path, result: &RunResult, dims: usize) -> Result<(), CliError> {
    let mut header = vec!["iteration".to_string(), "best_fitness".to_string()];
    header.extend((1..=dims).map(|d| format!("x{d}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = result
        .history
        .iter()
        .map(|r| {
            let mut row = vec![r.iteration as f64, r.best_fitness];
            row.extend(&r.best_position);
            row
        })
        .collect();
    write_json_records(path, &header_refs, rows)
}

fn write_aggregate(
    path: &Path,
    config: &ConfigOut<'_>,
    runs: &[RunSummaryOut],
) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, &AggregateOut { config, runs })
        .map_err(|e| CliError::InvalidInput(format!("serialization failed: {e}")))?;
    writeln!(file)?;
    file.flush()?;
    Ok(())
}

/// Analyzes one geometry and renders the header and value row used by the
/// `analyze` subcommand, six significant digits per column.
pub fn cmd_analyze(w: f64, s: f64, h: f64, eps_r: f64) -> Result<String, CliError> {
    let geometry = CouplerGeometry::new(w, s, h, eps_r)?;
    let a = analyze(&geometry)?;
    let header = format!(
        "{:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "w", "s", "h", "whse", "whso", "zoe", "zoo", "coupling"
    );
    let row = format!(
        "{:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        fmt_sig6(w),
        fmt_sig6(s),
        fmt_sig6(h),
        fmt_sig6(a.whse),
        fmt_sig6(a.whso),
        fmt_sig6(a.zoe),
        fmt_sig6(a.zoo),
        fmt_sig6(a.coupling)
    );
    Ok(format!("{header}\n{row}"))
}

/// Runs a batch of coupler designs, writing per-run convergence files and
/// the aggregate summary into `config.out`.
pub fn cmd_design(config: &RunConfig) -> Result<BatchReport, CliError> {
    config.params.validate()?;
    let mut design = config.design.clone();
    if let Some(ref bounds) = config.bounds_override {
        design.bounds = bounds.clone();
    }
    let objective = CouplerObjective::new(design)?;
    let design = objective.spec();
    fs::create_dir_all(&config.out)?;

    let mut text = format!(
        "{:>4} {:>12} {:>9} {:>9} {:>9} {:>8} {:>8} {:>9} {:>9} {:>9} {:>6} {}\n",
        "run", "seed", "w", "s", "h", "whse", "whso", "zoe", "zoo", "coupling", "iters", "status"
    );
    let mut summaries = Vec::with_capacity(config.runs);
    let mut budget_exhausted = false;

    for i in 0..config.runs {
        let seed = config.seed.wrapping_add(i as u64);
        let result = run(&objective, &config.params, &design.bounds, seed)?;
        let path = run_file_path(&config.out, seed, config.format);
        match config.format {
            OutputFormat::Csv => write_design_convergence(&path, &result, design)?,
            OutputFormat::Json => design_convergence_json(&path, &result, design)?,
        }

        let (w, s, h) = (
            result.best_position[0],
            result.best_position[1],
            result.best_position[2],
        );
        let geometry = CouplerGeometry {
            w,
            s,
            h,
            eps_r: design.eps_r,
        };
        let a = analyze(&geometry)?;
        let status = termination_label(result.terminated);
        if result.terminated == Termination::MaxIterations {
            budget_exhausted = true;
        }
        text.push_str(&format!(
            "{:>4} {:>12} {:>9} {:>9} {:>9} {:>8} {:>8} {:>9} {:>9} {:>9} {:>6} {}\n",
            i + 1,
            seed,
            fmt_sig6(w),
            fmt_sig6(s),
            fmt_sig6(h),
            fmt_sig6(a.whse),
            fmt_sig6(a.whso),
            fmt_sig6(a.zoe),
            fmt_sig6(a.zoo),
            fmt_sig6(a.coupling),
            result.iterations_used,
            status
        ));
        summaries.push(RunSummaryOut {
            seed,
            terminated: status,
            iterations_used: result.iterations_used,
            best_fitness: result.best_fitness,
            best_position: result.best_position.clone(),
            iterations_to_coarse: first_iteration_at_or_below(&result, 0.01),
            iterations_to_fine: first_iteration_at_or_below(&result, 1e-6),
            geometry: Some(geometry),
            analysis: Some(a),
        });
    }

    let config_out = ConfigOut {
        command: "design",
        function: None,
        dims: 3,
        pop_size: config.params.pop_size,
        fmin: config.params.f_min,
        fmax: config.params.f_max,
        alpha: config.params.alpha,
        gamma: config.params.gamma,
        r0: config.params.r0,
        a0: config.params.a0,
        replace_count: config.params.replace_count,
        max_iter: config.params.max_iter,
        tol: config.params.tol,
        target_coupling: Some(design.target_coupling),
        eps_r: Some(design.eps_r),
        z_min: Some(design.z_min),
        z_max: Some(design.z_max),
        penalty_weight: Some(design.penalty_weight),
        bounds_lower: design.bounds.lower().to_vec(),
        bounds_upper: design.bounds.upper().to_vec(),
        seed: config.seed,
        runs: config.runs,
        format: config.format.to_string(),
    };
    write_aggregate(&config.out.join("aggregate.json"), &config_out, &summaries)?;

    text.push_str(&closing_line(config.runs, budget_exhausted));
    Ok(BatchReport {
        text,
        budget_exhausted,
    })
}

/// Runs a batch of benchmark optimizations on the function's conventional
/// domain, or on the configured bounds override.
pub fn cmd_bench(function: &str, dims: usize, config: &RunConfig) -> Result<BatchReport, CliError> {
    config.params.validate()?;
    let objective = BenchFunction::by_name(function, dims)?;
    let space = match config.bounds_override {
        Some(ref bounds) => {
            if bounds.dims() != dims {
                return Err(CliError::InvalidInput(format!(
                    "bounds cover {} dimensions, benchmark needs {dims}",
                    bounds.dims()
                )));
            }
            bounds.clone()
        }
        None => objective.default_bounds.clone(),
    };
    fs::create_dir_all(&config.out)?;

    let mut text = format!(
        "{:>4} {:>12} {:>14} {:>6} {}\n",
        "run", "seed", "best_fitness", "iters", "status"
    );
    let mut summaries = Vec::with_capacity(config.runs);
    let mut budget_exhausted = false;

    for i in 0..config.runs {
        let seed = config.seed.wrapping_add(i as u64);
        let result = run(&objective, &config.params, &space, seed)?;
        let path = run_file_path(&config.out, seed, config.format);
        match config.format {
            OutputFormat::Csv => write_bench_convergence(&path, &result, dims)?,
            OutputFormat::Json => bench_convergence_json(&path, &result, dims)?,
        }
        let status = termination_label(result.terminated);
        if result.terminated == Termination::MaxIterations {
            budget_exhausted = true;
        }
        text.push_str(&format!(
            "{:>4} {:>12} {:>14} {:>6} {}\n",
            i + 1,
            seed,
            fmt_sig6(result.best_fitness),
            result.iterations_used,
            status
        ));
        summaries.push(RunSummaryOut {
            seed,
            terminated: status,
            iterations_used: result.iterations_used,
            best_fitness: result.best_fitness,
            best_position: result.best_position.clone(),
            iterations_to_coarse: first_iteration_at_or_below(&result, 0.01),
            iterations_to_fine: first_iteration_at_or_below(&result, 1e-6),
            geometry: None,
            analysis: None,
        });
    }

    let config_out = ConfigOut {
        command: "bench",
        function: Some(objective.name),
        dims,
        pop_size: config.params.pop_size,
        fmin: config.params.f_min,
        fmax: config.params.f_max,
        alpha: config.params.alpha,
        gamma: config.params.gamma,
        r0: config.params.r0,
        a0: config.params.a0,
        replace_count: config.params.replace_count,
        max_iter: config.params.max_iter,
        tol: config.params.tol,
        target_coupling: None,
        eps_r: None,
        z_min: None,
        z_max: None,
        penalty_weight: None,
        bounds_lower: space.lower().to_vec(),
        bounds_upper: space.upper().to_vec(),
        seed: config.seed,
        runs: config.runs,
        format: config.format.to_string(),
    };
    write_aggregate(&config.out.join("aggregate.json"), &config_out, &summaries)?;

    text.push_str(&closing_line(config.runs, budget_exhausted));
    Ok(BatchReport {
        text,
        budget_exhausted,
    })
}

fn closing_line(runs: usize, budget_exhausted: bool) -> String {
    if budget_exhausted {
        format!("{runs} run(s) finished; at least one exhausted its iteration budget\n")
    } else {
        format!("{runs} run(s) finished; all reached tolerance\n")
    }
}
