//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation or check fails, 2 for
//! usage and validation errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::format;
use crate::gauge;
use crate::model::{parse_twice_mu, ProblemSpec};
use crate::radial::{sector_compare, RadialGrid, SectorSpec, BASE_POINTS, WAVEFUNCTION_CSV_HEADER};
use crate::reptheory::{branching_check, degeneracy};
use crate::spectrum::spectrum_table;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_validation() => EXIT_USAGE,
            CliError::Core(_) | CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Radial,
    Degeneracy,
    GaugeCheck,
    Verify,
}

/// Fully merged and validated settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec: ProblemSpec,
    pub sector: u32,
    pub i_max: u32,
    pub levels: u32,
    /// `None` selects [`RadialGrid::auto`].
    pub grid_points: Option<usize>,
    pub x_max: Option<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub wavefunctions: Option<PathBuf>,
    pub quick: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "genkepler",
    version,
    about = "Generalized Kepler problems: spectra, radial solvers and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Closed-form spectrum table with degeneracies.
    Spectrum(Opts),
    /// Finite-difference and shooting solutions of one angular sector.
    Radial(Opts),
    /// Sector degeneracies and the branching dimension check.
    Degeneracy(Opts),
    /// Residuals of the gauge-potential identities.
    GaugeCheck(Opts),
    /// The full acceptance suite.
    Verify(Opts),
}

#[derive(Debug, Args, Default)]
struct Opts {
    #[arg(long)]
    dim: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Magnetic charge: an integer or a half-integer such as 1/2 or -3/2.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    imax: Option<String>,
    #[arg(long)]
    sector: Option<String>,
    #[arg(long)]
    levels: Option<String>,
    /// Number of interior grid points; chosen from the sector when absent.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    xmax: Option<String>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Line-oriented `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for per-state wavefunction CSVs (radial only).
    #[arg(long)]
    wavefunctions: Option<PathBuf>,
    #[arg(long)]
    quick: bool,
}

const CONFIG_KEYS: &[&str] = &[
    "dim",
    "kappa",
    "mu",
    "imax",
    "sector",
    "levels",
    "grid",
    "xmax",
    "format",
    "out",
    "wavefunctions",
    "quick",
];

/// Parses a `key = value` config file body.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_ascii_lowercase();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn number<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("malformed value for {key}: `{text}`")))
}

fn boolean(key: &str, text: &str) -> Result<bool, CliError> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(CliError::Usage(format!(
            "malformed value for {key}: `{other}`"
        ))),
    }
}

/// Parses argv (including the program name) into a validated configuration.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    let (command, opts) = match cli.command {
        Sub::Spectrum(o) => (Command::Spectrum, o),
        Sub::Radial(o) => (Command::Radial, o),
        Sub::Degeneracy(o) => (Command::Degeneracy, o),
        Sub::GaugeCheck(o) => (Command::GaugeCheck, o),
        Sub::Verify(o) => (Command::Verify, o),
    };
    let mut file = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let mut pick = |key: &str, flag: &Option<String>| flag.clone().or_else(|| file.remove(key));

    let dim = pick("dim", &opts.dim).map_or(Ok(3), |v| number::<u32>("dim", &v))?;
    let kappa = pick("kappa", &opts.kappa).map_or(Ok(0.0), |v| number::<f64>("kappa", &v))?;
    let twice_mu = match pick("mu", &opts.mu) {
        Some(v) => parse_twice_mu(&v)?,
        None => 0,
    };
    let i_max = pick("imax", &opts.imax).map_or(Ok(5), |v| number("imax", &v))?;
    let sector = pick("sector", &opts.sector).map_or(Ok(0), |v| number("sector", &v))?;
    let levels: u32 = pick("levels", &opts.levels).map_or(Ok(3), |v| number("levels", &v))?;
    let grid_points = pick("grid", &opts.grid)
        .map(|v| number::<usize>("grid", &v))
        .transpose()?;
    let x_max = pick("xmax", &opts.xmax)
        .map(|v| number::<f64>("xmax", &v))
        .transpose()?;
    let format = match (opts.format, file.remove("format")) {
        (Some(f), _) => f,
        (None, Some(v)) => OutputFormat::from_str(v.trim(), true)
            .map_err(|_| CliError::Usage(format!("malformed value for format: `{v}`")))?,
        (None, None) => OutputFormat::Csv,
    };
    let out = opts.out.or_else(|| file.remove("out").map(PathBuf::from));
    let wavefunctions = opts
        .wavefunctions
        .or_else(|| file.remove("wavefunctions").map(PathBuf::from));
    let quick = opts.quick
        || match file.remove("quick") {
            Some(v) => boolean("quick", &v)?,
            None => false,
        };

    let spec = ProblemSpec::new(dim, kappa, twice_mu)?;
    if levels == 0 {
        return Err(CliError::Usage("levels must be at least 1".into()));
    }
    if let Some(x) = x_max {
        RadialGrid::new(grid_points.unwrap_or(BASE_POINTS), x)?;
    }
    if let Some(n) = grid_points {
        RadialGrid::new(n, 1.0)?;
    }
    Ok(RunConfig {
        command,
        spec,
        sector,
        i_max,
        levels,
        grid_points,
        x_max,
        format,
        out,
        wavefunctions,
        quick,
    })
}

/// Aligns the columns of a CSV document for terminal display.
pub fn csv_to_table(csv: &str) -> String {
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; cols];
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:>w$}", w = widths[i]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Emitted text plus the exit status of a successful dispatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub body: String,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

fn render(config: &RunConfig, csv: String) -> String {
    match config.format {
        OutputFormat::Csv => csv,
        OutputFormat::Table => csv_to_table(&csv),
    }
}

fn run_spectrum(config: &RunConfig) -> RunOutput {
    let table = spectrum_table(&config.spec, config.i_max);
    RunOutput {
        body: render(config, table.to_csv()),
        diagnostics: table.warnings,
        exit_code: EXIT_OK,
    }
}

fn run_radial(config: &RunConfig) -> Result<RunOutput, CliError> {
    let sector = SectorSpec::new(config.spec, config.sector);
    let grid = match config.grid_points {
        Some(n) => RadialGrid::for_sector(&sector, config.levels, n, config.x_max)?,
        None => RadialGrid::auto(&sector, config.levels, config.x_max)?,
    };
    let report = sector_compare(&sector, config.levels, &grid)?;
    let mut diagnostics = Vec::new();
    for row in &report.rows {
        if !row.bound {
            diagnostics.push(format!(
                "level k={} (I={}) is not a bound state of this problem",
                row.k, row.principal
            ));
        }
        if row.lambda_shoot.is_nan() {
            diagnostics.push(format!(
                "shooting oracle did not converge for level k={}",
                row.k
            ));
        }
    }
    if let Some(dir) = &config.wavefunctions {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (row, f) in report.rows.iter().zip(report.wavefunctions()?) {
            let path = dir.join(format!("state_l{}_k{}.csv", config.sector, row.k));
            write_file(&path, &f.to_csv())?;
        }
        diagnostics.push(format!(
            "wrote {} wavefunction files ({WAVEFUNCTION_CSV_HEADER}) to {}",
            report.rows.len(),
            dir.display()
        ));
    }
    Ok(RunOutput {
        body: render(config, report.to_csv()),
        diagnostics,
        exit_code: EXIT_OK,
    })
}

fn run_degeneracy(config: &RunConfig) -> RunOutput {
    let spec = &config.spec;
    let mut csv = String::from("I,degeneracy,dim_total,sum_sectors,holds\n");
    let mut all = true;
    for i in 0..=config.i_max {
        let report = branching_check(spec, i);
        all &= report.holds();
        let _ = writeln!(
            csv,
            "{i},{},{},{},{}",
            degeneracy(spec, i),
            report.total_dimension,
            report.sector_sum,
            report.holds()
        );
    }
    RunOutput {
        body: render(config, csv),
        diagnostics: Vec::new(),
        exit_code: if all { EXIT_OK } else { EXIT_FAILURE },
    }
}

fn run_gauge(config: &RunConfig) -> Result<RunOutput, CliError> {
    let checks = gauge::gauge_check(8, if config.quick { 100 } else { 1000 })?;
    let mut csv = String::from("check,value,bound,passed\n");
    for c in &checks {
        let bound = match c.window {
            Some((lo, hi)) => format!("[{lo} {hi}]"),
            None => format::sig(c.bound, 12),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            c.name,
            format::sig(c.value, 12),
            bound,
            c.passed()
        );
    }
    let ok = checks.iter().all(gauge::GaugeCheck::passed);
    Ok(RunOutput {
        body: render(config, csv),
        diagnostics: Vec::new(),
        exit_code: if ok { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn run_verify(config: &RunConfig) -> RunOutput {
    let results = verify::run_all(config.quick);
    let mut body = String::new();
    for r in &results {
        let _ = writeln!(body, "{r}");
    }
    let ok = results.iter().all(|r| r.passed);
    RunOutput {
        body,
        diagnostics: Vec::new(),
        exit_code: if ok { EXIT_OK } else { EXIT_FAILURE },
    }
}

/// Dispatches a configuration; the body is not yet written anywhere.
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    match config.command {
        Command::Spectrum => Ok(run_spectrum(config)),
        Command::Radial => run_radial(config),
        Command::Degeneracy => Ok(run_degeneracy(config)),
        Command::GaugeCheck => run_gauge(config),
        Command::Verify => Ok(run_verify(config)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs a configuration, writing the artifact to `--out` or `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let output = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    for d in &output.diagnostics {
        let _ = writeln!(stderr, "warning: {d}");
    }
    let written = match &config.out {
        Some(path) => write_file(path, &output.body),
        None => stdout
            .write_all(output.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    match written {
        Ok(()) => output.exit_code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point shared by the binary: parse, run, report.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        _ => {}
    }
    match parse_config(args) {
        Ok(config) => run(&config, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.to_string().trim_end());
            e.exit_code()
        }
    }
}
