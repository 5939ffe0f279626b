//! Command-line front end: parameter parsing, subcommand dispatch and
//! CSV/JSON emission.
//!
//! Exit codes: 0 on success, 1 on invalid input or I/O failure, 2 when a
//! check-style command finds a deviation above its tolerance.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::analysis::{self, ConvergenceTrace, Observable};
use crate::coin::{Preset, Schedule, WalkParams, DEFAULT_ANGLE_TOLERANCE};
use crate::dynamics::{self, distribution, evolve_inspect, max_time, spinor_norm_sqr, StateVector};
use crate::error::{Error, Result};
use crate::limits::{self, LimitDensity, Parity};
use crate::spectral;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Half-time localization model of the two-state quantum walk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the walk and write its distribution and amplitudes
    Simulate(SimulateArgs),
    /// Compare position-space and Fourier-space evolutions
    SpectralCheck(SpectralCheckArgs),
    /// Tabulate the eigenvalues of the Fourier-space coin
    Eigen(EigenArgs),
    /// Tabulate the limiting point masses
    Limits(LimitsArgs),
    /// Sample the continuous part of the weak-limit density
    Density(DensityArgs),
    /// Follow one observable over a list of half-times
    Trace(TraceArgs),
    /// Compare one finite-time walk with the weak limit (JSON report)
    Compare(CompareArgs),
    /// Regenerate the data behind a figure
    Figures(FiguresArgs),
}

/// Walk parameters. Flags override values from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct WalkArgs {
    /// JSON file with keys theta, theta1, tau, alpha_re, alpha_im, beta_re, beta_im, schedule
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coin angle of U in radians [default: pi/4]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Coin angle of H in radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Half-time: H drives the step out of this time [default: 0]
    #[arg(long)]
    pub tau: Option<u64>,
    /// Upper initial amplitude as `re,im`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset", requires = "beta")]
    pub alpha: Option<String>,
    /// Lower initial amplitude as `re,im`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset", requires = "alpha")]
    pub beta: Option<String>,
    /// Named initial state [default: symmetric]
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// usual | half | steps:t1,t2,... [default: half]
    #[arg(long)]
    pub schedule: Option<String>,
    /// Rejection tolerance around the excluded angles of theta
    #[arg(long, default_value_t = DEFAULT_ANGLE_TOLERANCE)]
    pub angle_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Symmetric,
    Up,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Symmetric => Preset::Symmetric,
            PresetArg::Up => Preset::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => Parity::Odd,
            ParityArg::Even => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Final time
    #[arg(long, conflicts_with = "times", required_unless_present = "times")]
    pub t: Option<u64>,
    /// Comma-separated times; one output file per time (`<out>_t<time>.<ext>`)
    #[arg(long, value_delimiter = ',', requires = "out")]
    pub times: Option<Vec<u64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectralCheckArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub t: u64,
    /// Grid size [default: 2t+2]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Largest accepted entrywise amplitude deviation
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Number of equally spaced wavenumbers on [-pi, pi)
    #[arg(long, default_value_t = 1000)]
    pub k_samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    #[arg(long, default_value_t = 50)]
    pub xmax: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Interior sample points across the support
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableArg {
    Mass,
    Ks,
    Moment,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_enum, default_value = "mass")]
    pub observable: ObservableArg,
    /// Site for the mass observable
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub x: i64,
    /// Order for the moment observable
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    /// Strictly increasing, comma-separated half-times
    #[arg(long, value_delimiter = ',', default_value = "10,50,250,1000")]
    pub taus: Vec<u64>,
    /// Worker threads for independent runs
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Time; the half-time is set so that t = 2 tau + 1 or 2 tau + 2
    #[arg(long, default_value_t = 4001)]
    pub t: u64,
    /// Highest moment order reported
    #[arg(long, default_value_t = 4)]
    pub max_r: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// 1a 1b 2a 2b 3a 3b 4a 4b 5a 5b 5c 7a 7b
    #[arg(long)]
    pub paper_fig: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    theta: Option<f64>,
    theta1: Option<f64>,
    tau: Option<u64>,
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
    beta_re: Option<f64>,
    beta_im: Option<f64>,
    schedule: Option<String>,
}

/// Fully resolved walk configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: WalkParams,
    pub schedule: Schedule,
}

fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::Config(format!("expected `re,im`, got `{s}`"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re = re.trim().parse::<f64>().map_err(|_| bad())?;
    let im = im.trim().parse::<f64>().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

impl WalkArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let theta = self.theta.or(file.theta).unwrap_or(FRAC_PI_4);
        let theta1 = self.theta1.or(file.theta1).unwrap_or(0.0);
        let tau = self.tau.or(file.tau).unwrap_or(0);

        let file_spinor = match (file.alpha_re, file.alpha_im, file.beta_re, file.beta_im) {
            (None, None, None, None) => None,
            (ar, ai, br, bi) => Some([
                C64::new(ar.unwrap_or(0.0), ai.unwrap_or(0.0)),
                C64::new(br.unwrap_or(0.0), bi.unwrap_or(0.0)),
            ]),
        };
        let [alpha, beta] = match (&self.alpha, &self.beta, self.preset) {
            (Some(a), Some(b), _) => [parse_complex(a)?, parse_complex(b)?],
            (_, _, Some(p)) => Preset::from(p).spinor(),
            _ => file_spinor.unwrap_or_else(|| Preset::Symmetric.spinor()),
        };
        let schedule = match self.schedule.as_deref().or(file.schedule.as_deref()) {
            Some(s) => s.parse()?,
            None => Schedule::HalfTime,
        };
        let params = WalkParams::with_tolerance(theta, theta1, tau, alpha, beta, self.angle_tol)?;
        Ok(RunConfig { params, schedule })
    }
}

/// A value in an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// Rows of named columns, plus `#`-prefixed comment lines for CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { comments: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    for c in &table.comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(f) => format_float(*f),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(table: &Table) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, c)| {
                    let v = match c {
                        Cell::Int(i) => serde_json::Value::from(*i),
                        Cell::Float(f) => serde_json::Value::from(*f),
                    };
                    (k.clone(), v)
                })
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("table rows serialize");
    s.push('\n');
    s
}

/// Writes `table` to `path`, or to `stdout` when no path is given.
pub fn emit(table: &Table, format: Format, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::EmptyOutput);
    }
    let text = match format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    };
    write_text(&text, path, stdout)
}

fn write_text(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn distribution_table(state: &StateVector) -> Table {
    let mut table = Table::new(&["x", "prob", "amp0_re", "amp0_im", "amp1_re", "amp1_im"]);
    for (x, a) in state.iter() {
        table.push(vec![
            x.into(),
            spinor_norm_sqr(a).into(),
            a[0].re.into(),
            a[0].im.into(),
            a[1].re.into(),
            a[1].im.into(),
        ]);
    }
    table
}

pub fn eigen_table(params: &WalkParams, samples: usize) -> Table {
    let mut table = Table::new(&["k", "re_l1", "im_l1", "re_l2", "im_l2"]);
    for k in spectral::k_grid(samples) {
        let e = spectral::eigensystem(params, k);
        table.push(vec![
            k.into(),
            e.lambda[0].re.into(),
            e.lambda[0].im.into(),
            e.lambda[1].re.into(),
            e.lambda[1].im.into(),
        ]);
    }
    table
}

pub fn limits_table(params: &WalkParams, parity: Parity, xmax: u64) -> Table {
    let mut table = Table::new(&["x", "limit_mass"]);
    for m in limits::limit_masses(params, parity, xmax) {
        table.push(vec![m.position.into(), m.value.into()]);
    }
    table
}

/// `points` interior samples of the continuous part, with the atom in a
/// comment line.
pub fn density_table(params: &WalkParams, points: usize) -> Result<Table> {
    let law = LimitDensity::new(params);
    let e = law.edge();
    let mut table = Table::new(&["x", "f_ac"]);
    table.comments.push(format!("delta_mass={}", format_float(law.delta_mass)));
    for i in 0..points {
        let x = e * (-1.0 + 2.0 * (i + 1) as f64 / (points + 1) as f64);
        table.push(vec![x.into(), law.ac(x)?.into()]);
    }
    Ok(table)
}

pub fn trace_table(params: &WalkParams, trace: &ConvergenceTrace) -> Table {
    let mut table = Table::new(&["tau", "t", "value", "limit"]);
    let law = LimitDensity::new(params);
    for (tau, v) in trace.iter() {
        let limit = match trace.observable {
            Observable::Mass { x } => limits::theorem1_limit(params, x, trace.parity),
            Observable::Ks => 0.0,
            Observable::Moment { r } => law.moment(r),
        };
        table.push(vec![tau.into(), trace.parity.time(tau).into(), v.into(), limit.into()]);
    }
    table
}

/// Largest entrywise amplitude gap between the two evolution routes.
pub fn spectral_deviation(cfg: &RunConfig, t: u64, grid: Option<usize>) -> Result<f64> {
    let direct = dynamics::evolve(&cfg.params, &cfg.schedule, t)?;
    let n = grid.unwrap_or_else(|| spectral::min_grid(t));
    let spec = spectral::spectral_evolve(&cfg.params, &cfg.schedule, t, n)?;
    Ok(direct
        .iter()
        .map(|(x, a)| {
            let b = spec.amplitude(x);
            (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
        })
        .fold(0.0, f64::max))
}

fn figure_params(theta1: f64, preset: Preset, tau: u64) -> WalkParams {
    let [a, b] = preset.spinor();
    WalkParams::new(FRAC_PI_4, theta1, tau, a, b).expect("figure parameters are valid")
}

/// Data behind one figure panel.
pub fn figure_table(id: &str) -> Result<Table> {
    let preset_of = |panel: char| match panel {
        'a' => Ok(Preset::Symmetric),
        'b' => Ok(Preset::Up),
        _ => Err(Error::Config(format!("unknown figure `{id}`"))),
    };
    let mut chars = id.chars();
    let (num, panel) = (chars.next(), chars.next());
    if chars.next().is_some() {
        return Err(Error::Config(format!("unknown figure `{id}`")));
    }
    match (num, panel) {
        // snapshot at t = 500: localized (1) and usual (3)
        (Some(n @ ('1' | '3')), Some(p)) => {
            let (theta1, schedule) = if n == '1' { (0.0, Schedule::HalfTime) } else { (FRAC_PI_4, Schedule::Usual) };
            let params = figure_params(theta1, preset_of(p)?, 249);
            let mut table = distribution_table(&dynamics::evolve(&params, &schedule, 500)?);
            table.comments.push(format!("figure {id}: theta=pi/4 theta1={theta1} tau=249 t=500 schedule={schedule}"));
            Ok(table)
        }
        // space-time density: localized (2) and usual (4)
        (Some(n @ ('2' | '4')), Some(p)) => {
            let (theta1, schedule) = if n == '2' { (0.0, Schedule::HalfTime) } else { (FRAC_PI_4, Schedule::Usual) };
            let params = figure_params(theta1, preset_of(p)?, 24);
            let mut table = Table::new(&["t", "x", "prob"]);
            table.comments.push(format!("figure {id}: theta=pi/4 theta1={theta1} tau=24 schedule={schedule}"));
            evolve_inspect(&params, &schedule, 100, max_time(), |s| {
                let t = s.time();
                for (x, p) in distribution(s).iter() {
                    table.push(vec![t.into(), x.into(), p.into()]);
                }
            })?;
            Ok(table)
        }
        // P(X_t = x) against the half-time, with its limit
        (Some('5'), Some(p)) => {
            let (x, parity) = match p {
                'a' => (0, Parity::Even),
                'b' => (1, Parity::Odd),
                'c' => (2, Parity::Even),
                _ => return Err(Error::Config(format!("unknown figure `{id}`"))),
            };
            let params = figure_params(0.0, Preset::Symmetric, 0);
            let taus: Vec<u64> = (1..=500).collect();
            let trace = analysis::mass_trace(&params, x, parity, &taus)?;
            let mut table = trace_table(&params, &trace);
            table.comments.push(format!("figure {id}: P(X_t={x}) at {parity} times, theta=pi/4 theta1=0"));
            Ok(table)
        }
        (Some('7'), Some(p)) => {
            let params = figure_params(0.0, preset_of(p)?, 0);
            let mut table = density_table(&params, 2001)?;
            table.comments.push(format!("figure {id}: limit density, theta=pi/4 theta1=0"));
            Ok(table)
        }
        _ => Err(Error::Config(format!("unknown figure `{id}`"))),
    }
}

fn with_suffix(path: &Path, t: u64) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_t{t}.{}", ext.to_string_lossy()),
        None => format!("{stem}_t{t}"),
    };
    path.with_file_name(name)
}

enum Outcome {
    Ok,
    ToleranceExceeded,
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = args.walk.resolve()?;
            match (&args.times, args.t) {
                (Some(times), _) => {
                    let wanted: BTreeSet<u64> = times.iter().copied().collect();
                    let last = *wanted.last().ok_or(Error::EmptyOutput)?;
                    let out = args.out.as_deref().expect("clap enforces --out with --times");
                    let mut tables = Vec::new();
                    evolve_inspect(&cfg.params, &cfg.schedule, last, max_time(), |s| {
                        if wanted.contains(&s.time()) {
                            tables.push((s.time(), distribution_table(s)));
                        }
                    })?;
                    for (t, table) in tables {
                        emit(&table, args.format, Some(&with_suffix(out, t)), stdout)?;
                    }
                }
                (None, Some(t)) => {
                    let state = dynamics::evolve(&cfg.params, &cfg.schedule, t)?;
                    emit(&distribution_table(&state), args.format, args.out.as_deref(), stdout)?;
                }
                (None, None) => return Err(Error::Config("one of --t or --times is required".into())),
            }
        }
        Command::SpectralCheck(args) => {
            let cfg = args.walk.resolve()?;
            let dev = spectral_deviation(&cfg, args.t, args.grid)?;
            let pass = dev <= args.tol;
            writeln!(
                stdout,
                "max_deviation {} tol {} {}",
                format_float(dev),
                format_float(args.tol),
                if pass { "PASS" } else { "FAIL" }
            )
            .map_err(|e| Error::io("<stdout>", e))?;
            if !pass {
                return Ok(Outcome::ToleranceExceeded);
            }
        }
        Command::Eigen(args) => {
            let cfg = args.walk.resolve()?;
            emit(&eigen_table(&cfg.params, args.k_samples), args.format, args.out.as_deref(), stdout)?;
        }
        Command::Limits(args) => {
            let cfg = args.walk.resolve()?;
            let table = limits_table(&cfg.params, args.parity.into(), args.xmax);
            emit(&table, args.format, args.out.as_deref(), stdout)?;
        }
        Command::Density(args) => {
            let cfg = args.walk.resolve()?;
            emit(&density_table(&cfg.params, args.points)?, args.format, args.out.as_deref(), stdout)?;
        }
        Command::Trace(args) => {
            let cfg = args.walk.resolve()?;
            let parity: Parity = args.parity.into();
            let run = || match args.observable {
                ObservableArg::Mass => analysis::mass_trace(&cfg.params, args.x, parity, &args.taus),
                ObservableArg::Ks => analysis::ks_trace(&cfg.params, parity, &args.taus),
                ObservableArg::Moment => analysis::moment_trace(&cfg.params, args.r, parity, &args.taus),
            };
            let trace = match args.jobs {
                Some(jobs) => rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::Config(format!("--jobs {jobs}: {e}")))?
                    .install(run)?,
                None => run()?,
            };
            emit(&trace_table(&cfg.params, &trace), args.format, args.out.as_deref(), stdout)?;
        }
        Command::Compare(args) => {
            let cfg = args.walk.resolve()?;
            let report = analysis::compare(&cfg.params, args.t, args.max_r)?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            write_text(&text, args.out.as_deref(), stdout)?;
        }
        Command::Figures(args) => {
            let table = figure_table(&args.paper_fig)?;
            emit(&table, args.format, args.out.as_deref(), stdout)?;
        }
    }
    Ok(Outcome::Ok)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(cli, stdout) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::ToleranceExceeded) => 2,
        // Reader went away (e.g. `| head`); nothing left to report.
        Err(Error::Io { ref source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_table_is_rejected() {
        let table = Table::new(&["x", "prob"]);
        let mut sink = Vec::new();
        assert!(matches!(emit(&table, Format::Csv, None, &mut sink), Err(Error::EmptyOutput)));
    }

    #[test]
    fn one_row_csv() {
        let mut table = Table::new(&["x", "prob"]);
        table.push(vec![0i64.into(), 1.0.into()]);
        let csv = render_csv(&table);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,prob"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "0");
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, PI, 0.0857864376269049, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_rows_are_objects() {
        let mut table = Table::new(&["x", "limit_mass"]);
        table.push(vec![2i64.into(), 0.25.into()]);
        let v: serde_json::Value = serde_json::from_str(&render_json(&table)).unwrap();
        assert_eq!(v[0]["x"], 2);
        assert_eq!(v[0]["limit_mass"], 0.25);
    }

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), C64::new(0.5, -1.0));
        assert!(parse_complex("0.5").is_err());
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn defaults_resolve_to_the_hadamard_example() {
        let cfg = WalkArgs { angle_tol: DEFAULT_ANGLE_TOLERANCE, ..Default::default() }.resolve().unwrap();
        assert_eq!(cfg.params.theta(), FRAC_PI_4);
        assert_eq!(cfg.params.theta1(), 0.0);
        assert_eq!(cfg.params.spinor(), Preset::Symmetric.spinor());
        assert_eq!(cfg.schedule, Schedule::HalfTime);
    }

    #[test]
    fn per_time_file_names() {
        assert_eq!(with_suffix(Path::new("out/dist.csv"), 7), PathBuf::from("out/dist_t7.csv"));
        assert_eq!(with_suffix(Path::new("dist"), 7), PathBuf::from("dist_t7"));
    }

    #[test]
    fn unknown_figures_are_rejected() {
        for id in ["6a", "1c", "5d", "", "1ab"] {
            assert!(figure_table(id).is_err(), "{id}");
        }
    }
}
