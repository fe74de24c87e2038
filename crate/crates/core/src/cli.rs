//! Command-line experiments emitting CSV.
//!
//! Every option can also come from a `key=value` file given with
//! `--config`; keys are the long flag names without dashes and flags win
//! over the file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::bounds::{block_bound, choose_n, optimal_gamma_block};
use crate::error::{invalid, Error, Result};
use crate::estimator::{error_curve, estimate_optimal_gamma, interior_grid, probe_sets, CurveKind};
use crate::geometry::{load_points, rectangle_mesh_instance, sample_annulus, sample_disk, save_points, GeometryConfig, PointSet};
use crate::hybrid::{hybrid_compress, measure_errors, skeletonize, HybridResult};
use crate::matrix::ComplexMatrix;
use crate::rrqr::DEFAULT_F;

#[derive(Debug, Parser)]
#[command(name = "proxypoint", version, about = "Proxy-point compression experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    SweepGamma,
    SweepN,
    Compress,
    EstimateGamma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Errors and bound over a grid of proxy radii.
    SweepGamma(Flags),
    /// Errors and bound over a range of proxy counts.
    SweepN(Flags),
    /// Hybrid compression, writing the factors and a summary row.
    Compress(Flags),
    /// Probe estimate of the optimal proxy radius.
    EstimateGamma(Flags),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::SweepGamma(_) => CommandKind::SweepGamma,
            Command::SweepN(_) => CommandKind::SweepN,
            Command::Compress(_) => CommandKind::Compress,
            Command::EstimateGamma(_) => CommandKind::EstimateGamma,
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::SweepGamma(f) | Command::SweepN(f) | Command::Compress(f) | Command::EstimateGamma(f) => f,
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// Kernel order.
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    #[arg(long)]
    pub gamma3: Option<f64>,
    /// Number of sampled inner points.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of sampled outer points.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of proxy points.
    #[arg(long = "N")]
    pub proxy_count: Option<usize>,
    /// Target analytical tolerance; picks N when --N is absent.
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    #[arg(long)]
    pub f: Option<f64>,
    /// Grid size for sweep-gamma.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub points_x: Option<PathBuf>,
    #[arg(long)]
    pub points_y: Option<PathBuf>,
    /// Also select representative outer points.
    #[arg(long)]
    pub skeleton: bool,
    /// Probe points per circle for the radius estimate.
    #[arg(long)]
    pub probe_l: Option<usize>,
    /// Output CSV file (sweeps) or directory (compress).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fixed proxy radius instead of the estimate.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Use the built-in triangular mesh instance instead of random points.
    #[arg(long)]
    pub mesh: bool,
    /// Proxy counts for sweep-n, as `A:B`.
    #[arg(long)]
    pub n_range: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        macro_rules! push {
            ($key:literal, $field:expr) => {
                if let Some(v) = &$field {
                    out.push(($key, v.to_string()));
                }
            };
        }
        push!("d", self.d);
        push!("gamma1", self.gamma1);
        push!("gamma2", self.gamma2);
        push!("gamma3", self.gamma3);
        push!("m", self.m);
        push!("n", self.n);
        push!("N", self.proxy_count);
        push!("tau1", self.tau1);
        push!("tau2", self.tau2);
        push!("f", self.f);
        push!("grid", self.grid);
        push!("seed", self.seed);
        push!("probe-l", self.probe_l);
        push!("gamma", self.gamma);
        push!("n-range", self.n_range);
        if let Some(p) = &self.points_x {
            out.push(("points-x", p.display().to_string()));
        }
        if let Some(p) = &self.points_y {
            out.push(("points-y", p.display().to_string()));
        }
        if let Some(p) = &self.out {
            out.push(("out", p.display().to_string()));
        }
        if self.skeleton {
            out.push(("skeleton", "true".into()));
        }
        if self.mesh {
            out.push(("mesh", "true".into()));
        }
        out
    }
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub d: u32,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub m: usize,
    pub n: usize,
    pub proxy_count: Option<usize>,
    pub tau1: Option<f64>,
    pub tau2: f64,
    pub f: f64,
    pub grid: usize,
    pub seed: u64,
    pub points_x: Option<PathBuf>,
    pub points_y: Option<PathBuf>,
    pub skeleton: bool,
    pub probe_l: usize,
    pub out: Option<PathBuf>,
    pub gamma: Option<f64>,
    pub mesh: bool,
    pub n_range: (usize, usize),
}

impl ExperimentConfig {
    pub fn defaults(command: CommandKind) -> Self {
        Self {
            command,
            d: 1,
            gamma1: 0.5,
            gamma2: 2.0,
            gamma3: 5.0,
            m: 200,
            n: 300,
            proxy_count: None,
            tau1: None,
            tau2: 1e-12,
            f: DEFAULT_F,
            grid: 100,
            seed: 0,
            points_x: None,
            points_y: None,
            skeleton: false,
            probe_l: 1,
            out: None,
            gamma: None,
            mesh: false,
            n_range: (4, 40),
        }
    }

    /// Defaults, then the `--config` file, then explicit flags.
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<Self> {
        let mut cfg = Self::defaults(command);
        if let Some(path) = &flags.config {
            let text = fs::read_to_string(path)?;
            for (line, key, value) in parse_config(&text)? {
                cfg.apply(&key, &value).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            }
        }
        for (key, value) in flags.pairs() {
            cfg.apply(key, &value)?;
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| invalid(format!("bad value {v:?} for {key}")))
        }
        fn flag(key: &str, v: &str) -> Result<bool> {
            match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(invalid(format!("bad value {v:?} for {key}"))),
            }
        }
        match key {
            "d" => self.d = num(key, value)?,
            "gamma1" => self.gamma1 = num(key, value)?,
            "gamma2" => self.gamma2 = num(key, value)?,
            "gamma3" => self.gamma3 = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "n" => self.n = num(key, value)?,
            "N" => self.proxy_count = Some(num(key, value)?),
            "tau1" => self.tau1 = Some(num(key, value)?),
            "tau2" => self.tau2 = num(key, value)?,
            "f" => self.f = num(key, value)?,
            "grid" => self.grid = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "points-x" | "points_x" => self.points_x = Some(PathBuf::from(value)),
            "points-y" | "points_y" => self.points_y = Some(PathBuf::from(value)),
            "skeleton" => self.skeleton = flag(key, value)?,
            "probe-l" | "probe_l" => self.probe_l = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "gamma" => self.gamma = Some(num(key, value)?),
            "mesh" => self.mesh = flag(key, value)?,
            "n-range" | "n_range" => self.n_range = parse_range(value)?,
            "config" => return Err(invalid("config files cannot include other config files")),
            _ => return Err(invalid(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Geometry and point sets for this configuration.
    pub fn instance(&self) -> Result<(PointSet, PointSet, GeometryConfig)> {
        if self.mesh {
            return rectangle_mesh_instance(self.d);
        }
        let cfg = GeometryConfig::new(self.gamma1, self.gamma2, self.gamma3, self.d)?;
        let x = match &self.points_x {
            Some(p) => load_points(p)?,
            None => sample_disk(self.m, self.gamma1, self.seed)?,
        };
        let y = match &self.points_y {
            Some(p) => load_points(p)?,
            None => sample_annulus(self.n, self.gamma2, self.gamma3, self.seed.wrapping_add(1))?,
        };
        Ok((x, y, cfg))
    }
}

/// `(line, key, value)` triples from a `key=value` file.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        out.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let bad = || invalid(format!("expected A:B with 1 <= A <= B, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// What a successful run produced besides its output files.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub warnings: Vec<String>,
}

impl Outcome {
    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn exit_code(&self) -> i32 {
        if self.warnings.is_empty() {
            0
        } else {
            2
        }
    }
}

/// A CSV table held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(csv_err)?;
        Ok(Self { header, rows })
    }

    /// Numeric column by header name; empty cells read as NaN.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| invalid(format!("no column {name:?}")))?;
        self.rows
            .iter()
            .map(|r| {
                let cell = r[idx].trim();
                if cell.is_empty() {
                    Ok(f64::NAN)
                } else {
                    cell.parse().map_err(|_| invalid(format!("bad number {cell:?}")))
                }
            })
            .collect()
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => invalid(format!("{other:?}")),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn resolve_n(cfg: &GeometryConfig, exp: &ExperimentConfig, outcome: &mut Outcome) -> Result<usize> {
    if let Some(n) = exp.proxy_count {
        return Ok(n);
    }
    match exp.tau1 {
        Some(tau1) => {
            let pick = choose_n(cfg, tau1)?;
            if pick.below_floor {
                outcome.warn(format!("tau1 = {tau1:e} is below the floating-point floor"));
            }
            Ok(pick.n)
        }
        None => Ok(20),
    }
}

fn resolve_gamma(cfg: &GeometryConfig, exp: &ExperimentConfig, n: usize) -> Result<f64> {
    match exp.gamma {
        Some(g) => Ok(g),
        None => estimate_optimal_gamma(cfg, n, exp.probe_l, exp.seed),
    }
}

fn hybrid_for(x: &PointSet, y: &PointSet, cfg: &GeometryConfig, exp: &ExperimentConfig, gamma: f64, n: usize) -> Result<HybridResult> {
    if exp.skeleton {
        skeletonize(x, y, cfg, gamma, n, exp.tau2, exp.f)
    } else {
        hybrid_compress(x, y, cfg, gamma, n, exp.tau2, exp.f)
    }
}

/// `gamma,E_N,R_N,bound,probe_E_N0` over the interior radius grid.
pub fn cmd_sweep_gamma(exp: &ExperimentConfig, outcome: &mut Outcome) -> Result<Table> {
    let (x, y, cfg) = exp.instance()?;
    let n = resolve_n(&cfg, exp, outcome)?;
    if exp.grid == 0 {
        return Err(invalid("grid must have at least one point"));
    }
    let gammas = interior_grid(&cfg, exp.grid);
    let full = error_curve(&x, &y, cfg.d, n, &gammas, CurveKind::Full)?;
    let (x0, y0) = probe_sets(&cfg, exp.probe_l, exp.seed)?;
    let probe = error_curve(&x0, &y0, cfg.d, n, &gammas, CurveKind::Probe)?;
    let rows = gammas
        .par_iter()
        .map(|&g| {
            let bound = block_bound(g, &cfg, n)?;
            let hybrid = hybrid_for(&x, &y, &cfg, exp, g, n)?;
            let report = measure_errors(&x, &y, &cfg, g, n, &hybrid)?;
            Ok((bound, hybrid.bound.valid, report))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["gamma", "E_N", "R_N", "bound", "probe_E_N0"]);
    let mut invalid_rows = 0;
    for (i, (bound, hybrid_valid, report)) in rows.into_iter().enumerate() {
        if !(bound.valid && hybrid_valid) {
            invalid_rows += 1;
        }
        let r = report.skeleton.unwrap_or(report.r_n);
        table.rows.push(vec![
            fmt(gammas[i]),
            fmt(full.values[i]),
            fmt(r),
            fmt(bound.value),
            fmt(probe.values[i]),
        ]);
    }
    if invalid_rows > 0 {
        outcome.warn(format!("bound conditions fail at {invalid_rows} grid points"));
    }
    Ok(table)
}

/// `N,E_N,R_N,bound` over `n_range`, with `γ` fixed or estimated per `N`.
pub fn cmd_sweep_n(exp: &ExperimentConfig, outcome: &mut Outcome) -> Result<Table> {
    let (x, y, cfg) = exp.instance()?;
    let (lo, hi) = exp.n_range;
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let gamma = resolve_gamma(&cfg, exp, n)?;
            let bound = block_bound(gamma, &cfg, n)?;
            let hybrid = hybrid_for(&x, &y, &cfg, exp, gamma, n)?;
            let report = measure_errors(&x, &y, &cfg, gamma, n, &hybrid)?;
            Ok((n, bound, hybrid.bound.valid, report))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["N", "E_N", "R_N", "bound"]);
    let mut invalid_rows = 0;
    for (n, bound, hybrid_valid, report) in rows {
        if !(bound.valid && hybrid_valid) {
            invalid_rows += 1;
        }
        table.rows.push(vec![
            n.to_string(),
            fmt(report.e_n),
            fmt(report.skeleton.unwrap_or(report.r_n)),
            fmt(bound.value),
        ]);
    }
    if invalid_rows > 0 {
        outcome.warn(format!("bound conditions fail for {invalid_rows} values of N"));
    }
    Ok(table)
}

/// Summary row `d,N,gamma,rank,E_N,R_N,bound` and the factors written to
/// the `--out` directory.
pub fn cmd_compress(exp: &ExperimentConfig, outcome: &mut Outcome) -> Result<Table> {
    let (x, y, cfg) = exp.instance()?;
    let n = resolve_n(&cfg, exp, outcome)?;
    let gamma = resolve_gamma(&cfg, exp, n)?;
    let result = hybrid_for(&x, &y, &cfg, exp, gamma, n)?;
    if !result.bound.valid {
        outcome.warn("bound conditions fail for the chosen N and gamma");
    }
    let report = match measure_errors(&x, &y, &cfg, gamma, n, &result) {
        Ok(r) => Some(r),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut table = Table::new(&["d", "N", "gamma", "rank", "E_N", "R_N", "bound"]);
    table.rows.push(vec![
        cfg.d.to_string(),
        n.to_string(),
        fmt(gamma),
        result.rank.to_string(),
        fmt_opt(report.map(|r| r.e_n)),
        fmt_opt(report.map(|r| r.skeleton.unwrap_or(r.r_n))),
        fmt(result.bound_value()),
    ]);
    if let Some(dir) = &exp.out {
        write_factors(dir, &result, &table)?;
    }
    Ok(table)
}

fn index_table(idx: &[usize]) -> Table {
    let mut t = Table::new(&["index"]);
    t.rows = idx.iter().map(|i| vec![i.to_string()]).collect();
    t
}

fn coeff_table(m: &ComplexMatrix) -> Table {
    let mut t = Table::new(&["row", "col", "re", "im"]);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            t.rows.push(vec![i.to_string(), j.to_string(), fmt(z.re), fmt(z.im)]);
        }
    }
    t
}

fn write_factors(dir: &Path, result: &HybridResult, summary: &Table) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.csv"), summary.to_csv()?)?;
    fs::write(dir.join("J.csv"), index_table(&result.u.selected).to_csv()?)?;
    fs::write(dir.join("perm_x.csv"), index_table(&result.u.perm).to_csv()?)?;
    fs::write(dir.join("E.csv"), coeff_table(&result.u.coeffs).to_csv()?)?;
    save_points(dir.join("x_hat.txt"), &result.x_hat)?;
    if let (Some(v), Some(y_hat)) = (&result.v, &result.y_hat) {
        fs::write(dir.join("J_y.csv"), index_table(&v.selected).to_csv()?)?;
        fs::write(dir.join("perm_y.csv"), index_table(&v.perm).to_csv()?)?;
        fs::write(dir.join("F.csv"), coeff_table(&v.coeffs).to_csv()?)?;
        save_points(dir.join("y_hat.txt"), y_hat)?;
    }
    Ok(())
}

/// `d,N,l,gamma_estimate,gamma_bound`: the probe estimate next to the
/// minimizer of the block bound.
pub fn cmd_estimate_gamma(exp: &ExperimentConfig, outcome: &mut Outcome) -> Result<Table> {
    let cfg = if exp.mesh {
        rectangle_mesh_instance(exp.d)?.2
    } else {
        GeometryConfig::new(exp.gamma1, exp.gamma2, exp.gamma3, exp.d)?
    };
    let n = resolve_n(&cfg, exp, outcome)?;
    let estimate = estimate_optimal_gamma(&cfg, n, exp.probe_l, exp.seed)?;
    let closed = match optimal_gamma_block(&cfg, n) {
        Ok(g) => Some(g),
        Err(Error::NTooSmall { .. }) => {
            outcome.warn(format!("N = {n} is too small for the block bound"));
            None
        }
        Err(e) => return Err(e),
    };
    let mut table = Table::new(&["d", "N", "l", "gamma_estimate", "gamma_bound"]);
    table.rows.push(vec![
        cfg.d.to_string(),
        n.to_string(),
        exp.probe_l.to_string(),
        fmt(estimate),
        fmt_opt(closed),
    ]);
    Ok(table)
}

/// Runs a parsed command. Sweep tables go to `--out` when given and to
/// `stdout` otherwise; `compress` always prints its summary.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    let exp = ExperimentConfig::resolve(cli.command.kind(), cli.command.flags())?;
    let mut outcome = Outcome::default();
    let table = match exp.command {
        CommandKind::SweepGamma => cmd_sweep_gamma(&exp, &mut outcome)?,
        CommandKind::SweepN => cmd_sweep_n(&exp, &mut outcome)?,
        CommandKind::Compress => cmd_compress(&exp, &mut outcome)?,
        CommandKind::EstimateGamma => cmd_estimate_gamma(&exp, &mut outcome)?,
    };
    let text = table.to_csv()?;
    match (&exp.out, exp.command) {
        (Some(path), CommandKind::SweepGamma | CommandKind::SweepN | CommandKind::EstimateGamma) => {
            fs::write(path, text)?
        }
        _ => stdout.write_all(text.as_bytes())?,
    }
    Ok(outcome)
}

/// Parses `args`, runs, reports to stderr and returns the exit code:
/// 0 on success, 2 when some bound condition or tolerance warning fired,
/// 1 on error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let parsed = parse_config("# header\nd = 2\n\ngamma1=0.3 # inline\n").unwrap();
        assert_eq!(parsed, vec![(2, "d".into(), "2".into()), (4, "gamma1".into(), "0.3".into())]);
        assert!(matches!(parse_config("d 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "d=3\nN=40\ngamma1=0.4\nskeleton=true\n").unwrap();
        let flags = Flags {
            d: Some(2),
            config: Some(path),
            ..Flags::default()
        };
        let exp = ExperimentConfig::resolve(CommandKind::Compress, &flags).unwrap();
        assert_eq!(exp.d, 2);
        assert_eq!(exp.proxy_count, Some(40));
        assert_eq!(exp.gamma1, 0.4);
        assert!(exp.skeleton);
    }

    #[test]
    fn bad_config_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        fs::write(&path, "d=1\nwhat=2\n").unwrap();
        let flags = Flags {
            config: Some(path),
            ..Flags::default()
        };
        assert!(matches!(
            ExperimentConfig::resolve(CommandKind::SweepN, &flags),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5:40").unwrap(), (5, 40));
        assert!(parse_range("0:3").is_err());
        assert!(parse_range("7:3").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn cli_parses_case_sensitive_counts() {
        let cli = Cli::try_parse_from(["proxypoint", "compress", "--n", "30", "--N", "25", "--skeleton"]).unwrap();
        let flags = cli.command.flags();
        assert_eq!((flags.n, flags.proxy_count, flags.skeleton), (Some(30), Some(25), true));
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec![fmt(1.5), String::new()]);
        let back = Table::from_csv(&t.to_csv().unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("a").unwrap(), vec![1.5]);
        assert!(back.column("b").unwrap()[0].is_nan());
    }
}
