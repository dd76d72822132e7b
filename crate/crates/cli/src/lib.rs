//! Command-line front end: distribution tables, the identity suite, Monte
//! Carlo comparisons and the Tracy–Widom limit study.
//!
//! Exit codes: 0 success, 1 a check failed, 2 misuse (bad arguments or an
//! unwritable output path), 3 numeric trouble (non-convergence, NaN, route
//! disagreement).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bridge_loe::fredholm::{tw_limit_compare, FgoeConfig, DEFAULT_ORDER, DEFAULT_TRUNCATION};
use bridge_loe::kernelmat::{cdf_table, loe_cdf, CdfKind};
use bridge_loe::montecarlo::{
    bridge_summary, ks_statistic, ks_statistic_corrected, loe_summary, PathGrid, DEFAULT_INTERVALS, DEFAULT_S_MAX,
    DEFAULT_SEED,
};
use bridge_loe::verify::{full_suite, Check, VerificationReport};
use bridge_loe::{Error, Execution};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "BRIDGE_LOE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bridge-loe", version, about = "Maximal height of non-intersecting Brownian bridges and the LOE")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// P(max_t B_N(t) ≤ m)
    Maxheight,
    /// P(λ_max(XᵀX) ≤ s)
    Loe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    /// `steps` points from `min` to `max` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| if i == last { self.max } else { self.min + (self.max - self.min) * i as f64 / last as f64 })
            .collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(format!("grid must be min:max:steps, got {s:?}"));
        };
        let min: f64 = min.trim().parse().map_err(|e| format!("grid min: {e}"))?;
        let max: f64 = max.trim().parse().map_err(|e| format!("grid max: {e}"))?;
        let steps: usize = steps.trim().parse().map_err(|e| format!("grid steps: {e}"))?;
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(format!("grid needs finite min < max, got {min}:{max}"));
        }
        if steps < 2 {
            return Err(format!("grid needs at least 2 steps, got {steps}"));
        }
        Ok(Self { min, max, steps })
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("seed {s:?}: {e}"))
}

fn parse_samples(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("samples: {e}"))?;
    if n < 10 {
        return Err(format!("need at least 10 samples, got {n}"));
    }
    Ok(n)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a distribution function.
    Cdf {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// min:max:steps, endpoints included
        #[arg(long, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the identity suite; exits 0 iff every check passes.
    Verify {
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0, 2.0, 4.0])]
        r: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// KS distance between sampled LOE top eigenvalues and the exact law.
    McLoe {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000, value_parser = parse_samples)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
        #[arg(long, default_value_t = 0.02)]
        ks_threshold: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// KS distance between simulated √2·max B_N(t) and r ↦ F_LOE,N(2r²).
    McBridges {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20_000, value_parser = parse_samples)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
        /// number of grid intervals, uniform in s = ½log(t/(1−t))
        #[arg(long, default_value_t = DEFAULT_INTERVALS)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_S_MAX)]
        s_max: f64,
        /// score the raw grid maxima instead of the crossing-corrected CDF
        #[arg(long)]
        no_crossing_correction: bool,
        #[arg(long, default_value_t = 0.025)]
        ks_threshold: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Finite-N scaled laws against the Tracy–Widom GOE limit.
    TwLimit {
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32])]
        n: Vec<usize>,
        #[arg(long, default_value = "-4:2:31", allow_hyphen_values = true)]
        grid: GridSpec,
        /// Gauss–Legendre order of the Nyström discretisation
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        quad_order: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Argument(_) | Error::Domain(_) => EXIT_USAGE,
            Error::Numeric(_) | Error::Convergence(_) | Error::Consistency(_) => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and an atomic rename; `None` writes to stdout.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(contents.as_bytes()).and_then(|_| out.flush()).map_err(|e| usage(format!("stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| usage(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

fn report_csv(report: &VerificationReport) -> String {
    let mut s = String::from("name,anchor,max_err,tol,pass\n");
    for c in &report.checks {
        let quote = |t: &str| format!("\"{}\"", t.replace('"', "\"\""));
        let _ = writeln!(s, "{},{},{},{},{}", quote(&c.name), quote(&c.anchor), fmt17(c.max_err), fmt17(c.tol), c.pass);
    }
    s
}

fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => report_csv(report),
    }
}

fn verdict(report: &VerificationReport) -> i32 {
    if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn check_threshold(t: f64) -> Result<(), Failure> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(usage(format!("KS threshold must lie in (0, 1], got {t}")))
    }
}

fn execute(command: Command) -> Result<i32, Failure> {
    let exec = Execution::Parallel;
    match command {
        Command::Cdf { kind, n, grid, format, output } => {
            let kind = match kind {
                Kind::Maxheight => CdfKind::Maxheight,
                Kind::Loe => CdfKind::Loe,
            };
            let table = cdf_table(kind, n, &grid.points(), exec)?;
            let text = match format {
                Format::Json => to_json(&table),
                Format::Csv => {
                    let mut s = String::from("arg,prob\n");
                    for &(x, p) in &table.points {
                        let _ = writeln!(s, "{},{}", fmt17(x), fmt17(p));
                    }
                    s
                }
            };
            write_output(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { n_max, r, format, output } => {
            let report = full_suite(n_max, &r)?;
            write_output(output.as_deref(), &render_report(&report, format))?;
            Ok(verdict(&report))
        }
        Command::McLoe { n, samples, seed, ks_threshold, format, output } => {
            check_threshold(ks_threshold)?;
            let summary = loe_summary(n, samples, seed, exec)?;
            let ks = ks_statistic(&summary, |x| loe_cdf(n, x))?;
            let check = Check::new(
                format!("ks-loe [N={n} samples={samples}]"),
                "sup_x |F_emp(x) − P(λ_max(XᵀX) ≤ x)|, X Gaussian (N+1)×N",
                "",
                ks,
                ks_threshold,
            );
            let mut report = VerificationReport::new("mc-loe", vec![check]);
            report.seed = seed;
            write_output(output.as_deref(), &render_report(&report, format))?;
            Ok(verdict(&report))
        }
        Command::McBridges { n, samples, seed, k, s_max, no_crossing_correction, ks_threshold, format, output } => {
            check_threshold(ks_threshold)?;
            let grid = PathGrid::uniform_in_s(k, s_max, !no_crossing_correction)?;
            let summary = bridge_summary(n, &grid, samples, seed, exec)?.scaled(std::f64::consts::SQRT_2)?;
            // P(√2·max ≤ r) = F_LOE,N(2r²) = P(max ≤ r/√2)
            let cdf = |r: f64| if r <= 0.0 { Ok(0.0) } else { loe_cdf(n, 2.0 * r * r) };
            let ks = if no_crossing_correction {
                ks_statistic(&summary, cdf)?
            } else {
                ks_statistic_corrected(&summary, cdf, exec)?
            };
            let label = if no_crossing_correction { "plain" } else { "crossing-corrected" };
            let check = Check::new(
                format!("ks-bridges [N={n} K={k} samples={samples} {label}]"),
                "sup_r |F_emp(r) − F_LOE,N(2r²)| for r = √2·max_t B_N(t)",
                "",
                ks,
                ks_threshold,
            );
            let mut report = VerificationReport::new("mc-bridges", vec![check]);
            report.seed = seed;
            write_output(output.as_deref(), &render_report(&report, format))?;
            Ok(verdict(&report))
        }
        Command::TwLimit { n, grid, quad_order, truncation, format, output } => {
            let cmp = tw_limit_compare(&n, &grid.points(), FgoeConfig { m: quad_order, t: truncation }, exec)?;
            let text = match format {
                Format::Json => to_json(&cmp),
                Format::Csv => {
                    let mut s = String::new();
                    for (b, nn) in cmp.n_list.iter().enumerate() {
                        if b > 0 {
                            s.push('\n');
                        }
                        let _ = writeln!(s, "# N={nn}");
                        s.push_str("s,G_N,F_GOE,abs_err\n");
                        for (i, &x) in cmp.s_grid.iter().enumerate() {
                            let (g, f) = (cmp.finite_n[b][i], cmp.limit[i]);
                            let _ = writeln!(s, "{},{},{},{}", fmt17(x), fmt17(g), fmt17(f), fmt17((g - f).abs()));
                        }
                    }
                    s
                }
            };
            write_output(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// Applies [`THREADS_ENV`] to the global thread pool.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool that already exists (repeated in-process runs) keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = configure_threads().and_then(|_| execute(cli.command));
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
