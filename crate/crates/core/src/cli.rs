//! Command-line surface: single-point and grid density evaluation, ratio
//! scans along the imaginary axis, decay-rate fits, Monte Carlo histogram
//! runs, and the self-test — all emitting CSV or JSON for external
//! plotting.

use crate::closedform::{su2_crit_density, su_zero_density};
use crate::ensemble::{EnsembleSpec, Field, Mode};
use crate::error::{KrError, Result};
use crate::kacrice::{decay_gaps, decay_rate_fit, density, density_ratio};
use crate::montecarlo::{build_histogram, compare_histogram, sample_roots, Window};
use crate::selftest;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

/// Parse a complex literal `a+bi`: optional sign, decimal float, `+`/`-`
/// separator, float, `i` suffix. Whitespace is forbidden (shell-safe).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || KrError::InvalidArgument(format!("cannot parse complex literal '{s}'"));
    if s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let body = s.strip_suffix('i').ok_or_else(bad)?;
    // locate the separating sign: not at position 0, not part of an exponent
    let bytes = body.as_bytes();
    let mut sep = None;
    for (k, &b) in bytes.iter().enumerate().skip(1) {
        if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            sep = Some(k);
        }
    }
    let sep = sep.ok_or_else(bad)?;
    let re: f64 = body[..sep].parse().map_err(|_| bad())?;
    let im: f64 = body[sep..].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Parse a point of ℂ^m: semicolon-joined complex literals.
pub fn parse_point(s: &str) -> Result<Vec<Complex64>> {
    s.split(';').map(parse_complex).collect()
}

/// Parse a degree list: comma-separated values and/or inclusive colon
/// ranges `lo:hi[:step]`, e.g. `10,25,100` or `10:60`.
pub fn parse_degrees(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        if part.contains(':') {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(KrError::InvalidArgument(format!(
                    "bad degree range '{part}'"
                )));
            }
            let lo: u32 = fields[0]
                .parse()
                .map_err(|_| KrError::InvalidArgument(format!("bad degree range '{part}'")))?;
            let hi: u32 = fields[1]
                .parse()
                .map_err(|_| KrError::InvalidArgument(format!("bad degree range '{part}'")))?;
            let step: u32 = if fields.len() == 3 {
                fields[2]
                    .parse()
                    .map_err(|_| KrError::InvalidArgument(format!("bad degree range '{part}'")))?
            } else {
                1
            };
            if step == 0 || hi < lo {
                return Err(KrError::InvalidArgument(format!(
                    "bad degree range '{part}'"
                )));
            }
            let mut n = lo;
            while n <= hi {
                out.push(n);
                n += step;
            }
        } else {
            out.push(
                part.parse()
                    .map_err(|_| KrError::InvalidArgument(format!("bad degree '{part}'")))?,
            );
        }
    }
    if out.is_empty() {
        return Err(KrError::InvalidArgument("empty degree list".into()));
    }
    Ok(out)
}

/// Inclusive linear grid `lo:hi:steps` (steps = number of points).
pub fn parse_linspace(s: &str) -> Result<Vec<f64>> {
    let fields: Vec<&str> = s.split(':').collect();
    if fields.len() != 3 {
        return Err(KrError::InvalidArgument(format!("bad grid spec '{s}'")));
    }
    let lo: f64 = fields[0]
        .parse()
        .map_err(|_| KrError::InvalidArgument(format!("bad grid spec '{s}'")))?;
    let hi: f64 = fields[1]
        .parse()
        .map_err(|_| KrError::InvalidArgument(format!("bad grid spec '{s}'")))?;
    let steps: usize = fields[2]
        .parse()
        .map_err(|_| KrError::InvalidArgument(format!("bad grid spec '{s}'")))?;
    if steps == 0 {
        return Err(KrError::InvalidArgument(
            "grid needs at least one step".into(),
        ));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|k| lo + k as f64 * h).collect())
}

/// Parse a planar grid `re0:re1:steps,im0:im1:steps` into row-major points.
pub fn parse_grid(s: &str) -> Result<Vec<Complex64>> {
    let (re_spec, im_spec) = s
        .split_once(',')
        .ok_or_else(|| KrError::InvalidArgument(format!("bad grid spec '{s}'")))?;
    let res = parse_linspace(re_spec)?;
    let ims = parse_linspace(im_spec)?;
    let mut out = Vec::with_capacity(res.len() * ims.len());
    for &im in &ims {
        for &re in &res {
            out.push(Complex64::new(re, im));
        }
    }
    Ok(out)
}

/// 17 significant digits: enough for a bit-exact f64 round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Zeros,
    Crit,
}

impl ModeArg {
    pub fn to_mode(self) -> Mode {
        match self {
            ModeArg::Zeros => Mode::Zeros,
            ModeArg::Crit => Mode::Critical,
        }
    }

    fn label(self) -> &'static str {
        match self {
            ModeArg::Zeros => "zeros",
            ModeArg::Crit => "crit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Real,
    Complex,
}

impl EnsembleArg {
    pub fn to_field(self) -> Field {
        match self {
            EnsembleArg::Real => Field::Real,
            EnsembleArg::Complex => Field::Complex,
        }
    }

    fn label(self) -> &'static str {
        match self {
            EnsembleArg::Real => "real",
            EnsembleArg::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "krlab",
    version,
    about = "Densities of complex zeros and critical points of Gaussian random polynomials"
)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the expected density at points or on a grid.
    Density(DensityArgs),
    /// Real/complex density ratio along the imaginary axis (Figure-1 style).
    RatioScan(RatioScanArgs),
    /// Fit the exponential decay rate of the real/complex density gap.
    Decay(DecayArgs),
    /// Monte Carlo histogram against the analytic density.
    Mc(McArgs),
    /// Run all built-in invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// RNG seed; falls back to the KRLAB_SEED environment variable, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

impl CommonArgs {
    pub fn resolved_seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("KRLAB_SEED")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(0)
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Degree list: `10` or `10,25,100` or `10:60[:step]`.
    #[arg(long = "N")]
    pub degrees: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, value_enum)]
    pub ensemble: EnsembleArg,
    /// Point `a+bi` (semicolon-joined for m > 1); repeatable.
    #[arg(long = "z", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Planar grid `re0:re1:steps,im0:im1:steps` (m = 1 only).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct RatioScanArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "N", default_value = "10,25,100")]
    pub degrees: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Imaginary-axis grid `y0:y1:steps` in (0, 1].
    #[arg(long, default_value = "0.05:1.0:20")]
    pub y: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "N", default_value = "10:60")]
    pub degrees: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long = "z", allow_hyphen_values = true)]
    pub point: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long = "N", default_value_t = 25)]
    pub degree: u32,
    #[arg(long, value_enum, default_value = "crit")]
    pub mode: ModeArg,
    #[arg(long, value_enum)]
    pub ensemble: EnsembleArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Window `re0:re1,im0:im1`.
    #[arg(long, default_value = "-2:2,-2:2", allow_hyphen_values = true)]
    pub window: String,
    /// Cell grid `NXxNY`.
    #[arg(long, default_value = "10x10")]
    pub cells: String,
    /// Half-width of the near-axis band excluded from comparison; defaults
    /// to 0.1 for the real ensemble and 0 for the complex one.
    #[arg(long)]
    pub exclude_im: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Rendered command output: the primary document plus an optional summary
/// (printed to stderr when the primary goes to a file or stdout-as-CSV).
pub struct CommandOutput {
    pub primary: String,
    pub summary: Option<String>,
}

fn density_header(m: usize) -> String {
    let mut cols = vec!["re".to_string(), "im".to_string()];
    for k in 2..=m {
        cols.push(format!("re{k}"));
        cols.push(format!("im{k}"));
    }
    cols.extend([
        "N".into(),
        "mode".into(),
        "ensemble".into(),
        "density".into(),
    ]);
    cols.join(",")
}

#[derive(Serialize)]
struct DensityRow {
    point: Vec<f64>,
    n: u32,
    mode: String,
    ensemble: String,
    density: f64,
}

/// `density` command: one row per (point, degree).
pub fn cmd_density(args: &DensityArgs) -> Result<CommandOutput> {
    let degrees = parse_degrees(&args.degrees)?;
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    for p in &args.points {
        let pt = parse_point(p)?;
        if pt.len() != args.m {
            return Err(KrError::InvalidArgument(format!(
                "point '{p}' has {} coordinates, expected m = {}",
                pt.len(),
                args.m
            )));
        }
        points.push(pt);
    }
    if let Some(grid) = &args.grid {
        if args.m != 1 {
            return Err(KrError::InvalidArgument(
                "--grid applies to m = 1 only".into(),
            ));
        }
        points.extend(parse_grid(grid)?.into_iter().map(|z| vec![z]));
    }
    if points.is_empty() {
        return Err(KrError::InvalidArgument(
            "no points given (use --z or --grid)".into(),
        ));
    }

    let mode = args.mode.to_mode();
    let field = args.ensemble.to_field();
    let jobs: Vec<(usize, u32)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, _)| degrees.iter().map(move |&n| (i, n)))
        .collect();
    let results: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(i, n)| {
            let spec = EnsembleSpec::new(args.m, n, field, mode)?;
            Ok(density(&spec, &points[i])?.density)
        })
        .collect();

    let mut rows = Vec::with_capacity(jobs.len());
    for (&(i, n), result) in jobs.iter().zip(results) {
        let d = result?;
        rows.push((i, n, d));
    }

    match args.common.format {
        FormatArg::Csv => {
            let mut out = String::new();
            out.push_str(&density_header(args.m));
            out.push('\n');
            for &(i, n, d) in &rows {
                let coords: Vec<String> = points[i]
                    .iter()
                    .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
                    .collect();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    coords.join(","),
                    n,
                    args.mode.label(),
                    args.ensemble.label(),
                    fmt_f64(d)
                ));
            }
            Ok(CommandOutput {
                primary: out,
                summary: None,
            })
        }
        FormatArg::Json => {
            let body: Vec<DensityRow> = rows
                .iter()
                .map(|&(i, n, d)| DensityRow {
                    point: points[i].iter().flat_map(|z| [z.re, z.im]).collect(),
                    n,
                    mode: args.mode.label().into(),
                    ensemble: args.ensemble.label().into(),
                    density: d,
                })
                .collect();
            Ok(CommandOutput {
                primary: serde_json::to_string_pretty(&body).expect("serializable rows"),
                summary: None,
            })
        }
    }
}

#[derive(Serialize)]
struct RatioRow {
    y: f64,
    n: u32,
    ratio: f64,
}

/// `ratio-scan`: density_real/density_cx along iy, first coordinate only.
pub fn cmd_ratio_scan(args: &RatioScanArgs) -> Result<CommandOutput> {
    let degrees = parse_degrees(&args.degrees)?;
    let ys = parse_linspace(&args.y)?;
    if ys.iter().any(|&y| y <= 0.0) {
        return Err(KrError::InvalidArgument("ratio scan needs y > 0".into()));
    }
    let mode = args.mode.to_mode();
    let jobs: Vec<(f64, u32)> = ys
        .iter()
        .flat_map(|&y| degrees.iter().map(move |&n| (y, n)))
        .collect();
    let ratios: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(y, n)| {
            let mut z = vec![Complex64::new(0.0, 0.0); args.m];
            z[0] = Complex64::new(0.0, y);
            density_ratio(args.m, n, mode, &z)
        })
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    for (&(y, n), ratio) in jobs.iter().zip(ratios) {
        rows.push(RatioRow {
            y,
            n,
            ratio: ratio?,
        });
    }
    match args.common.format {
        FormatArg::Csv => {
            let mut out = String::from("y,N,ratio\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(row.y),
                    row.n,
                    fmt_f64(row.ratio)
                ));
            }
            Ok(CommandOutput {
                primary: out,
                summary: None,
            })
        }
        FormatArg::Json => Ok(CommandOutput {
            primary: serde_json::to_string_pretty(&rows).expect("serializable rows"),
            summary: None,
        }),
    }
}

#[derive(Serialize)]
struct DecayReport {
    fitted_rate: f64,
    theoretical_rate: f64,
    relative_gap: f64,
    n_points: usize,
    residual: f64,
}

/// `decay`: gap rows plus the fitted-rate report.
pub fn cmd_decay(args: &DecayArgs) -> Result<CommandOutput> {
    let degrees = parse_degrees(&args.degrees)?;
    let z = parse_point(&args.point)?;
    if z.len() != args.m {
        return Err(KrError::InvalidArgument(format!(
            "point has {} coordinates, expected m = {}",
            z.len(),
            args.m
        )));
    }
    let mode = args.mode.to_mode();
    let gaps = decay_gaps(args.m, mode, &z, &degrees)?;
    let fit = decay_rate_fit(args.m, mode, &z, &degrees)?;
    let report = DecayReport {
        fitted_rate: fit.fitted_rate,
        theoretical_rate: fit.theoretical_rate,
        relative_gap: (fit.fitted_rate - fit.theoretical_rate).abs()
            / fit.theoretical_rate.max(f64::MIN_POSITIVE),
        n_points: fit.n_points,
        residual: fit.residual,
    };
    let report_json = serde_json::to_string_pretty(&report).expect("serializable report");
    match args.common.format {
        FormatArg::Csv => {
            let mut out = String::from("N,diff,log_abs_diff\n");
            for &(n, gap) in &gaps {
                out.push_str(&format!("{},{},{}\n", n, fmt_f64(gap), fmt_f64(gap.ln())));
            }
            Ok(CommandOutput {
                primary: out,
                summary: Some(report_json),
            })
        }
        FormatArg::Json => {
            #[derive(Serialize)]
            struct Full {
                rows: Vec<(u32, f64, f64)>,
                fit: DecayReport,
            }
            let rows = gaps.iter().map(|&(n, g)| (n, g, g.ln())).collect();
            Ok(CommandOutput {
                primary: serde_json::to_string_pretty(&Full { rows, fit: report })
                    .expect("serializable report"),
                summary: None,
            })
        }
    }
}

fn parse_window(s: &str) -> Result<Window> {
    let bad = || KrError::InvalidArgument(format!("bad window spec '{s}'"));
    let (re_part, im_part) = s.split_once(',').ok_or_else(bad)?;
    let parse_range = |part: &str| -> Result<(f64, f64)> {
        let (lo, hi) = part.split_once(':').ok_or_else(bad)?;
        Ok((
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
        ))
    };
    let (re_lo, re_hi) = parse_range(re_part)?;
    let (im_lo, im_hi) = parse_range(im_part)?;
    if re_hi <= re_lo || im_hi <= im_lo {
        return Err(bad());
    }
    Ok(Window {
        re_lo,
        re_hi,
        im_lo,
        im_hi,
    })
}

#[derive(Serialize)]
struct McSummary {
    n_samples: usize,
    n_failed: usize,
    n_excluded_cells: usize,
    fraction_bad_cells: f64,
    max_abs_z: f64,
    seed: u64,
}

/// `mc`: sample, histogram, compare; CSV cells plus JSON summary.
pub fn cmd_mc(args: &McArgs) -> Result<CommandOutput> {
    let seed = args.common.resolved_seed();
    let field = args.ensemble.to_field();
    let mode = args.mode.to_mode();
    let spec = EnsembleSpec::new(1, args.degree, field, mode)?;
    let window = parse_window(&args.window)?;
    let (nx, ny) = {
        let bad = || KrError::InvalidArgument(format!("bad cell spec '{}'", args.cells));
        let (a, b) = args.cells.split_once('x').ok_or_else(bad)?;
        (
            a.parse::<usize>().map_err(|_| bad())?,
            b.parse::<usize>().map_err(|_| bad())?,
        )
    };
    let exclude_im = args.exclude_im.unwrap_or(match field {
        Field::Real => 0.1,
        Field::Complex => 0.0,
    });

    let run = sample_roots(&spec, args.samples, seed)?;
    let n = args.degree;
    let analytic: Box<dyn Fn(Complex64) -> f64 + Sync> = match (field, mode) {
        (Field::Complex, Mode::Critical) => Box::new(move |z| su2_crit_density(n, z)),
        (Field::Complex, Mode::Zeros) => Box::new(move |z| su_zero_density(1, n, &[z])),
        (Field::Real, _) => Box::new(move |z| match density(&spec, &[z]) {
            Ok(r) => r.density,
            Err(_) => 0.0,
        }),
    };
    let hist = build_histogram(&run, window, nx, ny, &analytic, exclude_im);
    let cmp = compare_histogram(&hist);
    let summary = McSummary {
        n_samples: run.accepted.len(),
        n_failed: run.n_failed,
        n_excluded_cells: cmp.n_excluded,
        fraction_bad_cells: cmp.fraction_bad,
        max_abs_z: cmp.max_abs_z,
        seed,
    };
    let summary_json = serde_json::to_string_pretty(&summary).expect("serializable summary");

    match args.common.format {
        FormatArg::Csv => {
            let mut out = String::from("re_lo,re_hi,im_lo,im_hi,count,expected,z_score\n");
            for cell in &cmp.cells {
                let z_text = if cell.excluded {
                    "excluded".to_string()
                } else {
                    fmt_f64(cell.z_score)
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_f64(cell.bounds.re_lo),
                    fmt_f64(cell.bounds.re_hi),
                    fmt_f64(cell.bounds.im_lo),
                    fmt_f64(cell.bounds.im_hi),
                    cell.count,
                    fmt_f64(cell.expected),
                    z_text
                ));
            }
            Ok(CommandOutput {
                primary: out,
                summary: Some(summary_json),
            })
        }
        FormatArg::Json => {
            #[derive(Serialize)]
            struct CellRow {
                re_lo: f64,
                re_hi: f64,
                im_lo: f64,
                im_hi: f64,
                count: u64,
                expected: f64,
                z_score: f64,
                excluded: bool,
            }
            #[derive(Serialize)]
            struct Full {
                cells: Vec<CellRow>,
                summary: McSummary,
            }
            let cells = cmp
                .cells
                .iter()
                .map(|c| CellRow {
                    re_lo: c.bounds.re_lo,
                    re_hi: c.bounds.re_hi,
                    im_lo: c.bounds.im_lo,
                    im_hi: c.bounds.im_hi,
                    count: c.count,
                    expected: c.expected,
                    z_score: c.z_score,
                    excluded: c.excluded,
                })
                .collect();
            Ok(CommandOutput {
                primary: serde_json::to_string_pretty(&Full { cells, summary })
                    .expect("serializable summary"),
                summary: None,
            })
        }
    }
}

/// `selftest`: pass/fail per suite with worst errors. The bool is the
/// overall verdict.
pub fn cmd_selftest(args: &SelftestArgs) -> Result<(CommandOutput, bool)> {
    let report = selftest::run_all()?;
    let primary = match args.common.format {
        FormatArg::Csv => {
            let mut out = String::from("suite,passed,max_error,detail\n");
            for s in &report.suites {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    s.name,
                    s.passed,
                    fmt_f64(s.max_error),
                    s.detail
                ));
            }
            out.push_str(&format!("overall,{},,\n", report.passed));
            out
        }
        FormatArg::Json => serde_json::to_string_pretty(&report).expect("serializable report"),
    };
    Ok((CommandOutput::new(primary), report.passed))
}

struct Rendered {
    output: CommandOutput,
    /// Exit code 1 carrier for selftest.
    failed_selftest: bool,
}

fn dispatch(cli: &CliArgs) -> Result<Rendered> {
    match &cli.command {
        Command::Density(args) => Ok(Rendered {
            output: cmd_density(args)?,
            failed_selftest: false,
        }),
        Command::RatioScan(args) => Ok(Rendered {
            output: cmd_ratio_scan(args)?,
            failed_selftest: false,
        }),
        Command::Decay(args) => Ok(Rendered {
            output: cmd_decay(args)?,
            failed_selftest: false,
        }),
        Command::Mc(args) => Ok(Rendered {
            output: cmd_mc(args)?,
            failed_selftest: false,
        }),
        Command::Selftest(args) => {
            let (output, passed) = cmd_selftest(args)?;
            Ok(Rendered {
                output,
                failed_selftest: !passed,
            })
        }
    }
}

fn output_path(cli: &CliArgs) -> Option<&PathBuf> {
    let common = match &cli.command {
        Command::Density(a) => &a.common,
        Command::RatioScan(a) => &a.common,
        Command::Decay(a) => &a.common,
        Command::Mc(a) => &a.common,
        Command::Selftest(a) => &a.common,
    };
    common.output.as_ref()
}

impl CommandOutput {
    fn new(primary: String) -> Self {
        Self {
            primary,
            summary: None,
        }
    }
}

/// Entry point for the binary. Exit codes: 0 ok, 1 selftest failure,
/// 2 domain error.
pub fn run() -> i32 {
    let cli = CliArgs::parse();
    match dispatch(&cli) {
        Ok(rendered) => {
            match output_path(&cli) {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &rendered.output.primary) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                    if let Some(summary) = &rendered.output.summary {
                        println!("{summary}");
                    }
                }
                None => {
                    print!("{}", rendered.output.primary);
                    let _ = std::io::stdout().flush();
                    if let Some(summary) = &rendered.output.summary {
                        eprintln!("{summary}");
                    }
                }
            }
            if rendered.failed_selftest {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
