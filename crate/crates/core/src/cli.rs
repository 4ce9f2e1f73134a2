//! The `hankel-lab` command line.
//!
//! Exit codes: 0 success, 2 verification failure, 64 usage error, 74 I/O
//! error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::functionals::Order;
use crate::optimizer::OptimizerConfig;
use crate::report::{emit, scan_table, to_json, CsvTable, RowStatus};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "hankel-lab",
    version,
    about = "Numerical checks of the third Hankel determinant bound for starlike functions of order alpha"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximise the bound surface and probe |H3,1| over a range of alpha.
    Scan(ScanArgs),
    /// Report the alpha thresholds with brackets and residuals.
    Roots(OutputArgs),
    /// Coefficients and |H3,1| of the extremal function.
    Extremal(ExtremalArgs),
    /// The nephroid-type order: alpha = 1 - 2 sqrt(2)/3.
    Nephroid(OutputArgs),
    /// Write the figure data (CSV and JSON) into a directory.
    Figures(FiguresArgs),
    /// Decomposition identity, rotation and majorant property suites.
    Crosscheck(CrosscheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Single alpha; overrides the range flags.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 0.36)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.04)]
    pub alpha_step: f64,
}

impl RangeArgs {
    fn alphas(&self) -> Result<Vec<f64>> {
        match self.alpha {
            Some(a) => {
                Order::new(a)?;
                Ok(vec![a])
            }
            None => verify::alpha_grid(self.alpha_min, self.alpha_max, self.alpha_step),
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Grid points along p, x, y.
    #[arg(long, default_value = "201,101,101", value_parser = parse_grid)]
    pub grid: (usize, usize, usize),
    /// Step below which the compass refinement stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random parameter samples for the lower-bound probe.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the excluded window around alpha0.
    #[arg(long, default_value_t = verify::DEFAULT_WINDOW)]
    pub window: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Number of Taylor coefficients to list.
    #[arg(long, default_value_t = 7)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Directory receiving the figure files.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [np, nx, ny] = parts.as_slice() else {
        return Err("expected NP,NX,NY".into());
    };
    let n = |v: &str| v.parse::<usize>().map_err(|e| format!("{v}: {e}"));
    Ok((n(np)?, n(nx)?, n(ny)?))
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain { .. } | Error::InvalidId(_) => EXIT_USAGE,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::NoSignChange { .. } | Error::NonFinite { .. } => EXIT_VERIFY,
    }
}

fn write_report<T: serde::Serialize + ?Sized>(
    output: &OutputArgs,
    table: impl FnOnce() -> CsvTable,
    value: &T,
    stdout: &mut dyn Write,
) -> Result<()> {
    let text = match output.format {
        Format::Csv => table().render(),
        Format::Json => to_json(value)?,
    };
    emit(output.out.as_deref(), &text, stdout)
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Scan(a) => {
            let alphas = a.range.alphas()?;
            if a.window.is_nan() || a.window < 0.0 {
                return Err(Error::domain("window", a.window, "window >= 0"));
            }
            let cfg = OptimizerConfig {
                grid_steps: a.grid,
                refine_tol: a.tol,
                seed: a.seed,
                sample_count: a.samples,
                ..Default::default()
            };
            cfg.validate()?;
            let rows = verify::scan(&alphas, &cfg, a.window)?;
            write_report(&a.output, || scan_table(&rows), &rows, stdout)?;
            let bad = rows
                .iter()
                .filter(|r| r.status == RowStatus::Violation)
                .count();
            if bad > 0 {
                writeln!(stderr, "{bad} row(s) violate the bound")?;
                return Ok(EXIT_VERIFY);
            }
            Ok(EXIT_OK)
        }
        Command::Roots(o) => {
            let rows = verify::root_rows();
            write_report(&o, || verify::roots_table(&rows), &rows, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Extremal(a) => {
            let order = Order::new(a.alpha)?;
            let r = verify::extremal(order, a.n_max)?;
            write_report(&a.output, || verify::extremal_table(&r), &r, stdout)?;
            Ok(if (r.ratio - 1.0).abs() <= 1e-12 {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Nephroid(o) => {
            let n = verify::nephroid();
            write_report(&o, || verify::nephroid_table(&n), &n, stdout)?;
            Ok(if n.in_theorem_range {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Figures(a) => {
            write_figures(&a.out)?;
            Ok(EXIT_OK)
        }
        Command::Crosscheck(a) => {
            if a.samples < 1 {
                return Err(Error::domain("samples", 0.0, "samples >= 1"));
            }
            let alphas = a.range.alphas()?;
            let rows = alphas
                .iter()
                .map(|&al| verify::crosscheck_alpha(Order::new(al)?, a.samples, a.seed))
                .collect::<Result<Vec<_>>>()?;
            write_report(&a.output, || verify::cross_table(&rows), &rows, stdout)?;
            let mut code = EXIT_OK;
            for r in rows.iter().filter(|r| !r.passed) {
                code = EXIT_VERIFY;
                for f in &r.failures {
                    writeln!(
                        stderr,
                        "alpha={} check={} index={:?} residual={:e} params={}",
                        r.alpha,
                        f.check,
                        f.index,
                        f.residual,
                        serde_json::to_string(&f.params)?
                    )?;
                }
            }
            Ok(code)
        }
    }
}

pub const FIGURE_FILES: [&str; 3] = ["fig_a_x0_face", "fig_b_p0", "fig_c_upper_bounds"];

/// Writes the three figure tables as `<name>.csv` and `<name>.json`.
pub fn write_figures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let a = verify::figure_a();
    let b = verify::figure_b();
    let c = verify::figure_c();
    let outputs = [
        (verify::figure_a_table(&a).render(), to_json(&a)?),
        (verify::figure_b_table(&b).render(), to_json(&b)?),
        (verify::figure_c_table(&c).render(), to_json(&c)?),
    ];
    for (name, (csv, json)) in FIGURE_FILES.iter().zip(outputs) {
        fs::write(dir.join(format!("{name}.csv")), csv)?;
        fs::write(dir.join(format!("{name}.json")), json)?;
    }
    Ok(())
}
