mod config;
mod error;
mod io;
mod sweep;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpfb::{forward, inverse, RadialFunction, TestSignal};
use serde::Serialize;

use config::{FileConfig, GridSpec, Overrides, PartialParams, RunConfig, SweepPlan};
use error::{CliError, CliResult};
use io::Num;
use verify::{ParamsOut, ResolutionOut, Suite};

const PRECEDENCE: &str = "\
Settings are resolved in three layers: built-in defaults, then the JSON file
given with --config, then command-line flags. A flag always wins over the file,
and the file wins over the defaults. --param may set any subset of a, b, c, d,
e, gamma; the remaining values come from the lower layers.

Defaults: a=0.5, b=1, c=-0.3, d=0.2, e=0.1, gamma=0; truncation 12 with 64
panels of 16 nodes; the transform-domain rule equals the signal rule unless the
config has a `band` block.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.";

#[derive(Parser)]
#[command(name = "qpfb", version, about = "Quadratic-phase Fourier-Bessel transforms", after_help = PRECEDENCE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON config file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Phase parameters and order, e.g. a=0.5,b=1,c=0,d=0,e=0,gamma=0
    #[arg(long, value_name = "LIST")]
    param: Option<String>,
    /// Truncation radius R of the signal rule
    #[arg(long, value_name = "R")]
    truncation: Option<f64>,
    /// Number of quadrature panels on [0, R]
    #[arg(long, value_name = "N")]
    panels: Option<usize>,
    /// Gauss nodes per panel
    #[arg(long, value_name = "M")]
    nodes: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Forward transform of a sampled or named signal
    #[command(after_help = PRECEDENCE)]
    Transform {
        /// CSV with header s,re,im; defaults to the config's `signal`
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Inverse transform of sampled transform values
    #[command(after_help = PRECEDENCE)]
    Inverse {
        /// CSV with header t,re,im; defaults to the config's `signal`
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite and write a JSON report
    #[command(after_help = PRECEDENCE)]
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the concentration bound over families of sets
    #[command(after_help = PRECEDENCE)]
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn resolve(&self) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = Overrides {
            params: self
                .param
                .as_deref()
                .map(PartialParams::parse)
                .transpose()?,
            truncation: self.truncation,
            panels: self.panels,
            nodes: self.nodes,
        };
        RunConfig::resolve(file, flags)
    }
}

#[derive(Serialize)]
struct ComplexOut {
    re: Num,
    im: Num,
}

#[derive(Serialize)]
struct Metadata {
    command: &'static str,
    input: String,
    params: ParamsOut,
    prefactor: ComplexOut,
    resolution: ResolutionOut,
    output_grid: GridOut,
}

#[derive(Serialize)]
struct GridOut {
    start: Num,
    end: Num,
    count: usize,
}

enum Input {
    Samples(qpfb::Signal),
    Named(TestSignal),
}

impl Input {
    fn load(path: Option<&Path>, config: &RunConfig) -> CliResult<(Self, String)> {
        match (path, config.signal) {
            (Some(path), _) => Ok((
                Input::Samples(io::read_signal(path)?),
                path.display().to_string(),
            )),
            (None, Some(named)) => Ok((Input::Named(named), named.name())),
            (None, None) => Err(CliError::Usage(
                "no input: pass --input <csv> or set `signal` in the config".into(),
            )),
        }
    }

    fn as_function(&self) -> &dyn RadialFunction {
        match self {
            Input::Samples(s) => s,
            Input::Named(n) => n,
        }
    }
}

fn run_transform(common: &Common, input: Option<&Path>, inverse_direction: bool) -> CliResult<()> {
    let config = common.resolve()?;
    let (source, label) = Input::load(input, &config)?;
    let grid = config.output_grid.grid()?;
    let params = config.params;
    let (command, column, rule, effective) = if inverse_direction {
        ("inverse", "s", config.band_rule()?, params.inverse())
    } else {
        ("transform", "t", config.signal_rule()?, params)
    };
    let h = source.as_function();
    let values = if inverse_direction {
        inverse(&params, h, &grid, &rule)?.into_values()
    } else {
        forward(&params, h, &grid, &rule)?.values().to_vec()
    };

    let mut out = io::sink(common.out.as_deref())?;
    io::write_samples(&mut *out, column, &grid, &values)
        .map_err(|e| CliError::io(common.out.clone().unwrap_or_else(|| "stdout".into()), e))?;

    let pre = effective.prefactor();
    let GridSpec { start, end, count } = config.output_grid;
    let meta = Metadata {
        command,
        input: label,
        params: (&params).into(),
        prefactor: ComplexOut {
            re: Num(pre.re),
            im: Num(pre.im),
        },
        resolution: rule.resolution().into(),
        output_grid: GridOut {
            start: Num(start),
            end: Num(end),
            count,
        },
    };
    match &common.out {
        Some(path) => {
            let meta_path = io::metadata_path(path);
            let mut file = io::sink(Some(&meta_path))?;
            io::write_json(&mut *file, &meta).map_err(|e| CliError::io(meta_path, e))?;
        }
        None => {
            io::write_json(&mut std::io::stderr(), &meta).map_err(|e| CliError::io("stderr", e))?
        }
    }
    Ok(())
}

fn run_verify(common: &Common, suite: Suite) -> CliResult<bool> {
    let config = common.resolve()?;
    let report = verify::run(suite, &config)?;
    let mut out = io::sink(common.out.as_deref())?;
    io::write_json(&mut *out, &report)
        .map_err(|e| CliError::io(common.out.clone().unwrap_or_else(|| "stdout".into()), e))?;
    for check in &report.checks {
        eprintln!(
            "{} {:<28} lhs {:.6e}  rhs {:.6e}  tol {:.1e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.lhs.0,
            check.rhs.0,
            check.tolerance.0
        );
    }
    eprintln!(
        "{}: {} passed, {} failed",
        report.suite, report.passed, report.failed
    );
    Ok(report.pass)
}

fn run_sweep(common: &Common) -> CliResult<bool> {
    let config = common.resolve()?;
    let plan = SweepPlan::new(&config)?;
    let rows = sweep::run(&config, &plan)?;
    let mut out = io::sink(common.out.as_deref())?;
    sweep::write(&mut *out, &rows)
        .map_err(|e| CliError::io(common.out.clone().unwrap_or_else(|| "stdout".into()), e))?;
    let failed = rows.iter().filter(|r| !r.report.pass).count();
    eprintln!("sweep: {} rows, {} failed", rows.len(), failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Transform { input, common } => {
            run_transform(common, input.as_deref(), false).map(|_| true)
        }
        Command::Inverse { input, common } => {
            run_transform(common, input.as_deref(), true).map(|_| true)
        }
        Command::Verify { suite, common } => run_verify(common, *suite),
        Command::Sweep { common } => run_sweep(common),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
