//! Configuration and subcommands behind the `mfl` binary.
//!
//! Settings come from a TOML file (`--config`, or the file named by
//! `MFL_CONFIG`) and are overridden by flags. Exit codes: 0 success,
//! 1 failed verification, 2 domain or usage error, 3 I/O error,
//! 4 resolution or quadrature failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone_wedge::{
    flow_2d_by_kind, flow_line, write_atomic, FigureFormat, FigureSpec, FlowKind, Region, SpacetimePoint,
};
use crate::numerics::linspace;
use crate::verify::{run_suite, Suite};
use crate::weyl_field::{higher_transform, modular_transform, two_point_momentum, two_point_position, FieldSpec};
use crate::weyl_field::{TestFunction, Transform};
use crate::{Beta, Error, Result, ThermalContext};

pub const CONFIG_ENV: &str = "MFL_CONFIG";

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_RESOLUTION: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::OutOfRange { .. } | Error::Invalid(_) => EXIT_DOMAIN,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::Quadrature(_) | Error::Resolution(_) => EXIT_RESOLUTION,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { xmin: -3.0, xmax: 3.0, n: 2048 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Momentum cutoff; `200/beta` when absent.
    pub pmax: Option<f64>,
    pub np: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { pmax: None, np: ThermalContext::DEFAULT_NP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub beta: Beta,
    pub epsilon: f64,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    pub output: Option<PathBuf>,
    pub format: FigureFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            beta: Beta::Finite(1.0),
            epsilon: 1e-4,
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            output: None,
            format: FigureFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::invalid(format!("config: {}", e.message())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    /// The file named by `--config`, else by `MFL_CONFIG`, else defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(path) => Self::read(path),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(path) if !path.is_empty() => Self::read(Path::new(&path)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.grid.xmin < self.grid.xmax) || self.grid.n < 2 {
            return Err(Error::invalid("grid needs xmin < xmax and n >= 2"));
        }
        self.context().map(|_| ())
    }

    pub fn context(&self) -> Result<ThermalContext> {
        let base = match self.beta {
            Beta::Finite(b) => ThermalContext::new(b)?,
            Beta::Infinite => ThermalContext::vacuum(),
        };
        base.with_quadrature(self.quadrature.pmax.unwrap_or(base.pmax), self.quadrature.np)
    }
}

#[derive(Debug, Parser)]
#[command(name = "mfl", version, about = "Thermal modular flows on light rays, cones and wedges")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration (default: $MFL_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Inverse temperature, a positive number or `inf`.
    #[arg(long, global = true)]
    pub beta: Option<Beta>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub pmax: Option<f64>,
    #[arg(long, global = true)]
    pub np: Option<usize>,
    /// Output file; standard output when absent (figures get a default name).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<FigureFormat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Images of points under a 2D modular or positive-generator flow.
    Flow(FlowArgs),
    /// Flow-line families of the four standard figures.
    Figure(FigureArgs),
    /// Modular or positive-generator action on a test-function file.
    Transform(TransformArgs),
    /// Momentum-space or regularized position-space two-point function.
    Kernel(KernelArgs),
    /// Runs a verification suite and writes its JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long, default_value = "wedge")]
    pub region: Region,
    #[arg(long, default_value = "modular")]
    pub flow: FlowKind,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tau")]
    pub u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// `x0,x1`; may be repeated.
    #[arg(long = "point", required = true, allow_hyphen_values = true)]
    pub points: Vec<SpacetimePoint>,
    /// Sample the flow line `a,b` of each point instead of one image.
    #[arg(long, allow_hyphen_values = true)]
    pub line: Option<String>,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// 1: cone modular, 2: wedge modular, 3: cone gamma, 4: wedge gamma.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub which: u8,
    #[arg(long, default_value_t = 12)]
    pub seeds: usize,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Test-function JSON file.
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tau", required_unless_present = "tau")]
    pub u: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Allow supports reaching below 0 (modular, `u >= 0`, `n = 0`).
    #[arg(long)]
    pub clip: bool,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Field index `n`, scaling dimension `n + 1`.
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Momenta at which to print `W2~(p)`.
    #[arg(long = "p", allow_hyphen_values = true, value_delimiter = ',')]
    pub momenta: Vec<f64>,
    /// Separations at which to print `W2(xi + i eps)` as `re,im`.
    #[arg(long = "xi", allow_hyphen_values = true, value_delimiter = ',')]
    pub separations: Vec<f64>,
    /// Tabulate over the configured grid: `momentum` or `position`.
    #[arg(long)]
    pub table: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// group-laws, flows, kernels, bound, rates, kms or all.
    pub suite: Suite,
}

/// Applies flag overrides to the loaded configuration.
pub fn resolve_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut config = RunConfig::load(global.config.as_deref())?;
    if let Some(beta) = global.beta {
        config.beta = beta;
        if global.pmax.is_none() {
            config.quadrature.pmax = None;
        }
    }
    if let Some(eps) = global.epsilon {
        config.epsilon = eps;
    }
    if let Some(pmax) = global.pmax {
        config.quadrature.pmax = Some(pmax);
    }
    if let Some(np) = global.np {
        config.quadrature.np = np;
    }
    if let Some(path) = &global.output {
        config.output = Some(path.clone());
    }
    if let Some(format) = global.format {
        config.format = format;
    }
    config.validate()?;
    Ok(config)
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mfl: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let config = resolve_config(&cli.global)?;
    match &cli.command {
        Command::Flow(args) => cmd_flow(&config, args),
        Command::Figure(args) => cmd_figure(&config, args),
        Command::Transform(args) => cmd_transform(&config, args),
        Command::Kernel(args) => cmd_kernel(&config, args),
        Command::Verify(args) => cmd_verify(&config, args),
    }
}

/// Writes to the configured output, or standard output.
fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.output {
        Some(path) => write_atomic(path, text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let p: SpacetimePoint = s.parse()?;
    Ok((p.x0, p.x1))
}

pub fn cmd_flow(config: &RunConfig, args: &FlowArgs) -> Result<i32> {
    let ctx = config.context()?;
    let s = match (args.flow, args.u, args.tau) {
        (FlowKind::Modular, Some(u), None) => u,
        (FlowKind::Gamma, None, Some(tau)) => tau,
        (FlowKind::Modular, _, _) => return Err(Error::invalid("a modular flow takes --u")),
        (FlowKind::Gamma, _, _) => return Err(Error::invalid("a gamma flow takes --tau")),
    };
    let mut out = String::new();
    match &args.line {
        None => {
            for p in &args.points {
                out += &format!("{}\n", flow_2d_by_kind(&ctx, args.region, args.flow, s, *p)?);
            }
        }
        Some(range) => {
            out += "line_id,param,x0,x1\n";
            for (id, p) in args.points.iter().enumerate() {
                let line = flow_line(&ctx, args.region, args.flow, *p, parse_pair(range)?, args.samples)?;
                for (param, q) in line.params.iter().zip(&line.points) {
                    out += &format!("{id},{param:.16e},{:.16e},{:.16e}\n", q.x0, q.x1);
                }
            }
        }
    }
    emit(config, &out)?;
    Ok(0)
}

pub fn cmd_figure(config: &RunConfig, args: &FigureArgs) -> Result<i32> {
    let ctx = config.context()?;
    let spec = FigureSpec::standard(&ctx, args.which, args.seeds)?;
    let ext = match config.format {
        FigureFormat::Csv => "csv",
        FigureFormat::Json => "json",
        FigureFormat::Svg => "svg",
    };
    let path = config.output.clone().unwrap_or_else(|| PathBuf::from(format!("figure{}.{ext}", args.which)));
    let data = crate::cone_wedge::emit_flow_figure(&ctx, &spec, config.format, &path)?;
    println!("{} ({} lines)", path.display(), data.lines.len());
    Ok(0)
}

pub fn cmd_transform(config: &RunConfig, args: &TransformArgs) -> Result<i32> {
    let ctx = config.context()?;
    let f = TestFunction::read(&args.input)?;
    let which = match (args.u, args.tau) {
        (Some(u), None) => Transform::Modular(u),
        (None, Some(tau)) => Transform::Gamma(tau),
        _ => return Err(Error::invalid("give exactly one of --u and --tau")),
    };
    let out = match which {
        Transform::Modular(u) if args.n == 0 => modular_transform(&ctx, u, &f, args.clip)?,
        _ if args.clip => return Err(Error::invalid("--clip applies to the n = 0 modular transform")),
        _ => higher_transform(&ctx, args.n, which, &f)?,
    };
    emit(config, &(out.to_json()? + "\n"))?;
    Ok(0)
}

pub fn cmd_kernel(config: &RunConfig, args: &KernelArgs) -> Result<i32> {
    let ctx = config.context()?;
    let spec = FieldSpec::new(args.n);
    let eps = config.epsilon;
    let position = |xi: f64| -> Result<Complex64> { two_point_position(&ctx, spec, xi, eps) };
    let mut out = String::new();
    for &p in &args.momenta {
        out += &format!("{}\n", two_point_momentum(&ctx, spec, p));
    }
    for &xi in &args.separations {
        let w = position(xi)?;
        out += &format!("{},{}\n", w.re, w.im);
    }
    match args.table.as_deref() {
        None => {}
        Some("momentum") => {
            out += "p,value\n";
            for p in linspace(config.grid.xmin, config.grid.xmax, config.grid.n) {
                out += &format!("{p:.16e},{:.16e}\n", two_point_momentum(&ctx, spec, p));
            }
        }
        Some("position") => {
            out += "xi,re,im\n";
            for xi in linspace(config.grid.xmin, config.grid.xmax, config.grid.n) {
                let w = position(xi)?;
                out += &format!("{xi:.16e},{:.16e},{:.16e}\n", w.re, w.im);
            }
        }
        Some(other) => return Err(Error::invalid(format!("unknown table {other:?}; use momentum or position"))),
    }
    if out.is_empty() {
        return Err(Error::invalid("nothing to evaluate: give --p, --xi or --table"));
    }
    emit(config, &out)?;
    Ok(0)
}

pub fn cmd_verify(config: &RunConfig, args: &VerifyArgs) -> Result<i32> {
    let ctx = config.context()?;
    let report = run_suite(&ctx, args.suite)?;
    emit(config, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    let failed = report.cases.iter().filter(|c| !c.pass).count();
    eprintln!("{}: {} cases, {} failed", report.suite, report.cases.len(), failed);
    Ok(if report.pass { 0 } else { EXIT_VERIFY_FAILED })
}
