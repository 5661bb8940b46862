//! Command-line parsing into a [`RunConfig`], and the reverse direction.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::cli_io::output::OutputFormat;
use crate::error::{Error, Result};
use crate::negativity::{support_rectangle, QuadratureConfig, Rect};
use crate::states::StateSpec;
use crate::sweeps::SweepSpec;

const STATE_GRAMMAR: &str = "\
STATE GRAMMAR:
  kind[:key=value,...]   keys in any order, missing keys default to 0

  fock:n=3
  coherent:q0=1,p0=2
  sqvac:s=1,phi=0,q0=0,p0=0
  sdf:n=3,s=0.5,phi=0.5235987756,q0=0,p0=0
  cat:q0=2,p0=4

ENVIRONMENT:
  WIGNER_THREADS   worker threads (0 or unset: one per core)

EXIT CODES:
  0 success, 1 failed check or unconverged result, 2 usage error";

#[derive(Debug, Parser)]
#[command(
    name = "wigner",
    version,
    about = "Wigner functions of Fock, squeezed and cat states and the volume of their negative part",
    after_help = STATE_GRAMMAR,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Sample W(q, p) on a grid
    Eval(EvalArgs),
    /// Negativity indicator delta of one state
    Delta(DeltaArgs),
    /// Scan delta over one state parameter
    Sweep(SweepArgs),
    /// delta(|n>) for n = 0..=n_max from the radial profile
    FockScan(FockScanArgs),
    /// Run the built-in checks and print one line per check
    Validate,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Absolute tolerance on delta between ladder rungs
    #[arg(long, value_name = "TOL", allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Extra half-width beyond the support estimate
    #[arg(long, allow_hyphen_values = true)]
    padding: Option<f64>,
    /// Cells per unit length on the coarsest grid
    #[arg(long, value_name = "N")]
    cells_per_unit: Option<usize>,
    #[arg(long, value_name = "N")]
    max_refinements: Option<usize>,
    #[arg(long, value_name = "N")]
    min_refinements: Option<usize>,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, value_name = "csv|json|matrix")]
    format: Option<OutputFormat>,
    /// Output file (default: stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write a gnuplot script for the output file
    #[arg(long, value_name = "PATH", requires = "out")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_parser = parse_state)]
    state: StateSpec,
    #[arg(long, default_value_t = 201)]
    nq: usize,
    #[arg(long = "np", default_value_t = 201)]
    np_: usize,
    /// q window as a:b (default: support rectangle)
    #[arg(long, value_name = "A:B", value_parser = parse_range, allow_hyphen_values = true)]
    q_range: Option<(f64, f64)>,
    #[arg(long, value_name = "A:B", value_parser = parse_range, allow_hyphen_values = true)]
    p_range: Option<(f64, f64)>,
    #[arg(long, allow_hyphen_values = true)]
    padding: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct DeltaArgs {
    #[arg(long, value_parser = parse_state)]
    state: StateSpec,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Template state; its varied key is overwritten
    #[arg(long, value_parser = parse_state)]
    state: StateSpec,
    /// name=start:stop:step
    #[arg(long, value_name = "KEY=A:B:STEP", value_parser = parse_vary, allow_hyphen_values = true)]
    vary: Vary,
    /// key=value, repeatable
    #[arg(long, value_name = "KEY=VALUE", value_parser = parse_fixed)]
    fixed: Vec<(String, f64)>,
    /// Drop max/min pairs closer than this in delta
    #[arg(long, allow_hyphen_values = true)]
    min_prominence: Option<f64>,
    /// Re-run points so every point ends on the same ladder rung
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct FockScanArgs {
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// Also write n,delta,half_sqrt_n,ratio
    #[arg(long, value_name = "PATH")]
    ratio_out: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eval,
    Delta,
    Sweep,
    FockScan,
    Validate,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Delta => "delta",
            Command::Sweep => "sweep",
            Command::FockScan => "fock-scan",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vary {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRequest {
    pub rect: Rect,
    pub nq: usize,
    pub np: usize,
    /// Set when the rectangle came from `--q-range`/`--p-range`.
    pub q_range: Option<(f64, f64)>,
    pub p_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub state: Option<StateSpec>,
    pub quad: QuadratureConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub grid: Option<GridRequest>,
    pub sweep: Option<SweepSpec>,
    pub fixed: Vec<(String, f64)>,
    pub n_max: Option<usize>,
    pub ratio_out: Option<PathBuf>,
}

/// Outcome of reading a command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(Box<RunConfig>),
    /// `--help` or `--version`; the text goes to stdout with exit code 0.
    Info(String),
}

fn parse_state(s: &str) -> std::result::Result<StateSpec, String> {
    s.parse::<StateSpec>().map_err(|e| match e {
        Error::StateSyntax { reason, .. } => reason,
        Error::InvalidState(reason) => reason,
        other => other.to_string(),
    })
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| "expected A:B".to_string())?;
    let (a, b) = (parse_f64(a)?, parse_f64(b)?);
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("range start {a} must be below its end {b}"))
    }
}

fn parse_fixed(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| "expected KEY=VALUE".to_string())?;
    Ok((k.trim().to_string(), parse_f64(v)?))
}

fn parse_vary(s: &str) -> std::result::Result<Vary, String> {
    let (key, range) = s
        .split_once('=')
        .ok_or_else(|| "expected KEY=A:B:STEP".to_string())?;
    let parts: Vec<&str> = range.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err("expected KEY=A:B:STEP".to_string());
    };
    Ok(Vary {
        key: key.trim().to_string(),
        start: parse_f64(a)?,
        stop: parse_f64(b)?,
        step: parse_f64(step)?,
    })
}

fn quad_from(q: &QuadArgs) -> Result<QuadratureConfig> {
    let d = QuadratureConfig::default();
    let config = QuadratureConfig {
        padding: q.padding.unwrap_or(d.padding),
        base_cells_per_unit: q.cells_per_unit.unwrap_or(d.base_cells_per_unit),
        max_refinements: q.max_refinements.unwrap_or(d.max_refinements),
        tolerance: q.tol.unwrap_or(d.tolerance),
        min_refinements: q.min_refinements.unwrap_or(d.min_refinements),
    };
    config.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(config)
}

fn format_for(out: &OutArgs, default: OutputFormat, allow_matrix: bool) -> Result<OutputFormat> {
    let format = out.format.unwrap_or(default);
    if format == OutputFormat::Matrix && !allow_matrix {
        return Err(Error::Usage(
            "'--format matrix' is only available for eval".to_string(),
        ));
    }
    Ok(format)
}

fn base(
    command: Command,
    state: Option<StateSpec>,
    out: &OutArgs,
    format: OutputFormat,
) -> RunConfig {
    RunConfig {
        command,
        state,
        quad: QuadratureConfig::default(),
        format,
        out: out.out.clone(),
        plot: out.plot.clone(),
        grid: None,
        sweep: None,
        fixed: Vec::new(),
        n_max: None,
        ratio_out: None,
    }
}

fn one_line(err: &clap::Error) -> String {
    // clap puts the offending names on indented lines after a trailing ':'.
    let text = err.to_string();
    let head: Vec<&str> = text
        .lines()
        .skip_while(|l| l.trim().is_empty())
        .take_while(|l| !l.trim().is_empty())
        .map(str::trim)
        .collect();
    head.join(" ").trim_start_matches("error: ").to_string()
}

/// Parses `argv` (without the program name).
pub fn parse_invocation<I, S>(argv: I) -> Result<Invocation>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("wigner".to_string())
        .chain(argv.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Ok(Invocation::Info(e.to_string()))
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Err(Error::Usage(
                    "missing command (eval, delta, sweep, fock-scan or validate)".into(),
                )),
                _ => Err(Error::Usage(one_line(&e))),
            }
        }
    };
    let config = match cli.command {
        Cmd::Eval(a) => {
            let format = format_for(&a.out, OutputFormat::Matrix, true)?;
            if a.nq < 2 || a.np_ < 2 {
                return Err(Error::Usage(format!(
                    "grid needs at least 2 nodes per axis, got --nq {} --np {}",
                    a.nq, a.np_
                )));
            }
            if a.out.plot.is_some() && format != OutputFormat::Matrix {
                return Err(Error::Usage(
                    "'--plot' for eval needs '--format matrix'".into(),
                ));
            }
            let padding = a.padding.unwrap_or(QuadratureConfig::default().padding);
            if !(padding >= 0.0) || !padding.is_finite() {
                return Err(Error::Usage(format!("'--padding {padding}' must be >= 0")));
            }
            let support = support_rectangle(&a.state, padding);
            let (q_min, q_max) = a.q_range.unwrap_or((support.q_min, support.q_max));
            let (p_min, p_max) = a.p_range.unwrap_or((support.p_min, support.p_max));
            let mut c = base(Command::Eval, Some(a.state), &a.out, format);
            c.quad.padding = padding;
            c.grid = Some(GridRequest {
                rect: Rect {
                    q_min,
                    q_max,
                    p_min,
                    p_max,
                },
                nq: a.nq,
                np: a.np_,
                q_range: a.q_range,
                p_range: a.p_range,
            });
            c
        }
        Cmd::Delta(a) => {
            let format = format_for(&a.out, OutputFormat::Json, false)?;
            let mut c = base(Command::Delta, Some(a.state), &a.out, format);
            c.quad = quad_from(&a.quad)?;
            c
        }
        Cmd::Sweep(a) => {
            let format = format_for(&a.out, OutputFormat::Csv, false)?;
            let quad = quad_from(&a.quad)?;
            let mut spec =
                SweepSpec::new(a.state, &a.vary.key, a.vary.start, a.vary.stop, a.vary.step);
            spec.quad = quad;
            spec.uniform_resolution = a.full;
            if let Some(m) = a.min_prominence {
                if !(m >= 0.0) {
                    return Err(Error::Usage(format!("'--min-prominence {m}' must be >= 0")));
                }
                spec.min_prominence = m;
            }
            for (i, (key, value)) in a.fixed.iter().enumerate() {
                if a.fixed[..i].iter().any(|(k, _)| k == key) {
                    return Err(Error::Usage(format!("'--fixed {key}' given twice")));
                }
                if *key == a.vary.key {
                    return Err(Error::Usage(format!(
                        "'--fixed {key}={value}' conflicts with '--vary {key}=...'"
                    )));
                }
                spec = spec
                    .with_fixed(key, *value)
                    .map_err(|e| Error::Usage(format!("'--fixed {key}={value}': {e}")))?;
            }
            spec.validate()
                .map_err(|e| Error::Usage(format!("'--vary {}': {e}", a.vary.key)))?;
            let mut c = base(Command::Sweep, Some(spec.template), &a.out, format);
            c.quad = quad;
            c.fixed = a.fixed;
            c.sweep = Some(spec);
            c
        }
        Cmd::FockScan(a) => {
            let format = format_for(&a.out, OutputFormat::Csv, false)?;
            if a.n_max < 1 {
                return Err(Error::Usage("'--n-max 0': need at least 1".into()));
            }
            let mut c = base(Command::FockScan, None, &a.out, format);
            c.quad = quad_from(&a.quad)?;
            c.n_max = Some(a.n_max);
            c.ratio_out = a.ratio_out;
            c
        }
        Cmd::Validate => RunConfig {
            command: Command::Validate,
            state: None,
            quad: QuadratureConfig::default(),
            format: OutputFormat::Json,
            out: None,
            plot: None,
            grid: None,
            sweep: None,
            fixed: Vec::new(),
            n_max: None,
            ratio_out: None,
        },
    };
    Ok(Invocation::Run(Box::new(config)))
}

/// Parses `argv` (without the program name). `--help` is reported as a
/// usage error here; use [`parse_invocation`] to tell them apart.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match parse_invocation(argv)? {
        Invocation::Run(c) => Ok(*c),
        Invocation::Info(_) => Err(Error::Usage("help requested".into())),
    }
}

fn push_quad(args: &mut Vec<String>, q: &QuadratureConfig) {
    let d = QuadratureConfig::default();
    let mut push = |flag: &str, v: String| {
        args.push(flag.to_string());
        args.push(v);
    };
    if q.tolerance != d.tolerance {
        push("--tol", q.tolerance.to_string());
    }
    if q.padding != d.padding {
        push("--padding", q.padding.to_string());
    }
    if q.base_cells_per_unit != d.base_cells_per_unit {
        push("--cells-per-unit", q.base_cells_per_unit.to_string());
    }
    if q.max_refinements != d.max_refinements {
        push("--max-refinements", q.max_refinements.to_string());
    }
    if q.min_refinements != d.min_refinements {
        push("--min-refinements", q.min_refinements.to_string());
    }
}

impl RunConfig {
    /// A command line that parses back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.as_str().to_string()];
        if self.command == Command::Validate {
            return args;
        }
        if let Some(state) = &self.state {
            let state = match &self.sweep {
                // The template already carries the fixed values.
                Some(_) => {
                    let mut s = *state;
                    for (k, _) in &self.fixed {
                        s = s.with_param(k, 0.0).expect("key validated at parse time");
                    }
                    s
                }
                None => *state,
            };
            args.push("--state".into());
            args.push(state.to_string());
        }
        match self.command {
            Command::Eval => {
                let g = self.grid.as_ref().expect("eval has a grid");
                args.extend([
                    "--nq".into(),
                    g.nq.to_string(),
                    "--np".into(),
                    g.np.to_string(),
                ]);
                if let Some((a, b)) = g.q_range {
                    args.extend(["--q-range".into(), format!("{a}:{b}")]);
                }
                if let Some((a, b)) = g.p_range {
                    args.extend(["--p-range".into(), format!("{a}:{b}")]);
                }
                if self.quad.padding != QuadratureConfig::default().padding {
                    args.extend(["--padding".into(), self.quad.padding.to_string()]);
                }
            }
            Command::Sweep => {
                let s = self.sweep.as_ref().expect("sweep has a spec");
                args.push("--vary".into());
                args.push(format!("{}={}:{}:{}", s.varied, s.start, s.stop, s.step));
                for (k, v) in &self.fixed {
                    args.push("--fixed".into());
                    args.push(format!("{k}={v}"));
                }
                if s.min_prominence != 0.0 {
                    args.extend(["--min-prominence".into(), s.min_prominence.to_string()]);
                }
                if s.uniform_resolution {
                    args.push("--full".into());
                }
                push_quad(&mut args, &self.quad);
            }
            Command::FockScan => {
                args.extend(["--n-max".into(), self.n_max.unwrap_or(100).to_string()]);
                if let Some(p) = &self.ratio_out {
                    args.extend(["--ratio-out".into(), p.display().to_string()]);
                }
                push_quad(&mut args, &self.quad);
            }
            Command::Delta => push_quad(&mut args, &self.quad),
            Command::Validate => unreachable!(),
        }
        args.extend(["--format".into(), self.format.as_str().into()]);
        if let Some(p) = &self.out {
            args.extend(["--out".into(), p.display().to_string()]);
        }
        if let Some(p) = &self.plot {
            args.extend(["--plot".into(), p.display().to_string()]);
        }
        args
    }
}

/// Full `--help` text.
pub fn help_text() -> String {
    use clap::CommandFactory;
    Cli::command().render_long_help().to_string()
}
