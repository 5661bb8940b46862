//! The `wigner` command line: argument parsing, result files and plot scripts.

pub mod args;
pub mod output;
pub mod plot;
pub mod validate;

use std::path::Path;

pub use args::{help_text, parse_args, parse_invocation, Command, Invocation, RunConfig};
pub use output::{emit, fmt_sig, render, write_result, OutputFormat, Report};
pub use validate::{validate_suite, validate_suite_with, Check, ValidationReport};

use crate::error::{Error, Result};
use crate::negativity::{delta_indicator, evaluate_grid};
use crate::sweeps::{fock_scan, run_sweep};
use plot::PlotKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit code for an error that stopped a run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_)
        | Error::StateSyntax { .. }
        | Error::InvalidState(_)
        | Error::Config(_)
        | Error::Sweep(_)
        | Error::Format(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

fn title_of(config: &RunConfig) -> String {
    match &config.state {
        Some(s) => s.to_string(),
        None => config.command.as_str().to_string(),
    }
}

fn write_plot(config: &RunConfig, script: impl FnOnce(&Path) -> String) -> Result<()> {
    if let (Some(plot), Some(data)) = (&config.plot, &config.out) {
        emit(&script(data), Some(plot))?;
    }
    Ok(())
}

/// Executes one command. Results go to `--out` or stdout, notes to stderr.
/// Returns the process exit code.
pub fn run(config: &RunConfig) -> Result<i32> {
    let out = config.out.as_deref();
    match config.command {
        Command::Eval => {
            let spec = config.state.as_ref().expect("eval has a state");
            let req = config.grid.as_ref().expect("eval has a grid");
            let grid = evaluate_grid(spec, &req.rect, req.nq, req.np)?;
            emit(&render(Report::Grid(&grid), config.format)?, out)?;
            write_plot(config, |data| {
                plot::grid_script(&grid, data, &title_of(config))
            })?;
            Ok(EXIT_OK)
        }
        Command::Delta => {
            let spec = config.state.as_ref().expect("delta has a state");
            let r = delta_indicator(spec, &config.quad)?;
            emit(&render(Report::Negativity(&r), config.format)?, out)?;
            if r.converged {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "warning: not converged after {} refinements (last change {:e}, tolerance {:e})",
                    r.refinements, r.error_estimate, config.quad.tolerance
                );
                Ok(EXIT_CHECK_FAILED)
            }
        }
        Command::Sweep => {
            let spec = config.sweep.as_ref().expect("sweep has a spec");
            let r = run_sweep(spec)?;
            emit(&render(Report::Sweep(&r), config.format)?, out)?;
            let kind = PlotKind::for_sweep(&spec.varied);
            write_plot(config, |data| {
                plot::sweep_script(kind, data, &title_of(config))
            })?;
            for e in &r.extrema {
                eprintln!(
                    "{:?} at {}={} delta={}",
                    e.kind,
                    r.varied,
                    fmt_sig(e.location),
                    fmt_sig(e.value)
                );
            }
            if let Some(period) = r.period_estimate {
                eprintln!("period {}", fmt_sig(period));
            }
            let stalled = r.records.iter().filter(|x| !x.converged).count();
            if stalled > 0 {
                eprintln!(
                    "warning: {stalled} of {} points did not converge",
                    r.records.len()
                );
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(EXIT_OK)
        }
        Command::FockScan => {
            let n_max = config.n_max.unwrap_or(100);
            let scan = fock_scan(n_max, &config.quad)?;
            emit(&render(Report::Sweep(&scan.sweep), config.format)?, out)?;
            if let Some(path) = &config.ratio_out {
                emit(&output::fock_ratio_csv(&scan), Some(path))?;
            }
            write_plot(config, |data| {
                plot::sweep_script(PlotKind::FockScaling, data, "Fock ladder")
            })?;
            let (lo, hi) = scan
                .ratios
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, r)| {
                    (lo.min(r), hi.max(r))
                });
            eprintln!(
                "strictly increasing: {}; ratio delta/(sqrt(n)/2) in [{}, {}]",
                scan.strictly_increasing,
                fmt_sig(lo),
                fmt_sig(hi)
            );
            let stalled = scan.sweep.records.iter().filter(|x| !x.converged).count();
            if stalled > 0 {
                eprintln!(
                    "warning: {stalled} of {} orders did not converge",
                    n_max + 1
                );
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(EXIT_OK)
        }
        Command::Validate => {
            let report = validate_suite();
            emit(&format!("{report}\n"), out)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}
