//! Text serialization of results. Numbers are printed with 9 significant
//! digits so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::negativity::{NegativityResult, PhaseGrid};
use crate::sweeps::{ExtremumKind, FockScan, SweepResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Matrix,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Matrix => "matrix",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "matrix" => Ok(OutputFormat::Matrix),
            other => Err(format!(
                "unknown format '{other}' (expected csv, json or matrix)"
            )),
        }
    }
}

/// Anything the CLI can write.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Negativity(&'a NegativityResult),
    Sweep(&'a SweepResult),
    Grid(&'a PhaseGrid),
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-4, 1e9)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-4..9).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(digits.trim_end_matches('0'));
        } else {
            let split = exp as usize + 1;
            let (int, frac) = digits.split_at(split);
            out.push_str(int);
            let frac = frac.trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        out.push_str(lead);
        let rest = rest.trim_end_matches('0');
        if !rest.is_empty() {
            out.push('.');
            out.push_str(rest);
        }
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    out
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_sig(x)
    } else {
        "null".to_string()
    }
}

pub fn negativity_json(r: &NegativityResult) -> String {
    format!(
        "{{\"delta\":{},\"nu\":{},\"i_plus\":{},\"i_minus\":{},\"error_estimate\":{},\
         \"domain\":{{\"q_min\":{},\"q_max\":{},\"p_min\":{},\"p_max\":{}}},\
         \"resolution\":[{},{}]}}\n",
        json_num(r.delta),
        json_num(r.nu),
        json_num(r.i_plus),
        json_num(r.i_minus),
        json_num(r.error_estimate),
        json_num(r.domain.q_min),
        json_num(r.domain.q_max),
        json_num(r.domain.p_min),
        json_num(r.domain.p_max),
        r.resolution.0,
        r.resolution.1,
    )
}

pub fn negativity_csv(r: &NegativityResult) -> String {
    format!(
        "delta,nu,i_plus,i_minus,error_estimate,q_min,q_max,p_min,p_max,nq,np\n{},{},{},{},{},{},{},{},{},{},{}\n",
        fmt_sig(r.delta),
        fmt_sig(r.nu),
        fmt_sig(r.i_plus),
        fmt_sig(r.i_minus),
        fmt_sig(r.error_estimate),
        fmt_sig(r.domain.q_min),
        fmt_sig(r.domain.q_max),
        fmt_sig(r.domain.p_min),
        fmt_sig(r.domain.p_max),
        r.resolution.0,
        r.resolution.1,
    )
}

pub fn sweep_csv(s: &SweepResult) -> String {
    let mut out = String::from("param,delta,nu,error_estimate\n");
    for r in &s.records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(r.param),
            fmt_sig(r.delta),
            fmt_sig(r.nu),
            fmt_sig(r.error_estimate)
        );
    }
    out
}

pub fn sweep_json(s: &SweepResult) -> String {
    let records: Vec<String> = s
        .records
        .iter()
        .map(|r| {
            format!(
                "{{\"param\":{},\"delta\":{},\"nu\":{},\"error_estimate\":{},\"converged\":{}}}",
                json_num(r.param),
                json_num(r.delta),
                json_num(r.nu),
                json_num(r.error_estimate),
                r.converged
            )
        })
        .collect();
    let extrema: Vec<String> = s
        .extrema
        .iter()
        .map(|e| {
            let kind = match e.kind {
                ExtremumKind::Max => "max",
                ExtremumKind::Min => "min",
            };
            format!(
                "{{\"location\":{},\"value\":{},\"kind\":\"{kind}\"}}",
                json_num(e.location),
                json_num(e.value)
            )
        })
        .collect();
    let period = s.period_estimate.map_or("null".to_string(), json_num);
    format!(
        "{{\"varied\":\"{}\",\"records\":[{}],\"extrema\":[{}],\"period_estimate\":{}}}\n",
        s.varied,
        records.join(","),
        extrema.join(","),
        period
    )
}

/// `n,delta,half_sqrt_n,ratio` for `n >= 1`.
pub fn fock_ratio_csv(scan: &FockScan) -> String {
    let mut out = String::from("n,delta,half_sqrt_n,ratio\n");
    for (&(n, ratio), rec) in scan.ratios.iter().zip(scan.sweep.records.iter().skip(1)) {
        let _ = writeln!(
            out,
            "{n},{},{},{}",
            fmt_sig(rec.delta),
            fmt_sig(0.5 * (n as f64).sqrt()),
            fmt_sig(ratio)
        );
    }
    out
}

/// Two comment lines (`# q: qmin qmax nq`, `# p: pmin pmax np`) followed by
/// one whitespace-separated line per `q` node.
pub fn grid_matrix(g: &PhaseGrid) -> String {
    let mut out = format!(
        "# q: {} {} {}\n# p: {} {} {}\n",
        fmt_sig(g.q_min),
        fmt_sig(g.q_max),
        g.nq,
        fmt_sig(g.p_min),
        fmt_sig(g.p_max),
        g.np
    );
    for i in 0..g.nq {
        let row: Vec<String> = (0..g.np).map(|j| fmt_sig(g.value(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn grid_csv(g: &PhaseGrid) -> String {
    let mut out = String::from("q,p,w\n");
    for i in 0..g.nq {
        for j in 0..g.np {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_sig(g.q(i)),
                fmt_sig(g.p(j)),
                fmt_sig(g.value(i, j))
            );
        }
    }
    out
}

pub fn grid_json(g: &PhaseGrid) -> String {
    let rows: Vec<String> = (0..g.nq)
        .map(|i| {
            let row: Vec<String> = (0..g.np).map(|j| json_num(g.value(i, j))).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!(
        "{{\"q_min\":{},\"q_max\":{},\"nq\":{},\"p_min\":{},\"p_max\":{},\"np\":{},\"values\":[{}]}}\n",
        json_num(g.q_min),
        json_num(g.q_max),
        g.nq,
        json_num(g.p_min),
        json_num(g.p_max),
        g.np,
        rows.join(",")
    )
}

pub fn render(report: Report<'_>, format: OutputFormat) -> Result<String> {
    Ok(match (report, format) {
        (Report::Negativity(r), OutputFormat::Json) => negativity_json(r),
        (Report::Negativity(r), OutputFormat::Csv) => negativity_csv(r),
        (Report::Sweep(s), OutputFormat::Csv) => sweep_csv(s),
        (Report::Sweep(s), OutputFormat::Json) => sweep_json(s),
        (Report::Grid(g), OutputFormat::Matrix) => grid_matrix(g),
        (Report::Grid(g), OutputFormat::Csv) => grid_csv(g),
        (Report::Grid(g), OutputFormat::Json) => grid_json(g),
        (_, OutputFormat::Matrix) => {
            return Err(Error::Format(
                "matrix output is only available for grids".into(),
            ))
        }
    })
}

pub fn write_result(report: Report<'_>, format: OutputFormat, sink: &mut dyn Write) -> Result<()> {
    let text = render(report, format)?;
    sink.write_all(text.as_bytes()).map_err(|source| Error::Io {
        context: "<output>".into(),
        source,
    })
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            let io_err = |source: io::Error| Error::Io {
                context: path.to_path_buf(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            w.write_all(text.as_bytes()).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| Error::Io {
                    context: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::negativity::{evaluate_grid, Rect};
    use crate::states::StateSpec;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::FRAC_1_PI), "0.318309886");
        assert_eq!(fmt_sig(0.426_122_638_851), "0.426122639");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(123_456_789.0), "123456789");
        assert_eq!(fmt_sig(1.234_567_891e9), "1.23456789e+09");
        assert_eq!(fmt_sig(6.1e-7), "6.1e-07");
        assert_eq!(fmt_sig(1.5e-5), "1.5e-05");
        assert_eq!(fmt_sig(1.5e-4), "0.00015");
        assert_eq!(fmt_sig(0.0), "0");
        for x in [0.4261226, 1.19138, 7.98e-3, -13.25] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-9 * x.abs());
        }
    }

    #[test]
    fn vacuum_matrix() {
        let rect = Rect {
            q_min: -7.0,
            q_max: 7.0,
            p_min: -7.0,
            p_max: 7.0,
        };
        let g = evaluate_grid(&StateSpec::Fock { n: 0 }, &rect, 3, 3).unwrap();
        let text = grid_matrix(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# q: -7 7 3");
        assert_eq!(lines[1], "# p: -7 7 3");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[3].split_whitespace().nth(1), Some("0.318309886"));
        assert!(render(Report::Grid(&g), OutputFormat::Csv)
            .unwrap()
            .starts_with("q,p,w\n"));
    }

    #[test]
    fn format_names() {
        for f in [OutputFormat::Csv, OutputFormat::Json, OutputFormat::Matrix] {
            assert_eq!(f.as_str().parse::<OutputFormat>().unwrap(), f);
        }
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
