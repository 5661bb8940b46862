//! gnuplot scripts for the data files written by the CLI.

use std::path::Path;

use crate::cli_io::output::fmt_sig;
use crate::negativity::PhaseGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Contour/heat map of a Wigner grid in matrix format.
    WignerMap,
    /// delta against the cat half-separation `q0`.
    DeltaVsSeparation,
    /// delta against the cat momentum `p0`.
    DeltaVsMomentum,
    /// delta against a generic scan parameter.
    DeltaVsParameter,
    /// Fock ladder with the `sqrt(n)/2` reference curve.
    FockScaling,
}

impl PlotKind {
    pub fn for_sweep(varied: &str) -> PlotKind {
        match varied {
            "q0" => PlotKind::DeltaVsSeparation,
            "p0" => PlotKind::DeltaVsMomentum,
            _ => PlotKind::DeltaVsParameter,
        }
    }
}

fn quoted(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', "''"))
}

/// Script for a sweep or Fock-ladder CSV (`param,delta,nu,error_estimate`).
pub fn sweep_script(kind: PlotKind, data: &Path, title: &str) -> String {
    let xlabel = match kind {
        PlotKind::DeltaVsSeparation => "q_0",
        PlotKind::DeltaVsMomentum => "p_0",
        PlotKind::FockScaling => "n",
        _ => "parameter",
    };
    let mut s = format!(
        "set datafile separator ','\n\
         set key top left\n\
         set xlabel '{xlabel}'\n\
         set ylabel 'delta'\n\
         set title '{title}'\n\
         set grid\n"
    );
    let data = quoted(data);
    if kind == PlotKind::FockScaling {
        s.push_str(&format!(
            "plot {data} using 1:2 skip 1 with linespoints title 'delta(n)', \\\n     sqrt(x)/2 with lines dashtype 2 title 'sqrt(n)/2'\n"
        ));
    } else {
        s.push_str(&format!(
            "plot {data} using 1:2 skip 1 with lines title 'delta'\n"
        ));
    }
    s
}

/// Script for a grid written in matrix format, with the zero contour drawn
/// on top of the heat map.
pub fn grid_script(grid: &PhaseGrid, data: &Path, title: &str) -> String {
    let dq = (grid.q_max - grid.q_min) / (grid.nq - 1) as f64;
    let dp = (grid.p_max - grid.p_min) / (grid.np - 1) as f64;
    let data = quoted(data);
    format!(
        "set title '{title}'\n\
         set xlabel 'q'\n\
         set ylabel 'p'\n\
         set size ratio -1\n\
         set palette defined (-1 'blue', 0 'white', 1 'red')\n\
         set cbrange [-{lim}:{lim}]\n\
         set contour base\n\
         set cntrparam levels discrete 0\n\
         set view map\n\
         unset surface\n\
         set table $zero\n\
         splot {data} matrix using ({q0}+$2*{dq}):({p0}+$1*{dp}):3\n\
         unset table\n\
         unset contour\n\
         plot {data} matrix using ({q0}+$2*{dq}):({p0}+$1*{dp}):3 with image notitle, \\\n\
         \x20    $zero with lines lc 'black' notitle\n",
        lim = fmt_sig(std::f64::consts::FRAC_1_PI),
        q0 = fmt_sig(grid.q_min),
        p0 = fmt_sig(grid.p_min),
        dq = fmt_sig(dq),
        dp = fmt_sig(dp),
    )
}
