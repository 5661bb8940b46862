//! The negativity indicator `delta = ∬|W| dq dp - 1 = 2 I-` and the related
//! measure `nu = delta / (1 + delta)`.
//!
//! The integral runs over a truncated rectangle with the composite trapezoid
//! rule on a doubling ladder. Each refinement halves both spacings and only
//! evaluates the new nodes; the old nodes keep their weights. `|W|` has
//! derivative kinks on nodal lines, so the rule stays second order and no
//! extrapolation is attempted.
//!
//! Grids are lattices pinned to the phase-space geometry of the state: Fock
//! type states are centered on their displacement, and cat grids use a
//! momentum spacing that divides the fringe period `pi/q0`. On such a grid the
//! quadrature bias of a cat does not depend on `p0`, which keeps momentum
//! scans free of grid-induced ripple.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special_fn::weighted_laguerre_unchecked;
use crate::states::{StateSpec, WignerFn};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Extra half-width added to the analytic support estimate.
    pub padding: f64,
    /// Cells per unit length on the coarsest grid.
    pub base_cells_per_unit: usize,
    /// Maximum number of grid halvings after the base grid.
    pub max_refinements: usize,
    /// Absolute target on the change of delta between ladder rungs.
    pub tolerance: f64,
    /// Halvings that are always performed before convergence is tested.
    pub min_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            padding: 6.0,
            base_cells_per_unit: 16,
            max_refinements: 6,
            tolerance: 1e-4,
            min_refinements: 1,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.padding >= 0.0) || !self.padding.is_finite() {
            return Err(Error::Config(format!(
                "padding must be >= 0, got {}",
                self.padding
            )));
        }
        if self.base_cells_per_unit == 0 {
            return Err(Error::Config("base_cells_per_unit must be positive".into()));
        }
        if self.max_refinements == 0 {
            return Err(Error::Config("max_refinements must be positive".into()));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.min_refinements > self.max_refinements {
            return Err(Error::Config(format!(
                "min_refinements {} exceeds max_refinements {}",
                self.min_refinements, self.max_refinements
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Rect {
    pub fn contains(&self, other: &Rect) -> bool {
        self.q_min <= other.q_min
            && self.q_max >= other.q_max
            && self.p_min <= other.p_min
            && self.p_max >= other.p_max
    }
}

/// Rectangle holding all but a negligible part of `∬|W|`.
///
/// Fock-type states: centered on `(q0, p0)` with half-width
/// `sqrt(2n + 1) e^|s| + padding` on both axes. Cats: `[-q0 - padding,
/// q0 + padding] x [p0 - padding, p0 + padding]`.
pub fn support_rectangle(spec: &StateSpec, padding: f64) -> Rect {
    match *spec {
        StateSpec::Cat { q0, p0 } => Rect {
            q_min: -q0 - padding,
            q_max: q0 + padding,
            p_min: p0 - padding,
            p_max: p0 + padding,
        },
        _ => {
            let sdf = spec.as_sdf().expect("non-cat states have an sdf form");
            let half = (2.0 * sdf.n as f64 + 1.0).sqrt() * sdf.s.abs().exp() + padding;
            Rect {
                q_min: sdf.q0 - half,
                q_max: sdf.q0 + half,
                p_min: sdf.p0 - half,
                p_max: sdf.p0 + half,
            }
        }
    }
}

/// Wigner values sampled on a uniform node grid (endpoints included),
/// row-major in `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    pub values: Vec<f64>,
}

impl PhaseGrid {
    pub fn q(&self, i: usize) -> f64 {
        node(self.q_min, self.q_max, self.nq, i)
    }

    pub fn p(&self, j: usize) -> f64 {
        node(self.p_min, self.p_max, self.np, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.np + j]
    }

    /// Composite trapezoid integral of `f(W)` over the grid.
    pub fn trapezoid(&self, f: impl Fn(f64) -> f64) -> f64 {
        let hq = (self.q_max - self.q_min) / (self.nq - 1) as f64;
        let hp = (self.p_max - self.p_min) / (self.np - 1) as f64;
        let mut total = 0.0;
        for i in 0..self.nq {
            let wi = end_weight(i, self.nq);
            let row: f64 = (0..self.np)
                .map(|j| end_weight(j, self.np) * f(self.value(i, j)))
                .sum();
            total += wi * row;
        }
        total * hq * hp
    }
}

fn node(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn end_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

pub fn evaluate_grid(spec: &StateSpec, rect: &Rect, nq: usize, np: usize) -> Result<PhaseGrid> {
    if nq < 2 || np < 2 {
        return Err(Error::Config(format!(
            "grid needs at least 2x2 nodes, got {nq}x{np}"
        )));
    }
    if !(rect.q_max > rect.q_min) || !(rect.p_max > rect.p_min) {
        return Err(Error::Config(format!("empty rectangle {rect:?}")));
    }
    let w = spec.wigner_fn()?;
    let values: Vec<f64> = (0..nq)
        .into_par_iter()
        .flat_map_iter(|i| {
            let q = node(rect.q_min, rect.q_max, nq, i);
            (0..np).map(move |j| w.eval(q, node(rect.p_min, rect.p_max, np, j)))
        })
        .collect();
    Ok(PhaseGrid {
        q_min: rect.q_min,
        q_max: rect.q_max,
        p_min: rect.p_min,
        p_max: rect.p_max,
        nq,
        np,
        values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult {
    pub delta: f64,
    pub nu: f64,
    /// Integral of the positive part of `W`.
    pub i_plus: f64,
    /// Modulus of the integral of the negative part of `W`.
    pub i_minus: f64,
    /// `|delta_k - delta_{k-1}|` between the last two ladder rungs.
    pub error_estimate: f64,
    pub domain: Rect,
    /// Cells per axis on the final rung (`(radial cells, 1)` for the radial path).
    pub resolution: (usize, usize),
    pub converged: bool,
    /// Halvings performed after the base grid.
    pub refinements: usize,
}

impl NegativityResult {
    /// `∬|W| - 1`, which equals `delta` up to the normalization residual.
    pub fn raw_delta(&self) -> f64 {
        self.i_plus + self.i_minus - 1.0
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn into_converged(self, tolerance: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                refinements: self.refinements,
                last_change: self.error_estimate,
                tolerance,
            })
        }
    }
}

pub fn nu_from_delta(delta: f64) -> Result<f64> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!(
            "delta must be finite and >= 0, got {delta}"
        )));
    }
    Ok(delta / (1.0 + delta))
}

pub fn delta_from_nu(nu: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::Domain(format!("nu must lie in [0, 1), got {nu}")));
    }
    Ok(nu / (1.0 - nu))
}

/// One axis of a nested lattice: nodes `origin + k * step`, `k in lo..=hi`.
#[derive(Debug, Clone, Copy)]
struct Axis {
    origin: f64,
    step: f64,
    lo: i64,
    hi: i64,
}

impl Axis {
    /// Smallest lattice interval around `[min, max]`.
    fn covering(origin: f64, step: f64, min: f64, max: f64) -> Axis {
        let eps = 1e-9;
        Axis {
            origin,
            step,
            lo: ((min - origin) / step + eps).floor() as i64,
            hi: ((max - origin) / step - eps).ceil() as i64,
        }
    }

    fn refined(&self) -> Axis {
        Axis {
            origin: self.origin,
            step: 0.5 * self.step,
            lo: 2 * self.lo,
            hi: 2 * self.hi,
        }
    }

    fn at(&self, k: i64) -> f64 {
        self.origin + k as f64 * self.step
    }

    fn weight(&self, k: i64) -> f64 {
        if k == self.lo || k == self.hi {
            0.5
        } else {
            1.0
        }
    }

    fn cells(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    fn min(&self) -> f64 {
        self.at(self.lo)
    }

    fn max(&self) -> f64 {
        self.at(self.hi)
    }
}

/// Weighted sums of the positive part and of the modulus of the negative part.
#[derive(Debug, Clone, Copy, Default)]
struct Parts {
    pos: f64,
    neg: f64,
}

impl Parts {
    #[inline]
    fn add(&mut self, weight: f64, v: f64) {
        if v >= 0.0 {
            self.pos += weight * v;
        } else {
            self.neg -= weight * v;
        }
    }

    fn merge(self, other: Parts) -> Parts {
        Parts {
            pos: self.pos + other.pos,
            neg: self.neg + other.neg,
        }
    }
}

fn lattice_for(spec: &StateSpec, config: &QuadratureConfig) -> (Axis, Axis) {
    let rect = support_rectangle(spec, config.padding);
    let base = 1.0 / config.base_cells_per_unit as f64;
    match *spec {
        StateSpec::Cat { q0, .. } => {
            let q_axis = Axis::covering(0.0, base, rect.q_min, rect.q_max);
            // Spacing divides the half-period pi/(2 q0) of |cos(2 p q0)|. With a
            // whole number of cells per half-period every halving moves the
            // aliased harmonic of |W| up by a factor of two.
            let mut p_step = base;
            if q0 > 0.0 {
                let half_period = 0.5 * PI / q0;
                let per_period = (half_period / base).ceil();
                if per_period < 1e9 {
                    p_step = half_period / per_period;
                }
            }
            let p_axis = Axis::covering(0.0, p_step, rect.p_min, rect.p_max);
            (q_axis, p_axis)
        }
        _ => {
            let sdf = spec.as_sdf().expect("non-cat states have an sdf form");
            (
                Axis::covering(sdf.q0, base, rect.q_min, rect.q_max),
                Axis::covering(sdf.p0, base, rect.p_min, rect.p_max),
            )
        }
    }
}

/// Adds the nodes that are new on this rung. On the base rung (`first`) every
/// node is new; afterwards the old nodes are those with two even indices.
fn accumulate_rung(w: &WignerFn, qa: &Axis, pa: &Axis, first: bool) -> Parts {
    let p_nodes: Vec<(i64, f64)> = (pa.lo..=pa.hi).map(|k| (k, pa.at(k))).collect();
    let odd_cols: Vec<(i64, f64)> = p_nodes
        .iter()
        .copied()
        .filter(|(k, _)| k & 1 != 0)
        .collect();

    // Cat rows reuse momentum factors across the whole rung.
    let cat_cols = match w {
        WignerFn::Cat(cat) => {
            let cols = |nodes: &[(i64, f64)]| -> Vec<(f64, f64)> {
                nodes
                    .iter()
                    .map(|&(k, p)| {
                        let env = pa.weight(k) * cat.momentum_envelope(p);
                        (env, env * cat.fringe(p))
                    })
                    .collect()
            };
            Some((cols(&p_nodes), cols(&odd_cols)))
        }
        WignerFn::Sdf(_) => None,
    };

    let rows: Vec<Parts> = (qa.lo..=qa.hi)
        .into_par_iter()
        .map(|kq| {
            let all_cols = first || kq & 1 != 0;
            let q = qa.at(kq);
            let mut row = Parts::default();
            match (w, &cat_cols) {
                (WignerFn::Cat(cat), Some((full, odd))) => {
                    let (peaks, middle) = cat.position_profiles(q);
                    let cols = if all_cols { full } else { odd };
                    for &(env, fringe) in cols {
                        // `env` already carries the column weight.
                        row.add(1.0, peaks * env + middle * fringe);
                    }
                }
                _ => {
                    let cols = if all_cols { &p_nodes } else { &odd_cols };
                    for &(kp, p) in cols {
                        row.add(pa.weight(kp), w.eval(q, p));
                    }
                }
            }
            let wq = qa.weight(kq);
            Parts {
                pos: wq * row.pos,
                neg: wq * row.neg,
            }
        })
        .collect();
    rows.into_iter().fold(Parts::default(), Parts::merge)
}

/// `delta` of any state by planar quadrature on the doubling ladder.
///
/// A result that ran out of refinements is still returned with
/// `converged == false`; see [`NegativityResult::into_converged`].
pub fn delta_indicator(spec: &StateSpec, config: &QuadratureConfig) -> Result<NegativityResult> {
    config.validate()?;
    let w = spec.wigner_fn()?;
    let (mut qa, mut pa) = lattice_for(spec, config);
    let mut sums = Parts::default();
    let mut ladder = Ladder::new(config, false);
    for level in 0..=config.max_refinements {
        if level > 0 {
            qa = qa.refined();
            pa = pa.refined();
        }
        sums = sums.merge(accumulate_rung(&w, &qa, &pa, level == 0));
        let area = qa.step * pa.step;
        if ladder.push(level, area * sums.pos, area * sums.neg) {
            break;
        }
    }
    let domain = Rect {
        q_min: qa.min(),
        q_max: qa.max(),
        p_min: pa.min(),
        p_max: pa.max(),
    };
    ladder.finish(domain, (qa.cells(), pa.cells()))
}

/// `delta` of the Fock state `|n>` from its radial profile,
/// `∬|W| = 2 ∫ r |exp(-r^2) L_n(2 r^2)| dr`. The value is shared by every
/// squeezed displaced Fock state with the same `n`.
///
/// Each cell of the radial grid is split at the root of the linear
/// interpolant when the integrand changes sign, so the positive and negative
/// parts are integrated without a kink inside any panel. The remaining error
/// is a smooth `h^2` term, removed by Richardson extrapolation on the ladder.
pub fn fock_delta_radial(n: usize, config: &QuadratureConfig) -> Result<NegativityResult> {
    config.validate()?;
    let radius = (2.0 * n as f64 + 1.0).sqrt() + config.padding;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut axis = Axis::covering(0.0, 1.0 / config.base_cells_per_unit as f64, 0.0, radius);
    let mut ladder = Ladder::new(config, true);
    for level in 0..=config.max_refinements {
        if level > 0 {
            axis = axis.refined();
        }
        let profile = |k: i64| {
            let r = axis.at(k);
            2.0 * r * sign * weighted_laguerre_unchecked(n, 2.0 * r * r)
        };
        let cells: Vec<i64> = (axis.lo..axis.hi).collect();
        let sums = cells
            .par_chunks(4096)
            .map(|chunk| {
                let mut acc = Parts::default();
                let mut left = profile(chunk[0]);
                for &k in chunk {
                    let right = profile(k + 1);
                    acc = acc.merge(linear_cell(left, right));
                    left = right;
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Parts::default(), Parts::merge);
        if ladder.push(level, axis.step * sums.pos, axis.step * sums.neg) {
            break;
        }
    }
    let r = axis.max();
    ladder.finish(
        Rect {
            q_min: -r,
            q_max: r,
            p_min: -r,
            p_max: r,
        },
        (axis.cells(), 1),
    )
}

/// Positive and negative areas (in units of the cell width) under the line
/// through `(0, a)` and `(1, b)`.
fn linear_cell(a: f64, b: f64) -> Parts {
    if a >= 0.0 && b >= 0.0 {
        Parts {
            pos: 0.5 * (a + b),
            neg: 0.0,
        }
    } else if a <= 0.0 && b <= 0.0 {
        Parts {
            pos: 0.0,
            neg: -0.5 * (a + b),
        }
    } else {
        let root = a / (a - b);
        let (first, second) = (0.5 * root * a.abs(), 0.5 * (1.0 - root) * b.abs());
        if a > 0.0 {
            Parts {
                pos: first,
                neg: second,
            }
        } else {
            Parts {
                pos: second,
                neg: first,
            }
        }
    }
}

/// Convergence bookkeeping shared by the planar and radial paths.
///
/// With `extrapolate`, each rung is combined with the previous one as
/// `(4 I_h/2 - I_h) / 3`, which removes a smooth `h^2` error term.
struct Ladder {
    tolerance: f64,
    min_refinements: usize,
    extrapolate: bool,
    raw: Option<(f64, f64)>,
    last: Option<(f64, f64)>,
    change: f64,
    level: usize,
    converged: bool,
}

impl Ladder {
    fn new(config: &QuadratureConfig, extrapolate: bool) -> Self {
        Ladder {
            tolerance: config.tolerance,
            min_refinements: config.min_refinements,
            extrapolate,
            raw: None,
            last: None,
            change: f64::INFINITY,
            level: 0,
            converged: false,
        }
    }

    /// Records one rung; returns true once converged.
    fn push(&mut self, level: usize, i_plus: f64, i_minus: f64) -> bool {
        let estimate = match (self.extrapolate, self.raw) {
            (true, Some((pp, pm))) => Some(((4.0 * i_plus - pp) / 3.0, (4.0 * i_minus - pm) / 3.0)),
            (true, None) => None,
            (false, _) => Some((i_plus, i_minus)),
        };
        self.raw = Some((i_plus, i_minus));
        self.level = level;
        let Some((plus, minus)) = estimate else {
            self.last = Some((i_plus, i_minus));
            return false;
        };
        if let Some((_, prev_minus)) = self.last.filter(|_| !self.extrapolate || level >= 2) {
            self.change = 2.0 * (minus - prev_minus).abs();
        }
        self.last = Some((plus, minus));
        self.converged = level >= self.min_refinements.max(1) && self.change < self.tolerance;
        self.converged
    }

    fn finish(self, domain: Rect, resolution: (usize, usize)) -> Result<NegativityResult> {
        let (i_plus, i_minus) = self.last.expect("at least one rung");
        let i_minus = i_minus.max(0.0);
        let delta = 2.0 * i_minus;
        Ok(NegativityResult {
            delta,
            nu: nu_from_delta(delta)?,
            i_plus,
            i_minus,
            error_estimate: self.change,
            domain,
            resolution,
            converged: self.converged,
            refinements: self.level,
        })
    }
}
