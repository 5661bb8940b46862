//! Parameter scans of the negativity indicator with extremum and period
//! detection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::negativity::{delta_indicator, fock_delta_radial, QuadratureConfig};
use crate::states::StateSpec;

pub const MIN_SCAN_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// State carrying every fixed parameter; the varied one is overwritten.
    pub template: StateSpec,
    pub varied: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub quad: QuadratureConfig,
    /// Adjacent max/min pairs closer than this in delta are dropped as noise.
    pub min_prominence: f64,
    /// Re-run points so that every point ends on the same ladder rung.
    pub uniform_resolution: bool,
}

impl SweepSpec {
    pub fn new(template: StateSpec, varied: &str, start: f64, stop: f64, step: f64) -> Self {
        SweepSpec {
            template,
            varied: varied.to_string(),
            start,
            stop,
            step,
            quad: QuadratureConfig::default(),
            min_prominence: 0.0,
            uniform_resolution: false,
        }
    }

    pub fn with_fixed(mut self, key: &str, value: f64) -> Result<Self> {
        if key == self.varied {
            return Err(Error::Sweep(format!("'{key}' is both varied and fixed")));
        }
        self.template = self.template.with_param(key, value)?;
        Ok(self)
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Sweep(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.start < self.stop) || !self.stop.is_finite() {
            return Err(Error::Sweep(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.template.param(&self.varied).is_none() {
            return Err(Error::Sweep(format!(
                "'{}' has no parameter '{}'",
                self.template.kind(),
                self.varied
            )));
        }
        let n = self.points().len();
        if n < MIN_SCAN_POINTS {
            return Err(Error::Sweep(format!(
                "scan has {n} points, need at least {MIN_SCAN_POINTS}"
            )));
        }
        self.quad.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub param: f64,
    pub delta: f64,
    pub nu: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub location: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub varied: String,
    pub records: Vec<SweepRecord>,
    pub extrema: Vec<Extremum>,
    /// Mean spacing of consecutive maxima, when at least three were found.
    pub period_estimate: Option<f64>,
}

impl SweepResult {
    fn from_records(varied: &str, records: Vec<SweepRecord>, min_prominence: f64) -> Self {
        let xs: Vec<f64> = records.iter().map(|r| r.param).collect();
        let ys: Vec<f64> = records.iter().map(|r| r.delta).collect();
        let extrema = find_extrema(&xs, &ys, min_prominence);
        let period_estimate = period_from_extrema(&extrema);
        SweepResult {
            varied: varied.to_string(),
            records,
            extrema,
            period_estimate,
        }
    }

    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Min)
    }

    /// Peak-to-trough heights between consecutive extrema, in scan order.
    pub fn oscillation_amplitudes(&self) -> Vec<f64> {
        self.extrema
            .windows(2)
            .map(|w| (w[1].value - w[0].value).abs())
            .collect()
    }

    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }
}

/// Scans `delta` over one parameter. Points that fail to converge are kept
/// with `converged == false`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let states: Vec<StateSpec> = spec
        .points()
        .into_iter()
        .map(|x| spec.template.with_param(&spec.varied, x))
        .collect::<Result<_>>()?;
    let mut results = states
        .par_iter()
        .map(|s| delta_indicator(s, &spec.quad))
        .collect::<Result<Vec<_>>>()?;

    if spec.uniform_resolution {
        let top = results.iter().map(|r| r.refinements).max().unwrap_or(0);
        let quad = QuadratureConfig {
            min_refinements: top,
            ..spec.quad
        };
        let redo: Vec<usize> = (0..results.len())
            .filter(|&i| results[i].refinements < top)
            .collect();
        let redone = redo
            .par_iter()
            .map(|&i| delta_indicator(&states[i], &quad))
            .collect::<Result<Vec<_>>>()?;
        for (i, r) in redo.into_iter().zip(redone) {
            results[i] = r;
        }
    }

    let records = states
        .iter()
        .zip(&results)
        .map(|(s, r)| SweepRecord {
            param: s.param(&spec.varied).expect("validated key"),
            delta: r.delta,
            nu: r.nu,
            error_estimate: r.error_estimate,
            converged: r.converged,
        })
        .collect();
    Ok(SweepResult::from_records(
        &spec.varied,
        records,
        spec.min_prominence,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockScan {
    pub sweep: SweepResult,
    pub strictly_increasing: bool,
    /// `delta(n) / (sqrt(n)/2)` for `n >= 1`.
    pub ratios: Vec<(usize, f64)>,
    /// `max |ratio - 1|` over `n >= 1`.
    pub max_relative_deviation: f64,
}

/// `delta(|n>)` for `n = 0..=n_max`, computed from the radial profile.
pub fn fock_scan(n_max: usize, quad: &QuadratureConfig) -> Result<FockScan> {
    if n_max < 1 {
        return Err(Error::Sweep("n_max must be at least 1".into()));
    }
    quad.validate()?;
    let results = (0..=n_max)
        .into_par_iter()
        .map(|n| fock_delta_radial(n, quad))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<SweepRecord> = results
        .iter()
        .enumerate()
        .map(|(n, r)| SweepRecord {
            param: n as f64,
            delta: r.delta,
            nu: r.nu,
            error_estimate: r.error_estimate,
            converged: r.converged,
        })
        .collect();
    let strictly_increasing = records.windows(2).all(|w| w[1].delta > w[0].delta);
    let ratios: Vec<(usize, f64)> = records
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, r)| (n, r.delta / (0.5 * (n as f64).sqrt())))
        .collect();
    let max_relative_deviation = ratios
        .iter()
        .map(|(_, r)| (r - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(FockScan {
        sweep: SweepResult::from_records("n", records, 0.0),
        strictly_increasing,
        ratios,
        max_relative_deviation,
    })
}

/// Local extrema from sign changes of the first differences, refined by the
/// parabola through the three bracketing samples. Flat stretches (zero
/// differences) are skipped over.
pub fn find_extrema(xs: &[f64], ys: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let mut found = Vec::new();
    let mut last_sign = 0.0;
    let mut last_turn = 0usize;
    for i in 0..ys.len().saturating_sub(1) {
        let d = ys[i + 1] - ys[i];
        if d == 0.0 {
            continue;
        }
        let sign = d.signum();
        if last_sign != 0.0 && sign != last_sign {
            // Extreme sample among the plateau that ends at i.
            let kind = if last_sign > 0.0 {
                ExtremumKind::Max
            } else {
                ExtremumKind::Min
            };
            let idx = (last_turn..=i)
                .max_by(|&a, &b| {
                    let (va, vb) = match kind {
                        ExtremumKind::Max => (ys[a], ys[b]),
                        ExtremumKind::Min => (-ys[a], -ys[b]),
                    };
                    va.total_cmp(&vb)
                })
                .unwrap();
            if idx > 0 && idx + 1 < ys.len() {
                found.push((refine(xs, ys, idx, kind), ys[idx]));
            }
        }
        last_sign = sign;
        last_turn = i + 1;
    }
    if min_prominence > 0.0 {
        prune(&mut found, min_prominence);
    }
    found.into_iter().map(|(e, _)| e).collect()
}

fn refine(xs: &[f64], ys: &[f64], i: usize, kind: ExtremumKind) -> Extremum {
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let h = 0.5 * (xs[i + 1] - xs[i - 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let (mut location, mut value) = (xs[i], y1);
    if curvature != 0.0 {
        let offset = (0.5 * (y0 - y2) / curvature).clamp(-1.0, 1.0);
        location += offset * h;
        value = y1 - 0.25 * (y0 - y2) * offset;
    }
    Extremum {
        location,
        value,
        kind,
    }
}

/// Prominence is judged on the sampled values; the parabolic estimates can
/// overshoot when a sample pair is nearly flat.
fn prune(extrema: &mut Vec<(Extremum, f64)>, min_prominence: f64) {
    loop {
        let weakest = extrema
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, (w[1].1 - w[0].1).abs()))
            .filter(|&(_, gap)| gap < min_prominence)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match weakest {
            Some((i, _)) => {
                extrema.drain(i..i + 2);
            }
            None => break,
        }
    }
}

fn period_from_extrema(extrema: &[Extremum]) -> Option<f64> {
    let maxima: Vec<f64> = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Max)
        .map(|e| e.location)
        .collect();
    if maxima.len() < 3 {
        return None;
    }
    Some((maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64)
}
