//! Independent checks on the closed forms: the Wigner transform of a
//! position-space wavefunction, and the triangle-inequality bound on the
//! negativity of a cat state.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::negativity::Rect;
use crate::states::{cat_normalization, wavefunction, StateSpec};

/// Imaginary residual above which the transform is reported as unresolved.
pub const RESOLUTION_LIMIT: f64 = 1e-6;

pub const DEFAULT_SAMPLES: usize = 4096;

/// Half-width of the integration window in the separation variable.
/// The integrand is the overlap of two shifted copies of `psi`.
pub fn default_x_cutoff(spec: &StateSpec) -> f64 {
    let (center, n) = match *spec {
        StateSpec::Cat { q0, .. } => (q0, 0),
        _ => {
            let sdf = spec.as_sdf().expect("non-cat states have an sdf form");
            (sdf.q0, sdf.n)
        }
    };
    2.0 * (center.abs() + (2.0 * n as f64 + 1.0).sqrt()) + 12.0
}

/// Trapezoid evaluation of
/// `(1/2pi) ∫ psi(q - x/2) conj(psi(q + x/2)) exp(i p x) dx` over `[-x_cutoff, x_cutoff]`
/// with `samples` intervals. Returns the real part together with the
/// imaginary residual.
pub fn wigner_transform(
    spec: &StateSpec,
    q: f64,
    p: f64,
    x_cutoff: f64,
    samples: usize,
) -> Result<Complex64> {
    if samples < 64 {
        return Err(Error::Config(format!(
            "need at least 64 samples, got {samples}"
        )));
    }
    if !(x_cutoff > 0.0) {
        return Err(Error::Config(format!(
            "x_cutoff must be positive, got {x_cutoff}"
        )));
    }
    let h = 2.0 * x_cutoff / samples as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=samples {
        let x = -x_cutoff + k as f64 * h;
        let weight = if k == 0 || k == samples { 0.5 } else { 1.0 };
        let term = wavefunction(spec, q - 0.5 * x)?
            * wavefunction(spec, q + 0.5 * x)?.conj()
            * Complex64::from_polar(1.0, p * x);
        acc += weight * term;
    }
    Ok(acc * h / (2.0 * PI))
}

/// Wigner value from the wavefunction, checked for realness.
pub fn wigner_from_wavefunction(
    spec: &StateSpec,
    q: f64,
    p: f64,
    x_cutoff: f64,
    samples: usize,
) -> Result<f64> {
    let w = wigner_transform(spec, q, p, x_cutoff, samples)?;
    if w.im.abs() > RESOLUTION_LIMIT {
        return Err(Error::Resolution {
            residual: w.im.abs(),
            limit: RESOLUTION_LIMIT,
        });
    }
    Ok(w.re)
}

/// [`wigner_from_wavefunction`] with the default window and sample count.
pub fn wigner_oracle(spec: &StateSpec, q: f64, p: f64) -> Result<f64> {
    wigner_from_wavefunction(spec, q, p, default_x_cutoff(spec), DEFAULT_SAMPLES)
}

/// Largest `|W_closed - W_transform|` over an `nodes x nodes` grid on `rect`.
pub fn max_abs_diff_on_grid(spec: &StateSpec, rect: &Rect, nodes: usize) -> Result<f64> {
    if nodes < 2 {
        return Err(Error::Config(format!("need at least 2 nodes, got {nodes}")));
    }
    let w = spec.wigner_fn()?;
    let cutoff = default_x_cutoff(spec);
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (nodes - 1) as f64;
    let diffs = (0..nodes * nodes)
        .into_par_iter()
        .map(|idx| {
            let q = step(rect.q_min, rect.q_max, idx / nodes);
            let p = step(rect.p_min, rect.p_max, idx % nodes);
            let exact = wigner_from_wavefunction(spec, q, p, cutoff, DEFAULT_SAMPLES)?;
            Ok((exact - w.eval(q, p)).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}

/// Upper bound on the cat negativity from `|W+ + W- + W_int| <= W+ + W- + |W_int|`:
///
/// `N^2 [1 + pi^{-1/2} ∫ |cos(2 p q0)| exp(-(p - p0)^2) dp] - 1`.
///
/// The momentum integral is split at the zeros `p = (2k + 1) pi / (4 q0)` of
/// the cosine and each smooth panel is integrated by adaptive Simpson.
pub fn cat_delta_upper_bound(q0: f64, p0: f64, tol: f64) -> Result<f64> {
    if !(q0 >= 0.0) || !q0.is_finite() || !p0.is_finite() {
        return Err(Error::InvalidState(format!(
            "cat bound needs finite q0 >= 0 and p0, got q0={q0}, p0={p0}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if q0 == 0.0 {
        return Ok(0.0);
    }
    let n2 = cat_normalization(q0, p0)?.n.powi(2);
    let reach = 12.0;
    let (a, b) = (p0 - reach, p0 + reach);
    let spacing = PI / (2.0 * q0);
    let first = ((a / spacing - 0.5).ceil()) as i64;
    let mut cuts = vec![a];
    let mut k = first;
    loop {
        let z = (k as f64 + 0.5) * spacing;
        if z >= b {
            break;
        }
        if z > a {
            cuts.push(z);
        }
        k += 1;
    }
    cuts.push(b);
    let panels = (cuts.len() - 1) as f64;
    let f = |p: f64| (2.0 * p * q0).cos().abs() * (-(p - p0) * (p - p0)).exp();
    let integral: f64 = cuts
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], tol / panels))
        .sum();
    Ok(n2 * (1.0 + integral / PI.sqrt()) - 1.0)
}

/// `2 N^2 - 1`, the bound obtained with `|cos| <= 1`.
pub fn cat_crude_bound(q0: f64, p0: f64) -> Result<f64> {
    Ok(2.0 * cat_normalization(q0, p0)?.n.powi(2) - 1.0)
}

pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
