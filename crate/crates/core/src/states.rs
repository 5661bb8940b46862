//! The state family and its closed-form Wigner functions.
//!
//! Atomic units (`m = hbar = omega = 1`) throughout. Phase-space points are
//! `alpha = (q + i p)/sqrt(2)` and displacements `beta = (q0 + i p0)/sqrt(2)`.
//! All Wigner functions here are densities with respect to `dq dp`, so they
//! integrate to one and are bounded by `1/pi`.

use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special_fn::weighted_laguerre_unchecked;

/// A pure single-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Fock {
        n: usize,
    },
    Coherent {
        q0: f64,
        p0: f64,
    },
    SqueezedVacuum {
        s: f64,
        phi: f64,
        q0: f64,
        p0: f64,
    },
    SqueezedDisplacedFock {
        n: usize,
        s: f64,
        phi: f64,
        q0: f64,
        p0: f64,
    },
    /// Superposition of two coherent packets at `(+-q0, p0)`.
    Cat {
        q0: f64,
        p0: f64,
    },
}

/// Parameters of a squeezed displaced Fock state, with `eta = s exp(i phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdfParams {
    pub n: usize,
    pub s: f64,
    pub phi: f64,
    pub q0: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatNormalization {
    pub q0: f64,
    pub p0: f64,
    /// `(1 + cos(2 p0 q0) exp(-q0^2))^(-1/2)`
    pub n: f64,
}

impl StateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Fock { .. } => "fock",
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::SqueezedVacuum { .. } => "sqvac",
            StateSpec::SqueezedDisplacedFock { .. } => "sdf",
            StateSpec::Cat { .. } => "cat",
        }
    }

    /// Parameter names accepted by this kind, in canonical order.
    pub fn keys(&self) -> &'static [&'static str] {
        keys_for(self.kind()).expect("every kind has a key list")
    }

    pub fn validate(&self) -> Result<()> {
        for key in self.keys() {
            let v = self.param(key).expect("listed key exists");
            if !v.is_finite() {
                return Err(Error::InvalidState(format!(
                    "{key} must be finite, got {v}"
                )));
            }
        }
        match *self {
            StateSpec::SqueezedVacuum { s, .. } | StateSpec::SqueezedDisplacedFock { s, .. }
                if s < 0.0 =>
            {
                Err(Error::InvalidState(format!("s must be >= 0, got {s}")))
            }
            StateSpec::Cat { q0, .. } if q0 < 0.0 => {
                Err(Error::InvalidState(format!("q0 must be >= 0, got {q0}")))
            }
            _ => Ok(()),
        }
    }

    /// Value of a named parameter, `None` if this kind has no such key.
    pub fn param(&self, key: &str) -> Option<f64> {
        let v = match (*self, key) {
            (StateSpec::Fock { n }, "n") => n as f64,
            (StateSpec::Coherent { q0, .. }, "q0") => q0,
            (StateSpec::Coherent { p0, .. }, "p0") => p0,
            (StateSpec::SqueezedVacuum { s, .. }, "s") => s,
            (StateSpec::SqueezedVacuum { phi, .. }, "phi") => phi,
            (StateSpec::SqueezedVacuum { q0, .. }, "q0") => q0,
            (StateSpec::SqueezedVacuum { p0, .. }, "p0") => p0,
            (StateSpec::SqueezedDisplacedFock { n, .. }, "n") => n as f64,
            (StateSpec::SqueezedDisplacedFock { s, .. }, "s") => s,
            (StateSpec::SqueezedDisplacedFock { phi, .. }, "phi") => phi,
            (StateSpec::SqueezedDisplacedFock { q0, .. }, "q0") => q0,
            (StateSpec::SqueezedDisplacedFock { p0, .. }, "p0") => p0,
            (StateSpec::Cat { q0, .. }, "q0") => q0,
            (StateSpec::Cat { p0, .. }, "p0") => p0,
            _ => return None,
        };
        Some(v)
    }

    /// Copy with one parameter replaced. The result is validated.
    pub fn with_param(&self, key: &str, value: f64) -> Result<StateSpec> {
        let mut out = *self;
        let unknown = || Error::InvalidState(format!("'{}' has no parameter '{key}'", self.kind()));
        match (&mut out, key) {
            (StateSpec::Fock { n }, "n") | (StateSpec::SqueezedDisplacedFock { n, .. }, "n") => {
                *n = order_from_f64(value)?
            }
            (StateSpec::Coherent { q0, .. }, "q0")
            | (StateSpec::SqueezedVacuum { q0, .. }, "q0")
            | (StateSpec::SqueezedDisplacedFock { q0, .. }, "q0")
            | (StateSpec::Cat { q0, .. }, "q0") => *q0 = value,
            (StateSpec::Coherent { p0, .. }, "p0")
            | (StateSpec::SqueezedVacuum { p0, .. }, "p0")
            | (StateSpec::SqueezedDisplacedFock { p0, .. }, "p0")
            | (StateSpec::Cat { p0, .. }, "p0") => *p0 = value,
            (StateSpec::SqueezedVacuum { s, .. }, "s")
            | (StateSpec::SqueezedDisplacedFock { s, .. }, "s") => *s = value,
            (StateSpec::SqueezedVacuum { phi, .. }, "phi")
            | (StateSpec::SqueezedDisplacedFock { phi, .. }, "phi") => *phi = value,
            _ => return Err(unknown()),
        }
        out.validate()?;
        Ok(out)
    }

    /// The squeezed displaced Fock form of every state except the cat.
    pub fn as_sdf(&self) -> Option<SdfParams> {
        match *self {
            StateSpec::Fock { n } => Some(SdfParams {
                n,
                s: 0.0,
                phi: 0.0,
                q0: 0.0,
                p0: 0.0,
            }),
            StateSpec::Coherent { q0, p0 } => Some(SdfParams {
                n: 0,
                s: 0.0,
                phi: 0.0,
                q0,
                p0,
            }),
            StateSpec::SqueezedVacuum { s, phi, q0, p0 } => Some(SdfParams {
                n: 0,
                s,
                phi,
                q0,
                p0,
            }),
            StateSpec::SqueezedDisplacedFock { n, s, phi, q0, p0 } => {
                Some(SdfParams { n, s, phi, q0, p0 })
            }
            StateSpec::Cat { .. } => None,
        }
    }

    /// Prepared evaluator for repeated Wigner evaluations.
    pub fn wigner_fn(&self) -> Result<WignerFn> {
        self.validate()?;
        Ok(match self.as_sdf() {
            Some(sdf) => WignerFn::Sdf(SdfKernel::new(&sdf)),
            None => match *self {
                StateSpec::Cat { q0, p0 } => WignerFn::Cat(CatKernel::new(q0, p0)?),
                _ => unreachable!("only the cat lacks an sdf form"),
            },
        })
    }

    /// `W(q, p)` for this state.
    pub fn wigner(&self, q: f64, p: f64) -> Result<f64> {
        Ok(self.wigner_fn()?.eval(q, p))
    }
}

fn order_from_f64(value: f64) -> Result<usize> {
    if value.is_finite() && value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(Error::InvalidState(format!(
            "n must be a nonnegative integer, got {value}"
        )))
    }
}

fn keys_for(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "fock" => &["n"],
        "coherent" => &["q0", "p0"],
        "sqvac" => &["s", "phi", "q0", "p0"],
        "sdf" => &["n", "s", "phi", "q0", "p0"],
        "cat" => &["q0", "p0"],
        _ => return None,
    })
}

impl FromStr for StateSpec {
    type Err = Error;

    /// Grammar: `kind[:key=value,...]`. Missing keys default to zero.
    fn from_str(input: &str) -> Result<Self> {
        let syntax = |reason: String| Error::StateSyntax {
            input: input.to_string(),
            reason,
        };
        let trimmed = input.trim();
        let (kind, rest) = match trimmed.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r)),
            None => (trimmed, None),
        };
        let keys = keys_for(kind).ok_or_else(|| {
            syntax(format!(
                "unknown state kind '{kind}' (expected fock, coherent, sqvac, sdf or cat)"
            ))
        })?;
        let mut values = vec![0.0f64; keys.len()];
        let mut seen = vec![false; keys.len()];
        if let Some(rest) = rest.filter(|r| !r.trim().is_empty()) {
            for pair in rest.split(',') {
                let (key, value) = pair
                    .split_once('=')
                    .ok_or_else(|| syntax(format!("expected key=value, got '{pair}'")))?;
                let key = key.trim();
                let idx = keys
                    .iter()
                    .position(|k| *k == key)
                    .ok_or_else(|| syntax(format!("unknown key '{key}' for {kind}")))?;
                if seen[idx] {
                    return Err(syntax(format!("duplicate key '{key}'")));
                }
                seen[idx] = true;
                values[idx] = value.trim().parse().map_err(|_| {
                    syntax(format!(
                        "value '{}' for '{key}' is not a number",
                        value.trim()
                    ))
                })?;
            }
        }
        let get = |key: &str| values[keys.iter().position(|k| *k == key).unwrap()];
        let spec = match kind {
            "fock" => StateSpec::Fock {
                n: order_from_f64(get("n"))?,
            },
            "coherent" => StateSpec::Coherent {
                q0: get("q0"),
                p0: get("p0"),
            },
            "sqvac" => StateSpec::SqueezedVacuum {
                s: get("s"),
                phi: get("phi"),
                q0: get("q0"),
                p0: get("p0"),
            },
            "sdf" => StateSpec::SqueezedDisplacedFock {
                n: order_from_f64(get("n"))?,
                s: get("s"),
                phi: get("phi"),
                q0: get("q0"),
                p0: get("p0"),
            },
            "cat" => StateSpec::Cat {
                q0: get("q0"),
                p0: get("p0"),
            },
            _ => unreachable!(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind())?;
        for (i, key) in self.keys().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let v = self.param(key).unwrap();
            if *key == "n" {
                write!(f, "n={}", v as usize)?;
            } else {
                write!(f, "{key}={v}")?;
            }
        }
        Ok(())
    }
}

/// Prepared Wigner evaluator: constants hoisted out of the per-point path.
#[derive(Debug, Clone, Copy)]
pub enum WignerFn {
    Sdf(SdfKernel),
    Cat(CatKernel),
}

impl WignerFn {
    #[inline]
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        match self {
            WignerFn::Sdf(k) => k.eval(q, p),
            WignerFn::Cat(k) => k.eval(q, p),
        }
    }
}

/// `W = ((-1)^n / pi) exp(-2|b|^2) L_n(4|b|^2)` with
/// `b = cosh(s)(alpha - beta)^* + exp(-i phi) sinh(s)(alpha - beta)`.
///
/// With `x = q - q0`, `y = p - p0` the modulus is a quadratic form,
/// `2|b|^2 = a x^2 + 2 c x y + d y^2`.
#[derive(Debug, Clone, Copy)]
pub struct SdfKernel {
    n: usize,
    q0: f64,
    p0: f64,
    a: f64,
    c: f64,
    d: f64,
    sign_over_pi: f64,
}

impl SdfKernel {
    pub fn new(sdf: &SdfParams) -> Self {
        let (ch, sh) = (sdf.s.cosh(), sdf.s.sinh());
        let (sin_phi, cos_phi) = sdf.phi.sin_cos();
        let sign = if sdf.n.is_multiple_of(2) { 1.0 } else { -1.0 };
        SdfKernel {
            n: sdf.n,
            q0: sdf.q0,
            p0: sdf.p0,
            a: ch * ch + 2.0 * ch * sh * cos_phi + sh * sh,
            c: 2.0 * ch * sh * sin_phi,
            d: ch * ch - 2.0 * ch * sh * cos_phi + sh * sh,
            sign_over_pi: sign * FRAC_1_PI,
        }
    }

    /// `2|b|^2` at `(q, p)`.
    #[inline]
    pub fn two_b_squared(&self, q: f64, p: f64) -> f64 {
        let x = q - self.q0;
        let y = p - self.p0;
        // Positive definite (determinant 1); clamp rounding at the center.
        (self.a * x * x + 2.0 * self.c * x * y + self.d * y * y).max(0.0)
    }

    #[inline]
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let arg = 2.0 * self.two_b_squared(q, p);
        self.sign_over_pi * weighted_laguerre_unchecked(self.n, arg)
    }
}

/// `W = W+ + W- + W_int` for the two-packet cat state.
#[derive(Debug, Clone, Copy)]
pub struct CatKernel {
    q0: f64,
    p0: f64,
    /// `N^2 / pi`
    scale: f64,
}

impl CatKernel {
    pub fn new(q0: f64, p0: f64) -> Result<Self> {
        let norm = cat_normalization(q0, p0)?;
        Ok(CatKernel {
            q0,
            p0,
            scale: norm.n * norm.n * FRAC_1_PI,
        })
    }

    /// Factor shared by all three terms along a momentum line: `(N^2/pi) exp(-(p - p0)^2)`.
    #[inline]
    pub fn momentum_envelope(&self, p: f64) -> f64 {
        let y = p - self.p0;
        self.scale * (-y * y).exp()
    }

    /// `cos(2 p q0)`
    #[inline]
    pub fn fringe(&self, p: f64) -> f64 {
        (2.0 * p * self.q0).cos()
    }

    /// Peak and interference profiles along a position line:
    /// `((exp(-(q+q0)^2) + exp(-(q-q0)^2)) / 2, exp(-q^2))`.
    #[inline]
    pub fn position_profiles(&self, q: f64) -> (f64, f64) {
        let a = q + self.q0;
        let b = q - self.q0;
        (0.5 * ((-a * a).exp() + (-b * b).exp()), (-q * q).exp())
    }

    #[inline]
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let (peaks, middle) = self.position_profiles(q);
        self.momentum_envelope(p) * (peaks + self.fringe(p) * middle)
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }
}

pub fn cat_normalization(q0: f64, p0: f64) -> Result<CatNormalization> {
    let radicand = 1.0 + (2.0 * p0 * q0).cos() * (-q0 * q0).exp();
    if !(radicand > 0.0) {
        return Err(Error::Degenerate { radicand });
    }
    Ok(CatNormalization {
        q0,
        p0,
        n: radicand.powf(-0.5),
    })
}

/// Fock-state Wigner function `((-1)^n/pi) exp(-(q^2+p^2)) L_n(2(q^2+p^2))`.
pub fn wigner_fock(n: usize, q: f64, p: f64) -> f64 {
    let sign = if n.is_multiple_of(2) {
        FRAC_1_PI
    } else {
        -FRAC_1_PI
    };
    sign * weighted_laguerre_unchecked(n, 2.0 * (q * q + p * p))
}

/// Squeezed displaced Fock state, any squeezing angle.
pub fn wigner_sdf(sdf: &SdfParams, q: f64, p: f64) -> f64 {
    SdfKernel::new(sdf).eval(q, p)
}

/// Gaussian form of the squeezed vacuum, valid for `phi = 0` only.
pub fn wigner_squeezed_vacuum(s: f64, phi: f64, q0: f64, p0: f64, q: f64, p: f64) -> Result<f64> {
    if phi != 0.0 {
        return Err(Error::Unsupported(format!(
            "Gaussian squeezed-vacuum form needs phi = 0 (got {phi}); use wigner_sdf"
        )));
    }
    let x = q - q0;
    let y = p - p0;
    let e2s = (2.0 * s).exp();
    Ok(FRAC_1_PI * (-e2s * x * x - y * y / e2s).exp())
}

pub fn wigner_cat(q0: f64, p0: f64, q: f64, p: f64) -> Result<f64> {
    Ok(CatKernel::new(q0, p0)?.eval(q, p))
}

/// Normalized Hermite function `h_n(q)` (harmonic-oscillator eigenfunction).
pub fn hermite_function(n: usize, q: f64) -> f64 {
    let h0 = PI.powf(-0.25) * (-0.5 * q * q).exp();
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = std::f64::consts::SQRT_2 * q * h0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Position-space amplitude `psi(q)`.
///
/// Squeezing is supported along the position axis only (`phi = 0`): the
/// state is then `exp(s/2) h_n(exp(s)(q - q0)) exp(i p0 q)`.
pub fn wavefunction(spec: &StateSpec, q: f64) -> Result<Complex64> {
    spec.validate()?;
    if let StateSpec::Cat { q0, p0 } = *spec {
        let norm = cat_normalization(q0, p0)?;
        let packet = |c: f64| {
            let x = q + c;
            Complex64::from_polar(PI.powf(-0.25) * (-0.5 * x * x).exp(), p0 * x)
        };
        return Ok(norm.n * std::f64::consts::FRAC_1_SQRT_2 * (packet(q0) + packet(-q0)));
    }
    let sdf = spec.as_sdf().expect("non-cat states have an sdf form");
    if sdf.phi != 0.0 {
        return Err(Error::Unsupported(format!(
            "no position-space path for squeezing angle phi = {} ({spec})",
            sdf.phi
        )));
    }
    let amp = (0.5 * sdf.s).exp() * hermite_function(sdf.n, sdf.s.exp() * (q - sdf.q0));
    Ok(Complex64::from_polar(amp, sdf.p0 * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    fn grid(n: usize, half: f64) -> impl Iterator<Item = (f64, f64)> {
        let step = 2.0 * half / (n - 1) as f64;
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| (-half + i as f64 * step, -half + j as f64 * step))
        })
    }

    #[test]
    fn fock_point_values() {
        assert!((wigner_fock(0, 0.0, 0.0) - FRAC_1_PI).abs() < 1e-15);
        assert!((wigner_fock(1, 0.0, 0.0) + FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn sdf_peak_at_displacement_center() {
        let sdf = SdfParams {
            n: 0,
            s: 1.0,
            phi: 0.0,
            q0: 2.0,
            p0: -1.0,
        };
        assert!((wigner_sdf(&sdf, 2.0, -1.0) - FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_forms_agree() {
        assert!(
            (wigner_squeezed_vacuum(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap() - FRAC_1_PI).abs()
                < 1e-15
        );
        assert!(
            (wigner_squeezed_vacuum(1.0, 0.0, 1.0, 2.0, 1.0, 2.0).unwrap() - FRAC_1_PI).abs()
                < 1e-15
        );
        let a = wigner_squeezed_vacuum(0.5, 0.0, 0.0, 0.0, 0.5, 0.5).unwrap();
        let b = wigner_sdf(
            &SdfParams {
                n: 0,
                s: 0.5,
                phi: 0.0,
                q0: 0.0,
                p0: 0.0,
            },
            0.5,
            0.5,
        );
        assert!((a - b).abs() < 1e-12);
        assert!(matches!(
            wigner_squeezed_vacuum(0.5, 0.1, 0.0, 0.0, 0.0, 0.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn reduction_identities_on_grid() {
        for n in [0usize, 1, 2, 3, 7] {
            for phi in [0.0, 0.7, 2.0] {
                let sdf = SdfParams {
                    n,
                    s: 0.0,
                    phi,
                    q0: 0.0,
                    p0: 0.0,
                };
                for (q, p) in grid(101, 5.0) {
                    assert!((wigner_sdf(&sdf, q, p) - wigner_fock(n, q, p)).abs() < 1e-12);
                }
            }
        }
        for (s, q0, p0) in [(0.0, 0.0, 0.0), (0.5, 1.0, -2.0), (1.2, -3.0, 0.5)] {
            let sdf = SdfParams {
                n: 0,
                s,
                phi: 0.0,
                q0,
                p0,
            };
            for (q, p) in grid(101, 5.0) {
                let g = wigner_squeezed_vacuum(s, 0.0, q0, p0, q, p).unwrap();
                assert!((wigner_sdf(&sdf, q, p) - g).abs() < 1e-12);
            }
        }
        let coherent = StateSpec::Coherent { q0: 1.5, p0: -0.5 };
        let as_sdf = StateSpec::SqueezedDisplacedFock {
            n: 0,
            s: 0.0,
            phi: 0.3,
            q0: 1.5,
            p0: -0.5,
        };
        for (q, p) in grid(41, 5.0) {
            assert!((coherent.wigner(q, p).unwrap() - as_sdf.wigner(q, p).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn displacement_covariance() {
        let base = SdfParams {
            n: 3,
            s: 0.6,
            phi: FRAC_PI_6,
            q0: 0.0,
            p0: 0.0,
        };
        let moved = SdfParams {
            q0: 1.25,
            p0: -2.5,
            ..base
        };
        for (q, p) in grid(101, 5.0) {
            let diff = wigner_sdf(&moved, q + 1.25, p - 2.5) - wigner_sdf(&base, q, p);
            assert!(diff.abs() < 1e-12);
        }
    }

    #[test]
    fn bound_and_gaussian_positivity() {
        let states = [
            StateSpec::Fock { n: 5 },
            StateSpec::Coherent { q0: 1.0, p0: 1.0 },
            StateSpec::SqueezedVacuum {
                s: 1.0,
                phi: 0.4,
                q0: 0.0,
                p0: 1.0,
            },
            StateSpec::SqueezedDisplacedFock {
                n: 4,
                s: 0.8,
                phi: 1.0,
                q0: 0.5,
                p0: 0.0,
            },
            StateSpec::Cat { q0: 1.0, p0: 4.0 },
            StateSpec::Cat { q0: 0.3, p0: 0.0 },
        ];
        for spec in states {
            let w = spec.wigner_fn().unwrap();
            for (q, p) in grid(161, 6.0) {
                let v = w.eval(q, p);
                assert!(v.abs() <= FRAC_1_PI + 1e-12, "{spec} ({q},{p}) {v}");
                if matches!(
                    spec,
                    StateSpec::Coherent { .. } | StateSpec::SqueezedVacuum { .. }
                ) {
                    assert!(v >= 0.0);
                }
            }
        }
    }

    #[test]
    fn cat_normalization_values() {
        assert!(
            (cat_normalization(0.0, 0.0).unwrap().n - std::f64::consts::FRAC_1_SQRT_2).abs()
                < 1e-15
        );
        assert!((cat_normalization(40.0, 3.0).unwrap().n - 1.0).abs() < 1e-15);
        // (1 + cos 8 / e)^(-1/2)
        assert!((cat_normalization(1.0, 4.0).unwrap().n - 1.027_887_924_32).abs() < 1e-10);
    }

    #[test]
    fn cat_point_values() {
        for (q, p) in grid(41, 5.0) {
            let diff = wigner_cat(0.0, 0.0, q, p).unwrap() - wigner_fock(0, q, p);
            assert!(diff.abs() < 1e-12);
        }
        let q0 = 3.0;
        let n2 = cat_normalization(q0, 0.0).unwrap().n.powi(2);
        let p = PI / (2.0 * q0);
        let v = wigner_cat(q0, 0.0, 0.0, p).unwrap();
        assert!(v < 0.0);
        assert!((v + n2 * FRAC_1_PI * (-p * p).exp()).abs() < 1e-3 * n2);
        let peak = wigner_cat(q0, 0.0, 3.0, 0.0).unwrap();
        assert!((peak - n2 / (2.0 * PI)).abs() < 1e-4);
    }

    #[test]
    fn cat_even_in_position_but_not_in_momentum() {
        let cat = StateSpec::Cat { q0: 1.0, p0: 4.0 };
        for (q, p) in grid(41, 5.0) {
            let a = cat.wigner(q, 4.0 + p).unwrap();
            assert!((a - cat.wigner(-q, 4.0 + p).unwrap()).abs() < 1e-15);
        }
        let asym = (cat.wigner(0.0, 4.3).unwrap() - cat.wigner(0.0, 3.7).unwrap()).abs();
        assert!(asym > 1e-3);
    }

    #[test]
    fn wavefunction_values() {
        let v = wavefunction(&StateSpec::Fock { n: 0 }, 0.0).unwrap();
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15 && v.im == 0.0);

        let (q0, p0) = (4.0, 0.0);
        let norm = cat_normalization(q0, p0).unwrap().n;
        let packet = |x: f64| PI.powf(-0.25) * (-0.5 * x * x).exp();
        let expect = norm / 2f64.sqrt() * (packet(q0) + packet(-q0));
        let got = wavefunction(&StateSpec::Cat { q0, p0 }, 0.0).unwrap();
        assert!((got.re - expect).abs() < 1e-15 && got.im.abs() < 1e-15);

        // Envelopes coincide up to the overlap of the two packets.
        let moving = wavefunction(&StateSpec::Cat { q0: 2.0, p0: 4.0 }, 1.0)
            .unwrap()
            .norm();
        let standing = wavefunction(&StateSpec::Cat { q0: 2.0, p0: 0.0 }, 1.0)
            .unwrap()
            .norm();
        assert!((moving / standing - 1.0).abs() < 0.05);

        let sdf = StateSpec::SqueezedDisplacedFock {
            n: 2,
            s: 0.3,
            phi: 0.2,
            q0: 0.0,
            p0: 0.0,
        };
        assert!(matches!(
            wavefunction(&sdf, 0.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn wavefunctions_are_normalized() {
        let states = [
            StateSpec::Fock { n: 0 },
            StateSpec::Fock { n: 7 },
            StateSpec::Coherent { q0: 1.0, p0: -2.0 },
            StateSpec::SqueezedVacuum {
                s: 1.0,
                phi: 0.0,
                q0: 0.5,
                p0: 0.0,
            },
            StateSpec::SqueezedDisplacedFock {
                n: 3,
                s: 0.5,
                phi: 0.0,
                q0: -1.0,
                p0: 2.0,
            },
            StateSpec::Cat { q0: 1.0, p0: 4.0 },
            StateSpec::Cat { q0: 0.0, p0: 2.0 },
        ];
        for spec in states {
            let h = 1e-3;
            let total: f64 = (-20_000..=20_000)
                .map(|i| wavefunction(&spec, i as f64 * h).unwrap().norm_sqr() * h)
                .sum();
            assert!((total - 1.0).abs() < 1e-8, "{spec}: {total}");
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn grammar() {
        let cases = [
            ("fock:n=3", StateSpec::Fock { n: 3 }),
            (
                "coherent:q0=1,p0=2",
                StateSpec::Coherent { q0: 1.0, p0: 2.0 },
            ),
            (
                "sqvac:s=1,phi=0,q0=0,p0=0",
                StateSpec::SqueezedVacuum {
                    s: 1.0,
                    phi: 0.0,
                    q0: 0.0,
                    p0: 0.0,
                },
            ),
            (
                "sdf:n=3,s=0.5,phi=0.5235987756,q0=0,p0=0",
                StateSpec::SqueezedDisplacedFock {
                    n: 3,
                    s: 0.5,
                    phi: 0.5235987756,
                    q0: 0.0,
                    p0: 0.0,
                },
            ),
            ("cat:q0=2,p0=4", StateSpec::Cat { q0: 2.0, p0: 4.0 }),
            ("cat:p0=4,q0=2", StateSpec::Cat { q0: 2.0, p0: 4.0 }),
            ("cat", StateSpec::Cat { q0: 0.0, p0: 0.0 }),
            (
                "sdf:n=1",
                StateSpec::SqueezedDisplacedFock {
                    n: 1,
                    s: 0.0,
                    phi: 0.0,
                    q0: 0.0,
                    p0: 0.0,
                },
            ),
        ];
        for (text, expect) in cases {
            let parsed: StateSpec = text.parse().unwrap();
            assert_eq!(parsed, expect, "{text}");
            assert_eq!(parsed.to_string().parse::<StateSpec>().unwrap(), parsed);
        }
        for bad in [
            "cat:q0=-1",
            "fock:n=1.5",
            "fock:m=1",
            "boson:n=1",
            "cat:q0",
            "cat:q0=x",
            "sdf:s=-1",
            "cat:q0=1,q0=2",
        ] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
        let msg = "cat:q0=-1".parse::<StateSpec>().unwrap_err().to_string();
        assert!(msg.contains("q0 must be >= 0"), "{msg}");
    }

    #[test]
    fn with_param_checks() {
        let cat = StateSpec::Cat { q0: 1.0, p0: 0.0 };
        assert_eq!(
            cat.with_param("p0", 4.0).unwrap(),
            StateSpec::Cat { q0: 1.0, p0: 4.0 }
        );
        assert!(cat.with_param("n", 1.0).is_err());
        assert!(cat.with_param("q0", -0.5).is_err());
        assert_eq!(
            StateSpec::Fock { n: 0 }.with_param("n", 4.0).unwrap(),
            StateSpec::Fock { n: 4 }
        );
        assert!(StateSpec::Fock { n: 0 }.with_param("n", 4.5).is_err());
    }
}
