//! Built-in checks run by `wigner validate`.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_6};
use std::fmt;

use crate::error::Result;
use crate::negativity::{
    delta_from_nu, delta_indicator, evaluate_grid, nu_from_delta, support_rectangle,
    NegativityResult, QuadratureConfig,
};
use crate::oracle::{cat_crude_bound, cat_delta_upper_bound, max_abs_diff_on_grid};
use crate::states::StateSpec;

/// The quadrature used for every delta in the suite; swapped out in tests.
pub type DeltaFn<'a> =
    dyn Fn(&StateSpec, &QuadratureConfig) -> Result<NegativityResult> + Sync + 'a;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: String,
    pub tolerance: f64,
    pub pass: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: measured≈{} expected {} tol {} {}",
            self.name,
            short(self.measured),
            self.expected,
            if self.tolerance == 0.0 {
                "0".to_string()
            } else {
                format!("{:e}", self.tolerance)
            },
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn short(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
        format!("{x:.3e}")
    } else {
        let s = format!("{x:.7}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn near(&mut self, name: String, measured: Result<f64>, expected: f64, tol: f64) {
        let (measured, pass) = match measured {
            Ok(m) => (m, (m - expected).abs() <= tol),
            Err(_) => (f64::NAN, false),
        };
        self.checks.push(Check {
            name,
            measured,
            expected: short(expected),
            tolerance: tol,
            pass,
        });
    }

    /// `measured <= limit + tol`.
    fn at_most(&mut self, name: String, measured: Result<f64>, limit: f64, tol: f64) {
        let (measured, pass) = match measured {
            Ok(m) => (m, m <= limit + tol),
            Err(_) => (f64::NAN, false),
        };
        self.checks.push(Check {
            name,
            measured,
            expected: format!("<= {}", short(limit)),
            tolerance: tol,
            pass,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed: {}",
            self.checks.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        )
    }
}

fn sdf(n: usize, s: f64, phi: f64, q0: f64, p0: f64) -> StateSpec {
    StateSpec::SqueezedDisplacedFock { n, s, phi, q0, p0 }
}

fn squeezing(spec: &StateSpec) -> f64 {
    spec.as_sdf().map_or(0.0, |p| p.s)
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn validate_suite() -> ValidationReport {
    validate_suite_with(&delta_indicator)
}

pub fn validate_suite_with(delta: &DeltaFn<'_>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let quad = QuadratureConfig {
        tolerance: 1e-5,
        ..QuadratureConfig::default()
    };
    let d = |spec: &StateSpec| delta(spec, &quad).map(|r| r.delta);

    for (n, expected, tol) in [
        (0, 0.0, 1e-6),
        (1, 0.4261226, 1e-4),
        (2, 0.72899, 1e-4),
        (3, 0.97667, 5e-4),
        (4, 1.19138, 5e-4),
    ] {
        report.near(
            format!("fock n={n} delta"),
            d(&StateSpec::Fock { n }),
            expected,
            tol,
        );
    }
    report.near(
        "cat q0=6 p0=0 delta".into(),
        d(&StateSpec::Cat { q0: 6.0, p0: 0.0 }),
        0.636,
        5e-3,
    );
    report.near(
        "cat q0=0 p0=2.5 delta".into(),
        d(&StateSpec::Cat { q0: 0.0, p0: 2.5 }),
        0.0,
        1e-6,
    );

    let oracle_states = [
        StateSpec::Fock { n: 0 },
        StateSpec::Fock { n: 1 },
        StateSpec::Fock { n: 4 },
        StateSpec::Coherent { q0: 1.0, p0: -0.5 },
        StateSpec::SqueezedVacuum {
            s: 0.5,
            phi: 0.0,
            q0: 0.3,
            p0: 0.2,
        },
        sdf(2, 0.3, 0.0, 0.5, 1.0),
        StateSpec::Cat { q0: 1.0, p0: 0.0 },
        StateSpec::Cat { q0: 2.0, p0: 4.0 },
    ];
    for spec in &oracle_states {
        let rect = support_rectangle(spec, 2.0);
        report.near(
            format!("oracle {spec} max-abs-diff 33x33"),
            max_abs_diff_on_grid(spec, &rect, 33),
            0.0,
            1e-6,
        );
    }

    let invariant_states = [
        StateSpec::Fock { n: 0 },
        StateSpec::Fock { n: 1 },
        StateSpec::Fock { n: 4 },
        StateSpec::Coherent { q0: 1.0, p0: -0.5 },
        StateSpec::SqueezedVacuum {
            s: 0.5,
            phi: 0.0,
            q0: 0.0,
            p0: 0.0,
        },
        sdf(3, 1.5, FRAC_PI_6, 0.0, 0.0),
        StateSpec::Cat { q0: 2.0, p0: 4.0 },
        StateSpec::Cat { q0: 6.0, p0: 0.0 },
    ];
    for spec in &invariant_states {
        // The Gaussian tail along a stretched axis widens by e^s as well.
        let wide = QuadratureConfig {
            padding: quad.padding * squeezing(spec).exp(),
            ..quad
        };
        report.near(
            format!("{spec} normalization"),
            delta(spec, &wide).map(|r| r.i_plus - r.i_minus),
            1.0,
            1e-5,
        );
        let rect = support_rectangle(spec, 2.0);
        report.at_most(
            format!("{spec} max|W|"),
            evaluate_grid(spec, &rect, 201, 201)
                .map(|g| g.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))),
            FRAC_1_PI,
            1e-12,
        );
    }

    let roundtrip = (0..=100)
        .map(|k| k as f64 * 0.015)
        .map(|x| Ok((delta_from_nu(nu_from_delta(x)?)? - x).abs()))
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    report.near("nu round-trip on [0, 1.5]".into(), roundtrip, 0.0, 1e-14);

    for (q0, p0) in [(0.5, 0.0), (1.0, 4.0), (2.0, 1.0), (3.0, 0.0), (6.0, 0.0)] {
        let bound = cat_delta_upper_bound(q0, p0, 1e-10);
        let name = format!("cat q0={q0} p0={p0} delta");
        match bound {
            Ok(b) => report.at_most(name, d(&StateSpec::Cat { q0, p0 }), b, 0.0),
            Err(e) => report.at_most(name, Err(e), 0.0, 0.0),
        }
        let crude = cat_crude_bound(q0, p0).unwrap_or(f64::NAN);
        report.at_most(
            format!("cat q0={q0} p0={p0} bound"),
            cat_delta_upper_bound(q0, p0, 1e-10),
            crude,
            1e-9,
        );
    }

    let squeezed = [0.0, 0.5, 1.0, 1.5]
        .iter()
        .map(|&s| d(&sdf(3, s, FRAC_PI_6, 0.0, 0.0)))
        .collect::<Result<Vec<f64>>>();
    report.at_most(
        "sdf n=3 phi=pi/6 s=0..1.5 delta spread".into(),
        squeezed.map(|v| spread(&v)),
        0.0,
        5e-3,
    );
    let displaced = [(0.0, 0.0), (3.0, -2.0), (10.0, 10.0)]
        .iter()
        .map(|&(q0, p0)| d(&sdf(2, 0.0, 0.0, q0, p0)))
        .collect::<Result<Vec<f64>>>();
    report.at_most(
        "sdf n=2 displaced delta spread".into(),
        displaced.map(|v| spread(&v)),
        0.0,
        2e-4,
    );

    report
}
