//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N ...: PASS|FAIL` line before asserting.
//!
//! Run with `cargo test -p wigner-negativity --test acceptance -- --nocapture`
//! to see the lines.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_6, PI};
use std::fmt::Write as _;

use wigner_negativity::cli_io::output::fock_ratio_csv;
use wigner_negativity::negativity::delta_from_nu;
use wigner_negativity::oracle::{cat_crude_bound, cat_delta_upper_bound, max_abs_diff_on_grid};
use wigner_negativity::sweeps::ExtremumKind;
use wigner_negativity::{
    delta_indicator, evaluate_grid, fock_scan, nu_from_delta, run_sweep, support_rectangle,
    QuadratureConfig, StateSpec, SweepSpec,
};

fn report(id: u32, what: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id} ({what}): {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn tight() -> QuadratureConfig {
    QuadratureConfig {
        tolerance: 1e-5,
        ..QuadratureConfig::default()
    }
}

fn delta(spec: StateSpec, quad: &QuadratureConfig) -> f64 {
    let r = delta_indicator(&spec, quad).unwrap();
    assert!(r.converged, "{spec} did not converge: {r:?}");
    r.delta
}

fn sdf(n: usize, s: f64, phi: f64, q0: f64, p0: f64) -> StateSpec {
    StateSpec::SqueezedDisplacedFock { n, s, phi, q0, p0 }
}

fn spread(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - v.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_01_fock_values() {
    let quad = tight();
    let cases = [
        (0, 0.0, 1e-6),
        (1, 0.4261226, 1e-4),
        (2, 0.72899, 1e-4),
        (3, 0.97667, 5e-4),
        (4, 1.19138, 5e-4),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (n, expected, tol) in cases {
        let d = delta(StateSpec::Fock { n }, &quad);
        pass &= (d - expected).abs() <= tol;
        let _ = write!(detail, "n={n}:{d:.7} ");
    }
    report(1, "Fock delta values", pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_02_cat_saturation() {
    let quad = QuadratureConfig::default();
    let far = delta(StateSpec::Cat { q0: 6.0, p0: 0.0 }, &quad);
    let zeros: Vec<f64> = [0.0, 1.7, 4.0, -3.0]
        .iter()
        .map(|&p0| delta(StateSpec::Cat { q0: 0.0, p0 }, &quad))
        .collect();
    let worst_zero = zeros.iter().copied().fold(0.0, f64::max);
    let pass = (far - 0.636).abs() <= 5e-3 && worst_zero <= 1e-6;
    report(
        2,
        "cat saturation",
        pass,
        &format!("delta(q0=6)={far:.6} max delta(q0=0)={worst_zero:.1e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_cat_extrema_at_p0_4() {
    let spec = SweepSpec::new(StateSpec::Cat { q0: 0.2, p0: 4.0 }, "q0", 0.2, 1.6, 0.005);
    let r = run_sweep(&spec).unwrap();
    assert!(r.all_converged());
    let nearest = |kind: ExtremumKind, target: f64| {
        r.extrema
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.location)
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .unwrap_or(f64::NAN)
    };
    let found = [
        (ExtremumKind::Max, 0.4, nearest(ExtremumKind::Max, 0.4)),
        (ExtremumKind::Min, 0.725, nearest(ExtremumKind::Min, 0.725)),
        (ExtremumKind::Max, 1.175, nearest(ExtremumKind::Max, 1.175)),
    ];
    let pass = found
        .iter()
        .all(|(_, target, at)| (at - target).abs() <= 0.05);
    let detail: Vec<String> = found
        .iter()
        .map(|(k, target, at)| format!("{k:?}~{target}:{at:.4}"))
        .collect();
    report(3, "cat extrema at p0=4", pass, &detail.join(" "));
    assert!(pass);
}

#[test]
fn criterion_04_oscillation_period() {
    let mut pass = true;
    let mut detail = String::new();
    for q0 in [1.0, 2.0, 3.0] {
        let spec = SweepSpec::new(StateSpec::Cat { q0, p0: 0.0 }, "p0", 0.0, 4.0 * PI, 0.02);
        let r = run_sweep(&spec).unwrap();
        let expected = PI / q0;
        let period = r.period_estimate.unwrap_or(f64::NAN);
        let rel = (period - expected).abs() / expected;
        pass &= rel <= 0.05;
        let _ = write!(
            detail,
            "q0={q0}:{period:.5}/{expected:.5} ({:.2}%) ",
            100.0 * rel
        );
    }
    report(4, "oscillation period pi/q0", pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_05_squeezing_invariance() {
    let quad = tight();
    let values: Vec<f64> = [0.0, 0.5, 1.0, 1.5]
        .iter()
        .map(|&s| delta(sdf(3, s, FRAC_PI_6, 0.0, 0.0), &quad))
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let pass = spread(&values) < 5e-3 && (mean - 0.97667).abs() <= 5e-4;
    report(
        5,
        "squeezing invariance",
        pass,
        &format!("spread={:.2e} mean={mean:.6}", spread(&values)),
    );
    assert!(pass);
}

#[test]
fn criterion_06_displacement_invariance() {
    let quad = QuadratureConfig::default();
    let values: Vec<f64> = [(0.0, 0.0), (3.0, -2.0), (10.0, 10.0)]
        .iter()
        .map(|&(q0, p0)| delta(sdf(2, 0.0, 0.0, q0, p0), &quad))
        .collect();
    let pass = spread(&values) < 2e-4;
    report(
        6,
        "displacement invariance",
        pass,
        &format!("spread={:.2e} delta={:.6}", spread(&values), values[0]),
    );
    assert!(pass);
}

#[test]
fn criterion_07_fock_scaling() {
    let quad = QuadratureConfig {
        tolerance: 1e-6,
        ..QuadratureConfig::default()
    };
    let scan = fock_scan(100, &quad).unwrap();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("fock_ratio.csv");
    std::fs::write(&path, fock_ratio_csv(&scan)).unwrap();
    let (lo, hi) = scan
        .ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, r)| {
            (lo.min(r), hi.max(r))
        });
    let tail = scan.ratios.iter().filter(|(n, _)| *n >= 10);
    let (tlo, thi) = tail.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, r)| {
        (lo.min(r), hi.max(r))
    });
    let pass = scan.strictly_increasing && scan.sweep.all_converged();
    report(
        7,
        "Fock scaling",
        pass,
        &format!(
            "increasing={} ratio envelope n>=1 [{lo:.4}, {hi:.4}], n>=10 [{tlo:.4}, {thi:.4}], delta(100)={:.6}, curve in {}",
            scan.strictly_increasing,
            scan.sweep.records[100].delta,
            path.display()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut states: Vec<StateSpec> = [0, 1, 2, 3, 5]
        .iter()
        .map(|&n| StateSpec::Fock { n })
        .collect();
    for (q0, p0) in [(0.0, 0.0), (1.0, 4.0), (3.0, 0.0), (6.0, 2.0)] {
        states.push(StateSpec::Cat { q0, p0 });
    }
    for s in [0.0, 0.5, 1.0] {
        states.push(StateSpec::SqueezedVacuum {
            s,
            phi: 0.0,
            q0: 0.0,
            p0: 0.0,
        });
    }
    let mut worst = 0.0f64;
    for spec in &states {
        let rect = support_rectangle(spec, 2.0);
        let diff = max_abs_diff_on_grid(spec, &rect, 33).unwrap();
        assert!(diff < 1e-6, "{spec}: {diff:e}");
        worst = worst.max(diff);
    }
    let pass = worst < 1e-6;
    report(
        8,
        "oracle equivalence",
        pass,
        &format!("{} states, max-abs-diff {worst:.2e}", states.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_09_universal_invariants() {
    let base = tight();
    let states = [
        StateSpec::Fock { n: 0 },
        StateSpec::Fock { n: 2 },
        StateSpec::Fock { n: 4 },
        StateSpec::Coherent { q0: 1.0, p0: -0.5 },
        StateSpec::SqueezedVacuum {
            s: 1.0,
            phi: 0.0,
            q0: 0.0,
            p0: 0.0,
        },
        sdf(3, 1.5, FRAC_PI_6, 0.0, 0.0),
        sdf(2, 0.0, 0.0, 10.0, 10.0),
        StateSpec::Cat { q0: 2.0, p0: 4.0 },
        StateSpec::Cat { q0: 6.0, p0: 0.0 },
    ];
    let mut norm_err = 0.0f64;
    let mut peak = 0.0f64;
    for spec in &states {
        // Stretched Gaussian tails need the padding stretched too.
        let s = spec.as_sdf().map_or(0.0, |p| p.s);
        let quad = QuadratureConfig {
            padding: base.padding * s.exp(),
            ..base
        };
        let r = delta_indicator(spec, &quad).unwrap();
        norm_err = norm_err.max((r.i_plus - r.i_minus - 1.0).abs());
        let grid = evaluate_grid(spec, &support_rectangle(spec, 2.0), 201, 201).unwrap();
        peak = peak.max(grid.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    // nu -> delta: absolute on the range of single-digit deltas, relative
    // beyond it, where 1e-14 is below the spacing of doubles.
    let mut rt_abs = 0.0f64;
    let mut rt_rel = 0.0f64;
    for k in 0..=13_000 {
        let d = k as f64 * 1e-3;
        let back = delta_from_nu(nu_from_delta(d).unwrap()).unwrap();
        if d <= 2.0 {
            rt_abs = rt_abs.max((back - d).abs());
        } else {
            rt_rel = rt_rel.max((back - d).abs() / d);
        }
    }
    let pass = norm_err <= 1e-5 && peak <= FRAC_1_PI + 1e-12 && rt_abs <= 1e-14 && rt_rel <= 1e-14;
    report(
        9,
        "universal invariants",
        pass,
        &format!(
            "max|norm-1|={norm_err:.1e} max|W|-1/pi={:.1e} nu round-trip abs={rt_abs:.1e} rel={rt_rel:.1e}",
            peak - FRAC_1_PI
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_upper_bound() {
    let quad = QuadratureConfig::default();
    let mut pairs = Vec::new();
    for q0 in [0.25, 0.75, 1.5, 2.5, 4.0] {
        for p0 in [0.0, 1.3, 2.9, 4.0] {
            pairs.push((q0, p0));
        }
    }
    let mut pass = true;
    let mut min_gap = f64::INFINITY;
    let mut max_gap = 0.0f64;
    for &(q0, p0) in &pairs {
        let bound = cat_delta_upper_bound(q0, p0, 1e-10).unwrap();
        let d = delta(StateSpec::Cat { q0, p0 }, &quad);
        let crude = cat_crude_bound(q0, p0).unwrap();
        let ok = bound >= d && bound <= crude + 1e-9;
        if !ok {
            println!("  q0={q0} p0={p0}: delta={d:.6} bound={bound:.6} crude={crude:.6}");
        }
        pass &= ok;
        min_gap = min_gap.min(bound - d);
        max_gap = max_gap.max(bound - d);
    }
    report(
        10,
        "upper bound",
        pass,
        &format!(
            "{} pairs, bound - delta in [{min_gap:.2e}, {max_gap:.3}]",
            pairs.len()
        ),
    );
    assert!(pass);
}
