//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process exits nonzero
//! if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use spectral_bounds::barrier::{
    barrier_inequality_rhs, xi_integral, xi_jet, z_eval, BarrierProfile,
};
use spectral_bounds::bounds::{improved_bound, reilly_bound, yang_bound};
use spectral_bounds::config::ModelSpec;
use spectral_bounds::model::{Hypotheses, ModelManifold};
use spectral_bounds::solver::{solve, Method, RadialEigenSolution, SolverConfig};
use spectral_bounds::verify::{
    check_integral_chain, empirical_z, gradient_ratio_max, verify_solution, CheckId, Status,
    VerifyConfig, DEFAULT_B_SEQUENCE,
};
use spectral_bounds::xi_suite::xi_property_suite;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($arg)*));
        }
    };
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// J_0 by its power series; first zero by bisection on [2, 3].
fn j01() -> f64 {
    let j0 = |x: f64| {
        let q = -(x * x) / 4.0;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= q / (k as f64 * k as f64);
            sum += term;
        }
        sum
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// --- shared sweep ----------------------------------------------------------

struct SweepCase {
    n: u32,
    k: f64,
    model: ModelManifold,
    shooting: RadialEigenSolution,
    fd_lambda: f64,
}

const SWEEP_DIMS: [u32; 3] = [2, 3, 5];
const SWEEP_CURVATURES: [f64; 3] = [0.5, 1.0, 2.0];
const SWEEP_RADII: usize = 20;

fn sweep_specs() -> Vec<ModelSpec> {
    let mut specs = Vec::new();
    for n in SWEEP_DIMS {
        for k in SWEEP_CURVATURES {
            let r_max = FRAC_PI_2 / k.sqrt();
            for i in 1..=SWEEP_RADII {
                let r = 0.1 + i as f64 * (r_max - 0.1) / SWEEP_RADII as f64;
                specs.push(ModelSpec::cap(n, k, r));
            }
        }
    }
    specs
}

fn sweep_cases() -> &'static Result<(Vec<SweepCase>, Duration), String> {
    static CASES: OnceLock<Result<(Vec<SweepCase>, Duration), String>> = OnceLock::new();
    CASES.get_or_init(|| {
        use rayon::prelude::*;
        let start = Instant::now();
        let cases: Result<Vec<_>, String> = sweep_specs()
            .par_iter()
            .map(|spec| {
                let model = spec.build().map_err(|e| e.to_string())?;
                let shooting = solve(&model, &SolverConfig::with_method(Method::Shooting))
                    .map_err(|e| format!("{spec:?}: {e}"))?;
                let fd = solve(&model, &SolverConfig::with_method(Method::FiniteDifference))
                    .map_err(|e| format!("{spec:?}: {e}"))?;
                Ok(SweepCase {
                    n: spec.n.unwrap(),
                    k: spec.k.unwrap(),
                    model,
                    shooting,
                    fd_lambda: fd.lambda,
                })
            })
            .collect();
        cases.map(|c| (c, start.elapsed()))
    })
}

fn cases() -> Result<&'static [SweepCase], String> {
    sweep_cases().as_ref().map(|(c, _)| c.as_slice()).map_err(Clone::clone)
}

fn hemisphere_s2() -> Result<RadialEigenSolution, String> {
    let m = ModelManifold::hemisphere(2, 1.0).map_err(|e| e.to_string())?;
    solve(&m, &SolverConfig::default()).map_err(|e| e.to_string())
}

// --- criteria --------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = xi_property_suite(10_001).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for id in [
        "xi_ode",
        "xi_first_order",
        "q_ode",
        "q1_ode",
        "q2_ode",
        "xi_at_zero",
        "xi1_endpoints",
        "xi2_endpoints",
        "xi2_at_zero",
        "xi3_endpoint",
        "xi_integral",
        "xi2_positive",
        "xi1_sign",
        "xi3_sign",
        "xi1_over_t_range",
    ] {
        let o = report.get(id).ok_or_else(|| format!("property {id} missing"))?;
        ensure!(o.pass, "property {id} failed: {} > {}", o.max_residual, o.threshold);
    }
    ensure!(report.all_pass(), "some xi property failed");
    for id in ["xi_ode", "xi_first_order", "q_ode", "q1_ode", "q2_ode"] {
        ensure!(report.get(id).unwrap().threshold <= 1e-9, "{id} threshold looser than 1e-9");
    }

    // Special values straight from the jet.
    let at0 = xi_jet(0.0).map_err(|e| e.to_string())?;
    let at_end = xi_jet(FRAC_PI_2).map_err(|e| e.to_string())?;
    let checks = [
        (at0.d[0], 1.0 - PI * PI / 4.0),
        (at_end.d[1], 2.0 * PI / 3.0),
        (at_end.d[2], 2.0),
        (at0.d[2], 2.0 * (3.0 - PI * PI / 4.0)),
        (at_end.d[3], 8.0 * PI / 15.0),
    ];
    for (got, want) in checks {
        ensure!((got - want).abs() <= 1e-10, "special value {got} vs {want}");
    }
    let integral = xi_integral(0.0, FRAC_PI_2).map_err(|e| e.to_string())?;
    ensure!((integral + FRAC_PI_2).abs() <= 1e-9, "int xi = {integral}");
    ensure!(elapsed < Duration::from_secs(1), "xi suite took {elapsed:?}");
    Ok(format!(
        "{} properties on 10001 points in {:.0?}",
        report.outcomes.len(),
        elapsed
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst_agree: f64 = 0.0;
    let both = |m: &ModelManifold| -> Result<(f64, f64), String> {
        let s = solve(m, &SolverConfig::with_method(Method::Shooting)).map_err(|e| e.to_string())?;
        let f = solve(m, &SolverConfig::with_method(Method::FiniteDifference))
            .map_err(|e| e.to_string())?;
        Ok((s.lambda, f.lambda))
    };

    for len in [1.0, 2.0, PI] {
        let (s, f) = both(&ModelManifold::interval(len).unwrap())?;
        let exact = PI * PI / (len * len);
        ensure!(rel(s, exact) <= 1e-8, "interval L={len}: shooting {s}");
        ensure!(rel(f, exact) <= 1e-8, "interval L={len}: finite differences {f}");
        worst_agree = worst_agree.max(rel(s, f));
    }
    for n in [2u32, 3, 5] {
        let (s, f) = both(&ModelManifold::hemisphere(n, 1.0).unwrap())?;
        let exact = f64::from(n);
        ensure!(rel(s, exact) <= 1e-6, "hemisphere n={n}: shooting {s}");
        ensure!(rel(f, exact) <= 1e-6, "hemisphere n={n}: finite differences {f}");
        worst_agree = worst_agree.max(rel(s, f));
    }
    let j = j01();
    ensure!((j - 2.404_825_56).abs() < 1e-8, "Bessel oracle j01 = {j}");
    let (s, f) = both(&ModelManifold::euclidean_ball(2, 1.0).unwrap())?;
    ensure!(rel(s, j * j) <= 1e-6, "disk: shooting {s} vs {}", j * j);
    ensure!(rel(f, j * j) <= 1e-6, "disk: finite differences {f} vs {}", j * j);
    worst_agree = worst_agree.max(rel(s, f));
    ensure!(worst_agree <= 1e-6, "methods disagree by {worst_agree:e}");

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "solver validation took {elapsed:?}");
    Ok(format!(
        "interval, hemispheres n=2,3,5, unit disk; method gap {worst_agree:.1e}; {elapsed:.1?}"
    ))
}

fn criterion_3() -> Outcome {
    let (cases, elapsed) = sweep_cases().as_ref().map_err(Clone::clone)?;
    ensure!(
        cases.len() == SWEEP_DIMS.len() * SWEEP_CURVATURES.len() * SWEEP_RADII,
        "sweep has {} rows",
        cases.len()
    );
    let mut min_margin = f64::INFINITY;
    for c in cases {
        let dt = c.model.in_diameter();
        let improved = improved_bound(c.n, c.k, dt).unwrap();
        let yang = yang_bound(c.n, c.k, dt).unwrap();
        let reilly = reilly_bound(c.n, c.k).unwrap();
        ensure!(improved >= yang, "improved < yang at n={} K={} R={}", c.n, c.k, c.model.radius());
        for lambda in [c.shooting.lambda, c.fd_lambda] {
            let r = c.model.radius();
            ensure!(
                lambda >= improved - 1e-6 * lambda,
                "lambda {lambda} < improved bound {improved} at n={} K={} R={r}",
                c.n,
                c.k
            );
            ensure!(lambda >= reilly - 1e-6 * lambda, "lambda {lambda} < nK at n={} K={} R={r}", c.n, c.k);
            ensure!(lambda >= yang - 1e-6 * lambda, "lambda {lambda} < yang at n={} K={} R={r}", c.n, c.k);
            min_margin = min_margin.min((lambda - improved) / lambda);
        }
    }
    ensure!(*elapsed < Duration::from_secs(300), "sweep took {elapsed:?}");
    Ok(format!(
        "{} caps, smallest relative margin {min_margin:.3e}; sweep {elapsed:.1?}",
        cases.len()
    ))
}

fn criterion_4() -> Outcome {
    let cfg = VerifyConfig::default();
    let mut worst: f64 = 0.0;
    for c in cases()? {
        let grid = c.shooting.grid_intervals() as f64;
        let allowed = c.shooting.lambda * (1.0 + 1e-4 + 1.0 / (grid * grid));
        let mut prev = 0.0;
        for b in DEFAULT_B_SEQUENCE {
            let m = gradient_ratio_max(&c.shooting, b).map_err(|e| e.to_string())?;
            ensure!(m <= allowed, "ratio {m} > {allowed} at n={} K={} R={} b={b}", c.n, c.k, c.model.radius());
            ensure!(m >= prev * (1.0 - 1e-12), "ratio not monotone in b at n={} K={}", c.n, c.k);
            prev = m;
            worst = worst.max(m / c.shooting.lambda);
        }
        let entry = verify_solution(&c.model, &c.shooting, &cfg).map_err(|e| e.to_string())?;
        ensure!(entry.get(CheckId::GradientEstimate).unwrap().passed(), "gradient check failed");
    }
    let hemi = hemisphere_s2()?;
    let ratio = gradient_ratio_max(&hemi, 1.0001).unwrap();
    ensure!((ratio - 1.0).abs() < 1e-3 && ratio <= hemi.lambda, "hemisphere ratio {ratio}");
    Ok(format!(
        "worst ratio/lambda {worst:.6}; hemisphere S^2 ratio {ratio:.6} <= lambda {:.6}",
        hemi.lambda
    ))
}

fn criterion_5() -> Outcome {
    let mut worst_barrier = f64::INFINITY;
    let mut worst_one = f64::INFINITY;
    for c in cases()? {
        let delta = 0.5 * f64::from(c.n - 1) * c.k / c.shooting.lambda;
        for b in DEFAULT_B_SEQUENCE {
            let emp = empirical_z(&c.shooting, b, 64).map_err(|e| e.to_string())?;
            for (t, z) in emp.samples() {
                let barrier = z_eval(t, delta).unwrap().z;
                ensure!(z <= barrier + 1e-3, "Z {z} > z {barrier} at t={t}, n={} K={}", c.n, c.k);
                ensure!(z <= 1.0 + 1e-6, "Z {z} > 1 at t={t}, n={} K={}", c.n, c.k);
                worst_barrier = worst_barrier.min(barrier - z);
                worst_one = worst_one.min(1.0 - z);
            }
        }
    }
    let hemi = hemisphere_s2()?;
    let emp = empirical_z(&hemi, 1.0001, 64).unwrap();
    let z_max = emp.max();
    let z_min = BarrierProfile::new(0.25).unwrap().minimum();
    ensure!((z_max - 0.5).abs() < 1e-3, "hemisphere max Z = {z_max}");
    ensure!((z_min - 0.633_15).abs() < 1e-5, "hemisphere min z = {z_min}");
    ensure!(z_min - z_max >= 0.13, "hemisphere margin {}", z_min - z_max);
    Ok(format!(
        "worst z - Z {worst_barrier:.4}, worst 1 - Z {worst_one:.2e}; hemisphere Z {z_max:.5} vs min z {z_min:.5}"
    ))
}

fn criterion_6() -> Outcome {
    let cfg = VerifyConfig::default();
    let mut worst = f64::INFINITY;
    for c in cases()? {
        let lambda = c.shooting.lambda;
        let dt = c.model.in_diameter();
        let delta = 0.5 * f64::from(c.n - 1) * c.k / lambda;
        let i1 = BarrierProfile::new(delta).unwrap().inverse_sqrt_integral(1e-12).unwrap();
        let lhs = lambda.sqrt() * dt / 2.0;
        ensure!(lhs >= i1 - 1e-6, "chain: {lhs} < {i1} at n={} K={} R={}", c.n, c.k, c.model.radius());
        ensure!(lambda * (1.0 - delta) >= PI * PI / (dt * dt), "final form fails at n={} K={}", c.n, c.k);
        let entry = check_integral_chain(&c.shooting, c.n, c.k, &cfg).map_err(|e| e.to_string())?;
        ensure!(entry.passed(), "chain check failed: {}", entry.detail);
        worst = worst.min(lhs - i1);
    }
    let mut sharp: f64 = 0.0;
    for len in [1.0, 2.5] {
        let m = ModelManifold::interval(len).unwrap();
        let sol = solve(&m, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let lhs = sol.lambda.sqrt() * len / 2.0;
        let i1 = BarrierProfile::new(0.0).unwrap().inverse_sqrt_integral(1e-12).unwrap();
        ensure!((lhs - i1).abs() <= 1e-6, "interval L={len}: {lhs} vs {i1}");
        sharp = sharp.max((lhs - i1).abs());
    }
    Ok(format!("smallest chain gap {worst:.4}; interval equality within {sharp:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..40 {
        // Interior points of (-pi/2, pi/2), including both endpoint bands.
        let t = -FRAC_PI_2 + PI * (i as f64 + 0.5) / 40.0;
        for j in 0..25 {
            let delta = 0.5 * j as f64 / 24.0;
            let zv = z_eval(t, delta).map_err(|e| e.to_string())?;
            let rhs = barrier_inequality_rhs(t, zv.z, zv.z1, zv.z2, delta).map_err(|e| e.to_string())?;
            ensure!(rhs.abs() <= 1e-9, "rhs {rhs} at t={t}, delta={delta}");
            worst = worst.max(rhs.abs());
            for offset in [1e-6, 0.01, 0.5] {
                let shifted =
                    barrier_inequality_rhs(t, zv.z + offset, zv.z1, zv.z2, delta).unwrap();
                ensure!(shifted < 0.0, "offset {offset} gives {shifted} at t={t}");
            }
            count += 1;
        }
    }
    ensure!(count == 1000, "evaluated {count} pairs");
    Ok(format!("{count} (t, delta) pairs, max |rhs| {worst:.2e}; offsets strictly negative"))
}

fn criterion_8() -> Outcome {
    let cfg = VerifyConfig::default();
    let mut count = 0;
    for (n, k) in [(2u32, 1.0), (3, 0.5), (5, 2.0)] {
        let half = FRAC_PI_2 / f64::sqrt(k);
        for frac in [1.1, 1.4, 1.8] {
            let model = ModelManifold::spherical_cap(n, k, frac * half).map_err(|e| e.to_string())?;
            let hyp = Hypotheses::of(&model).map_err(|e| e.to_string())?;
            ensure!(hyp.mean_curvature < 0.0, "mean curvature {} at R = {frac} pi/(2 sqrt K)", hyp.mean_curvature);
            let sol = solve(&model, &SolverConfig::default()).map_err(|e| e.to_string())?;
            let report = verify_solution(&model, &sol, &cfg).map_err(|e| e.to_string())?;
            let main = report.get(CheckId::MainBound).unwrap();
            ensure!(main.status == Status::Skipped, "main bound not skipped for n={n} K={k}");
            ensure!(report.all_pass(), "gated report counts as failure");
            count += 1;
        }
    }
    Ok(format!("{count} caps beyond the hemisphere: negative mean curvature, main bound skipped"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("xi properties", criterion_1),
        ("solver validation", criterion_2),
        ("main bound sweep", criterion_3),
        ("gradient estimate", criterion_4),
        ("barrier domination and Z <= 1", criterion_5),
        ("integral chain", criterion_6),
        ("barrier identity witness", criterion_7),
        ("hypothesis gating", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
