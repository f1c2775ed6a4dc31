use std::f64::consts::PI;

use spectral_bounds::model::ModelManifold;
use spectral_bounds::solver::{
    fd_eigenvalue_on_grid, richardson, solve, Method, SolverConfig,
};

/// Power series of J_0, accurate well past its first zero.
fn bessel_j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= q / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

fn first_zero_j0() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn both(model: &ModelManifold) -> (f64, f64) {
    let s = solve(model, &SolverConfig::with_method(Method::Shooting)).unwrap();
    let f = solve(model, &SolverConfig::with_method(Method::FiniteDifference)).unwrap();
    (s.lambda, f.lambda)
}

#[test]
fn bessel_oracle_matches_reference_digits() {
    assert!((first_zero_j0() - 2.404_825_557_695_773).abs() < 1e-14);
}

#[test]
fn interval_eigenvalue() {
    for &len in &[1.0, 2.0, PI] {
        let m = ModelManifold::interval(len).unwrap();
        let exact = PI * PI / (len * len);
        let (s, f) = both(&m);
        assert!((s - exact).abs() <= 1e-8 * exact, "shooting {s} vs {exact}");
        assert!((f - exact).abs() <= 1e-8 * exact, "fd {f} vs {exact}");
    }
}

#[test]
fn hemispheres() {
    for n in [2u32, 3, 5] {
        let m = ModelManifold::hemisphere(n, 1.0).unwrap();
        let (s, f) = both(&m);
        let exact = f64::from(n);
        assert!((s - exact).abs() <= 1e-6 * exact, "n={n} shooting {s}");
        assert!((f - exact).abs() <= 1e-6 * exact, "n={n} fd {f}");
    }
}

#[test]
fn hemisphere_scales_with_curvature() {
    let m = ModelManifold::hemisphere(3, 4.0).unwrap();
    let (s, f) = both(&m);
    assert!((s - 12.0).abs() <= 1e-6 * 12.0);
    assert!((f - 12.0).abs() <= 1e-6 * 12.0);
}

#[test]
fn unit_disk_is_bessel_zero_squared() {
    let j = first_zero_j0();
    let m = ModelManifold::euclidean_ball(2, 1.0).unwrap();
    let (s, f) = both(&m);
    assert!((s - j * j).abs() <= 1e-6 * j * j, "shooting {s}");
    assert!((f - j * j).abs() <= 1e-6 * j * j, "fd {f}");
}

#[test]
fn three_ball_is_pi_squared() {
    let m = ModelManifold::euclidean_ball(3, 1.0).unwrap();
    let (s, f) = both(&m);
    assert!((s - PI * PI).abs() <= 1e-6 * PI * PI);
    assert!((f - PI * PI).abs() <= 1e-6 * PI * PI);
}

#[test]
fn euclidean_scaling() {
    let base = solve(
        &ModelManifold::euclidean_ball(4, 1.0).unwrap(),
        &SolverConfig::default(),
    )
    .unwrap()
    .lambda;
    for &r in &[0.5, 2.0, 3.0] {
        let l = solve(
            &ModelManifold::euclidean_ball(4, r).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap()
        .lambda;
        assert!((l * r * r - base).abs() <= 1e-7 * base);
    }
}

#[test]
fn methods_agree_on_caps() {
    for &(n, k, r) in &[(2u32, 1.0, 0.7), (3, 1.0, 1.2), (4, 2.0, 0.9), (6, 0.5, 2.5)] {
        let m = ModelManifold::spherical_cap(n, k, r).unwrap();
        let (s, f) = both(&m);
        assert!((s - f).abs() <= 1e-6 * s, "n={n} K={k} R={r}: {s} vs {f}");
    }
}

#[test]
fn eigenvalue_decreases_with_radius() {
    let mut prev = f64::INFINITY;
    for i in 1..=8 {
        let r = 0.35 * f64::from(i);
        let l = solve(
            &ModelManifold::spherical_cap(3, 1.0, r).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap()
        .lambda;
        assert!(l < prev);
        prev = l;
    }
}

#[test]
fn profile_is_normalized_and_decreasing() {
    for method in [Method::Shooting, Method::FiniteDifference] {
        let m = ModelManifold::spherical_cap(3, 1.0, 1.0).unwrap();
        let sol = solve(&m, &SolverConfig::with_method(method)).unwrap();
        assert_eq!(sol.v.len(), sol.r_grid.len());
        assert_eq!(sol.v_prime.len(), sol.r_grid.len());
        assert!((sol.v[0] - 1.0).abs() < 1e-12);
        assert_eq!(*sol.v.last().unwrap(), 0.0);
        assert!(sol.v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(sol.v_prime[1..].iter().all(|&d| d <= 1e-9));
    }
}

#[test]
fn fd_error_is_second_order() {
    let j = first_zero_j0();
    for n in [2u32, 3, 5] {
        let m = ModelManifold::euclidean_ball(n, 1.0).unwrap();
        let exact = if n == 2 {
            j * j
        } else if n == 3 {
            PI * PI
        } else {
            solve(&m, &SolverConfig::with_method(Method::Shooting))
                .unwrap()
                .lambda
        };
        let e1 = (fd_eigenvalue_on_grid(&m, 64, 1e-14, 500).unwrap().0 - exact).abs();
        let e2 = (fd_eigenvalue_on_grid(&m, 128, 1e-14, 500).unwrap().0 - exact).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "n={n}: ratio {ratio}");
    }
}

#[test]
fn richardson_cancels_quadratic_and_quartic_terms() {
    let f = |h: f64| 3.0 + 0.7 * h * h - 0.2 * h.powi(4);
    let v = richardson([f(0.1), f(0.05), f(0.025)]);
    assert!((v - 3.0).abs() < 1e-13);
}
