//! Grid verification of every stated property of the barrier function `xi`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use crate::barrier::{
    q1_ode_terms, q2_ode_terms, q_ode_terms, xi_closed_form, xi_derivatives, xi_identity_terms,
    xi_jet, xi_ode_terms, xi_series, XiJet, ENDPOINT_BAND, XI_AT_ZERO,
};
use crate::error::{Error, Result};
use crate::format::{csv_field, fmt_f64};
use crate::quadrature::integrate_with_breaks;

pub const MIN_GRID_SIZE: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiSuiteConfig {
    pub grid_size: usize,
    /// Bound on `|residual| / (1 + largest term)` for the ODE identities.
    pub residual_tol: f64,
    /// Bound on errors of the stated special values.
    pub value_tol: f64,
    pub integral_tol: f64,
    /// Closed form against endpoint series on `|t| in [pi/2 - 0.1, pi/2 - 0.02]`.
    pub branch_tol: f64,
    /// Relative agreement of the ODE-derived derivatives with the jet.
    pub route_tol: f64,
}

impl Default for XiSuiteConfig {
    fn default() -> Self {
        Self {
            grid_size: 10_001,
            residual_tol: 1e-9,
            value_tol: 1e-10,
            integral_tol: 1e-9,
            branch_tol: 1e-11,
            route_tol: 1e-8,
        }
    }
}

/// One checked property. `max_residual` is the worst error for identities
/// and the worst signed violation (negative when satisfied) for sign and
/// monotonicity claims.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub max_residual: f64,
    pub threshold: f64,
    pub grid_size: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiReport {
    pub grid_size: usize,
    pub outcomes: Vec<PropertyOutcome>,
}

impl XiReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn get(&self, id: &str) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| o.id == id)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("property_id,max_residual,threshold,pass\n");
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                csv_field(o.id),
                fmt_f64(o.max_residual),
                fmt_f64(o.threshold),
                o.pass
            );
        }
        out
    }

    /// One property per line as `key=value` pairs.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "id={} max_residual={} threshold={} grid_size={} pass={} description=\"{}\"",
                o.id,
                fmt_f64(o.max_residual),
                fmt_f64(o.threshold),
                o.grid_size,
                o.pass,
                o.description
            );
        }
        out
    }
}

/// Runs the suite with default tolerances.
pub fn xi_property_suite(grid_size: usize) -> Result<XiReport> {
    run_xi_suite(&XiSuiteConfig {
        grid_size,
        ..XiSuiteConfig::default()
    })
}

pub fn run_xi_suite(config: &XiSuiteConfig) -> Result<XiReport> {
    run_xi_suite_with(config, |t| xi_jet(t).expect("grid lies in the domain"))
}

/// Runs the suite against an arbitrary derivative provider; used for
/// negative controls with perturbed profiles.
pub fn run_xi_suite_with<F>(config: &XiSuiteConfig, provider: F) -> Result<XiReport>
where
    F: Fn(f64) -> XiJet,
{
    let n = config.grid_size;
    if n < MIN_GRID_SIZE {
        return Err(Error::Config(format!(
            "grid size must be at least {MIN_GRID_SIZE}, got {n}"
        )));
    }
    // Exactly symmetric grid: t_i = (pi/2) (2i - (n-1)) / (n-1).
    let half = (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| FRAC_PI_2 * (2.0 * i as f64 - half) / half)
        .collect();
    let jets: Vec<XiJet> = grid.iter().map(|&t| provider(t)).collect();

    let mut outcomes = Vec::new();
    let mut push = |id, description, max_residual: f64, threshold: f64, pass: bool| {
        outcomes.push(PropertyOutcome {
            id,
            description,
            max_residual,
            threshold,
            grid_size: n,
            pass: pass && max_residual.is_finite(),
        });
    };
    let le = |v: f64, tol: f64| v <= tol;
    let lt = |v: f64, tol: f64| v < tol;

    // ODE identities, relative to the largest term.
    type TermsFn = fn(&XiJet) -> crate::barrier::Residual;
    let identities: [(&'static str, &'static str, TermsFn); 5] = [
        ("xi_ode", "xi''/2 cos^2 - xi' cos sin - xi = 2 cos^2", xi_ode_terms),
        ("xi_first_order", "xi' cos - 2 xi sin = 4 t cos", xi_identity_terms),
        ("q_ode", "q''/2 cos - 2 q' sin - 2 q cos = -4 sin", q_ode_terms),
        ("q1_ode", "second-order equation for q'", q1_ode_terms),
        ("q2_ode", "second-order equation for q''", q2_ode_terms),
    ];
    for (id, description, terms) in identities {
        let worst = jets
            .iter()
            .map(|j| terms(j).relative())
            .fold(0.0f64, f64::max);
        push(id, description, worst, config.residual_tol, le(worst, config.residual_tol));
    }

    let at_zero = provider(0.0);
    let at_right = provider(FRAC_PI_2);
    let at_left = provider(-FRAC_PI_2);

    let err = (at_zero.d[0] - XI_AT_ZERO).abs();
    push("xi_at_zero", "xi(0) = 1 - pi^2/4", err, config.value_tol, le(err, config.value_tol));

    let err = at_right.d[0].abs().max(at_left.d[0].abs());
    push("xi_endpoints", "xi(+-pi/2) = 0", err, config.value_tol, le(err, config.value_tol));

    let worst = jets
        .iter()
        .map(|j| j.d[0].max(XI_AT_ZERO - j.d[0]))
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "xi_range",
        "1 - pi^2/4 <= xi <= 0",
        worst,
        config.value_tol,
        le(worst, config.value_tol),
    );

    let edge = FRAC_PI_2 - ENDPOINT_BAND;
    let integral = integrate_with_breaks(
        |t| provider(t).d[0],
        0.0,
        FRAC_PI_2,
        &[edge],
        0.1 * config.integral_tol,
    )?;
    let err = (integral + FRAC_PI_2).abs();
    push(
        "xi_integral",
        "int_0^{pi/2} xi = -pi/2",
        err,
        config.integral_tol,
        le(err, config.integral_tol),
    );

    let target = 2.0 * PI / 3.0;
    let err = (at_right.d[1] - target).abs().max((at_left.d[1] + target).abs());
    push(
        "xi1_endpoints",
        "xi'(+-pi/2) = +-2 pi/3",
        err,
        config.value_tol,
        le(err, config.value_tol),
    );

    let worst = jets
        .windows(2)
        .map(|w| w[0].d[1] - w[1].d[1])
        .fold(f64::NEG_INFINITY, f64::max);
    push("xi1_increasing", "xi' strictly increasing", worst, 0.0, lt(worst, 0.0));

    let err = at_zero.d[1].abs();
    push("xi1_at_zero", "xi'(0) = 0", err, config.value_tol, le(err, config.value_tol));

    let worst = jets
        .iter()
        .filter(|j| j.t != 0.0)
        .map(|j| -j.d[1] * j.t.signum())
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "xi1_sign",
        "xi' < 0 on (-pi/2, 0), xi' > 0 on (0, pi/2)",
        worst,
        0.0,
        lt(worst, 0.0),
    );

    let worst = jets.iter().map(|j| -j.d[2]).fold(f64::NEG_INFINITY, f64::max);
    push("xi2_positive", "xi'' > 0 on [-pi/2, pi/2]", worst, 0.0, lt(worst, 0.0));

    let err = (at_right.d[2] - 2.0).abs().max((at_left.d[2] - 2.0).abs());
    push("xi2_endpoints", "xi''(+-pi/2) = 2", err, config.value_tol, le(err, config.value_tol));

    let xi2_zero = 2.0 * (3.0 - PI * PI / 4.0);
    let err = (at_zero.d[2] - xi2_zero).abs();
    push(
        "xi2_at_zero",
        "xi''(0) = 2(3 - pi^2/4)",
        err,
        config.value_tol,
        le(err, config.value_tol),
    );

    // (xi'/t)' = (xi'' t - xi') / t^2.
    let worst = jets
        .iter()
        .filter(|j| j.t > 0.0 && j.t < FRAC_PI_2)
        .map(|j| -(j.d[2] * j.t - j.d[1]) / (j.t * j.t))
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "xi1_over_t_increasing",
        "(xi'/t)' > 0 on (0, pi/2)",
        worst,
        0.0,
        lt(worst, 0.0),
    );

    let worst = jets
        .iter()
        .map(|j| {
            let ratio = if j.t == 0.0 { j.d[2] } else { j.d[1] / j.t };
            (xi2_zero - ratio).max(ratio - 4.0 / 3.0)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "xi1_over_t_range",
        "2(3 - pi^2/4) <= xi'/t <= 4/3",
        worst,
        config.value_tol,
        le(worst, config.value_tol),
    );

    let small = 1e-6;
    let err = (provider(small).d[1] / small - xi2_zero).abs();
    push(
        "xi1_over_t_limit",
        "xi'/t -> xi''(0) as t -> 0",
        err,
        config.value_tol,
        le(err, config.value_tol),
    );

    let worst = jets
        .iter()
        .filter(|j| j.t != 0.0 && j.t.abs() < FRAC_PI_2)
        .map(|j| -j.d[3] * j.t.signum())
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "xi3_sign",
        "xi''' < 0 on (-pi/2, 0), xi''' > 0 on (0, pi/2)",
        worst,
        0.0,
        lt(worst, 0.0),
    );

    let target = 8.0 * PI / 15.0;
    let err = (at_right.d[3] - target).abs().max((at_left.d[3] + target).abs());
    push(
        "xi3_endpoint",
        "xi'''(pi/2) = 8 pi/15",
        err,
        config.value_tol,
        le(err, config.value_tol),
    );

    // Properties of the evaluation routes themselves.
    let mut worst_even = 0.0f64;
    let mut worst_route = 0.0f64;
    for (j, &t) in jets.iter().zip(&grid) {
        let plus = xi_derivatives(t)?;
        let minus = xi_derivatives(-t)?;
        worst_even = worst_even
            .max((plus.value - minus.value).abs())
            .max((plus.d1 + minus.d1).abs());
        for (a, b) in [
            (plus.value, j.d[0]),
            (plus.d1, j.d[1]),
            (plus.d2, j.d[2]),
            (plus.d3, j.d[3]),
        ] {
            worst_route = worst_route.max((a - b).abs() / (1.0 + b.abs()));
        }
    }
    push(
        "evenness",
        "xi(-t) = xi(t), xi'(-t) = -xi'(t)",
        worst_even,
        config.value_tol,
        le(worst_even, config.value_tol),
    );
    push(
        "route_consistency",
        "ODE-derived derivatives agree with exact differentiation",
        worst_route,
        config.route_tol,
        le(worst_route, config.route_tol),
    );

    let lo = FRAC_PI_2 - ENDPOINT_BAND;
    let hi = FRAC_PI_2 - 0.02;
    let samples = (n / 10).max(101);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let t = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        for tt in [t, -t] {
            worst = worst.max((xi_series(tt)?.d[0] - xi_closed_form(tt)).abs());
        }
    }
    push(
        "branch_consistency",
        "closed form and endpoint series agree on the overlap band",
        worst,
        config.branch_tol,
        le(worst, config.branch_tol),
    );

    Ok(XiReport {
        grid_size: n,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = xi_property_suite(10_001).unwrap();
        for o in &report.outcomes {
            assert!(o.pass, "{o:?}");
        }
        assert!(report.outcomes.len() >= 12);
        let mut ids: Vec<_> = report.outcomes.iter().map(|o| o.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), report.outcomes.len());
    }

    #[test]
    fn coarse_grid_passes() {
        assert!(xi_property_suite(101).unwrap().all_pass());
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(xi_property_suite(100).is_err());
    }

    #[test]
    fn perturbed_profile_fails_ode_check() {
        let config = XiSuiteConfig {
            grid_size: 1001,
            ..XiSuiteConfig::default()
        };
        let report = run_xi_suite_with(&config, |t| {
            let mut j = xi_jet(t).unwrap();
            j.d[0] += 0.01;
            j
        })
        .unwrap();
        assert!(!report.get("xi_ode").unwrap().pass);
        assert!(!report.get("xi_integral").unwrap().pass);
        assert!(!report.all_pass());
    }

    #[test]
    fn impossible_tolerance_fails() {
        let config = XiSuiteConfig {
            grid_size: 1001,
            residual_tol: 1e-16,
            ..XiSuiteConfig::default()
        };
        assert!(!run_xi_suite(&config).unwrap().all_pass());
    }

    #[test]
    fn csv_layout() {
        let report = xi_property_suite(101).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("property_id,max_residual,threshold,pass"));
        assert_eq!(lines.count(), report.outcomes.len());
        assert!(!csv.contains('\r'));
    }
}
