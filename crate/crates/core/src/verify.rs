//! Checks of a computed eigenpair against the inequalities of the
//! positive-curvature eigenvalue estimate.
//!
//! Every check returns a [`CheckEntry`] whose `margin` is oriented so that
//! the check passes when `margin >= -threshold`. Checks whose hypotheses do
//! not hold on the model are skipped unless [`VerifyConfig::force_hypotheses`]
//! is set, in which case they run and are labelled out of hypothesis.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::barrier::{barrier_inequality_rhs, BarrierProfile};
use crate::error::{Error, Result};
use crate::format::{csv_field, fmt_f64, fmt_opt};
use crate::model::{Hypotheses, ModelManifold};
use crate::solver::{solve, RadialEigenSolution, SolverConfig};

pub const DEFAULT_B_SEQUENCE: [f64; 3] = [1.01, 1.001, 1.0001];
pub const DEFAULT_BUCKETS: usize = 64;
pub const MIN_BUCKETS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Values of `b > 1` approaching 1; evaluated from largest to smallest.
    pub b_sequence: Vec<f64>,
    pub buckets: usize,
    /// Allowed excess of the bucketed `Z` over the barrier `z`.
    pub z_tol: f64,
    /// Allowed excess of `Z` over 1.
    pub z_one_tol: f64,
    /// Relative slack on the gradient estimate, before the grid term.
    pub gradient_tol: f64,
    pub chain_tol: f64,
    /// Relative slack on the main bound.
    pub main_tol: f64,
    /// Relative slack on `lambda >= n K`.
    pub lichnerowicz_slack: f64,
    pub quadrature_tol: f64,
    pub force_hypotheses: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            b_sequence: DEFAULT_B_SEQUENCE.to_vec(),
            buckets: DEFAULT_BUCKETS,
            z_tol: 1e-3,
            z_one_tol: 1e-6,
            gradient_tol: 1e-4,
            chain_tol: 1e-6,
            main_tol: 1e-6,
            lichnerowicz_slack: 1e-8,
            quadrature_tol: 1e-12,
            force_hypotheses: false,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b_sequence.is_empty() {
            return Err(Error::Config("b sequence is empty".into()));
        }
        for &b in &self.b_sequence {
            check_b(b)?;
        }
        if self.buckets < MIN_BUCKETS {
            return Err(Error::Config(format!(
                "buckets must be at least {MIN_BUCKETS}, got {}",
                self.buckets
            )));
        }
        for (name, v) in [
            ("z_tol", self.z_tol),
            ("z_one_tol", self.z_one_tol),
            ("gradient_tol", self.gradient_tol),
            ("chain_tol", self.chain_tol),
            ("main_tol", self.main_tol),
            ("lichnerowicz_slack", self.lichnerowicz_slack),
            ("quadrature_tol", self.quadrature_tol),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be a finite nonnegative number, got {v}")));
            }
        }
        Ok(())
    }

    /// The b values sorted from largest to smallest.
    fn sorted_b(&self) -> Vec<f64> {
        let mut b = self.b_sequence.clone();
        b.sort_by(|x, y| y.total_cmp(x));
        b
    }
}

fn check_b(b: f64) -> Result<()> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::InvalidB(b));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Lichnerowicz,
    GradientEstimate,
    ZLeOne,
    BarrierDomination,
    IntegralChain,
    MainBound,
}

impl CheckId {
    pub const ALL: [CheckId; 6] = [
        CheckId::Lichnerowicz,
        CheckId::GradientEstimate,
        CheckId::ZLeOne,
        CheckId::BarrierDomination,
        CheckId::IntegralChain,
        CheckId::MainBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Lichnerowicz => "lichnerowicz",
            CheckId::GradientEstimate => "gradient_estimate",
            CheckId::ZLeOne => "z_le_one",
            CheckId::BarrierDomination => "barrier_domination",
            CheckId::IntegralChain => "integral_chain",
            CheckId::MainBound => "main_bound",
        }
    }

    /// The inequality being checked, in plain text.
    pub fn tag(self) -> &'static str {
        match self {
            CheckId::Lichnerowicz => "lambda >= n K",
            CheckId::GradientEstimate => "v'^2 / (b^2 - v^2) <= lambda",
            CheckId::ZLeOne => "Z(t) <= 1",
            CheckId::BarrierDomination => "Z(t) <= 1 + delta xi(t)",
            CheckId::IntegralChain => "sqrt(lambda) dtilde / 2 >= int_0^{pi/2} dt / sqrt(z)",
            CheckId::MainBound => "lambda >= (n-1) K / 2 + pi^2 / dtilde^2",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub id: CheckId,
    pub status: Status,
    /// `None` only for skipped checks.
    pub margin: Option<f64>,
    pub threshold: f64,
    pub out_of_hypothesis: bool,
    /// Inputs and secondary measurements, as `key=value` pairs.
    pub detail: String,
}

impl CheckEntry {
    fn measured(id: CheckId, margin: f64, threshold: f64, detail: String) -> Self {
        let status = if margin.is_finite() && margin >= -threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            id,
            status,
            margin: Some(margin),
            threshold,
            out_of_hypothesis: false,
            detail,
        }
    }

    fn failed(id: CheckId, threshold: f64, detail: String) -> Self {
        Self {
            id,
            status: Status::Fail,
            margin: None,
            threshold,
            out_of_hypothesis: false,
            detail,
        }
    }

    fn skipped(id: CheckId, reason: &str) -> Self {
        Self {
            id,
            status: Status::Skipped,
            margin: None,
            threshold: 0.0,
            out_of_hypothesis: true,
            detail: format!("reason={reason}"),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Per-bucket maxima of `Z = v'^2 / ((b^2 - v^2) lambda)` over
/// `t = arcsin(v / b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalZ {
    pub b: f64,
    /// Bucket edges, uniform on `[0, pi/2]`.
    pub edges: Vec<f64>,
    /// Bucket maxima; `None` for buckets no grid point maps into.
    pub values: Vec<Option<f64>>,
    /// The `t` at which each bucket maximum is attained.
    pub argmax: Vec<Option<f64>>,
}

impl EmpiricalZ {
    pub fn max(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nonempty buckets as `(t, Z)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.argmax
            .iter()
            .zip(&self.values)
            .filter_map(|(t, z)| Some(((*t)?, (*z)?)))
    }
}

pub fn empirical_z(solution: &RadialEigenSolution, b: f64, buckets: usize) -> Result<EmpiricalZ> {
    check_b(b)?;
    if buckets < MIN_BUCKETS {
        return Err(Error::Config(format!(
            "buckets must be at least {MIN_BUCKETS}, got {buckets}"
        )));
    }
    let width = FRAC_PI_2 / buckets as f64;
    let edges = (0..=buckets).map(|i| i as f64 * width).collect();
    let mut values: Vec<Option<f64>> = vec![None; buckets];
    let mut argmax: Vec<Option<f64>> = vec![None; buckets];
    for (&v, &dv) in solution.v.iter().zip(&solution.v_prime) {
        let v = v.clamp(0.0, 1.0);
        let t = (v / b).asin();
        let z = dv * dv / ((b * b - v * v) * solution.lambda);
        let k = ((t / width) as usize).min(buckets - 1);
        if values[k].is_none_or(|cur| z > cur) {
            values[k] = Some(z);
            argmax[k] = Some(t);
        }
    }
    Ok(EmpiricalZ {
        b,
        edges,
        values,
        argmax,
    })
}

/// `max v'^2 / (b^2 - v^2)` over the grid.
pub fn gradient_ratio_max(solution: &RadialEigenSolution, b: f64) -> Result<f64> {
    check_b(b)?;
    Ok(solution
        .v
        .iter()
        .zip(&solution.v_prime)
        .map(|(&v, &dv)| {
            let v = v.clamp(0.0, 1.0);
            dv * dv / (b * b - v * v)
        })
        .fold(0.0, f64::max))
}

/// `delta = (n - 1) K / (2 lambda)`.
pub fn delta_for(lambda: f64, n: u32, k: f64) -> f64 {
    0.5 * f64::from(n.saturating_sub(1)) * k / lambda
}

pub fn check_lichnerowicz(
    solution: &RadialEigenSolution,
    n: u32,
    k: f64,
    config: &VerifyConfig,
) -> CheckEntry {
    let nk = f64::from(n) * k;
    CheckEntry::measured(
        CheckId::Lichnerowicz,
        solution.lambda - nk,
        config.lichnerowicz_slack * solution.lambda,
        format!("lambda={} nK={}", fmt_f64(solution.lambda), fmt_f64(nk)),
    )
}

/// Gradient estimate at every `b` in the sequence, plus the requirement that
/// the measured maxima do not decrease as `b` approaches 1. The margin is
/// `1 - max_ratio / lambda`.
pub fn check_gradient_estimate(
    solution: &RadialEigenSolution,
    config: &VerifyConfig,
) -> Result<CheckEntry> {
    let lambda = solution.lambda;
    let grid = solution.grid_intervals().max(1) as f64;
    let threshold = config.gradient_tol + 1.0 / (grid * grid);
    let mut maxima = Vec::new();
    for b in config.sorted_b() {
        maxima.push((b, gradient_ratio_max(solution, b)?));
    }
    let worst = maxima.iter().map(|&(_, m)| m).fold(0.0, f64::max);
    let monotone = maxima
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    let detail = maxima
        .iter()
        .map(|(b, m)| format!("ratio[b={b}]={}", fmt_f64(*m)))
        .chain([format!("lambda={}", fmt_f64(lambda)), format!("monotone_in_b={monotone}")])
        .collect::<Vec<_>>()
        .join(" ");
    let mut entry = CheckEntry::measured(CheckId::GradientEstimate, 1.0 - worst / lambda, threshold, detail);
    if !monotone {
        entry.status = Status::Fail;
    }
    Ok(entry)
}

/// Bucketed `Z <= 1` at every `b`; margin `1 - max Z`.
pub fn check_z_le_one(solution: &RadialEigenSolution, config: &VerifyConfig) -> Result<CheckEntry> {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_b = f64::NAN;
    for b in config.sorted_b() {
        let m = empirical_z(solution, b, config.buckets)?.max();
        if m > worst {
            worst = m;
            worst_b = b;
        }
    }
    Ok(CheckEntry::measured(
        CheckId::ZLeOne,
        1.0 - worst,
        config.z_one_tol,
        format!("max_Z={} at_b={worst_b} buckets={}", fmt_f64(worst), config.buckets),
    ))
}

/// Bucketed `Z(t) <= z(t)` with `z = 1 + delta xi`, compared at each bucket's
/// maximizing `t`, for every `b`.
///
/// At each comparison point the contact-point quantity
/// [`barrier_inequality_rhs`] is also evaluated; it requires `z > 0`, so a
/// `delta` large enough to push the barrier below zero is an error.
pub fn check_barrier_domination_with_delta(
    solution: &RadialEigenSolution,
    delta: f64,
    config: &VerifyConfig,
) -> Result<CheckEntry> {
    let profile = BarrierProfile::new(delta)?;
    let mut worst = f64::INFINITY;
    let mut worst_t = f64::NAN;
    let mut worst_b = f64::NAN;
    let mut witness: f64 = 0.0;
    for b in config.sorted_b() {
        let emp = empirical_z(solution, b, config.buckets)?;
        for (t, z_emp) in emp.samples() {
            let zv = profile.eval(t)?;
            let rhs = barrier_inequality_rhs(t, zv.z, zv.z1, zv.z2, delta)?;
            witness = witness.max(rhs.abs());
            let margin = zv.z - z_emp;
            if margin < worst {
                worst = margin;
                worst_t = t;
                worst_b = b;
            }
        }
    }
    Ok(CheckEntry::measured(
        CheckId::BarrierDomination,
        worst,
        config.z_tol,
        format!(
            "delta={} worst_t={} at_b={worst_b} z_min={} max_abs_contact_rhs={}",
            fmt_f64(delta),
            fmt_f64(worst_t),
            fmt_f64(profile.minimum()),
            fmt_f64(witness)
        ),
    ))
}

pub fn check_barrier_domination(
    solution: &RadialEigenSolution,
    n: u32,
    k: f64,
    config: &VerifyConfig,
) -> Result<CheckEntry> {
    check_barrier_domination_with_delta(solution, delta_for(solution.lambda, n, k), config)
}

/// The chain `sqrt(lambda) dtilde / 2 >= I1 >= I2 = (pi/2)/sqrt(1 - delta)`
/// with `I1 = int dt / sqrt(z)` and `I2 = (pi/2)^{3/2} / (int z)^{1/2}`,
/// then `lambda (1 - delta) >= pi^2 / dtilde^2`. The margin is the smallest
/// of the three gaps, the last one divided by `lambda`.
pub fn check_integral_chain(
    solution: &RadialEigenSolution,
    n: u32,
    k: f64,
    config: &VerifyConfig,
) -> Result<CheckEntry> {
    let lambda = solution.lambda;
    let dt = solution.in_diameter;
    let delta = delta_for(lambda, n, k);
    let profile = BarrierProfile::new(delta)?;
    let lhs = lambda.sqrt() * dt / 2.0;
    let i1 = profile.inverse_sqrt_integral(config.quadrature_tol)?;
    let int_z = profile.integral(config.quadrature_tol)?;
    let i2 = FRAC_PI_2.powf(1.5) / int_z.sqrt();
    let closed = FRAC_PI_2 / (1.0 - delta).sqrt();
    let final_gap = (lambda * (1.0 - delta) - PI * PI / (dt * dt)) / lambda;
    let gaps = [lhs - i1, i1 - i2, final_gap];
    let margin = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let identity_ok = (i2 - closed).abs() <= config.chain_tol;
    let detail = format!(
        "delta={} lhs={} int_inv_sqrt_z={} power_mean={} closed_form={} final_gap={}",
        fmt_f64(delta),
        fmt_f64(lhs),
        fmt_f64(i1),
        fmt_f64(i2),
        fmt_f64(closed),
        fmt_f64(final_gap)
    );
    let mut entry = CheckEntry::measured(CheckId::IntegralChain, margin, config.chain_tol, detail);
    if !identity_ok {
        entry.status = Status::Fail;
    }
    Ok(entry)
}

/// `lambda >= (n-1) K / 2 + pi^2 / dtilde^2`, recording whether this bound
/// improves on `n K` and on `(n-1) K / 4 + pi^2 / dtilde^2` here.
pub fn check_main_bound(
    solution: &RadialEigenSolution,
    n: u32,
    k: f64,
    config: &VerifyConfig,
) -> CheckEntry {
    let lambda = solution.lambda;
    let dt = solution.in_diameter;
    let alpha = f64::from(n.saturating_sub(1)) * k;
    let main = 0.5 * alpha + PI * PI / (dt * dt);
    let yang = 0.25 * alpha + PI * PI / (dt * dt);
    let reilly = f64::from(n) * k;
    CheckEntry::measured(
        CheckId::MainBound,
        lambda - main,
        config.main_tol * lambda,
        format!(
            "lambda={} bound={} beats_reilly={} beats_yang={}",
            fmt_f64(lambda),
            fmt_f64(main),
            main > reilly,
            main > yang
        ),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub lambda: f64,
    pub dimension: u32,
    /// Curvature constant used in the checks.
    pub k: f64,
    pub delta: f64,
    pub in_diameter: f64,
    pub hypotheses: Hypotheses,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn get(&self, id: CheckId) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Failures among checks whose hypotheses hold.
    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == Status::Fail && !e.out_of_hypothesis)
    }

    /// True when no in-hypothesis check failed. Forced out-of-hypothesis
    /// checks are exploratory and do not count.
    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_report(&self) -> String {
        let mut out = format!(
            "lambda={}\nn={}\nK={}\ndelta={}\ndtilde={}\nricci_lower={}\nmean_curvature={}\n",
            fmt_f64(self.lambda),
            self.dimension,
            fmt_f64(self.k),
            fmt_f64(self.delta),
            fmt_f64(self.in_diameter),
            fmt_f64(self.hypotheses.ricci_lower),
            fmt_f64(self.hypotheses.mean_curvature)
        );
        for e in &self.entries {
            out.push_str(&format!(
                "check={} tag=\"{}\" margin={} threshold={} status={}{} {}\n",
                e.id,
                e.id.tag(),
                fmt_opt(e.margin),
                fmt_f64(e.threshold),
                e.status,
                if e.out_of_hypothesis && e.status != Status::Skipped {
                    " out_of_hypothesis"
                } else {
                    ""
                },
                e.detail
            ));
        }
        out.push_str(&format!("all_pass={}\n", self.all_pass()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,tag,margin,threshold,status,out_of_hypothesis,detail\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.id,
                csv_field(e.id.tag()),
                fmt_opt(e.margin),
                fmt_f64(e.threshold),
                e.status,
                e.out_of_hypothesis,
                csv_field(&e.detail)
            ));
        }
        out
    }
}

/// Runs every check on an already computed solution of `model`.
pub fn verify_solution(
    model: &ModelManifold,
    solution: &RadialEigenSolution,
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    config.validate()?;
    let hyp = Hypotheses::of(model)?;
    let n = model.dimension();
    let k = hyp.curvature_constant();
    let delta = delta_for(solution.lambda, n, k);
    let positive = hyp.positive_curvature_theorem();
    let nonneg = hyp.mean_convex() && hyp.nonnegative_ricci();

    let gate = |holds: bool, id: CheckId, reason: &str, run: &dyn Fn() -> Result<CheckEntry>| {
        if !holds && !config.force_hypotheses {
            return CheckEntry::skipped(id, reason);
        }
        let mut entry = run().unwrap_or_else(|e| CheckEntry::failed(id, 0.0, format!("error=\"{e}\"")));
        entry.out_of_hypothesis = !holds;
        entry
    };
    let positive_reason = "requires Ric >= (n-1)K with K > 0 and mean-convex boundary";
    let nonneg_reason = "requires Ric >= 0 and mean-convex boundary";

    let entries = vec![
        gate(positive, CheckId::Lichnerowicz, positive_reason, &|| {
            Ok(check_lichnerowicz(solution, n, k, config))
        }),
        gate(nonneg, CheckId::GradientEstimate, nonneg_reason, &|| {
            check_gradient_estimate(solution, config)
        }),
        gate(nonneg, CheckId::ZLeOne, nonneg_reason, &|| check_z_le_one(solution, config)),
        gate(nonneg, CheckId::BarrierDomination, nonneg_reason, &|| {
            check_barrier_domination(solution, n, k, config)
        }),
        gate(nonneg, CheckId::IntegralChain, nonneg_reason, &|| {
            check_integral_chain(solution, n, k, config)
        }),
        gate(positive, CheckId::MainBound, positive_reason, &|| {
            Ok(check_main_bound(solution, n, k, config))
        }),
    ];
    Ok(VerificationReport {
        lambda: solution.lambda,
        dimension: n,
        k,
        delta,
        in_diameter: solution.in_diameter,
        hypotheses: hyp,
        entries,
    })
}

/// Solves `model` and verifies the result.
pub fn verify(
    model: &ModelManifold,
    solver: &SolverConfig,
    config: &VerifyConfig,
) -> Result<(RadialEigenSolution, VerificationReport)> {
    config.validate()?;
    let solution = solve(model, solver)?;
    let report = verify_solution(model, &solution, config)?;
    Ok((solution, report))
}
