//! Comparison tables of the closed-form bounds against computed eigenvalues.

use rayon::prelude::*;

use crate::bounds::{self, GeometryData};
use crate::config::{ModelKind, ModelSpec};
use crate::error::Result;
use crate::format::{csv_field, fmt_opt};
use crate::model::{Hypotheses, ModelManifold};
use crate::solver::{solve, Method, RadialEigenSolution, SolverConfig};
use crate::verify::{verify_solution, CheckId, Status, VerificationReport, VerifyConfig};

/// CSV column order of [`SweepTable::to_csv`].
pub const COLUMNS: [&str; 23] = [
    "variant",
    "n",
    "K",
    "R",
    "d_tilde",
    "lambda_shooting",
    "lambda_fd",
    "reilly",
    "zhong_yang",
    "yang",
    "improved",
    "best_name",
    "margin_main",
    "ricci_lower",
    "mean_curvature",
    "hypotheses",
    "lichnerowicz",
    "gradient",
    "z_le_one",
    "barrier",
    "chain",
    "main",
    "error",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepConfig {
    /// Grid and tolerance for both solves; `method` picks the profile the
    /// estimate checks use.
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundValues {
    pub reilly: Option<f64>,
    pub zhong_yang: Option<f64>,
    pub yang: Option<f64>,
    pub improved: Option<f64>,
    pub best: Option<&'static str>,
}

impl BoundValues {
    fn of(model: &ModelManifold, k: f64) -> Self {
        let n = model.dimension();
        let d = model.diameter();
        let dt = model.in_diameter();
        Self {
            reilly: bounds::reilly_bound(n, k).ok(),
            zhong_yang: bounds::zhong_yang_bound(d).ok(),
            yang: bounds::yang_bound(n, k, dt).ok(),
            improved: bounds::improved_bound(n, k, dt).ok(),
            best: GeometryData::new(n, k, Some(d), Some(dt))
                .and_then(|g| bounds::best_bound(&g))
                .ok()
                .map(|b| b.kind.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub spec: ModelSpec,
    pub in_diameter: Option<f64>,
    pub lambda_shooting: Option<f64>,
    pub lambda_fd: Option<f64>,
    pub bounds: BoundValues,
    pub hypotheses: Option<Hypotheses>,
    pub report: Option<VerificationReport>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(spec: &ModelSpec, error: String) -> Self {
        Self {
            spec: spec.clone(),
            in_diameter: None,
            lambda_shooting: None,
            lambda_fd: None,
            bounds: BoundValues::default(),
            hypotheses: None,
            report: None,
            error: Some(error),
        }
    }

    pub fn status(&self, id: CheckId) -> Option<Status> {
        self.report.as_ref()?.get(id).map(|e| e.status)
    }

    /// `lambda - improved` for the eigenvalue used in the checks.
    pub fn margin_main(&self) -> Option<f64> {
        let lambda = self.report.as_ref()?.lambda;
        Some(lambda - self.bounds.improved?)
    }

    /// True when an in-hypothesis check failed.
    pub fn has_violation(&self) -> bool {
        self.report.as_ref().is_some_and(|r| !r.all_pass())
    }
}

fn compute_row(spec: &ModelSpec, config: &SweepConfig) -> SweepRow {
    let model = match spec.build() {
        Ok(m) => m,
        Err(e) => return SweepRow::failed(spec, e.to_string()),
    };
    let run = || -> Result<SweepRow> {
        let hyp = Hypotheses::of(&model)?;
        let shooting = solve(
            &model,
            &SolverConfig {
                method: Method::Shooting,
                ..config.solver
            },
        )?;
        let fd = solve(
            &model,
            &SolverConfig {
                method: Method::FiniteDifference,
                ..config.solver
            },
        )?;
        let primary: &RadialEigenSolution = match config.solver.method {
            Method::Shooting => &shooting,
            Method::FiniteDifference => &fd,
        };
        let report = verify_solution(&model, primary, &config.verify)?;
        Ok(SweepRow {
            spec: spec.clone(),
            in_diameter: Some(model.in_diameter()),
            lambda_shooting: Some(shooting.lambda),
            lambda_fd: Some(fd.lambda),
            bounds: BoundValues::of(&model, hyp.curvature_constant()),
            hypotheses: Some(hyp),
            report: Some(report),
            error: None,
        })
    };
    run().unwrap_or_else(|e| SweepRow::failed(spec, e.to_string()))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Exit status of a sweep: 1 if any in-hypothesis check failed, otherwise
/// 2 if any row could not be computed, otherwise 0.
pub fn exit_status(table: &SweepTable) -> i32 {
    if table.rows.iter().any(SweepRow::has_violation) {
        1
    } else if table.rows.iter().any(|r| r.error.is_some()) {
        2
    } else {
        0
    }
}

/// Solves and verifies every model. Rows are computed in parallel and
/// returned in input order; a failing row records its error and the
/// others are unaffected.
pub fn sweep(specs: &[ModelSpec], config: &SweepConfig) -> SweepTable {
    SweepTable {
        rows: specs.par_iter().map(|s| compute_row(s, config)).collect(),
    }
}

impl SweepTable {
    pub fn exit_status(&self) -> i32 {
        exit_status(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let status = |id| row.status(id).map_or(String::new(), |s| s.name().to_string());
            let hyp_flag = row.hypotheses.map_or(String::new(), |h| {
                if h.positive_curvature_theorem() {
                    "positive_curvature".into()
                } else if h.mean_convex() && h.nonnegative_ricci() {
                    "nonnegative_ricci".into()
                } else {
                    "unmet".into()
                }
            });
            let radius = row.spec.radius.or(row.spec.length.map(|l| 0.5 * l));
            let fields = [
                row.spec.kind.name().to_string(),
                match (row.spec.kind, row.spec.n) {
                    (ModelKind::Interval, _) => "1".to_string(),
                    (_, Some(n)) => n.to_string(),
                    (_, None) => String::new(),
                },
                fmt_opt(row.spec.k.or(row.hypotheses.map(|h| h.curvature_constant()))),
                fmt_opt(radius),
                fmt_opt(row.in_diameter),
                fmt_opt(row.lambda_shooting),
                fmt_opt(row.lambda_fd),
                fmt_opt(row.bounds.reilly),
                fmt_opt(row.bounds.zhong_yang),
                fmt_opt(row.bounds.yang),
                fmt_opt(row.bounds.improved),
                row.bounds.best.unwrap_or("").to_string(),
                fmt_opt(row.margin_main()),
                fmt_opt(row.hypotheses.map(|h| h.ricci_lower)),
                fmt_opt(row.hypotheses.map(|h| h.mean_curvature)),
                hyp_flag,
                status(CheckId::Lichnerowicz),
                status(CheckId::GradientEstimate),
                status(CheckId::ZLeOne),
                status(CheckId::BarrierDomination),
                status(CheckId::IntegralChain),
                status(CheckId::MainBound),
                csv_field(row.error.as_deref().unwrap_or("")),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}
