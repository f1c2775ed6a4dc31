//! First Dirichlet eigenpair of the radial problem
//!
//! ```text
//! u'' + (n-1) f'/f u' + lambda u = 0,   u'(0) = 0,   u(R) = 0,
//! ```
//!
//! by two independent methods.

mod finite_difference;
mod shooting;

pub use finite_difference::{fd_eigenvalue_on_grid, richardson, solve_finite_difference};
pub use shooting::solve_shooting;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::model::ModelManifold;
use crate::quadrature::adaptive_simpson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Shooting,
    FiniteDifference,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Shooting => "shooting",
            Method::FiniteDifference => "finite_difference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shooting" => Ok(Method::Shooting),
            "finite_difference" | "finite-difference" | "fd" => Ok(Method::FiniteDifference),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Number of uniform intervals on `[0, R]`.
    pub grid_points: usize,
    /// Relative tolerance on the eigenvalue.
    pub tolerance: f64,
    pub method: Method,
    /// Shooting start `r = epsilon`; `None` means `1e-8 R`.
    pub pole_offset: Option<f64>,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            tolerance: DEFAULT_TOLERANCE,
            method: Method::Shooting,
            pole_offset: None,
            max_iterations: 500,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::Config(format!(
                "grid must have at least {MIN_GRID_POINTS} points, got {}",
                self.grid_points
            )));
        }
        if !(self.tolerance >= 100.0 * f64::EPSILON) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!(
                "tolerance must be at least 100 machine epsilons, got {}",
                self.tolerance
            )));
        }
        if let Some(eps) = self.pole_offset {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::Config(format!("pole offset must be positive, got {eps}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Computed first eigenvalue with the radial eigenfunction on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenSolution {
    pub lambda: f64,
    pub r_grid: Vec<f64>,
    pub v: Vec<f64>,
    pub v_prime: Vec<f64>,
    pub in_diameter: f64,
    pub method: Method,
    pub dimension: u32,
}

impl RadialEigenSolution {
    pub fn radius(&self) -> f64 {
        *self.r_grid.last().unwrap_or(&0.0)
    }

    pub fn grid_intervals(&self) -> usize {
        self.r_grid.len().saturating_sub(1)
    }

    /// `key=value` summary lines.
    pub fn to_report(&self) -> String {
        format!(
            "lambda={}\nd_tilde={}\nmethod={}\ngrid={}\nn={}\n",
            fmt_f64(self.lambda),
            fmt_f64(self.in_diameter),
            self.method,
            self.grid_intervals(),
            self.dimension
        )
    }

    /// A `#` metadata line, then the profile as `r,v,v_prime` rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# lambda={},d_tilde={},method={},grid={}\nr,v,v_prime\n",
            fmt_f64(self.lambda),
            fmt_f64(self.in_diameter),
            self.method,
            self.grid_intervals()
        );
        for ((r, v), dv) in self.r_grid.iter().zip(&self.v).zip(&self.v_prime) {
            out.push_str(&format!("{},{},{}\n", fmt_f64(*r), fmt_f64(*v), fmt_f64(*dv)));
        }
        out
    }
}

pub fn solve(model: &ModelManifold, config: &SolverConfig) -> Result<RadialEigenSolution> {
    match config.method {
        Method::Shooting => solve_shooting(model, config),
        Method::FiniteDifference => solve_finite_difference(model, config),
    }
}

/// Relative size of values treated as zero when checking signs of a
/// profile.
const SIGN_SLACK: f64 = 1e-9;

/// Scales the profile so that `sup v = 1`, fixes the boundary value to zero
/// and rejects profiles that change sign.
pub fn normalize(mut solution: RadialEigenSolution) -> Result<RadialEigenSolution> {
    let (idx, peak) = solution
        .v
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .ok_or_else(|| Error::Config("empty profile".into()))?;
    if peak == 0.0 || !peak.is_finite() {
        return Err(Error::SignChange {
            r: solution.r_grid[idx],
            value: peak,
        });
    }
    let scale = 1.0 / peak;
    for x in solution.v.iter_mut().chain(solution.v_prime.iter_mut()) {
        *x *= scale;
    }
    let last = solution.v.len() - 1;
    if solution.v[last].abs() > 1e-6 {
        return Err(Error::SignChange {
            r: solution.r_grid[last],
            value: solution.v[last],
        });
    }
    solution.v[last] = 0.0;
    for (i, &x) in solution.v[..last].iter().enumerate() {
        if x < -SIGN_SLACK {
            return Err(Error::SignChange {
                r: solution.r_grid[i],
                value: x,
            });
        }
    }
    Ok(solution)
}

/// Rayleigh quotient of `cos(pi r / (2R))`, an upper bound for the first
/// eigenvalue.
pub fn trial_rayleigh_quotient(model: &ModelManifold) -> Result<f64> {
    let radius = model.radius();
    let k = std::f64::consts::FRAC_PI_2 / radius;
    let num = adaptive_simpson(
        |r| {
            let s = (k * r).sin();
            k * k * s * s * model.density(r)
        },
        0.0,
        radius,
        1e-12,
    )?;
    let den = adaptive_simpson(
        |r| {
            let c = (k * r).cos();
            c * c * model.density(r)
        },
        0.0,
        radius,
        1e-12,
    )?;
    if !(den > 0.0) {
        return Err(Error::InvalidModel("trial function has zero weighted norm".into()));
    }
    Ok(num / den)
}
