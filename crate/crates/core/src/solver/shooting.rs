use super::{normalize, trial_rayleigh_quotient, Method, RadialEigenSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::model::ModelManifold;

/// Largest `h |drift|` allowed in one RK4 step; keeps the `(n-1)/r` term
/// well inside the stability region.
const MAX_DRIFT_STEP: f64 = 0.5;
/// Geometric growth of the step while leaving the pole.
const POLE_STEP_RATIO: f64 = 0.25;
const MAX_DOUBLINGS: usize = 64;

struct Trajectory {
    u: Vec<f64>,
    du: Vec<f64>,
}

impl Trajectory {
    /// `u` vanishes somewhere in `(0, R]`, i.e. `lambda` is at or above the
    /// first eigenvalue (Sturm comparison).
    fn has_zero(&self) -> bool {
        self.u[1..].iter().any(|&x| x <= 0.0)
    }

    fn boundary_value(&self) -> f64 {
        *self.u.last().unwrap()
    }
}

fn rk4_step(model: &ModelManifold, lambda: f64, r: f64, h: f64, u: f64, du: f64) -> (f64, f64) {
    let rhs = |r: f64, u: f64, du: f64| (du, -model.drift(r) * du - lambda * u);
    let (k1u, k1d) = rhs(r, u, du);
    let (k2u, k2d) = rhs(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d);
    let (k3u, k3d) = rhs(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d);
    let (k4u, k4d) = rhs(r + h, u + h * k3u, du + h * k3d);
    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        du + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
    )
}

fn integrate(model: &ModelManifold, lambda: f64, intervals: usize, eps: f64) -> Trajectory {
    let radius = model.radius();
    let h = radius / intervals as f64;
    let n = f64::from(model.dimension());
    let mut u_out = Vec::with_capacity(intervals + 1);
    let mut du_out = Vec::with_capacity(intervals + 1);
    u_out.push(1.0);
    du_out.push(0.0);

    // Regular solution near the pole: u = 1 - lambda r^2 / (2n) + O(r^4).
    let eps = eps.min(0.5 * h);
    let mut r = eps;
    let mut u = 1.0 - lambda * eps * eps / (2.0 * n);
    let mut du = -lambda * eps / n;
    while r < h {
        let step = (POLE_STEP_RATIO * r).min(h - r);
        (u, du) = rk4_step(model, lambda, r, step, u, du);
        r += step;
    }
    u_out.push(u);
    du_out.push(du);

    for i in 1..intervals {
        let r0 = i as f64 * h;
        let r1 = (i + 1) as f64 * h;
        let stiffness = model.drift(r0).abs().max(model.drift(r1).abs()) * h;
        let substeps = ((stiffness / MAX_DRIFT_STEP).ceil() as usize).max(1);
        let dh = h / substeps as f64;
        for s in 0..substeps {
            (u, du) = rk4_step(model, lambda, r0 + s as f64 * dh, dh, u, du);
        }
        u_out.push(u);
        du_out.push(du);
    }
    Trajectory {
        u: u_out,
        du: du_out,
    }
}

/// Shooting from the pole with RK4 and bisection on the Sturm zero count.
///
/// The bracket starts at the Rayleigh quotient of `cos(pi r / (2R))` and is
/// doubled until the trajectory acquires a zero, so the first eigenvalue is
/// the one captured.
pub fn solve_shooting(model: &ModelManifold, config: &SolverConfig) -> Result<RadialEigenSolution> {
    config.validate()?;
    let intervals = config.grid_points;
    let radius = model.radius();
    let eps = config.pole_offset.unwrap_or(1e-8 * radius);

    let mut lo = 0.0;
    let mut hi = trial_rayleigh_quotient(model)?;
    let mut doublings = 0;
    while !integrate(model, hi, intervals, eps).has_zero() {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::BracketFailure(hi));
        }
    }

    let mut iterations = 0;
    while hi - lo > config.tolerance * hi {
        iterations += 1;
        if iterations > config.max_iterations {
            return Err(Error::NoConvergence(config.max_iterations));
        }
        let mid = 0.5 * (lo + hi);
        if integrate(model, mid, intervals, eps).has_zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Secant step on u(R) inside the final bracket.
    let u_lo = integrate(model, lo, intervals, eps).boundary_value();
    let u_hi = integrate(model, hi, intervals, eps).boundary_value();
    let lambda = if u_lo > 0.0 && u_hi <= 0.0 && u_lo > u_hi {
        lo + (hi - lo) * u_lo / (u_lo - u_hi)
    } else {
        0.5 * (lo + hi)
    };

    let traj = integrate(model, lambda, intervals, eps);
    let r_grid = (0..=intervals)
        .map(|i| radius * i as f64 / intervals as f64)
        .collect();
    normalize(RadialEigenSolution {
        lambda,
        r_grid,
        v: traj.u,
        v_prime: traj.du,
        in_diameter: model.in_diameter(),
        method: Method::Shooting,
        dimension: model.dimension(),
    })
}
