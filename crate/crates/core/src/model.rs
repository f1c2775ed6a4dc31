//! Rotationally symmetric manifolds with boundary.
//!
//! A model is the ball `r <= R` in the metric `dr^2 + f(r)^2 g_{S^{n-1}}`
//! with `f(0) = 0`, `f'(0) = 1`. Its boundary is the sphere `r = R`, so the
//! in-diameter is `2R`. The interval `[0, L]` is handled as the
//! one-dimensional ball of radius `L / 2` centred at its midpoint.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::linalg::solve_tridiagonal;

/// Grid used when scanning `(0, R]` for the Ricci infimum.
pub const RICCI_SCAN_POINTS: usize = 4096;

/// Radial warping function `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Warp {
    /// `sin(sqrt(K) r) / sqrt(K)`, the round sphere of curvature `K`.
    Sine { curvature: f64 },
    /// `sinh(a r) / a`, hyperbolic space of curvature `-a^2`.
    Sinh { scale: f64 },
    /// `f(r) = r`, flat space.
    Identity,
    /// `f(r) = r + sum_k c_k r^k`; `higher[0]` multiplies `r^2`.
    Polynomial { higher: Vec<f64> },
    /// Cubic spline through values on a uniform grid of `[0, R]`.
    Sampled(SampledWarp),
}

impl Warp {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Warp::Sine { curvature } => {
                let a = curvature.sqrt();
                (a * r).sin() / a
            }
            Warp::Sinh { scale } => (scale * r).sinh() / scale,
            Warp::Identity => r,
            Warp::Polynomial { higher } => r + poly_tail(higher, r, 0),
            Warp::Sampled(s) => s.eval(r).0,
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Warp::Sine { curvature } => (curvature.sqrt() * r).cos(),
            Warp::Sinh { scale } => (scale * r).cosh(),
            Warp::Identity => 1.0,
            Warp::Polynomial { higher } => 1.0 + poly_tail(higher, r, 1),
            Warp::Sampled(s) => s.eval(r).1,
        }
    }

    /// Second derivative. Sampled warps use a central difference with step
    /// `h`; the closed forms ignore `h`.
    pub fn second_derivative(&self, r: f64, h: f64) -> f64 {
        match self {
            Warp::Sine { curvature } => {
                let a = curvature.sqrt();
                -a * (a * r).sin()
            }
            Warp::Sinh { scale } => scale * (scale * r).sinh(),
            Warp::Identity => 0.0,
            Warp::Polynomial { higher } => poly_tail(higher, r, 2),
            Warp::Sampled(s) => {
                (s.eval(r + h).0 - 2.0 * s.eval(r).0 + s.eval(r - h).0) / (h * h)
            }
        }
    }

    fn has_closed_form(&self) -> bool {
        !matches!(self, Warp::Sampled(_))
    }
}

/// `d^m/dr^m sum_i c_i r^(i+2)`.
fn poly_tail(higher: &[f64], r: f64, m: i32) -> f64 {
    higher
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let k = i as i32 + 2;
            if k < m {
                return 0.0;
            }
            let falling: f64 = (0..m).map(|j| f64::from(k - j)).product();
            c * falling * r.powi(k - m)
        })
        .sum()
}

/// Cubic spline warp.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWarp {
    radius: f64,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    moments: Vec<f64>,
}

impl SampledWarp {
    /// `values[j]` is `f(j R / m)` with `m = values.len() - 1`.
    pub fn new(radius: f64, values: Vec<f64>) -> Result<Self> {
        require_positive("R", radius)?;
        if values.len() < 4 {
            return Err(Error::InvalidModel(
                "sampled warp needs at least 4 values".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("sampled warp has non-finite values".into()));
        }
        let m = values.len() - 1;
        let h = radius / m as f64;
        // f''(0) = 0 at the pole (odd warp); not-a-knot at r = R, which
        // reduces the last row to h M_{m-1} = rhs_{m-1}.
        let mut moments = vec![0.0; m + 1];
        let k = m - 1;
        let sub = vec![h / 6.0; k];
        let mut diag = vec![2.0 * h / 3.0; k];
        let mut sup = vec![h / 6.0; k];
        diag[k - 1] = h;
        let mut sub_adj = sub;
        sub_adj[k - 2] = 0.0;
        sup[k - 1] = 0.0;
        let rhs: Vec<f64> = (1..m)
            .map(|i| (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h)
            .collect();
        let inner = solve_tridiagonal(&sub_adj, &diag, &sup, &rhs)?;
        moments[1..m].copy_from_slice(&inner);
        moments[m] = 2.0 * moments[m - 1] - moments[m - 2];
        Ok(Self {
            radius,
            values,
            moments,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Value and first derivative; the end cubics extend past `[0, R]`.
    fn eval(&self, r: f64) -> (f64, f64) {
        let m = self.values.len() - 1;
        let h = self.radius / m as f64;
        let i = ((r / h).floor().max(0.0) as usize).min(m - 1);
        let x0 = i as f64 * h;
        let a = (x0 + h - r) / h;
        let b = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0
            + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        (value, slope)
    }
}

/// A rotationally symmetric manifold with boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelManifold {
    /// Geodesic ball of radius `R < pi / sqrt(K)` in the round `n`-sphere of
    /// curvature `K`.
    SphericalCap { n: u32, k: f64, radius: f64 },
    EuclideanBall { n: u32, radius: f64 },
    WarpedBall { n: u32, warp: Warp, radius: f64 },
    /// `[0, L]` with Dirichlet conditions at both ends.
    Interval { length: f64 },
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

impl ModelManifold {
    pub fn spherical_cap(n: u32, k: f64, radius: f64) -> Result<Self> {
        check_dimension(n)?;
        require_positive("K", k)?;
        require_positive("R", radius)?;
        let limit = PI / k.sqrt();
        if radius >= limit {
            return Err(Error::InvalidModel(format!(
                "cap radius R = {radius} must be below pi/sqrt(K) = {limit}"
            )));
        }
        Ok(Self::SphericalCap { n, k, radius })
    }

    /// The hemisphere, the largest cap with mean-convex boundary.
    pub fn hemisphere(n: u32, k: f64) -> Result<Self> {
        require_positive("K", k)?;
        Self::spherical_cap(n, k, std::f64::consts::FRAC_PI_2 / k.sqrt())
    }

    pub fn euclidean_ball(n: u32, radius: f64) -> Result<Self> {
        check_dimension(n)?;
        require_positive("R", radius)?;
        Ok(Self::EuclideanBall { n, radius })
    }

    pub fn warped_ball(n: u32, warp: Warp, radius: f64) -> Result<Self> {
        check_dimension(n)?;
        require_positive("R", radius)?;
        match &warp {
            Warp::Sine { curvature } => {
                require_positive("K", *curvature)?;
            }
            Warp::Sinh { scale } => {
                require_positive("warp_scale", *scale)?;
            }
            Warp::Polynomial { higher } => {
                if higher.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidModel("non-finite polynomial coefficient".into()));
                }
            }
            Warp::Sampled(s) => {
                if (s.radius() - radius).abs() > 1e-12 * radius {
                    return Err(Error::InvalidModel(
                        "sampled warp radius differs from model radius".into(),
                    ));
                }
                if s.values[0].abs() > 1e-12 * radius {
                    return Err(Error::InvalidModel("sampled warp must vanish at r = 0".into()));
                }
                let slope = s.eval(0.0).1;
                if (slope - 1.0).abs() > 1e-3 {
                    return Err(Error::InvalidModel(format!(
                        "sampled warp must have unit slope at the pole, got {slope}"
                    )));
                }
            }
            Warp::Identity => {}
        }
        // Positivity on (0, R].
        for i in 1..=RICCI_SCAN_POINTS {
            let r = radius * i as f64 / RICCI_SCAN_POINTS as f64;
            let f = warp.value(r);
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "warp must be positive on (0, R]; f({r}) = {f}"
                )));
            }
        }
        Ok(Self::WarpedBall { n, warp, radius })
    }

    pub fn interval(length: f64) -> Result<Self> {
        require_positive("L", length)?;
        Ok(Self::Interval { length })
    }

    pub fn dimension(&self) -> u32 {
        match self {
            Self::SphericalCap { n, .. }
            | Self::EuclideanBall { n, .. }
            | Self::WarpedBall { n, .. } => *n,
            Self::Interval { .. } => 1,
        }
    }

    /// Radius of the ball; half the length for an interval.
    pub fn radius(&self) -> f64 {
        match self {
            Self::SphericalCap { radius, .. }
            | Self::EuclideanBall { radius, .. }
            | Self::WarpedBall { radius, .. } => *radius,
            Self::Interval { length } => 0.5 * length,
        }
    }

    pub fn in_diameter(&self) -> f64 {
        2.0 * self.radius()
    }

    /// Intrinsic diameter.
    pub fn diameter(&self) -> f64 {
        match self {
            Self::SphericalCap { k, radius, .. } => (2.0 * radius).min(PI / k.sqrt()),
            _ => 2.0 * self.radius(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::SphericalCap { .. } => "cap",
            Self::EuclideanBall { .. } => "ball",
            Self::WarpedBall { .. } => "warped",
            Self::Interval { .. } => "interval",
        }
    }

    /// Curvature constant for caps; `None` for the other variants.
    pub fn cap_curvature(&self) -> Option<f64> {
        match self {
            Self::SphericalCap { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn warp(&self) -> Warp {
        match self {
            Self::SphericalCap { k, .. } => Warp::Sine { curvature: *k },
            Self::EuclideanBall { .. } | Self::Interval { .. } => Warp::Identity,
            Self::WarpedBall { warp, .. } => warp.clone(),
        }
    }

    /// Warp value; identically one for the interval.
    pub fn f(&self, r: f64) -> f64 {
        match self {
            Self::SphericalCap { k, .. } => {
                let a = k.sqrt();
                (a * r).sin() / a
            }
            Self::EuclideanBall { .. } => r,
            Self::WarpedBall { warp, .. } => warp.value(r),
            Self::Interval { .. } => 1.0,
        }
    }

    /// Radial volume density `f^(n-1)`.
    pub fn density(&self, r: f64) -> f64 {
        match self {
            Self::Interval { .. } => 1.0,
            _ => self.f(r).powi(self.dimension() as i32 - 1),
        }
    }

    /// Drift coefficient `(n-1) f'/f` of the radial Laplacian, without
    /// range checks.
    pub(crate) fn drift(&self, r: f64) -> f64 {
        let n1 = f64::from(self.dimension() - 1);
        match self {
            Self::SphericalCap { k, .. } => {
                let a = k.sqrt();
                n1 * a / (a * r).tan()
            }
            Self::EuclideanBall { .. } => n1 / r,
            Self::WarpedBall { warp, .. } => n1 * warp.derivative(r) / warp.value(r),
            Self::Interval { .. } => 0.0,
        }
    }
}

/// `(n-1) f'(r) / f(r)` for `0 < r <= R`.
pub fn warp_log_derivative(model: &ModelManifold, r: f64) -> Result<f64> {
    if r == 0.0 && !matches!(model, ModelManifold::Interval { .. }) {
        return Err(Error::Pole(r));
    }
    if !(r >= 0.0) || r > model.radius() * (1.0 + 1e-12) {
        return Err(Error::InvalidModel(format!(
            "r = {r} outside (0, {}]",
            model.radius()
        )));
    }
    Ok(model.drift(r))
}

/// Infimum over `(0, R]` and over directions of `Ric / (n - 1)`.
///
/// Radial direction: `-f''/f`. Tangential: `(-f''/f + (n-2)(1 - f'^2)/f^2) /
/// (n - 1)`. The interval is flat and returns zero.
pub fn ricci_lower(model: &ModelManifold) -> Result<f64> {
    let n = model.dimension();
    let radius = model.radius();
    match model {
        ModelManifold::SphericalCap { k, .. } => return Ok(*k),
        ModelManifold::EuclideanBall { .. } | ModelManifold::Interval { .. } => return Ok(0.0),
        ModelManifold::WarpedBall { .. } => {}
    }
    let warp = model.warp();
    let h = radius / 4096.0;
    let n1 = f64::from(n - 1);
    let n2 = f64::from(n - 2);
    let (start, end) = if warp.has_closed_form() {
        (1, RICCI_SCAN_POINTS)
    } else {
        // Central differences need a point on each side.
        (2, RICCI_SCAN_POINTS - 1)
    };
    let mut inf = f64::INFINITY;
    for i in start..=end {
        let r = radius * i as f64 / RICCI_SCAN_POINTS as f64;
        let f = warp.value(r);
        let f1 = warp.derivative(r);
        let f2 = warp.second_derivative(r, h);
        if !warp.has_closed_form() {
            let coarse = warp.second_derivative(r, 2.0 * h);
            if (f2 - coarse).abs() > 1e-3 * (1.0 + f2.abs()) {
                return Err(Error::WarpNotSmooth(r));
            }
        }
        let radial = -f2 / f;
        let tangential = if n >= 3 {
            (-f2 / f + n2 * (1.0 - f1 * f1) / (f * f)) / n1
        } else {
            radial
        };
        if !radial.is_finite() || !tangential.is_finite() {
            return Err(Error::WarpNotSmooth(r));
        }
        inf = inf.min(radial).min(tangential);
    }
    Ok(inf)
}

/// Mean curvature `(n-1) f'(R)/f(R)` of the boundary sphere with respect to
/// the outward normal. Zero for the interval.
pub fn boundary_mean_curvature(model: &ModelManifold) -> f64 {
    match model {
        ModelManifold::Interval { .. } => 0.0,
        _ => model.drift(model.radius()),
    }
}

/// The hypothesis data needed by the bounds and the verifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hypotheses {
    pub ricci_lower: f64,
    pub mean_curvature: f64,
}

/// Slack for treating a computed mean curvature as nonnegative.
pub const MEAN_CURVATURE_SLACK: f64 = 1e-12;

impl Hypotheses {
    pub fn of(model: &ModelManifold) -> Result<Self> {
        Ok(Self {
            ricci_lower: ricci_lower(model)?,
            mean_curvature: boundary_mean_curvature(model),
        })
    }

    /// Curvature constant `K` usable in the bounds: the Ricci infimum when
    /// it is positive, otherwise zero.
    pub fn curvature_constant(&self) -> f64 {
        self.ricci_lower.max(0.0)
    }

    pub fn mean_convex(&self) -> bool {
        self.mean_curvature >= -MEAN_CURVATURE_SLACK
    }

    pub fn nonnegative_ricci(&self) -> bool {
        self.ricci_lower >= 0.0
    }

    /// Positive Ricci lower bound and mean-convex boundary.
    pub fn positive_curvature_theorem(&self) -> bool {
        self.ricci_lower > 0.0 && self.mean_convex()
    }
}
