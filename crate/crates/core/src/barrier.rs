//! The barrier function
//!
//! ```text
//! xi(t) = (cos^2 t + 2 t sin t cos t + t^2 - pi^2/4) / cos^2 t,   |t| <= pi/2
//! ```
//!
//! and the test function `z = 1 + delta * xi`.
//!
//! The quotient is `0/0` at `|t| = pi/2`. Inside `|t| <= pi/2 - ENDPOINT_BAND`
//! the closed form is used; outside it, a Taylor series in
//! `s = pi/2 - |t|` whose coefficients are generated once by dividing the
//! numerator series by the series of `sin^2 s`.
//!
//! Derivatives come by two independent routes:
//!
//! * [`xi_derivatives`]: `xi'` from its closed form, `xi''` from the
//!   second-order ODE and `xi'''` from the ODE satisfied by `q = xi'`.
//! * [`xi_jet`]: all derivatives through order five by exact
//!   differentiation of `xi = 1 + 2 t tan t + (t^2 - pi^2/4) sec^2 t`,
//!   viewed as a polynomial in `t` and `tan t`.
//!
//! The residual functions evaluate the identities with the jet route so they
//! do not merely echo the ODE route back.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::integrate_with_breaks;

/// Width of the band next to `|t| = pi/2` evaluated by the endpoint series.
pub const ENDPOINT_BAND: f64 = 0.1;

/// `pi^2 / 4`.
const QUARTER_PI_SQ: f64 = PI * PI / 4.0;

/// Highest power kept in the endpoint series. The series converges for
/// `s < pi`, so at `s = 0.1` the truncation error is far below rounding.
const SERIES_ORDER: usize = 40;

/// [`xi_jet`] switches to the series this far from the endpoints, where the
/// tangent form starts losing digits in its higher derivatives.
const JET_SERIES_BAND: f64 = 0.5;

/// Highest derivative carried by [`XiJet`].
pub const JET_ORDER: usize = 5;

/// `xi(0) = 1 - pi^2/4`, the minimum of `xi`.
pub const XI_AT_ZERO: f64 = 1.0 - QUARTER_PI_SQ;

fn check_domain(t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > FRAC_PI_2 * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Domain(t));
    }
    Ok(t.clamp(-FRAC_PI_2, FRAC_PI_2))
}

fn in_endpoint_band(t: f64) -> bool {
    t.abs() > FRAC_PI_2 - ENDPOINT_BAND
}

// --- endpoint series -------------------------------------------------------

/// Coefficients `a_k` with `xi = sum_k a_k s^k`, `s = pi/2 - |t|`.
fn series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // With s = pi/2 - t:
        //   numerator = sin^2 s + (pi/2 - s) sin 2s + s^2 - pi s,
        //   denominator = sin^2 s.
        // Both vanish to second order; divide by s^2 first.
        let m = SERIES_ORDER + 3;
        let mut factorial = vec![1.0f64; m + 1];
        for k in 1..=m {
            factorial[k] = factorial[k - 1] * k as f64;
        }
        let mut sin_sq = vec![0.0; m + 1];
        let mut sin_2s = vec![0.0; m + 1];
        for k in 1..=m {
            if k % 2 == 0 {
                let j = (k / 2) as i32;
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sin_sq[k] = sign * 2f64.powi(k as i32 - 1) / factorial[k];
            } else {
                let j = ((k - 1) / 2) as i32;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sin_2s[k] = sign * 2f64.powi(k as i32) / factorial[k];
            }
        }
        let mut numer = vec![0.0; m + 1];
        for k in 0..=m {
            numer[k] += sin_sq[k] + FRAC_PI_2 * sin_2s[k];
            if k >= 1 {
                numer[k] -= sin_2s[k - 1];
            }
        }
        numer[2] += 1.0;
        numer[1] -= PI;

        let num: Vec<f64> = numer[2..].to_vec();
        let den: Vec<f64> = sin_sq[2..].to_vec();
        let mut out = vec![0.0; SERIES_ORDER + 1];
        for k in 0..=SERIES_ORDER {
            let mut acc = num[k];
            for j in 1..=k {
                acc -= den[j] * out[k - j];
            }
            out[k] = acc / den[0];
        }
        // The constant and linear numerator terms cancel exactly; keep the
        // constant coefficient at its exact value of zero.
        out[0] = 0.0;
        out
    })
}

/// Derivatives `d^j/ds^j` of the endpoint series at `s`, `j = 0..=JET_ORDER`.
fn series_in_s(s: f64) -> [f64; JET_ORDER + 1] {
    let a = series_coefficients();
    let mut out = [0.0; JET_ORDER + 1];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in (j..a.len()).rev() {
            let mut falling = 1.0;
            for i in 0..j {
                falling *= (k - i) as f64;
            }
            acc = acc * s + a[k] * falling;
        }
        *slot = acc;
    }
    out
}

/// Endpoint-series evaluation of `xi` and its derivatives in `t`.
///
/// Valid on the whole interval but accurate only near the endpoints; exposed
/// for branch-consistency checks.
pub fn xi_series(t: f64) -> Result<XiJet> {
    let t = check_domain(t)?;
    let s = (FRAC_PI_2 - t.abs()).max(0.0);
    let g = series_in_s(s);
    // d/dt = -d/ds for t >= 0; evenness mirrors the sign for t < 0.
    let sigma = if t >= 0.0 { -1.0 } else { 1.0 };
    let mut d = [0.0; JET_ORDER + 1];
    let mut factor = 1.0;
    for j in 0..=JET_ORDER {
        d[j] = factor * g[j];
        factor *= sigma;
    }
    Ok(XiJet { t, d })
}

// --- closed forms ----------------------------------------------------------

/// The closed-form quotient, without switching to the series. Loses digits
/// near `|t| = pi/2`.
pub fn xi_closed_form(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    (c * c + 2.0 * t * s * c + t * t - QUARTER_PI_SQ) / (c * c)
}

/// `q = xi'`, closed form.
pub fn q_closed_form(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    2.0 * (2.0 * t * c + t * t * s + c * c * s - QUARTER_PI_SQ * s) / (c * c * c)
}

pub fn xi(t: f64) -> Result<f64> {
    let t = check_domain(t)?;
    if in_endpoint_band(t) {
        return Ok(xi_series(t)?.d[0]);
    }
    Ok(xi_closed_form(t))
}

/// `xi` and its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEvaluation {
    pub t: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// `xi'` from its closed form, `xi''` from
/// `xi''/2 cos^2 t - xi' cos t sin t - xi = 2 cos^2 t` and `xi'''` from
/// `q''/2 cos t - 2 q' sin t - 2 q cos t = -4 sin t`.
pub fn xi_derivatives(t: f64) -> Result<XiEvaluation> {
    let t = check_domain(t)?;
    if in_endpoint_band(t) {
        let jet = xi_series(t)?;
        return Ok(XiEvaluation {
            t,
            value: jet.d[0],
            d1: jet.d[1],
            d2: jet.d[2],
            d3: jet.d[3],
        });
    }
    let (s, c) = t.sin_cos();
    let value = xi_closed_form(t);
    let d1 = q_closed_form(t);
    let d2 = 2.0 * (2.0 * c * c + value + d1 * c * s) / (c * c);
    let d3 = (4.0 * d2 * s + 4.0 * d1 * c - 8.0 * s) / c;
    Ok(XiEvaluation {
        t,
        value,
        d1,
        d2,
        d3,
    })
}

// --- tangent-polynomial route ----------------------------------------------

/// Polynomial in `t` and `T = tan t`; `coef[a][b]` multiplies `t^a T^b`.
#[derive(Clone)]
struct TanPoly {
    coef: [[f64; JET_ORDER + 4]; 3],
}

impl TanPoly {
    fn xi() -> Self {
        // xi = 1 + 2 t T + (t^2 - c)(1 + T^2)
        let mut coef = [[0.0; JET_ORDER + 4]; 3];
        coef[0][0] = 1.0 - QUARTER_PI_SQ;
        coef[2][0] = 1.0;
        coef[1][1] = 2.0;
        coef[0][2] = -QUARTER_PI_SQ;
        coef[2][2] = 1.0;
        Self { coef }
    }

    /// `d/dt` using `T' = 1 + T^2`.
    fn derivative(&self) -> Self {
        let mut out = [[0.0; JET_ORDER + 4]; 3];
        for a in 0..3 {
            for b in 0..JET_ORDER + 4 {
                let c = self.coef[a][b];
                if c == 0.0 {
                    continue;
                }
                if a > 0 {
                    out[a - 1][b] += a as f64 * c;
                }
                if b > 0 {
                    out[a][b - 1] += b as f64 * c;
                    out[a][b + 1] += b as f64 * c;
                }
            }
        }
        Self { coef: out }
    }

    fn eval(&self, t: f64, tan: f64) -> f64 {
        let mut acc = 0.0;
        for a in (0..3).rev() {
            let mut row = 0.0;
            for b in (0..JET_ORDER + 4).rev() {
                row = row * tan + self.coef[a][b];
            }
            acc = acc * t + row;
        }
        acc
    }
}

fn tan_polys() -> &'static [TanPoly; JET_ORDER + 1] {
    static POLYS: OnceLock<[TanPoly; JET_ORDER + 1]> = OnceLock::new();
    POLYS.get_or_init(|| {
        let mut v = Vec::with_capacity(JET_ORDER + 1);
        v.push(TanPoly::xi());
        for j in 1..=JET_ORDER {
            let next = v[j - 1].derivative();
            v.push(next);
        }
        v.try_into().unwrap_or_else(|_| unreachable!())
    })
}

/// `xi` and its derivatives through order [`JET_ORDER`]; `d[j]` is the
/// `j`-th derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiJet {
    pub t: f64,
    pub d: [f64; JET_ORDER + 1],
}

/// Derivatives by exact differentiation of the tangent form, and by the
/// endpoint series for `|t| > pi/2 - 0.5`.
pub fn xi_jet(t: f64) -> Result<XiJet> {
    let t = check_domain(t)?;
    if t.abs() > FRAC_PI_2 - JET_SERIES_BAND {
        return xi_series(t);
    }
    let tan = t.tan();
    let polys = tan_polys();
    let mut d = [0.0; JET_ORDER + 1];
    for (j, p) in polys.iter().enumerate() {
        d[j] = p.eval(t, tan);
    }
    Ok(XiJet { t, d })
}

// --- residuals -------------------------------------------------------------

/// Residual of an identity together with the magnitude of its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    fn from_terms(terms: &[f64]) -> Self {
        let value = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Self { value, scale }
    }

    /// `|value| / (1 + scale)`.
    pub fn relative(&self) -> f64 {
        self.value.abs() / (1.0 + self.scale)
    }
}

/// `xi''/2 cos^2 t - xi' cos t sin t - xi - 2 cos^2 t`.
pub fn xi_ode_residual(t: f64) -> Result<Residual> {
    Ok(xi_ode_terms(&xi_jet(t)?))
}

pub(crate) fn xi_ode_terms(j: &XiJet) -> Residual {
    let (s, c) = j.t.sin_cos();
    Residual::from_terms(&[
        0.5 * j.d[2] * c * c,
        -j.d[1] * c * s,
        -j.d[0],
        -2.0 * c * c,
    ])
}

/// `xi' cos t - 2 xi sin t - 4 t cos t`.
pub fn xi_identity_residual(t: f64) -> Result<Residual> {
    Ok(xi_identity_terms(&xi_jet(t)?))
}

pub(crate) fn xi_identity_terms(j: &XiJet) -> Residual {
    let (s, c) = j.t.sin_cos();
    Residual::from_terms(&[j.d[1] * c, -2.0 * j.d[0] * s, -4.0 * j.t * c])
}

/// `q''/2 cos t - 2 q' sin t - 2 q cos t + 4 sin t` with `q = xi'`.
pub fn q_ode_residual(t: f64) -> Result<Residual> {
    Ok(q_ode_terms(&xi_jet(t)?))
}

pub(crate) fn q_ode_terms(j: &XiJet) -> Residual {
    let (s, c) = j.t.sin_cos();
    Residual::from_terms(&[
        0.5 * j.d[3] * c,
        -2.0 * j.d[2] * s,
        -2.0 * j.d[1] * c,
        4.0 * s,
    ])
}

/// The equation satisfied by `q'`:
/// `cos^2/(2(1+cos^2)) q''' - 2 cos sin/(1+cos^2) q'' - 2 q' + 4/(1+cos^2)`.
pub fn q1_ode_residual(t: f64) -> Result<Residual> {
    Ok(q1_ode_terms(&xi_jet(t)?))
}

pub(crate) fn q1_ode_terms(j: &XiJet) -> Residual {
    let (s, c) = j.t.sin_cos();
    let w = 1.0 + c * c;
    Residual::from_terms(&[
        c * c / (2.0 * w) * j.d[4],
        -2.0 * c * s / w * j.d[3],
        -2.0 * j.d[2],
        4.0 / w,
    ])
}

/// The equation satisfied by `q''`.
pub fn q2_ode_residual(t: f64) -> Result<Residual> {
    Ok(q2_ode_terms(&xi_jet(t)?))
}

pub(crate) fn q2_ode_terms(j: &XiJet) -> Residual {
    let (s, c) = j.t.sin_cos();
    let c2 = c * c;
    let w = 1.0 + c2;
    let w2 = w * w;
    Residual::from_terms(&[
        c2 / (2.0 * w) * j.d[5],
        -c * s * (3.0 + 2.0 * c2) / w2 * j.d[4],
        -2.0 * (5.0 * c2 + c2 * c2) / w2 * j.d[3],
        8.0 * c * s / w2,
    ])
}

// --- test function z -------------------------------------------------------

/// Value and first two derivatives of a barrier profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZValue {
    pub z: f64,
    pub z1: f64,
    pub z2: f64,
}

/// `z = 1 + delta * xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierProfile {
    delta: f64,
}

impl BarrierProfile {
    /// `delta` may range over `[0, 1]` here; the verifier enforces the
    /// narrower admissible range.
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Config(format!("delta must lie in [0, 1], got {delta}")));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, t: f64) -> Result<ZValue> {
        let x = xi_derivatives(t)?;
        Ok(ZValue {
            z: 1.0 + self.delta * x.value,
            z1: self.delta * x.d1,
            z2: self.delta * x.d2,
        })
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(1.0 + self.delta * xi(t)?)
    }

    /// `z(0) = 1 - (pi^2/4 - 1) delta`, the minimum of `z`.
    pub fn minimum(&self) -> f64 {
        1.0 + self.delta * XI_AT_ZERO
    }

    /// Residual of `z''/2 cos^2 t - z' cos t sin t - z = -1 + 2 delta cos^2 t`.
    pub fn ode_residual(&self, t: f64) -> Result<Residual> {
        let x = xi_jet(t)?;
        let zv = ZValue {
            z: 1.0 + self.delta * x.d[0],
            z1: self.delta * x.d[1],
            z2: self.delta * x.d[2],
        };
        Ok(barrier_ode_residual(x.t, zv, self.delta))
    }

    /// `int_0^{pi/2} z dt`, analytically `(pi/2)(1 - delta)`.
    pub fn integral(&self, tol: f64) -> Result<f64> {
        Ok(FRAC_PI_2 + self.delta * xi_integral_tol(0.0, FRAC_PI_2, tol)?)
    }

    /// `int_0^{pi/2} dt / sqrt(z)`.
    pub fn inverse_sqrt_integral(&self, tol: f64) -> Result<f64> {
        if self.minimum() <= 0.0 {
            return Err(Error::NonPositiveBarrier(self.minimum()));
        }
        integrate_with_breaks(
            |t| 1.0 / (1.0 + self.delta * xi(t).unwrap_or(f64::NAN)).sqrt(),
            0.0,
            FRAC_PI_2,
            &[FRAC_PI_2 - ENDPOINT_BAND],
            tol,
        )
    }
}

pub fn z_eval(t: f64, delta: f64) -> Result<ZValue> {
    BarrierProfile::new(delta)?.eval(t)
}

pub fn z_ode_residual(t: f64, delta: f64) -> Result<Residual> {
    BarrierProfile::new(delta)?.ode_residual(t)
}

/// Residual of the barrier ODE for an arbitrary profile value `zv` at `t`.
pub fn barrier_ode_residual(t: f64, zv: ZValue, delta: f64) -> Residual {
    let (s, c) = t.sin_cos();
    Residual::from_terms(&[
        0.5 * zv.z2 * c * c,
        -zv.z1 * c * s,
        -zv.z,
        1.0,
        -2.0 * delta * c * c,
    ])
}

/// `z''/2 cos^2 t0 - z' cos t0 sin t0 - z + 1 - 2 delta cos^2 t0`.
///
/// At a contact point of an admissible barrier with the gradient function
/// this quantity is nonnegative. It vanishes identically along
/// `z = 1 + delta xi`, and a positive constant offset `P` shifts it to `-P`.
pub fn barrier_inequality_rhs(t0: f64, z: f64, z1: f64, z2: f64, delta: f64) -> Result<f64> {
    let t0 = check_domain(t0)?;
    if !(z > 0.0) {
        return Err(Error::NonPositiveBarrier(z));
    }
    let (s, c) = t0.sin_cos();
    Ok(0.5 * z2 * c * c - z1 * c * s - z + 1.0 - 2.0 * delta * c * c)
}

// --- integral --------------------------------------------------------------

/// Absolute tolerance used by [`xi_integral`].
pub const XI_INTEGRAL_TOL: f64 = 1e-10;

/// `int_a^b xi dt` by adaptive Simpson, split where the evaluation branch
/// changes.
pub fn xi_integral(a: f64, b: f64) -> Result<f64> {
    xi_integral_tol(a, b, XI_INTEGRAL_TOL)
}

pub fn xi_integral_tol(a: f64, b: f64, tol: f64) -> Result<f64> {
    let (a, b) = match (check_domain(a), check_domain(b)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Err(Error::BadInterval { a, b }),
    };
    if a > b {
        return Err(Error::BadInterval { a, b });
    }
    let edge = FRAC_PI_2 - ENDPOINT_BAND;
    integrate_with_breaks(|t| xi(t).unwrap_or(f64::NAN), a, b, &[-edge, 0.0, edge], tol)
}
