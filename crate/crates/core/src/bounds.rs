//! Closed-form lower bounds for the first Dirichlet eigenvalue.
//!
//! Every bound takes the curvature constant `K` itself (the Ricci tensor is
//! bounded below by `(n - 1) K`). `K = 0` is accepted so the flat
//! degenerations can be exercised; the result then records that the
//! positive-curvature hypothesis is not met instead of failing.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{require_nonnegative, require_positive, Error, Result};

/// Dimension, curvature constant and the two diameters of a manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryData {
    pub n: u32,
    pub k: f64,
    pub diameter: Option<f64>,
    /// Twice the largest distance from an interior point to the boundary.
    pub in_diameter: Option<f64>,
}

impl GeometryData {
    pub fn new(n: u32, k: f64, diameter: Option<f64>, in_diameter: Option<f64>) -> Result<Self> {
        check_dimension(n)?;
        require_nonnegative("K", k)?;
        if let Some(d) = diameter {
            require_positive("d", d)?;
        }
        if let Some(dt) = in_diameter {
            require_positive("dtilde", dt)?;
        }
        if let (Some(d), Some(dt)) = (diameter, in_diameter) {
            if dt > d * (1.0 + 1e-12) {
                return Err(Error::InDiameterExceedsDiameter {
                    in_diameter: dt,
                    diameter: d,
                });
            }
        }
        Ok(Self {
            n,
            k,
            diameter,
            in_diameter,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Reilly,
    ZhongYang,
    Yang,
    Improved,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [
        BoundKind::Reilly,
        BoundKind::ZhongYang,
        BoundKind::Yang,
        BoundKind::Improved,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Reilly => "reilly",
            BoundKind::ZhongYang => "zhong_yang",
            BoundKind::Yang => "yang",
            BoundKind::Improved => "improved",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which hypotheses of the bound were known to hold for the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypotheses {
    pub positive_curvature: bool,
    /// `None` when the boundary mean curvature is not known.
    pub mean_convex_boundary: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value: f64,
    pub hypotheses: Hypotheses,
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// `n K`, the Lichnerowicz-type bound for mean-convex boundary.
pub fn reilly_bound(n: u32, k: f64) -> Result<f64> {
    check_dimension(n)?;
    require_nonnegative("K", k)?;
    Ok(f64::from(n) * k)
}

/// `pi^2 / d^2`.
pub fn zhong_yang_bound(diameter: f64) -> Result<f64> {
    require_positive("d", diameter)?;
    Ok(PI * PI / (diameter * diameter))
}

/// `(n - 1) K / 4 + pi^2 / dtilde^2`.
pub fn yang_bound(n: u32, k: f64, in_diameter: f64) -> Result<f64> {
    check_dimension(n)?;
    require_nonnegative("K", k)?;
    require_positive("dtilde", in_diameter)?;
    Ok(0.25 * f64::from(n - 1) * k + PI * PI / (in_diameter * in_diameter))
}

/// `(n - 1) K / 2 + pi^2 / dtilde^2`.
pub fn improved_bound(n: u32, k: f64, in_diameter: f64) -> Result<f64> {
    check_dimension(n)?;
    require_nonnegative("K", k)?;
    require_positive("dtilde", in_diameter)?;
    Ok(0.5 * f64::from(n - 1) * k + PI * PI / (in_diameter * in_diameter))
}

/// Every bound computable from `geometry`, in the order improved, yang,
/// zhong_yang, reilly.
pub fn applicable_bounds(geometry: &GeometryData) -> Result<Vec<BoundResult>> {
    let hypotheses = Hypotheses {
        positive_curvature: geometry.k > 0.0,
        mean_convex_boundary: None,
    };
    let GeometryData {
        n,
        k,
        diameter,
        in_diameter,
    } = *geometry;
    let mut out = Vec::with_capacity(4);
    let mut push = |kind, value| {
        out.push(BoundResult {
            kind,
            value,
            hypotheses,
        })
    };
    if let Some(dt) = in_diameter {
        push(BoundKind::Improved, improved_bound(n, k, dt)?);
        push(BoundKind::Yang, yang_bound(n, k, dt)?);
    }
    if let Some(d) = diameter {
        push(BoundKind::ZhongYang, zhong_yang_bound(d)?);
    }
    push(BoundKind::Reilly, reilly_bound(n, k)?);
    Ok(out)
}

/// The largest applicable bound. Ties go to `improved`.
pub fn best_bound(geometry: &GeometryData) -> Result<BoundResult> {
    if geometry.diameter.is_none() && geometry.in_diameter.is_none() {
        return Err(Error::NoApplicableBound);
    }
    let bounds = applicable_bounds(geometry)?;
    let mut best = bounds[0];
    for b in &bounds[1..] {
        if b.value > best.value {
            best = *b;
        }
    }
    Ok(best)
}

/// The ratio `delta = (n - 1) K / (2 lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub value: f64,
    /// Set when `delta > (n - 1) / (2 n)`, i.e. `lambda < n K`.
    pub exceeds_lichnerowicz_range: bool,
}

/// Upper end of the admissible `delta` range, `(n - 1) / (2 n)`.
pub fn delta_upper(n: u32) -> f64 {
    f64::from(n.saturating_sub(1)) / (2.0 * f64::from(n))
}

pub fn delta_of(lambda: f64, n: u32, k: f64) -> Result<Delta> {
    require_positive("lambda", lambda)?;
    check_dimension(n)?;
    require_nonnegative("K", k)?;
    let value = 0.5 * f64::from(n - 1) * k / lambda;
    // Exact at lambda = nK in exact arithmetic; allow rounding there.
    let limit = delta_upper(n);
    Ok(Delta {
        value,
        exceeds_lichnerowicz_range: value > limit * (1.0 + 4.0 * f64::EPSILON),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI2: f64 = PI * PI;

    #[test]
    fn reilly_examples() {
        assert_eq!(reilly_bound(2, 1.0).unwrap(), 2.0);
        assert_eq!(reilly_bound(3, 0.0).unwrap(), 0.0);
        assert_eq!(reilly_bound(5, 2.0).unwrap(), 10.0);
        assert_eq!(reilly_bound(1, 1.0), Err(Error::InvalidDimension(1)));
    }

    #[test]
    fn zhong_yang_examples() {
        assert!((zhong_yang_bound(PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((zhong_yang_bound(1.0).unwrap() - PI2).abs() < 1e-15);
        assert!((zhong_yang_bound(2.0 * PI).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(
            zhong_yang_bound(0.0),
            Err(Error::NonPositive { field: "d", .. })
        ));
    }

    #[test]
    fn yang_and_improved_examples() {
        assert!((yang_bound(2, 1.0, PI).unwrap() - 1.25).abs() < 1e-15);
        assert!((yang_bound(3, 1.0, PI).unwrap() - 1.5).abs() < 1e-15);
        assert!((yang_bound(2, 0.0, 1.0).unwrap() - PI2).abs() < 1e-15);
        assert!((improved_bound(2, 1.0, PI).unwrap() - 1.5).abs() < 1e-15);
        assert!((improved_bound(3, 1.0, PI).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            improved_bound(2, 1.0, -1.0),
            Err(Error::NonPositive {
                field: "dtilde",
                ..
            })
        ));
    }

    #[test]
    fn best_bound_examples() {
        let hemi = GeometryData::new(2, 1.0, None, Some(PI)).unwrap();
        let b = best_bound(&hemi).unwrap();
        assert_eq!(b.kind, BoundKind::Reilly);
        assert_eq!(b.value, 2.0);

        let small = GeometryData::new(2, 0.1, None, Some(1.0)).unwrap();
        let b = best_bound(&small).unwrap();
        assert_eq!(b.kind, BoundKind::Improved);
        assert!((b.value - (0.05 + PI2)).abs() < 1e-14);

        let flat = GeometryData::new(2, 0.0, Some(1.0), Some(1.0)).unwrap();
        let b = best_bound(&flat).unwrap();
        assert_eq!(b.kind, BoundKind::Improved);
        assert!((b.value - PI2).abs() < 1e-14);
        assert!(!b.hypotheses.positive_curvature);

        let none = GeometryData::new(2, 1.0, None, None).unwrap();
        assert_eq!(best_bound(&none), Err(Error::NoApplicableBound));
    }

    #[test]
    fn geometry_rejects_in_diameter_above_diameter() {
        assert!(matches!(
            GeometryData::new(2, 1.0, Some(1.0), Some(2.0)),
            Err(Error::InDiameterExceedsDiameter { .. })
        ));
    }

    #[test]
    fn delta_examples() {
        let d = delta_of(2.0, 2, 1.0).unwrap();
        assert_eq!(d.value, 0.25);
        assert!(!d.exceeds_lichnerowicz_range);

        for n in 2..9 {
            let k = 0.7;
            let d = delta_of(f64::from(n) * k, n, k).unwrap();
            assert!((d.value - delta_upper(n)).abs() < 1e-15);
            assert!(!d.exceeds_lichnerowicz_range);
        }

        let d = delta_of(1.0, 2, 1.0).unwrap();
        assert_eq!(d.value, 0.5);
        assert!(d.exceeds_lichnerowicz_range);

        assert!(matches!(
            delta_of(0.0, 2, 1.0),
            Err(Error::NonPositive {
                field: "lambda",
                ..
            })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn improved_minus_yang_is_quarter_curvature(n in 2u32..12, k in 0.0f64..10.0, dt in 0.01f64..20.0) {
                let diff = improved_bound(n, k, dt).unwrap() - yang_bound(n, k, dt).unwrap();
                let expected = 0.25 * f64::from(n - 1) * k;
                prop_assert!((diff - expected).abs() <= 1e-12 * (1.0 + improved_bound(n, k, dt).unwrap()));
                prop_assert!(improved_bound(n, k, dt).unwrap() >= yang_bound(n, k, dt).unwrap());
            }

            #[test]
            fn improved_monotone(n in 2u32..12, k in 0.01f64..10.0, dt in 0.01f64..20.0, dk in 0.001f64..1.0, dd in 0.001f64..1.0) {
                prop_assert!(improved_bound(n, k + dk, dt).unwrap() > improved_bound(n, k, dt).unwrap());
                prop_assert!(improved_bound(n, k, dt + dd).unwrap() < improved_bound(n, k, dt).unwrap());
            }

            #[test]
            fn flat_degeneration(n in 2u32..12, d in 0.01f64..20.0) {
                let zy = zhong_yang_bound(d).unwrap();
                prop_assert_eq!(yang_bound(n, 0.0, d).unwrap(), zy);
                prop_assert_eq!(improved_bound(n, 0.0, d).unwrap(), zy);
            }

            #[test]
            fn best_dominates_all(n in 2u32..12, k in 0.0f64..10.0, dt in 0.01f64..10.0, extra in 0.0f64..5.0, use_d in any::<bool>()) {
                let d = if use_d { Some(dt + extra) } else { None };
                let g = GeometryData::new(n, k, d, Some(dt)).unwrap();
                let best = best_bound(&g).unwrap();
                for b in applicable_bounds(&g).unwrap() {
                    prop_assert!(best.value >= b.value);
                }
            }
        }
    }
}
