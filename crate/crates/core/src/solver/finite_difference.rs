use super::{normalize, Method, RadialEigenSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::StieltjesFactor;
use crate::model::ModelManifold;
use crate::quadrature::adaptive_simpson;

/// Smallest eigenvalue of the discretized problem on `intervals` uniform
/// cells, with its eigenvector on the grid `r_i = i R / intervals`
/// (the last entry is the Dirichlet zero).
///
/// The scheme is the finite-volume form of `(w u')' + lambda w u = 0`,
/// `w = f^(n-1)`: fluxes use `w` at cell midpoints, and the pole cell
/// `[0, h/2]` carries its exact weight so that `u'(0) = 0` is built in.
pub fn fd_eigenvalue_on_grid(
    model: &ModelManifold,
    intervals: usize,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(f64, Vec<f64>)> {
    let radius = model.radius();
    let h = radius / intervals as f64;
    let unknowns = intervals;

    let flux: Vec<f64> = (0..unknowns)
        .map(|i| model.density((i as f64 + 0.5) * h))
        .collect();
    let mut mass: Vec<f64> = (0..unknowns).map(|i| h * model.density(i as f64 * h)).collect();
    let half = 0.5 * h;
    let scale = half * model.density(half);
    mass[0] = adaptive_simpson(|r| model.density(r), 0.0, half, 1e-14 * scale)?;

    if let Some((i, &w)) = flux.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(Error::IndefiniteDiscretization { row: i, pivot: w });
    }

    // Generalized problem A u = lambda M u with A a Stieltjes matrix; only
    // the last row has a nonzero row sum (the Dirichlet flux).
    let coupling: Vec<f64> = flux[..unknowns - 1].iter().map(|p| p / h).collect();
    let mut row_sums = vec![0.0; unknowns];
    row_sums[unknowns - 1] = flux[unknowns - 1] / h;
    let factor = StieltjesFactor::new(&coupling, &row_sums)?;


    // Inverse iteration in the mass inner product. The eigenvalue is read
    // off the inverse, `1 / (M y, A^{-1} M y)`, which involves no
    // cancellation when `y > 0`.
    let m_norm = |y: &[f64]| y.iter().zip(&mass).map(|(v, m)| m * v * v).sum::<f64>().sqrt();
    let k = std::f64::consts::FRAC_PI_2 / radius;
    let mut y: Vec<f64> = (0..unknowns).map(|i| (k * i as f64 * h).cos()).collect();
    let norm = m_norm(&y);
    y.iter_mut().for_each(|v| *v /= norm);
    let mut lambda = f64::INFINITY;

    for _ in 0..max_iterations {
        let my: Vec<f64> = y.iter().zip(&mass).map(|(v, m)| v * m).collect();
        let mut x = my.clone();
        factor.solve_in_place(&mut x);
        let next = 1.0 / my.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        let norm = m_norm(&x);
        y = x.into_iter().map(|v| v / norm).collect();
        let converged = (next - lambda).abs() <= tolerance * next;
        lambda = next;
        if converged {
            let mut u = y;
            u.push(0.0);
            return Ok((lambda, u));
        }
    }
    Err(Error::IterationStall(max_iterations))
}

/// Two-level Richardson extrapolation of second-order values on grids
/// `N`, `2N`, `4N`.
pub fn richardson(values: [f64; 3]) -> f64 {
    let coarse = (4.0 * values[1] - values[0]) / 3.0;
    let fine = (4.0 * values[2] - values[1]) / 3.0;
    (16.0 * fine - coarse) / 15.0
}

/// Finite-volume eigenvalue on `N`, `2N` and `4N` cells, Richardson
/// extrapolated. The profile is the finest eigenvector sampled back onto
/// the `N`-cell grid.
pub fn solve_finite_difference(
    model: &ModelManifold,
    config: &SolverConfig,
) -> Result<RadialEigenSolution> {
    config.validate()?;
    let base = config.grid_points;
    // Inner tolerance well below the extrapolated error.
    let inner_tol = (config.tolerance * 1e-2).max(1e-15);
    let mut lambdas = [0.0; 3];
    let mut finest = Vec::new();
    for (level, slot) in lambdas.iter_mut().enumerate() {
        let (lambda, u) =
            fd_eigenvalue_on_grid(model, base << level, inner_tol, config.max_iterations)?;
        *slot = lambda;
        finest = u;
    }
    let lambda = richardson(lambdas);

    let radius = model.radius();
    let fine_n = base << 2;
    let hf = radius / fine_n as f64;
    let mut fine_du = vec![0.0; fine_n + 1];
    for i in 1..fine_n {
        fine_du[i] = (finest[i + 1] - finest[i - 1]) / (2.0 * hf);
    }
    fine_du[fine_n] =
        (3.0 * finest[fine_n] - 4.0 * finest[fine_n - 1] + finest[fine_n - 2]) / (2.0 * hf);

    let r_grid = (0..=base).map(|i| radius * i as f64 / base as f64).collect();
    let v = (0..=base).map(|i| finest[4 * i]).collect();
    let v_prime = (0..=base).map(|i| fine_du[4 * i]).collect();
    normalize(RadialEigenSolution {
        lambda,
        r_grid,
        v,
        v_prime,
        in_diameter: model.in_diameter(),
        method: Method::FiniteDifference,
        dimension: model.dimension(),
    })
}
