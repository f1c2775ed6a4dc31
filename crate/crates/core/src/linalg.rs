//! Tridiagonal solves.

use crate::error::{Error, Result};

/// Solves `T x = rhs` for the tridiagonal `T` with sub-diagonal `sub`
/// (`sub[i]` couples rows `i + 1` and `i`), diagonal `diag` and
/// super-diagonal `sup`, by the Thomas algorithm without pivoting.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    debug_assert!(rhs.len() == n && sub.len() + 1 >= n && sup.len() + 1 >= n);
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::IndefiniteDiscretization { row: 0, pivot });
    }
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        c[i - 1] = sup[i - 1] / pivot;
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::IndefiniteDiscretization { row: i, pivot });
        }
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Factorization `T = L D L^T` of a symmetric tridiagonal Stieltjes matrix
/// given by its coupling magnitudes `c` (`T[i][i+1] = -c[i]`) and row sums
/// `s`, so that `T[i][i] = c[i-1] + c[i] + s[i]`.
///
/// Pivots are carried as `d[i] = c[i] + e[i]` with the excess `e` updated by
/// `e[i] = s[i] + c[i-1] e[i-1] / (c[i-1] + e[i-1])`. Every operation is on
/// nonnegative numbers, so the pivots (and the smallest eigenvalue) keep
/// full relative accuracy however fine the grid.
#[derive(Debug, Clone)]
pub struct StieltjesFactor {
    coupling: Vec<f64>,
    d: Vec<f64>,
}

impl StieltjesFactor {
    pub fn new(coupling: &[f64], row_sums: &[f64]) -> Result<Self> {
        let n = row_sums.len();
        debug_assert_eq!(coupling.len() + 1, n);
        let mut d = vec![0.0; n];
        let mut excess = 0.0;
        for i in 0..n {
            let right = if i + 1 < n { coupling[i] } else { 0.0 };
            if !(right >= 0.0) || !(row_sums[i] >= 0.0) {
                return Err(Error::IndefiniteDiscretization {
                    row: i,
                    pivot: right.min(row_sums[i]),
                });
            }
            excess = if i == 0 {
                row_sums[0]
            } else {
                let c = coupling[i - 1];
                row_sums[i] + c * excess / (c + excess)
            };
            d[i] = right + excess;
            if !(d[i] > 0.0) || !d[i].is_finite() {
                return Err(Error::IndefiniteDiscretization { row: i, pivot: d[i] });
            }
        }
        Ok(Self {
            coupling: coupling.to_vec(),
            d,
        })
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.d.len();
        for i in 1..n {
            x[i] += self.coupling[i - 1] / self.d[i - 1] * x[i - 1];
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n - 1).rev() {
            x[i] += self.coupling[i] / self.d[i] * x[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matvec(sub: &[f64], diag: &[f64], sup: &[f64], x: &[f64]) -> Vec<f64> {
        (0..diag.len())
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i > 0 {
                    v += sub[i - 1] * x[i - 1];
                }
                if i + 1 < diag.len() {
                    v += sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn thomas_solves_general_system() {
        let sub = [1.0, -2.0, 0.5];
        let diag = [4.0, 5.0, 6.0, 3.0];
        let sup = [2.0, 1.0, -1.0];
        let x = [1.0, -2.0, 3.0, 0.5];
        let rhs = matvec(&sub, &diag, &sup, &x);
        let got = solve_tridiagonal(&sub, &diag, &sup, &rhs).unwrap();
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn stieltjes_solves_and_rejects_singular() {
        let coupling = [1.0, 2.0, 0.5];
        let row_sums = [0.0, 0.25, 0.0, 1.0];
        let diag: Vec<f64> = (0..4)
            .map(|i| {
                let l = if i > 0 { coupling[i - 1] } else { 0.0 };
                let r = if i < 3 { coupling[i] } else { 0.0 };
                l + r + row_sums[i]
            })
            .collect();
        let off: Vec<f64> = coupling.iter().map(|c| -c).collect();
        let f = StieltjesFactor::new(&coupling, &row_sums).unwrap();
        let x = [0.3, -1.0, 2.0, 4.0];
        let mut b = matvec(&off, &diag, &off, &x);
        f.solve_in_place(&mut b);
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-13);
        }
        // Zero row sums everywhere: constants are in the kernel.
        assert!(StieltjesFactor::new(&[1.0, 1.0], &[0.0, 0.0, 0.0]).is_err());
        assert!(StieltjesFactor::new(&[-1.0], &[1.0, 1.0]).is_err());
    }
}
