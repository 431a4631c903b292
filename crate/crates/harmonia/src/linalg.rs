//! Dense symmetric eigensolver and linear solve used by the quadrature,
//! kernel and harmonic-decomposition modules. Matrices here are tiny (at most
//! a few dozen rows), so plain cyclic Jacobi rotations and Gaussian
//! elimination with partial pivoting are enough.

use crate::{Error, Result};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` sorted ascending by eigenvalue; the
/// eigenvectors are the columns of the returned matrix, orthonormal to
/// working precision. The input is consumed as scratch space.
pub(crate) fn jacobi_eigen_symmetric(mut a: Vec<Vec<f64>>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    for row in &a {
        if row.len() != n {
            return Err(Error::Numeric("eigensolver needs a square matrix".into()));
        }
    }
    let mut v = vec![vec![0.0; n]; n];
    for (p, row) in v.iter_mut().enumerate() {
        row[p] = 1.0;
    }
    if n <= 1 {
        let l = if n == 1 { vec![a[0][0]] } else { vec![] };
        return Ok((l, v));
    }

    // diagonal accumulators: b tracks the settled diagonal, z the in-sweep
    // corrections (keeps the rotations numerically tame for larger matrices)
    let mut b: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let mut d = b.clone();
    let mut z = vec![0.0f64; n];
    const MAX_SWEEPS: usize = 60;

    for sweep in 1..=MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[p][q].abs();
            }
        }
        if off == 0.0 {
            sort_eigenpairs(&mut d, &mut v);
            return Ok((d, v));
        }
        let thresh = if sweep < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = 100.0 * a[p][q].abs();
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    // below machine significance relative to the diagonal
                    a[p][q] = 0.0;
                } else if a[p][q].abs() > thresh {
                    let h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        a[p][q] / h
                    } else {
                        let theta = 0.5 * h / a[p][q];
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    let h = t * a[p][q];
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a[p][q] = 0.0;
                    for j in 0..p {
                        let g = a[j][p];
                        let h = a[j][q];
                        a[j][p] = g - s * (h + g * tau);
                        a[j][q] = h + s * (g - h * tau);
                    }
                    for j in p + 1..q {
                        let g = a[p][j];
                        let h = a[j][q];
                        a[p][j] = g - s * (h + g * tau);
                        a[j][q] = h + s * (g - h * tau);
                    }
                    for j in q + 1..n {
                        let g = a[p][j];
                        let h = a[q][j];
                        a[p][j] = g - s * (h + g * tau);
                        a[q][j] = h + s * (g - h * tau);
                    }
                    for row in v.iter_mut() {
                        let g = row[p];
                        let h = row[q];
                        row[p] = g - s * (h + g * tau);
                        row[q] = h + s * (g - h * tau);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})"
    )))
}

fn sort_eigenpairs(lambda: &mut [f64], v: &mut [Vec<f64>]) {
    let n = lambda.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        lambda[i]
            .partial_cmp(&lambda[j])
            .expect("non-finite eigenvalue")
    });
    let sorted: Vec<f64> = order.iter().map(|&i| lambda[i]).collect();
    lambda.copy_from_slice(&sorted);
    for row in v.iter_mut() {
        let new_row: Vec<f64> = order.iter().map(|&i| row[i]).collect();
        *row = new_row;
    }
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Numeric("linear solve needs a square system".into()));
    }
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Numeric("singular linear system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
