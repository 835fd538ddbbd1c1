use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::graph::LinearOperator;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Dense,
    Tridiagonal,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalues {
    /// Ascending, with multiplicity.
    pub values: Vec<f64>,
    /// `‖Hx - λx‖` for a unit vector `x` attached to each value.
    pub residuals: Option<Vec<f64>>,
    /// Only extremal values were computed.
    pub partial: bool,
    pub solver: SolverKind,
}

/// Eigenvalues of a self-adjoint operator.
///
/// Up to `limits.dense_cap` the full spectrum is computed densely. Larger
/// tridiagonal operators go through implicit QL; anything else gets the two
/// extremal Ritz values of a Lanczos run and is flagged partial.
pub fn eigenvalues_selfadjoint(h: &LinearOperator, limits: &Limits) -> Result<Eigenvalues> {
    if !h.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    let n = h.dim();
    if n <= limits.dense_cap {
        let (values, vectors) = eigenpairs_selfadjoint(h, limits)?;
        let residuals = (0..n)
            .map(|i| {
                let x: Vec<Complex64> = vectors.column(i).iter().copied().collect();
                residual(h, values[i], &x)
            })
            .collect();
        return Ok(Eigenvalues {
            values,
            residuals: Some(residuals),
            partial: false,
            solver: SolverKind::Dense,
        });
    }
    if let Some((diag, off)) = as_tridiagonal(h) {
        return Ok(Eigenvalues {
            values: tridiagonal_eigenvalues(&diag, &off),
            residuals: None,
            partial: false,
            solver: SolverKind::Tridiagonal,
        });
    }
    let steps = n.min(300);
    let (lo, hi, residuals) = lanczos_extremal(h, steps);
    Ok(Eigenvalues {
        values: vec![lo, hi],
        residuals: Some(residuals.to_vec()),
        partial: true,
        solver: SolverKind::Lanczos,
    })
}

/// All eigenpairs, ascending; column `i` of the matrix belongs to value `i`.
pub fn eigenpairs_selfadjoint(
    h: &LinearOperator,
    limits: &Limits,
) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    if !h.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    if h.dim() > limits.dense_cap {
        return Err(Error::ResourceLimit(format!(
            "dense eigensolver capped at dimension {}, got {}",
            limits.dense_cap,
            h.dim()
        )));
    }
    let (values, vectors) = match h.to_dense_real() {
        Some(real) => {
            let eig = SymmetricEigen::new(real);
            (
                eig.eigenvalues.iter().copied().collect::<Vec<f64>>(),
                eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
            )
        }
        None => {
            let eig = SymmetricEigen::new(h.to_dense());
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let columns: Vec<_> = order
        .iter()
        .map(|&i| vectors.column(i).into_owned())
        .collect();
    let matrix = if columns.is_empty() {
        DMatrix::zeros(0, 0)
    } else {
        DMatrix::from_columns(&columns)
    };
    Ok((sorted, matrix))
}

fn residual(h: &LinearOperator, lambda: f64, x: &[Complex64]) -> f64 {
    h.apply(x)
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Real symmetric tridiagonal form `(diagonal, off-diagonal)`, when `h` has
/// one. Hermitian off-diagonals are replaced by their moduli, a diagonal
/// unitary change of basis.
pub fn as_tridiagonal(h: &LinearOperator) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = h.dim();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for (i, row) in h.rows().iter().enumerate() {
        for &(j, z) in row {
            match j as isize - i as isize {
                0 if z.im == 0.0 => diag[i] = z.re,
                1 => off[i] = z.norm(),
                -1 => {}
                _ => return None,
            }
        }
    }
    Some((diag, off))
}

/// Implicit QL with Wilkinson-type shifts on `(d, e)`, `e[i]` coupling `i`
/// and `i + 1`. Rotations are accumulated into the row-major `z` when given.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            assert!(iterations <= 100, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let t = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * t;
                        z[k * n + i] = c * z[k * n + i] - s * t;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

fn padded(diag: &[f64], off: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert!(
        off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
        "off-diagonal must be one shorter than the diagonal"
    );
    let mut e = off.to_vec();
    e.push(0.0);
    (diag.to_vec(), e)
}

/// Ascending eigenvalues of the symmetric tridiagonal matrix.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let (mut d, mut e) = padded(diag, off);
    tql(&mut d, &mut e, None);
    d.sort_by(f64::total_cmp);
    d
}

/// Ascending eigenvalues with unit eigenvectors (`vectors[i]` for value
/// `i`). Cubic cost; meant for small matrices.
pub fn tridiagonal_eigenpairs(diag: &[f64], off: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (mut d, mut e) = padded(diag, off);
    let n = d.len();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut z));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| z[k * n + i]).collect())
        .collect();
    (values, vectors)
}

/// Solves `(T - shift) x = b` by Gaussian elimination with partial pivoting;
/// zero pivots are replaced by `tiny`.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &mut [f64], tiny: f64) {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    let mut du = off.to_vec();
    let dl = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let nonzero = |x: f64| if x == 0.0 { tiny } else { x };
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            d[i] = nonzero(d[i]);
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if n == 0 {
        return;
    }
    d[n - 1] = nonzero(d[n - 1]);
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

fn tridiagonal_apply(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += off[i] * x[i + 1];
            }
            s
        })
        .collect()
}

/// `‖Tx - λx‖` for an inverse-iteration vector `x` of each value.
pub fn tridiagonal_residuals(diag: &[f64], off: &[f64], values: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off)
        .map(|x| x.abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let tiny = f64::EPSILON * scale;
    values
        .iter()
        .map(|&lambda| {
            let mut x: Vec<f64> = (0..n)
                .map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0)
                .collect();
            for _ in 0..3 {
                solve_shifted(diag, off, lambda, &mut x, tiny);
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if !norm.is_finite() || norm == 0.0 {
                    return f64::INFINITY;
                }
                x.iter_mut().for_each(|v| *v /= norm);
            }
            tridiagonal_apply(diag, off, &x)
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Lanczos with full reorthogonalization from a fixed start vector.
/// Returns the extreme Ritz values and their residual estimates
/// `β_m |y_m|`.
pub fn lanczos_extremal(h: &LinearOperator, steps: usize) -> (f64, f64, [f64; 2]) {
    let n = h.dim();
    let steps = steps.clamp(1, n.max(1));
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(steps);
    let mut start: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i % 7) as f64 / 7.0, 0.0))
        .collect();
    let norm = start.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    start.iter_mut().for_each(|z| *z /= norm);
    q.push(start);
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last_beta = 0.0;
    for j in 0..steps {
        let mut w = h.apply(&q[j]);
        let a: Complex64 = q[j].iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
        alpha.push(a.re);
        // two passes of classical Gram-Schmidt against every basis vector
        for _ in 0..2 {
            for qi in &q {
                let c: Complex64 = qi.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                w.iter_mut().zip(qi).for_each(|(y, x)| *y -= c * x);
            }
        }
        let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        last_beta = b;
        if j + 1 == steps || b < 1e-12 {
            break;
        }
        beta.push(b);
        q.push(w.into_iter().map(|z| z / b).collect());
    }
    let (values, vectors) = tridiagonal_eigenpairs(&alpha, &beta);
    let m = values.len();
    let estimate = |i: usize| last_beta * vectors[i][m - 1].abs();
    (values[0], values[m - 1], [estimate(0), estimate(m - 1)])
}
