//! Dense real-symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by the implicit QL algorithm with Wilkinson-type shifts.
//!
//! Results are sorted ascending and every eigenvector is normalised with its
//! largest-magnitude component positive (first such index on ties), so signs
//! of matrix elements are reproducible from run to run.

use crate::matrix::{dot, DenseMatrix};
use crate::{Error, Result};

/// Default residual tolerance for [`diagonalize`].
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_QL_ITERATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Eigenvalues in ascending order.
    pub energies: Vec<f64>,
    /// `vectors[k]` is the eigenvector belonging to `energies[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Requested residual tolerance.
    pub tol: f64,
    /// Largest achieved residual ‖H v − E v‖.
    pub max_residual: f64,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    /// max |⟨v_i|v_j⟩ − δ_ij| over all pairs.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, vi) in self.vectors.iter().enumerate() {
            for (j, vj) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(vi, vj) - target).abs());
            }
        }
        worst
    }
}

/// Full spectrum of the symmetric matrix `h`.
///
/// Fails with [`Error::Convergence`] if the QL sweep exceeds its iteration
/// budget or any residual exceeds `tol`.
pub fn diagonalize(h: &DenseMatrix, tol: f64) -> Result<EigenSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::arg(format!("tolerance must be positive, got {tol}")));
    }
    if !h.is_symmetric() {
        return Err(Error::arg("matrix is not symmetric"));
    }
    let n = h.dim();
    if n == 0 {
        return Err(Error::arg("empty matrix"));
    }

    let mut v: Vec<Vec<f64>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);

    // Columns of v become rows so the QL rotations walk contiguous memory.
    let mut z: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    drop(v);
    ql_implicit(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let energies: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors: Vec<Vec<f64>> = order.iter().map(|&k| std::mem::take(&mut z[k])).collect();

    for vec in vectors.iter_mut() {
        let norm = dot(vec, vec).sqrt();
        let mut pivot = 0;
        for (i, x) in vec.iter().enumerate() {
            if x.abs() > vec[pivot].abs() {
                pivot = i;
            }
        }
        let scale = if vec[pivot] < 0.0 { -1.0 / norm } else { 1.0 / norm };
        vec.iter_mut().for_each(|x| *x *= scale);
    }

    let max_residual = energies
        .iter()
        .zip(&vectors)
        .map(|(&ev, vec)| {
            let hv = h.mul_vec(vec);
            hv.iter().zip(vec).map(|(a, b)| (a - ev * b).powi(2)).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max);
    if max_residual > tol {
        return Err(Error::Convergence { worst_residual: max_residual });
    }

    Ok(EigenSolution { energies, vectors, tol, max_residual })
}

/// Householder reduction of the symmetric matrix in `v` (row-major rows) to
/// tridiagonal form. On return `d` is the diagonal, `e[1..]` the
/// sub-diagonal and `v` the accumulated orthogonal transformation.
fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let g: f64 = (0..=i).map(|k| v[k][i + 1] * v[k][j]).sum();
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal (d, e); `z[k]` holds eigenvector k.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::Convergence { worst_residual: e[l].abs() });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
