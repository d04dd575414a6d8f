//! Symmetric eigensolvers.
//!
//! Small dense problems go through `nalgebra`'s Householder + implicit QR
//! routine. The two-body blocks use a matrix-free Lanczos iteration with full
//! reorthogonalization; its projected tridiagonal problems are solved by the
//! implicit QL routine in this module.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Eigenvalues in ascending order with their unit-norm eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Lanczos steps taken (0 for a dense solve).
    pub iterations: usize,
    /// Largest residual norm `|A y - theta y|` among the returned pairs.
    pub max_residual: f64,
}

/// Full dense eigendecomposition, sorted ascending.
pub fn dense_symmetric(matrix: DMatrix<f64>) -> Result<EigenPairs> {
    let n = matrix.nrows();
    let max_iter = 1000 * n.max(1);
    let eig = SymmetricEigen::try_new(matrix, f64::EPSILON, max_iter).ok_or(
        Error::NoConvergence {
            iterations: max_iter,
            residual: f64::NAN,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    Ok(EigenPairs {
        values,
        vectors,
        iterations: 0,
        max_residual: 0.0,
    })
}

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// `diag` has length `n`, `off[i]` couples rows `i` and `i + 1` (length
/// `n - 1`). Only the eigenvector rows listed in `rows` are accumulated;
/// the returned matrix has one row per entry of `rows` and one column per
/// eigenvalue. Eigenvalues come back sorted ascending with matching columns.
pub fn tridiagonal_ql(diag: &[f64], off: &[f64], rows: &[usize]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    let mut z = DMatrix::<f64>::zeros(rows.len(), n);
    for (r, &row) in rows.iter().enumerate() {
        z[(r, row)] = 1.0;
    }

    const MAX_SWEEPS: usize = 60;
    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        let mut sweeps = 0;
        if m > l {
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        iterations: sweeps,
                        residual: e[l].abs(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

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
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..rows.len() {
                        let zk1 = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * zk1;
                        z[(k, i)] = c * z[(k, i)] - s * zk1;
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
        d[l] += shift_total;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let z_sorted = DMatrix::from_fn(rows.len(), n, |r, c| z[(r, order[c])]);
    Ok((values, z_sorted))
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative residual target: `|A y - theta y| <= tol * max(1, |theta|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of steps between convergence checks.
    pub check_every: usize,
    pub seed: u64,
    /// Problems at or below this dimension are solved densely.
    pub dense_below: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-11,
            max_iter: 3000,
            check_every: 10,
            seed: 0x5eed_d1e1,
            dense_below: 64,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Orthogonalize `w` against every basis vector, twice.
fn reorthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
    }
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..4 {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
        reorthogonalize(basis, &mut v);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Lowest `n_wanted` eigenpairs of the symmetric operator `apply` acting on
/// vectors of length `dim`.
pub fn lanczos_lowest<F>(dim: usize, n_wanted: usize, mut apply: F, opts: &LanczosOptions) -> Result<EigenPairs>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n_wanted = n_wanted.min(dim);
    if dim == 0 || n_wanted == 0 {
        return Ok(EigenPairs {
            values: vec![],
            vectors: vec![],
            iterations: 0,
            max_residual: 0.0,
        });
    }
    if dim <= opts.dense_below {
        return dense_from_operator(dim, n_wanted, apply);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut q = random_unit(dim, &mut rng, &basis).expect("non-empty space");
    let mut w = vec![0.0; dim];
    let limit = opts.max_iter.min(dim);
    let mut last_residual = f64::INFINITY;

    loop {
        apply(&q, &mut w);
        let alpha = dot(&q, &w);
        basis.push(q);
        alphas.push(alpha);
        reorthogonalize(&basis, &mut w);
        let beta = norm(&w);
        let m = basis.len();

        let exhausted = m == limit;
        let breakdown = beta <= 1e-12 * alphas.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        if m >= n_wanted && (m.is_multiple_of(opts.check_every) || exhausted || breakdown) {
            let (theta, last_row) = tridiagonal_ql(&alphas, &betas, &[m - 1])?;
            let res: Vec<f64> = (0..n_wanted)
                .map(|k| (beta * last_row[(0, k)]).abs())
                .collect();
            last_residual = res.iter().cloned().fold(0.0, f64::max);
            let converged = (0..n_wanted).all(|k| res[k] <= opts.tol * theta[k].abs().max(1.0));
            if converged || m == dim {
                return ritz_pairs(&basis, &alphas, &betas, n_wanted, m, last_residual);
            }
            if exhausted {
                return Err(Error::NoConvergence {
                    iterations: m,
                    residual: last_residual,
                });
            }
        } else if exhausted {
            return Err(Error::NoConvergence {
                iterations: m,
                residual: last_residual,
            });
        }

        if breakdown {
            // Invariant subspace: continue in a fresh direction.
            match random_unit(dim, &mut rng, &basis) {
                Some(fresh) => {
                    betas.push(0.0);
                    q = fresh;
                }
                None => return ritz_pairs(&basis, &alphas, &betas, n_wanted, m, 0.0),
            }
        } else {
            betas.push(beta);
            w.iter_mut().for_each(|x| *x /= beta);
            q = std::mem::replace(&mut w, vec![0.0; dim]);
        }
    }
}

fn ritz_pairs(
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    n_wanted: usize,
    m: usize,
    residual: f64,
) -> Result<EigenPairs> {
    let rows: Vec<usize> = (0..m).collect();
    let (theta, s) = tridiagonal_ql(alphas, &betas[..m - 1], &rows)?;
    let dim = basis[0].len();
    let mut vectors = Vec::with_capacity(n_wanted);
    for k in 0..n_wanted {
        let mut y = vec![0.0; dim];
        for (j, qj) in basis.iter().enumerate() {
            axpy(s[(j, k)], qj, &mut y);
        }
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        vectors.push(y);
    }
    Ok(EigenPairs {
        values: theta[..n_wanted].to_vec(),
        vectors,
        iterations: m,
        max_residual: residual,
    })
}

/// Materializes the operator column by column and solves densely.
pub fn dense_from_operator<F>(dim: usize, n_wanted: usize, mut apply: F) -> Result<EigenPairs>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        e[j] = 1.0;
        apply(&e, &mut col);
        e[j] = 0.0;
        a.column_mut(j).copy_from_slice(&col);
    }
    // Symmetrize away round-off in the operator application.
    let a = (&a + a.transpose()) * 0.5;
    let mut pairs = dense_symmetric(a)?;
    pairs.values.truncate(n_wanted);
    pairs.vectors.truncate(n_wanted);
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        &a + a.transpose()
    }

    #[test]
    fn dense_sorted_and_orthonormal() {
        let a = random_symmetric(12, 1);
        let p = dense_symmetric(a.clone()).unwrap();
        for w in p.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for (k, v) in p.vectors.iter().enumerate() {
            let av = &a * nalgebra::DVector::from_column_slice(v);
            for i in 0..12 {
                assert!((av[i] - p.values[k] * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ql_matches_dense_on_tridiagonal() {
        let diag = [2.0, -1.0, 0.5, 3.0, 1.5, -2.0];
        let off = [1.0, 0.3, -0.7, 0.2, 1.1];
        let t = DMatrix::from_fn(6, 6, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let reference = dense_symmetric(t.clone()).unwrap();
        let rows: Vec<usize> = (0..6).collect();
        let (values, z) = tridiagonal_ql(&diag, &off, &rows).unwrap();
        for k in 0..6 {
            assert!((values[k] - reference.values[k]).abs() < 1e-13);
            let v = z.column(k).clone_owned();
            let r = &t * &v - &v * values[k];
            assert!(r.norm() < 1e-13);
        }
        let (_, last) = tridiagonal_ql(&diag, &off, &[5]).unwrap();
        for k in 0..6 {
            assert!((last[(0, k)] - z[(5, k)]).abs() < 1e-14);
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let a = random_symmetric(300, 7);
        let reference = dense_symmetric(a.clone()).unwrap();
        let opts = LanczosOptions::default();
        let p = lanczos_lowest(300, 5, |x, y| {
            let v = &a * nalgebra::DVector::from_column_slice(x);
            y.copy_from_slice(v.as_slice());
        }, &opts)
        .unwrap();
        for k in 0..5 {
            assert!((p.values[k] - reference.values[k]).abs() < 1e-9, "k = {k}");
            let overlap = dot(&p.vectors[k], &reference.vectors[k]).abs();
            assert!((overlap - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn lanczos_resolves_close_pair() {
        // Pair split by 1e-6 at the bottom of a wide spectrum.
        let n = 400;
        let diag: Vec<f64> = (0..n)
            .map(|i| match i {
                0 => 0.0,
                1 => 1e-6,
                _ => 0.5 + 5.0 * i as f64,
            })
            .collect();
        let p = lanczos_lowest(n, 3, |x, y| {
            for i in 0..n {
                y[i] = diag[i] * x[i];
            }
        }, &LanczosOptions::default())
        .unwrap();
        assert!(p.values[0].abs() < 1e-12);
        assert!((p.values[1] - 1e-6).abs() < 1e-12);
        assert!((p.values[2] - 10.5).abs() < 1e-9);
        assert!(p.vectors[0][0].abs() > 1.0 - 1e-9);
        assert!(p.vectors[1][1].abs() > 1.0 - 1e-9);
    }

    #[test]
    fn small_problems_fall_back_to_dense() {
        let a = random_symmetric(10, 3);
        let reference = dense_symmetric(a.clone()).unwrap();
        let p = lanczos_lowest(10, 3, |x, y| {
            let v = &a * nalgebra::DVector::from_column_slice(x);
            y.copy_from_slice(v.as_slice());
        }, &LanczosOptions::default())
        .unwrap();
        assert_eq!(p.iterations, 0);
        for k in 0..3 {
            assert!((p.values[k] - reference.values[k]).abs() < 1e-12);
        }
    }
}
