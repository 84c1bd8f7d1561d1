//! Real symmetric eigen-solvers: restarted Lanczos with full
//! reorthogonalisation for matrix-free operators, and dense helpers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Krylov dimension per restart cycle.
    pub krylov: usize,
    pub max_restarts: usize,
    /// Absolute residual ‖Av − θv‖ required for convergence.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov: 120,
            max_restarts: 400,
            tol: 1e-8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
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

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            axpy(-c, q, v);
        }
    }
}

fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut s = seed | 1;
    (0..dim)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// Smallest eigenpair of the symmetric operator `apply` restricted to the
/// orthogonal complement of `deflate` (assumed orthonormal).
pub fn lowest_eigenpair<F>(
    apply: F,
    dim: usize,
    deflate: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<EigenPair>
where
    F: Fn(&[f64], &mut [f64]),
{
    if dim == 0 || deflate.len() >= dim {
        return Err(Error::InvalidParameter("empty eigenproblem".into()));
    }
    let m = opts.krylov.min(dim - deflate.len()).max(1);
    let mut v = start_vector(dim, opts.seed);
    orthogonalize(&mut v, deflate);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut w = vec![0.0; dim];
    let mut best_residual = f64::INFINITY;
    for _ in 0..opts.max_restarts.max(1) {
        // Full projected matrix rather than a tridiagonal: once the Krylov
        // space is numerically invariant the new directions are rounding
        // noise and the three-term recurrence no longer holds.
        let mut h = DMatrix::<f64>::zeros(m, m);
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut cur = v.clone();
        let mut exhausted = false;
        for j in 0..m {
            apply(&cur, &mut w);
            q.push(cur);
            orthogonalize(&mut w, deflate);
            for _ in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let c = dot(qi, &w);
                    h[(i, j)] += c;
                    axpy(-c, qi, &mut w);
                }
            }
            let b = norm(&w);
            if j + 1 == m {
                break;
            }
            if b < 1e-13 {
                exhausted = true;
                break;
            }
            cur = w.iter().map(|x| x / b).collect();
        }
        let mm = q.len();
        // Qᵀ A Q from its upper triangle
        let t = DMatrix::from_fn(mm, mm, |i, j| if i <= j { h[(i, j)] } else { h[(j, i)] });
        let eig = t.symmetric_eigen();
        let (imin, theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc });
        let y = eig.eigenvectors.column(imin);
        let mut ritz = vec![0.0; dim];
        for (i, qi) in q.iter().enumerate() {
            axpy(y[i], qi, &mut ritz);
        }
        orthogonalize(&mut ritz, deflate);
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= rn);
        apply(&ritz, &mut w);
        let theta = if exhausted { theta } else { dot(&ritz, &w) };
        let mut r = w.clone();
        axpy(-theta, &ritz, &mut r);
        orthogonalize(&mut r, deflate);
        let res = norm(&r);
        best_residual = best_residual.min(res);
        if res <= opts.tol || exhausted && res <= opts.tol.max(1e-10) {
            return Ok(EigenPair {
                value: theta,
                vector: ritz,
                residual: res,
            });
        }
        v = ritz;
    }
    Err(Error::NonConvergence {
        residual: best_residual,
    })
}

/// Largest eigenpair, via the smallest eigenpair of the negated operator.
pub fn highest_eigenpair<F>(
    apply: F,
    dim: usize,
    deflate: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<EigenPair>
where
    F: Fn(&[f64], &mut [f64]),
{
    let neg = |x: &[f64], y: &mut [f64]| {
        apply(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    };
    lowest_eigenpair(neg, dim, deflate, opts).map(|mut p| {
        p.value = -p.value;
        p
    })
}

/// Dense matrix of a matrix-free operator.
pub fn dense_from_operator<F>(apply: F, dim: usize) -> DMatrix<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        e[j] = 1.0;
        apply(&e, &mut col);
        m.set_column(j, &DVector::from_column_slice(&col));
        e[j] = 0.0;
    }
    m
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (vals, vecs)
}
