//! Compressed sparse row storage and a Jacobi-preconditioned conjugate
//! gradient solver. Single threaded on purpose: runs are bitwise
//! reproducible, and the systems here (a few thousand unknowns) do not ask
//! for more.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("matrix is not positive definite (curvature {curvature:e} at iteration {iteration})")]
    NotSpd { iteration: usize, curvature: f64 },
    #[error("diagonal entry {index} is {value:e}; cannot precondition")]
    NonPositiveDiagonal { index: usize, value: f64 },
    #[error("no convergence after {iterations} iterations (relative residual {rel_residual:e})")]
    ConvergenceFailure { iterations: usize, rel_residual: f64 },
    #[error("dimension mismatch: matrix is {dim}, vector is {len}")]
    DimensionMismatch { dim: usize, len: usize },
}

/// Symmetric sparse matrix in CSR form (full pattern stored, not just a
/// triangle).
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets, summing duplicates. The sort
    /// is stable, so duplicate entries accumulate in their insertion order
    /// and assembly stays deterministic.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        let mut row = 0;
        let mut k = 0;
        while k < triplets.len() {
            let (r, c, _) = triplets[k];
            debug_assert!(r < dim && c < dim);
            while row < r {
                row_ptr.push(col_idx.len());
                row += 1;
            }
            let mut v = 0.0;
            while k < triplets.len() && triplets[k].0 == r && triplets[k].1 == c {
                v += triplets[k].2;
                k += 1;
            }
            col_idx.push(c);
            values.push(v);
        }
        while row < dim {
            row_ptr.push(col_idx.len());
            row += 1;
        }
        Self { dim, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.col_idx[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    /// Largest absolute difference between A and its transpose; zero for the
    /// assembled stiffness matrices.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                worst = worst.max(fmath::abs(self.values[k] - self.get(c, r)));
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CgOptions {
    /// Convergence target: ||b - A x|| <= rel_tol * ||b||, verified on the
    /// explicitly recomputed residual, not just the recurrence.
    pub rel_tol: f64,
    /// Iteration cap; defaults to 20 times the dimension when `None`.
    pub max_iter: Option<usize>,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-13, max_iter: None }
    }
}

/// Jacobi-preconditioned conjugate gradients from the zero start vector.
pub fn solve_cg(a: &CsrMatrix, b: &[f64], opts: &CgOptions) -> Result<Vec<f64>, SolveError> {
    let n = a.dim();
    if b.len() != n {
        return Err(SolveError::DimensionMismatch { dim: n, len: b.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let norm_b = norm(b);
    if norm_b == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = opts.rel_tol * norm_b;
    let max_iter = opts.max_iter.unwrap_or(20 * n);

    let diag = a.diagonal();
    for (i, &d) in diag.iter().enumerate() {
        if !(d > 0.0) {
            return Err(SolveError::NonPositiveDiagonal { index: i, value: d });
        }
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];

    for iteration in 1..=max_iter {
        a.mul_vec(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 {
            return Err(SolveError::NotSpd { iteration, curvature });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= target {
            // The recurrence residual can drift from the true one at these
            // tolerances; accept only what the actual residual confirms.
            a.mul_vec(&x, &mut ap);
            for i in 0..n {
                r[i] = b[i] - ap[i];
            }
            if norm(&r) <= target {
                return Ok(x);
            }
            // restart from the recomputed residual
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            rz = dot(&r, &z);
            p.copy_from_slice(&z);
            continue;
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    a.mul_vec(&x, &mut ap);
    for i in 0..n {
        r[i] = b[i] - ap[i];
    }
    Err(SolveError::ConvergenceFailure {
        iterations: max_iter,
        rel_residual: norm(&r) / norm_b,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    fmath::sqrt(dot(v, v))
}
