//! Symmetric sparse matrices with a `(1, …, 1)` null vector and the
//! constrained solve `H h = b`, `Σ h = 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Above this size the solve switches from dense Cholesky to preconditioned CG.
pub const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparse {
    n: usize,
    /// Off-diagonal entries per row, sorted by column.
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
}

impl SymmetricSparse {
    pub fn new(n: usize) -> Self {
        Self { n, rows: vec![Vec::new(); n], diag: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` at `(i, j)` and `(j, i)`, `i ≠ j`.
    pub fn add_pair(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i != j);
        for (a, b) in [(i, j), (j, i)] {
            match self.rows[a].binary_search_by_key(&b, |e| e.0) {
                Ok(p) => self.rows[a][p].1 += v,
                Err(p) => self.rows[a].insert(p, (b, v)),
            }
        }
    }

    /// Sets each diagonal entry to minus its off-diagonal row sum.
    pub fn fill_diagonal_from_rows(&mut self) {
        for i in 0..self.n {
            self.diag[i] = -self.rows[i].iter().map(|e| e.1).sum::<f64>();
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.rows[i].binary_search_by_key(&j, |e| e.0).map(|p| self.rows[i][p].1).unwrap_or(0.0)
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = self.diag[i] * x[i];
            for &(j, v) in &self.rows[i] {
                s += v * x[j];
            }
            y[i] = s;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = self.diag[i];
            for &(j, v) in &self.rows[i] {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Whether the graph of nonzero off-diagonal entries is connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &(j, v) in &self.rows[i] {
                if v != 0.0 && !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.n
    }
}

fn project(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

/// Solves `H h = b` on the complement of `(1, …, 1)` and returns `h` with
/// `Σ h = 0`. `b` is projected first.
pub fn solve_constrained(h: &SymmetricSparse, b: &[f64]) -> Result<Vec<f64>> {
    let n = h.dim();
    if b.len() != n {
        return Err(Error::Input(format!("right-hand side has {} entries, expected {n}", b.len())));
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    if !h.is_connected() {
        return Err(Error::Singular("cell adjacency graph is disconnected".into()));
    }
    let mut rhs = b.to_vec();
    project(&mut rhs);
    let mut x = if n <= DENSE_LIMIT { solve_dense(h, &rhs)? } else { solve_cg(h, &rhs)? };
    project(&mut x);
    Ok(x)
}

fn solve_dense(h: &SymmetricSparse, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = h.dim();
    let scale = h.diagonal().iter().sum::<f64>() / n as f64;
    if !(scale > 0.0) {
        return Err(Error::Singular("Hessian has no positive diagonal".into()));
    }
    // Rank-one deflation moves the null eigenvalue to `scale`.
    let m = h.to_dense().add_scalar(scale / n as f64);
    let chol = m.cholesky().ok_or_else(|| Error::Singular("Hessian is not positive definite".into()))?;
    Ok(chol.solve(&DVector::from_column_slice(rhs)).as_slice().to_vec())
}

/// Jacobi-preconditioned conjugate gradients kept in the complement of
/// `(1, …, 1)`.
fn solve_cg(h: &SymmetricSparse, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = h.dim();
    let inv: Vec<f64> =
        h.diagonal().iter().map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let norm_b = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_b == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    project(&mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let tol = 1e-11 * norm_b;
    for _ in 0..20 * n.max(50) {
        h.mul(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !(pap > 0.0) {
            return Err(Error::Singular("conjugate gradients broke down".into()));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if r.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv[i];
        }
        project(&mut z);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Singular("conjugate gradients did not converge".into()))
}
