//! Small dense vectors and symmetric positive-semidefinite matrices.
//!
//! Everything here is sized for ambient dimensions up to a few dozen, so the
//! factorizations are plain textbook loops: Cholesky for linear solves and
//! cyclic Jacobi for symmetric eigendecompositions.

use crate::{Error, Result, Scalar};

/// A point or direction in the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector { entries }
    }

    pub fn from_slice(entries: &[S]) -> Self {
        Vector {
            entries: entries.to_vec(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            entries: vec![S::zero(); dim],
        }
    }

    /// The `i`-th standard basis vector in `dim` dimensions.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = S::one();
        v
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> S) -> Self {
        Vector {
            entries: (0..dim).map(&mut f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.entries.iter()
    }

    /// All entries finite (no NaN or infinity).
    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        if !self.is_finite() {
            return Err(Error::InvalidInput("non-finite vector entry".into()));
        }
        Ok(())
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = S::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += *a * *b;
        }
        acc
    }

    pub fn norm(&self) -> S {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Self) -> S {
        self.sub(other).norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_fn(self.dim(), |i| self.entries[i] + other.entries[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_fn(self.dim(), |i| self.entries[i] - other.entries[i])
    }

    pub fn scale(&self, s: S) -> Self {
        Vector::from_fn(self.dim(), |i| self.entries[i] * s)
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: S, x: &Self) {
        debug_assert_eq!(self.dim(), x.dim());
        for (e, xi) in self.entries.iter_mut().zip(&x.entries) {
            *e += a * *xi;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| *x == S::zero())
    }
}

impl<S: Scalar> std::ops::Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.entries[i]
    }
}

impl<S: Scalar> From<Vec<S>> for Vector<S> {
    fn from(entries: Vec<S>) -> Self {
        Vector { entries }
    }
}

/// Symmetric positive-semidefinite matrix, stored dense row-major.
///
/// In this crate these matrices are always built as `ε·I` plus a sum of outer
/// products `g gᵀ`, which keeps them PSD structurally.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> PsdMatrix<S> {
    pub fn scaled_identity(dim: usize, diag: S) -> Self {
        let mut data = vec![S::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = diag;
        }
        PsdMatrix { dim, data }
    }

    /// Build from dense rows, verifying symmetry to a relative 1e-12.
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = vec![S::zero(); dim * dim];
        let mut scale = S::zero();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for (j, x) in row.iter().enumerate() {
                data[i * dim + j] = *x;
                scale = scale.max(x.abs());
            }
        }
        let tol = S::cast(1e-12) * scale.max(S::one());
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (data[i * dim + j] - data[j * dim + i]).abs() > tol {
                    return Err(Error::InvalidInput("matrix not symmetric".into()));
                }
            }
        }
        Ok(PsdMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> S {
        self.data[i * self.dim + j]
    }

    /// Rank-one update `A += g gᵀ`.
    pub fn add_outer(&mut self, g: &Vector<S>) {
        debug_assert_eq!(self.dim, g.dim());
        for i in 0..self.dim {
            let gi = g[i];
            for j in 0..self.dim {
                self.data[i * self.dim + j] += gi * g[j];
            }
        }
    }

    pub fn matvec(&self, v: &Vector<S>) -> Vector<S> {
        debug_assert_eq!(self.dim, v.dim());
        Vector::from_fn(self.dim, |i| {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            let mut acc = S::zero();
            for (a, b) in row.iter().zip(v.iter()) {
                acc += *a * *b;
            }
            acc
        })
    }

    /// `vᵀ A v`.
    pub fn quad_form(&self, v: &Vector<S>) -> S {
        v.dot(&self.matvec(v))
    }

    /// Solve `A x = b` by Cholesky factorization. Errors if the matrix is not
    /// positive definite within machine tolerance.
    pub fn cholesky_solve(&self, b: &Vector<S>) -> Result<Vector<S>> {
        debug_assert_eq!(self.dim, b.dim());
        let n = self.dim;
        let mut l = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.at(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= S::zero() || !sum.is_finite() {
                        return Err(Error::Numeric(
                            "matrix not positive definite in Cholesky".into(),
                        ));
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        // Forward substitution L y = b, then back substitution Lᵀ x = y.
        let mut y = vec![S::zero(); n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= l[i * n + k] * y[k];
            }
            y[i] = sum / l[i * n + i];
        }
        let mut x = vec![S::zero(); n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= l[k * n + i] * x[k];
            }
            x[i] = sum / l[i * n + i];
        }
        Ok(Vector::new(x))
    }

    /// Full symmetric eigendecomposition by cyclic Jacobi rotations.
    ///
    /// Returns `(eigenvalues, eigenvectors)` with `eigenvectors[k]` the unit
    /// eigenvector for `eigenvalues[k]`, sorted ascending.
    pub fn symmetric_eigen(&self) -> (Vec<S>, Vec<Vector<S>>) {
        let n = self.dim;
        let mut m = self.data.clone();
        // V starts as the identity and accumulates the rotations.
        let mut v = vec![S::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = S::one();
        }
        let eps = S::cast(1e-14);
        let mut scale = S::zero();
        for i in 0..n {
            scale = scale.max(m[i * n + i].abs());
        }
        let tol = eps * scale.max(S::one());
        for _sweep in 0..64 {
            let mut off = S::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(m[p * n + q].abs());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[p * n + q];
                    if apq.abs() <= tol * S::cast(1e-2) {
                        continue;
                    }
                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    let theta = (aqq - app) / (S::cast(2.0) * apq);
                    // Stable tangent of the rotation angle.
                    let t = {
                        let sign = if theta >= S::zero() {
                            S::one()
                        } else {
                            -S::one()
                        };
                        sign / (theta.abs() + (theta * theta + S::one()).sqrt())
                    };
                    let c = (t * t + S::one()).sqrt().recip();
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m[k * n + p];
                        let mkq = m[k * n + q];
                        m[k * n + p] = c * mkp - s * mkq;
                        m[k * n + q] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let mpk = m[p * n + k];
                        let mqk = m[q * n + k];
                        m[p * n + k] = c * mpk - s * mqk;
                        m[q * n + k] = s * mpk + c * mqk;
                    }
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut pairs: Vec<(S, Vector<S>)> = (0..n)
            .map(|k| {
                (
                    m[k * n + k],
                    Vector::from_fn(n, |i| v[i * n + k]),
                )
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let (vals, vecs) = pairs.into_iter().unzip();
        (vals, vecs)
    }

    /// Largest-eigenvalue estimate by power iteration.
    pub fn power_iteration_max(&self, iterations: usize) -> S {
        let n = self.dim;
        let mut x = Vector::from_fn(n, |i| S::one() + S::cast(i as f64 * 1e-3));
        let norm = x.norm();
        x = x.scale(norm.recip());
        let mut lambda = S::zero();
        for _ in 0..iterations {
            let y = self.matvec(&x);
            let ny = y.norm();
            if ny <= S::zero() || !ny.is_finite() {
                return S::zero();
            }
            lambda = x.dot(&y);
            x = y.scale(ny.recip());
        }
        lambda
    }

    /// Smallest eigenvalue, via the Jacobi decomposition.
    pub fn min_eigenvalue(&self) -> S {
        let (vals, _) = self.symmetric_eigen();
        vals[0]
    }
}
