//! Dense row-major matrices and vectors, plus the symmetric positive definite
//! solve used by the interior point projection.

use std::ops::{Deref, DerefMut, Index, IndexMut};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
}

/// A dense vector of reals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1.0; len])
    }

    /// Builds a vector, rejecting NaN and infinite entries.
    pub fn try_new(entries: Vec<f64>) -> Result<Self, LinalgError> {
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite(i));
        }
        Ok(Self(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl FromIterator<f64> for DenseVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Deref for DenseVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A dense matrix stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite(i));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Returns `self · diag(scale)`.
    pub fn scale_columns(&self, scale: &[f64]) -> Result<DenseMatrix, LinalgError> {
        if scale.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: scale.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (v, s) in out.row_mut(i).iter_mut().zip(scale) {
                *v *= s;
            }
        }
        Ok(out)
    }

    /// Appends one column on the right.
    pub fn with_column(&self, column: &[f64]) -> Result<DenseMatrix, LinalgError> {
        if column.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: column.len(),
            });
        }
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for (i, &extra) in column.iter().enumerate() {
            data.extend_from_slice(self.row(i));
            data.push(extra);
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `A · x`.
pub fn mat_vec(a: &DenseMatrix, x: &[f64]) -> Result<DenseVector, LinalgError> {
    if a.cols != x.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.cols,
            found: x.len(),
        });
    }
    Ok((0..a.rows).map(|i| dot(a.row(i), x)).collect())
}

/// `Aᵀ · y`.
pub fn mat_t_vec(a: &DenseMatrix, y: &[f64]) -> Result<DenseVector, LinalgError> {
    if a.rows != y.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            found: y.len(),
        });
    }
    let mut out = vec![0.0; a.cols];
    for (i, &yi) in y.iter().enumerate() {
        if yi == 0.0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(a.row(i)) {
            *o += v * yi;
        }
    }
    Ok(out.into())
}

/// `A · Aᵀ`. Only the upper triangle is computed; the lower one is mirrored so
/// the result is exactly symmetric.
pub fn gram(a: &DenseMatrix) -> DenseMatrix {
    let m = a.rows;
    let mut g = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = dot(a.row(i), a.row(j));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Lower-triangular factor `L` with `S + ridge·I = L·Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: DenseMatrix,
    ridge: f64,
}

impl Cholesky {
    pub fn factor(s: &DenseMatrix, ridge: f64) -> Result<Self, LinalgError> {
        let n = s.rows;
        if s.cols != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: s.cols,
            });
        }
        let scale = s.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in (i + 1)..n {
                if (s[(i, j)] - s[(j, i)]).abs() > 1e-10 * scale {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }

        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = s[(j, j)] + ridge;
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            // Relative floor: cancellation below this level means the column is
            // numerically dependent on the previous ones.
            if diag.is_nan() || diag <= 1e-14 * (s[(j, j)].abs() + ridge) || diag <= 0.0 {
                return Err(LinalgError::NotPositiveDefinite { pivot: j, value: diag });
            }
            let d = diag.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let mut v = s[(i, j)];
                for k in 0..j {
                    v -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = v / d;
            }
        }
        Ok(Self { factor: l, ridge })
    }

    pub fn solve(&self, b: &[f64]) -> Result<DenseVector, LinalgError> {
        let n = self.factor.rows;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let l = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut v = y[i];
            for k in 0..i {
                v -= l[(i, k)] * y[k];
            }
            y[i] = v / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v -= l[(k, i)] * y[k];
            }
            y[i] = v / l[(i, i)];
        }
        Ok(y.into())
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }
}

/// Solves `(S + ridge·I)·x = b` for symmetric positive definite `S`, with one
/// step of iterative refinement.
pub fn solve_spd(s: &DenseMatrix, b: &[f64], ridge: f64) -> Result<DenseVector, LinalgError> {
    let chol = Cholesky::factor(s, ridge)?;
    let mut x = chol.solve(b)?;
    let ax = mat_vec(s, &x)?;
    let residual: Vec<f64> = b
        .iter()
        .zip(ax.iter().zip(x.iter()))
        .map(|(bi, (ai, xi))| bi - ai - ridge * xi)
        .collect();
    let correction = chol.solve(&residual)?;
    for (xi, ci) in x.iter_mut().zip(correction.iter()) {
        *xi += ci;
    }
    Ok(x)
}
