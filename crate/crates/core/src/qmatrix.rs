use std::ops::{Add, Mul, Range, Sub};

use faer::linalg::matmul::matmul_with_conj;
use faer::{c64, Accum, Conj, Mat};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Dense `rows x cols` quaternion matrix stored as four row-major real planes
/// `A0 + A1 i + A2 j + A3 k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQMatrix")]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    planes: [Vec<f64>; 4],
}

#[derive(Deserialize)]
struct RawQMatrix {
    rows: usize,
    cols: usize,
    planes: [Vec<f64>; 4],
}

impl TryFrom<RawQMatrix> for QMatrix {
    type Error = Error;

    fn try_from(raw: RawQMatrix) -> Result<Self> {
        QMatrix::from_planes(raw.rows, raw.cols, raw.planes)
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Self {
            rows,
            cols,
            planes: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.planes[0][i * n + i] = 1.0;
        }
        m
    }

    /// Real diagonal matrix with the given diagonal.
    pub fn from_diagonal(rows: usize, cols: usize, diag: &[f64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.planes[0][i * cols + i] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from four row-major planes of length `rows * cols`.
    pub fn from_planes(rows: usize, cols: usize, planes: [Vec<f64>; 4]) -> Result<Self> {
        if let Some(bad) = planes.iter().find(|p| p.len() != rows * cols) {
            return Err(Error::DimensionMismatch {
                op: "from_planes",
                left: (rows, cols),
                right: (bad.len(), 1),
            });
        }
        Ok(Self { rows, cols, planes })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn plane(&self, l: usize) -> &[f64] {
        &self.planes[l]
    }

    pub fn plane_mut(&mut self, l: usize) -> &mut [f64] {
        &mut self.planes[l]
    }

    pub fn planes(&self) -> &[Vec<f64>; 4] {
        &self.planes
    }

    pub fn into_planes(self) -> [Vec<f64>; 4] {
        self.planes
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        let k = i * self.cols + j;
        Quaternion::new(self.planes[0][k], self.planes[1][k], self.planes[2][k], self.planes[3][k])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        let k = i * self.cols + j;
        self.planes[0][k] = q.w;
        self.planes[1][k] = q.x;
        self.planes[2][k] = q.y;
        self.planes[3][k] = q.z;
    }

    /// True when the real plane is identically zero.
    pub fn is_pure(&self) -> bool {
        self.planes[0].iter().all(|&v| v == 0.0)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.planes.iter().flatten().map(|v| v * v).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Quaternion trace `sum_i A(i, i)`.
    pub fn trace(&self) -> Quaternion {
        (0..self.rows.min(self.cols)).fold(Quaternion::ZERO, |acc, i| acc + self.get(i, i))
    }

    /// `Re(tr(A^H B))`, the real inner product of two equally sized matrices.
    pub fn real_trace_inner(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "real_trace_inner")?;
        Ok(self
            .planes
            .iter()
            .zip(other.planes.iter())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum())
    }

    /// Matrix product over the quaternion ring, evaluated through the
    /// Cayley-Dickson split `A = Ap + Aq j`:
    /// `(Ap + Aq j)(Bp + Bq j) = (Ap Bp - Aq conj(Bq)) + (Ap Bq + Aq conj(Bp)) j`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let (ap, aq) = self.to_cayley_dickson();
        let (bp, bq) = rhs.to_cayley_dickson();
        let par = faer::get_global_parallelism();
        let one = c64::new(1.0, 0.0);
        let mut p = Mat::<c64>::zeros(self.rows, rhs.cols);
        let mut q = Mat::<c64>::zeros(self.rows, rhs.cols);
        matmul_with_conj(p.as_mut(), Accum::Replace, ap.as_ref(), Conj::No, bp.as_ref(), Conj::No, one, par);
        matmul_with_conj(p.as_mut(), Accum::Add, aq.as_ref(), Conj::No, bq.as_ref(), Conj::Yes, -one, par);
        matmul_with_conj(q.as_mut(), Accum::Replace, ap.as_ref(), Conj::No, bq.as_ref(), Conj::No, one, par);
        matmul_with_conj(q.as_mut(), Accum::Add, aq.as_ref(), Conj::No, bp.as_ref(), Conj::Yes, one, par);
        Ok(Self::from_cayley_dickson(p.as_ref(), q.as_ref()))
    }

    /// Splits into the complex pair `(Ap, Aq)` with `Ap = A0 + A1 i`, `Aq = A2 + A3 i`.
    pub fn to_cayley_dickson(&self) -> (Mat<c64>, Mat<c64>) {
        let n = self.cols;
        let p = Mat::from_fn(self.rows, n, |i, j| c64::new(self.planes[0][i * n + j], self.planes[1][i * n + j]));
        let q = Mat::from_fn(self.rows, n, |i, j| c64::new(self.planes[2][i * n + j], self.planes[3][i * n + j]));
        (p, q)
    }

    pub fn from_cayley_dickson(p: faer::MatRef<'_, c64>, q: faer::MatRef<'_, c64>) -> Self {
        let (rows, cols) = (p.nrows(), p.ncols());
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let k = i * cols + j;
                let (a, b) = (p[(i, j)], q[(i, j)]);
                m.planes[0][k] = a.re;
                m.planes[1][k] = a.im;
                m.planes[2][k] = b.re;
                m.planes[3][k] = b.im;
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(s);
        out
    }

    pub fn scale_in_place(&mut self, s: f64) {
        self.planes.iter_mut().flatten().for_each(|v| *v *= s);
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (a, b) in self.planes.iter_mut().zip(other.planes.iter()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += alpha * y);
        }
    }

    /// Left-multiplies by a real diagonal matrix (scales row `i` by `d[i]`).
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.rows, "row scale length");
        let mut out = self.clone();
        for plane in out.planes.iter_mut() {
            for (row, &s) in plane.chunks_mut(self.cols.max(1)).zip(d) {
                row.iter_mut().for_each(|v| *v *= s);
            }
        }
        out
    }

    /// Right-multiplies by a real diagonal matrix (scales column `j` by `d[j]`).
    pub fn scale_cols(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.cols, "column scale length");
        let mut out = self.clone();
        for plane in out.planes.iter_mut() {
            for row in plane.chunks_mut(self.cols.max(1)) {
                row.iter_mut().zip(d).for_each(|(v, &s)| *v *= s);
            }
        }
        out
    }

    /// Copy of the column block `range`.
    pub fn columns(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.cols);
        let w = range.len();
        let mut out = Self::zeros(self.rows, w);
        for l in 0..4 {
            for i in 0..self.rows {
                out.planes[l][i * w..(i + 1) * w]
                    .copy_from_slice(&self.planes[l][i * self.cols + range.start..i * self.cols + range.end]);
            }
        }
        out
    }

    /// Copy of the row block `range`.
    pub fn row_block(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.rows);
        let mut out = Self::zeros(range.len(), self.cols);
        for l in 0..4 {
            out.planes[l].copy_from_slice(&self.planes[l][range.start * self.cols..range.end * self.cols]);
        }
        out
    }

    /// Largest componentwise absolute difference; `inf` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.planes
            .iter()
            .flatten()
            .zip(other.planes.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &QMatrix {
    type Output = QMatrix;

    fn mul(self, s: f64) -> QMatrix {
        self.scale(s)
    }
}
