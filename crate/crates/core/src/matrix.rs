//! Dense row-major complex matrices.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Products smaller than this many multiply-adds run on the calling thread.
const PAR_THRESHOLD: usize = 1 << 16;

/// Dense `rows x cols` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Wraps a row-major buffer. Fails if the length does not match the shape.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Fallible row-parallel construction; the first error in row order wins.
    pub fn try_from_fn_par<F>(rows: usize, cols: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<Complex64> + Sync,
    {
        let row_results: Vec<Result<Vec<Complex64>>> = (0..rows)
            .into_par_iter()
            .map(|i| (0..cols).map(|j| f(i, j)).collect())
            .collect();
        let mut data = Vec::with_capacity(rows * cols);
        for row in row_results {
            data.extend(row?);
        }
        Ok(Self { rows, cols, data })
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (m, n) = (self.rows, other.cols);
        let mut out = Self::zeros(m, n);
        if n == 0 {
            return Ok(out);
        }
        let kernel = |(i, out_row): (usize, &mut [Complex64])| {
            // Separate real and imaginary accumulators vectorize far better
            // than interleaved complex updates.
            let mut re = vec![0.0f64; n];
            let mut im = vec![0.0f64; n];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let (ar, ai) = (a.re, a.im);
                for ((r, m), b) in re.iter_mut().zip(im.iter_mut()).zip(other.row(k)) {
                    *r += ar * b.re - ai * b.im;
                    *m += ar * b.im + ai * b.re;
                }
            }
            for ((o, r), m) in out_row.iter_mut().zip(re).zip(im) {
                *o = Complex64::new(r, m);
            }
        };
        if m * n * self.cols < PAR_THRESHOLD {
            out.data.chunks_mut(n).enumerate().for_each(kernel);
        } else {
            out.data.par_chunks_mut(n).enumerate().for_each(kernel);
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Frobenius norm.
pub fn fro_norm(m: &ComplexMatrix) -> f64 {
    m.fro_norm()
}

/// `‖A − B‖_F / ‖A‖_F`.
pub fn rel_fro_error(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_shape(b)?;
    let denom = a.fro_norm();
    if denom == 0.0 {
        return Err(Error::InvalidArgument(
            "relative error against a zero matrix".into(),
        ));
    }
    let num = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(num / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fro_norm_of_3_4() {
        let m = ComplexMatrix::from_row_major(1, 2, vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert_eq!(fro_norm(&m), 5.0);
    }

    #[test]
    fn rel_error_identities() {
        let a = ComplexMatrix::from_fn(3, 4, |i, j| c(i as f64 + 1.0, j as f64));
        assert_eq!(rel_fro_error(&a, &a).unwrap(), 0.0);
        let z = ComplexMatrix::zeros(3, 4);
        assert!((rel_fro_error(&a, &z).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            rel_fro_error(&a, &ComplexMatrix::zeros(4, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(rel_fro_error(&z, &a).is_err());
    }

    #[test]
    fn matmul_small() {
        let a = ComplexMatrix::from_row_major(1, 2, vec![c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let b = ComplexMatrix::from_row_major(2, 1, vec![c(0.0, 1.0), c(1.0, 1.0)]).unwrap();
        let p = a.matmul(&b).unwrap();
        assert_eq!(p[(0, 0)], c(1.0, 2.0));
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn parallel_and_serial_products_agree() {
        let a = ComplexMatrix::from_fn(70, 40, |i, j| c((i * j) as f64 % 7.0, i as f64 - j as f64));
        let b = ComplexMatrix::from_fn(40, 50, |i, j| c(i as f64 * 0.5, (j % 3) as f64));
        let p = a.matmul(&b).unwrap();
        let q = ComplexMatrix::from_fn(70, 50, |i, j| (0..40).map(|k| a[(i, k)] * b[(k, j)]).sum());
        assert!(rel_fro_error(&q, &p).unwrap() < 1e-15);
    }

    #[test]
    fn selections_are_verbatim() {
        let a = ComplexMatrix::from_fn(4, 3, |i, j| c(i as f64, j as f64));
        let r = a.select_rows(&[2, 0]);
        assert_eq!(r.row(0), a.row(2));
        let s = a.select_cols(&[1]);
        assert_eq!(s.column(0), a.column(1));
        assert_eq!(a.conj_transpose()[(1, 3)], a[(3, 1)].conj());
    }
}
