//! Small dense complex matrices for whole-register unitaries.

use num_complex::Complex64;
use rayon::prelude::*;

const PAR_DIM: usize = 64;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from columns, `columns[j]` being the image of basis vector `j`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column {j} has the wrong length");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * dim + j] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        let body = |(i, out_row): (usize, &mut [Complex64])| {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        };
        if n >= PAR_DIM {
            out.data.par_chunks_mut(n).enumerate().for_each(body);
        } else {
            out.data.chunks_mut(n).enumerate().for_each(body);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self
                .row(i)
                .iter()
                .zip(v)
                .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b);
        }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// `self^(2^k)` by repeated squaring.
    pub fn pow2(&self, k: u32) -> DenseMatrix {
        (0..k).fold(self.clone(), |acc, _| acc.mul(&acc))
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&DenseMatrix::identity(self.dim))
            < tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squaring_matches_repeated_product() {
        let c = Complex64::new;
        let (s, co) = 0.3f64.sin_cos();
        let rot = DenseMatrix::from_columns(&[vec![c(co, 0.0), c(s, 0.0)], vec![c(-s, 0.0), c(co, 0.0)]]);
        let mut direct = DenseMatrix::identity(2);
        for _ in 0..8 {
            direct = direct.mul(&rot);
        }
        assert!(rot.pow2(3).max_abs_diff(&direct) < 1e-14);
        assert!(rot.is_unitary(1e-12));
        let (s8, c8) = 2.4f64.sin_cos();
        assert!((direct.get(0, 0).re - c8).abs() < 1e-12);
        assert!((direct.get(1, 0).re - s8).abs() < 1e-12);
    }
}
