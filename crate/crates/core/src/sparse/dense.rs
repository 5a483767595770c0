use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::sparse::{SparseMatrix, C64, DROP_TOLERANCE};

/// Largest dimension the dense bridge will allocate.
pub const DENSE_CAP: usize = 4096;

/// Row-major dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<C64>,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim > DENSE_CAP {
            return Err(Error::DenseCapExceeded { dim, cap: DENSE_CAP });
        }
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn from_sparse(s: &SparseMatrix) -> Result<Self> {
        let mut m = Self::zeros(s.dim())?;
        for (r, c, a) in s.triplets() {
            m[(r, c)] = a;
        }
        Ok(m)
    }

    /// Sparse copy, dropping entries under the drop tolerance.
    pub fn to_sparse(&self) -> SparseMatrix {
        let rows = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() >= DROP_TOLERANCE)
                    .map(|(j, &a)| (j, a))
                    .collect()
            })
            .collect();
        SparseMatrix::from_sorted_rows(self.dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let orow = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// `s * self` for a sparse left factor.
    pub fn left_mul_sparse(&self, s: &SparseMatrix) -> Result<Self> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: s.dim() });
        }
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for (i, row) in s.rows().iter().enumerate() {
            let orow = &mut out[i * n..(i + 1) * n];
            for &(k, a) in row {
                for (o, b) in orow.iter_mut().zip(&self.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        self.matvec_into(v, &mut out);
        out
    }

    pub(crate) fn matvec_into(&self, v: &[C64], out: &mut [C64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    pub(crate) fn adjoint_matvec_into(&self, v: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = ZERO);
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut result = Self::identity(self.dim)?;
        let mut base = self.clone();
        let mut first = true;
        while k > 0 {
            if k & 1 == 1 {
                result = if first { base.clone() } else { result.matmul(&base)? };
                first = false;
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `exp(-i t h)` for Hermitian `h`, by scaling and squaring of a Taylor series.
    pub fn exp_hermitian(h: &Self, t: f64) -> Result<Self> {
        let a = h.scale(C64::new(0.0, -t));
        let norm = a.norm_one();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let b = a.scale(ONE / 2f64.powi(squarings as i32));
        let mut sum = Self::identity(h.dim)?;
        let mut term = Self::identity(h.dim)?;
        for k in 1..=40 {
            term = term.matmul(&b)?.scale(ONE / k as f64);
            sum = sum.add(&term)?;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum)?;
        }
        Ok(sum)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(DenseMatrix::zeros(DENSE_CAP + 1), Err(Error::DenseCapExceeded { .. })));
    }

    #[test]
    fn empty_sparse_is_zero_dense() {
        let d = DenseMatrix::from_sparse(&SparseMatrix::zeros(2)).unwrap();
        assert_eq!(d, DenseMatrix::zeros(2).unwrap());
    }

    #[test]
    fn exp_of_pauli_x_matches_closed_form() {
        let x = DenseMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO }).unwrap();
        let t = 0.7f64;
        let e = DenseMatrix::exp_hermitian(&x, t).unwrap();
        assert!((e[(0, 0)] - C64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - C64::new(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = DenseMatrix::from_fn(3, |i, j| C64::new((i + 2 * j) as f64 * 0.1, 0.05)).unwrap();
        let p5 = m.pow(5).unwrap();
        let mut q = m.clone();
        for _ in 0..4 {
            q = q.matmul(&m).unwrap();
        }
        assert!(p5.sub(&q).unwrap().max_abs() < 1e-12);
        assert_eq!(m.pow(0).unwrap(), DenseMatrix::identity(3).unwrap());
    }
}
