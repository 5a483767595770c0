//! Sparse complex linear algebra: matrices, row oracles, state vectors,
//! the dense bridge used for certification, norms and unitarity checks.

mod dense;
mod matrix;
pub mod mtx;
mod norm;
mod oracle;
mod random;
mod state;
mod unitary;

use std::borrow::Cow;

pub use dense::{DenseMatrix, DENSE_CAP};
pub use matrix::SparseMatrix;
pub(crate) use norm::power_iteration;
pub use norm::{distance, spectral_norm, spectral_norm_op, LinearOp, SPECTRAL_ITERATION_CAP, SPECTRAL_TOL};
pub use oracle::RowOracle;
pub use random::random_sparse_unitary;
pub use state::StateVector;
pub use unitary::{check_unitary, column_gram_defect, combinatorial_blocks, UnitarityReport};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Entries smaller than this are structural zeros everywhere.
pub const DROP_TOLERANCE: f64 = 1e-14;

/// Row-computable access to a square matrix.
pub trait RowAccess {
    fn dim(&self) -> usize;

    /// Nonzeros of row `i`, sorted by column with no duplicates.
    fn row_entries(&self, i: usize) -> Result<Cow<'_, [(usize, C64)]>>;

    /// Full materialization; the column view is derived from it.
    fn to_sparse(&self) -> Result<SparseMatrix> {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| self.row_entries(i).map(Cow::into_owned))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_sorted_rows(n, rows))
    }
}

/// The nonzero `(column, amplitude)` pairs of row `i`.
pub fn row_nonzeros<M: RowAccess + ?Sized>(m: &M, i: usize) -> Result<Vec<(usize, C64)>> {
    Ok(m.row_entries(i)?.into_owned())
}

/// Sparse matrix-vector product; cost is proportional to the nonzeros.
pub fn apply<M: RowAccess + ?Sized>(m: &M, v: &StateVector) -> Result<StateVector> {
    if m.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: v.dim() });
    }
    let amps = v.amps();
    let out = (0..m.dim())
        .map(|i| {
            m.row_entries(i)
                .map(|row| row.iter().map(|&(c, a)| a * amps[c]).sum::<C64>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StateVector::new(out))
}

/// In-place-friendly matvec over raw slices; `out` is overwritten.
pub(crate) fn matvec_into(m: &SparseMatrix, v: &[C64], out: &mut [C64]) {
    for (o, row) in out.iter_mut().zip(m.rows()) {
        *o = row.iter().map(|&(c, a)| a * v[c]).sum();
    }
}

/// `out = m^dagger v`, via the rows of `m`.
pub(crate) fn adjoint_matvec_into(m: &SparseMatrix, v: &[C64], out: &mut [C64]) {
    out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
    for (r, row) in m.rows().iter().enumerate() {
        let vr = v[r];
        for &(c, a) in row {
            out[c] += a.conj() * vr;
        }
    }
}

pub fn to_dense(m: &SparseMatrix) -> Result<DenseMatrix> {
    DenseMatrix::from_sparse(m)
}
