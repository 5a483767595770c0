use std::borrow::Cow;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::sparse::{RowAccess, C64, DROP_TOLERANCE};

/// Square complex matrix stored as sorted, duplicate-free rows.
///
/// Entries whose magnitude falls below [`DROP_TOLERANCE`] are never stored.
/// The column view is materialized on first use and cached.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, C64)>>,
    cols: OnceLock<Vec<Vec<(usize, C64)>>>,
}

impl PartialEq for SparseMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rows == other.rows
    }
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self::from_sorted_rows(dim, vec![Vec::new(); dim])
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim).map(|i| vec![(i, C64::new(1.0, 0.0))]).collect();
        Self::from_sorted_rows(dim, rows)
    }

    /// Builds a matrix from `(row, col, amp)` triplets in any order.
    ///
    /// Duplicated coordinates are rejected rather than summed.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (r, c, a) in triplets {
            if r >= dim {
                return Err(Error::IndexOutOfRange { index: r, dim });
            }
            if c >= dim {
                return Err(Error::IndexOutOfRange { index: c, dim });
            }
            rows[r].push((c, a));
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: r, col: w[0].0 });
            }
            row.retain(|&(_, a)| a.norm() >= DROP_TOLERANCE);
        }
        Ok(Self::from_sorted_rows(dim, rows))
    }

    /// Builds a matrix from per-row entry lists, validating order and bounds.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, C64)>>) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
        }
        let mut cleaned = Vec::with_capacity(dim);
        for (r, row) in rows.into_iter().enumerate() {
            cleaned.push(validate_row(r, dim, row).map_err(|reason| match reason {
                RowDefect::Duplicate(c) => Error::DuplicateEntry { row: r, col: c },
                RowDefect::OutOfRange(c) => Error::IndexOutOfRange { index: c, dim },
                RowDefect::Unsorted => Error::OracleContract {
                    row: r,
                    reason: "columns are not sorted ascending".into(),
                },
            })?);
        }
        Ok(Self::from_sorted_rows(dim, cleaned))
    }

    pub(crate) fn from_sorted_rows(dim: usize, rows: Vec<Vec<(usize, C64)>>) -> Self {
        debug_assert_eq!(rows.len(), dim);
        debug_assert!(rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0) && r.iter().all(|&(c, _)| c < dim)));
        Self { dim, rows, cols: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    pub fn col(&self, j: usize) -> &[(usize, C64)] {
        &self.columns()[j]
    }

    fn columns(&self) -> &Vec<Vec<(usize, C64)>> {
        self.cols.get_or_init(|| {
            let mut cols = vec![Vec::new(); self.dim];
            for (r, row) in self.rows.iter().enumerate() {
                for &(c, a) in row {
                    cols[c].push((r, a));
                }
            }
            cols
        })
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_nnz(&self) -> usize {
        self.columns().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Row-major iterator over the stored `(row, col, amp)` triplets.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, a)| (r, c, a)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let rows = self
            .columns()
            .iter()
            .map(|col| col.iter().map(|&(r, a)| (r, a.conj())).collect())
            .collect();
        Self::from_sorted_rows(self.dim, rows)
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(c, a)| (c, a * s))
                    .filter(|(_, a)| a.norm() >= DROP_TOLERANCE)
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(self.dim, rows)
    }

    /// Entrywise sum; results below the drop tolerance are removed.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b))
            .collect();
        Ok(Self::from_sorted_rows(self.dim, rows))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut touched = vec![false; n];
        let mut rows = Vec::with_capacity(n);
        for row in &self.rows {
            let mut cols = Vec::new();
            for &(k, a) in row {
                for &(c, b) in &other.rows[k] {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            let mut out = Vec::with_capacity(cols.len());
            for c in cols {
                if acc[c].norm() >= DROP_TOLERANCE {
                    out.push((c, acc[c]));
                }
                acc[c] = C64::new(0.0, 0.0);
                touched[c] = false;
            }
            rows.push(out);
        }
        Ok(Self::from_sorted_rows(n, rows))
    }

    /// Largest entrywise deviation from Hermiticity, with its location.
    pub fn hermitian_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for (r, c, a) in self.triplets() {
            let d = (a - self.get(c, r).conj()).norm();
            if d > worst.0 {
                worst = (d, r, c);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect().0 <= tol
    }

    /// Upper bound on the spectral norm: `sqrt(max column abs-sum * max row abs-sum)`.
    pub fn norm_bound(&self) -> f64 {
        let row_max = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(_, a)| a.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let col_max = self
            .columns()
            .iter()
            .map(|c| c.iter().map(|(_, a)| a.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .triplets()
            .map(|(_, _, a)| a.norm())
            .fold(0.0, f64::max))
    }
}

impl RowAccess for SparseMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn row_entries(&self, i: usize) -> Result<Cow<'_, [(usize, C64)]>> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
        }
        Ok(Cow::Borrowed(&self.rows[i]))
    }

    fn to_sparse(&self) -> Result<SparseMatrix> {
        Ok(self.clone())
    }
}

pub(crate) enum RowDefect {
    Duplicate(usize),
    OutOfRange(usize),
    Unsorted,
}

/// Checks that a row is sorted, distinct and in range; drops tiny entries.
pub(crate) fn validate_row(
    _row: usize,
    dim: usize,
    entries: Vec<(usize, C64)>,
) -> std::result::Result<Vec<(usize, C64)>, RowDefect> {
    for w in entries.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(RowDefect::Duplicate(w[0].0));
        }
        if w[0].0 > w[1].0 {
            return Err(RowDefect::Unsorted);
        }
    }
    if let Some(&(c, _)) = entries.iter().find(|&&(c, _)| c >= dim) {
        return Err(RowDefect::OutOfRange(c));
    }
    Ok(entries
        .into_iter()
        .filter(|(_, a)| a.norm() >= DROP_TOLERANCE)
        .collect())
}

fn merge_rows(a: &[(usize, C64)], b: &[(usize, C64)]) -> Vec<(usize, C64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (c, v) = match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (ca, va + vb)
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                i += 1;
                (ca, va)
            }
            (Some(_), Some(&(cb, vb))) | (None, Some(&(cb, vb))) => {
                j += 1;
                (cb, vb)
            }
            (Some(&(ca, va)), None) => {
                i += 1;
                (ca, va)
            }
            (None, None) => unreachable!(),
        };
        if v.norm() >= DROP_TOLERANCE {
            out.push((c, v));
        }
    }
    out
}
