use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::matrix::{validate_row, RowDefect};
use crate::sparse::{RowAccess, C64};

type RowFn = dyn Fn(usize) -> Vec<(usize, C64)> + Send + Sync;

/// A matrix known only through a procedure computing the nonzeros of a row.
///
/// Every returned row is checked against the contract: columns distinct,
/// sorted ascending and in range. Entries under the drop tolerance are
/// discarded.
#[derive(Clone)]
pub struct RowOracle {
    dim: usize,
    row_fn: Arc<RowFn>,
}

impl fmt::Debug for RowOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowOracle").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl RowOracle {
    pub fn new<F>(dim: usize, row_fn: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, C64)> + Send + Sync + 'static,
    {
        Self { dim, row_fn: Arc::new(row_fn) }
    }
}

impl RowAccess for RowOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn row_entries(&self, i: usize) -> Result<Cow<'_, [(usize, C64)]>> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
        }
        let row = validate_row(i, self.dim, (self.row_fn)(i)).map_err(|d| Error::OracleContract {
            row: i,
            reason: match d {
                RowDefect::Duplicate(c) => format!("column {c} returned twice"),
                RowDefect::OutOfRange(c) => format!("column {c} out of range"),
                RowDefect::Unsorted => "columns are not sorted ascending".into(),
            },
        })?;
        Ok(Cow::Owned(row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::row_nonzeros;

    #[test]
    fn oracle_rows_are_validated() {
        let bad = RowOracle::new(2, |_| vec![(1, C64::new(1.0, 0.0)), (0, C64::new(1.0, 0.0))]);
        assert!(matches!(row_nonzeros(&bad, 0), Err(Error::OracleContract { row: 0, .. })));
        let x = RowOracle::new(2, |i| vec![(1 - i, C64::new(1.0, 0.0))]);
        assert_eq!(row_nonzeros(&x, 0).unwrap(), vec![(1, C64::new(1.0, 0.0))]);
        assert!(matches!(row_nonzeros(&x, 2), Err(Error::IndexOutOfRange { .. })));
        let m = x.to_sparse().unwrap();
        assert_eq!(m.col(0), &[(1, C64::new(1.0, 0.0))]);
    }
}
