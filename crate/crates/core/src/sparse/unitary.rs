use serde::{Deserialize, Serialize};

use crate::sparse::{SparseMatrix, C64};

/// Outcome of a sparse unitarity check.
///
/// `max_col_defect` is the largest entry of `|U^dagger U - I|` (column norms on
/// the diagonal, column overlaps off it); `max_row_defect` is the same for
/// `U U^dagger`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub is_unitary: bool,
    pub max_col_defect: f64,
    pub max_row_defect: f64,
}

pub fn check_unitary(m: &SparseMatrix, tol: f64) -> UnitarityReport {
    let max_col_defect = column_gram_defect(m, |_| true);
    let max_row_defect = column_gram_defect(&m.adjoint(), |_| true);
    UnitarityReport {
        is_unitary: max_col_defect <= tol && max_row_defect <= tol,
        max_col_defect,
        max_row_defect,
    }
}

/// Largest entry of `|G - I|` where `G` is the Gram matrix of the columns
/// selected by `keep`. Costs `O(N d^2)` for `d` nonzeros per row/column.
pub fn column_gram_defect(m: &SparseMatrix, keep: impl Fn(usize) -> bool) -> f64 {
    let n = m.dim();
    let mut acc = vec![C64::new(0.0, 0.0); n];
    let mut touched: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    let mut worst: f64 = 0.0;
    for j in (0..n).filter(|&j| keep(j)) {
        for &(r, a) in m.col(j) {
            for &(k, b) in m.row(r) {
                if !keep(k) {
                    continue;
                }
                if !seen[k] {
                    seen[k] = true;
                    touched.push(k);
                }
                acc[k] += a.conj() * b;
            }
        }
        let mut diag_seen = false;
        for &k in &touched {
            let target = if k == j { 1.0 } else { 0.0 };
            if k == j {
                diag_seen = true;
            }
            worst = worst.max((acc[k] - target).norm());
            acc[k] = C64::new(0.0, 0.0);
            seen[k] = false;
        }
        touched.clear();
        if !diag_seen {
            // an empty column has norm 0
            worst = worst.max(1.0);
        }
    }
    worst
}

/// Connected components of the symmetrized sparsity pattern: the invariant
/// blocks a simultaneous row/column permutation can expose. Components are
/// sorted internally and listed by smallest member.
pub fn combinatorial_blocks(m: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (r, c, _) in m.triplets() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unitary() {
        let r = check_unitary(&SparseMatrix::identity(4), 1e-12);
        assert!(r.is_unitary);
        assert_eq!(r.max_col_defect, 0.0);
        assert_eq!(r.max_row_defect, 0.0);
    }

    #[test]
    fn doubled_identity_has_defect_three() {
        let m = SparseMatrix::identity(3).scale(C64::new(2.0, 0.0));
        let r = check_unitary(&m, 1e-12);
        assert!(!r.is_unitary);
        assert!((r.max_col_defect - 3.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_columns_detected() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = SparseMatrix::from_triplets(
            2,
            [(0, 0, C64::new(s, 0.0)), (1, 0, C64::new(s, 0.0)), (0, 1, C64::new(s, 0.0)), (1, 1, C64::new(s, 0.0))],
        )
        .unwrap();
        let r = check_unitary(&m, 1e-12);
        assert!(!r.is_unitary);
        assert!((r.max_col_defect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_of_a_permutation() {
        let m = SparseMatrix::from_triplets(
            4,
            [(0, 1, C64::new(1.0, 0.0)), (1, 0, C64::new(1.0, 0.0)), (2, 2, C64::new(1.0, 0.0)), (3, 3, C64::new(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(combinatorial_blocks(&m), vec![vec![0, 1], vec![2], vec![3]]);
    }
}
