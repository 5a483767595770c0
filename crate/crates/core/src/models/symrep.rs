//! Young's orthogonal form of the symmetric group.
//!
//! The basis is the set of standard Young tableaux of shape `lambda` in
//! last-letter order: tableaux are grouped by the cell holding `n`, with the
//! lowest removable corner first, and each group is ordered recursively on
//! the tableau with `n` removed. The transposition `s_j = (j, j+1)` acts on
//! each tableau through a 1x1 block `+-1` or a 2x2 rotation-reflection block
//! determined by the axial distance between `j` and `j + 1`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sparse::{spectral_norm, DenseMatrix, SparseMatrix, C64, DENSE_CAP};

/// Relation residual limit, in spectral norm.
pub const RELATION_TOL: f64 = 1e-10;
/// Largest basis that will be enumerated.
pub const BASIS_CAP: usize = 1_000_000;
pub const BASIS_ORDER: &str = "last-letter";

/// Checks that `lambda` is a non-empty, non-increasing list of positive integers.
pub fn validate_partition(lambda: &[usize]) -> Result<usize> {
    if lambda.is_empty() || lambda.contains(&0) || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition(lambda.to_vec()));
    }
    Ok(lambda.iter().sum())
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of standard tableaux by the hook-length formula.
pub fn hook_length_dim(lambda: &[usize]) -> Result<u128> {
    let n = validate_partition(lambda)?;
    if n > 34 {
        return Err(Error::invalid(format!("hook-length count overflows for n = {n}")));
    }
    let mut conj = vec![0usize; lambda[0]];
    for &row in lambda {
        for c in conj.iter_mut().take(row) {
            *c += 1;
        }
    }
    let mut hooks: u128 = 1;
    for (r, &row) in lambda.iter().enumerate() {
        for (c, &col) in conj.iter().enumerate().take(row) {
            hooks *= (row - c - 1 + col - r - 1 + 1) as u128;
        }
    }
    let fact: u128 = (1..=n as u128).product();
    Ok(fact / hooks)
}

/// A standard tableau, stored as the cell `(row, col)` of each letter `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    cells: Vec<(usize, usize)>,
}

impl Tableau {
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    /// Cell of letter `k` (1-based).
    pub fn cell(&self, k: usize) -> (usize, usize) {
        self.cells[k - 1]
    }

    /// Content `col - row` of letter `k`.
    pub fn content(&self, k: usize) -> i64 {
        let (r, c) = self.cell(k);
        c as i64 - r as i64
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let height = self.cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let mut rows = vec![Vec::new(); height];
        for (k, &(r, _)) in self.cells.iter().enumerate() {
            rows[r].push(k + 1);
        }
        rows
    }

    fn swapped(&self, j: usize) -> Tableau {
        let mut cells = self.cells.clone();
        cells.swap(j - 1, j);
        Tableau { cells }
    }
}

#[derive(Clone, Debug)]
pub struct YoungTableauBasis {
    partition: Vec<usize>,
    tableaux: Vec<Tableau>,
    index: HashMap<Tableau, usize>,
}

impl YoungTableauBasis {
    pub fn new(lambda: &[usize]) -> Result<Self> {
        validate_partition(lambda)?;
        let count = hook_length_dim(lambda)?;
        if count > BASIS_CAP as u128 {
            return Err(Error::SizeCapExceeded { size: usize::try_from(count).unwrap_or(usize::MAX), cap: BASIS_CAP });
        }
        let tableaux = last_letter(lambda);
        let index = tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(Self { partition: lambda.to_vec(), tableaux, index })
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.partition.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[Tableau] {
        &self.tableaux
    }

    /// Matrix of `s_j`, `1 <= j < n`.
    pub fn generator(&self, j: usize) -> Result<SparseMatrix> {
        let n = self.n();
        if j == 0 || j >= n {
            return Err(Error::invalid(format!("generator index {j} outside 1..{n}")));
        }
        let mut triplets = Vec::with_capacity(2 * self.dim());
        for (i, t) in self.tableaux.iter().enumerate() {
            let rho = (t.content(j + 1) - t.content(j)) as f64;
            let diag = 1.0 / rho;
            triplets.push((i, i, C64::new(diag, 0.0)));
            if let Some(&k) = self.index.get(&t.swapped(j)) {
                triplets.push((i, k, C64::new((1.0 - diag * diag).sqrt(), 0.0)));
            }
        }
        SparseMatrix::from_triplets(self.dim(), triplets)
    }
}

fn last_letter(shape: &[usize]) -> Vec<Tableau> {
    let n: usize = shape.iter().sum();
    if n == 0 {
        return vec![Tableau { cells: Vec::new() }];
    }
    let mut out = Vec::new();
    for r in (0..shape.len()).rev() {
        let removable = shape[r] > 0 && shape.get(r + 1).is_none_or(|&below| below < shape[r]);
        if !removable {
            continue;
        }
        let mut smaller = shape.to_vec();
        smaller[r] -= 1;
        for mut t in last_letter(&smaller) {
            t.cells.push((r, shape[r] - 1));
            out.push(t);
        }
    }
    out
}

pub fn symrep_generator(lambda: &[usize], j: usize) -> Result<SparseMatrix> {
    YoungTableauBasis::new(lambda)?.generator(j)
}

/// Largest residuals found by [`symrep_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymrepReport {
    pub partition: Vec<usize>,
    pub dim: usize,
    pub basis_order: &'static str,
    pub involution: f64,
    pub braid: f64,
    pub commutation: f64,
    pub unitarity: f64,
    pub max_row_nnz: usize,
}

/// Verifies the Coxeter relations, unitarity and 2-sparsity of every generator.
pub fn symrep_check(lambda: &[usize]) -> Result<SymrepReport> {
    let basis = YoungTableauBasis::new(lambda)?;
    let dim = basis.dim();
    if dim > DENSE_CAP {
        return Err(Error::DenseCapExceeded { dim, cap: DENSE_CAP });
    }
    let n = basis.n();
    let sparse: Vec<SparseMatrix> = (1..n).map(|j| basis.generator(j)).collect::<Result<_>>()?;
    let gens: Vec<DenseMatrix> = sparse.iter().map(DenseMatrix::from_sparse).collect::<Result<_>>()?;
    let id = DenseMatrix::identity(dim)?;
    let norm = |m: DenseMatrix| spectral_norm(&m, 1e-12);
    let fail = |relation, j, k, residual: f64| Error::RelationFailure { relation, j, k, residual };

    let mut report = SymrepReport {
        partition: lambda.to_vec(),
        dim,
        basis_order: BASIS_ORDER,
        involution: 0.0,
        braid: 0.0,
        commutation: 0.0,
        unitarity: 0.0,
        max_row_nnz: sparse.iter().map(SparseMatrix::max_row_nnz).max().unwrap_or(1),
    };
    for (a, (s, g)) in sparse.iter().zip(&gens).enumerate() {
        let j = a + 1;
        if s.max_row_nnz() > 2 {
            return Err(fail("sparsity", j, j, s.max_row_nnz() as f64));
        }
        let inv = norm(g.matmul(g)?.sub(&id)?)?;
        let uni = norm(g.adjoint().matmul(g)?.sub(&id)?)?;
        report.involution = report.involution.max(inv);
        report.unitarity = report.unitarity.max(uni);
        if inv > RELATION_TOL {
            return Err(fail("involution", j, j, inv));
        }
        if uni > RELATION_TOL {
            return Err(fail("unitarity", j, j, uni));
        }
        for (b, h) in gens.iter().enumerate().skip(a + 1) {
            let k = b + 1;
            if k == j + 1 {
                let lhs = g.matmul(h)?.matmul(g)?;
                let rhs = h.matmul(g)?.matmul(h)?;
                let r = norm(lhs.sub(&rhs)?)?;
                report.braid = report.braid.max(r);
                if r > RELATION_TOL {
                    return Err(fail("braid", j, k, r));
                }
            } else {
                let r = norm(g.matmul(h)?.sub(&h.matmul(g)?)?)?;
                report.commutation = report.commutation.max(r);
                if r > RELATION_TOL {
                    return Err(fail("commutation", j, k, r));
                }
            }
        }
    }
    Ok(report)
}
