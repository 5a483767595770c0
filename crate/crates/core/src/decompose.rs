//! Splitting a sparse Hermitian matrix into one-sparse Hermitian terms.
//!
//! Off-diagonal nonzeros form an undirected graph. A proper edge coloring
//! partitions its edges into matchings; each matching, read back as a
//! matrix, has at most one nonzero per row and is a direct sum of 2x2
//! blocks, so it exponentiates exactly. The diagonal becomes one extra term.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{SparseMatrix, C64};

/// Tolerance for the Hermiticity check on inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SparsityGraph {
    pub dim: usize,
    /// Undirected off-diagonal edges `(i, j)` with `i < j`, in lexicographic order.
    pub edges: Vec<(usize, usize)>,
    pub diagonal: Vec<(usize, f64)>,
}

impl SparsityGraph {
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.dim];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// A Hermitian matrix with at most one off-diagonal partner per index.
///
/// As a matrix it holds `amp` at `(i, j)`, `conj(amp)` at `(j, i)` for every
/// pair and the real `diag` values on the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneSparseTerm {
    pub dim: usize,
    pairs: Vec<(usize, usize, C64)>,
    diag: Vec<(usize, f64)>,
}

impl OneSparseTerm {
    /// Validates that pairs are disjoint, ordered `i < j` and in range, and that
    /// each index has at most one diagonal value.
    ///
    /// A diagonal value may share an index with a pair; the pair then becomes
    /// a general 2x2 Hermitian block.
    pub fn new(dim: usize, pairs: Vec<(usize, usize, C64)>, diag: Vec<(usize, f64)>) -> Result<Self> {
        let mut in_pair = vec![false; dim];
        for &(i, j, _) in &pairs {
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            if i >= j {
                return Err(Error::invalid(format!("pair ({i}, {j}) must satisfy i < j")));
            }
            for k in [i, j] {
                if std::mem::replace(&mut in_pair[k], true) {
                    return Err(Error::invalid(format!("index {k} appears in two pairs")));
                }
            }
        }
        let mut in_diag = vec![false; dim];
        for &(i, _) in &diag {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            if std::mem::replace(&mut in_diag[i], true) {
                return Err(Error::invalid(format!("index {i} has two diagonal values")));
            }
        }
        Ok(Self { dim, pairs, diag })
    }

    pub fn pairs(&self) -> &[(usize, usize, C64)] {
        &self.pairs
    }

    pub fn diag(&self) -> &[(usize, f64)] {
        &self.diag
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut t: Vec<(usize, usize, C64)> = Vec::with_capacity(2 * self.pairs.len() + self.diag.len());
        for &(i, j, a) in &self.pairs {
            t.push((i, j, a));
            t.push((j, i, a.conj()));
        }
        t.extend(self.diag.iter().map(|&(i, v)| (i, i, C64::new(v, 0.0))));
        SparseMatrix::from_triplets(self.dim, t).expect("validated on construction")
    }

    fn diag_map(&self) -> HashMap<usize, f64> {
        self.diag.iter().copied().collect()
    }

    /// Exact spectral norm: the largest eigenvalue magnitude over the blocks.
    pub fn spectral_norm(&self) -> f64 {
        let mut dm = self.diag_map();
        let mut norm: f64 = 0.0;
        for &(i, j, a) in &self.pairs {
            let (vi, vj) = (dm.remove(&i).unwrap_or(0.0), dm.remove(&j).unwrap_or(0.0));
            let mean = 0.5 * (vi + vj);
            let half = 0.5 * (vi - vj);
            norm = norm.max(mean.abs() + (half * half + a.norm_sqr()).sqrt());
        }
        dm.values().fold(norm, |n, v| n.max(v.abs()))
    }
}

pub fn build_graph(h: &SparseMatrix) -> Result<SparsityGraph> {
    let (defect, row, col) = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { row, col, defect });
    }
    let mut edges = Vec::new();
    let mut diagonal = Vec::new();
    for (i, j, a) in h.triplets() {
        if i == j {
            diagonal.push((i, a.re));
        } else if i < j {
            edges.push((i, j));
        }
    }
    Ok(SparsityGraph { dim: h.dim(), edges, diagonal })
}

/// Greedy proper edge coloring.
///
/// Edges are visited in lexicographic `(i, j)` order and each takes the
/// smallest color unused at both endpoints, so at most `2 * max_degree - 1`
/// colors appear. Returns one matching per color, in color order.
pub fn edge_color(g: &SparsityGraph) -> Vec<Vec<(usize, usize)>> {
    let mut edges = g.edges.clone();
    edges.sort_unstable();
    let mut used: Vec<Vec<bool>> = vec![Vec::new(); g.dim];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, j) in edges {
        let free = |u: &Vec<bool>, c: usize| !u.get(c).copied().unwrap_or(false);
        let color = (0..).find(|&c| free(&used[i], c) && free(&used[j], c)).unwrap();
        for v in [i, j] {
            if used[v].len() <= color {
                used[v].resize(color + 1, false);
            }
            used[v][color] = true;
        }
        if classes.len() <= color {
            classes.resize(color + 1, Vec::new());
        }
        classes[color].push((i, j));
    }
    classes
}

/// One term per color class (in color order), then one term holding the
/// whole diagonal if it is nonzero. The terms sum to `h`.
pub fn split_one_sparse(h: &SparseMatrix) -> Result<Vec<OneSparseTerm>> {
    let g = build_graph(h)?;
    let mut terms = Vec::new();
    for class in edge_color(&g) {
        let pairs = class.into_iter().map(|(i, j)| (i, j, h.get(i, j))).collect();
        terms.push(OneSparseTerm::new(h.dim(), pairs, Vec::new())?);
    }
    if !g.diagonal.is_empty() {
        terms.push(OneSparseTerm::new(h.dim(), Vec::new(), g.diagonal)?);
    }
    Ok(terms)
}

/// `exp(-i theta T)` in closed form, block by block.
///
/// For a block `[[vi, a], [conj(a), vj]] = m I + K` with `m = (vi + vj)/2`,
/// `K` traceless and `w = sqrt(((vi - vj)/2)^2 + |a|^2)`, the exponential is
/// `e^{-i theta m} (cos(theta w) I - i sin(theta w)/w K)`.
pub fn exp_term(term: &OneSparseTerm, theta: f64) -> SparseMatrix {
    let n = term.dim;
    let one = C64::new(1.0, 0.0);
    let mut rows: Vec<Vec<(usize, C64)>> = (0..n).map(|i| vec![(i, one)]).collect();
    let mut dm = term.diag_map();
    for &(i, j, a) in &term.pairs {
        let (vi, vj) = (dm.remove(&i).unwrap_or(0.0), dm.remove(&j).unwrap_or(0.0));
        let mean = 0.5 * (vi + vj);
        let half = 0.5 * (vi - vj);
        let w = (half * half + a.norm_sqr()).sqrt();
        let phase = C64::from_polar(1.0, -theta * mean);
        let (c, s_over_w) = if w == 0.0 {
            (1.0, theta)
        } else {
            ((theta * w).cos(), (theta * w).sin() / w)
        };
        let mi = C64::new(0.0, -s_over_w);
        let e_ii = phase * (C64::new(c, 0.0) + mi * half);
        let e_jj = phase * (C64::new(c, 0.0) - mi * half);
        let e_ij = phase * mi * a;
        let e_ji = phase * mi * a.conj();
        rows[i] = vec![(i, e_ii), (j, e_ij)];
        rows[j] = vec![(i, e_ji), (j, e_jj)];
    }
    for (i, v) in dm {
        rows[i] = vec![(i, C64::from_polar(1.0, -theta * v))];
    }
    for row in &mut rows {
        row.retain(|(_, a)| a.norm() >= crate::sparse::DROP_TOLERANCE);
    }
    SparseMatrix::from_sorted_rows(n, rows)
}
