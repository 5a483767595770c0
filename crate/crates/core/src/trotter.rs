//! Product-formula approximation of `exp(-i H t)` from exactly exponentiated
//! one-sparse terms, with repetition counts chosen to meet an operator-norm
//! target.
//!
//! With terms `H_1 .. H_M` and step `theta = t / r`, one slice is
//!
//! * order 1: `exp(-i theta H_1)`, then `H_2`, ..., then `H_M`;
//! * order 2: half steps on `H_1 .. H_{M-1}`, a full step on `H_M`, then the
//!   half steps again in reverse (`2M - 1` factors).
//!
//! The slice is repeated `r` times. Factors are listed in application order:
//! the first factor acts on the state first.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decompose::{exp_term, split_one_sparse, OneSparseTerm};
use crate::dilation::is_involutory;
use crate::error::{Error, Result};
use crate::sparse::{
    adjoint_matvec_into, combinatorial_blocks, distance, matvec_into, mtx, power_iteration, DenseMatrix, LinearOp, SparseMatrix,
    StateVector, C64, DENSE_CAP, SPECTRAL_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    First,
    Second,
}

impl TryFrom<u8> for Order {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            other => Err(format!("product-formula order must be 1 or 2, got {other}")),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        match o {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

/// Knobs for [`trotterize_with`].
#[derive(Clone, Debug)]
pub struct TrotterOptions {
    /// Largest repetition count accepted before giving up on the target.
    pub repetition_cap: u64,
    /// Probe budget for the empirical search.
    pub max_probes: usize,
    /// Search with the dense oracle when the dimension allows it; otherwise
    /// fall back to the analytic first-order count.
    pub use_dense_oracle: bool,
}

impl Default for TrotterOptions {
    fn default() -> Self {
        Self { repetition_cap: 1 << 20, max_probes: 20, use_dense_oracle: true }
    }
}

/// An ordered list of exactly unitary sparse factors approximating `exp(-i H t)`.
///
/// Only one slice is stored; the full factor list is that slice repeated
/// `r` times.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredEvolution {
    pub dim: usize,
    slice: Vec<SparseMatrix>,
    pub r: u64,
    pub order: Order,
    pub target_t: f64,
    pub term_count: usize,
    pub epsilon: Option<f64>,
    /// Upper bound on `||product - exp(-i H t)||` from the per-slice telescoping
    /// estimate, when the dense oracle was used.
    pub certified_error: Option<f64>,
}

impl FactoredEvolution {
    pub fn slice(&self) -> &[SparseMatrix] {
        &self.slice
    }

    /// All factors in application order.
    pub fn factors(&self) -> impl Iterator<Item = &SparseMatrix> + '_ {
        (0..self.r).flat_map(move |_| self.slice.iter())
    }

    pub fn factor_count(&self) -> u64 {
        self.r * self.slice.len() as u64
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        apply_factored(self, v)
    }

    /// Dense product of all factors, by repeated squaring of the slice product.
    pub fn dense_product(&self) -> Result<DenseMatrix> {
        slice_product(&self.slice, self.dim)?.pow(self.r)
    }
}

fn slice_product(slice: &[SparseMatrix], dim: usize) -> Result<DenseMatrix> {
    let mut p = DenseMatrix::identity(dim)?;
    for f in slice {
        p = p.left_mul_sparse(f)?;
    }
    Ok(p)
}

fn build_slice(terms: &[OneSparseTerm], theta: f64, order: Order) -> Vec<SparseMatrix> {
    match order {
        Order::First => terms.iter().map(|t| exp_term(t, theta)).collect(),
        Order::Second => {
            let (last, rest) = match terms.split_last() {
                Some(x) => x,
                None => return Vec::new(),
            };
            let half: Vec<SparseMatrix> = rest.iter().map(|t| exp_term(t, theta / 2.0)).collect();
            let mut s = half.clone();
            s.push(exp_term(last, theta));
            s.extend(half.into_iter().rev());
            s
        }
    }
}

fn hermitian_terms(h: &SparseMatrix) -> Result<Vec<OneSparseTerm>> {
    split_one_sparse(h)
}

/// Product formula with a fixed repetition count; no error certification.
pub fn trotterize_fixed(h: &SparseMatrix, t: f64, r: u64, order: Order) -> Result<FactoredEvolution> {
    if r == 0 {
        return Err(Error::invalid("repetition count must be at least 1"));
    }
    let terms = hermitian_terms(h)?;
    Ok(FactoredEvolution {
        dim: h.dim(),
        slice: build_slice(&terms, t / r as f64, order),
        r,
        order,
        target_t: t,
        term_count: terms.len(),
        epsilon: None,
        certified_error: None,
    })
}

pub fn trotterize(h: &SparseMatrix, t: f64, epsilon: f64, order: Order) -> Result<FactoredEvolution> {
    trotterize_with(h, t, epsilon, order, &TrotterOptions::default())
}

/// Product formula meeting `||product - exp(-i h t)|| <= epsilon`.
///
/// The analytic count `r0 = ceil((M t L)^2 / epsilon)` (`M` terms, `L` the
/// largest term norm) is used as is when the dimension is above the dense
/// cap. Otherwise `r` is found empirically: doubling from 1 until the
/// certified bound `r * ||S(t/r) - exp(-i h t/r)||` meets `epsilon`, then
/// bisecting down, within the probe budget. The bound telescopes, so it is an
/// upper bound on the error of the whole product.
pub fn trotterize_with(
    h: &SparseMatrix,
    t: f64,
    epsilon: f64,
    order: Order,
    opts: &TrotterOptions,
) -> Result<FactoredEvolution> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let terms = hermitian_terms(h)?;
    let m = terms.len();
    let make = |r: u64, certified: Option<f64>| FactoredEvolution {
        dim: h.dim(),
        slice: build_slice(&terms, t / r as f64, order),
        r,
        order,
        target_t: t,
        term_count: m,
        epsilon: Some(epsilon),
        certified_error: certified,
    };
    if m <= 1 {
        // A single term is exponentiated exactly.
        return Ok(make(1, Some(0.0)));
    }

    let lambda = terms.iter().map(OneSparseTerm::spectral_norm).fold(0.0, f64::max);
    let r0_f = ((m as f64 * t.abs() * lambda).powi(2) / epsilon).ceil().max(1.0);
    let r0 = if r0_f > u64::MAX as f64 { u64::MAX } else { r0_f as u64 };

    if !opts.use_dense_oracle || h.dim() > DENSE_CAP {
        if r0 > opts.repetition_cap {
            return Err(Error::RepetitionCap { required: r0, cap: opts.repetition_cap });
        }
        return Ok(make(r0, None));
    }

    // Every factor and the exact step preserve the invariant blocks of h, so
    // the slice defect is bounded block by block.
    let blocks = BlockSplit::new(h);
    let h_blocks = blocks.split(h);
    let exact: Vec<ExactGenerator> = h_blocks.iter().map(ExactGenerator::new).collect::<Result<_>>()?;
    let mut warm: Vec<Option<Vec<C64>>> = vec![None; exact.len()];
    let mut probes = 0usize;
    let mut bound = |r: u64| -> Result<f64> {
        let theta = t / r as f64;
        let slice = build_slice(&terms, theta, order);
        let mut per_block: Vec<Vec<SparseMatrix>> = vec![Vec::with_capacity(slice.len()); exact.len()];
        for f in &slice {
            for (k, part) in blocks.split(f).into_iter().enumerate() {
                per_block[k].push(part);
            }
        }
        let mut worst: f64 = 0.0;
        for ((sub, gen), w) in per_block.into_iter().zip(&exact).zip(warm.iter_mut()) {
            let op = SliceDefect { slice: sub, exact: gen.at(theta)? };
            // both operands are unitary, so rounding is bounded by a multiple of sqrt(dim)
            let floor = 32.0 * f64::EPSILON * (op.dim() as f64).sqrt();
            let (s, v) = power_iteration(&op, SPECTRAL_TOL, floor, w.as_deref())?;
            *w = Some(v);
            worst = worst.max(s + floor);
        }
        Ok(r as f64 * worst)
    };

    let mut lo = 0u64;
    let mut hi: Option<(u64, f64)> = None;
    let mut r = 1u64;
    while probes < opts.max_probes {
        probes += 1;
        let b = bound(r)?;
        if b <= epsilon {
            hi = Some((r, b));
            break;
        }
        lo = r;
        if r >= opts.repetition_cap {
            break;
        }
        r = (r * 2).min(opts.repetition_cap);
    }
    let Some((mut best, mut best_bound)) = hi else {
        if lo >= opts.repetition_cap {
            return Err(Error::RepetitionCap { required: r0.max(lo + 1), cap: opts.repetition_cap });
        }
        // Probe budget exhausted: fall back to the analytic count.
        if r0 > opts.repetition_cap {
            return Err(Error::RepetitionCap { required: r0, cap: opts.repetition_cap });
        }
        return Ok(make(r0, None));
    };
    while best - lo > 1 && probes < opts.max_probes {
        let mid = lo + (best - lo) / 2;
        probes += 1;
        let b = bound(mid)?;
        if b <= epsilon {
            best = mid;
            best_bound = b;
        } else {
            lo = mid;
        }
    }
    Ok(make(best, Some(best_bound)))
}

/// Invariant index blocks of a matrix and the restriction of block-preserving
/// matrices to them.
struct BlockSplit {
    block_of: Vec<usize>,
    local: Vec<usize>,
    sizes: Vec<usize>,
}

impl BlockSplit {
    fn new(h: &SparseMatrix) -> Self {
        let blocks = combinatorial_blocks(h);
        let mut block_of = vec![0; h.dim()];
        let mut local = vec![0; h.dim()];
        for (k, b) in blocks.iter().enumerate() {
            for (pos, &i) in b.iter().enumerate() {
                block_of[i] = k;
                local[i] = pos;
            }
        }
        Self { block_of, local, sizes: blocks.iter().map(Vec::len).collect() }
    }

    /// Diagonal blocks of `m`, which must not couple different blocks.
    fn split(&self, m: &SparseMatrix) -> Vec<SparseMatrix> {
        let mut rows: Vec<Vec<Vec<(usize, C64)>>> = self.sizes.iter().map(|&n| Vec::with_capacity(n)).collect();
        for i in 0..m.dim() {
            let k = self.block_of[i];
            debug_assert!(m.row(i).iter().all(|&(c, _)| self.block_of[c] == k));
            let mut row: Vec<(usize, C64)> = m.row(i).iter().map(|&(c, a)| (self.local[c], a)).collect();
            row.sort_by_key(|e| e.0);
            rows[k].push(row);
        }
        rows.into_iter().zip(&self.sizes).map(|(r, &n)| SparseMatrix::from_sorted_rows(n, r)).collect()
    }
}

/// `exp(-i theta H)` for the selected slice step.
enum ExactGenerator<'a> {
    Involutory(&'a SparseMatrix),
    Dense(DenseMatrix),
}

impl<'a> ExactGenerator<'a> {
    fn new(h: &'a SparseMatrix) -> Result<Self> {
        if is_involutory(h) {
            Ok(Self::Involutory(h))
        } else {
            Ok(Self::Dense(DenseMatrix::from_sparse(h)?))
        }
    }

    fn at(&self, theta: f64) -> Result<ExactStep<'a>> {
        Ok(match self {
            Self::Involutory(h) => ExactStep::Involutory { h, cos: theta.cos(), sin: theta.sin() },
            Self::Dense(h) => ExactStep::Dense(DenseMatrix::exp_hermitian(h, theta)?),
        })
    }
}

enum ExactStep<'a> {
    Involutory { h: &'a SparseMatrix, cos: f64, sin: f64 },
    Dense(DenseMatrix),
}

/// The operator `S - E` for a slice `S` and exact step `E`, applied matrix-free.
struct SliceDefect<'a> {
    slice: Vec<SparseMatrix>,
    exact: ExactStep<'a>,
}

impl LinearOp for SliceDefect<'_> {
    fn dim(&self) -> usize {
        match &self.exact {
            ExactStep::Involutory { h, .. } => h.dim(),
            ExactStep::Dense(e) => e.dim(),
        }
    }

    fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        let n = v.len();
        let mut cur = v.to_vec();
        let mut tmp = vec![C64::new(0.0, 0.0); n];
        for f in &self.slice {
            matvec_into(f, &cur, &mut tmp);
            std::mem::swap(&mut cur, &mut tmp);
        }
        match &self.exact {
            ExactStep::Involutory { h, cos, sin } => {
                matvec_into(h, v, &mut tmp);
                for k in 0..n {
                    out[k] = cur[k] - (v[k] * *cos - C64::new(0.0, *sin) * tmp[k]);
                }
            }
            ExactStep::Dense(e) => {
                e.matvec_into(v, &mut tmp);
                for k in 0..n {
                    out[k] = cur[k] - tmp[k];
                }
            }
        }
    }

    fn apply_adjoint_into(&self, v: &[C64], out: &mut [C64]) {
        let n = v.len();
        let mut cur = v.to_vec();
        let mut tmp = vec![C64::new(0.0, 0.0); n];
        for f in self.slice.iter().rev() {
            adjoint_matvec_into(f, &cur, &mut tmp);
            std::mem::swap(&mut cur, &mut tmp);
        }
        match &self.exact {
            ExactStep::Involutory { h, cos, sin } => {
                matvec_into(h, v, &mut tmp);
                for k in 0..n {
                    out[k] = cur[k] - (v[k] * *cos + C64::new(0.0, *sin) * tmp[k]);
                }
            }
            ExactStep::Dense(e) => {
                e.adjoint_matvec_into(v, &mut tmp);
                for k in 0..n {
                    out[k] = cur[k] - tmp[k];
                }
            }
        }
    }
}

/// Runs `v` through every factor in order.
pub fn apply_factored(f: &FactoredEvolution, v: &StateVector) -> Result<StateVector> {
    if v.dim() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: v.dim() });
    }
    let mut cur = v.amps().to_vec();
    let mut tmp = vec![C64::new(0.0, 0.0); f.dim];
    for factor in f.factors() {
        matvec_into(factor, &cur, &mut tmp);
        std::mem::swap(&mut cur, &mut tmp);
    }
    Ok(StateVector::new(cur))
}

/// `exp(-i h t)` densely: the closed form when `h^2 = I`, otherwise scaling
/// and squaring.
pub fn exact_evolution(h: &SparseMatrix, t: f64) -> Result<DenseMatrix> {
    let dense = DenseMatrix::from_sparse(h)?;
    if is_involutory(h) {
        let id = DenseMatrix::identity(h.dim())?;
        return id.scale(C64::new(t.cos(), 0.0)).add(&dense.scale(C64::new(0.0, -t.sin())));
    }
    DenseMatrix::exp_hermitian(&dense, t)
}

/// `||dense product of factors - exp(-i h t)||` in spectral norm.
pub fn measured_error(f: &FactoredEvolution, h: &SparseMatrix) -> Result<f64> {
    if h.dim() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: h.dim() });
    }
    let product = f.dense_product()?;
    let exact = exact_evolution(h, f.target_t)?;
    distance(&product, &exact, false)
}

/// On-disk description of a [`FactoredEvolution`].
///
/// `factor_files` lists one slice in application order, relative to the
/// manifest's directory; the full evolution repeats it `r` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionManifest {
    pub dim: usize,
    pub t: f64,
    pub order: Order,
    pub r: u64,
    pub term_count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified_error: Option<f64>,
    pub factor_files: Vec<String>,
}

/// Writes the slice factors as Matrix Market files next to `path`, then the
/// JSON manifest itself.
pub fn write_manifest(f: &FactoredEvolution, path: impl AsRef<Path>) -> Result<EvolutionManifest> {
    let path = path.as_ref();
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::invalid(format!("bad manifest path {}", path.display())))?;
    let mut factor_files = Vec::with_capacity(f.slice.len());
    for (k, factor) in f.slice.iter().enumerate() {
        let name = format!("{stem}.factor-{k:03}.mtx");
        mtx::write(factor, dir.join(&name))?;
        factor_files.push(name);
    }
    let manifest = EvolutionManifest {
        dim: f.dim,
        t: f.target_t,
        order: f.order,
        r: f.r,
        term_count: f.term_count,
        epsilon: f.epsilon,
        certified_error: f.certified_error,
        factor_files,
    };
    fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<FactoredEvolution> {
    let path = path.as_ref();
    let manifest: EvolutionManifest = serde_json::from_str(&fs::read_to_string(path)?)?;
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let slice = manifest
        .factor_files
        .iter()
        .map(|name| {
            let m = mtx::read(dir.join(name))?;
            if m.dim() != manifest.dim {
                return Err(Error::DimensionMismatch { expected: manifest.dim, found: m.dim() });
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    if manifest.r == 0 {
        return Err(Error::invalid("manifest repetition count must be at least 1"));
    }
    Ok(FactoredEvolution {
        dim: manifest.dim,
        slice,
        r: manifest.r,
        order: manifest.order,
        target_t: manifest.t,
        term_count: manifest.term_count,
        epsilon: manifest.epsilon,
        certified_error: manifest.certified_error,
    })
}
