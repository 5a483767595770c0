//! Operator (spectral) norm by power iteration on `A^dagger A`, and the
//! plain / global-phase-invariant distances built on it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{DenseMatrix, C64, DENSE_CAP};

pub const SPECTRAL_TOL: f64 = 1e-10;
pub const SPECTRAL_ITERATION_CAP: usize = 10_000;

const PHASE_GRID: usize = 720;
const GRAM_SQUARINGS: usize = 10;
const GRID_TOL: f64 = 1e-6;

/// A square linear map known through products with a vector and with its adjoint.
pub trait LinearOp {
    fn dim(&self) -> usize;
    fn apply_into(&self, v: &[C64], out: &mut [C64]);
    fn apply_adjoint_into(&self, v: &[C64], out: &mut [C64]);
}

impl LinearOp for DenseMatrix {
    fn dim(&self) -> usize {
        DenseMatrix::dim(self)
    }

    fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        self.matvec_into(v, out)
    }

    fn apply_adjoint_into(&self, v: &[C64], out: &mut [C64]) {
        self.adjoint_matvec_into(v, out)
    }
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn frobenius(m: &DenseMatrix) -> f64 {
    (0..m.dim()).map(|i| norm2(m.row(i)).powi(2)).sum::<f64>().sqrt()
}

fn start_vector(n: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(1.0 + rng.gen::<f64>(), rng.gen::<f64>() - 0.5))
        .collect();
    let s = norm2(&v);
    v.into_iter().map(|a| a / s).collect()
}

/// Largest singular value of `op` to relative accuracy `tol`.
///
/// Returns the estimate and the converged right singular vector, which can
/// seed a later call on a nearby operator through `start`.
pub fn spectral_norm_op<A: LinearOp + ?Sized>(
    op: &A,
    tol: f64,
    start: Option<&[C64]>,
) -> Result<(f64, Vec<C64>)> {
    power_iteration(op, tol, 0.0, start)
}

/// As [`spectral_norm_op`], also stopping once successive estimates agree to
/// within `floor` in absolute terms.
pub(crate) fn power_iteration<A: LinearOp + ?Sized>(
    op: &A,
    tol: f64,
    floor: f64,
    start: Option<&[C64]>,
) -> Result<(f64, Vec<C64>)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("spectral norm tolerance must be positive"));
    }
    let n = op.dim();
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let mut v = match start {
        Some(s) if s.len() == n && norm2(s) > 0.0 => {
            let s_norm = norm2(s);
            s.iter().map(|a| a / s_norm).collect()
        }
        _ => start_vector(n),
    };
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut sigma = 0.0;
    for _ in 0..SPECTRAL_ITERATION_CAP {
        op.apply_into(&v, &mut w);
        let next = norm2(&w);
        if next == 0.0 {
            // v lies in the kernel; a fresh start only helps if we have not used it yet.
            if start.is_some() {
                return power_iteration(op, tol, floor, None);
            }
            return Ok((0.0, v));
        }
        op.apply_adjoint_into(&w, &mut u);
        let un = norm2(&u);
        if un == 0.0 {
            return Ok((next, v));
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / un;
        }
        if (next - sigma).abs() <= tol * next + floor {
            return Ok((next.max(sigma), v));
        }
        sigma = next;
    }
    squared_power_iteration(op, tol, floor, &v)
}

/// Power iteration on `(A^dagger A)^(2^GRAM_SQUARINGS)`, formed densely.
///
/// Used once plain iteration reaches the cap: raising the Gram matrix to a
/// high power widens the relative gap between clustered top singular values.
fn squared_power_iteration<A: LinearOp + ?Sized>(op: &A, tol: f64, floor: f64, seed: &[C64]) -> Result<(f64, Vec<C64>)> {
    let n = op.dim();
    let fail = Err(Error::NoConvergence { iterations: SPECTRAL_ITERATION_CAP });
    if n > DENSE_CAP {
        return fail;
    }
    let mut cols = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut e = vec![C64::new(0.0, 0.0); n];
    for (j, col) in cols.iter_mut().enumerate() {
        e[j] = C64::new(1.0, 0.0);
        op.apply_into(&e, col);
        e[j] = C64::new(0.0, 0.0);
    }
    let a = DenseMatrix::from_fn(n, |i, j| cols[j][i])?;
    let mut p = a.adjoint().matmul(&a)?;
    for _ in 0..GRAM_SQUARINGS {
        let scale = p.max_abs();
        if scale == 0.0 {
            return Ok((0.0, seed.to_vec()));
        }
        let q = p.scale(C64::new(1.0 / scale, 0.0));
        p = q.matmul(&q)?;
    }
    let mut v = seed.to_vec();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut sigma = 0.0;
    for _ in 0..SPECTRAL_ITERATION_CAP {
        let pv = p.matvec(&v);
        let pn = norm2(&pv);
        if pn == 0.0 {
            return fail;
        }
        v = pv.into_iter().map(|x| x / pn).collect();
        a.matvec_into(&v, &mut w);
        let next = norm2(&w);
        if (next - sigma).abs() <= tol * next + floor {
            return Ok((next.max(sigma), v));
        }
        sigma = next;
    }
    fail
}

/// Connected components of the joint nonzero pattern of `ms`, symmetrized.
///
/// Every matrix in `ms` (and any linear combination of them) is block
/// diagonal with respect to these index sets.
pub(crate) fn dense_blocks(ms: &[&DenseMatrix]) -> Vec<Vec<usize>> {
    let n = ms.first().map_or(0, |m| m.dim());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for m in ms {
        for i in 0..n {
            for (j, a) in m.row(i).iter().enumerate() {
                if j != i && *a != C64::new(0.0, 0.0) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
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

/// Spectral norm as the largest block norm. Power iteration converges far
/// faster on each small block than on the whole matrix, whose top singular
/// values may be nearly degenerate copies from different blocks.
fn norm_by_blocks(
    m: &DenseMatrix,
    blocks: &[Vec<usize>],
    tol: f64,
    floor: f64,
    warm: &mut [Option<Vec<C64>>],
) -> Result<f64> {
    if blocks.len() <= 1 {
        let (s, v) = power_iteration(m, tol, floor, warm.first().and_then(|w| w.as_deref()))?;
        if let Some(w) = warm.first_mut() {
            *w = Some(v);
        }
        return Ok(s);
    }
    let mut best: f64 = 0.0;
    for (b, w) in blocks.iter().zip(warm.iter_mut()) {
        let sub = DenseMatrix::from_fn(b.len(), |i, j| m[(b[i], b[j])])?;
        let (s, v) = power_iteration(&sub, tol, floor, w.as_deref())?;
        *w = Some(v);
        best = best.max(s);
    }
    Ok(best)
}

/// Largest singular value of a dense matrix.
///
/// A matrix that is block diagonal up to a simultaneous permutation of rows
/// and columns is handled block by block.
pub fn spectral_norm(m: &DenseMatrix, tol: f64) -> Result<f64> {
    let blocks = dense_blocks(&[m]);
    norm_by_blocks(m, &blocks, tol, 0.0, &mut vec![None; blocks.len()])
}

/// Spectral-norm distance `||a - b||`.
///
/// With `phase_invariant`, returns the minimum over global phases `phi` of
/// `||a - e^{i phi} b||`: a 720-point grid followed by golden-section
/// refinement around the best grid point. The result never exceeds the
/// plain distance.
///
/// Estimates are accurate to relative `SPECTRAL_TOL` or to the rounding
/// floor of the operands, whichever is looser.
pub fn distance(a: &DenseMatrix, b: &DenseMatrix, phase_invariant: bool) -> Result<f64> {
    let plain_diff = a.sub(b)?;
    let blocks = dense_blocks(&[a, b]);
    let mut warm: Vec<Option<Vec<C64>>> = vec![None; blocks.len()];
    let floor = 16.0 * f64::EPSILON * (frobenius(a) + frobenius(b));
    let plain = norm_by_blocks(&plain_diff, &blocks, SPECTRAL_TOL, floor, &mut warm)?;
    if !phase_invariant || plain == 0.0 {
        return Ok(plain);
    }

    let diff_at = |phi: f64| a.sub(&b.scale(C64::from_polar(1.0, phi)));
    let mut best = (plain, 0.0);
    for k in 0..PHASE_GRID {
        let phi = 2.0 * PI * k as f64 / PHASE_GRID as f64;
        let s = norm_by_blocks(&diff_at(phi)?, &blocks, GRID_TOL, floor, &mut warm)?;
        if s < best.0 {
            best = (s, phi);
        }
    }

    let step = 2.0 * PI / PHASE_GRID as f64;
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut eval = |phi: f64| -> Result<f64> { norm_by_blocks(&diff_at(phi)?, &blocks, SPECTRAL_TOL, floor, &mut warm) };
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    for _ in 0..48 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = eval(x2)?;
        }
    }
    let refined = eval(0.5 * (lo + hi))?.min(f1).min(f2);
    Ok(refined.min(plain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(rows: &[[(f64, f64); 2]; 2]) -> DenseMatrix {
        DenseMatrix::from_fn(2, |i, j| C64::new(rows[i][j].0, rows[i][j].1)).unwrap()
    }

    #[test]
    fn identity_has_unit_norm() {
        let i = DenseMatrix::identity(5).unwrap();
        assert!((spectral_norm(&i, 1e-10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_singular_value() {
        let m = d(&[[(0.0, 0.0), (2.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]]);
        assert!((spectral_norm(&m, 1e-10).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_and_bad_tol() {
        let z = DenseMatrix::zeros(3).unwrap();
        assert_eq!(spectral_norm(&z, 1e-10).unwrap(), 0.0);
        assert!(spectral_norm(&z, 0.0).is_err());
    }

    #[test]
    fn x_versus_z() {
        let x = d(&[[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]]);
        let z = d(&[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]]);
        let dist = distance(&x, &z, false).unwrap();
        assert!((dist - 2f64.sqrt()).abs() < 1e-10);
        assert!(distance(&x, &z, true).unwrap() <= dist);
    }

    #[test]
    fn global_phase_is_ignored() {
        let u = d(&[[(0.6, 0.0), (0.0, 0.8)], [(0.0, 0.8), (0.6, 0.0)]]);
        let v = u.scale(C64::new(0.0, -1.0));
        assert!((distance(&u, &v, false).unwrap() - 2f64.sqrt()).abs() < 1e-9);
        assert!(distance(&u, &v, true).unwrap() < 1e-10);
        assert_eq!(distance(&u, &u, false).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DenseMatrix::identity(2).unwrap();
        let b = DenseMatrix::identity(3).unwrap();
        assert!(matches!(distance(&a, &b, false), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn block_diagonal_takes_largest_block() {
        // blocks {0, 2} and {1}
        let m = DenseMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 2) => C64::new(3.0, 0.0),
            (2, 0) => C64::new(0.0, 1.0),
            (1, 1) => C64::new(-2.5, 0.0),
            _ => C64::new(0.0, 0.0),
        })
        .unwrap();
        assert_eq!(dense_blocks(&[&m]).len(), 2);
        assert!((spectral_norm(&m, 1e-12).unwrap() - 3.0).abs() < 1e-12);
    }
}
