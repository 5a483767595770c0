#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_unitary::{random_sparse_unitary, SparseMatrix, StateVector, C64};

/// `(n, d, seed)` for the shared unitary fixtures: every combination of
/// `n in {16, 64, 256}` and `d in {2, 4, 8}` at least twice.
pub fn fixture_params() -> Vec<(usize, usize, u64)> {
    (0..20).map(|k| ([16, 64, 256][k % 3], [2, 4, 8][(k / 3) % 3], 1000 + k as u64)).collect()
}

pub fn fixtures() -> Vec<(usize, usize, SparseMatrix)> {
    fixture_params()
        .into_iter()
        .map(|(n, d, seed)| (n, d, random_sparse_unitary(n, d, seed).unwrap()))
        .collect()
}

/// Uniformly random unit vector.
pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..n)
        .map(|_| C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal)))
        .collect();
    StateVector::new(amps).renormalized()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense `U psi` by explicit row-by-column sums over a fully materialized matrix.
pub fn dense_apply(u: &SparseMatrix, psi: &StateVector) -> Vec<C64> {
    let n = u.dim();
    (0..n)
        .map(|i| (0..n).map(|j| u.get(i, j) * psi.amps()[j]).sum())
        .collect()
}

pub fn vec_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Standard tableaux of shape `lambda`, counted by filling cells with
/// `1..=n` in every order allowed by rows and columns growing left to right
/// and top to bottom.
pub fn brute_force_tableaux_count(lambda: &[usize]) -> usize {
    fn fill(lambda: &[usize], filled: &mut Vec<usize>, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        let mut count = 0;
        for r in 0..lambda.len() {
            let c = filled[r];
            let above_ok = r == 0 || filled[r - 1] > c;
            if c < lambda[r] && above_ok {
                filled[r] += 1;
                count += fill(lambda, filled, left - 1);
                filled[r] -= 1;
            }
        }
        count
    }
    let n = lambda.iter().sum();
    fill(lambda, &mut vec![0; lambda.len()], n)
}
