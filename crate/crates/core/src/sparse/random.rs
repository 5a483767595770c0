use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{SparseMatrix, C64};

const ROUND_CAP: usize = 64;

/// Random `N x N` unitary with at most `d` nonzeros per row and column.
///
/// Starts from a random permutation with random phases, then applies rounds
/// of random disjoint 2x2 rotations, each accepted only if it keeps every
/// row and column within `d` nonzeros. Stops once some row reaches `d`
/// nonzeros (and every row is given a chance in the round) or after
/// 64 rounds. Deterministic per seed.
pub fn random_sparse_unitary(n: usize, d: usize, seed: u64) -> Result<SparseMatrix> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::invalid(format!("infeasible sparsity d={d} for dimension N={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut rows: Vec<Vec<(usize, C64)>> = perm
        .iter()
        .map(|&c| vec![(c, C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)))])
        .collect();
    let mut col_count = vec![1usize; n];

    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..ROUND_CAP {
        if rows.iter().map(Vec::len).max().unwrap_or(0) >= d {
            break;
        }
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            let (i, j) = (pair[0], pair[1]);
            let union = merged_support(&rows[i], &rows[j]);
            if union.len() > d {
                continue;
            }
            // A column present in only one of the two rows gains an entry.
            let grows = |c: usize| {
                let in_i = rows[i].iter().any(|&(x, _)| x == c);
                let in_j = rows[j].iter().any(|&(x, _)| x == c);
                in_i != in_j
            };
            if union.iter().any(|&c| grows(c) && col_count[c] + 1 > d) {
                continue;
            }
            for &c in &union {
                if grows(c) {
                    col_count[c] += 1;
                }
            }
            let theta = rng.gen_range(0.15..(PI / 2.0 - 0.15));
            let (a, b, g) = (
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..2.0 * PI),
            );
            // [[cos e^{ia}, sin e^{ib}], [-sin e^{i(g-b)}, cos e^{i(g-a)}]] is unitary.
            let (cs, sn) = (theta.cos(), theta.sin());
            let m00 = C64::from_polar(cs, a);
            let m01 = C64::from_polar(sn, b);
            let m10 = -C64::from_polar(sn, g - b);
            let m11 = C64::from_polar(cs, g - a);
            let get = |row: &[(usize, C64)], c: usize| {
                row.iter().find(|&&(x, _)| x == c).map_or(C64::new(0.0, 0.0), |&(_, v)| v)
            };
            let new_i = union.iter().map(|&c| (c, m00 * get(&rows[i], c) + m01 * get(&rows[j], c))).collect();
            let new_j = union.iter().map(|&c| (c, m10 * get(&rows[i], c) + m11 * get(&rows[j], c))).collect();
            rows[i] = new_i;
            rows[j] = new_j;
        }
    }
    SparseMatrix::from_rows(n, rows)
}

fn merged_support(a: &[(usize, C64)], b: &[(usize, C64)]) -> Vec<usize> {
    let mut s: Vec<usize> = a.iter().chain(b).map(|&(c, _)| c).collect();
    s.sort_unstable();
    s.dedup();
    s
}
