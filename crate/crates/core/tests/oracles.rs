//! Library results checked against independently computed references.

mod common;

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use sparse_unitary::decompose::{exp_term, split_one_sparse, OneSparseTerm};
use sparse_unitary::dilation::dilate;
use sparse_unitary::models::symrep::{hook_length_dim, partitions, YoungTableauBasis};
use sparse_unitary::models::walk::walk_step;
use sparse_unitary::sparse::combinatorial_blocks;
use sparse_unitary::trotter::{exact_evolution, measured_error, trotterize_fixed, Order};
use sparse_unitary::{apply, distance, spectral_norm, DenseMatrix, SparseMatrix, C64};

use common::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `exp(-i theta B)` for a 2x2 Hermitian `B = [[p, a], [conj a, q]]` from its
/// eigendecomposition.
fn exp_block_by_eigenvectors(p: f64, q: f64, a: C64, theta: f64) -> [[C64; 2]; 2] {
    let m = 0.5 * (p + q);
    let w = (0.25 * (p - q) * (p - q) + a.norm_sqr()).sqrt();
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for lambda in [m + w, m - w] {
        // (B - lambda) v = 0  =>  v = (a, lambda - p)
        let v = [a, c(lambda - p, 0.0)];
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let v = [v[0] / norm, v[1] / norm];
        let phase = C64::from_polar(1.0, -theta * lambda);
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += phase * v[r] * v[s].conj();
            }
        }
    }
    out
}

#[test]
fn exp_term_matches_eigendecomposition() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let (p, q): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let theta = rng.gen_range(-3.0..3.0);
        let term = OneSparseTerm::new(4, vec![(1, 3, a)], vec![(1, p), (3, q), (0, 0.7)]).unwrap();
        let e = exp_term(&term, theta);
        let want = exp_block_by_eigenvectors(p, q, a, theta);
        for (r, &i) in [1usize, 3].iter().enumerate() {
            for (s, &j) in [1usize, 3].iter().enumerate() {
                assert!((e.get(i, j) - want[r][s]).norm() < 1e-13);
            }
        }
        assert!((e.get(0, 0) - C64::from_polar(1.0, -0.7 * theta)).norm() < 1e-15);
        assert_eq!(e.get(2, 2), c(1.0, 0.0));
    }
}

#[test]
fn sparse_apply_matches_dense_sums() {
    for (_, _, u) in fixtures().into_iter().take(9) {
        let mut r = rng(u.nnz() as u64);
        let psi = random_state(u.dim(), &mut r);
        let got = apply(&u, &psi).unwrap();
        assert!(vec_distance(got.amps(), &dense_apply(&u, &psi)) < 1e-13);
    }
}

#[test]
fn scaling_and_squaring_matches_closed_form() {
    for (_, _, u) in fixtures().into_iter().take(6) {
        let h = dilate(&u).unwrap().h;
        let closed = exact_evolution(&h, 0.9).unwrap();
        let taylor = DenseMatrix::exp_hermitian(&DenseMatrix::from_sparse(&h).unwrap(), 0.9).unwrap();
        assert!(closed.sub(&taylor).unwrap().max_abs() < 1e-12);
    }
    let d = [0.3, -1.7, 4.0, 12.5];
    let h = DenseMatrix::from_fn(4, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) }).unwrap();
    let e = DenseMatrix::exp_hermitian(&h, 2.0).unwrap();
    for (i, &v) in d.iter().enumerate() {
        assert!((e[(i, i)] - C64::from_polar(1.0, -2.0 * v)).norm() < 1e-12);
    }
}

#[test]
fn spectral_norm_of_known_matrices() {
    let d = [c(0.5, 0.0), c(0.0, -3.0), c(2.0, 2.0)];
    let m = DenseMatrix::from_fn(3, |i, j| if i == j { d[i] } else { c(0.0, 0.0) }).unwrap();
    assert!((spectral_norm(&m, 1e-12).unwrap() - 3.0).abs() < 1e-9);
    // rank one: u v^dagger has norm |u||v|
    let u = [c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.0), c(0.5, 0.0)];
    let v = [c(0.0, 1.0), c(3.0, 0.0), c(1.0, -1.0), c(0.0, 0.0)];
    let r1 = DenseMatrix::from_fn(4, |i, j| u[i] * v[j].conj()).unwrap();
    let nu = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    assert!((spectral_norm(&r1, 1e-12).unwrap() - nu * nv).abs() < 1e-8);
    let phased = m.scale(C64::from_polar(1.0, 1.1));
    assert!(distance(&m, &phased, true).unwrap() < 1e-6);
    assert!(distance(&m, &phased, false).unwrap() > 1.0);
}

#[test]
fn single_term_product_formula_is_exact() {
    let h = SparseMatrix::from_triplets(4, [(0, 2, c(0.3, 0.4)), (2, 0, c(0.3, -0.4)), (1, 3, c(1.0, 0.0)), (3, 1, c(1.0, 0.0))])
        .unwrap();
    assert_eq!(split_one_sparse(&h).unwrap().len(), 1);
    for r in [1, 3, 17] {
        let f = trotterize_fixed(&h, 2.3, r, Order::First).unwrap();
        assert!(measured_error(&f, &h).unwrap() < 1e-12);
    }
}

#[test]
fn tableau_counts_match_hook_lengths() {
    for n in 1..=8 {
        let mut total = 0u128;
        for lambda in partitions(n) {
            let brute = brute_force_tableaux_count(&lambda);
            let hook = hook_length_dim(&lambda).unwrap();
            assert_eq!(brute as u128, hook, "{lambda:?}");
            assert_eq!(YoungTableauBasis::new(&lambda).unwrap().dim(), brute);
            total += hook * hook;
        }
        // sum of squared dimensions is |S_n|
        assert_eq!(total, (1..=n as u128).product::<u128>());
    }
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

/// Every permutation of `0..n` with its image under the representation,
/// built by breadth-first search over right multiplication by generators.
fn representation(basis: &YoungTableauBasis) -> HashMap<Perm, DenseMatrix> {
    let n = basis.n();
    let gens: Vec<(Perm, DenseMatrix)> = (1..n)
        .map(|j| {
            let mut p: Perm = (0..n).collect();
            p.swap(j - 1, j);
            (p, DenseMatrix::from_sparse(&basis.generator(j).unwrap()).unwrap())
        })
        .collect();
    let id: Perm = (0..n).collect();
    let mut rho = HashMap::from([(id.clone(), DenseMatrix::identity(basis.dim()).unwrap())]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for (g, mg) in &gens {
            let q = compose(&p, g);
            if !rho.contains_key(&q) {
                let m = rho[&p].matmul(mg).unwrap();
                rho.insert(q.clone(), m);
                queue.push_back(q);
            }
        }
    }
    rho
}

fn trace(m: &DenseMatrix) -> C64 {
    (0..m.dim()).map(|i| m[(i, i)]).sum()
}

#[test]
fn representations_are_irreducible_homomorphisms() {
    for n in 2..=5 {
        let order: usize = (1..=n).product();
        let reps: Vec<HashMap<Perm, DenseMatrix>> =
            partitions(n).iter().map(|l| representation(&YoungTableauBasis::new(l).unwrap())).collect();
        for rho in &reps {
            assert_eq!(rho.len(), order);
            for (a, ma) in rho {
                for (b, mb) in rho {
                    let lhs = ma.matmul(mb).unwrap();
                    assert!(lhs.sub(&rho[&compose(a, b)]).unwrap().max_abs() < 1e-10);
                }
            }
        }
        for (x, rx) in reps.iter().enumerate() {
            for (y, ry) in reps.iter().enumerate() {
                let inner: C64 = rx.iter().map(|(p, m)| trace(m) * trace(&ry[p]).conj()).sum::<C64>() / order as f64;
                let want = if x == y { 1.0 } else { 0.0 };
                assert!((inner - c(want, 0.0)).norm() < 1e-10, "n={n} {x} {y}");
            }
        }
    }
}

#[test]
fn two_one_is_the_standard_summand_of_the_regular_representation() {
    let basis = YoungTableauBasis::new(&[2, 1]).unwrap();
    let rho = representation(&basis);
    let perms: Vec<Perm> = rho.keys().cloned().collect();
    // isotypic projector (d/|G|) sum conj(chi(g)) R(g) on C[S_3]
    let mut proj = DenseMatrix::zeros(6).unwrap();
    for g in &perms {
        let chi = trace(&rho[g]).conj() * (2.0 / 6.0);
        let r = DenseMatrix::from_fn(6, |i, j| if compose(g, &perms[j]) == perms[i] { chi } else { c(0.0, 0.0) }).unwrap();
        proj = proj.add(&r).unwrap();
    }
    assert!(proj.matmul(&proj).unwrap().sub(&proj).unwrap().max_abs() < 1e-12);
    assert!((trace(&proj) - c(4.0, 0.0)).norm() < 1e-12);
    let s1 = basis.generator(1).unwrap();
    let s2 = basis.generator(2).unwrap();
    let r3 = 3f64.sqrt() / 2.0;
    assert_eq!((s1.get(0, 0), s1.get(1, 1), s1.get(0, 1)), (c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)));
    for (i, j, want) in [(0, 0, -0.5), (0, 1, r3), (1, 0, r3), (1, 1, 0.5)] {
        assert!((s2.get(i, j) - c(want, 0.0)).norm() < 1e-15);
    }
}

fn bfs_components(m: &SparseMatrix) -> usize {
    let n = m.dim();
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in m.triplets() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    q.push_back(w);
                }
            }
        }
    }
    count
}

#[test]
fn walk_is_not_block_diagonal() {
    for n in 3..=64 {
        let u = walk_step(n).unwrap();
        assert_eq!(bfs_components(&u), 1, "n = {n}");
        assert_eq!(combinatorial_blocks(&u).len(), 1);
    }
}
