mod common;

use proptest::prelude::*;
use sparse_unitary::decompose::{build_graph, exp_term, split_one_sparse};
use sparse_unitary::dilation::{dilate, is_involutory};
use sparse_unitary::models::qtm::{qtm_run, qtm_step_bound, QtmInput, QtmRunOptions, TransitionRule, TruncatedQtm};
use sparse_unitary::models::symrep::{partitions, YoungTableauBasis};
use sparse_unitary::models::walk::{walk_run, WalkMethod};
use sparse_unitary::sparse::mtx;
use sparse_unitary::trotter::{measured_error, trotterize, trotterize_fixed, Order};
use sparse_unitary::{
    apply, check_unitary, distance, random_sparse_unitary, spectral_norm, DenseMatrix, SparseMatrix, StateVector, C64,
};

use common::*;

fn hermitian_strategy() -> impl Strategy<Value = SparseMatrix> {
    (2usize..24).prop_flat_map(|n| {
        let entry = (0..n, 0..n, -2.0f64..2.0, -2.0f64..2.0);
        prop::collection::vec(entry, 0..3 * n).prop_map(move |es| {
            let mut t = std::collections::BTreeMap::new();
            for (i, j, re, im) in es {
                let (i, j) = (i.min(j), i.max(j));
                let a = if i == j { C64::new(re, 0.0) } else { C64::new(re, im) };
                t.insert((i, j), a);
            }
            let triplets = t.into_iter().flat_map(|((i, j), a)| {
                if i == j {
                    vec![(i, i, a)]
                } else {
                    vec![(i, j, a), (j, i, a.conj())]
                }
            });
            SparseMatrix::from_triplets(n, triplets).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_unitaries_meet_their_contract(n in 1usize..80, d_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let d = 1 + ((n - 1) as f64 * d_frac) as usize;
        let u = random_sparse_unitary(n, d, seed).unwrap();
        prop_assert!(check_unitary(&u, 1e-12).is_unitary);
        prop_assert!(u.max_row_nnz() <= d && u.max_col_nnz() <= d);
        prop_assert_eq!(&u, &random_sparse_unitary(n, d, seed).unwrap());
        let mut r = rng(seed);
        let psi = random_state(n, &mut r);
        prop_assert!((apply(&u, &psi).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_norm_and_adjoint_symmetry(n in 2usize..40, seed in any::<u64>()) {
        let u = DenseMatrix::from_sparse(&random_sparse_unitary(n, 3.min(n), seed).unwrap()).unwrap();
        prop_assert!((spectral_norm(&u, 1e-10).unwrap() - 1.0).abs() < 1e-9);
        // U D V with singular values 2 > 1.5 >= ...
        let v = DenseMatrix::from_sparse(&random_sparse_unitary(n, 3.min(n), !seed).unwrap()).unwrap();
        let d = DenseMatrix::from_fn(n, |i, j| {
            let s = if i == 0 { 2.0 } else { 1.5 * i as f64 / n as f64 };
            if i == j { C64::new(s, 0.0) } else { C64::new(0.0, 0.0) }
        }).unwrap();
        let m = u.matmul(&d).unwrap().matmul(&v).unwrap();
        let a = spectral_norm(&m, 1e-12).unwrap();
        let b = spectral_norm(&m.adjoint(), 1e-12).unwrap();
        prop_assert!((a - 2.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9);
    }

    #[test]
    fn phase_invariant_distance_is_smaller(n in 2usize..12, seed in any::<u64>(), phi in 0.0f64..std::f64::consts::TAU) {
        let u = DenseMatrix::from_sparse(&random_sparse_unitary(n, 2.min(n), seed).unwrap()).unwrap();
        let v = DenseMatrix::from_sparse(&random_sparse_unitary(n, 2.min(n), seed ^ 1).unwrap()).unwrap();
        let plain = distance(&u, &v, false).unwrap();
        prop_assert!(distance(&u, &v, true).unwrap() <= plain + 1e-12);
        prop_assert!(distance(&u, &u.scale(C64::from_polar(1.0, phi)), true).unwrap() < 1e-6);
        prop_assert_eq!(distance(&u, &u, false).unwrap(), 0.0);
    }

    #[test]
    fn dilation_is_hermitian_and_involutory(n in 1usize..40, seed in any::<u64>()) {
        let u = random_sparse_unitary(n, 3.min(n), seed).unwrap();
        let d = dilate(&u).unwrap();
        prop_assert_eq!(d.h.hermitian_defect().0, 0.0);
        prop_assert!(d.involutory && is_involutory(&d.h));
        for i in 0..n {
            prop_assert_eq!(d.h.row(i).len(), u.row(i).len());
            prop_assert_eq!(d.h.row(n + i).len(), u.col(i).len());
        }
    }

    #[test]
    fn decomposition_reconstructs(h in hermitian_strategy(), theta in -4.0f64..4.0) {
        let terms = split_one_sparse(&h).unwrap();
        let delta = build_graph(&h).unwrap().max_degree();
        let colors = terms.iter().filter(|t| !t.pairs().is_empty()).count();
        prop_assert!(colors <= (2 * delta).saturating_sub(1));
        let mut sum = SparseMatrix::zeros(h.dim());
        for t in &terms {
            let m = t.to_sparse();
            prop_assert!(m.max_row_nnz() <= 2);
            sum = sum.add(&m).unwrap();
            prop_assert!(check_unitary(&exp_term(t, theta), 1e-12).is_unitary);
        }
        prop_assert!(sum.max_abs_diff(&h).unwrap() <= 1e-15);
    }

    #[test]
    fn matrix_market_round_trip(n in 1usize..30, seed in any::<u64>()) {
        let u = random_sparse_unitary(n, 3.min(n), seed).unwrap();
        let text = mtx::to_string(&u);
        let back = mtx::parse(&text).unwrap();
        prop_assert_eq!(&back, &u);
        prop_assert_eq!(mtx::to_string(&back), text);
    }

    #[test]
    fn state_json_round_trip(n in 1usize..20, seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_state(n, &mut r);
        let back = StateVector::from_json(&psi.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.amps(), psi.amps());
    }

    #[test]
    fn qtm_codec_is_a_bijection(q in 1usize..4, sigma in 1usize..4, t in 1usize..3, seed in any::<u64>()) {
        let rule = TransitionRule::random_unidirectional(q, sigma, seed).unwrap();
        let m = TruncatedQtm::new(&rule, t, 1 << 20).unwrap();
        let wide = TruncatedQtm::new(&rule, t + 1, 1 << 20).unwrap();
        let mut r = rng(seed);
        for _ in 0..64 {
            let idx = rand::Rng::gen_range(&mut r, 0..sparse_unitary::RowAccess::dim(&m));
            prop_assert_eq!(m.encode(&m.decode(idx)).unwrap(), idx);
            let up = m.embed_index(idx, &wide).unwrap();
            prop_assert_eq!(wide.restrict_index(up, &m), Some(idx));
        }
    }

    #[test]
    fn walk_distribution_is_normalized(n in 2usize..64, steps in 0usize..40, x in 0usize..64, coin in 0usize..2) {
        let v0 = StateVector::basis(2 * n, 2 * (x % n) + coin).unwrap();
        let run = walk_run(n, &v0, steps, WalkMethod::Direct).unwrap();
        prop_assert!((run.distribution.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn generators_are_orthogonal_involutions(n in 2usize..8, pick in any::<prop::sample::Index>()) {
        let all = partitions(n);
        let lambda = &all[pick.index(all.len())];
        let basis = YoungTableauBasis::new(lambda).unwrap();
        for j in 1..n {
            let g = basis.generator(j).unwrap();
            prop_assert_eq!(g.hermitian_defect().0, 0.0);
            prop_assert!(g.matmul(&g).unwrap().max_abs_diff(&SparseMatrix::identity(g.dim())).unwrap() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn factored_apply_matches_dense_product(n in 2usize..20, seed in any::<u64>(), r in 1u64..6, second in any::<bool>()) {
        let h = dilate(&random_sparse_unitary(n, 3.min(n), seed).unwrap()).unwrap().h;
        let order = if second { Order::Second } else { Order::First };
        let f = trotterize_fixed(&h, 0.8, r, order).unwrap();
        let m = f.term_count as u64;
        let per_slice = if second { 2 * m - 1 } else { m };
        prop_assert_eq!(f.factor_count(), r * per_slice);
        let mut g = rng(seed);
        let psi = random_state(2 * n, &mut g);
        let dense = f.dense_product().unwrap().matvec(psi.amps());
        prop_assert!(vec_distance(f.apply(&psi).unwrap().amps(), &dense) < 1e-12);
    }

    #[test]
    fn certified_bound_covers_measured_error(n in 2usize..24, seed in any::<u64>(), eps_exp in 2i32..6, second in any::<bool>()) {
        let h = dilate(&random_sparse_unitary(n, 3.min(n), seed).unwrap()).unwrap().h;
        let eps = 10f64.powi(-eps_exp);
        let order = if second { Order::Second } else { Order::First };
        let f = trotterize(&h, 1.3, eps, order).unwrap();
        let measured = measured_error(&f, &h).unwrap();
        let bound = f.certified_error.unwrap();
        prop_assert!(bound <= eps);
        prop_assert!(measured <= bound * (1.0 + 1e-8) + 1e-13, "measured {} bound {}", measured, bound);
    }

    /// For any radius t > s, runs at t and at t + 1..3 agree on the shared support,
    /// and the norm loss stays within s times the per-step bound.
    #[test]
    fn truncation_consistency(q in 1usize..4, seed in any::<u64>(), t in 2usize..5, extra in 1usize..3, s_frac in 0.0f64..1.0) {
        let rule = TransitionRule::random_unidirectional(q, 2, seed).unwrap();
        let s = 1 + ((t - 1) as f64 * s_frac) as usize % (t - 1).max(1);
        let input = QtmInput { tape: vec![1, 0], state: 0 };
        let near = qtm_run(&rule, &input, s, &QtmRunOptions { radius: Some(t), ..Default::default() }).unwrap();
        let far = qtm_run(&rule, &input, s, &QtmRunOptions { radius: Some(t + extra), ..Default::default() }).unwrap();
        let bound = s as f64 * qtm_step_bound(t);
        prop_assert!(1.0 - near.state.norm() <= bound);
        let shared = far.machine.restrict_state(&far.state, &near.machine);
        prop_assert!(near.state.distance(&shared).unwrap() <= bound);
    }
}

#[test]
fn norm_loss_bound_for_fifty_rules() {
    let mut r = rng(50);
    for k in 0..50u64 {
        let q = 1 + (k % 3) as usize;
        let rule = TransitionRule::random_unidirectional(q, 2, 9000 + k).unwrap();
        let t = rand::Rng::gen_range(&mut r, 2..=5usize);
        let s = rand::Rng::gen_range(&mut r, 1..t);
        let input = QtmInput { tape: vec![1], state: 0 };
        let run = qtm_run(&rule, &input, s, &QtmRunOptions { radius: Some(t), ..Default::default() }).unwrap();
        assert!(run.state.norm() >= 1.0 - s as f64 * qtm_step_bound(t));
    }
}
