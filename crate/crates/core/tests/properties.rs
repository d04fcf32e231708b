//! Property tests against independent oracles.

mod common;

use bifid::bifi::lift;
use bifid::bound::{
    default_tau_grid, epsilon_exact, minimize_bound, rho, simplified_bound, GramianPair,
    LowFidelityTerms,
};
use bifid::id::build_id;
use bifid::linalg::{lambda_max_symmetric, svd, symmetric_eigenvalues};
use bifid::{Matrix, RankMode, SnapshotMatrix};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn instance(seed: u64, max_m: usize, max_n: usize) -> (Matrix, Matrix) {
    let mut r = rng(seed);
    let m = r.random_range(2..=max_m);
    let n = r.random_range(m + 1..=max_n);
    let big_m = r.random_range(1..=max_m);
    let k = r.random_range(1..=m);
    let decay = r.random_range(0.05..0.5);
    let l = with_spectrum(&mut r, m, n, &geometric(k, decay));
    let t0 = gaussian(&mut r, big_m, m);
    let e0 = gaussian(&mut r, big_m, n).scale(1e-3);
    (t0.matmul(&l).add(&e0), l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_max_matches_jacobi(seed in any::<u64>(), n in 1usize..24) {
        let mut r = rng(seed);
        let a = gaussian(&mut r, n, n);
        let s = a.add(&a.transpose());
        let oracle = jacobi_eigenvalues(&s);
        let scale = s.max_abs().max(1e-300) * n as f64;
        let got = lambda_max_symmetric(&s).unwrap();
        prop_assert!((got - oracle[n - 1]).abs() <= 1e-12 * scale);
        let all = symmetric_eigenvalues(&s).unwrap();
        for (x, y) in all.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn singular_values_match_oracle(seed in any::<u64>(), m in 1usize..20, n in 1usize..20) {
        let mut r = rng(seed);
        let a = gaussian(&mut r, m, n);
        let d = svd(&a).unwrap();
        let oracle = singular_values(&a);
        for (x, y) in d.s.values().iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-12 * oracle[0]);
        }
        prop_assert!(d.reconstruct().sub(&a).max_abs() <= 1e-12 * oracle[0]);
    }

    #[test]
    fn id_interpolates_selected_columns(seed in any::<u64>(), m in 1usize..15, n in 1usize..25) {
        let mut r = rng(seed);
        let l = gaussian(&mut r, m, n);
        let rank = r.random_range(1..=m.min(n));
        let id = build_id(&l, RankMode::Fixed(rank)).unwrap();
        let rec = id.reconstruct();
        for (p, &j) in id.selected().iter().enumerate() {
            for i in 0..rank {
                prop_assert_eq!(id.coeffs()[(i, j)], if i == p { 1.0 } else { 0.0 });
            }
            prop_assert_eq!(rec.column(j), l.column(j));
        }
        let resid = spectral_norm(&l.sub(&rec));
        prop_assert!((resid - id.residual_norm()).abs() <= 1e-10 * spectral_norm(&l));
        let bound = ((rank * (n - rank) + 1) as f64).sqrt();
        prop_assert!(spectral_norm(id.coeffs()) <= bound * (1.0 + 1e-10));
    }

    #[test]
    fn bound_dominates_true_error(seed in any::<u64>()) {
        let (h, l) = instance(seed, 12, 30);
        let rank_l = svd(&l).unwrap().s.numerical_rank(bifid::bound::RANK_CUTOFF);
        let r = 1 + (seed as usize % rank_l);
        let id = build_id(&l, RankMode::Fixed(r)).unwrap();
        let est = lift(&id, h.select_columns(id.selected())).unwrap().evaluate_all();
        let err = spectral_norm(&h.sub(&est));
        let terms = LowFidelityTerms::from_decomposition(&l, &id).unwrap();
        let g = GramianPair::full(&h, &l).unwrap();
        let grid = default_tau_grid();
        let rep = minimize_bound(&g, &terms, &grid).unwrap();
        prop_assert!(rep.best_rho >= err - 1e-8 * spectral_norm(&h));
        prop_assert!((rep.b1 + rep.b2 - rep.best_rho).abs() <= 1e-12 * rep.best_rho);
        // the looser closed form never undercuts the minimum, for k ≤ r
        for k in 1..=r.min(terms.rank()) {
            for (&tau, &e) in grid.iter().zip(&rep.eps_values) {
                let simple = simplified_bound(k, tau, e, &terms.sigma, r, l.cols());
                prop_assert!(rep.best_rho <= simple * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn epsilon_shape(seed in any::<u64>()) {
        let (h, l) = instance(seed, 10, 20);
        let hs = SnapshotMatrix::with_index_ids(h.clone());
        let ls = SnapshotMatrix::with_index_ids(l.clone());
        let h2 = spectral_norm(&h).powi(2);
        let l2 = spectral_norm(&l).powi(2);
        let e0 = epsilon_exact(&hs, &ls, 0.0).unwrap();
        prop_assert!((e0 - h2).abs() <= 1e-10 * h2);
        let mut prev = e0;
        for tau in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0] {
            let e = epsilon_exact(&hs, &ls, tau).unwrap();
            prop_assert!(e <= prev + 1e-12 * (h2 + tau * l2));
            // wide L has a null vector, so ε stays non-negative
            prop_assert!(e >= -1e-12 * (h2 + tau * l2));
            prev = e;
        }
    }

    #[test]
    fn full_subsample_equals_exact(seed in any::<u64>()) {
        let (h, l) = instance(seed, 8, 16);
        let g = GramianPair::full(&h, &l).unwrap();
        let hs = SnapshotMatrix::with_index_ids(h);
        let ls = SnapshotMatrix::with_index_ids(l);
        let g2 = GramianPair::from_subsample(&hs, &ls).unwrap();
        for tau in [0.0, 0.5, 3.0] {
            let exact = epsilon_exact(&hs, &ls, tau).unwrap();
            prop_assert_eq!(g.epsilon(tau).unwrap().to_bits(), exact.to_bits());
            prop_assert_eq!(g2.epsilon(tau).unwrap().to_bits(), exact.to_bits());
        }
    }

    #[test]
    fn lifting_is_linear_and_exact_on_skeleton(seed in any::<u64>()) {
        let (h, l) = instance(seed, 10, 20);
        let mut r = rng(seed ^ 0x5eed);
        let rank = r.random_range(1..=l.rows());
        let id = build_id(&l, RankMode::Fixed(rank)).unwrap();
        let model = lift(&id, h.select_columns(id.selected())).unwrap();
        let all = model.evaluate_all();
        for &j in id.selected() {
            for (a, b) in all.column(j).iter().zip(h.column(j)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
        let c1: Vec<f64> = (0..rank).map(|_| r.random_range(-1.0..1.0)).collect();
        let c2: Vec<f64> = (0..rank).map(|_| r.random_range(-1.0..1.0)).collect();
        let sum: Vec<f64> = c1.iter().zip(&c2).map(|(a, b)| 2.0 * a - b).collect();
        let lhs = model.evaluate_one(&sum).unwrap();
        let y1 = model.evaluate_one(&c1).unwrap();
        let y2 = model.evaluate_one(&c2).unwrap();
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - (2.0 * y1[i] - y2[i])).abs() <= 1e-10 * (1.0 + lhs[i].abs()));
        }
    }
}

#[test]
fn corresponding_estimates_identity() {
    // H = L: the lifted error is the decomposition error
    let (_, l) = instance(99, 10, 20);
    for r in 1..=l.rows() {
        let id = build_id(&l, RankMode::Fixed(r)).unwrap();
        let est = lift(&id, l.select_columns(id.selected())).unwrap().evaluate_all();
        assert_eq!(est, id.reconstruct());
    }
}

#[test]
fn rho_is_monotone_in_k_at_tau_zero() {
    // at τ = 0 the k-dependence is only through ε/σ_k², increasing in k
    let (h, l) = instance(5, 8, 16);
    let id = build_id(&l, RankMode::Fixed(3)).unwrap();
    let terms = LowFidelityTerms::from_decomposition(&l, &id).unwrap();
    let e = GramianPair::full(&h, &l).unwrap().epsilon(0.0).unwrap();
    let vals: Vec<f64> = (1..=terms.rank())
        .map(|k| rho(k, 0.0, e, &terms).unwrap().unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0]));
}
