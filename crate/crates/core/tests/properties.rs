use proptest::prelude::*;

use tripartite::classify::{
    classify_reports, converse_monogamy_holds, in_known_subsets, tensor_rank_bounds, RankEffort,
};
use tripartite::criteria::{
    decide_separability, evaluate, hierarchy_audit, maximally_correlated_test, PptCheck, RankData, SeparabilityContext,
    Verdict,
};
use tripartite::linalg::{
    hermitian_eigen, hermitian_eigenvalues, kron, majorization_compare, numerical_rank, partial_trace,
    partial_transpose, von_neumann_entropy, ComplexMatrix, Majorization, Spectrum, Subsystem, C64,
};
use tripartite::states::{
    complex_gaussian, direct_sum_product, haar_random, mc_state, purify_separable_bc, random_filter,
    random_unit_vector, random_unitary, sample_rng, slocc_filter, BipartiteDensity, Pair,
};
use tripartite::tolerance::TolerancePolicy;

fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = sample_rng(seed, 0);
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random density operator of full rank on C^n.
fn random_density(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = sample_rng(seed, 1);
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

fn dims3() -> impl Strategy<Value = [usize; 3]> {
    prop::array::uniform3(2usize..=4)
}

fn sorted_spectrum(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigenvalues(m).unwrap()
}

fn local_unitaries(psi: &tripartite::states::PureState3, seed: u64) -> tripartite::states::PureState3 {
    let mut rng = sample_rng(seed, 77);
    let [a, b, c] = psi.dims().map(|d| random_unitary(d, &mut rng));
    slocc_filter(psi, [&a, &b, &c]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_reconstructs_up_to_dim_32(n in 1usize..=32, seed in any::<u64>()) {
        let m = random_hermitian(n, seed);
        let e = hermitian_eigen(&m).unwrap();
        prop_assert!(e.reconstruct().distance(&m) < 1e-10 * m.frobenius_norm().max(1.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_trace_factorizes_products(d1 in 1usize..=4, d2 in 1usize..=4, seed in any::<u64>()) {
        let a = random_density(d1, seed);
        let b = random_density(d2, seed ^ 1);
        let ab = kron(&a, &b);
        prop_assert!(partial_trace(&ab, [d1, d2], Subsystem::Second).unwrap().distance(&a) < 1e-12);
        prop_assert!(partial_trace(&ab, [d1, d2], Subsystem::First).unwrap().distance(&b) < 1e-12);
    }

    #[test]
    fn partial_transposes_share_spectrum(d1 in 1usize..=4, d2 in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(d1 * d2, seed);
        let tb = partial_transpose(&rho, [d1, d2], Subsystem::Second).unwrap();
        let ta = partial_transpose(&rho, [d1, d2], Subsystem::First).unwrap();
        prop_assert!((tb.trace() - rho.trace()).norm() < 1e-12);
        prop_assert!(tb.hermiticity_defect() < 1e-14);
        // ρ^{T_A} is the full transpose of ρ^{T_B}.
        prop_assert_eq!(&ta, &tb.transpose());
        for (x, y) in sorted_spectrum(&ta).iter().zip(sorted_spectrum(&tb)) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert_eq!(partial_transpose(&tb, [d1, d2], Subsystem::Second).unwrap(), rho);
    }

    #[test]
    fn entropy_is_additive(d1 in 1usize..=4, d2 in 1usize..=4, seed in any::<u64>()) {
        let a = random_density(d1, seed);
        let b = random_density(d2, seed ^ 2);
        let joint = von_neumann_entropy(&kron(&a, &b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        prop_assert!((joint - sum).abs() < 1e-9);
    }

    #[test]
    fn majorization_is_a_partial_order(
        p in prop::collection::vec(0.01f64..1.0, 1..6),
        q in prop::collection::vec(0.01f64..1.0, 1..6),
        r in prop::collection::vec(0.01f64..1.0, 1..6),
    ) {
        let norm = |v: Vec<f64>| {
            let s: f64 = v.iter().sum();
            Spectrum::new(v.into_iter().map(|x| x / s).collect()).unwrap()
        };
        let (p, q, r) = (norm(p), norm(q), norm(r));
        let slack = 1e-12;
        prop_assert_eq!(majorization_compare(&p, &p, slack).relation, Majorization::Equal);
        let pq = majorization_compare(&p, &q, slack).relation;
        let qp = majorization_compare(&q, &p, slack).relation;
        prop_assert_eq!(pq, qp.flip());
        let qr = majorization_compare(&q, &r, slack).relation;
        if pq.left_dominates() && qr.left_dominates() {
            prop_assert!(majorization_compare(&p, &r, 1e-10).relation.left_dominates());
        }
    }

    #[test]
    fn pair_and_complement_ranks_agree(dims in dims3(), seed in any::<u64>()) {
        let psi = haar_random(dims, seed);
        let tol = 1e-8;
        for pair in Pair::ALL {
            let rho = psi.reduced_density(pair);
            let single = psi.marginal(pair.complement());
            prop_assert_eq!(numerical_rank(&rho.matrix, tol).unwrap(), numerical_rank(&single, tol).unwrap());
        }
    }

    #[test]
    fn haar_is_reproducible(dims in dims3(), seed in any::<u64>()) {
        prop_assert_eq!(haar_random(dims, seed), haar_random(dims, seed));
    }

    #[test]
    fn direct_sum_reductions_are_weighted_blocks(w in 0.05f64..0.95, s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = haar_random([2, 2, 2], s1);
        let y = haar_random([2, 3, 2], s2);
        let prod = direct_sum_product(&x, &y, w).unwrap();
        for pair in Pair::ALL {
            let rho = prod.reduced_density(pair);
            prop_assert!((rho.matrix.trace().re - 1.0).abs() < 1e-12);
            let (p, q) = pair.parties();
            let (dx, dy) = (x.dim(p), x.dim(q));
            let (ex, ey) = (y.dim(p), y.dim(q));
            let rx = x.reduced_density(pair).matrix;
            let ry = y.reduced_density(pair).matrix;
            let ny = prod.dim(q);
            // Block of x sits on indices (i, j) with i < dx, j < dy.
            for i in 0..dx * dy {
                for j in 0..dx * dy {
                    let (a, b) = (i / dy * ny + i % dy, j / dy * ny + j % dy);
                    prop_assert!((rho.matrix[(a, b)] - rx[(i, j)] * w).norm() < 1e-12);
                }
            }
            for i in 0..ex * ey {
                for j in 0..ex * ey {
                    let a = (dx + i / ey) * ny + dy + i % ey;
                    let b = (dx + j / ey) * ny + dy + j % ey;
                    prop_assert!((rho.matrix[(a, b)] - ry[(i, j)] * (1.0 - w)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn filters_compose(dims in dims3(), seed in any::<u64>()) {
        let psi = haar_random(dims, seed);
        let mut rng = sample_rng(seed, 5);
        let f: Vec<ComplexMatrix> = dims.iter().map(|&d| random_filter(d, &mut rng)).collect();
        let g: Vec<ComplexMatrix> = dims.iter().map(|&d| random_filter(d, &mut rng)).collect();
        let Ok(once) = slocc_filter(&psi, [&f[0], &f[1], &f[2]]) else { return Ok(()) };
        let Ok(twice) = slocc_filter(&once, [&g[0], &g[1], &g[2]]) else { return Ok(()) };
        let gf: Vec<ComplexMatrix> = (0..3).map(|i| &g[i] * &f[i]).collect();
        let Ok(direct) = slocc_filter(&psi, [&gf[0], &gf[1], &gf[2]]) else { return Ok(()) };
        // Equal up to a global phase; both are normalized.
        let overlap: C64 = twice.amplitudes().iter().zip(direct.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn criteria_chain_never_inverts(dims in dims3(), seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let (reports, _) = classify_reports(&haar_random(dims, seed), &tol).unwrap();
        for r in &reports {
            let hard: Vec<_> = hierarchy_audit(r, &tol).into_iter().filter(|v| !v.boundary).collect();
            prop_assert!(hard.is_empty(), "{:?}", hard);
        }
    }

    #[test]
    fn ladder_respects_ppt_and_certificates(
        holds in any::<bool>(),
        min_eig in -1.0f64..1.0,
        rank in 1usize..6,
        la in 1usize..4,
        lb in 1usize..4,
        near_cut in any::<bool>(),
        sibling in any::<bool>(),
        certified in any::<bool>(),
    ) {
        let ppt = PptCheck { holds, min_eigenvalue: min_eig };
        let ranks = RankData { rank, local_ranks: [la, lb], near_cut };
        let ctx = SeparabilityContext { sibling_ppt: sibling, certified_separable: certified };
        let v = decide_separability(&ppt, &ranks, &ctx);
        if !holds {
            prop_assert!(!v.is_separable());
        }
        if certified {
            prop_assert!(!matches!(v, Verdict::Entangled(_)));
        }
    }

    #[test]
    fn ppt_sibling_makes_flags_agree(k in 1usize..=4, seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let psi = purify_separable_bc(2, 2, k, seed).unwrap();
        let (reports, _) = classify_reports(&psi, &tol).unwrap();
        let bc = &reports[Pair::BC.slot()];
        prop_assume!(bc.ppt.holds);
        let ab = &reports[Pair::AB.slot()];
        // A is the side of AB not shared with BC.
        let flags = [
            ab.ppt.holds,
            ab.reduction.holds,
            ab.separability.is_separable(),
            ab.spectra_equal.on(Subsystem::First),
            ab.entropy_equal.on(Subsystem::First),
            ab.majorization.holds(),
            ab.cond_entropy_nonnegative(&tol),
        ];
        prop_assert!(flags.iter().all(|f| *f == flags[0]), "{:?}", flags);
    }

    #[test]
    fn correlated_test_ignores_local_unitaries(seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let mut rng = sample_rng(seed, 3);
        let b: Vec<Vec<C64>> = (0..2).map(|_| random_unit_vector(2, &mut rng)).collect();
        let psi = mc_state(&[0.4, 0.6], &b).unwrap();
        let rho = psi.reduced_density(Pair::BC);
        let u = kron(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
        let rotated = &(&u * &rho.matrix) * &u.adjoint();
        let rotated = BipartiteDensity::new(rotated, rho.dims, Pair::BC).unwrap();
        prop_assert!(maximally_correlated_test(&rho, &tol).unwrap().holds);
        prop_assert!(maximally_correlated_test(&rotated, &tol).unwrap().holds);
    }

    #[test]
    fn classes_survive_local_unitaries(dims in dims3(), seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let psi = haar_random(dims, seed);
        let (_, before) = classify_reports(&psi, &tol).unwrap();
        let (_, after) = classify_reports(&local_unitaries(&psi, seed), &tol).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn decided_triples_are_known_and_monogamous(dims in dims3(), seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let (_, t) = classify_reports(&haar_random(dims, seed), &tol).unwrap();
        prop_assert!(in_known_subsets(&t), "{}", t);
        prop_assert!(converse_monogamy_holds(&t), "{}", t);
    }

    #[test]
    fn rank_lower_bound_survives_filters(dims in dims3(), seed in any::<u64>()) {
        let tol = TolerancePolicy::default();
        let psi = haar_random(dims, seed);
        let mut rng = sample_rng(seed, 9);
        let f: Vec<ComplexMatrix> = dims.iter().map(|&d| random_filter(d, &mut rng)).collect();
        let Ok(filtered) = slocc_filter(&psi, [&f[0], &f[1], &f[2]]) else { return Ok(()) };
        let before = tensor_rank_bounds(&psi, &RankEffort::none(), &tol);
        let after = tensor_rank_bounds(&filtered, &RankEffort::none(), &tol);
        prop_assert_eq!(before.lower, after.lower);
        prop_assert_eq!(before.local_ranks, after.local_ranks);
    }
}

#[test]
fn exact_provenance_rank_survives_filters() {
    let tol = TolerancePolicy::default();
    let w = tripartite::states::w_state();
    let mut rng = sample_rng(1, 1);
    let f: Vec<ComplexMatrix> = (0..3).map(|_| random_filter(2, &mut rng)).collect();
    let filtered = slocc_filter(&w, [&f[0], &f[1], &f[2]]).unwrap();
    let before = tensor_rank_bounds(&w, &RankEffort::none(), &tol);
    let after = tensor_rank_bounds(&filtered, &RankEffort::none(), &tol);
    assert_eq!(before.value(), Some(3));
    assert_eq!(after.value(), Some(3));
}

#[test]
fn evaluate_on_marginal_products_is_separable() {
    let tol = TolerancePolicy::default();
    let rho = kron(&random_density(2, 4), &random_density(3, 5));
    let rho = BipartiteDensity::new(rho, [2, 3], Pair::AB).unwrap();
    let r = evaluate(&rho, &SeparabilityContext::default(), &tol).unwrap();
    assert!(r.ppt.holds && r.reduction.holds && r.majorization.holds());
}
