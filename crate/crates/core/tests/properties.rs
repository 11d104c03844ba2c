use ergolab_core::diagnostics::{
    abelian_reduce, ipr, ir_diversity, polarize_degenerate, r_statistics, surmise_cdf, surmise_pdf,
    BasisRotation, Histogram, Polarization,
};
use ergolab_core::ensemble::{
    run_ensemble, Diagnostic, EnsembleResult, EnsembleSpec, RunOptions, Summary,
};
use ergolab_core::hilbert::HilbertSpace;
use ergolab_core::models::{realization_seed, ModelSpec, Variant};
use ergolab_core::operator::HermitianOperator;
use ergolab_core::spectral::spectral_decompose;
use ergolab_core::stategraph::{perturbation_series, StateGraph};
use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;

fn probability_vector(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..=max_dim).prop_filter_map("nonzero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-9).then(|| w.iter().map(|x| x / s).collect())
    })
}

fn hermitian(max_dim: usize) -> impl Strategy<Value = HermitianOperator> {
    (2..=max_dim)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(-1.0f64..1.0, 2 * d * d)))
        .prop_map(|(d, raw)| {
            let a = Mat::from_fn(d, d, |i, j| {
                Complex64::new(raw[i * d + j], raw[d * d + i * d + j])
            });
            let h = Mat::from_fn(d, d, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
            HermitianOperator::from_complex(HilbertSpace::new(d).unwrap(), h).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn diversity_and_participation_bounds(p in probability_vector(64)) {
        let d = p.len() as f64;
        let (s, omega) = ir_diversity(&p);
        let xi = ipr(&p);
        prop_assert!(omega >= 1.0 / d - 1e-12 && omega <= 1.0 + 1e-12);
        prop_assert!((1.0 - 1e-12..=d + 1e-9).contains(&xi));
        prop_assert!((omega - s.exp() / d).abs() < 1e-12);
        // The Shannon entropy dominates the collision entropy.
        prop_assert!(xi / d <= omega * (1.0 + 1e-10));
    }

    #[test]
    fn diversity_ignores_ordering(p in probability_vector(32), rot in 0usize..32) {
        let mut q = p.clone();
        let k = rot % q.len();
        q.rotate_left(k);
        q.reverse();
        prop_assert!((ir_diversity(&p).1 - ir_diversity(&q).1).abs() < 1e-12);
        prop_assert!((ipr(&p) - ipr(&q)).abs() < 1e-9 * ipr(&p));
    }

    #[test]
    fn weights_are_normalized_in_every_basis(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        basis in 0usize..3,
    ) {
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        let psi: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b) / norm).collect();
        let rotation = match basis {
            0 => None,
            1 => Some(BasisRotation::Fourier { shape: vec![16] }.prepare().unwrap()),
            _ => Some(BasisRotation::Fourier { shape: vec![4, 4] }.prepare().unwrap()),
        };
        let p = abelian_reduce(&psi, rotation.as_ref()).unwrap();
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spacing_ratios_are_affine_invariant(
        levels in prop::collection::vec(-10.0f64..10.0, 4..60),
        scale in 0.01f64..100.0,
        shift in -50.0f64..50.0,
    ) {
        let mut e = levels;
        e.sort_by(f64::total_cmp);
        e.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        prop_assume!(e.len() >= 3);
        let moved: Vec<f64> = e.iter().map(|x| scale * x + shift).collect();
        let a = r_statistics(&e, 0.0).unwrap();
        let b = r_statistics(&moved, 0.0).unwrap();
        prop_assert_eq!(a.r_values.len(), b.r_values.len());
        prop_assert!(a.r_values.iter().all(|r| (0.0..=1.0).contains(r)));
        for (x, y) in a.r_values.iter().zip(&b.r_values) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn histogram_conserves_counts(
        xs in prop::collection::vec(-2.0f64..3.0, 0..300),
        bins in 1usize..80,
        split in 0usize..300,
    ) {
        let full = Histogram::from_values(&xs, bins, (0.0, 1.0)).unwrap();
        prop_assert_eq!(full.total() + full.overflow, xs.len() as u64);
        let inside = xs.iter().filter(|x| (0.0..=1.0).contains(*x)).count() as u64;
        prop_assert_eq!(full.total(), inside);
        let k = split.min(xs.len());
        let mut left = Histogram::from_values(&xs[..k], bins, (0.0, 1.0)).unwrap();
        left.merge(&Histogram::from_values(&xs[k..], bins, (0.0, 1.0)).unwrap()).unwrap();
        prop_assert_eq!(left, full);
    }

    #[test]
    fn summary_merge_is_split_independent(
        xs in prop::collection::vec(-1e3f64..1e3, 1..200),
        split in 0usize..200,
    ) {
        let k = split.min(xs.len());
        let mut a = Summary::from_values(&xs[..k]);
        a.merge(&Summary::from_values(&xs[k..]));
        let all = Summary::from_values(&xs);
        prop_assert_eq!(a.count, all.count);
        prop_assert!((a.mean - all.mean).abs() <= 1e-9 * (1.0 + all.mean.abs()));
        prop_assert!((a.variance - all.variance).abs() <= 1e-9 * (1.0 + all.variance));
        prop_assert_eq!((a.min, a.max), (all.min, all.max));
    }

    #[test]
    fn surmise_is_a_distribution_on_the_unit_interval(r in 0.0f64..1.0, beta in prop::sample::select(vec![1u8, 2, 4])) {
        prop_assert!(surmise_pdf(beta, r).unwrap() >= 0.0);
        let c = surmise_cdf(beta, r).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert!(surmise_cdf(beta, (r + 0.01).min(1.0)).unwrap() >= c - 1e-12);
        prop_assert!((surmise_cdf(beta, 1.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn realization_seeds_are_distinct(master in any::<u64>(), i in 0u64..1 << 40, j in 0u64..1 << 40) {
        prop_assume!(i != j);
        prop_assert_ne!(realization_seed(master, i), realization_seed(master, j));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_is_exact(h in hermitian(12)) {
        let dec = spectral_decompose(&h, 1e-10).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(dec.max_residual(&h) < 1e-10 * scale);
        prop_assert!(dec.orthonormality_error() < 1e-10);
        prop_assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn polarization_keeps_an_orthonormal_eigenbasis(d in 2usize..7, seed in any::<u64>()) {
        // The free ring is doubly degenerate, so rotations actually happen.
        let h = ModelSpec::new(Variant::FreeRing { dim: 2 * d + 1 }).build(0).unwrap();
        let dec = spectral_decompose(&h, 1e-10).unwrap();
        let pol = polarize_degenerate(&dec, Polarization::RandomOrthogonal, seed);
        prop_assert_eq!(pol.eigenvalues(), dec.eigenvalues());
        prop_assert!(pol.max_residual(&h) < 1e-10);
        prop_assert!(pol.orthonormality_error() < 1e-10);
    }

    #[test]
    fn perturbation_recurrence_holds(h in hermitian(6), lambda in 1e-4f64..1e-2) {
        let d = h.dim();
        let x: Vec<f64> = (0..d).map(|i| (i + 1) as f64 / d as f64).collect();
        let s = perturbation_series(&x, &h, lambda, 6).unwrap();
        prop_assert!(s.recurrence_residual() < 1e-9);
        prop_assert!(s.normalization_residual() < 1e-9);
    }

    #[test]
    fn edge_list_round_trips_the_weights(
        edges in prop::collection::btree_map((0usize..8, 0usize..8), -2.0f64..2.0, 0..20),
    ) {
        let list: Vec<(usize, usize, f64)> = edges
            .into_iter()
            .filter(|((a, b), _)| a < b)
            .map(|((a, b), w)| (a, b, w))
            .collect();
        let g = StateGraph::from_edges(8, &list).unwrap();
        prop_assert_eq!(g.edge_count(), list.len());
        let text = g.to_edge_list();
        let parsed: Vec<(usize, usize, f64)> = text
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect();
        prop_assert_eq!(parsed, list);
        let degrees = g.degree_profile().degrees;
        prop_assert_eq!(degrees.iter().sum::<usize>(), 2 * g.edge_count());
    }
}

fn small_spec(seed: u64, realizations: usize, bins: usize) -> EnsembleSpec {
    EnsembleSpec::new(
        ModelSpec::new(Variant::AndersonRing {
            dim: 12,
            lambda: 1.0,
        })
        .with_seed(seed),
    )
    .with_realizations(realizations)
    .with_bins(bins)
    .with_diagnostics([
        Diagnostic::OmegaPosition,
        Diagnostic::RStats,
        Diagnostic::Dos,
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ensembles_are_reproducible_and_conserve_counts(
        seed in any::<u64>(),
        realizations in 1usize..20,
        bins in 1usize..60,
        workers in 1usize..4,
    ) {
        let spec = small_spec(seed, realizations, bins);
        let a = run_ensemble(&spec, &RunOptions::with_workers(1)).unwrap();
        let b = run_ensemble(&spec, &RunOptions::with_workers(workers)).unwrap();
        prop_assert!(a.same_outcome(&b));
        prop_assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());

        let states = (realizations * 12) as u64;
        let omega = &a.histograms[&Diagnostic::OmegaPosition];
        prop_assert_eq!(omega.total() + omega.overflow, states);
        prop_assert_eq!(a.summaries[&Diagnostic::OmegaPosition].count, states);
        let dos = &a.histograms[&Diagnostic::Dos];
        prop_assert_eq!(dos.total() + dos.overflow, states);
        prop_assert_eq!(a.diagnosed_states(), states);

        let back = EnsembleResult::from_json(&a.to_json().unwrap()).unwrap();
        prop_assert!(back.same_outcome(&a));
        let reparsed: EnsembleSpec = serde_json::from_str(&serde_json::to_string(&a.spec).unwrap()).unwrap();
        prop_assert_eq!(&reparsed, &a.spec);
        prop_assert_eq!(reparsed.resolved().unwrap(), reparsed);
    }
}
