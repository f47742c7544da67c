//! Selection algorithms checked against brute force and the Gram-matrix
//! oracles in `common`.
mod common;

use common::*;
use proptest::prelude::*;
use subsel::dualset::{dual_set_sparsify, dualset_factor, dualset_select, lower_target, upper_target};
use subsel::greedy::{greedy_remove_frobenius, greedy_remove_spectral, spectral_factor};
use subsel::randomized::{leverage_plan, leverage_select, sample_threshold};
use subsel::volume::{rejection_select, volsamp_enumerate, volume_fro_factor};
use subsel::{Error, Matrix, Subset};

fn instance(n: usize, m: usize, seed: u64) -> Matrix {
    uniform_matrix(n, m, &mut rng(seed))
}

#[test]
fn greedy_frobenius_reports_oracle_norms() {
    for seed in 0..20 {
        let x = instance(3, 8, seed);
        let r = greedy_remove_frobenius(&x, 5).unwrap();
        let (fro, spec) = pinv_norms(&x, r.indices.indices()).unwrap();
        let (ff, fs) = full_norms(&x);
        assert!((r.fro_sq_selected - fro).abs() <= 1e-9 * fro);
        assert!((r.spec_sq_selected - spec).abs() <= 1e-9 * spec);
        assert!((r.fro_sq_full - ff).abs() <= 1e-9 * ff);
        assert!((r.spec_sq_full - fs).abs() <= 1e-9 * fs);
    }
}

#[test]
fn greedy_never_beats_the_exhaustive_optimum() {
    for seed in 0..10 {
        let x = instance(2, 7, 100 + seed);
        for k in 2..=7 {
            let best = subsets(7, k)
                .iter()
                .filter_map(|s| pinv_norms(&x, s))
                .map(|(f, _)| f)
                .fold(f64::INFINITY, f64::min);
            let r = greedy_remove_frobenius(&x, k).unwrap();
            assert!(r.fro_sq_selected >= best * (1.0 - 1e-9));
            let (ff, _) = full_norms(&x);
            assert!(r.fro_sq_selected <= ff * (7.0 - 2.0 + 1.0) / (k as f64 - 1.0) + 1e-9 * ff);
        }
    }
}

#[test]
fn greedy_keeps_everything_at_k_equal_m() {
    let x = instance(3, 6, 4);
    let r = greedy_remove_frobenius(&x, 6).unwrap();
    assert_eq!(r.indices, Subset::all(6));
}

#[test]
fn greedy_breaks_ties_toward_the_smallest_index() {
    // three identical columns: every removal scores the same
    let x = Matrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap();
    let r = greedy_remove_frobenius(&x, 1).unwrap();
    assert_eq!(r.indices.indices(), &[2]);
}

#[test]
fn greedy_never_drops_a_required_column() {
    // column 0 is the only one touching the first coordinate
    let x = Matrix::from_rows(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
    for k in 2..=4 {
        let r = greedy_remove_frobenius(&x, k).unwrap();
        assert!(r.indices.contains(0));
    }
}

#[test]
fn greedy_rejects_bad_inputs() {
    let x = instance(3, 6, 9);
    assert!(matches!(greedy_remove_frobenius(&x, 2), Err(Error::BadK { .. })));
    assert!(matches!(greedy_remove_frobenius(&x, 7), Err(Error::BadK { .. })));
    let deficient = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
    assert!(greedy_remove_frobenius(&deficient, 2).is_err());
}

#[test]
fn dual_set_on_identity_decomposition() {
    let mut r = rng(77);
    for &(n, m, k) in &[(2, 6, 4), (2, 10, 5), (3, 12, 8)] {
        let v = orthonormal_rows(n, m, &mut r);
        let w = dual_set_sparsify(&v, k).unwrap();
        assert!(w.support.len() <= k);
        assert!(w.s.iter().all(|&s| s >= 0.0));
        let eig = sq_singular_values(
            &Matrix::new(
                n,
                m,
                (0..n * m).map(|i| v.get(i / m, i % m) * w.s[i % m].sqrt()).collect(),
            )
            .unwrap(),
            &(0..m).collect::<Vec<_>>(),
        );
        assert!(eig[n - 1] >= lower_target(n, k) - 1e-8);
        // the second set is the standard basis, so its barrier bounds each weight
        let largest = w.s.iter().copied().fold(0.0, f64::max);
        assert!(largest <= upper_target(m, k) + 1e-8);
    }
}

#[test]
fn dual_set_worked_factor() {
    let f = dualset_factor(2, 4, 3);
    assert!((f - 137.9).abs() < 0.05, "{f}");
}

#[test]
fn dualset_select_meets_its_bound() {
    for seed in 0..10 {
        let x = instance(2, 9, 300 + seed);
        let r = dualset_select(&x, 5).unwrap();
        let (fro, spec) = pinv_norms(&x, r.indices.indices()).unwrap();
        let (ff, fs) = full_norms(&x);
        let f = dualset_factor(2, 9, 5);
        assert!(fro <= f * ff * (1.0 + 1e-9));
        assert!(spec <= f * fs * (1.0 + 1e-9));
    }
}

#[test]
fn leverage_plan_is_a_distribution() {
    let x = instance(3, 20, 5);
    let plan = leverage_plan(&x).unwrap();
    let lev: f64 = plan.leverage.iter().sum();
    assert!((lev - 3.0).abs() < 1e-10);
    let p: f64 = plan.p.iter().sum();
    assert!((p - 1.0).abs() < 1e-12);
    for (t, l) in plan.tau.iter().zip(&plan.leverage) {
        assert!(*t >= *l && *t >= 3.0 / 20.0 - 1e-15);
    }
}

#[test]
fn leverage_threshold_caps_at_m() {
    assert_eq!(sample_threshold(2, 30, 0.5), 30);
    assert_eq!(sample_threshold(1, 1000, 0.5), (32.0 * 4f64.ln()).ceil() as usize);
}

#[test]
fn leverage_is_reproducible_per_seed() {
    let x = instance(2, 40, 6);
    let a = leverage_select(&x, 30, 12).unwrap();
    let b = leverage_select(&x, 30, 12).unwrap();
    assert_eq!(a.indices, b.indices);
}

#[test]
fn enumeration_probabilities_match_gram_determinants() {
    let x = instance(2, 5, 8);
    for k in 2..=5 {
        let table = volsamp_enumerate(&x, k).unwrap();
        let dets: Vec<(Vec<usize>, f64)> =
            subsets(5, k).into_iter().map(|s| (s.clone(), gram_det(&x, &s))).collect();
        let total: f64 = dets.iter().map(|d| d.1).sum();
        for (s, d) in dets {
            let p = table.probability(&Subset::from_unsorted(s, 5).unwrap());
            assert!((p - d / total).abs() < 1e-10, "k={k}");
        }
    }
}

#[test]
fn enumerated_expectation_matches_brute_force() {
    let x = instance(2, 6, 21);
    let (ff, _) = full_norms(&x);
    for k in 2..=6 {
        let all = subsets(6, k);
        let total: f64 = all.iter().map(|s| gram_det(&x, s)).sum();
        let e: f64 = all
            .iter()
            .filter_map(|s| pinv_norms(&x, s).map(|(f, _)| f * gram_det(&x, s) / total))
            .sum();
        let want = volume_fro_factor(2, 6, k) * ff;
        assert!((e - want).abs() <= 1e-8 * want, "k={k}");
    }
}

#[test]
fn fast_sampler_matches_enumeration() {
    let x = instance(2, 5, 33);
    let svd = subsel::linalg::thin_svd(&x, 1e-10).unwrap();
    let table = volsamp_enumerate(&x, 2).unwrap();
    let all = subsets(5, 2);
    let p: Vec<f64> = all
        .iter()
        .map(|s| table.probability(&Subset::from_unsorted(s.clone(), 5).unwrap()))
        .collect();
    let mut counts = vec![0usize; all.len()];
    let mut r = rng(44);
    for _ in 0..20_000 {
        let s = subsel::volume::volsamp_draw_fast(&svd.y, &mut r);
        counts[all.iter().position(|a| a == s.indices()).unwrap()] += 1;
    }
    let stat = chi_square(&counts, &p);
    assert!(stat <= chi_square_critical(all.len() - 1, 0.999), "chi2 {stat}");
}

#[test]
fn rejection_output_meets_threshold() {
    for seed in 0..20 {
        let x = instance(3, 9, 400 + seed);
        let r = rejection_select(&x, 0.1, seed, None).unwrap();
        let (fro, _) = pinv_norms(&x, r.indices.indices()).unwrap();
        let (ff, _) = full_norms(&x);
        assert!(fro <= 1.1 * 7.0 * ff * (1.0 + 1e-12));
        assert!(r.rounds.unwrap() >= 1);
    }
}

#[test]
fn rejection_respects_round_cap() {
    // a cap of zero rounds never accepts
    let x = instance(2, 6, 3);
    assert!(matches!(
        rejection_select(&x, 0.1, 0, Some(0)),
        Err(Error::MaxRoundsExceeded { .. })
    ));
}

fn matrix_strategy() -> impl Strategy<Value = (Matrix, usize)> {
    (1usize..=4, 1usize..=6, any::<u64>()).prop_flat_map(|(n, extra, seed)| {
        let m = n + extra;
        (Just(instance(n, m, seed)), n..=m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_frobenius_bound((x, k) in matrix_strategy()) {
        let (n, m) = (x.rows(), x.cols());
        let r = greedy_remove_frobenius(&x, k).unwrap();
        let (ff, _) = full_norms(&x);
        let (fro, _) = pinv_norms(&x, r.indices.indices()).unwrap();
        let factor = (m - n + 1) as f64 / (k - n + 1) as f64;
        prop_assert!(fro / ff <= factor + 1e-9);
        prop_assert_eq!(r.indices.len(), k);
    }

    #[test]
    fn greedy_spectral_bound((x, k) in matrix_strategy()) {
        let (n, m) = (x.rows(), x.cols());
        let r = greedy_remove_spectral(&x, k).unwrap();
        let (_, fs) = full_norms(&x);
        let (_, spec) = pinv_norms(&x, r.indices.indices()).unwrap();
        prop_assert!(spec <= spectral_factor(n, m, k) * fs * (1.0 + 1e-9));
    }

    #[test]
    fn selected_columns_have_full_rank((x, k) in matrix_strategy()) {
        let r = greedy_remove_frobenius(&x, k).unwrap();
        prop_assert!(pinv_norms(&x, r.indices.indices()).is_some());
        prop_assert!(r.indices.indices().windows(2).all(|w| w[0] < w[1]));
    }
}
