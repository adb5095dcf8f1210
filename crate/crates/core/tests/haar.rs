mod common;

use common::*;
use nalgebra::DMatrix;
use wedge_core::lu::{haar_unitary, stream_rng, UnitaryGate};
use wedge_core::measures::{MeasureConfig, MeasureSelector};
use wedge_core::{apply_local, invariance_experiment};

#[test]
fn second_moment_of_a_haar_entry() {
    // E|U_00|² = 1/dim
    let mut r = stream_rng(2024, 0);
    let n = 100_000;
    let mean = (0..n)
        .map(|_| haar_unitary(2, &mut r).entries()[(0, 0)].norm_sqr())
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");

    let mut r = stream_rng(2025, 0);
    let mean = (0..20_000)
        .map(|_| haar_unitary(3, &mut r).entries()[(1, 2)].norm_sqr())
        .sum::<f64>()
        / 20_000.0;
    assert!((mean - 1.0 / 3.0).abs() < 0.01, "{mean}");
}

#[test]
fn samples_are_unitary_and_reproducible() {
    for dim in 1..=5 {
        let a = haar_unitary(dim, &mut stream_rng(5, dim as u64));
        let b = haar_unitary(dim, &mut stream_rng(5, dim as u64));
        assert_eq!(a, b);
        assert!(a.unitarity_deviation() <= 1e-10);
    }
}

#[test]
fn single_slot_action() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let had = UnitaryGate::new(DMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])).unwrap();
    let zero = from_sparse(vec![2, 2], &[(&[0, 0], c(1.0))]);
    let out = apply_local(&zero, &[had, UnitaryGate::identity(2)]).unwrap();
    let want = [c(h), c(0.0), c(h), c(0.0)];
    for (a, b) in out.amplitudes().iter().zip(want) {
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn apply_local_matches_explicit_kronecker_product() {
    let mut r = rng(40);
    let s = random_state(&[2, 3, 2], &mut r);
    let mut g = stream_rng(40, 1);
    let gates: Vec<UnitaryGate> = s.dims().iter().map(|&d| haar_unitary(d, &mut g)).collect();
    let kron = gates[0]
        .entries()
        .kronecker(gates[1].entries())
        .kronecker(gates[2].entries());
    let v = DMatrix::from_column_slice(12, 1, s.amplitudes());
    let want = kron * v;
    let got = apply_local(&s, &gates).unwrap();
    for (a, b) in got.amplitudes().iter().zip(want.iter()) {
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn invariance_runs_are_deterministic() {
    let cfg = MeasureConfig::default();
    let s = random_state(&[2, 2, 2, 2], &mut rng(41));
    let a = invariance_experiment(&s, 200, 9, MeasureSelector::Multipartite, &cfg).unwrap();
    let b = invariance_experiment(&s, 200, 9, MeasureSelector::Multipartite, &cfg).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.per_trial_deviations), bits(&b.per_trial_deviations));
    assert_eq!(a.max_abs_deviation.to_bits(), b.max_abs_deviation.to_bits());

    // trial k depends only on its own stream
    let prefix = invariance_experiment(&s, 50, 9, MeasureSelector::Multipartite, &cfg).unwrap();
    assert_eq!(
        bits(&prefix.per_trial_deviations),
        bits(&a.per_trial_deviations[..50])
    );
}

#[test]
fn bell_and_ghz_invariance() {
    let cfg = MeasureConfig::default();
    let bell = invariance_experiment(&bell(), 100, 1, MeasureSelector::Bipartite, &cfg).unwrap();
    assert!(bell.max_abs_deviation <= 1e-9);
    let ghz = invariance_experiment(&ghz(3), 100, 1, MeasureSelector::Multipartite, &cfg).unwrap();
    assert!(ghz.max_abs_deviation <= 1e-9);
}

#[test]
fn invariance_on_random_states() {
    let cfg = MeasureConfig::default();
    let mut r = rng(42);
    for dims in [vec![3, 2], vec![2, 3, 2]] {
        for seed in 0..3 {
            let s = random_state(&dims, &mut r);
            let run = invariance_experiment(&s, 200, seed, MeasureSelector::Auto, &cfg).unwrap();
            assert!(
                run.max_abs_deviation <= 1e-9,
                "{dims:?}: {}",
                run.max_abs_deviation
            );
        }
    }
}
