//! Golden values checked against brute-force references first, then against
//! the library.

mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use wedge_core::measures::{
    bipartite_concurrence, multipartite_measure, pair_qubit_concurrence, tripartite_measure,
    MeasureConfig,
};
use wedge_core::separability::{partition_residual, partition_residual_via_purity};
use wedge_core::state::{matricize, partial_trace, purity, Bipartition};

const SQRT6: f64 = 2.449_489_742_783_178;
const FOUR_OVER_SQRT3: f64 = 2.309_401_076_758_503;

#[test]
fn closed_form_identity_holds_by_brute_force_expansion() {
    // the frozen golden values below rest on this identity
    for (state, want_sum) in [(ghz(3), 3.0), (w3(), 8.0 / 3.0), (bell_zero(), 2.0)] {
        let brute = brute_multipartite_sum(&state);
        let closed = closed_form_e_squared(&state, 1.0);
        assert!((brute - closed).abs() < 1e-12, "{brute} vs {closed}");
        assert!((brute - want_sum).abs() < 1e-12);
    }
    assert!(((2.0 * 3.0f64).sqrt() - SQRT6).abs() < 1e-15);
    assert!(((2.0 * 8.0f64 / 3.0).sqrt() - FOUR_OVER_SQRT3).abs() < 1e-15);
}

#[test]
fn tripartite_golden_values() {
    let cfg = MeasureConfig::default();
    for (state, want) in [(ghz(3), SQRT6), (w3(), FOUR_OVER_SQRT3), (bell_zero(), 2.0)] {
        let generic = multipartite_measure(&state, &cfg).unwrap();
        let explicit = tripartite_measure(&state, &cfg).unwrap();
        assert!((generic.value - want).abs() < 1e-9);
        assert!((explicit.value - generic.value).abs() < 1e-12);
    }
    let zero = wedge_core::PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
    assert_eq!(tripartite_measure(&zero, &cfg).unwrap().value, 0.0);
}

#[test]
fn w_marginal_purity() {
    // ρ₁ of W₃ is diag(2/3, 1/3)
    let brute = brute_reduced(&w3(), &[0]);
    assert!((brute[0][0].re - 2.0 / 3.0).abs() < 1e-15);
    assert!((brute[1][1].re - 1.0 / 3.0).abs() < 1e-15);
    assert!(brute[0][1].norm() < 1e-15);
    assert!((purity(&partial_trace(&w3(), 0).unwrap()) - 5.0 / 9.0).abs() < 1e-15);
}

#[test]
fn random_partial_trace_matches_double_sum() {
    let mut r = rng(11);
    for _ in 0..20 {
        let s = random_state(&[2, 2, 2], &mut r);
        let lib = partial_trace(&s, 1).unwrap();
        let brute = brute_reduced(&s, &[1]);
        for (a, row) in brute.iter().enumerate() {
            for (b, want) in row.iter().enumerate() {
                assert!((lib.entries()[(a, b)] - want).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn random_matricize_middle_slot() {
    let mut r = rng(12);
    let s = random_state(&[2, 2, 2], &mut r);
    let m = matricize(&s, &Bipartition::new(3, [1]).unwrap()).unwrap();
    for i1 in 0..2 {
        for i2 in 0..2 {
            for i3 in 0..2 {
                assert_eq!(m[(i2, 2 * i1 + i3)], lookup(&s, &[i1, i2, i3]));
            }
        }
    }
}

#[test]
fn random_three_by_four_concurrence() {
    let mut r = rng(13);
    let cfg = MeasureConfig::default();
    for _ in 0..50 {
        let s = random_state(&[3, 4], &mut r);
        let oracle = (2.0 * (1.0 - brute_purity(&s, &[0]))).sqrt();
        let got = bipartite_concurrence(&s, &cfg).unwrap().value;
        assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
    }
}

#[test]
fn pair_qubit_is_bitwise_bipartite() {
    let mut r = rng(14);
    let cfg = MeasureConfig::default();
    for _ in 0..500 {
        let s = random_state(&[2, 2], &mut r);
        let a = pair_qubit_concurrence(&s, &cfg).unwrap();
        let b = bipartite_concurrence(&s, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.term_sum.to_bits(), b.term_sum.to_bits());
    }
}

#[test]
fn pair_coefficient_matches_lookups() {
    let mut r = rng(15);
    let s = random_state(&[2, 3, 2], &mut r);
    let idx = all_indices(s.dims());
    for k in &idx {
        for l in &idx {
            let got = wedge_core::measures::pair_coefficient(&s, k, l).unwrap();
            assert_eq!(got, lookup(&s, k) * lookup(&s, l));
            for j in 0..3 {
                let mut ks = k.clone();
                let mut ls = l.clone();
                ks[j] = l[j];
                ls[j] = k[j];
                let want = lookup(&s, k) * lookup(&s, l) - lookup(&s, &ks) * lookup(&s, &ls);
                let got = wedge_core::measures::swapped_wedge_coefficient(&s, k, l, j).unwrap();
                assert!((got - want).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn bell_zero_partition_residuals() {
    let s = bell_zero();
    assert!((1.0 - brute_purity(&s, &[0]) - 0.5).abs() < 1e-15);
    let p1 = Bipartition::new(3, [0]).unwrap();
    let p3 = Bipartition::new(3, [2]).unwrap();
    assert!((partition_residual(&s, &p1).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(partition_residual(&s, &p3).unwrap(), 0.0);
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[test]
fn ghz4_pair_split_residual() {
    let s = ghz(4);
    let part = Bipartition::new(4, [0, 1]).unwrap();
    let sv = singular_values(&matricize(&s, &part).unwrap());
    // residual = 1 − Σσ⁴ = 2 Σ_{a<b} σ_a² σ_b²
    let mut oracle = 0.0;
    for a in 0..sv.len() {
        for b in a + 1..sv.len() {
            oracle += sv[a].powi(2) * sv[b].powi(2);
        }
    }
    assert!((2.0 * oracle - 0.5).abs() < 1e-12);
    assert!((sv[0] - sv[1]).abs() < 1e-12);
    assert!((1.0 - brute_purity(&s, &[0, 1]) - 0.5).abs() < 1e-12);
    assert!((partition_residual(&s, &part).unwrap() - 0.5).abs() < 1e-12);
    assert!((partition_residual_via_purity(&s, &part).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn residual_equals_singular_value_sum_on_random_states() {
    let mut r = rng(16);
    for _ in 0..50 {
        let s = random_state(&[2, 3, 2, 2], &mut r);
        for part in wedge_core::enumerate_bipartitions(4) {
            let sv = singular_values(&matricize(&s, &part).unwrap());
            let mut oracle = 0.0;
            for a in 0..sv.len() {
                for b in a + 1..sv.len() {
                    oracle += 2.0 * sv[a].powi(2) * sv[b].powi(2);
                }
            }
            let got = partition_residual(&s, &part).unwrap();
            assert!((got - oracle).abs() < 1e-9, "{part}: {got} vs {oracle}");
        }
    }
}

#[test]
fn bell_bell_residuals() {
    let s = bell_bell();
    for part in wedge_core::enumerate_bipartitions(4) {
        let oracle = 1.0 - brute_purity(&s, part.left());
        let got = partition_residual(&s, &part).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        if part.left() == [0, 1] {
            assert!(got <= 1e-12);
        } else {
            assert!(got >= 0.5 - 1e-12);
        }
    }
}
