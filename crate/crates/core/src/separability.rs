//! Separability of pure states across every bipartition of the subsystems.
//!
//! A split `A|Ā` is separable iff the matricization across it has rank
//! one, i.e. every wedge of two of its rows vanishes. The residual
//! `Σ_{μ<ν} ‖r_μ ∧ r_ν‖²` equals `1 − tr ρ_A²` for a unit-norm state, and
//! is the same number for both sides of the split.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::wedge_row_sum;
use crate::state::{
    enumerate_bipartitions, gram, matricize, reduced_density, Bipartition, PureState,
    DEFAULT_NORM_TOL,
};

pub const DEFAULT_THRESHOLD: f64 = 1e-10;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

/// Wedge-of-rows residual of the split.
pub fn partition_residual(state: &PureState, part: &Bipartition) -> Result<f64> {
    wedge_row_sum(state, part)
}

/// `1 − tr ρ_A²`, the partial-trace route to the same number.
pub fn partition_residual_via_purity(state: &PureState, part: &Bipartition) -> Result<f64> {
    Ok(1.0 - reduced_density(state, part)?.purity())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionVerdict {
    pub residual: f64,
    pub separable: bool,
}

/// Unit vectors whose tensor product reproduces the state up to a global
/// phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCertificate {
    pub factors: Vec<Vec<Complex64>>,
    /// `min_φ ‖⊗ factors − e^{iφ} ψ‖`
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub threshold: f64,
    /// One entry per canonical bipartition, in enumeration order.
    pub per_partition: Vec<(Bipartition, PartitionVerdict)>,
    pub fully_separable: bool,
    pub certificate: Option<ProductCertificate>,
}

impl SeparabilityReport {
    pub fn verdict(&self, part: &Bipartition) -> Option<&PartitionVerdict> {
        let canon = part.canonical();
        self.per_partition
            .iter()
            .find(|(p, _)| *p == canon)
            .map(|(_, v)| v)
    }
}

pub fn separability_report(state: &PureState, threshold: f64) -> Result<SeparabilityReport> {
    state.validate(DEFAULT_NORM_TOL)?;
    let m = state.num_subsystems();
    let mut per_partition = Vec::new();
    for part in enumerate_bipartitions(m) {
        let residual = partition_residual(state, &part)?;
        per_partition.push((
            part,
            PartitionVerdict {
                residual,
                separable: residual <= threshold,
            },
        ));
    }
    let fully_separable = m == 1
        || per_partition
            .iter()
            .filter(|(p, _)| p.is_single_subsystem())
            .all(|(_, v)| v.separable);
    let certificate = if fully_separable {
        Some(product_certificate(state)?)
    } else {
        None
    };
    Ok(SeparabilityReport {
        threshold,
        per_partition,
        fully_separable,
        certificate,
    })
}

pub fn is_product_state(state: &PureState, threshold: f64) -> Result<bool> {
    let m = state.num_subsystems();
    for j in 0..m {
        if m == 2 && j == 1 {
            break;
        }
        if m > 1 && partition_residual(state, &Bipartition::new(m, [j])?)? > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Leading left singular vector of each single-subsystem matricization,
/// with its largest-modulus entry rotated to be real and positive.
pub fn product_certificate(state: &PureState) -> Result<ProductCertificate> {
    let m = state.num_subsystems();
    let mut factors = Vec::with_capacity(m);
    for j in 0..m {
        let v = if m == 1 {
            state.amplitudes().to_vec()
        } else {
            let g = gram(&matricize(state, &Bipartition::new(m, [j])?)?);
            leading_eigenvector(&g)
        };
        factors.push(fix_phase(v));
    }
    let product = PureState::product(&factors)?;
    let overlap: Complex64 = product
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(p, s)| p.conj() * s)
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let reconstruction_error = product
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(p, s)| (p * phase - s).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(ProductCertificate {
        factors,
        reconstruction_error,
    })
}

/// Power iteration on a Hermitian positive semidefinite matrix, started
/// from its heaviest column (first one on ties).
fn leading_eigenvector(g: &crate::state::CMatrix) -> Vec<Complex64> {
    let n = g.nrows();
    let start = (0..n).fold(0, |best, i| {
        if g[(i, i)].re > g[(best, best)].re {
            i
        } else {
            best
        }
    });
    let mut v: DVector<Complex64> = g.column(start).into_owned();
    let mut norm = v.norm();
    if norm == 0.0 {
        let mut e = DVector::zeros(n);
        e[start] = Complex64::new(1.0, 0.0);
        return e.iter().copied().collect();
    }
    v /= Complex64::new(norm, 0.0);
    for _ in 0..POWER_MAX_ITER {
        let mut next = g * &v;
        norm = next.norm();
        if norm == 0.0 {
            break;
        }
        next /= Complex64::new(norm, 0.0);
        // compare up to phase
        let overlap = v.dotc(&next);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let delta = (&next - &v * phase).norm();
        v = next;
        if delta <= POWER_TOL {
            break;
        }
    }
    v.iter().copied().collect()
}

fn fix_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let pivot = (0..v.len()).fold(0, |best, i| {
        if v[i].norm() > v[best].norm() {
            i
        } else {
            best
        }
    });
    let p = v[pivot];
    if norm > 0.0 && p.norm() > 0.0 {
        let rot = p.conj() / (p.norm() * norm);
        for z in &mut v {
            *z *= rot;
        }
        v[pivot] = Complex64::new(p.norm() / norm, 0.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_zero() -> PureState {
        let mut a = vec![c(0.0); 8];
        a[0] = c(FRAC_1_SQRT_2);
        a[6] = c(FRAC_1_SQRT_2);
        PureState::new(vec![2, 2, 2], a).unwrap()
    }

    #[test]
    fn bell_zero_residuals() {
        let s = bell_zero();
        let r3 = partition_residual(&s, &Bipartition::new(3, [2]).unwrap()).unwrap();
        assert_eq!(r3, 0.0);
        let r1 = partition_residual(&s, &Bipartition::new(3, [0]).unwrap()).unwrap();
        assert!((r1 - 0.5).abs() < 1e-15);
        assert!(!is_product_state(&s, DEFAULT_THRESHOLD).unwrap());
        let rep = separability_report(&s, DEFAULT_THRESHOLD).unwrap();
        assert!(!rep.fully_separable);
        assert!(rep.certificate.is_none());
        assert!(
            rep.verdict(&Bipartition::new(3, [0, 1]).unwrap())
                .unwrap()
                .separable
        );
    }

    #[test]
    fn basis_state_certificate() {
        let s = PureState::basis(vec![2, 2, 2, 2], &[0, 1, 0, 1]).unwrap();
        let rep = separability_report(&s, DEFAULT_THRESHOLD).unwrap();
        assert!(rep.fully_separable);
        assert_eq!(rep.per_partition.len(), 7);
        let cert = rep.certificate.unwrap();
        let e = |k: usize| {
            let mut v = vec![c(0.0); 2];
            v[k] = c(1.0);
            v
        };
        assert_eq!(cert.factors, vec![e(0), e(1), e(0), e(1)]);
        assert_eq!(cert.reconstruction_error, 0.0);
    }

    #[test]
    fn phased_product_certificate() {
        let a = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)];
        let b = vec![
            Complex64::new(0.0, FRAC_1_SQRT_2),
            Complex64::new(-0.5, 0.5),
        ];
        let s = PureState::product(&[a, b]).unwrap();
        let cert = product_certificate(&s).unwrap();
        assert!(cert.reconstruction_error < 1e-14);
        assert!(is_product_state(&s, DEFAULT_THRESHOLD).unwrap());
    }

    #[test]
    fn single_subsystem_state_is_trivially_separable() {
        let s = PureState::new(vec![2], vec![c(0.6), c(0.8)]).unwrap();
        let rep = separability_report(&s, DEFAULT_THRESHOLD).unwrap();
        assert!(rep.per_partition.is_empty());
        assert!(rep.fully_separable);
        assert!(is_product_state(&s, DEFAULT_THRESHOLD).unwrap());
    }

    #[test]
    fn rejects_unnormalized() {
        let s = PureState::new(vec![2, 2], vec![c(1.0); 4]).unwrap();
        assert!(separability_report(&s, DEFAULT_THRESHOLD).is_err());
    }
}
