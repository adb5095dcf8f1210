//! Seeded Haar-random local unitaries and local-unitary invariance runs.
//!
//! Randomness comes from ChaCha8 keyed by a 64-bit seed. Trial `k` of an
//! experiment reads ChaCha stream `k`, so any trial can be replayed on its
//! own and the result does not depend on how trials are scheduled.
//! Gaussian variates use the Box–Muller transform.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, MeasureConfig, MeasureSelector};
use crate::state::{CMatrix, PureState};

/// Per-trial deviations kept in an [`InvarianceRun`].
pub const MAX_RETAINED_DEVIATIONS: usize = 100_000;

/// Stream reserved for drawing random input states, disjoint from the
/// trial streams `0..trials`.
pub const STATE_STREAM: u64 = u64::MAX;

/// The generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Box–Muller pair of independent standard normals.
pub fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // u1 in (0, 1] keeps the logarithm finite
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let (a, b) = gaussian_pair(rng);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// A unitary matrix acting on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGate {
    entries: CMatrix,
}

impl UnitaryGate {
    pub const UNITARITY_TOL: f64 = 1e-10;

    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "gate must be square, got {:?}",
                entries.shape()
            )));
        }
        let gate = UnitaryGate { entries };
        let dev = gate.unitarity_deviation();
        if dev > Self::UNITARITY_TOL {
            return Err(Error::DimensionMismatch(format!(
                "gate is not unitary: max |U†U − I| = {dev:e}"
            )));
        }
        Ok(gate)
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryGate {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// `max_{ab} |(U†U − I)_{ab}|`
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let id = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((p[(a, b)] - id).norm());
            }
        }
        worst
    }
}

/// Haar-distributed `dim × dim` unitary: QR of a complex Gaussian matrix,
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryGate {
    let z = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let (mut q, r_diag) = gram_schmidt(z);
    for (k, rkk) in r_diag.iter().enumerate() {
        // r̄_kk/|r_kk|; Gram–Schmidt leaves r_kk real and positive so this
        // is the identity unless the column was degenerate
        let phase = if rkk.norm() > 0.0 {
            rkk.conj() / rkk.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    UnitaryGate { entries: q }
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns `Q`
/// and the diagonal of `R`.
fn gram_schmidt(mut a: CMatrix) -> (CMatrix, Vec<Complex64>) {
    let n = a.ncols();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        for _pass in 0..2 {
            for i in 0..k {
                let qi = a.column(i).into_owned();
                let proj = qi.dotc(&a.column(k));
                let mut col = a.column_mut(k);
                col -= qi * proj;
            }
        }
        let norm = a.column(k).norm();
        diag.push(Complex64::new(norm, 0.0));
        let mut col = a.column_mut(k);
        if norm > 0.0 {
            col /= Complex64::new(norm, 0.0);
        }
    }
    (a, diag)
}

/// `(U_1 ⊗ ... ⊗ U_m) ψ`
pub fn apply_local(state: &PureState, gates: &[UnitaryGate]) -> Result<PureState> {
    let dims = state.dims();
    if gates.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} gates for a {}-partite state",
            gates.len(),
            dims.len()
        )));
    }
    if let Some((j, g)) = gates.iter().enumerate().find(|(j, g)| g.dim() != dims[*j]) {
        return Err(Error::DimensionMismatch(format!(
            "gate {j} has dimension {}, subsystem has {}",
            g.dim(),
            dims[j]
        )));
    }
    let strides = state.strides();
    let mut amps = state.amplitudes().to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (j, gate) in gates.iter().enumerate() {
        let (d, inner) = (dims[j], strides[j]);
        let u = gate.entries();
        for outer in (0..amps.len()).step_by(d * inner) {
            for lo in 0..inner {
                let base = outer + lo;
                for a in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..d {
                        acc += u[(a, b)] * amps[base + b * inner];
                    }
                    scratch[base + a * inner] = acc;
                }
            }
        }
        std::mem::swap(&mut amps, &mut scratch);
    }
    PureState::new(dims.to_vec(), amps)
}

/// Normalized state with independent complex Gaussian amplitudes.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = dims.iter().product();
    let amps = (0..total).map(|_| complex_gaussian(rng)).collect();
    PureState::new(dims.to_vec(), amps)?.normalize()
}

/// One Haar unitary per subsystem.
pub fn random_local_gates<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Vec<UnitaryGate> {
    dims.iter().map(|&d| haar_unitary(d, rng)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceRun {
    pub seed: u64,
    pub trials: usize,
    pub baseline: f64,
    pub max_abs_deviation: f64,
    /// First [`MAX_RETAINED_DEVIATIONS`] trials, in trial order.
    pub per_trial_deviations: Vec<f64>,
}

/// For each trial, draws one Haar unitary per subsystem from that trial's
/// stream and records `|measure(Uψ) − measure(ψ)|`.
pub fn invariance_experiment(
    state: &PureState,
    trials: usize,
    seed: u64,
    selector: MeasureSelector,
    cfg: &MeasureConfig,
) -> Result<InvarianceRun> {
    if trials == 0 {
        return Err(Error::InvalidDims("at least one trial is required".into()));
    }
    let baseline = measures::evaluate(state, selector, cfg)?.value;
    let deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let gates = random_local_gates(state.dims(), &mut rng);
            let moved = apply_local(state, &gates)?;
            Ok((measures::evaluate(&moved, selector, cfg)?.value - baseline).abs())
        })
        .collect::<Result<_>>()?;
    let max_abs_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let mut per_trial_deviations = deviations;
    per_trial_deviations.truncate(MAX_RETAINED_DEVIATIONS);
    Ok(InvarianceRun {
        seed,
        trials,
        baseline,
        max_abs_deviation,
        per_trial_deviations,
    })
}
