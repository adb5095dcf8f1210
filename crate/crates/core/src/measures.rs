//! Wedge-product entanglement measures for pure states.
//!
//! * [`bipartite_concurrence`]: `C = (𝒩 Σ_{μ<ν} ‖r_μ ∧ r_ν‖²)^{1/2}` over
//!   the rows `r_μ` of the coefficient matrix of a two-party state.
//! * [`pair_qubit_concurrence`]: the two-qubit closed form
//!   `(2𝒩)^{1/2} |α₀₀α₁₁ − α₁₀α₀₁|`.
//! * [`multipartite_measure`]: `E = (𝒩 Σ_{K,L} Σ_j |α_K α_L − α_{K[j←l_j]} α_{L[j←k_j]}|²)^{1/2}`,
//!   where `K` and `L` each run over every multi-index independently.
//! * [`tripartite_measure`]: the same sum written out for three parties.
//!
//! For unit-norm input these satisfy `C² = 𝒩(1 − tr ρ₁²)` and
//! `E² = 𝒩 Σ_j (2 − 2 tr ρ_j²)`; in particular `E = 2C` for two parties.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilinear::{grid_norm_sq, wedge_pair};
use crate::state::{matricize, Bipartition, PureState, DEFAULT_NORM_TOL};

/// Largest total dimension accepted by the `O(D²·m)` brute-force sum.
pub const MAX_BRUTE_FORCE_DIM: usize = 4096;

/// Number of outer multi-indices summed per chunk. Fixed so that the
/// result does not depend on the thread count.
const CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    /// The normalization constant `𝒩`.
    pub norm_constant: f64,
    pub tol: f64,
    /// Rescale unnormalized input instead of rejecting it.
    pub normalize: bool,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            norm_constant: 2.0,
            tol: DEFAULT_NORM_TOL,
            normalize: false,
        }
    }
}

impl MeasureConfig {
    pub fn with_norm_constant(norm_constant: f64) -> Self {
        MeasureConfig {
            norm_constant,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    BipartiteConcurrence,
    MultipartiteE,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    pub value: f64,
    pub norm_constant: f64,
    /// The sum under the square root, before scaling by `𝒩`.
    pub term_sum: f64,
}

impl MeasureResult {
    fn new(kind: MeasureKind, cfg: &MeasureConfig, term_sum: f64) -> Self {
        MeasureResult {
            kind,
            value: (cfg.norm_constant * term_sum).sqrt(),
            norm_constant: cfg.norm_constant,
            term_sum,
        }
    }
}

/// Checks the configuration and the norm, rescaling when the config asks
/// for it.
fn prepare<'a>(
    state: &'a PureState,
    cfg: &MeasureConfig,
) -> Result<std::borrow::Cow<'a, PureState>> {
    if !(cfg.norm_constant > 0.0 && cfg.norm_constant.is_finite()) {
        return Err(Error::InvalidDims(format!(
            "normalization constant must be positive, got {}",
            cfg.norm_constant
        )));
    }
    if cfg.normalize {
        Ok(std::borrow::Cow::Owned(state.normalize()?))
    } else {
        state.validate(cfg.tol)?;
        Ok(std::borrow::Cow::Borrowed(state))
    }
}

fn require_arity(state: &PureState, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongArity {
            expected: expected.into(),
            actual: state.num_subsystems(),
        })
    }
}

/// `Σ_{μ<ν} ‖r_μ ∧ r_ν‖²` over the rows of the matricization across `part`.
pub(crate) fn wedge_row_sum(state: &PureState, part: &Bipartition) -> Result<f64> {
    let m = matricize(state, part)?;
    let rows: Vec<Vec<Complex64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    let mut sum = 0.0;
    for mu in 0..rows.len() {
        for nu in mu + 1..rows.len() {
            sum += grid_norm_sq(&wedge_pair(&rows[mu], &rows[nu])?);
        }
    }
    Ok(sum)
}

pub fn bipartite_concurrence(state: &PureState, cfg: &MeasureConfig) -> Result<MeasureResult> {
    require_arity(state, state.num_subsystems() == 2, "exactly 2")?;
    let state = prepare(state, cfg)?;
    let term_sum = wedge_row_sum(&state, &Bipartition::new(2, [0])?)?;
    Ok(MeasureResult::new(
        MeasureKind::BipartiteConcurrence,
        cfg,
        term_sum,
    ))
}

/// Two-qubit concurrence. Bitwise equal to [`bipartite_concurrence`] on
/// the same input.
pub fn pair_qubit_concurrence(state: &PureState, cfg: &MeasureConfig) -> Result<MeasureResult> {
    if state.dims() != [2, 2] {
        return Err(Error::WrongDims {
            expected: vec![2, 2],
            actual: state.dims().to_vec(),
        });
    }
    let state = prepare(state, cfg)?;
    let a = state.amplitudes();
    let minor = a[0] * a[3] - a[2] * a[1];
    // the wedge of the two rows holds ±minor once each
    let term_sum = 2.0 * minor.norm_sqr();
    Ok(MeasureResult::new(
        MeasureKind::BipartiteConcurrence,
        cfg,
        term_sum,
    ))
}

fn check_multi_index(state: &PureState, idx: &[usize]) -> Result<usize> {
    state.flat_index(idx)
}

/// `α_K α_L`
pub fn pair_coefficient(state: &PureState, k: &[usize], l: &[usize]) -> Result<Complex64> {
    let a = state.amplitudes();
    Ok(a[check_multi_index(state, k)?] * a[check_multi_index(state, l)?])
}

/// `α_K α_L − α_{K[j←l_j]} α_{L[j←k_j]}`
pub fn swapped_wedge_coefficient(
    state: &PureState,
    k: &[usize],
    l: &[usize],
    j: usize,
) -> Result<Complex64> {
    let fk = check_multi_index(state, k)?;
    let fl = check_multi_index(state, l)?;
    let m = state.num_subsystems();
    if j >= m {
        return Err(Error::IndexOutOfRange(format!(
            "subsystem {j} of a {m}-partite state"
        )));
    }
    Ok(swap_term(
        state.amplitudes(),
        &state.strides(),
        fk,
        fl,
        k[j],
        l[j],
        j,
    ))
}

#[inline]
fn swap_term(
    a: &[Complex64],
    strides: &[usize],
    fk: usize,
    fl: usize,
    kj: usize,
    lj: usize,
    j: usize,
) -> Complex64 {
    let s = strides[j];
    let ks = fk - kj * s + lj * s;
    let ls = fl - lj * s + kj * s;
    a[fk] * a[fl] - a[ks] * a[ls]
}

fn check_size(state: &PureState) -> Result<()> {
    if state.total_dim() > MAX_BRUTE_FORCE_DIM {
        return Err(Error::TooLarge(format!(
            "total dimension {} exceeds {MAX_BRUTE_FORCE_DIM} for the brute-force measure; \
             use E² = 𝒩 Σ_j (2 − 2 tr ρ_j²) instead",
            state.total_dim()
        )));
    }
    Ok(())
}

/// Pairwise (tree) reduction; the association order depends only on the
/// number of inputs.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// The full `Σ_{K,L} Σ_j` sum, evaluated in fixed chunks of `K`.
pub(crate) fn multipartite_term_sum(state: &PureState) -> f64 {
    let a = state.amplitudes();
    let dims = state.dims();
    let st = state.strides();
    let total = a.len();
    let digit = |flat: usize, j: usize| (flat / st[j]) % dims[j];

    let chunk_sums: Vec<f64> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sum = 0.0;
            for fk in c * CHUNK..((c + 1) * CHUNK).min(total) {
                for fl in 0..total {
                    for j in 0..dims.len() {
                        let (kj, lj) = (digit(fk, j), digit(fl, j));
                        if kj != lj {
                            sum += swap_term(a, &st, fk, fl, kj, lj, j).norm_sqr();
                        }
                    }
                }
            }
            sum
        })
        .collect();
    pairwise_sum(&chunk_sums)
}

pub fn multipartite_measure(state: &PureState, cfg: &MeasureConfig) -> Result<MeasureResult> {
    require_arity(state, state.num_subsystems() >= 2, "at least 2")?;
    check_size(state)?;
    let state = prepare(state, cfg)?;
    Ok(MeasureResult::new(
        MeasureKind::MultipartiteE,
        cfg,
        multipartite_term_sum(&state),
    ))
}

/// Three-party measure, written as three explicit swap terms per
/// `(k₁,l₁,k₂,l₂,k₃,l₃)`.
pub fn tripartite_measure(state: &PureState, cfg: &MeasureConfig) -> Result<MeasureResult> {
    require_arity(state, state.num_subsystems() == 3, "exactly 3")?;
    check_size(state)?;
    let state = prepare(state, cfg)?;
    let (n1, n2, n3) = (state.dims()[0], state.dims()[1], state.dims()[2]);
    let a = state.amplitudes();
    let at = |i: usize, j: usize, k: usize| a[(i * n2 + j) * n3 + k];

    let mut sum = 0.0;
    for k1 in 0..n1 {
        for l1 in 0..n1 {
            for k2 in 0..n2 {
                for l2 in 0..n2 {
                    for k3 in 0..n3 {
                        for l3 in 0..n3 {
                            let base = at(k1, k2, k3) * at(l1, l2, l3);
                            sum += (base - at(l1, k2, k3) * at(k1, l2, l3)).norm_sqr()
                                + (base - at(k1, l2, k3) * at(l1, k2, l3)).norm_sqr()
                                + (base - at(k1, k2, l3) * at(l1, l2, k3)).norm_sqr();
                        }
                    }
                }
            }
        }
    }
    Ok(MeasureResult::new(MeasureKind::MultipartiteE, cfg, sum))
}

/// Which measure a caller wants; `Auto` picks the concurrence for two
/// parties and `E` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSelector {
    Bipartite,
    Multipartite,
    Auto,
}

impl MeasureSelector {
    pub fn resolve(self, m: usize) -> MeasureKind {
        match self {
            MeasureSelector::Bipartite => MeasureKind::BipartiteConcurrence,
            MeasureSelector::Multipartite => MeasureKind::MultipartiteE,
            MeasureSelector::Auto if m == 2 => MeasureKind::BipartiteConcurrence,
            MeasureSelector::Auto => MeasureKind::MultipartiteE,
        }
    }
}

pub fn evaluate(
    state: &PureState,
    selector: MeasureSelector,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    match selector.resolve(state.num_subsystems()) {
        MeasureKind::BipartiteConcurrence => bipartite_concurrence(state, cfg),
        MeasureKind::MultipartiteE => multipartite_measure(state, cfg),
    }
}
