//! Pure multipartite states, bipartitions of their subsystems, and the
//! reduced-density-matrix machinery shared by the measures and the oracles.
//!
//! Amplitudes are stored densely in row-major order with the first
//! subsystem varying slowest. All indices are 0-based: subsystem `j` of an
//! `m`-partite state satisfies `j < m`, and basis label `i_j < dims[j]`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance on `|Σ|α|² − 1|`.
pub const DEFAULT_NORM_TOL: f64 = 1e-9;

/// Largest number of subsystems a dense state may have.
pub const MAX_SUBSYSTEMS: usize = 8;

/// Largest total Hilbert-space dimension a dense state may have.
pub const MAX_TOTAL_DIM: usize = 1 << 20;

pub type CMatrix = DMatrix<Complex64>;

/// A pure state of `m` subsystems with local dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state, checking the shape but not the norm.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = checked_total_dim(&dims)?;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(PureState { dims, amplitudes })
    }

    /// The computational basis state `|idx⟩`.
    pub fn basis(dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        let total = checked_total_dim(&dims)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
        let flat = flat_index(&dims, idx)?;
        amplitudes[flat] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, amplitudes })
    }

    /// Tensor product `v_1 ⊗ ... ⊗ v_m` of single-subsystem vectors.
    pub fn product(factors: &[Vec<Complex64>]) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        checked_total_dim(&dims)?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect();
        }
        Ok(PureState { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `Σ|α|²`
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Row-major strides, one per subsystem.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        flat_index(&self.dims, idx)
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        let mut rest = flat;
        for (slot, &d) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        idx
    }

    /// `α_idx`
    pub fn amplitude(&self, idx: &[usize]) -> Result<Complex64> {
        Ok(self.amplitudes[self.flat_index(idx)?])
    }

    /// Succeeds iff `|Σ|α|² − 1| ≤ tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let expected = self.dims.iter().product::<usize>();
        if self.amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: self.amplitudes.len(),
            });
        }
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > tol || !n2.is_finite() {
            return Err(Error::NotNormalized { norm: n2.sqrt() });
        }
        Ok(())
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(PureState {
            dims: self.dims.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        })
    }
}

fn checked_total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("at least one subsystem required".into()));
    }
    if let Some(j) = dims.iter().position(|&d| d == 0) {
        return Err(Error::InvalidDims(format!("dims[{j}] is zero")));
    }
    if dims.len() > MAX_SUBSYSTEMS {
        return Err(Error::TooLarge(format!(
            "{} subsystems exceeds the limit of {MAX_SUBSYSTEMS}",
            dims.len()
        )));
    }
    let mut total: usize = 1;
    for &d in dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| {
                Error::TooLarge(format!(
                    "total dimension of {dims:?} exceeds the limit of {MAX_TOTAL_DIM}"
                ))
            })?;
    }
    Ok(total)
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

pub(crate) fn flat_index(dims: &[usize], idx: &[usize]) -> Result<usize> {
    if idx.len() != dims.len() {
        return Err(Error::IndexOutOfRange(format!(
            "multi-index {idx:?} has {} slots, state has {}",
            idx.len(),
            dims.len()
        )));
    }
    let mut flat = 0;
    for (j, (&i, &d)) in idx.iter().zip(dims).enumerate() {
        if i >= d {
            return Err(Error::IndexOutOfRange(format!(
                "index {i} in slot {j} is not below dimension {d}"
            )));
        }
        flat = flat * d + i;
    }
    Ok(flat)
}

/// A split of the subsystems `0..m` into `left` and its complement.
///
/// `left` is kept exactly as given (sorted); [`Bipartition::canonical`]
/// picks the representative used for enumeration: the smaller side, or
/// for an even split the side containing subsystem 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    m: usize,
    left: Vec<usize>,
}

impl Bipartition {
    pub fn new(m: usize, left: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut left: Vec<usize> = left.into_iter().collect();
        left.sort_unstable();
        left.dedup();
        if left.is_empty() {
            return Err(Error::InvalidPartition("left side is empty".into()));
        }
        if let Some(&j) = left.iter().find(|&&j| j >= m) {
            return Err(Error::InvalidPartition(format!(
                "subsystem {j} does not exist in a {m}-partite system"
            )));
        }
        if left.len() == m {
            return Err(Error::InvalidPartition(
                "left side covers every subsystem".into(),
            ));
        }
        Ok(Bipartition { m, left })
    }

    pub fn num_subsystems(&self) -> usize {
        self.m
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> Vec<usize> {
        (0..self.m).filter(|j| !self.left.contains(j)).collect()
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition {
            m: self.m,
            left: self.right(),
        }
    }

    pub fn canonical(&self) -> Bipartition {
        let k = self.left.len();
        let keep = 2 * k < self.m || (2 * k == self.m && self.left[0] == 0);
        if keep {
            self.clone()
        } else {
            self.complement()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// True when one side holds a single subsystem.
    pub fn is_single_subsystem(&self) -> bool {
        self.left.len() == 1 || self.left.len() + 1 == self.m
    }

    /// The lone subsystem of a single-subsystem split (smallest one when
    /// `m = 2`).
    pub fn single_subsystem(&self) -> Option<usize> {
        if self.left.len() == 1 {
            Some(self.left[0])
        } else if self.left.len() + 1 == self.m {
            self.right().first().copied()
        } else {
            None
        }
    }

    fn check_against(&self, dims: &[usize]) -> Result<()> {
        if self.m != dims.len() {
            return Err(Error::InvalidPartition(format!(
                "bipartition of {} subsystems applied to a {}-partite state",
                self.m,
                dims.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, j) in self.left.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// Every canonical bipartition of `m` subsystems, `2^(m−1) − 1` of them,
/// ordered by the size of the left side and then lexicographically.
pub fn enumerate_bipartitions(m: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for size in 1..=m / 2 {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            if 2 * size < m || comb[0] == 0 {
                out.push(Bipartition {
                    m,
                    left: comb.clone(),
                });
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&p| comb[p] < m - size + p) else {
                break;
            };
            comb[pos] += 1;
            for p in pos + 1..size {
                comb[p] = comb[p - 1] + 1;
            }
        }
    }
    out
}

/// Rearranges the amplitudes into a matrix whose rows run over the
/// subsystems in `part.left()` and whose columns run over the rest, both
/// row-major.
pub fn matricize(state: &PureState, part: &Bipartition) -> Result<CMatrix> {
    part.check_against(&state.dims)?;
    let (left, right) = (part.left(), part.right());
    let st = state.strides();
    let row_dims: Vec<usize> = left.iter().map(|&j| state.dims[j]).collect();
    let col_dims: Vec<usize> = right.iter().map(|&j| state.dims[j]).collect();
    let rows = row_dims.iter().product();
    let cols = col_dims.iter().product();

    // offset of each row / column inside the flat amplitude array
    let offsets = |slots: &[usize], dims: &[usize], count: usize| -> Vec<usize> {
        let sub = strides(dims);
        (0..count)
            .map(|r| {
                slots
                    .iter()
                    .zip(dims.iter().zip(&sub))
                    .map(|(&j, (&d, &s))| (r / s) % d * st[j])
                    .sum()
            })
            .collect()
    };
    let row_off = offsets(left, &row_dims, rows);
    let col_off = offsets(&right, &col_dims, cols);
    Ok(CMatrix::from_fn(rows, cols, |r, c| {
        state.amplitudes[row_off[r] + col_off[c]]
    }))
}

/// Inverse of [`matricize`].
pub fn dematricize(dims: &[usize], part: &Bipartition, mat: &CMatrix) -> Result<PureState> {
    part.check_against(dims)?;
    let total = checked_total_dim(dims)?;
    let probe = PureState {
        dims: dims.to_vec(),
        amplitudes: (0..total).map(|f| Complex64::new(f as f64, 0.0)).collect(),
    };
    let layout = matricize(&probe, part)?;
    if layout.shape() != mat.shape() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {:?}, bipartition needs {:?}",
            mat.shape(),
            layout.shape()
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
    for (flat, value) in layout.iter().zip(mat.iter()) {
        amplitudes[flat.re as usize] = *value;
    }
    PureState::new(dims.to_vec(), amplitudes)
}

/// A Hermitian, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-9;

    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {:?}",
                entries.shape()
            )));
        }
        let n = entries.nrows();
        for a in 0..n {
            for b in a..n {
                if (entries[(a, b)] - entries[(b, a)].conj()).norm() > Self::HERMITIAN_TOL {
                    return Err(Error::DimensionMismatch(format!(
                        "density matrix is not Hermitian at ({a},{b})"
                    )));
                }
            }
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return Err(Error::NotNormalized { norm: tr.norm() });
        }
        Ok(DensityMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `tr ρ² = Σ_{a,b} |ρ_ab|²`
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `M M†`, computed on the upper triangle and mirrored so the result is
/// exactly Hermitian.
pub(crate) fn gram(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut g = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let s: Complex64 = m
                .row(a)
                .iter()
                .zip(m.row(b).iter())
                .map(|(x, y)| x * y.conj())
                .sum();
            g[(a, b)] = s;
            g[(b, a)] = s.conj();
        }
        g[(a, a)].im = 0.0;
    }
    g
}

/// Reduced state of the subsystems in `part.left()`.
pub fn reduced_density(state: &PureState, part: &Bipartition) -> Result<DensityMatrix> {
    let m = matricize(state, part)?;
    DensityMatrix::new(gram(&m))
}

/// Reduced state `ρ_j` of subsystem `keep`.
pub fn partial_trace(state: &PureState, keep: usize) -> Result<DensityMatrix> {
    let m = state.num_subsystems();
    if keep >= m {
        return Err(Error::IndexOutOfRange(format!(
            "subsystem {keep} of a {m}-partite state"
        )));
    }
    if m == 1 {
        let v = CMatrix::from_column_slice(state.total_dim(), 1, state.amplitudes());
        return DensityMatrix::new(gram(&v));
    }
    reduced_density(state, &Bipartition::new(m, [keep])?)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}
