//! Exterior-algebra primitives: permutations and their signatures, the
//! alternating projection of a tensor, and the wedge product of two
//! vectors.
//!
//! Two normalizations coexist. [`alt`] is the projection
//! `(1/m!) Σ_π ε(π) T∘π`, so it is idempotent. [`wedge_pair`] is the
//! factorless `v⊗w − w⊗v`, which is what the concurrence formulas are
//! written in terms of (its squared norm at `𝒩 = 2` gives the familiar
//! two-qubit concurrence `2|α₀₀α₁₁ − α₁₀α₀₁|`).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `alt` enumerates all `m!` permutations, so `m` is capped.
pub const MAX_FACTORS: usize = 8;

/// A bijection on `0..m`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{image:?}")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            image: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose permutations of {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        })
    }

    /// `+1` or `−1`, from the cycle decomposition: a cycle of length `k`
    /// is `k − 1` transpositions.
    pub fn signature(&self) -> i32 {
        let mut visited = vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            let mut i = start;
            let mut len = 0;
            while !visited[i] {
                visited[i] = true;
                i = self.image[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All `m!` permutations of `0..m` in lexicographic order of their
    /// image arrays.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..m).collect();
        let mut out = vec![Permutation { image: cur.clone() }];
        while next_permutation(&mut cur) {
            out.push(Permutation { image: cur.clone() });
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn signature(p: &Permutation) -> i32 {
    p.signature()
}

/// Dense complex array over an ordered list of slot dimensions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    dims: Vec<usize>,
    entries: Vec<Complex64>,
}

impl TensorGrid {
    pub fn new(dims: Vec<usize>, entries: Vec<Complex64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: entries.len(),
            });
        }
        Ok(TensorGrid { dims, entries })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        TensorGrid {
            dims,
            entries: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// `v_1 ⊗ ... ⊗ v_m`
    pub fn outer(vectors: &[Vec<Complex64>]) -> Self {
        let dims = vectors.iter().map(Vec::len).collect();
        let mut entries = vec![Complex64::new(1.0, 0.0)];
        for v in vectors {
            entries = entries
                .iter()
                .flat_map(|a| v.iter().map(move |b| a * b))
                .collect();
        }
        TensorGrid { dims, entries }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn get(&self, idx: &[usize]) -> Result<Complex64> {
        Ok(self.entries[crate::state::flat_index(&self.dims, idx)?])
    }

    /// The tensor with slots reordered: `out[i_0..i_{m-1}] = self[i_{π(0)}..i_{π(m-1)}]`.
    /// All slot dimensions must agree.
    pub fn permute_slots(&self, p: &Permutation) -> Result<TensorGrid> {
        self.check_uniform()?;
        if p.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of {} points applied to a rank-{} tensor",
                p.len(),
                self.rank()
            )));
        }
        let n = self.dims.first().copied().unwrap_or(1);
        let st = crate::state::strides(&self.dims);
        let mut out = Vec::with_capacity(self.entries.len());
        let mut idx = vec![0usize; self.rank()];
        for flat in 0..self.entries.len() {
            let mut rest = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            let src: usize = (0..self.rank()).map(|s| idx[p.apply(s)] * st[s]).sum();
            out.push(self.entries[src]);
        }
        Ok(TensorGrid {
            dims: self.dims.clone(),
            entries: out,
        })
    }

    fn check_uniform(&self) -> Result<()> {
        if self.dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::DimensionMismatch(format!(
                "slots must share one dimension, got {:?}",
                self.dims
            )));
        }
        Ok(())
    }
}

/// `Alt^m T = (1/m!) Σ_π ε(π) T∘π`, the projection onto the totally
/// antisymmetric part.
pub fn alt(t: &TensorGrid) -> Result<TensorGrid> {
    let m = t.rank();
    if m > MAX_FACTORS {
        return Err(Error::TooManyFactors(m));
    }
    t.check_uniform()?;
    let perms = Permutation::all(m);
    let scale = 1.0 / perms.len() as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); t.entries.len()];
    for p in &perms {
        let sign = p.signature() as f64;
        let moved = t.permute_slots(p)?;
        for (a, x) in acc.iter_mut().zip(&moved.entries) {
            *a += x * sign;
        }
    }
    for a in &mut acc {
        *a *= scale;
    }
    Ok(TensorGrid {
        dims: t.dims.clone(),
        entries: acc,
    })
}

/// `Alt^m (v_1 ⊗ ... ⊗ v_m)`
pub fn alt_vectors(vectors: &[Vec<Complex64>]) -> Result<TensorGrid> {
    if vectors.len() > MAX_FACTORS {
        return Err(Error::TooManyFactors(vectors.len()));
    }
    if vectors.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Error::DimensionMismatch(
            "alternation needs vectors of one length".into(),
        ));
    }
    alt(&TensorGrid::outer(vectors))
}

/// `v ∧ w = v⊗w − w⊗v`, with no `1/2`.
pub fn wedge_pair(v: &[Complex64], w: &[Complex64]) -> Result<TensorGrid> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch(format!(
            "wedge of vectors of length {} and {}",
            v.len(),
            w.len()
        )));
    }
    let n = v.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(v[i] * w[j] - w[i] * v[j]);
        }
    }
    Ok(TensorGrid {
        dims: vec![n, n],
        entries,
    })
}

/// `Σ |entry|²`
pub fn grid_norm_sq(t: &TensorGrid) -> f64 {
    t.entries.iter().map(|z| z.norm_sqr()).sum()
}
