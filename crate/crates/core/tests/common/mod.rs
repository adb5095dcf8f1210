//! Brute-force reference computations. These walk explicit multi-indices and
//! share no code with the library's stride arithmetic.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wedge_core::PureState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Every multi-index over `dims`, first slot slowest.
pub fn all_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn lookup(state: &PureState, idx: &[usize]) -> Complex64 {
    let mut flat = 0;
    for (i, d) in idx.iter().zip(state.dims()) {
        flat = flat * d + i;
    }
    state.amplitudes()[flat]
}

/// `ρ_{ab} = Σ_{rest} α_{..a..} ᾱ_{..b..}` by explicit summation.
pub fn brute_reduced(state: &PureState, keep: &[usize]) -> Vec<Vec<Complex64>> {
    let dims = state.dims();
    let kept_dims: Vec<usize> = keep.iter().map(|&j| dims[j]).collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|j| !keep.contains(j)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&j| dims[j]).collect();
    let kept_idx = all_indices(&kept_dims);
    let rest_idx = all_indices(&rest_dims);
    let assemble = |a: &[usize], r: &[usize]| {
        let mut full = vec![0; dims.len()];
        for (p, &j) in keep.iter().enumerate() {
            full[j] = a[p];
        }
        for (p, &j) in rest.iter().enumerate() {
            full[j] = r[p];
        }
        full
    };
    kept_idx
        .iter()
        .map(|a| {
            kept_idx
                .iter()
                .map(|b| {
                    rest_idx
                        .iter()
                        .map(|r| {
                            lookup(state, &assemble(a, r)) * lookup(state, &assemble(b, r)).conj()
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn brute_purity(state: &PureState, keep: &[usize]) -> f64 {
    brute_reduced(state, keep)
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum()
}

/// `Σ_{K,L} Σ_j |α_K α_L − α_{K[j←l_j]} α_{L[j←k_j]}|²` over explicit
/// multi-indices.
pub fn brute_multipartite_sum(state: &PureState) -> f64 {
    let idx = all_indices(state.dims());
    let mut sum = 0.0;
    for k in &idx {
        for l in &idx {
            for j in 0..k.len() {
                let mut ks = k.clone();
                let mut ls = l.clone();
                ks[j] = l[j];
                ls[j] = k[j];
                let t =
                    lookup(state, k) * lookup(state, l) - lookup(state, &ks) * lookup(state, &ls);
                sum += t.norm_sqr();
            }
        }
    }
    sum
}

/// `𝒩 Σ_j (2 − 2 tr ρ_j²)` from brute-force marginals.
pub fn closed_form_e_squared(state: &PureState, norm_constant: f64) -> f64 {
    (0..state.num_subsystems())
        .map(|j| 2.0 - 2.0 * brute_purity(state, &[j]))
        .sum::<f64>()
        * norm_constant
}

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    // independent of the library's Box–Muller: sum-of-uniforms is enough
    // for generic test inputs
    let mut pick = || (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0;
    Complex64::new(pick(), pick())
}

pub fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_state<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let total = dims.iter().product();
    PureState::new(dims.to_vec(), random_vector(total, rng)).unwrap()
}

pub fn random_dims<R: Rng>(m: usize, max_dim: usize, rng: &mut R) -> Vec<usize> {
    (0..m).map(|_| rng.random_range(1..=max_dim)).collect()
}

pub fn random_product<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let factors: Vec<Vec<Complex64>> = dims.iter().map(|&d| random_vector(d, rng)).collect();
    PureState::product(&factors).unwrap()
}

pub fn from_sparse(dims: Vec<usize>, entries: &[(&[usize], Complex64)]) -> PureState {
    let total = dims.iter().product();
    let mut amps = vec![c(0.0); total];
    let probe = PureState::new(dims.clone(), amps.clone()).unwrap();
    for (idx, v) in entries {
        amps[probe.flat_index(idx).unwrap()] = *v;
    }
    PureState::new(dims, amps).unwrap()
}

pub fn ghz(m: usize) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    from_sparse(vec![2; m], &[(&vec![0; m], c(h)), (&vec![1; m], c(h))])
}

pub fn w3() -> PureState {
    let w = 1.0 / 3f64.sqrt();
    from_sparse(
        vec![2, 2, 2],
        &[(&[0, 0, 1], c(w)), (&[0, 1, 0], c(w)), (&[1, 0, 0], c(w))],
    )
}

pub fn bell() -> PureState {
    ghz(2)
}

/// (|00⟩+|11⟩)/√2 ⊗ |0⟩
pub fn bell_zero() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    from_sparse(vec![2, 2, 2], &[(&[0, 0, 0], c(h)), (&[1, 1, 0], c(h))])
}

/// Bell on (0,1) ⊗ Bell on (2,3)
pub fn bell_bell() -> PureState {
    let b = bell();
    let amps: Vec<Complex64> = b
        .amplitudes()
        .iter()
        .flat_map(|x| b.amplitudes().iter().map(move |y| x * y))
        .collect();
    PureState::new(vec![2, 2, 2, 2], amps).unwrap()
}
