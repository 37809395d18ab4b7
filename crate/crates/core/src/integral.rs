//! Integral elements of the infinitesimal period relation.
//!
//! An integral element is an abelian subspace `E ⊂ 𝒢^{-1,1}`: all pairwise
//! brackets of a basis vanish. This module verifies integrality, computes
//! polar spaces (the commutant of `E` in `𝒢^{-1,1}`), Cartan rank sequences
//! and the tangent-space codimension of the integral-element variety in the
//! Grassmannian, runs Cartan's test over random flags, and provides the
//! weight-2 normal form, the sharp-dimension constructions, a randomized
//! maximal-abelian search, and the symmetrizer of a trilinear map.

use crate::hodge::GradedLie;
use crate::linalg::{scalar_from, vec_is_zero, Mat, Scalar, Subspace};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum IntegralError {
    #[error("vector has length {0}, expected dim 𝒢^{{-1,1}} = {1}")]
    WrongAmbient(usize, usize),
    #[error("vectors do not span an abelian subspace (bracket of {0} and {1} is nonzero)")]
    NotIntegral(usize, usize),
    #[error("basis vectors are linearly dependent")]
    Dependent,
    #[error("{0}")]
    Unsupported(String),
}

/// A basis of commuting elements of `𝒢^{-1,1}`, in coordinates.
#[derive(Debug, Clone)]
pub struct IntegralElement<'a> {
    lie: &'a GradedLie,
    basis: Vec<Vec<Scalar>>,
}

/// `true` iff all pairwise brackets vanish (vectors in `𝒢^{-1,1}` coords).
pub fn is_integral(lie: &GradedLie, vectors: &[Vec<Scalar>]) -> Result<bool, IntegralError> {
    for v in vectors {
        if v.len() != lie.g1_dim() {
            return Err(IntegralError::WrongAmbient(v.len(), lie.g1_dim()));
        }
    }
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if !vec_is_zero(&lie.g1_bracket(&vectors[i], &vectors[j])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl<'a> IntegralElement<'a> {
    pub fn new(lie: &'a GradedLie, vectors: Vec<Vec<Scalar>>) -> Result<Self, IntegralError> {
        for i in 0..vectors.len() {
            if vectors[i].len() != lie.g1_dim() {
                return Err(IntegralError::WrongAmbient(vectors[i].len(), lie.g1_dim()));
            }
            for j in i + 1..vectors.len() {
                if !vec_is_zero(&lie.g1_bracket(&vectors[i], &vectors[j])) {
                    return Err(IntegralError::NotIntegral(i, j));
                }
            }
        }
        // keep the caller's basis (flags refer to it), but require independence
        let span = Subspace::from_vectors(lie.g1_dim(), vectors.clone());
        if span.dim() != vectors.len() {
            return Err(IntegralError::Dependent);
        }
        Ok(IntegralElement { lie, basis: vectors })
    }

    pub fn lie(&self) -> &'a GradedLie {
        self.lie
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn span(&self) -> Subspace {
        Subspace::from_vectors(self.lie.g1_dim(), self.basis.clone())
    }
}

/// Matrix of `v ↦ [v, e]` from `𝒢^{-1,1}` to `𝒢^{-2,2}` for fixed `e`.
fn ad_matrix(lie: &GradedLie, e: &[Scalar]) -> Mat {
    let g1 = lie.g1_dim();
    let g2 = lie.piece_dim(2);
    let mut m = Mat::zeros(g2, g1);
    for j in 0..g1 {
        let mut unit = vec![Scalar::zero(); g1];
        unit[j] = Scalar::one();
        let br = lie.g1_bracket(&unit, e);
        for i in 0..g2 {
            m[(i, j)] = br[i].clone();
        }
    }
    m
}

/// Stacked polar equations of a list of elements of `𝒢^{-1,1}`.
fn polar_system(lie: &GradedLie, elems: &[Vec<Scalar>]) -> Mat {
    if elems.is_empty() {
        return Mat::zeros(0, lie.g1_dim());
    }
    let mats: Vec<Mat> = elems.iter().map(|e| ad_matrix(lie, e)).collect();
    Mat::vstack(&mats.iter().collect::<Vec<_>>())
}

/// `H(E) = {v ∈ 𝒢^{-1,1} : [v, E] = 0}`; always contains `span(E)`.
pub fn polar_space(e: &IntegralElement) -> Subspace {
    polar_system(e.lie, &e.basis).kernel()
}

#[derive(Debug, Clone)]
pub struct PolarReport {
    /// Polar ranks `c_0, …, c_{p-1}` of the flag.
    pub c: Vec<usize>,
    pub polar: Subspace,
    pub tangent_codim: usize,
    /// Best `Σ c_i` found (over the flags examined).
    pub cartan_sum: usize,
    pub ordinary: bool,
}

fn ranks_for_flag(lie: &GradedLie, flag: &[Vec<Scalar>]) -> Vec<usize> {
    (0..flag.len())
        .map(|i| polar_system(lie, &flag[..i]).rank())
        .collect()
}

/// Polar ranks `c_i` for the flag `E_1 ⊂ ⋯ ⊂ E` given by a permutation of
/// the basis of `E`.
pub fn rank_sequence(e: &IntegralElement, flag_order: &[usize]) -> PolarReport {
    assert_eq!(flag_order.len(), e.dim(), "flag order must permute the basis");
    let flag: Vec<Vec<Scalar>> = flag_order.iter().map(|&i| e.basis[i].clone()).collect();
    let c = ranks_for_flag(e.lie, &flag);
    let tangent = tangent_codim(e);
    let sum: usize = c.iter().sum();
    PolarReport {
        ordinary: sum == tangent,
        cartan_sum: sum,
        c,
        polar: polar_space(e),
        tangent_codim: tangent,
    }
}

/// Rank of the linearized commutation equations
/// `[ψ(u), v] + [u, ψ(v)] = 0` over `ψ ∈ Hom(E, 𝒢^{-1,1})`: the local
/// codimension of the integral-element variety at a smooth point. Maps with
/// image in `E` solve the system automatically, so the chart quotient by
/// `Hom(E, E)` does not change the rank.
pub fn tangent_codim(e: &IntegralElement) -> usize {
    let p = e.dim();
    if p <= 1 {
        return 0;
    }
    let g1 = e.lie.g1_dim();
    let g2 = e.lie.piece_dim(2);
    let ad: Vec<Mat> = e.basis.iter().map(|v| ad_matrix(e.lie, v)).collect();
    // unknowns: ψ(e_u) ∈ 𝒢^{-1,1} for each u, flattened as u*g1 + j
    let pairs = p * (p - 1) / 2;
    let mut sys = Mat::zeros(pairs * g2, p * g1);
    let mut row0 = 0;
    for u in 0..p {
        for v in u + 1..p {
            // [ψ(e_u), e_v] − [ψ(e_v), e_u] = 0  (bracket antisymmetry)
            for i in 0..g2 {
                for j in 0..g1 {
                    let a = ad[v][(i, j)].clone();
                    sys[(row0 + i, u * g1 + j)] += a;
                    let b = ad[u][(i, j)].clone();
                    sys[(row0 + i, v * g1 + j)] -= b;
                }
            }
            row0 += g2;
        }
    }
    sys.rank()
}

/// Cartan's test: take the best `Σ c_i` over `trials` random flags of `E`
/// and compare with the tangent codimension. `ordinary` iff they agree.
pub fn cartan_test(e: &IntegralElement, trials: usize, seed: u64) -> PolarReport {
    let p = e.dim();
    let tangent = tangent_codim(e);
    let mut best = {
        let c = ranks_for_flag(e.lie, &e.basis);
        (c.iter().sum::<usize>(), c)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        if best.0 == tangent {
            break;
        }
        // random invertible change of basis with small rational entries
        let m = Mat::from_fn(p, p, |_, _| scalar_from(rng.gen_range(-3i64..=3)));
        if m.rank() < p {
            continue;
        }
        let flag: Vec<Vec<Scalar>> = (0..p)
            .map(|r| {
                let mut v = vec![Scalar::zero(); e.lie.g1_dim()];
                for (j, b) in e.basis.iter().enumerate() {
                    if !m[(r, j)].is_zero() {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += &m[(r, j)] * bi;
                        }
                    }
                }
                v
            })
            .collect();
        let c = ranks_for_flag(e.lie, &flag);
        let sum: usize = c.iter().sum();
        assert!(sum <= tangent, "Cartan inequality violated");
        if sum > best.0 {
            best = (sum, c);
        }
    }
    PolarReport {
        ordinary: best.0 == tangent,
        cartan_sum: best.0,
        c: best.1,
        polar: polar_space(e),
        tangent_codim: tangent,
    }
}

/// Weight-2, `h^{2,0} = 3` normal form: `v_α` maps the three basis vectors
/// of `H^{2,0}` to `e_α, λ_α e_α, μ_α e_α` in `H^{1,1}`.
pub fn normal_form_w2<'a>(
    lie: &'a GradedLie,
    lambda: &[Scalar],
    mu: &[Scalar],
) -> Result<IntegralElement<'a>, IntegralError> {
    let h = lie.hodge();
    if h.weight() != 2 || h.level_dim(2) != 3 {
        return Err(IntegralError::Unsupported(
            "normal form needs weight 2 with h^{2,0} = 3".into(),
        ));
    }
    let k = h.level_dim(1);
    if lambda.len() != k || mu.len() != k {
        return Err(IntegralError::Unsupported(format!(
            "need {k} lambda and mu parameters"
        )));
    }
    let vectors = (0..k)
        .map(|alpha| {
            let mut a = Mat::zeros(k, 3);
            a[(alpha, 0)] = Scalar::one();
            a[(alpha, 1)] = lambda[alpha].clone();
            a[(alpha, 2)] = mu[alpha].clone();
            lie.coords_from_free_block(1, 2, &a)
        })
        .collect();
    IntegralElement::new(lie, vectors)
}

/// Sharp weight-2 constructions: dimension `k = h^{1,1}` for `h^{2,0} = 2`
/// (also valid for `h^{2,0} = 1`), and `3k/2` for `h^{2,0} = 3` with `k`
/// even, via an isotropic subspace `𝒰 ⊂ H^{1,1}` of dimension `k/2`. The
/// latter needs the middle Gram form to vanish on the first `k/2` middle
/// basis vectors (build the algebra with the split form).
pub fn sharp_construction_w2(lie: &GradedLie) -> Result<IntegralElement<'_>, IntegralError> {
    let h = lie.hodge();
    if h.weight() != 2 {
        return Err(IntegralError::Unsupported("weight must be 2".into()));
    }
    let k = h.level_dim(1);
    let w = h.level_dim(2);
    match w {
        1 | 2 => {
            // all maps supported on the first basis vector of H^{2,0}
            let vectors = (0..k)
                .map(|alpha| {
                    let mut a = Mat::zeros(k, w);
                    a[(alpha, 0)] = Scalar::one();
                    lie.coords_from_free_block(1, 2, &a)
                })
                .collect();
            IntegralElement::new(lie, vectors)
        }
        3 => {
            if k % 2 != 0 {
                return Err(IntegralError::Unsupported(
                    "h^{1,1} must be even for the 3k/2 construction".into(),
                ));
            }
            let s = k / 2;
            // 𝒰 = span of the first s middle basis vectors; check isotropy
            let q = lie.q();
            let off = lie.level_offset(1);
            for i in 0..s {
                for j in 0..s {
                    if !q[(off + i, off + j)].is_zero() {
                        return Err(IntegralError::Unsupported(
                            "middle form is not split: no evident rational isotropic subspace"
                                .into(),
                        ));
                    }
                }
            }
            let mut vectors = Vec::with_capacity(k + s);
            // A-type: e_1 → 0, e_2 and e_3 → 𝒰
            for col in [1usize, 2] {
                for u in 0..s {
                    let mut a = Mat::zeros(k, 3);
                    a[(u, col)] = Scalar::one();
                    vectors.push(lie.coords_from_free_block(1, 2, &a));
                }
            }
            // B-type: e_1 → 𝒰, e_2 and e_3 → 0
            for u in 0..s {
                let mut a = Mat::zeros(k, 3);
                a[(u, 0)] = Scalar::one();
                vectors.push(lie.coords_from_free_block(1, 2, &a));
            }
            IntegralElement::new(lie, vectors)
        }
        other => Err(IntegralError::Unsupported(format!(
            "no sharp construction for h^{{2,0}} = {other}"
        ))),
    }
}

/// Greedy randomized growth: extend `E` by random small-integer elements of
/// `H(E)` until the polar space equals the span; returns the best dimension
/// over `trials` restarts. Always a lower bound on the true maximum.
pub fn max_abelian_search(lie: &GradedLie, trials: usize, seed: u64) -> usize {
    let g1 = lie.g1_dim();
    if g1 == 0 {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let mut span = Subspace::zero(g1);
        let mut elems: Vec<Vec<Scalar>> = Vec::new();
        let mut stale = 0;
        loop {
            let polar = polar_system(lie, &elems).kernel();
            if polar.dim() == span.dim() {
                break; // E is maximal
            }
            let cand: Vec<Scalar> = {
                // sparse small-integer coefficients: special (extendable)
                // configurations keep positive probability
                let coeffs: Vec<Scalar> = (0..polar.dim())
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            Scalar::zero()
                        } else {
                            scalar_from(rng.gen_range(-2i64..=2))
                        }
                    })
                    .collect();
                let mut v = vec![Scalar::zero(); g1];
                for (c, b) in coeffs.iter().zip(polar.basis()) {
                    if !c.is_zero() {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += c * bi;
                        }
                    }
                }
                v
            };
            if vec_is_zero(&cand) || span.contains(&cand) {
                stale += 1;
                if stale > 20 {
                    break;
                }
                continue;
            }
            stale = 0;
            elems.push(cand.clone());
            span = span
                .sum(&Subspace::from_vectors(g1, vec![cand]))
                .expect("same ambient");
        }
        best = best.max(span.dim());
    }
    best
}

/// A trilinear map `Φ: A ⊗ B → C` as structure constants:
/// `c[(i·dim_b + j)·dim_c + k]` is the `c_k`-coefficient of `Φ(a_i, b_j)`.
#[derive(Debug, Clone)]
pub struct Trilinear {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub c: Vec<Scalar>,
}

impl Trilinear {
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim_b + j) * self.dim_c + k]
    }
}

/// `Sym Φ = {Ψ ∈ Hom(A,B) : Φ(a, Ψ(a′)) = Φ(a′, Ψ(a))}`: the kernel of the
/// induced map `Hom(A,B) → Hom(Λ²A, C)`. Coordinates of `Ψ` are flattened
/// as `j·dim_a + i` for `Ψ(a_i) = Σ_j Ψ_{ji} b_j`.
pub fn symmetrizer(phi: &Trilinear) -> Subspace {
    let na = phi.dim_a;
    let nb = phi.dim_b;
    let nc = phi.dim_c;
    let unknowns = nb * na;
    let pairs = na * (na - 1) / 2;
    let mut sys = Mat::zeros(pairs * nc, unknowns);
    let mut row0 = 0;
    for i in 0..na {
        for i2 in i + 1..na {
            for k in 0..nc {
                for j in 0..nb {
                    // Φ(a_i, Ψ(a_{i2}))_k − Φ(a_{i2}, Ψ(a_i))_k = 0
                    sys[(row0 + k, j * na + i2)] += phi.coeff(i, j, k).clone();
                    sys[(row0 + k, j * na + i)] -= phi.coeff(i2, j, k).clone();
                }
            }
            row0 += nc;
        }
    }
    sys.kernel()
}
