//! Codimension estimates for the locus where a middle class stays of type
//! `(m,m)`.
//!
//! On a weight-`2m` structure, a class `ζ ∈ H^{m,m}` and an integral element
//! `E ⊂ 𝒢^{-1,1}` determine `E_ζ = {φ ∈ E : φ(ζ) has no H^{m-1,m+1} part}`.
//! The naive codimension of `E_ζ` in `E` is at most `h^{m-1,m+1}`;
//! integrability improves the bound by the correction `σ_ζ`, and for
//! Calabi–Yau-type `E` (weight 4, `h^{4,0} = 1`, `E → Hom(H^{4,0}, H^{3,1})`
//! injective) the codimension is the rank of an explicit quadric `Q_ζ`.
//!
//! Calabi–Yau-type fixtures are produced from Artinian Gorenstein rings: a
//! quartic socle generator in `a` dual variables yields a ring with Hilbert
//! function `(1, a, b, a, 1)` whose multiplication operators by the
//! variables form a commuting, `Q`-compatible family — an integral element
//! of the expected dimension with every genericity property checkable.

use crate::hodge::{GradedLie, HodgeNumbers, MiddleForm};
use crate::integral::IntegralElement;
use crate::jacobian::{monomial_basis, Poly};
use crate::linalg::{vec_add, Mat, Scalar, Subspace};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum NlError {
    #[error("weight must be even")]
    OddWeight,
    #[error("operation needs weight 4, got {0}")]
    WrongWeight(usize),
    #[error("class vector has length {0}, middle block has dimension {1}")]
    WrongClassDim(usize, usize),
    #[error("middle class is zero")]
    ZeroClass,
    #[error("E is not of Calabi-Yau type: {0}")]
    NotCalabiYau(String),
    #[error("socle generator is degenerate: {0}")]
    BadSocleGenerator(String),
}

/// `h^{2m,0} + … + h^{m+1,m-1}`: the expected codimension of the locus of
/// `ζ` staying of type `(m,m)` inside the full period domain.
pub fn nl_codim(h: &HodgeNumbers) -> Result<usize, NlError> {
    let n = h.weight();
    if n % 2 != 0 {
        return Err(NlError::OddWeight);
    }
    Ok(h.h()[..n / 2].iter().sum())
}

fn check_class<'a>(e: &IntegralElement<'a>, zeta: &[Scalar]) -> Result<usize, NlError> {
    let n = e.lie().hodge().weight();
    if n % 2 != 0 {
        return Err(NlError::OddWeight);
    }
    let m = n / 2;
    let mid = e.lie().hodge().level_dim(m);
    if zeta.len() != mid {
        return Err(NlError::WrongClassDim(zeta.len(), mid));
    }
    if zeta.iter().all(|x| x.is_zero()) {
        return Err(NlError::ZeroClass);
    }
    Ok(m)
}

/// Images `φ(ζ) ∈ H^{m-1,m+1}` of the basis of `E`, as columns.
fn drop_map(e: &IntegralElement<'_>, zeta: &[Scalar], m: usize) -> Mat {
    let lie = e.lie();
    let rows = lie.hodge().level_dim(m - 1);
    let mut mat = Mat::zeros(rows, e.dim());
    for (j, coords) in e.basis().iter().enumerate() {
        let phi = lie.g1_to_matrix(coords);
        let img = lie.block_of(&phi, m - 1, m).apply(zeta);
        for (i, x) in img.into_iter().enumerate() {
            mat[(i, j)] = x;
        }
    }
    mat
}

/// `E_ζ = {φ ∈ E : φ(ζ) = 0 in H^{m-1,m+1}}`, as a subspace of `𝒢^{-1,1}`.
pub fn e_zeta(e: &IntegralElement<'_>, zeta: &[Scalar]) -> Result<Subspace, NlError> {
    let m = check_class(e, zeta)?;
    let kernel = drop_map(e, zeta, m).kernel();
    let vectors = kernel
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![Scalar::zero(); e.lie().g1_dim()];
            for (j, cj) in c.iter().enumerate() {
                v = vec_add(&v, &crate::linalg::vec_scale(&e.basis()[j], cj));
            }
            v
        })
        .collect();
    Ok(Subspace::from_vectors(e.lie().g1_dim(), vectors))
}

/// `codim_E E_ζ`: the rank of `φ ↦ φ(ζ)` on `E`.
pub fn e_zeta_codim(e: &IntegralElement<'_>, zeta: &[Scalar]) -> Result<usize, NlError> {
    let m = check_class(e, zeta)?;
    Ok(drop_map(e, zeta, m).rank())
}

fn require_weight_4(e: &IntegralElement<'_>) -> Result<(), NlError> {
    let n = e.lie().hodge().weight();
    if n != 4 {
        return Err(NlError::WrongWeight(n));
    }
    Ok(())
}

/// The matrices `θ ↦ θ|_{H^{4,0}}` for a basis of `E`, i.e. the columns of
/// the evaluation `E → Hom(H^{4,0}, H^{3,1})`.
fn top_blocks(e: &IntegralElement<'_>) -> Vec<Mat> {
    let lie = e.lie();
    e.basis()
        .iter()
        .map(|c| lie.block_of(&lie.g1_to_matrix(c), 3, 4))
        .collect()
}

/// The quadric `⟨Q_ζ, θ·θ'⟩ = Q(θθ'ω, ζ)` on a Calabi–Yau-type `E`
/// (`h^{4,0} = 1`, `ω` its generator). The result is exactly symmetric
/// because `E` is integral; this is asserted.
pub fn quadric_q_zeta(e: &IntegralElement<'_>, zeta: &[Scalar]) -> Result<Mat, NlError> {
    require_weight_4(e)?;
    check_class(e, zeta)?;
    let lie = e.lie();
    if lie.hodge().level_dim(4) != 1 {
        return Err(NlError::NotCalabiYau("h^{4,0} must be 1".into()));
    }
    let tops = top_blocks(e);
    let eval = Mat::from_fn(lie.hodge().level_dim(3), e.dim(), |i, j| {
        tops[j][(i, 0)].clone()
    });
    if eval.rank() != e.dim() {
        return Err(NlError::NotCalabiYau(
            "E does not act injectively on H^{4,0}".into(),
        ));
    }

    let total = lie.hodge().total_dim();
    let mut omega = vec![Scalar::zero(); total];
    omega[lie.level_offset(4)] = Scalar::one();
    let mut zeta_full = vec![Scalar::zero(); total];
    for (i, x) in zeta.iter().enumerate() {
        zeta_full[lie.level_offset(2) + i] = x.clone();
    }

    let mats: Vec<Mat> = e.basis().iter().map(|c| lie.g1_to_matrix(c)).collect();
    let q = lie.q();
    let quad = Mat::from_fn(e.dim(), e.dim(), |i, j| {
        let u = mats[i].apply(&mats[j].apply(&omega));
        let qz = q.apply(&zeta_full);
        u.iter().zip(&qz).map(|(a, b)| a * b).sum()
    });
    assert_eq!(quad, quad.transpose(), "Q_zeta must be symmetric");
    Ok(quad)
}

/// `σ_ζ = dim Im{E_ζ ⊗ H^{2m,0} → H^{2m-1,1}}` (weight 4).
pub fn sigma_zeta(e: &IntegralElement<'_>, zeta: &[Scalar]) -> Result<usize, NlError> {
    require_weight_4(e)?;
    let ez = e_zeta(e, zeta)?;
    let lie = e.lie();
    let h40 = lie.hodge().level_dim(4);
    let h31 = lie.hodge().level_dim(3);
    let mut images: Vec<Vec<Scalar>> = Vec::new();
    for c in ez.basis() {
        let top = lie.block_of(&lie.g1_to_matrix(c), 3, 4);
        for k in 0..h40 {
            images.push((0..h31).map(|i| top[(i, k)].clone()).collect());
        }
    }
    Ok(Subspace::from_vectors(h31, images).dim())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedReport {
    pub dim_e: usize,
    pub dim_e_zeta: usize,
    pub codim: usize,
    pub h13: usize,
    pub sigma: usize,
    /// `h^{1,3} - σ_ζ`.
    pub bound: usize,
    pub holds: bool,
    pub equality: bool,
    /// Rank of `Q_ζ` when `E` is of Calabi–Yau type.
    pub rank_q: Option<usize>,
}

/// Computes both sides of `codim_E E_ζ ≤ h^{1,3} - σ_ζ` and, on
/// Calabi–Yau-type elements, the rank of the quadric.
pub fn refined_bound(e: &IntegralElement<'_>, zeta: &[Scalar]) -> Result<RefinedReport, NlError> {
    require_weight_4(e)?;
    let codim = e_zeta_codim(e, zeta)?;
    let sigma = sigma_zeta(e, zeta)?;
    let h13 = e.lie().hodge().level_dim(1);
    let bound = h13 - sigma;
    let rank_q = match quadric_q_zeta(e, zeta) {
        Ok(q) => Some(q.rank()),
        Err(NlError::NotCalabiYau(_)) => None,
        Err(err) => return Err(err),
    };
    Ok(RefinedReport {
        dim_e: e.dim(),
        dim_e_zeta: e.dim() - codim,
        codim,
        h13,
        sigma,
        bound,
        holds: codim <= bound,
        equality: codim == bound,
        rank_q,
    })
}

/// A weight-4 structure on an Artinian Gorenstein ring, with the commuting
/// multiplication operators by the variables in `𝒢^{-1,1}` coordinates.
#[derive(Debug, Clone)]
pub struct CalabiYauFixture {
    pub lie: GradedLie,
    pub operators: Vec<Vec<Scalar>>,
}

impl CalabiYauFixture {
    pub fn element(&self) -> IntegralElement<'_> {
        IntegralElement::new(&self.lie, self.operators.clone())
            .expect("multiplication operators commute")
    }
}

/// Builds the weight-4 structure of the ring `A = S/Ann(f)` for a quartic
/// socle generator `f` in `a` variables: levels `4,…,0` carry `A_0,…,A_4`
/// with Hilbert function `(1, a, b, a, 1)`, the polarization is the socle
/// pairing `Q(u, v) = (-1)^p λ(uv)` (which makes multiplication operators
/// `Q`-compatible), and the middle Gram matrix is the quadratic
/// catalecticant. Levels 4, 3, 2 use monomial bases; the level-1 and level-0
/// bases are the socle-dual bases, so no explicit representatives are
/// needed.
pub fn gorenstein_fixture(f: &Poly) -> Result<CalabiYauFixture, NlError> {
    if f.homogeneous_degree() != Some(4) {
        return Err(NlError::BadSocleGenerator(
            "socle generator must be a nonzero quartic".into(),
        ));
    }
    let a = f.num_vars();
    let mon1 = monomial_basis(a, 1);
    let mon2 = monomial_basis(a, 2);
    let b = mon2.len();

    // λ(p) for a quartic p: coefficient pairing against f.
    let lambda = |p: &Poly| -> Scalar { p.terms().map(|(e, c)| f.coeff(e) * c).sum() };
    let mono = |e: &[u32]| Poly::monomial(a, e, Scalar::one());

    let cat2 = Mat::from_fn(b, b, |i, j| lambda(&mono(&mon2[i]).mul(&mono(&mon2[j]))));
    if cat2.rank() != b {
        return Err(NlError::BadSocleGenerator(
            "quadratic catalecticant is degenerate".into(),
        ));
    }

    let h = HodgeNumbers::new(4, vec![1, a, b, a, 1]).expect("palindromic by construction");
    let lie = GradedLie::build_with(&h, MiddleForm::Custom(cat2))
        .expect("catalecticant is symmetric and invertible");

    let operators = (0..a)
        .map(|t| {
            let xt = Poly::variable(a, t);
            // level 4 → 3: coefficients of x_t in the variable basis of A_1
            let c4 = Mat::from_fn(a, 1, |i, _| xt.coeff(&mon1[i]));
            // level 3 → 2: multiplication A_1 → A_2 in monomial bases
            let c3 = Mat::from_fn(b, a, |i, j| xt.mul(&mono(&mon1[j])).coeff(&mon2[i]));
            // The remaining blocks (levels 2 → 1 → 0 in the dual bases) are
            // exactly the Q-compatible partners of c4 and c3.
            vec_add(
                &lie.coords_from_free_block(1, 4, &c4),
                &lie.coords_from_free_block(1, 3, &c3),
            )
        })
        .collect();

    Ok(CalabiYauFixture { lie, operators })
}

/// Seeded quartic socle generators until the catalecticant is invertible.
pub fn random_gorenstein_fixture(num_vars: usize, seed: u64) -> CalabiYauFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mon4 = monomial_basis(num_vars, 4);
    loop {
        let f = Poly::from_terms(
            num_vars,
            mon4.iter()
                .map(|m| (m.clone(), crate::linalg::scalar_from(rng.gen_range(-3i64..=3))))
                .collect(),
        );
        if let Ok(fix) = gorenstein_fixture(&f) {
            return fix;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::is_integral;
    use crate::linalg::scalar_from;

    fn hodge(weight: usize, h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(weight, h.to_vec()).unwrap()
    }

    #[test]
    fn nl_codim_formula() {
        assert_eq!(nl_codim(&hodge(2, &[1, 5, 1])).unwrap(), 1);
        assert_eq!(nl_codim(&hodge(4, &[1, 3, 7, 3, 1])).unwrap(), 4);
        assert_eq!(nl_codim(&hodge(6, &[2, 1, 3, 4, 3, 1, 2])).unwrap(), 6);
        assert_eq!(nl_codim(&hodge(3, &[1, 2, 2, 1])), Err(NlError::OddWeight));
    }

    #[test]
    fn annihilating_element_keeps_everything() {
        // h = (1,1,1,1,1): an element supported on the top block alone kills
        // nothing at the middle level, so E_ζ = E.
        let lie = GradedLie::build(&hodge(4, &[1, 1, 1, 1, 1]));
        let c4 = Mat::from_fn(1, 1, |_, _| Scalar::one());
        let coords = lie.coords_from_free_block(1, 4, &c4);
        let e = IntegralElement::new(&lie, vec![coords]).unwrap();
        let zeta = vec![Scalar::one()];
        let ez = e_zeta(&e, &zeta).unwrap();
        assert_eq!(ez.dim(), 1);
        assert_eq!(e_zeta_codim(&e, &zeta).unwrap(), 0);
        // E_ζ acts nontrivially on H^{4,0}, so σ_ζ = 1 and the bound is
        // saturated: 0 = h^{1,3} − 1.
        assert_eq!(sigma_zeta(&e, &zeta).unwrap(), 1);
        let rep = refined_bound(&e, &zeta).unwrap();
        assert!(rep.holds);
        assert!(rep.equality);
        assert_eq!(rep.rank_q, Some(0));
    }

    #[test]
    fn class_validation() {
        let lie = GradedLie::build(&hodge(4, &[1, 1, 1, 1, 1]));
        let coords = lie.coords_from_free_block(1, 4, &Mat::identity(1));
        let e = IntegralElement::new(&lie, vec![coords]).unwrap();
        assert_eq!(
            e_zeta(&e, &[Scalar::zero()]),
            Err(NlError::ZeroClass)
        );
        assert_eq!(
            e_zeta(&e, &[Scalar::one(), Scalar::one()]),
            Err(NlError::WrongClassDim(2, 1))
        );
    }

    #[test]
    fn gorenstein_operators_commute_and_match_the_ring() {
        let f = Poly::from_terms(
            2,
            vec![
                (vec![4, 0], scalar_from(1)),
                (vec![0, 4], scalar_from(1)),
                (vec![2, 2], scalar_from(1)),
                (vec![3, 1], scalar_from(2)),
            ],
        );
        let fix = gorenstein_fixture(&f).unwrap();
        assert_eq!(fix.lie.hodge().h(), &[1, 2, 3, 2, 1]);
        assert!(is_integral(&fix.lie, &fix.operators).unwrap());

        // The Q-compatible completion of the free blocks reproduces ring
        // multiplication on the dual half: level 2 → 1 must be
        // t[i][j] = -λ(y_i · x_t · q_j).
        let mon1 = monomial_basis(2, 1);
        let mon2 = monomial_basis(2, 2);
        let lambda = |p: &Poly| -> Scalar { p.terms().map(|(e, c)| f.coeff(e) * c).sum() };
        for (t, coords) in fix.operators.iter().enumerate() {
            let xt = Poly::variable(2, t);
            let m = fix.lie.g1_to_matrix(coords);
            let low = fix.lie.block_of(&m, 1, 2);
            for i in 0..2 {
                for j in 0..3 {
                    let yi = Poly::monomial(2, &mon1[i], Scalar::one());
                    let qj = Poly::monomial(2, &mon2[j], Scalar::one());
                    assert_eq!(low[(i, j)], -lambda(&yi.mul(&xt).mul(&qj)));
                }
            }
        }
    }

    #[test]
    fn generic_class_cuts_e_to_zero() {
        let fix = random_gorenstein_fixture(2, 1);
        let e = fix.element();
        assert_eq!(e.dim(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let zeta: Vec<Scalar> = (0..fix.lie.hodge().level_dim(2))
            .map(|_| scalar_from(rng.gen_range(-4i64..=4)))
            .collect();
        let codim = e_zeta_codim(&e, &zeta).unwrap();
        assert_eq!(codim, 2, "a generic class should impose independent conditions");
        assert_eq!(e_zeta(&e, &zeta).unwrap().dim(), 0);
        assert_eq!(sigma_zeta(&e, &zeta).unwrap(), 0);
    }

    #[test]
    fn quadric_rank_equals_codim_on_cy_fixtures() {
        for num_vars in [2usize, 3] {
            for seed in 0..6u64 {
                let fix = random_gorenstein_fixture(num_vars, seed);
                let e = fix.element();
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
                let zeta: Vec<Scalar> = (0..fix.lie.hodge().level_dim(2))
                    .map(|_| scalar_from(rng.gen_range(-3i64..=3)))
                    .collect();
                if zeta.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let rep = refined_bound(&e, &zeta).unwrap();
                assert!(rep.holds, "bound failed: {rep:?}");
                assert_eq!(rep.rank_q, Some(rep.codim), "quadric rank mismatch: {rep:?}");
            }
        }
    }

    #[test]
    fn non_cy_elements_are_rejected() {
        // h^{4,0} = 2: not Calabi–Yau regardless of E.
        let lie = GradedLie::build(&hodge(4, &[2, 1, 2, 1, 2]));
        let c4 = Mat::from_fn(1, 2, |_, j| if j == 0 { Scalar::one() } else { Scalar::zero() });
        let coords = lie.coords_from_free_block(1, 4, &c4);
        let e = IntegralElement::new(&lie, vec![coords]).unwrap();
        let zeta = vec![Scalar::one(), Scalar::zero()];
        assert!(matches!(
            quadric_q_zeta(&e, &zeta),
            Err(NlError::NotCalabiYau(_))
        ));

        // h^{4,0} = 1 but E killing H^{4,0}: injectivity fails.
        let fix = random_gorenstein_fixture(2, 0);
        let b = fix.lie.hodge().level_dim(2);
        let c3 = Mat::from_fn(b, 2, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let coords = fix.lie.coords_from_free_block(1, 3, &c3);
        let e = IntegralElement::new(&fix.lie, vec![coords]).unwrap();
        let zeta: Vec<Scalar> = (0..b).map(|i| scalar_from(i as i64 + 1)).collect();
        assert!(matches!(
            quadric_q_zeta(&e, &zeta),
            Err(NlError::NotCalabiYau(_))
        ));
        // The refined bound still applies to such elements.
        let rep = refined_bound(&e, &zeta).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rank_q, None);
    }

    #[test]
    fn quadric_is_symmetric() {
        let fix = random_gorenstein_fixture(3, 4);
        let e = fix.element();
        let b = fix.lie.hodge().level_dim(2);
        let zeta: Vec<Scalar> = (0..b).map(|i| scalar_from((i % 3) as i64 - 1)).collect();
        let q = quadric_q_zeta(&e, &zeta).unwrap();
        assert_eq!(q, q.transpose());
        assert_eq!(q.rows(), 3);
    }
}
