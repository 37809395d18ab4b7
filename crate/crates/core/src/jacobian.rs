//! Graded polynomial rings, Jacobian ideals, and Macaulay duality.
//!
//! Everything here is a slice-by-slice computation: a graded ideal is only
//! ever materialized in a single degree `k`, as the row space of the
//! `{monomial · generator}` coefficient matrix inside `V^k`. Quotient bases
//! are the non-pivot monomials of that echelon form, in lexicographic order,
//! so all derived matrices are deterministic.
//!
//! The hypersurface fixtures tie these slices to Hodge-theoretic counts:
//! `dim V^{(p+1)d-6}/J` for fourfolds, the socle pairing, the tangent space
//! of a class supported on a 2-plane, and the symmetrizer kernel for
//! surfaces.

use crate::integral::{symmetrizer, Trilinear};
use crate::linalg::{scalar_from, Mat, Scalar};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Largest ambient slice dimension accepted for direct rank computations.
pub const DEFAULT_BUDGET: usize = 5000;

/// Tighter cap used for the smoothness ladder of the degree-6 pipeline: past
/// this slice size the echelon forms of `J_k` carry thousands of pivots and
/// exact elimination stops being a desk-scale computation. The ladder is
/// reported as partial when it stops short of the socle.
pub const LADDER_BUDGET: usize = 1300;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum RingError {
    #[error("polynomial is not homogeneous of the expected degree")]
    NotHomogeneous,
    #[error("slice at degree {degree} has ambient dimension {dim}, over the budget {budget}")]
    BudgetExceeded {
        degree: usize,
        dim: usize,
        budget: usize,
    },
    #[error("Hodge piece degree {0} is negative")]
    NegativeDegree(i64),
    #[error("partials are not a regular sequence (Hilbert mismatch at degree {0})")]
    NotSmooth(usize),
    #[error("restricted generators are not a regular sequence (degree {0})")]
    RestrictedNotRegular(usize),
    #[error("codimension mismatch: ideal slice gives {direct}, restriction gives {restricted}")]
    CodimMismatch { direct: usize, restricted: usize },
    #[error("fixture has no plane decomposition")]
    NoPlane,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Sparse polynomial with rational coefficients, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(num_vars: usize, exps: &[u32], coeff: Scalar) -> Self {
        assert_eq!(exps.len(), num_vars);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps.to_vec(), coeff);
        }
        Poly { num_vars, terms }
    }

    /// The variable `x_i`.
    pub fn variable(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0u32; num_vars];
        e[i] = 1;
        Poly::monomial(num_vars, &e, Scalar::one())
    }

    pub fn from_terms(num_vars: usize, list: Vec<(Exponents, Scalar)>) -> Self {
        let mut p = Poly::zero(num_vars);
        for (e, c) in list {
            p.add_term(&e, c);
        }
        p
    }

    fn add_term(&mut self, exps: &[u32], coeff: Scalar) {
        assert_eq!(exps.len(), self.num_vars);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.to_vec()).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(exps);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Some(d)` when nonzero and every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = e.iter().map(|&x| x as usize).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        let mut out = Poly::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Poly::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(&e, c1 * c2);
            }
        }
        out
    }

    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.num_vars);
        let mut out = Poly::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(&e2, c * scalar_from(e[var] as i64));
        }
        out
    }
}

/// Image of `p` under setting the first `k` variables to zero, read as a
/// polynomial in the remaining `num_vars - k` variables.
pub fn restrict_first_vars(p: &Poly, k: usize) -> Poly {
    assert!(k < p.num_vars);
    let mut out = Poly::zero(p.num_vars - k);
    for (e, c) in &p.terms {
        if e[..k].iter().all(|&x| x == 0) {
            out.add_term(&e[k..], c.clone());
        }
    }
    out
}

/// Parses the plain-text polynomial format: one term per line,
/// `coeff e1 e2 … ek` with integer (or `p/q` rational) coefficient. Blank
/// lines and `#` comments are skipped; the variable count is taken from the
/// first term.
pub fn parse_poly(text: &str) -> Result<Poly, RingError> {
    let mut poly: Option<Poly> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let coeff_txt = fields.next().unwrap();
        let coeff = parse_coeff(coeff_txt)
            .ok_or_else(|| RingError::Parse(format!("line {}: bad coefficient", lineno + 1)))?;
        let exps: Option<Exponents> = fields.map(|f| f.parse::<u32>().ok()).collect();
        let exps =
            exps.ok_or_else(|| RingError::Parse(format!("line {}: bad exponent", lineno + 1)))?;
        if exps.is_empty() {
            return Err(RingError::Parse(format!("line {}: no exponents", lineno + 1)));
        }
        match &mut poly {
            None => poly = Some(Poly::monomial(exps.len(), &exps, coeff)),
            Some(p) => {
                if exps.len() != p.num_vars() {
                    return Err(RingError::Parse(format!(
                        "line {}: expected {} exponents",
                        lineno + 1,
                        p.num_vars()
                    )));
                }
                p.add_term(&exps, coeff);
            }
        }
    }
    poly.ok_or_else(|| RingError::Parse("no terms".into()))
}

fn parse_coeff(s: &str) -> Option<Scalar> {
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.parse().ok()?;
        let d: i64 = den.parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(crate::linalg::ratio(n, d))
    } else {
        s.parse::<i64>().ok().map(scalar_from)
    }
}

/// Writes `p` in the same format `parse_poly` reads.
pub fn render_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (e, c) in &p.terms {
        out.push_str(&c.to_string());
        for x in e {
            out.push(' ');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

/// All exponent vectors of total degree `k`, in descending lexicographic
/// order. Count is `C(k + num_vars - 1, num_vars - 1)`.
pub fn monomial_basis(num_vars: usize, k: usize) -> Vec<Exponents> {
    assert!(num_vars > 0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(num_vars);
    fill_monomials(num_vars, k as u32, &mut cur, &mut out);
    out
}

fn fill_monomials(vars_left: usize, k: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
    if vars_left == 1 {
        cur.push(k);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for e in (0..=k).rev() {
        cur.push(e);
        fill_monomials(vars_left - 1, k - e, cur, out);
        cur.pop();
    }
}

/// Echelonized degree-`k` slice of the ideal generated by `gens`, together
/// with the monomial basis of the quotient `V^k / (gens)_k`.
#[derive(Debug, Clone)]
pub struct QuotientSlice {
    num_vars: usize,
    degree: usize,
    monomials: Vec<Exponents>,
    index: BTreeMap<Exponents, usize>,
    rows: Vec<Vec<Scalar>>,
    row_of_col: Vec<Option<usize>>,
    basis_cols: Vec<usize>,
}

impl QuotientSlice {
    pub fn build(
        gens: &[Poly],
        num_vars: usize,
        degree: usize,
        budget: usize,
    ) -> Result<Self, RingError> {
        let monomials = monomial_basis(num_vars, degree);
        if monomials.len() > budget {
            return Err(RingError::BudgetExceeded {
                degree,
                dim: monomials.len(),
                budget,
            });
        }
        let index: BTreeMap<Exponents, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();

        let mut raw: Vec<Vec<Scalar>> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            assert_eq!(g.num_vars(), num_vars);
            let dg = g.homogeneous_degree().ok_or(RingError::NotHomogeneous)?;
            if dg > degree {
                continue;
            }
            for m in monomial_basis(num_vars, degree - dg) {
                let prod = g.mul(&Poly::monomial(num_vars, &m, Scalar::one()));
                let mut v = vec![Scalar::zero(); monomials.len()];
                for (e, c) in prod.terms() {
                    v[index[e]] = c.clone();
                }
                raw.push(v);
            }
        }

        let (rows, pivots) = if raw.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let mut mat = Mat::from_rows(raw);
            let pivots = mat.rref_in_place();
            let rows: Vec<Vec<Scalar>> = (0..pivots.len()).map(|r| mat.row(r).to_vec()).collect();
            (rows, pivots)
        };

        let mut row_of_col = vec![None; monomials.len()];
        for (r, &c) in pivots.iter().enumerate() {
            row_of_col[c] = Some(r);
        }
        let basis_cols: Vec<usize> = (0..monomials.len())
            .filter(|c| row_of_col[*c].is_none())
            .collect();

        Ok(QuotientSlice {
            num_vars,
            degree,
            monomials,
            index,
            rows,
            row_of_col,
            basis_cols,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.monomials.len()
    }

    /// Dimension of the ideal slice.
    pub fn ideal_dim(&self) -> usize {
        self.rows.len()
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.basis_cols.len()
    }

    /// Quotient basis: non-pivot monomials in lexicographic order.
    pub fn basis_monomial(&self, i: usize) -> &Exponents {
        &self.monomials[self.basis_cols[i]]
    }

    /// Coordinates of the class of `p` in the quotient basis. `p` must be
    /// homogeneous of the slice degree (or zero).
    pub fn reduce(&self, p: &Poly) -> Result<Vec<Scalar>, RingError> {
        assert_eq!(p.num_vars(), self.num_vars);
        let mut v = vec![Scalar::zero(); self.monomials.len()];
        for (e, c) in p.terms() {
            let i = *self.index.get(e).ok_or(RingError::NotHomogeneous)?;
            v[i] = c.clone();
        }
        for col in 0..v.len() {
            if v[col].is_zero() {
                continue;
            }
            if let Some(r) = self.row_of_col[col] {
                let f = std::mem::replace(&mut v[col], Scalar::zero());
                let row = &self.rows[r];
                for j in col + 1..v.len() {
                    if !row[j].is_zero() {
                        let delta = &row[j] * &f;
                        v[j] -= delta;
                    }
                }
            }
        }
        Ok(self.basis_cols.iter().map(|&c| v[c].clone()).collect())
    }
}

/// `dim (gens)_k`, the span of `{m · g}` in total degree `k`.
pub fn ideal_slice_dim(
    gens: &[Poly],
    num_vars: usize,
    k: usize,
    budget: usize,
) -> Result<usize, RingError> {
    Ok(QuotientSlice::build(gens, num_vars, k, budget)?.ideal_dim())
}

/// Hilbert function of a complete intersection cut out by forms of the given
/// degrees in as many variables: coefficients of `∏ (1 + t + … + t^{e-1})`.
pub fn ci_hilbert(gen_degrees: &[usize]) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for &e in gen_degrees {
        assert!(e >= 1);
        let mut next = vec![0u64; coeffs.len() + e - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for j in 0..e {
                next[i + j] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// A degree-`d` hypersurface in ℙ^{n+1}, optionally with a decomposition
/// `F = x_1 G_1 + x_2 G_2 + x_3 G_3` exhibiting the 2-plane
/// `{x_1 = x_2 = x_3 = 0}` on it.
#[derive(Debug, Clone)]
pub struct HypersurfaceFixture {
    n: usize,
    d: usize,
    f: Poly,
    plane: Option<[Poly; 3]>,
}

impl HypersurfaceFixture {
    pub fn new(n: usize, d: usize, f: Poly) -> Result<Self, RingError> {
        if f.num_vars() != n + 2 || f.homogeneous_degree() != Some(d) {
            return Err(RingError::NotHomogeneous);
        }
        Ok(HypersurfaceFixture {
            n,
            d,
            f,
            plane: None,
        })
    }

    /// Builds `F = Σ x_i G_i` from the three degree-`(d-1)` pieces.
    pub fn with_plane(n: usize, d: usize, g: [Poly; 3]) -> Result<Self, RingError> {
        let v = n + 2;
        if v < 4 {
            return Err(RingError::Unsupported(
                "plane fixtures need at least 4 variables".into(),
            ));
        }
        let mut f = Poly::zero(v);
        for (i, gi) in g.iter().enumerate() {
            if gi.num_vars() != v || gi.homogeneous_degree() != Some(d - 1) {
                return Err(RingError::NotHomogeneous);
            }
            f = f.add(&Poly::variable(v, i).mul(gi));
        }
        if f.homogeneous_degree() != Some(d) {
            return Err(RingError::NotHomogeneous);
        }
        Ok(HypersurfaceFixture {
            n,
            d,
            f,
            plane: Some(g),
        })
    }

    /// Recovers a canonical plane decomposition from a raw `F` lying in
    /// `(x_1, x_2, x_3)`: each monomial goes to the first `G_i` whose
    /// variable divides it.
    pub fn from_f_with_plane(n: usize, d: usize, f: Poly) -> Result<Self, RingError> {
        let v = n + 2;
        if f.num_vars() != v || f.homogeneous_degree() != Some(d) {
            return Err(RingError::NotHomogeneous);
        }
        let mut g = [Poly::zero(v), Poly::zero(v), Poly::zero(v)];
        for (e, c) in f.terms() {
            let i = (0..3).find(|&i| e[i] > 0).ok_or_else(|| {
                RingError::Unsupported("hypersurface does not contain the plane".into())
            })?;
            let mut e2 = e.clone();
            e2[i] -= 1;
            g[i] = g[i].add(&Poly::monomial(v, &e2, c.clone()));
        }
        HypersurfaceFixture::with_plane(n, d, g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_vars(&self) -> usize {
        self.n + 2
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn plane_gens(&self) -> Result<&[Poly; 3], RingError> {
        self.plane.as_ref().ok_or(RingError::NoPlane)
    }

    pub fn socle_degree(&self) -> usize {
        (self.n + 2) * (self.d - 2)
    }

    pub fn jacobian_gens(&self) -> Vec<Poly> {
        (0..self.num_vars()).map(|i| self.f.partial(i)).collect()
    }

    /// The `G_i` with `x_1 = x_2 = x_3 = 0`, as forms on the plane.
    pub fn restricted_gens(&self) -> Result<Vec<Poly>, RingError> {
        Ok(self
            .plane_gens()?
            .iter()
            .map(|g| restrict_first_vars(g, 3))
            .collect())
    }

    fn jacobian_slice(&self, k: usize, budget: usize) -> Result<QuotientSlice, RingError> {
        QuotientSlice::build(&self.jacobian_gens(), self.num_vars(), k, budget)
    }

    fn restricted_slice(&self, k: usize, budget: usize) -> Result<QuotientSlice, RingError> {
        QuotientSlice::build(&self.restricted_gens()?, 3, k, budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub socle_degree: usize,
    /// Degrees `0..=checked_through` were compared against the Hilbert
    /// function; `None` when not even degree 0 fit the budget.
    pub checked_through: Option<usize>,
    /// Whether the checked range covers the whole ladder up to the socle.
    pub complete: bool,
    pub first_mismatch: Option<usize>,
    pub ok: bool,
}

/// Compares `dim V^k/J_k` with the complete-intersection Hilbert function
/// for every degree up to the socle that fits the budget.
pub fn smoothness_report(
    fix: &HypersurfaceFixture,
    budget: usize,
) -> Result<SmoothnessReport, RingError> {
    let v = fix.num_vars();
    let socle = fix.socle_degree();
    let hil = ci_hilbert(&vec![fix.d - 1; v]);
    let gens = fix.jacobian_gens();
    let mut checked_through = None;
    let mut first_mismatch = None;
    for k in 0..=socle {
        if monomial_count(v, k) > budget {
            break;
        }
        let q = QuotientSlice::build(&gens, v, k, budget)?;
        checked_through = Some(k);
        if q.dim() as u64 != hil[k] {
            first_mismatch = Some(k);
            break;
        }
    }
    Ok(SmoothnessReport {
        socle_degree: socle,
        checked_through,
        complete: checked_through == Some(socle) && first_mismatch.is_none(),
        first_mismatch,
        ok: checked_through.is_some() && first_mismatch.is_none(),
    })
}

pub fn smoothness_check(fix: &HypersurfaceFixture, budget: usize) -> Result<bool, RingError> {
    Ok(smoothness_report(fix, budget)?.ok)
}

fn monomial_count(num_vars: usize, k: usize) -> usize {
    // C(k + num_vars - 1, num_vars - 1), kept in usize range for desk sizes.
    let mut c: u128 = 1;
    for i in 0..num_vars - 1 {
        c = c * (k + i + 1) as u128 / (i + 1) as u128;
    }
    c as usize
}

/// `dim H^{4-p,p}_prim = dim V^{(p+1)d-6}/J` for a fourfold, using the socle
/// reflection `dim at k = dim at σ-k` when the mirror degree is smaller.
pub fn hodge_piece_dim(
    fix: &HypersurfaceFixture,
    p: usize,
    budget: usize,
) -> Result<usize, RingError> {
    if fix.n != 4 {
        return Err(RingError::Unsupported(
            "Hodge piece dimensions are for fourfolds".into(),
        ));
    }
    let t = ((p + 1) * fix.d) as i64 - 6;
    if t < 0 {
        return Err(RingError::NegativeDegree(t));
    }
    let socle = fix.socle_degree() as i64;
    if t > socle {
        return Ok(0);
    }
    let k = t.min(socle - t) as usize;
    Ok(fix.jacobian_slice(k, budget)?.dim())
}

/// Socle pairing `V^k/J_k ⊗ V^{σ-k}/J_{σ-k} → V^σ/J_σ ≅ ℚ` in the quotient
/// monomial bases.
pub fn macaulay_pairing(
    fix: &HypersurfaceFixture,
    k: usize,
    budget: usize,
) -> Result<Mat, RingError> {
    let socle = fix.socle_degree();
    if k > socle {
        return Err(RingError::Unsupported("degree past the socle".into()));
    }
    let top = fix.jacobian_slice(socle, budget)?;
    if top.dim() != 1 {
        return Err(RingError::NotSmooth(socle));
    }
    let left = fix.jacobian_slice(k, budget)?;
    let right = fix.jacobian_slice(socle - k, budget)?;
    pairing_matrix(&left, &right, &top)
}

fn pairing_matrix(
    left: &QuotientSlice,
    right: &QuotientSlice,
    top: &QuotientSlice,
) -> Result<Mat, RingError> {
    let v = left.num_vars;
    let mut m = Mat::zeros(left.dim(), right.dim());
    for i in 0..left.dim() {
        let a = Poly::monomial(v, left.basis_monomial(i), Scalar::one());
        for j in 0..right.dim() {
            let b = Poly::monomial(v, right.basis_monomial(j), Scalar::one());
            let socle_coord = top.reduce(&a.mul(&b))?;
            m[(i, j)] = socle_coord[0].clone();
        }
    }
    Ok(m)
}

/// Checks that the restricted `G_i` form a regular sequence on the plane by
/// matching the 3-variable complete-intersection Hilbert function.
pub fn restricted_regularity(fix: &HypersurfaceFixture, budget: usize) -> Result<(), RingError> {
    let gens = fix.restricted_gens()?;
    let socle = 3 * fix.d - 6;
    let hil = ci_hilbert(&[fix.d - 1, fix.d - 1, fix.d - 1]);
    for k in 0..=socle {
        let q = QuotientSlice::build(&gens, 3, k, budget)?;
        if q.dim() as u64 != hil[k] {
            return Err(RingError::RestrictedNotRegular(k));
        }
    }
    Ok(())
}

/// Socle pairing of the restricted ring
/// `V_P^k/(G)_{P,k} ⊗ V_P^{3d-6-k}/… → V_P^{3d-6}/… ≅ ℚ`.
pub fn restricted_pairing(
    fix: &HypersurfaceFixture,
    k: usize,
    budget: usize,
) -> Result<Mat, RingError> {
    restricted_regularity(fix, budget)?;
    let socle = 3 * fix.d - 6;
    if k > socle {
        return Err(RingError::Unsupported("degree past the socle".into()));
    }
    let top = fix.restricted_slice(socle, budget)?;
    let left = fix.restricted_slice(k, budget)?;
    let right = fix.restricted_slice(socle - k, budget)?;
    pairing_matrix(&left, &right, &top)
}

/// Codimension of `T_P = (x_1,x_2,x_3,G_1,G_2,G_3)_d / J_d` inside
/// `V^d/J_d`, computed from the ideal slice and again through the
/// restriction map; the two counts must agree.
pub fn t_p_codim(fix: &HypersurfaceFixture, budget: usize) -> Result<usize, RingError> {
    let v = fix.num_vars();
    let g = fix.plane_gens()?;
    let mut gens: Vec<Poly> = (0..3).map(|i| Poly::variable(v, i)).collect();
    gens.extend(g.iter().cloned());
    let slice = QuotientSlice::build(&gens, v, fix.d, budget)?;
    let direct = slice.ambient_dim() - slice.ideal_dim();
    let restricted = fix.restricted_slice(fix.d, budget)?.dim();
    if direct != restricted {
        return Err(RingError::CodimMismatch { direct, restricted });
    }
    Ok(direct)
}

/// Matrix of multiplication by `s ∈ V^a`: `V^b/J_b → V^{a+b}/J_{a+b}`.
pub fn period_multiplication(
    fix: &HypersurfaceFixture,
    s: &Poly,
    b: usize,
    budget: usize,
) -> Result<Mat, RingError> {
    let a = s.homogeneous_degree().ok_or(RingError::NotHomogeneous)?;
    let src = fix.jacobian_slice(b, budget)?;
    let dst = fix.jacobian_slice(a + b, budget)?;
    let v = fix.num_vars();
    let mut m = Mat::zeros(dst.dim(), src.dim());
    for j in 0..src.dim() {
        let col = dst.reduce(&s.mul(&Poly::monomial(v, src.basis_monomial(j), Scalar::one())))?;
        for (i, x) in col.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NlPipelineReport {
    pub d: usize,
    /// `h^{4,0} = dim V^{d-6}/J`.
    pub h40: usize,
    /// `h^{1,3} = dim V^{4d-6}/J`, through the socle reflection.
    pub h13: usize,
    /// Number of degree-`d` monomials on the plane.
    pub dim_vp_d: usize,
    /// `codim T_ζ`, computed both ways and agreed.
    pub codim_t_zeta: usize,
    pub sigma_zeta: usize,
    pub rank_q_zeta: usize,
    /// Whether `codim = h^{1,3} - σ_ζ` on the nose.
    pub equality: bool,
    /// `h^{4,0} + h^{3,1}`: codimension of the locus inside the full period
    /// domain, for cross-reference.
    pub ambient_codim: usize,
    pub smoothness: SmoothnessReport,
}

/// The full plane-class pipeline for a degree-6 fourfold: tangent-space
/// codimension, the correction term, and the rank of the quadric obtained by
/// pushing the socle pairing of the restricted ring back through the
/// restriction map.
pub fn nl_pipeline(fix: &HypersurfaceFixture, budget: usize) -> Result<NlPipelineReport, RingError> {
    if fix.n != 4 {
        return Err(RingError::Unsupported("pipeline needs a fourfold".into()));
    }
    if fix.d != 6 {
        return Err(RingError::Unsupported(
            "pipeline is implemented for degree 6, where V^{d-6} is spanned by 1".into(),
        ));
    }
    let smoothness = smoothness_report(fix, budget.min(LADDER_BUDGET))?;
    if !smoothness.ok {
        return Err(RingError::NotSmooth(smoothness.first_mismatch.unwrap_or(0)));
    }
    restricted_regularity(fix, budget)?;

    let h40 = hodge_piece_dim(fix, 0, budget)?;
    let h13 = hodge_piece_dim(fix, 3, budget)?;
    let dim_vp_d = monomial_count(3, fix.d);
    let codim = t_p_codim(fix, budget)?;
    let tangent_dim = fix.jacobian_slice(fix.d, budget)?.dim();
    // Multiplication by the generator 1 of V^0 is the identity, so the image
    // of T_P in H^{3,1} is T_P itself.
    let sigma_zeta = tangent_dim - codim;

    // Q_ζ(R, S) = socle coordinate of (RS)|_P in the restricted ring: pull
    // the restricted pairing back along the restriction map on quotients.
    let q6 = fix.jacobian_slice(fix.d, budget)?;
    let qp6 = fix.restricted_slice(fix.d, budget)?;
    let mut res = Mat::zeros(qp6.dim(), q6.dim());
    for j in 0..q6.dim() {
        let m = Poly::monomial(fix.num_vars(), q6.basis_monomial(j), Scalar::one());
        let col = qp6.reduce(&restrict_first_vars(&m, 3))?;
        for (i, x) in col.into_iter().enumerate() {
            res[(i, j)] = x;
        }
    }
    let q_p = restricted_pairing(fix, fix.d, budget)?;
    let q_zeta = res.transpose().mul(&q_p.mul(&res));
    let rank_q_zeta = q_zeta.rank();

    Ok(NlPipelineReport {
        d: fix.d,
        h40,
        h13,
        dim_vp_d,
        codim_t_zeta: codim,
        sigma_zeta,
        rank_q_zeta,
        equality: codim == h13 - sigma_zeta,
        ambient_codim: h40 + h13,
        smoothness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizerReport {
    /// `h^{2,0} = dim V^{d-4}/J`.
    pub h20: usize,
    /// `dim E = dim V^d/J_d`.
    pub dim_e: usize,
    /// `h^{1,1}_prim = dim V^{2d-4}/J`.
    pub h11: usize,
    pub kernel_dim: usize,
    /// `dim V^4/J_4`, the guaranteed lower bound.
    pub lower_bound: usize,
    /// Whether every multiplication operator by a class in `V^4/J_4` landed
    /// in the kernel.
    pub contains_multiplication: bool,
}

/// For a smooth surface of degree `d ≥ 5` in ℙ³: the kernel of
/// `Hom(H^{2,0}, E) → Hom(Λ²H^{2,0}, H^{1,1})` built from ring
/// multiplication, which contains multiplication by `V^4/J_4`.
pub fn symmetrizer_kernel(
    fix: &HypersurfaceFixture,
    budget: usize,
) -> Result<SymmetrizerReport, RingError> {
    if fix.n != 2 || fix.d < 5 {
        return Err(RingError::Unsupported(
            "symmetrizer fixture needs a surface of degree at least 5".into(),
        ));
    }
    let report = smoothness_report(fix, budget)?;
    if !report.ok || !report.complete {
        return Err(RingError::NotSmooth(report.first_mismatch.unwrap_or(0)));
    }
    let v = fix.num_vars();
    let d = fix.d;
    let q_a = fix.jacobian_slice(d - 4, budget)?;
    let q_e = fix.jacobian_slice(d, budget)?;
    let q_c = fix.jacobian_slice(2 * d - 4, budget)?;
    let (na, nb, nc) = (q_a.dim(), q_e.dim(), q_c.dim());

    let mut c = vec![Scalar::zero(); na * nb * nc];
    for i in 0..na {
        let a = Poly::monomial(v, q_a.basis_monomial(i), Scalar::one());
        for j in 0..nb {
            let b = Poly::monomial(v, q_e.basis_monomial(j), Scalar::one());
            let prod = q_c.reduce(&a.mul(&b))?;
            for (k, x) in prod.into_iter().enumerate() {
                c[(i * nb + j) * nc + k] = x;
            }
        }
    }
    let phi = Trilinear {
        dim_a: na,
        dim_b: nb,
        dim_c: nc,
        c,
    };
    let kernel = symmetrizer(&phi);

    let q4 = fix.jacobian_slice(4, budget)?;
    let mut contains = true;
    for r in 0..q4.dim() {
        let rp = Poly::monomial(v, q4.basis_monomial(r), Scalar::one());
        // Ψ(a_i) = class of r·a_i, flattened as j·dim_a + i.
        let mut psi = vec![Scalar::zero(); na * nb];
        for i in 0..na {
            let a = Poly::monomial(v, q_a.basis_monomial(i), Scalar::one());
            let img = q_e.reduce(&rp.mul(&a))?;
            for (j, x) in img.into_iter().enumerate() {
                psi[j * na + i] = x;
            }
        }
        if !kernel.contains(&psi) {
            contains = false;
        }
    }

    Ok(SymmetrizerReport {
        h20: na,
        dim_e: nb,
        h11: nc,
        kernel_dim: kernel.dim(),
        lower_bound: q4.dim(),
        contains_multiplication: contains,
    })
}

/// `x_1^d + … + x_v^d`.
pub fn fermat(num_vars: usize, d: usize) -> Poly {
    let mut f = Poly::zero(num_vars);
    for i in 0..num_vars {
        let mut e = vec![0u32; num_vars];
        e[i] = d as u32;
        f = f.add(&Poly::monomial(num_vars, &e, Scalar::one()));
    }
    f
}

/// The Fermat quintic surface in ℙ³.
pub fn quintic_surface() -> HypersurfaceFixture {
    HypersurfaceFixture::new(2, 5, fermat(4, 5)).unwrap()
}

/// A sextic fourfold containing the plane `{x_1 = x_2 = x_3 = 0}`:
/// `G_i = x_{i+3}^5 + (seeded small terms)`. Genericity is not assumed; the
/// pipeline re-checks smoothness and restricted regularity at runtime.
pub fn sextic_with_plane(seed: u64) -> HypersurfaceFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mon5 = monomial_basis(6, 5);
    let mut g: Vec<Poly> = Vec::new();
    for i in 0..3 {
        let mut e = vec![0u32; 6];
        e[i + 3] = 5;
        let mut gi = Poly::monomial(6, &e, Scalar::one());
        for _ in 0..12 {
            let m = &mon5[rng.gen_range(0..mon5.len())];
            let c = loop {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    break c;
                }
            };
            gi = gi.add(&Poly::monomial(6, m, scalar_from(c)));
        }
        g.push(gi);
    }
    HypersurfaceFixture::with_plane(4, 6, [g[0].clone(), g[1].clone(), g[2].clone()]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_basis_counts_and_order() {
        assert_eq!(monomial_basis(6, 6).len(), 462);
        assert_eq!(monomial_basis(3, 6).len(), 28);
        assert_eq!(monomial_basis(1, 9), vec![vec![9]]);
        let b = monomial_basis(3, 2);
        assert_eq!(b.first().unwrap(), &vec![2, 0, 0]);
        assert_eq!(b.last().unwrap(), &vec![0, 0, 2]);
        // strictly descending lex
        for w in b.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn ideal_slice_examples() {
        let vars: Vec<Poly> = (0..4).map(|i| Poly::variable(4, i)).collect();
        assert_eq!(ideal_slice_dim(&vars, 4, 1, DEFAULT_BUDGET).unwrap(), 4);

        // (x², xy) in two variables: four products in degree 3, one syzygy.
        let g1 = Poly::monomial(2, &[2, 0], Scalar::one());
        let g2 = Poly::monomial(2, &[1, 1], Scalar::one());
        assert_eq!(
            ideal_slice_dim(&[g1, g2], 2, 3, DEFAULT_BUDGET).unwrap(),
            3
        );
    }

    #[test]
    fn sextic_jacobian_slice_is_36() {
        let fix = sextic_with_plane(0);
        assert_eq!(
            ideal_slice_dim(&fix.jacobian_gens(), 6, 6, DEFAULT_BUDGET).unwrap(),
            36
        );
    }

    #[test]
    fn poly_text_roundtrip() {
        let p = parse_poly("2 1 0 3\n-1/3 0 2 2\n# comment\n5 4 0 0\n").unwrap();
        assert_eq!(p.num_vars(), 3);
        assert_eq!(p.coeff(&[1, 0, 3]), scalar_from(2));
        assert_eq!(p.coeff(&[0, 2, 2]), crate::linalg::ratio(-1, 3));
        let q = parse_poly(&render_poly(&p)).unwrap();
        assert_eq!(p, q);
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x 1 2").is_err());
        assert!(parse_poly("1 2\n1 2 3").is_err());
    }

    #[test]
    fn ci_hilbert_cubic_fourfold() {
        // six quadrics in six variables: (1+t)^6
        assert_eq!(ci_hilbert(&[2; 6]), vec![1, 6, 15, 20, 15, 6, 1]);
        let quintics = ci_hilbert(&[5, 5, 5]);
        assert_eq!(quintics.len(), 13);
        assert_eq!(quintics[0], 1);
        assert_eq!(quintics[12], 1);
        assert_eq!(quintics[6], 19);
    }

    #[test]
    fn fermat_cubic_smooth_with_full_ladder() {
        let fix = HypersurfaceFixture::new(4, 3, fermat(6, 3)).unwrap();
        let rep = smoothness_report(&fix, DEFAULT_BUDGET).unwrap();
        assert!(rep.ok);
        assert!(rep.complete);
        assert_eq!(rep.socle_degree, 6);
    }

    #[test]
    fn power_of_one_variable_is_singular() {
        let mut e = vec![0u32; 6];
        e[0] = 3;
        let f = Poly::monomial(6, &e, Scalar::one());
        let fix = HypersurfaceFixture::new(4, 3, f).unwrap();
        assert!(!smoothness_check(&fix, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn cubic_fourfold_hodge_pieces() {
        let fix = HypersurfaceFixture::new(4, 3, fermat(6, 3)).unwrap();
        assert_eq!(hodge_piece_dim(&fix, 2, DEFAULT_BUDGET).unwrap(), 20);
        assert_eq!(hodge_piece_dim(&fix, 1, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(hodge_piece_dim(&fix, 3, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(
            hodge_piece_dim(&fix, 0, DEFAULT_BUDGET),
            Err(RingError::NegativeDegree(-3))
        );
    }

    #[test]
    fn macaulay_duality_cubic_all_degrees() {
        let fix = HypersurfaceFixture::new(4, 3, fermat(6, 3)).unwrap();
        let dims: Vec<usize> = (0..=6)
            .map(|k| fix.jacobian_slice(k, DEFAULT_BUDGET).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![1, 6, 15, 20, 15, 6, 1]);
        for k in 0..=6usize {
            let m = macaulay_pairing(&fix, k, DEFAULT_BUDGET).unwrap();
            assert_eq!(m.rows(), dims[k]);
            assert_eq!(m.cols(), dims[6 - k]);
            assert_eq!(m.rank(), dims[k], "degenerate pairing at k={k}");
            let mt = macaulay_pairing(&fix, 6 - k, DEFAULT_BUDGET).unwrap();
            assert_eq!(m.transpose(), mt);
        }
    }

    #[test]
    fn period_multiplication_by_one_is_identity() {
        let fix = HypersurfaceFixture::new(4, 3, fermat(6, 3)).unwrap();
        let one = Poly::monomial(6, &[0; 6], Scalar::one());
        let m = period_multiplication(&fix, &one, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(m, Mat::identity(20));
    }

    #[test]
    fn period_multiplication_associates() {
        let fix = HypersurfaceFixture::new(4, 3, fermat(6, 3)).unwrap();
        let s = Poly::from_terms(
            6,
            vec![
                (vec![1, 1, 0, 0, 0, 0], scalar_from(1)),
                (vec![0, 0, 1, 0, 0, 1], scalar_from(-2)),
            ],
        );
        let r = Poly::variable(6, 3);
        // (s·r) acting on V^1 vs s then r
        let sr = period_multiplication(&fix, &s.mul(&r), 1, DEFAULT_BUDGET).unwrap();
        let first = period_multiplication(&fix, &r, 1, DEFAULT_BUDGET).unwrap();
        let then = period_multiplication(&fix, &s, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(sr, then.mul(&first));
    }

    #[test]
    fn restricted_ring_of_sextic_fixture() {
        let fix = sextic_with_plane(0);
        restricted_regularity(&fix, DEFAULT_BUDGET).unwrap();
        assert_eq!(fix.restricted_slice(6, DEFAULT_BUDGET).unwrap().dim(), 19);
        assert_eq!(monomial_basis(3, 6).len(), 28);
        let m = restricted_pairing(&fix, 6, DEFAULT_BUDGET).unwrap();
        assert_eq!((m.rows(), m.cols()), (19, 19));
        assert_eq!(m.rank(), 19);
        let m0 = restricted_pairing(&fix, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!((m0.rows(), m0.cols()), (1, 1));
        assert!(!m0[(0, 0)].is_zero());
    }

    #[test]
    fn degenerate_plane_fixture_fails_regularity() {
        let mut e = vec![0u32; 6];
        e[3] = 5;
        let g = Poly::monomial(6, &e, Scalar::one());
        let fix = HypersurfaceFixture::with_plane(4, 6, [g.clone(), g.clone(), g]).unwrap();
        assert!(matches!(
            restricted_regularity(&fix, DEFAULT_BUDGET),
            Err(RingError::RestrictedNotRegular(_))
        ));
    }

    #[test]
    fn greedy_extraction_matches_on_the_plane() {
        let fix = sextic_with_plane(7);
        let re = HypersurfaceFixture::from_f_with_plane(4, 6, fix.f().clone()).unwrap();
        assert_eq!(re.f(), fix.f());
        assert_eq!(
            re.restricted_gens().unwrap(),
            fix.restricted_gens().unwrap()
        );
        let no_plane = HypersurfaceFixture::from_f_with_plane(4, 6, fermat(6, 6));
        assert!(no_plane.is_err());
    }

    #[test]
    fn sextic_pipeline_numbers() {
        let fix = sextic_with_plane(0);
        let rep = nl_pipeline(&fix, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.h40, 1);
        assert_eq!(rep.h13, 426);
        assert_eq!(rep.dim_vp_d, 28);
        assert_eq!(rep.codim_t_zeta, 19);
        assert_eq!(rep.sigma_zeta, 407);
        assert_eq!(rep.rank_q_zeta, 19);
        assert!(rep.equality);
        assert_eq!(rep.ambient_codim, 427);
        assert!(rep.smoothness.ok);
    }

    #[test]
    fn quintic_surface_symmetrizer() {
        let rep = symmetrizer_kernel(&quintic_surface(), DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.h20, 4);
        assert_eq!(rep.dim_e, 40);
        assert_eq!(rep.h11, 44);
        assert_eq!(rep.lower_bound, 31);
        assert!(rep.kernel_dim >= 31);
        assert!(rep.contains_multiplication);
    }

    #[test]
    fn budget_guard_trips() {
        let fix = sextic_with_plane(0);
        assert!(matches!(
            fix.jacobian_slice(9, 1000),
            Err(RingError::BudgetExceeded { .. })
        ));
    }
}
