//! Formal exterior algebra with conjugate generators, matrices of forms,
//! characteristic-polynomial coefficients, and the curvature vanishing
//! identities of horizontal integral elements.
//!
//! The algebra has generators `ξ_1 … ξ_N` and formally conjugate generators
//! `ξ̄_1 … ξ̄_N` (conjugation is a plain substitution — all scalars stay
//! rational). Monomials are bitmasks over the `2N` generators, so `N ≤ 6`
//! keeps every computation at desk scale.

use crate::integral::{is_integral, IntegralElement};
use crate::linalg::{Mat, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;

pub const MAX_GENERATORS: usize = 6;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ChernError {
    #[error("too many generators: {0} (max {MAX_GENERATORS})")]
    TooManyGenerators(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("entries must have even degree")]
    OddDegree,
    #[error("element is not integral")]
    NotIntegral,
}

/// Multivector over ℚ in `n_gens` generators and their conjugates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    n_gens: usize,
    /// sorted monomial bitmask → coefficient; zero coefficients are pruned
    terms: BTreeMap<u32, Scalar>,
}

/// Parity of the permutation sorting `seq` (assumed distinct entries).
fn sort_sign(seq: &[u32]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of merging sorted masks `a` and `b` (disjoint): parity of the number
/// of transpositions moving each generator of `b` past higher ones of `a`.
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut sign = 1i32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        let higher = (a >> (j + 1)).count_ones();
        if higher % 2 == 1 {
            sign = -sign;
        }
        bb &= bb - 1;
    }
    sign
}

impl ExtElem {
    pub fn zero(n_gens: usize) -> Self {
        assert!(n_gens <= MAX_GENERATORS);
        ExtElem {
            n_gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_gens: usize) -> Self {
        let mut e = ExtElem::zero(n_gens);
        e.terms.insert(0, Scalar::one());
        e
    }

    pub fn scalar(n_gens: usize, c: Scalar) -> Self {
        let mut e = ExtElem::zero(n_gens);
        if !c.is_zero() {
            e.terms.insert(0, c);
        }
        e
    }

    /// `ξ_{i+1}` for `i < n_gens`.
    pub fn gen(n_gens: usize, i: usize) -> Self {
        assert!(i < n_gens);
        let mut e = ExtElem::zero(n_gens);
        e.terms.insert(1 << i, Scalar::one());
        e
    }

    /// `ξ̄_{i+1}`.
    pub fn conj_gen(n_gens: usize, i: usize) -> Self {
        assert!(i < n_gens);
        let mut e = ExtElem::zero(n_gens);
        e.terms.insert(1 << (n_gens + i), Scalar::one());
        e
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        assert_eq!(self.n_gens, other.n_gens);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        ExtElem {
            n_gens: self.n_gens,
            terms,
        }
    }

    pub fn scale(&self, s: &Scalar) -> ExtElem {
        if s.is_zero() {
            return ExtElem::zero(self.n_gens);
        }
        ExtElem {
            n_gens: self.n_gens,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn neg(&self) -> ExtElem {
        self.scale(&-Scalar::one())
    }

    pub fn wedge(&self, other: &ExtElem) -> ExtElem {
        assert_eq!(self.n_gens, other.n_gens);
        let mut terms: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mask = ma | mb;
                let mut coeff = ca * cb;
                if merge_sign(*ma, *mb) < 0 {
                    coeff = -coeff;
                }
                let e = terms.entry(mask).or_insert_with(Scalar::zero);
                *e += coeff;
                if e.is_zero() {
                    terms.remove(&mask);
                }
            }
        }
        ExtElem {
            n_gens: self.n_gens,
            terms,
        }
    }

    /// Substitute `ξ_i ↔ ξ̄_i` throughout.
    pub fn conj(&self) -> ExtElem {
        let n = self.n_gens as u32;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            // images of the sorted factors, in original factor order
            let mut seq = Vec::new();
            let mut mm = *m;
            while mm != 0 {
                let i = mm.trailing_zeros();
                seq.push(if i < n { i + n } else { i - n });
                mm &= mm - 1;
            }
            let sign = sort_sign(&seq);
            let mask = seq.iter().fold(0u32, |acc, i| acc | (1 << i));
            let coeff = if sign < 0 { -c.clone() } else { c.clone() };
            terms.insert(mask, coeff);
        }
        ExtElem {
            n_gens: self.n_gens,
            terms,
        }
    }

    /// `Some(d)` if every term has degree `d` (zero counts as any degree).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.count_ones();
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }
}

/// Matrix with exterior-form entries, all homogeneous of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMat {
    rows: usize,
    cols: usize,
    degree: u32,
    entries: Vec<ExtElem>,
}

impl FormMat {
    pub fn zeros(n_gens: usize, rows: usize, cols: usize, degree: u32) -> Self {
        FormMat {
            rows,
            cols,
            degree,
            entries: vec![ExtElem::zero(n_gens); rows * cols],
        }
    }

    pub fn from_fn(
        n_gens: usize,
        rows: usize,
        cols: usize,
        degree: u32,
        mut f: impl FnMut(usize, usize) -> ExtElem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert!(
                    e.homogeneous_degree() == Some(degree) || e.is_zero(),
                    "entry ({r},{c}) is not homogeneous of degree {degree}"
                );
                entries.push(e);
            }
        }
        let _ = n_gens;
        FormMat {
            rows,
            cols,
            degree,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn entry(&self, r: usize, c: usize) -> &ExtElem {
        &self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Matrix product with wedge multiplication of entries.
    pub fn mul(&self, other: &FormMat) -> FormMat {
        assert_eq!(self.cols, other.rows);
        let n_gens = self
            .entries
            .first()
            .map_or(MAX_GENERATORS, |e| e.n_gens());
        let mut out = FormMat::zeros(n_gens, self.rows, other.cols, self.degree + other.degree);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = ExtElem::zero(n_gens);
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(r, k).wedge(other.entry(k, c)));
                }
                out.entries[r * other.cols + c] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> FormMat {
        let n_gens = self
            .entries
            .first()
            .map_or(MAX_GENERATORS, |e| e.n_gens());
        FormMat::from_fn(n_gens, self.cols, self.rows, self.degree, |r, c| {
            self.entry(c, r).clone()
        })
    }

    /// Conjugate transpose (formal substitution, then transpose).
    pub fn conj_transpose(&self) -> FormMat {
        let n_gens = self
            .entries
            .first()
            .map_or(MAX_GENERATORS, |e| e.n_gens());
        FormMat::from_fn(n_gens, self.cols, self.rows, self.degree, |r, c| {
            self.entry(c, r).conj()
        })
    }

    pub fn scale(&self, s: &Scalar) -> FormMat {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.scale(s);
        }
        out
    }
}

/// Determinant of the principal submatrix on `idxs`, by cofactor expansion
/// with bitmask memoization (valid: entries have even degree and commute).
fn principal_minor(m: &FormMat, idxs: &[usize], n_gens: usize) -> ExtElem {
    let k = idxs.len();
    if k == 0 {
        return ExtElem::one(n_gens);
    }
    // memo[mask] = det of first popcount(mask) rows of idxs vs columns mask
    let full = (1usize << k) - 1;
    let mut memo: Vec<Option<ExtElem>> = vec![None; full + 1];
    memo[0] = Some(ExtElem::one(n_gens));
    for mask in 1..=full {
        let nrows = (mask as u32).count_ones() as usize;
        let row = idxs[nrows - 1];
        let mut acc = ExtElem::zero(n_gens);
        // expanding along the last row: cofactor sign starts at (−1)^{nrows-1}
        let mut sign = if (nrows - 1) % 2 == 0 { 1i32 } else { -1 };
        for pos in 0..k {
            if mask & (1 << pos) == 0 {
                continue;
            }
            let sub = memo[mask & !(1 << pos)].clone().unwrap();
            let term = m.entry(row, idxs[pos]).wedge(&sub);
            acc = if sign > 0 {
                acc.add(&term)
            } else {
                acc.add(&term.neg())
            };
            sign = -sign;
        }
        memo[mask] = Some(acc);
    }
    memo[full].clone().unwrap()
}

/// Coefficients `c_1 … c_d` of the monic characteristic polynomial
/// `det(tI − A) = t^d + c_1 t^{d-1} + ⋯ + c_d`, so `c_k = (−1)^k ·`
/// (sum of principal `k × k` minors).
pub fn char_coeffs(m: &FormMat) -> Result<Vec<ExtElem>, ChernError> {
    if m.rows() != m.cols() {
        return Err(ChernError::NotSquare);
    }
    if m.degree() % 2 != 0 {
        return Err(ChernError::OddDegree);
    }
    let d = m.rows();
    let n_gens = m.entries.first().map_or(MAX_GENERATORS, |e| e.n_gens());
    let mut out = vec![ExtElem::zero(n_gens); d];
    for subset in 1u32..(1 << d) {
        let idxs: Vec<usize> = (0..d).filter(|i| subset & (1 << i) != 0).collect();
        let k = idxs.len();
        let minor = principal_minor(m, &idxs, n_gens);
        out[k - 1] = if k % 2 == 1 {
            out[k - 1].add(&minor.neg())
        } else {
            out[k - 1].add(&minor)
        };
    }
    Ok(out)
}

/// Same coefficients for a rational matrix.
pub fn char_coeffs_scalar(m: &Mat) -> Result<Vec<Scalar>, ChernError> {
    if m.rows() != m.cols() {
        return Err(ChernError::NotSquare);
    }
    let d = m.rows();
    let mut out = vec![Scalar::zero(); d];
    for subset in 1u32..(1 << d) {
        let idxs: Vec<usize> = (0..d).filter(|i| subset & (1 << i) != 0).collect();
        let k = idxs.len();
        let sub = Mat::from_fn(k, k, |r, c| m[(idxs[r], idxs[c])].clone());
        let det = sub.det().expect("square");
        if k % 2 == 1 {
            out[k - 1] -= det;
        } else {
            out[k - 1] += det;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub ab_zero: bool,
    pub products_vanish: bool,
    /// first `(i, j)` with `i + j > d` and `c_i(A) c_j(B) ≠ 0`, if any
    pub counterexample: Option<(usize, usize)>,
}

/// For square `A, B` with `AB = 0`: every `c_i(A) c_j(B)` with `i + j > d`
/// vanishes. The check also runs (for exploration) when `AB ≠ 0`.
pub fn lemma_ab(a: &Mat, b: &Mat) -> Result<LemmaReport, ChernError> {
    if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
        return Err(ChernError::NotSquare);
    }
    let d = a.rows();
    let ca = char_coeffs_scalar(a)?;
    let cb = char_coeffs_scalar(b)?;
    let mut counterexample = None;
    'outer: for i in 1..=d {
        for j in 1..=d {
            if i + j > d && !(&ca[i - 1] * &cb[j - 1]).is_zero() {
                counterexample = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(LemmaReport {
        ab_zero: a.mul(b).is_zero(),
        products_vanish: counterexample.is_none(),
        counterexample,
    })
}

/// The 1-form matrices `A_p` of an integral element: entries
/// `Σ_s (block of v_s: level p → level p-1)_{ij} ξ_s`. Adjacent products
/// `A_{p-1} ∧ A_p` vanish exactly when the element is abelian; this is
/// asserted before returning. Returned in order `A_n, A_{n-1}, …, A_1`.
pub fn integrability_matrices(e: &IntegralElement) -> Result<Vec<FormMat>, ChernError> {
    let lie = e.lie();
    let n = lie.hodge().weight();
    let n_gens = e.dim();
    if n_gens > MAX_GENERATORS {
        return Err(ChernError::TooManyGenerators(n_gens));
    }
    if is_integral(lie, e.basis()) != Ok(true) {
        return Err(ChernError::NotIntegral);
    }
    let blocks: Vec<Vec<Mat>> = e
        .basis()
        .iter()
        .map(|v| {
            let m = lie.g1_to_matrix(v);
            (1..=n).map(|p| lie.block_of(&m, p - 1, p)).collect()
        })
        .collect();
    let mut out = Vec::new();
    for p in (1..=n).rev() {
        let rows = lie.hodge().level_dim(p - 1);
        let cols = lie.hodge().level_dim(p);
        let a = FormMat::from_fn(n_gens, rows, cols, 1, |r, c| {
            let mut acc = ExtElem::zero(n_gens);
            for (s, bl) in blocks.iter().enumerate() {
                let coeff = bl[p - 1][(r, c)].clone();
                if !coeff.is_zero() {
                    acc = acc.add(&ExtElem::gen(n_gens, s).scale(&coeff));
                }
            }
            acc
        });
        out.push(a);
    }
    // adjacent products vanish iff the element commutes; assert it
    for w in out.windows(2) {
        assert!(
            w[1].mul(&w[0]).is_zero(),
            "adjacent form products must vanish for integral elements"
        );
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ChernReport {
    /// `Θ_{F^p} Θ*_{F^{n-p}} = 0` for every `p` — the flagship identity.
    pub theta_products_zero: bool,
    /// `c_i(F^p) c_j(F^{n-p}) = 0` for `i + j > h^{p,n-p}`.
    pub coeff_products_zero: bool,
    /// `c_k(F^p) = 0` for `k > h^{p,n-p}` on the embedded curvature matrix.
    pub high_coeffs_zero: bool,
    pub failures: Vec<String>,
}

impl ChernReport {
    pub fn ok(&self) -> bool {
        self.theta_products_zero && self.coeff_products_zero && self.high_coeffs_zero
    }
}

/// Curvature vanishing for an integral element: builds
/// `Θ_{F^p} = Ā*_p A_p` and `Θ*_{F^{n-p}} = −A_{p+1} Ā*_{p+1}`, checks the
/// exact identity `Θ_{F^p} Θ*_{F^{n-p}} = 0`, the vanishing of the
/// characteristic coefficients past the block size, and the coefficient
/// products `c_i c_j` for `i + j` past the block size.
pub fn verify_chern_relations(e: &IntegralElement) -> Result<ChernReport, ChernError> {
    let lie = e.lie();
    let n = lie.hodge().weight();
    let mats = integrability_matrices(e)?; // A_n … A_1
    let a = |p: usize| -> &FormMat { &mats[n - p] };
    let mut report = ChernReport {
        theta_products_zero: true,
        coeff_products_zero: true,
        high_coeffs_zero: true,
        failures: Vec::new(),
    };
    for p in 1..=n {
        let h_p = lie.hodge().level_dim(p);
        if h_p == 0 {
            continue;
        }
        let theta = a(p).conj_transpose().mul(a(p));
        let coeffs = char_coeffs(&theta)?;
        // embed into the rank-f^p curvature matrix: only one nonzero block,
        // so c_k for k > h^{p,n-p} must vanish identically
        let f_p = lie.hodge().f_dim(p);
        if f_p > h_p && f_p <= 8 {
            let n_gens = e.dim();
            let off = f_p - h_p;
            let emb = FormMat::from_fn(n_gens, f_p, f_p, 2, |r, c| {
                if r >= off && c >= off {
                    theta.entry(r - off, c - off).clone()
                } else {
                    ExtElem::zero(n_gens)
                }
            });
            let emb_coeffs = char_coeffs(&emb)?;
            for (k, ck) in emb_coeffs.iter().enumerate() {
                if k + 1 > h_p && !ck.is_zero() {
                    report.high_coeffs_zero = false;
                    report
                        .failures
                        .push(format!("c_{}(F^{p}) nonzero past block size", k + 1));
                }
            }
        }
        if p == n {
            continue; // no A_{p+1}
        }
        let theta_dual = a(p + 1).mul(&a(p + 1).conj_transpose()).scale(&-Scalar::one());
        if !theta.mul(&theta_dual).is_zero() {
            report.theta_products_zero = false;
            report
                .failures
                .push(format!("Θ_{{F^{p}}} Θ*_{{F^{}}} ≠ 0", n - p));
        }
        let dual_coeffs = char_coeffs(&theta_dual)?;
        for i in 1..=coeffs.len() {
            for j in 1..=dual_coeffs.len() {
                if i + j > h_p && !coeffs[i - 1].wedge(&dual_coeffs[j - 1]).is_zero() {
                    report.coeff_products_zero = false;
                    report
                        .failures
                        .push(format!("c_{i}(F^{p}) c_{j}(F^{}) ≠ 0", n - p));
                }
            }
        }
    }
    Ok(report)
}

/// The circle action weight on `Λ^p 𝒢̌^{-1,1} ⊗ Λ^q 𝒢̌^{1,-1}`: `z^{2(p-q)}`.
/// Invariant forms therefore have `p = q`.
pub fn invariant_weight(p: i64, q: i64) -> i64 {
    2 * (p - q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{GradedLie, HodgeNumbers, MiddleForm};
    use crate::linalg::scalar_from;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_square_to_zero() {
        let x = ExtElem::gen(3, 0);
        assert!(x.wedge(&x).is_zero());
        let y = ExtElem::conj_gen(3, 2);
        assert!(y.wedge(&y).is_zero());
    }

    #[test]
    fn anticommutativity_and_even_commutativity() {
        let x = ExtElem::gen(3, 0);
        let y = ExtElem::gen(3, 1);
        assert_eq!(x.wedge(&y), y.wedge(&x).neg());
        let a = x.wedge(&ExtElem::conj_gen(3, 0));
        let b = y.wedge(&ExtElem::conj_gen(3, 1));
        assert_eq!(a.wedge(&b), b.wedge(&a));
    }

    #[test]
    fn associativity_spot_check() {
        let x = ExtElem::gen(4, 0).add(&ExtElem::conj_gen(4, 1).scale(&scalar_from(2)));
        let y = ExtElem::gen(4, 2).add(&ExtElem::gen(4, 1));
        let z = ExtElem::conj_gen(4, 3).add(&ExtElem::one(4));
        assert_eq!(x.wedge(&y).wedge(&z), x.wedge(&y.wedge(&z)));
    }

    #[test]
    fn conjugation_is_involution() {
        let e = ExtElem::gen(3, 0)
            .wedge(&ExtElem::conj_gen(3, 1))
            .wedge(&ExtElem::gen(3, 2))
            .add(&ExtElem::conj_gen(3, 0).scale(&scalar_from(5)));
        assert_eq!(e.conj().conj(), e);
    }

    #[test]
    fn char_coeffs_zero_matrix() {
        let m = FormMat::zeros(2, 3, 3, 2);
        let c = char_coeffs(&m).unwrap();
        assert!(c.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn char_coeffs_scalar_matches_hand_computation() {
        // A = [[2,1],[1,1]]: char poly t² − 3t + 1
        let m = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        let c = char_coeffs_scalar(&m).unwrap();
        assert_eq!(c, vec![scalar_from(-3), scalar_from(1)]);
    }

    #[test]
    fn char_coeffs_cross_checked_by_cofactor() {
        // 2×2 with (1,1)-form entries: check c_2 against the hand-expanded det
        let n = 2;
        let e11 = ExtElem::gen(n, 0).wedge(&ExtElem::conj_gen(n, 0));
        let e12 = ExtElem::gen(n, 0).wedge(&ExtElem::conj_gen(n, 1));
        let e21 = ExtElem::gen(n, 1).wedge(&ExtElem::conj_gen(n, 0));
        let e22 = ExtElem::gen(n, 1).wedge(&ExtElem::conj_gen(n, 1));
        let m = FormMat::from_fn(n, 2, 2, 2, |r, c| match (r, c) {
            (0, 0) => e11.clone(),
            (0, 1) => e12.clone(),
            (1, 0) => e21.clone(),
            _ => e22.clone(),
        });
        let c = char_coeffs(&m).unwrap();
        let det = e11.wedge(&e22).add(&e12.wedge(&e21).neg());
        assert_eq!(c[1], det);
        assert_eq!(c[0], e11.add(&e22).neg());
    }

    #[test]
    fn char_coeffs_block_multiplicativity() {
        // block-diagonal: coefficients are the convolution of block coeffs
        let n = 4;
        let d = |i: usize| ExtElem::gen(n, i).wedge(&ExtElem::conj_gen(n, i));
        let m = FormMat::from_fn(n, 4, 4, 2, |r, c| {
            if r == c {
                d(r)
            } else {
                ExtElem::zero(n)
            }
        });
        let top = FormMat::from_fn(n, 2, 2, 2, |r, c| if r == c { d(r) } else { ExtElem::zero(n) });
        let bot = FormMat::from_fn(n, 2, 2, 2, |r, c| if r == c { d(r + 2) } else { ExtElem::zero(n) });
        let cm = char_coeffs(&m).unwrap();
        let ct = char_coeffs(&top).unwrap();
        let cb = char_coeffs(&bot).unwrap();
        // convolution with c_0 = 1
        let get = |v: &Vec<ExtElem>, k: usize| -> ExtElem {
            if k == 0 {
                ExtElem::one(n)
            } else if k <= v.len() {
                v[k - 1].clone()
            } else {
                ExtElem::zero(n)
            }
        };
        for k in 1..=4 {
            let mut acc = ExtElem::zero(n);
            for i in 0..=k {
                acc = acc.add(&get(&ct, i).wedge(&get(&cb, k - i)));
            }
            assert_eq!(cm[k - 1], acc, "k={k}");
        }
    }

    #[test]
    fn lemma_rank_one_projectors() {
        let a = Mat::from_int_rows(&[&[1, 0], &[0, 0]]);
        let b = Mat::from_int_rows(&[&[0, 0], &[0, 1]]);
        let rep = lemma_ab(&a, &b).unwrap();
        assert!(rep.ab_zero);
        assert!(rep.products_vanish);
    }

    #[test]
    fn lemma_random_kernel_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let d = rng.gen_range(2..=5);
            let a = Mat::from_fn(d, d, |_, _| scalar_from(rng.gen_range(-3..=3)));
            let ker = a.kernel();
            // B with all columns random combinations of ker(A)
            let coeffs: Vec<Vec<Scalar>> = (0..ker.dim())
                .map(|_| (0..d).map(|_| scalar_from(rng.gen_range(-3..=3))).collect())
                .collect();
            let b = Mat::from_fn(d, d, |r, c| {
                let mut acc = Scalar::zero();
                for (k, kv) in ker.basis().iter().enumerate() {
                    acc += &coeffs[k][c] * &kv[r];
                }
                acc
            });
            let rep = lemma_ab(&a, &b).unwrap();
            assert!(rep.ab_zero);
            assert!(rep.products_vanish, "d={d}");
        }
    }

    #[test]
    fn lemma_hypothesis_needed() {
        // d = 3, AB ≠ 0, and c_2(A)c_2(B) ≠ 0
        let a = Mat::identity(3);
        let b = Mat::identity(3);
        let rep = lemma_ab(&a, &b).unwrap();
        assert!(!rep.ab_zero);
        assert!(!rep.products_vanish);
    }

    fn lagrangian_w2<'a>(lie: &'a GradedLie) -> IntegralElement<'a> {
        crate::integral::sharp_construction_w2(lie).unwrap()
    }

    #[test]
    fn integrability_products_vanish() {
        let lie = GradedLie::build(&HodgeNumbers::new(2, vec![2, 2, 2]).unwrap());
        let e = lagrangian_w2(&lie);
        let mats = integrability_matrices(&e).unwrap();
        assert_eq!(mats.len(), 2);
        assert!(mats[1].mul(&mats[0]).is_zero());
    }

    #[test]
    fn integrability_rejects_non_integral() {
        let lie = GradedLie::build(&HodgeNumbers::new(2, vec![2, 2, 2]).unwrap());
        let a = lie.coords_from_free_block(1, 2, &Mat::from_int_rows(&[&[0, 1], &[0, 0]]));
        let b = lie.coords_from_free_block(1, 2, &Mat::from_int_rows(&[&[1, 0], &[0, 1]]));
        // bypass the constructor check by building the element by hand is not
        // possible from outside; instead check that the constructor refuses
        assert!(crate::integral::IntegralElement::new(&lie, vec![a, b]).is_err());
    }

    #[test]
    fn chern_relations_weight2() {
        let lie = GradedLie::build(&HodgeNumbers::new(2, vec![2, 2, 2]).unwrap());
        let e = lagrangian_w2(&lie);
        let rep = verify_chern_relations(&e).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn chern_relations_weight3_cy() {
        let hn = HodgeNumbers::new(3, vec![1, 2, 2, 1]).unwrap();
        let lie = GradedLie::build(&hn);
        // dim-2 integral element found by the randomized search machinery
        let g1 = lie.g1_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let found = 'search: loop {
            let v1: Vec<Scalar> = (0..g1).map(|_| scalar_from(rng.gen_range(-2..=2))).collect();
            let e1 = match crate::integral::IntegralElement::new(&lie, vec![v1.clone()]) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let polar = crate::integral::polar_space(&e1);
            for b in polar.basis() {
                if !e1.span().contains(b) {
                    if let Ok(e2) =
                        crate::integral::IntegralElement::new(&lie, vec![v1.clone(), b.clone()])
                    {
                        break 'search e2;
                    }
                }
            }
        };
        assert_eq!(found.dim(), 2);
        let rep = verify_chern_relations(&found).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn dim_one_degenerate_pass() {
        let lie = GradedLie::build_with(
            &HodgeNumbers::new(2, vec![2, 3, 2]).unwrap(),
            MiddleForm::Split,
        )
        .unwrap();
        let v = lie.coords_from_free_block(1, 2, &Mat::from_int_rows(&[&[1, 2], &[0, 1], &[3, 0]]));
        let e = crate::integral::IntegralElement::new(&lie, vec![v]).unwrap();
        let rep = verify_chern_relations(&e).unwrap();
        assert!(rep.ok());
    }

    #[test]
    fn invariant_weights() {
        assert_eq!(invariant_weight(3, 3), 0);
        assert_eq!(invariant_weight(2, 0), 4);
        assert_eq!(invariant_weight(0, 1), -2);
    }
}
