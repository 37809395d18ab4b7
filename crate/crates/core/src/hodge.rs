//! Polarized Hodge structures and the graded Lie algebra of a period domain.
//!
//! A weight-`n` Hodge structure with Hodge numbers `h = (h^{n,0}, …, h^{0,n})`
//! determines a polarized vector space `(H, Q)` and the graded Lie algebra
//! `𝒢 = ⊕_r 𝒢^{-r,r}` of infinitesimal automorphisms compatible with `Q`.
//! We realize every graded piece by explicit rational matrices acting on a
//! fixed basis `e_{p,α}` of `H`, ordered by descending level `p`.
//!
//! `Q` pairs level `p` with level `n-p`. The convention: for even `n`,
//! `Q(e_{p,α}, e_{n-p,β}) = δ_{αβ}` away from the middle level; for odd `n`
//! the sign is `+` for `p > n/2` and `-` for `p < n/2`. For even `n` the
//! self-paired middle level carries a symmetric Gram matrix chosen at build
//! time (identity by default; an anti-diagonal "split" form is available when
//! rational isotropic subspaces of the middle block are needed).

use crate::linalg::{Mat, Scalar, Subspace};
use num::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum HodgeError {
    #[error("invalid Hodge numbers: {0}")]
    InvalidHodgeNumbers(String),
    #[error("middle form must be a symmetric invertible {0}x{0} matrix")]
    BadMiddleForm(usize),
    #[error("vector does not lie in the expected graded piece")]
    NotInPiece,
    #[error("{0}")]
    Unsupported(String),
}

/// Weight `n` and the vector `(h^{n,0}, …, h^{0,n})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeNumbers {
    weight: usize,
    h: Vec<usize>,
}

impl HodgeNumbers {
    pub fn new(weight: usize, h: Vec<usize>) -> Result<Self, HodgeError> {
        if h.len() != weight + 1 {
            return Err(HodgeError::InvalidHodgeNumbers(format!(
                "expected {} entries, got {}",
                weight + 1,
                h.len()
            )));
        }
        for i in 0..h.len() {
            if h[i] != h[weight - i] {
                return Err(HodgeError::InvalidHodgeNumbers(format!(
                    "h^{{p,q}} = h^{{q,p}} fails at position {i}"
                )));
            }
        }
        Ok(HodgeNumbers { weight, h })
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    /// `h^{p, n-p}`.
    pub fn level_dim(&self, p: usize) -> usize {
        assert!(p <= self.weight);
        self.h[self.weight - p]
    }

    pub fn total_dim(&self) -> usize {
        self.h.iter().sum()
    }

    /// `f^p = dim F^p = Σ_{p' ≥ p} h^{p', n-p'}`.
    pub fn f_dim(&self, p: usize) -> usize {
        (p..=self.weight).map(|q| self.level_dim(q)).sum()
    }
}

impl fmt::Display for HodgeNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight {} h=(", self.weight)?;
        for (i, v) in self.h.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Gram matrix of `Q` on the self-paired middle block (even weight only).
#[derive(Debug, Clone, Default)]
pub enum MiddleForm {
    /// Identity Gram matrix.
    #[default]
    Orthonormal,
    /// Anti-diagonal Gram matrix; splits off rational isotropic subspaces.
    Split,
    /// Arbitrary symmetric invertible Gram matrix.
    Custom(Mat),
}

/// Where a coordinate of a graded piece lives inside the endomorphism matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Slot {
    /// Entry `(row, col)` of the unconstrained block `level p → level p-s`.
    Free { p: usize, row: usize, col: usize },
    /// Free coordinate of the self-paired block (`2p = n + s`).
    Middle { p: usize, row: usize, col: usize },
}

/// Basis of one graded piece `𝒢^{-s,s}`, with coordinate bookkeeping.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    grade: i64,
    slots: Vec<Slot>,
    basis: Vec<Mat>,
}

impl GradedPiece {
    pub fn grade(&self) -> i64 {
        self.grade
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }
}

/// The graded Lie algebra `⊕_{|r| ≤ n} 𝒢^{-r,r}` of `(H, Q)`.
#[derive(Debug, Clone)]
pub struct GradedLie {
    hodge: HodgeNumbers,
    q: Mat,
    /// `gram[p]` is the block of `Q` pairing level `p` (rows) with `n-p`.
    gram: Vec<Mat>,
    gram_inv: Vec<Mat>,
    /// Offset of the level-`p` block in the basis of `H` (descending levels).
    offsets: Vec<usize>,
    /// Pieces indexed by `grade + n`, grade from `-n` to `n`.
    pieces: Vec<GradedPiece>,
}

impl GradedLie {
    pub fn build(h: &HodgeNumbers) -> GradedLie {
        Self::build_with(h, MiddleForm::Orthonormal).expect("orthonormal build cannot fail")
    }

    pub fn build_with(h: &HodgeNumbers, middle: MiddleForm) -> Result<GradedLie, HodgeError> {
        let n = h.weight();
        let total = h.total_dim();

        let mut offsets = vec![0usize; n + 1];
        for p in (0..n).rev() {
            offsets[p] = offsets[p + 1] + h.level_dim(p + 1);
        }

        // Gram blocks of Q per level.
        let mut gram = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let k = h.level_dim(p);
            let g = if n % 2 == 0 && 2 * p == n {
                let m = match &middle {
                    MiddleForm::Orthonormal => Mat::identity(k),
                    MiddleForm::Split => Mat::from_fn(k, k, |r, c| {
                        if r + c == k - 1 {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    }),
                    MiddleForm::Custom(m) => m.clone(),
                };
                if m.rows() != k || m.cols() != k || m != m.transpose() {
                    return Err(HodgeError::BadMiddleForm(k));
                }
                m
            } else if n % 2 == 1 && 2 * p < n {
                Mat::identity(k).scale(&-Scalar::one())
            } else {
                Mat::identity(k)
            };
            gram.push(g);
        }
        let gram_inv: Vec<Mat> = gram
            .iter()
            .enumerate()
            .map(|(p, g)| {
                if g.rows() == 0 {
                    Ok(g.clone())
                } else {
                    g.inverse()
                        .map_err(|_| HodgeError::BadMiddleForm(h.level_dim(p)))
                }
            })
            .collect::<Result<_, _>>()?;

        let q = {
            let mut q = Mat::zeros(total, total);
            for p in 0..=n {
                for a in 0..h.level_dim(p) {
                    for b in 0..h.level_dim(n - p) {
                        q[(offsets[p] + a, offsets[n - p] + b)] = gram[p][(a, b)].clone();
                    }
                }
            }
            q
        };

        let mut lie = GradedLie {
            hodge: h.clone(),
            q,
            gram,
            gram_inv,
            offsets,
            pieces: Vec::new(),
        };
        for s in -(n as i64)..=(n as i64) {
            let piece = lie.build_piece(s);
            lie.pieces.push(piece);
        }
        Ok(lie)
    }

    /// Basis of `𝒢^{-s,s}`: a free block map `level p → level p-s` for each
    /// `p` with `2p > n+s`, its `Q`-partner on levels `n-p+s → n-p`
    /// determined, plus the self-paired block at `2p = n+s` cut out by
    /// `ᵗc·G_{p-s} + G_p·c = 0`.
    fn build_piece(&self, s: i64) -> GradedPiece {
        let n = self.hodge.weight() as i64;
        let mut slots = Vec::new();
        let mut basis = Vec::new();

        let level_ok = |p: i64| p >= 0 && p <= n && self.hodge.level_dim(p as usize) > 0;

        for p in (0..=n).rev() {
            if 2 * p <= n + s || !level_ok(p) || !level_ok(p - s) {
                continue;
            }
            let rows = self.hodge.level_dim((p - s) as usize);
            let cols = self.hodge.level_dim(p as usize);
            for row in 0..rows {
                for col in 0..cols {
                    let mut c = Mat::zeros(rows, cols);
                    c[(row, col)] = Scalar::one();
                    basis.push(self.endo_from_block(p as usize, s, &c));
                    slots.push(Slot::Free {
                        p: p as usize,
                        row,
                        col,
                    });
                }
            }
        }

        if (n + s) % 2 == 0 {
            let p = (n + s) / 2;
            if level_ok(p) && level_ok(p - s) {
                let k = self.hodge.level_dim(p as usize);
                // Unknown c is k×k (levels p and p-s have equal dimension);
                // flatten row-major and take the kernel of the constraint.
                let a = &self.gram[(p - s) as usize];
                let b = &self.gram[p as usize];
                let mut sys = Mat::zeros(k * k, k * k);
                for al in 0..k {
                    for be in 0..k {
                        let eq = al * k + be;
                        // (ᵗc A)_{al,be} = Σ_g c[g,al] A[g,be]
                        for g in 0..k {
                            sys[(eq, g * k + al)] += a[(g, be)].clone();
                        }
                        // (B c)_{al,be} = Σ_g B[al,g] c[g,be]
                        for g in 0..k {
                            sys[(eq, g * k + be)] += b[(al, g)].clone();
                        }
                    }
                }
                // Standard kernel basis: one vector per free column, with a 1
                // there and 0 at every other free column, so that free entry
                // is the vector's coordinate under extraction.
                let (rr, pivots) = sys.rref();
                let mut pivot_row = vec![None; k * k];
                for (i, &pc) in pivots.iter().enumerate() {
                    pivot_row[pc] = Some(i);
                }
                for free in 0..k * k {
                    if pivot_row[free].is_some() {
                        continue;
                    }
                    let mut v = vec![Scalar::zero(); k * k];
                    v[free] = Scalar::one();
                    for (cidx, slot) in pivot_row.iter().enumerate() {
                        if let Some(prow) = slot {
                            v[cidx] = -rr[(*prow, free)].clone();
                        }
                    }
                    let c = Mat::from_fn(k, k, |r, col| v[r * k + col].clone());
                    let mut m = Mat::zeros(self.hodge.total_dim(), self.hodge.total_dim());
                    self.place_block(&mut m, p as usize, s, &c);
                    basis.push(m);
                    slots.push(Slot::Middle {
                        p: p as usize,
                        row: free / k,
                        col: free % k,
                    });
                }
            }
        }

        GradedPiece { grade: s, slots, basis }
    }

    /// Free block `c: level p → level p-s` together with its determined
    /// partner `-G_p^{-1} ᵗc G_{p-s}` on `level n-p+s → level n-p`.
    fn endo_from_block(&self, p: usize, s: i64, c: &Mat) -> Mat {
        let n = self.hodge.weight() as i64;
        let total = self.hodge.total_dim();
        let mut m = Mat::zeros(total, total);
        self.place_block(&mut m, p, s, c);
        let p2 = n - p as i64 + s;
        if p2 != p as i64 {
            let partner = self.gram_inv[p]
                .mul(&c.transpose())
                .mul(&self.gram[(p as i64 - s) as usize])
                .scale(&-Scalar::one());
            self.place_block(&mut m, p2 as usize, s, &partner);
        }
        m
    }

    fn place_block(&self, m: &mut Mat, p: usize, s: i64, c: &Mat) {
        let to = (p as i64 - s) as usize;
        for r in 0..c.rows() {
            for col in 0..c.cols() {
                m[(self.offsets[to] + r, self.offsets[p] + col)] = c[(r, col)].clone();
            }
        }
    }

    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn q(&self) -> &Mat {
        &self.q
    }

    pub fn level_offset(&self, p: usize) -> usize {
        self.offsets[p]
    }

    pub fn piece(&self, r: i64) -> Option<&GradedPiece> {
        let n = self.hodge.weight() as i64;
        if r < -n || r > n {
            None
        } else {
            Some(&self.pieces[(r + n) as usize])
        }
    }

    pub fn piece_dim(&self, r: i64) -> usize {
        self.piece(r).map_or(0, |p| p.dim())
    }

    /// `dim D = Σ_{r ≥ 1} dim 𝒢^{-r,r}`.
    pub fn domain_dimension(&self) -> usize {
        (1..=self.hodge.weight() as i64).map(|r| self.piece_dim(r)).sum()
    }

    pub fn element_from_coords(&self, r: i64, coords: &[Scalar]) -> Mat {
        let piece = self.piece(r).expect("grade out of range");
        assert_eq!(coords.len(), piece.dim());
        let total = self.hodge.total_dim();
        let mut m = Mat::zeros(total, total);
        for (c, b) in coords.iter().zip(piece.basis()) {
            if !c.is_zero() {
                m = m.add(&b.scale(c));
            }
        }
        m
    }

    /// Coordinates of `m` in `𝒢^{-r,r}`, or `None` if `m` is not in the piece.
    pub fn coords_of(&self, r: i64, m: &Mat) -> Option<Vec<Scalar>> {
        let piece = self.piece(r)?;
        let coords: Vec<Scalar> = piece
            .slots
            .iter()
            .map(|slot| {
                let (p, row, col) = match slot {
                    Slot::Free { p, row, col } | Slot::Middle { p, row, col } => (*p, *row, *col),
                };
                let to = (p as i64 - r) as usize;
                m[(self.offsets[to] + row, self.offsets[p] + col)].clone()
            })
            .collect();
        if self.element_from_coords(r, &coords) == *m {
            Some(coords)
        } else {
            None
        }
    }

    /// Coordinates in `𝒢^{-r,r}` of the element whose free block
    /// `level p → level p-r` is `c` and whose other free blocks vanish
    /// (the `Q`-partner block is filled in automatically).
    pub fn coords_from_free_block(&self, r: i64, p: usize, c: &Mat) -> Vec<Scalar> {
        let m = self.endo_from_block(p, r, c);
        self.coords_of(r, &m)
            .expect("free block must define an element of the piece")
    }

    /// `Q(Xu, v) + Q(u, Xv) = 0` as a matrix identity.
    pub fn is_q_compatible(&self, m: &Mat) -> bool {
        m.transpose().mul(&self.q).add(&self.q.mul(m)).is_zero()
    }

    /// Rectangular block `level from → level to` of an endomorphism.
    pub fn block_of(&self, m: &Mat, to: usize, from: usize) -> Mat {
        Mat::from_fn(
            self.hodge.level_dim(to),
            self.hodge.level_dim(from),
            |r, c| m[(self.offsets[to] + r, self.offsets[from] + c)].clone(),
        )
    }

    // ---- the nilpotent part ⊕_{r ≥ 1} 𝒢^{-r,r} as a coordinate space ----

    pub fn nilpotent_dim(&self) -> usize {
        self.domain_dimension()
    }

    /// Offset of the grade-`r` coordinates inside the nilpotent part.
    pub fn nilpotent_offset(&self, r: i64) -> usize {
        (1..r).map(|k| self.piece_dim(k)).sum()
    }

    /// Coordinates of a strictly lower-triangular (level-decreasing)
    /// endomorphism across all grades `r ≥ 1`; `None` if any graded
    /// component fails `Q`-compatibility of the piece.
    pub fn nilpotent_coords(&self, m: &Mat) -> Option<Vec<Scalar>> {
        let n = self.hodge.weight() as i64;
        let mut out = Vec::with_capacity(self.nilpotent_dim());
        let mut rebuilt = Mat::zeros(self.hodge.total_dim(), self.hodge.total_dim());
        for r in 1..=n {
            let comp = self.graded_component(m, r);
            let coords = self.coords_of(r, &comp)?;
            rebuilt = rebuilt.add(&comp);
            out.extend(coords);
        }
        if rebuilt == *m {
            Some(out)
        } else {
            None
        }
    }

    pub fn nilpotent_from_coords(&self, coords: &[Scalar]) -> Mat {
        let n = self.hodge.weight() as i64;
        let mut m = Mat::zeros(self.hodge.total_dim(), self.hodge.total_dim());
        for r in 1..=n {
            let off = self.nilpotent_offset(r);
            let d = self.piece_dim(r);
            m = m.add(&self.element_from_coords(r, &coords[off..off + d]));
        }
        m
    }

    /// Keep only the blocks `level p → level p-r`.
    pub fn graded_component(&self, m: &Mat, r: i64) -> Mat {
        let n = self.hodge.weight() as i64;
        let total = self.hodge.total_dim();
        let mut out = Mat::zeros(total, total);
        for p in 0..=n {
            let to = p - r;
            if to < 0 || to > n {
                continue;
            }
            for row in 0..self.hodge.level_dim(to as usize) {
                for col in 0..self.hodge.level_dim(p as usize) {
                    out[(self.offsets[to as usize] + row, self.offsets[p as usize] + col)] =
                        m[(self.offsets[to as usize] + row, self.offsets[p as usize] + col)].clone();
                }
            }
        }
        out
    }

    /// `W_{I(k)} = ⊕_{r ≤ k} 𝒢^{-r,r}` inside the nilpotent part.
    pub fn horizontal_subsystem(&self, k: usize) -> Subspace {
        let n = self.hodge.weight();
        assert!(k >= 1 && k <= n, "1 ≤ k ≤ n required");
        let dim = self.nilpotent_dim();
        let cutoff: usize = (1..=k as i64).map(|r| self.piece_dim(r)).sum();
        let vecs = (0..cutoff)
            .map(|i| {
                let mut v = vec![Scalar::zero(); dim];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace::from_vectors(dim, vecs)
    }

    // ---- 𝒢^{-1,1} helpers used by the integral-element machinery ----

    pub fn g1_dim(&self) -> usize {
        self.piece_dim(1)
    }

    pub fn g1_to_matrix(&self, coords: &[Scalar]) -> Mat {
        self.element_from_coords(1, coords)
    }

    /// Bracket of two `𝒢^{-1,1}` elements, as coordinates in `𝒢^{-2,2}`.
    pub fn g1_bracket(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let x = self.g1_to_matrix(a);
        let y = self.g1_to_matrix(b);
        let c = x.commutator(&y);
        self.coords_of(2, &c)
            .expect("bracket of horizontal elements must have grade 2")
    }
}

/// Outcome of the structural self-check.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub ok: bool,
    pub q_compatible: bool,
    pub grading_ok: bool,
    pub jacobi_ok: bool,
    pub jacobi_triples_checked: usize,
    pub failure: Option<String>,
}

/// Verify `Q`-compatibility of every basis element, that every bracket of
/// basis elements lands in the graded piece of the summed grade, and the
/// Jacobi identity on basis triples (all of them up to `jacobi_budget`,
/// then a deterministic seeded sample).
pub fn verify_structure(lie: &GradedLie, jacobi_budget: usize) -> StructureReport {
    let n = lie.hodge().weight() as i64;
    let mut report = StructureReport {
        ok: true,
        q_compatible: true,
        grading_ok: true,
        jacobi_ok: true,
        jacobi_triples_checked: 0,
        failure: None,
    };

    let mut all: Vec<(i64, usize, &Mat)> = Vec::new();
    for r in -n..=n {
        let piece = lie.piece(r).unwrap();
        for (i, b) in piece.basis().iter().enumerate() {
            all.push((r, i, b));
        }
    }

    for &(r, i, b) in &all {
        if !lie.is_q_compatible(b) {
            report.ok = false;
            report.q_compatible = false;
            report.failure = Some(format!("basis element {i} of grade {r} violates Q-invariance"));
            return report;
        }
    }

    for &(r, i, x) in &all {
        for &(s, j, y) in &all {
            let c = x.commutator(y);
            let target = r + s;
            let ok = if target.abs() > n {
                c.is_zero()
            } else {
                lie.coords_of(target, &c).is_some()
            };
            if !ok {
                report.ok = false;
                report.grading_ok = false;
                report.failure = Some(format!(
                    "bracket of ({r},{i}) and ({s},{j}) escapes grade {target}"
                ));
                return report;
            }
        }
    }

    let d = all.len();
    let total_triples = d * d * d;
    let check_triple = |a: usize, b: usize, c: usize| -> bool {
        let (x, y, z) = (all[a].2, all[b].2, all[c].2);
        let j = x
            .commutator(y)
            .commutator(z)
            .add(&y.commutator(z).commutator(x))
            .add(&z.commutator(x).commutator(y));
        j.is_zero()
    };
    if total_triples <= jacobi_budget {
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    report.jacobi_triples_checked += 1;
                    if !check_triple(a, b, c) {
                        report.ok = false;
                        report.jacobi_ok = false;
                        report.failure =
                            Some(format!("Jacobi identity fails on triple ({a},{b},{c})"));
                        return report;
                    }
                }
            }
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..jacobi_budget {
            let (a, b, c) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            report.jacobi_triples_checked += 1;
            if !check_triple(a, b, c) {
                report.ok = false;
                report.jacobi_ok = false;
                report.failure = Some(format!("Jacobi identity fails on triple ({a},{b},{c})"));
                return report;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar_from;

    fn hn(weight: usize, h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(weight, h.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_hodge_numbers() {
        assert!(HodgeNumbers::new(2, vec![1, 2]).is_err());
        assert!(HodgeNumbers::new(2, vec![1, 2, 3]).is_err());
        assert!(HodgeNumbers::new(3, vec![1, 2, 2, 1]).is_ok());
    }

    #[test]
    fn weight2_piece_dims() {
        for k in 1..=4 {
            let lie = GradedLie::build(&hn(2, &[2, k, 2]));
            assert_eq!(lie.piece_dim(1), 2 * k);
            assert_eq!(lie.piece_dim(2), 1);
            assert_eq!(lie.domain_dimension(), 2 * k + 1);
        }
    }

    #[test]
    fn weight3_rank_one_dims() {
        let lie = GradedLie::build(&hn(3, &[1, 1, 1, 1]));
        assert_eq!(lie.piece_dim(1), 2);
        assert_eq!(lie.piece_dim(2), 1);
        assert_eq!(lie.piece_dim(3), 1);
        assert_eq!(lie.domain_dimension(), 4);
    }

    #[test]
    fn weight1_symmetric_maps() {
        for g in 1..=4 {
            let lie = GradedLie::build(&hn(1, &[g, g]));
            assert_eq!(lie.piece_dim(1), g * (g + 1) / 2);
        }
    }

    #[test]
    fn domain_dimension_weight2_212() {
        let lie = GradedLie::build(&hn(2, &[2, 1, 2]));
        assert_eq!(lie.domain_dimension(), 3);
    }

    #[test]
    fn piece_dims_are_symmetric_under_duality() {
        for (w, h) in [
            (2usize, vec![2, 3, 2]),
            (3, vec![1, 2, 2, 1]),
            (4, vec![2, 2, 2, 2, 2]),
            (4, vec![1, 2, 0, 2, 1]),
        ] {
            let lie = GradedLie::build(&hn(w, &h));
            for r in 1..=w as i64 {
                assert_eq!(lie.piece_dim(r), lie.piece_dim(-r), "grade {r} for {h:?}");
            }
        }
    }

    #[test]
    fn q_has_expected_symmetry() {
        let even = GradedLie::build(&hn(2, &[2, 3, 2]));
        assert_eq!(even.q().transpose(), *even.q());
        let odd = GradedLie::build(&hn(3, &[1, 2, 2, 1]));
        assert_eq!(odd.q().transpose(), odd.q().scale(&-Scalar::one()));
        assert_eq!(even.q().rank(), 7);
        assert_eq!(odd.q().rank(), 6);
    }

    #[test]
    fn coords_round_trip() {
        let lie = GradedLie::build(&hn(2, &[2, 3, 2]));
        for r in 1..=2 {
            let d = lie.piece_dim(r);
            let coords: Vec<Scalar> = (0..d).map(|i| scalar_from(i as i64 + 1)).collect();
            let m = lie.element_from_coords(r, &coords);
            assert_eq!(lie.coords_of(r, &m), Some(coords));
        }
        // a matrix outside the piece
        let bad = Mat::identity(lie.hodge().total_dim());
        assert_eq!(lie.coords_of(1, &bad), None);
    }

    #[test]
    fn verify_structure_passes_on_builds() {
        for (w, h) in [
            (1usize, vec![2, 2]),
            (2, vec![2, 2, 2]),
            (3, vec![1, 2, 2, 1]),
            (4, vec![1, 1, 1, 1, 1]),
        ] {
            let lie = GradedLie::build(&hn(w, &h));
            let rep = verify_structure(&lie, 4000);
            assert!(rep.ok, "{h:?}: {:?}", rep.failure);
        }
    }

    #[test]
    fn verify_structure_catches_perturbation() {
        let mut lie = GradedLie::build(&hn(2, &[2, 2, 2]));
        // damage one structure constant: perturb a basis matrix entry
        let m = &mut lie.pieces[3].basis[0]; // grade +1 piece
        m[(0, 0)] += scalar_from(1);
        let rep = verify_structure(&lie, 4000);
        assert!(!rep.ok);
        assert!(rep.failure.is_some());
    }

    #[test]
    fn weight4_rank_one_piece_dims() {
        let lie = GradedLie::build(&hn(4, &[1, 1, 1, 1, 1]));
        assert_eq!(lie.piece_dim(1), 2);
        assert_eq!(lie.piece_dim(2), 1);
        assert_eq!(lie.piece_dim(3), 1);
        // self-paired skew block on a 1-dim level is zero
        assert_eq!(lie.piece_dim(4), 0);
        assert!(verify_structure(&lie, 4000).ok);
    }

    #[test]
    fn horizontal_subsystem_dims() {
        let lie = GradedLie::build(&hn(2, &[2, 3, 2]));
        assert_eq!(lie.horizontal_subsystem(2).dim(), lie.nilpotent_dim());
        assert_eq!(lie.horizontal_subsystem(1).dim(), 2 * 3);
    }

    #[test]
    fn nilpotent_coords_round_trip() {
        let lie = GradedLie::build(&hn(3, &[1, 2, 2, 1]));
        let d = lie.nilpotent_dim();
        let coords: Vec<Scalar> = (0..d).map(|i| scalar_from(i as i64 - 3)).collect();
        let m = lie.nilpotent_from_coords(&coords);
        assert_eq!(lie.nilpotent_coords(&m), Some(coords));
    }

    #[test]
    fn g1_bracket_lands_in_grade_two() {
        let lie = GradedLie::build(&hn(2, &[2, 2, 2]));
        let d = lie.g1_dim();
        let a: Vec<Scalar> = (0..d).map(|i| scalar_from((i % 3) as i64)).collect();
        let b: Vec<Scalar> = (0..d).map(|i| scalar_from((i as i64) - 1)).collect();
        let br = lie.g1_bracket(&a, &b);
        assert_eq!(br.len(), lie.piece_dim(2));
        // antisymmetry
        let br2 = lie.g1_bracket(&b, &a);
        for (x, y) in br.iter().zip(&br2) {
            assert_eq!(x, &(-y.clone()));
        }
    }

    #[test]
    fn split_middle_form_admits_isotropic_vectors() {
        let lie = GradedLie::build_with(&hn(2, &[2, 4, 2]), MiddleForm::Split).unwrap();
        assert!(verify_structure(&lie, 2000).ok);
        // first middle basis vector is isotropic for the split form
        let off = lie.level_offset(1);
        let mut v = vec![Scalar::zero(); lie.hodge().total_dim()];
        v[off] = Scalar::one();
        let qv = lie.q().apply(&v);
        let pairing: Scalar = v.iter().zip(&qv).map(|(a, b)| a * b).sum();
        assert!(pairing.is_zero());
    }

    #[test]
    fn f_dims() {
        let h = hn(3, &[1, 2, 2, 1]);
        assert_eq!(h.f_dim(3), 1);
        assert_eq!(h.f_dim(2), 3);
        assert_eq!(h.f_dim(0), 6);
        assert_eq!(h.total_dim(), 6);
    }
}
