//! Exact rational linear algebra: matrices, ranks, kernels and subspaces.
//!
//! Everything downstream (graded Lie algebras, polar spaces, Jacobian rings)
//! reduces to ranks and kernels over the rationals, so all results here are
//! exact. Echelon forms pivot on the first nonzero entry in column order,
//! which makes every derived basis deterministic.

use num::{BigInt, BigRational, One, Zero};
use std::fmt;

/// Exact rational scalar. `BigRational` keeps itself in canonical reduced
/// form (gcd 1, positive denominator).
pub type Scalar = BigRational;

pub fn scalar_from(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows_data: Vec<Vec<Scalar>>) -> Self {
        let rows = rows_data.len();
        let cols = rows_data.first().map_or(0, |r| r.len());
        for r in &rows_data {
            assert_eq!(r.len(), cols, "ragged rows");
        }
        Mat {
            rows,
            cols,
            data: rows_data.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows_data: &[&[i64]]) -> Self {
        Mat::from_fn(rows_data.len(), rows_data.first().map_or(0, |r| r.len()), |r, c| {
            scalar_from(rows_data[r][c])
        })
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[Scalar]) -> Self {
        Mat::from_fn(v.len(), 1, |r, _| v[r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &other[(r, c)])
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &other[(r, c)])
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Apply to a coordinate vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc += &self[(r, c)] * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Stack vertically.
    pub fn vstack(mats: &[&Mat]) -> Mat {
        let cols = mats.first().map_or(0, |m| m.cols);
        let rows = mats.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in mats {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
        }
        Mat { rows, cols, data }
    }

    /// Reduced row echelon form in place; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // first nonzero entry in column order
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if pr != r {
                for cc in 0..self.cols {
                    self.data.swap(r * self.cols + cc, pr * self.cols + cc);
                }
            }
            let inv = self[(r, c)].recip();
            for cc in c..self.cols {
                let v = &self[(r, cc)] * &inv;
                self[(r, cc)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for cc in c..self.cols {
                        let v = &self[(i, cc)] - &factor * &self[(r, cc)];
                        self[(i, cc)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Rank over the rationals, exact.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        // forward elimination only; rank does not need back substitution
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pr) = (rank..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if pr != rank {
                for cc in c..m.cols {
                    m.data.swap(rank * m.cols + cc, pr * m.cols + cc);
                }
            }
            let inv = m[(rank, c)].recip();
            for i in rank + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let factor = &m[(i, c)] * &inv;
                    for cc in c..m.cols {
                        let v = &m[(i, cc)] - &factor * &m[(rank, cc)];
                        m[(i, cc)] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right null space; `dim = cols - rank`.
    pub fn kernel(&self) -> Subspace {
        let (rr, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[free] = Scalar::one();
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(prow) = slot {
                    vec[c] = -rr[(*prow, free)].clone();
                }
            }
            basis.push(vec);
        }
        Subspace::from_vectors_unchecked(self.cols, basis)
    }

    /// Inverse of a square full-rank matrix via Gauss–Jordan on [A | I].
    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::DimMismatch("matrix is singular".into()));
        }
        Ok(Mat::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Determinant via fraction-preserving Gaussian elimination.
    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if pr != c {
                for cc in 0..n {
                    m.data.swap(c * n + cc, pr * n + cc);
                }
                det = -det;
            }
            det *= &m[(c, c)];
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for cc in c..n {
                        let v = &m[(i, cc)] - &f * &m[(c, cc)];
                        m[(i, cc)] = v;
                    }
                }
            }
        }
        Ok(det)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A linear subspace of Q^n, stored with its basis in reduced row echelon
/// form so that equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Rows of an rref matrix; linearly independent by construction.
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let id = Mat::identity(ambient);
        Subspace {
            ambient,
            basis: (0..ambient).map(|r| id.row(r).to_vec()).collect(),
        }
    }

    /// Span of the given vectors (need not be independent).
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        Self::from_vectors_unchecked(ambient, vectors)
    }

    pub(crate) fn from_vectors_unchecked(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length != ambient dimension");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let mut m = Mat::from_rows(vectors);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Mat {
        if self.basis.is_empty() {
            Mat::zeros(0, self.ambient)
        } else {
            Mat::from_rows(self.basis.clone())
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut work = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("rref row nonzero");
            if !work[pivot].is_zero() {
                let f = work[pivot].clone();
                for (w, r) in work.iter_mut().zip(row.iter()) {
                    *w -= &f * r;
                }
            }
        }
        work.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Ok(Subspace::from_vectors_unchecked(self.ambient, vecs))
    }

    /// Intersection via the kernel of the stacked coefficient matrix.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // Columns: coefficients on self.basis then other.basis; kernel rows
        // give pairs (a, b) with a . self = b . other.
        let a = self.basis_matrix().transpose();
        let b = other.basis_matrix().transpose();
        let m = Mat::from_fn(self.ambient, self.dim() + other.dim(), |r, c| {
            if c < self.dim() {
                a[(r, c)].clone()
            } else {
                -b[(r, c - self.dim())].clone()
            }
        });
        let ker = m.kernel();
        let vecs = ker
            .basis()
            .iter()
            .map(|coeffs| {
                let mut v = vec![Scalar::zero(); self.ambient];
                for (i, row) in self.basis.iter().enumerate() {
                    if !coeffs[i].is_zero() {
                        for (vj, rj) in v.iter_mut().zip(row.iter()) {
                            *vj += &coeffs[i] * rj;
                        }
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_vectors_unchecked(self.ambient, vecs))
    }
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |_, _| scalar_from(rng.gen_range(-5..=5)))
    }

    #[test]
    fn rank_proportional_rows() {
        let m = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Mat::identity(5).rank(), 5);
    }

    #[test]
    fn rank_of_low_rank_product() {
        // 20x30 matrix of rank 7 built from full-rank 20x7 and 7x30 factors.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        loop {
            let a = random_mat(&mut rng, 20, 7);
            let b = random_mat(&mut rng, 7, 30);
            if a.rank() == 7 && b.rank() == 7 {
                assert_eq!(a.mul(&b).rank(), 7);
                break;
            }
        }
    }

    #[test]
    fn kernel_of_row() {
        let m = Mat::from_int_rows(&[&[1, 1]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[scalar_from(1), scalar_from(-1)]));
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(Mat::identity(3).kernel().dim(), 0);
    }

    #[test]
    fn kernel_multiply_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = random_mat(&mut rng, 5, 8);
            let k = m.kernel();
            assert_eq!(k.dim() + m.rank(), m.cols());
            for v in k.basis() {
                assert!(vec_is_zero(&m.apply(v)));
            }
        }
    }

    #[test]
    fn subspace_lines_in_q2() {
        let a = Subspace::from_vectors(2, vec![vec![scalar_from(1), scalar_from(0)]]);
        let b = Subspace::from_vectors(2, vec![vec![scalar_from(1), scalar_from(1)]]);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
    }

    #[test]
    fn subspace_nested_intersection() {
        let a = Subspace::from_vectors(3, vec![vec![scalar_from(1), scalar_from(2), scalar_from(0)]]);
        let b = Subspace::from_vectors(
            3,
            vec![
                vec![scalar_from(1), scalar_from(2), scalar_from(0)],
                vec![scalar_from(0), scalar_from(0), scalar_from(1)],
            ],
        );
        assert_eq!(a.intersect(&b).unwrap(), a);
        assert!(b.contains_subspace(&a));
    }

    #[test]
    fn grassmann_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mk = |rng: &mut ChaCha8Rng, dim: usize| {
            let vecs = (0..dim)
                .map(|_| (0..7).map(|_| scalar_from(rng.gen_range(-3..=3))).collect())
                .collect();
            Subspace::from_vectors(7, vecs)
        };
        for _ in 0..10 {
            let a = mk(&mut rng, 4);
            let b = mk(&mut rng, 5);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            assert!(s.contains_subspace(&a));
            assert!(a.contains_subspace(&i));
        }
    }

    #[test]
    fn ambient_mismatch_is_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(a.sum(&b), Err(LinalgError::AmbientMismatch(2, 3))));
    }

    #[test]
    fn det_small() {
        let m = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det().unwrap(), scalar_from(1));
        assert!(Mat::zeros(2, 3).det().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rank_equals_rank_of_transpose(entries in proptest::collection::vec(-4i64..=4, 20)) {
            let m = Mat::from_fn(4, 5, |r, c| scalar_from(entries[r * 5 + c]));
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-4i64..=4, 18)) {
            let m = Mat::from_fn(3, 6, |r, c| scalar_from(entries[r * 6 + c]));
            prop_assert_eq!(m.rank() + m.kernel().dim(), 6);
        }

        #[test]
        fn grassmann_dimension_identity(
            av in proptest::collection::vec(-3i64..=3, 10),
            bv in proptest::collection::vec(-3i64..=3, 15),
        ) {
            let a = Subspace::from_vectors(5, av.chunks(5).map(|ch| ch.iter().map(|&x| scalar_from(x)).collect()).collect());
            let b = Subspace::from_vectors(5, bv.chunks(5).map(|ch| ch.iter().map(|&x| scalar_from(x)).collect()).collect());
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        }
    }
}
