//! Exact rational linear algebra.
//!
//! Every morphism in the functor categories handled by this crate is a
//! finite family of linear maps between finite-dimensional rational vector
//! spaces. [`Mat`] is the carrier for those maps: dense, row-major, with
//! entries in [`Scalar`] (arbitrary-precision rationals). Matrices with zero
//! rows or zero columns are legal and model maps into or out of the zero
//! space.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

/// Builds a [`Scalar`] from an integer.
pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Builds a [`Scalar`] from a numerator and a non-zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("cannot multiply {left_rows}x{left_cols} by {right_rows}x{right_cols}")]
    Mul {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("cannot add {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    Add {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {found}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
}

/// Dense row-major matrix over [`Scalar`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, ShapeError> {
        if entries.len() != rows * cols {
            return Err(ShapeError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Mat {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from integer rows. Panics on ragged input, so this is
    /// meant for literals in code and tests.
    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
            entries.extend(r.as_ref().iter().map(|&v| int(v)));
        }
        Mat {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// `rows x 1` column vector.
    pub fn column(entries: Vec<Scalar>) -> Self {
        Mat {
            rows: entries.len(),
            cols: 1,
            entries,
        }
    }

    /// 1x1 matrix holding `v`.
    pub fn scalar(v: Scalar) -> Self {
        Mat {
            rows: 1,
            cols: 1,
            entries: vec![v],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Mat) -> Result<Mat, ShapeError> {
        if self.cols != rhs.rows {
            return Err(ShapeError::Mul {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.entries[k * rhs.cols + j];
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Mat) -> Result<Mat, ShapeError> {
        if self.shape() != rhs.shape() {
            return Err(ShapeError::Add {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, k: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    /// Kronecker product, `self`-index major: entry `((i, k), (j, l))` sits at
    /// row `i * rhs.rows + k`, column `j * rhs.cols + l`.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Mat::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal `diag(self, rhs)`.
    pub fn direct_sum(&self, rhs: &Mat) -> Mat {
        Mat::block_diag([self, rhs])
    }

    /// Block-diagonal matrix of all `blocks`, in order.
    pub fn block_diag<'a, I>(blocks: I) -> Mat
    where
        I: IntoIterator<Item = &'a Mat>,
        I::IntoIter: Clone,
    {
        let it = blocks.into_iter();
        let (rows, cols) = it
            .clone()
            .fold((0, 0), |(r, c), b| (r + b.rows, c + b.cols));
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in it {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Linear dual in the standard bases: the transpose.
    pub fn dual(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Row-reduces a copy and returns the reduced matrix with its rank.
    fn row_echelon(&self) -> (Mat, usize) {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..m.cols {
                    m.entries.swap(pivot * m.cols + j, rank * m.cols + j);
                }
            }
            let inv = m.get(rank, col).recip();
            for j in col..m.cols {
                let v = m.get(rank, j) * &inv;
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j) - &factor * m.get(rank, j);
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().1
    }

    /// True iff the matrix is square with full rank. The empty 0x0 matrix is
    /// an isomorphism of the zero space.
    pub fn is_iso(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Exact inverse by Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (red, _) = aug.row_echelon();
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            if !red.get(i, i).is_one() {
                return None;
            }
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// True iff some entry is negative.
    pub fn has_negative(&self) -> bool {
        self.entries.iter().any(Signed::is_negative)
    }
}

fn fmt_scalar(v: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.is_integer() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for Mat {
    /// Compact nested-list form, e.g. `[[1,2],[3,1/2]]`; shape-only for
    /// empty matrices (`[0x3]`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                fmt_scalar(self.get(i, j), f)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(rows)
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(Mat::identity(2).mul(&a).unwrap(), a);
        assert_eq!(a.mul(&Mat::identity(2)).unwrap(), a);
    }

    #[test]
    fn product_by_hand() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&swap).unwrap(), m(&[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn empty_dimension_product() {
        let a = Mat::zeros(0, 3);
        let b = Mat::zeros(3, 2);
        assert_eq!(a.mul(&b).unwrap().shape(), (0, 2));
        // 2x0 * 0x2 is the zero map through the zero space
        let c = Mat::zeros(2, 0).mul(&Mat::zeros(0, 2)).unwrap();
        assert_eq!(c, Mat::zeros(2, 2));
    }

    #[test]
    fn shape_error_names_both_shapes() {
        let err = Mat::zeros(2, 3).mul(&Mat::zeros(2, 2)).unwrap_err();
        assert_eq!(err.to_string(), "cannot multiply 2x3 by 2x2");
    }

    #[test]
    fn kron_cases() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let k = Mat::identity(2).kron(&a);
        assert_eq!(k, Mat::block_diag([&a, &a]));
        assert_eq!(m(&[&[2]]).kron(&m(&[&[3]])), m(&[&[6]]));
        assert_eq!(Mat::zeros(2, 3).kron(&Mat::zeros(3, 1)).shape(), (6, 3));
        // a-index major
        let b = m(&[&[1, 10]]);
        let c = m(&[&[1], &[2]]);
        assert_eq!(b.kron(&c), m(&[&[1, 10], &[2, 20]]));
    }

    #[test]
    fn direct_sum_cases() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.direct_sum(&Mat::zeros(0, 0)), a);
        assert_eq!(m(&[&[1]]).direct_sum(&m(&[&[2]])), m(&[&[1, 0], &[0, 2]]));
        assert_eq!(
            Mat::zeros(2, 2).direct_sum(&Mat::zeros(3, 1)).shape(),
            (5, 3)
        );
    }

    #[test]
    fn dual_cases() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.dual(), m(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.dual().dual(), a);
        assert_eq!(Mat::zeros(2, 3).dual().shape(), (3, 2));
    }

    #[test]
    fn iso_cases() {
        assert!(Mat::identity(3).is_iso());
        assert!(!m(&[&[1, 2], &[2, 4]]).is_iso());
        assert!(!Mat::zeros(2, 3).is_iso());
        assert!(Mat::zeros(0, 0).is_iso());
    }

    #[test]
    fn inverse_exact() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        let b = Mat::from_entries(1, 1, vec![ratio(2, 3)]).unwrap();
        assert_eq!(*b.inverse().unwrap().get(0, 0), ratio(3, 2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn display_forms() {
        let a = Mat::from_entries(1, 2, vec![int(3), ratio(-1, 2)]).unwrap();
        assert_eq!(a.to_string(), "[[3,-1/2]]");
        assert_eq!(Mat::zeros(0, 3).to_string(), "[0x3]");
    }

    fn small_mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec((-3i64..=3, 1i64..=3), rows * cols).prop_map(move |v| {
            let entries = v.into_iter().map(|(n, d)| ratio(n, d)).collect();
            Mat::from_entries(rows, cols, entries).unwrap()
        })
    }

    fn chain3() -> impl Strategy<Value = (Mat, Mat, Mat)> {
        (0usize..4, 0usize..4, 0usize..4, 0usize..4)
            .prop_flat_map(|(a, b, c, d)| (small_mat(a, b), small_mat(b, c), small_mat(c, d)))
    }

    proptest! {
        #[test]
        fn mul_is_associative((a, b, c) in chain3()) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn dual_is_contravariant((a, b, _c) in chain3()) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.dual(), b.dual().mul(&a.dual()).unwrap());
            prop_assert_eq!(a.dual().dual(), a);
        }

        #[test]
        fn sum_and_kron_are_functorial((a, c, _x) in chain3(), (b, d, _y) in chain3()) {
            let lhs = a.direct_sum(&b).mul(&c.direct_sum(&d)).unwrap();
            let rhs = a.mul(&c).unwrap().direct_sum(&b.mul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
            let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn iso_iff_two_sided_inverse(a in (0usize..4).prop_flat_map(|n| small_mat(n, n))) {
            match a.inverse() {
                Some(inv) => {
                    prop_assert!(a.is_iso());
                    let n = a.rows();
                    prop_assert_eq!(a.mul(&inv).unwrap(), Mat::identity(n));
                    prop_assert_eq!(inv.mul(&a).unwrap(), Mat::identity(n));
                }
                None => prop_assert!(!a.is_iso()),
            }
        }
    }
}
