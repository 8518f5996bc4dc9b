//! Exact dense matrices over `Q(i)`: products, reduced row echelon form,
//! rank and the canonical rank factorization `M = B·C`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::LinalgError;
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

/// Output of [`ScalarMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: ScalarMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl ScalarMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, entries: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMatrix::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = GaussianRational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch { left: (rows, cols), right: (entries.len(), 1) });
        }
        Ok(ScalarMatrix { rows, cols, entries })
    }

    /// Rows must all have the same length; an empty list gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::ShapeMismatch { left: (r, c), right: (1, row.len()) });
            }
            entries.extend(row);
        }
        Ok(ScalarMatrix { rows: r, cols: c, entries })
    }

    /// Convenience constructor from Gaussian-integer pairs `(re, im)`.
    pub fn from_gaussian_integers(rows: &[&[(i64, i64)]]) -> Result<Self, LinalgError> {
        ScalarMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| GaussianRational::from_gaussian_integer(a, b)).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[GaussianRational]) -> Self {
        let n = values.len();
        let mut m = ScalarMatrix::zero(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: GaussianRational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_zero)
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut t = ScalarMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// The diagonal matrix carrying `self`'s diagonal entries.
    pub fn diag_of(&self) -> Result<ScalarMatrix, LinalgError> {
        self.require_square()?;
        Ok(ScalarMatrix::diagonal(&self.diagonal_entries()))
    }

    pub fn diagonal_entries(&self) -> Vec<GaussianRational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn add(&self, other: &ScalarMatrix) -> Result<ScalarMatrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        Ok(ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<ScalarMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        let mut out = ScalarMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Result<Vec<GaussianRational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: (v.len(), 1) });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Reduced row echelon form. Pivot = first nonzero entry at or below
    /// the current row in the current column, which makes the result (and
    /// the pivot list) canonical.
    pub fn rref(&self) -> Echelon {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][col].inv().expect("pivot is nonzero");
            for x in m[r].iter_mut().skip(col) {
                *x = &*x * &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *x -= &(&factor * p);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        Echelon {
            reduced: ScalarMatrix::from_rows(m).unwrap_or_else(|_| ScalarMatrix::zero(self.rows, self.cols)),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// `M = B·C` with `C` the nonzero rows of `rref(M)` and `B` the pivot
    /// columns of `M`. Rank zero gives `n×0` and `0×m` factors.
    pub fn rank_factorization(&self) -> (ScalarMatrix, ScalarMatrix) {
        let Echelon { reduced, pivots } = self.rref();
        let r = pivots.len();
        let c = ScalarMatrix { rows: r, cols: self.cols, entries: reduced.entries[..r * self.cols].to_vec() };
        let mut b = ScalarMatrix::zero(self.rows, r);
        for (k, &col) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                b.entries[i * r + k] = self.get(i, col).clone();
            }
        }
        (b, c)
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "\"{x}\"")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ScalarMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::rank_two_example;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> ScalarMatrix {
        ScalarMatrix::from_gaussian_integers(rows).unwrap()
    }

    #[test]
    fn basic_ops() {
        let a = rank_two_example();
        let d = a.diag_of().unwrap();
        assert_eq!(
            d,
            m(&[
                &[(1, 0), (0, 0), (0, 0), (0, 0)],
                &[(0, 0), (1, 0), (0, 0), (0, 0)],
                &[(0, 0), (0, 0), (1, 0), (0, 0)],
                &[(0, 0), (0, 0), (0, 0), (-1, 0)]
            ])
        );
        assert_eq!(a.transpose().transpose(), a);
        assert!(ScalarMatrix::zero(3, 3).is_zero());
        assert!(a.mul(&ScalarMatrix::zero(3, 3)).is_err());
        assert!(ScalarMatrix::zero(2, 3).diag_of().is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_two_example().rank(), 2);
        assert_eq!(ScalarMatrix::identity(5).rank(), 5);
        assert_eq!(m(&[&[(1, 0), (0, 1)], &[(0, -1), (1, 0)]]).rank(), 1);
        assert_eq!(ScalarMatrix::zero(3, 3).rank(), 0);
    }

    #[test]
    fn rref_and_factorization_of_example() {
        let a = rank_two_example();
        let e = a.rref();
        assert_eq!(e.pivots, vec![0, 2]);
        let expected_c = m(&[&[(1, 0), (0, 1), (0, 0), (1, 0)], &[(0, 0), (0, 0), (1, 0), (0, 0)]]);
        for i in 0..2 {
            assert_eq!(e.reduced.row(i), expected_c.row(i));
        }
        assert!(e.reduced.row(2).iter().chain(e.reduced.row(3)).all(GaussianRational::is_zero));
        let (b, c) = a.rank_factorization();
        assert_eq!(c, expected_c);
        assert_eq!(b, m(&[&[(1, 0), (1, 0)], &[(0, -1), (0, -1)], &[(-1, 0), (1, 0)], &[(-1, 0), (1, 0)]]));
        assert_eq!(b.mul(&c).unwrap(), a);
    }

    #[test]
    fn factorization_edge_cases() {
        let id = ScalarMatrix::identity(3);
        assert_eq!(id.rref().reduced, id);
        assert_eq!(id.rank_factorization(), (id.clone(), id.clone()));
        let z = ScalarMatrix::zero(3, 3);
        assert_eq!(z.rref().reduced, z);
        let (b, c) = z.rank_factorization();
        assert_eq!((b.shape(), c.shape()), ((3, 0), (0, 3)));
        assert_eq!(b.mul(&c).unwrap(), z);
    }

    fn small_entry() -> impl Strategy<Value = GaussianRational> {
        prop_oneof![
            3 => Just(GaussianRational::zero()),
            1 => (-3i64..=3, -3i64..=3).prop_map(|(a, b)| GaussianRational::from_gaussian_integer(a, b)),
        ]
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ScalarMatrix> {
        proptest::collection::vec(small_entry(), rows * cols)
            .prop_map(move |e| ScalarMatrix::from_vec(rows, cols, e).unwrap())
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(a in matrix(4, 5)) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn factorization_recomposes(a in matrix(4, 4)) {
            let (b, c) = a.rank_factorization();
            prop_assert_eq!(b.mul(&c).unwrap(), a.clone());
            let r = a.rank();
            prop_assert_eq!(b.rank(), r);
            prop_assert_eq!(c.rank(), r);
        }

        #[test]
        fn rank_of_product(a in matrix(3, 4), b in matrix(4, 3)) {
            prop_assert!(a.mul(&b).unwrap().rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn rref_idempotent(a in matrix(4, 4)) {
            let once = a.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once);
        }
    }
}
