//! Dense exact matrices: elimination, rank, kernels, inverses, the
//! quasi-inverse and the minimal polynomial.

use std::fmt;

use num_rational::Rational64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Polynomial;

/// A dense `rows x cols` matrix over a [`Field`], stored row-major.
///
/// Square matrices model elements of the ring `M_n(K)`; rectangular ones
/// appear as bases of subspaces and in linear solves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    /// The zero matrix.
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    /// The identity of `M_n(K)`.
    pub fn identity(field: Field, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    /// The scalar matrix `c * 1`.
    pub fn scalar(field: Field, n: usize, c: Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: Field, diag: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, c) in diag.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Matrix unit `E_{ij}` of size `n` (zero-based indices).
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.set(i, j, field.one());
        m
    }

    /// Builds a matrix from rows of scalars.
    ///
    /// # Panics
    /// Panics if the rows have different lengths.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from rows of integers, reduced into the field.
    pub fn from_i64<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Builds an `n x k` matrix from `k` column vectors of length `n`.
    pub fn from_columns(field: Field, n: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Uniformly random matrix (small rationals over the rationals).
    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Random invertible matrix, by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Overwrites the entry at `(r, c)`.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// All rows as vectors.
    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
    }

    /// Checks that two square matrices live in the same ring.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Entrywise sum.
    ///
    /// # Panics
    /// Panics on field or shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        self.with_data(data)
    }

    /// Entrywise difference.
    ///
    /// # Panics
    /// Panics on field or shape mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        let f = self.field;
        self.with_data(self.data.iter().map(|a| f.neg(a)).collect())
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &Scalar) -> Self {
        let f = self.field;
        self.with_data(self.data.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Matrix product.
    ///
    /// # Panics
    /// Panics on field mismatch or incompatible inner dimensions.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        if let (Field::Prime(p), true) = (f, self.cols > 0) {
            let p = u64::from(p);
            let a: Vec<u64> = self
                .data
                .iter()
                .map(|s| u64::from(s.residue().unwrap()))
                .collect();
            let b: Vec<u64> = other
                .data
                .iter()
                .map(|s| u64::from(s.residue().unwrap()))
                .collect();
            let mut acc = vec![0u64; other.cols];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|x| *x = 0);
                for k in 0..self.cols {
                    let aik = a[i * self.cols + k];
                    if aik == 0 {
                        continue;
                    }
                    let brow = &b[k * other.cols..(k + 1) * other.cols];
                    for (x, bkj) in acc.iter_mut().zip(brow) {
                        *x = (*x + aik * bkj) % p;
                    }
                }
                for (j, x) in acc.iter().enumerate() {
                    out.data[i * other.cols + j] = Scalar::Fp(*x as u32);
                }
            }
            return out;
        }
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(out.get(i, j), aik, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Product of a sequence of square matrices, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Matrix>>(field: Field, n: usize, it: I) -> Self {
        it.into_iter()
            .fold(Self::identity(field, n), |acc, m| acc.mul(m))
    }

    /// `self^e` for square matrices.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Whether every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Whether this is the identity matrix.
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// `self^2 = self`.
    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.mul(self) == *self
    }

    /// `self^2 = 1`.
    pub fn is_involution(&self) -> bool {
        self.is_square() && self.mul(self).is_identity()
    }

    /// `self^2 = 0`.
    pub fn is_square_zero(&self) -> bool {
        self.is_square() && self.mul(self).is_zero()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Submatrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Submatrix made of the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gauss-Jordan elimination in place, pivoting only in the first
    /// `pivot_limit` columns and always on the first nonzero candidate.
    /// Returns the pivot columns.
    fn reduce_in_place(&mut self, pivot_limit: usize) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_limit.min(self.cols) {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = f.inv(self.get(row, col)).expect("nonzero pivot");
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            let pivot_row: Vec<Scalar> = self.row(row).to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    if pv.is_zero() {
                        continue;
                    }
                    let v = f.sub(self.get(r, c), &f.mul(&factor, pv));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        (m, pivots)
    }

    /// Reduced row echelon form `R`, an invertible `T` with `T * self = R`,
    /// and the pivot columns.
    pub fn rref_with_transform(&self) -> (Matrix, Matrix, Vec<usize>) {
        let mut aug = self.hcat(&Self::identity(self.field, self.rows));
        let pivots = aug.reduce_in_place(self.cols);
        let all: Vec<usize> = (0..self.cols).collect();
        let t_cols: Vec<usize> = (self.cols..self.cols + self.rows).collect();
        (
            aug.select_columns(&all),
            aug.select_columns(&t_cols),
            pivots,
        )
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank divided by the side length, the unique rank function on `M_n(K)`.
    pub fn normalized_rank(&self) -> Rational64 {
        if self.rows == 0 {
            return Rational64::from_integer(0);
        }
        Rational64::new(self.rank() as i64, self.rows as i64)
    }

    /// Normalized rank of `self - other`.
    pub fn rank_distance(&self, other: &Self) -> Result<Rational64> {
        self.check_compatible(other)?;
        Ok(self.sub(other).normalized_rank())
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return f.zero();
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = f.neg(&det);
            }
            let pivot = m.get(col, col).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), &inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let (r, t, pivots) = self.rref_with_transform();
        if pivots.len() < self.rows {
            return Err(Error::NotInvertible);
        }
        debug_assert!(r.is_identity());
        Ok(t)
    }

    /// Whether the square matrix is invertible.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the right kernel `{x : self x = 0}` as the columns of a
    /// `cols x k` matrix, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Basis of the left kernel `{y : y self = 0}` as the rows of a
    /// `k x rows` matrix.
    pub fn left_kernel_basis(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    /// Some `X` with `self * X = b`, if one exists (free variables set to
    /// zero).
    pub fn solve_right(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "row count mismatch");
        let f = self.field;
        let mut aug = self.hcat(b);
        let pivots = aug.reduce_in_place(self.cols);
        for r in pivots.len()..self.rows {
            if (0..b.cols).any(|c| !aug.get(r, self.cols + c).is_zero()) {
                return None;
            }
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, aug.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    /// Some `Y` with `Y * self = b`, if one exists.
    pub fn solve_left(&self, b: &Matrix) -> Option<Matrix> {
        self.transpose()
            .solve_right(&b.transpose())
            .map(|y| y.transpose())
    }

    /// A rank factorization `self = P * Q` with `P` of full column rank and
    /// `Q` of full row rank; `P` consists of the pivot columns of `self` and
    /// `Q` of the nonzero rows of its reduced row echelon form.
    pub fn rank_factorization(&self) -> (Matrix, Matrix) {
        let (r, pivots) = self.rref();
        let rows: Vec<usize> = (0..pivots.len()).collect();
        (self.select_columns(&pivots), r.select_rows(&rows))
    }

    /// A quasi-inverse `B` with `ABA = A` and `BAB = B`.
    ///
    /// With `A = PQ` a rank factorization, `B = Q' P'` where `P'` is a left
    /// inverse of `P` and `Q'` a right inverse of `Q`.
    pub fn quasi_inverse(&self) -> Matrix {
        assert!(self.is_square(), "quasi-inverse of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        let (p, q) = self.rank_factorization();
        let r = p.cols();
        if r == 0 {
            return Self::zeros(f, n, n);
        }
        let (_, row_pivots) = p.transpose().rref();
        let square = p
            .select_rows(&row_pivots)
            .inverse()
            .expect("independent pivot rows");
        let mut p_left = Self::zeros(f, r, n);
        for (j, &pr) in row_pivots.iter().enumerate() {
            for i in 0..r {
                p_left.set(i, pr, square.get(i, j).clone());
            }
        }
        let (_, col_pivots) = q.rref();
        let mut q_right = Self::zeros(f, n, r);
        for (i, &pc) in col_pivots.iter().enumerate() {
            q_right.set(pc, i, f.one());
        }
        let b = q_right.mul(&p_left);
        debug_assert!(self.mul(&b).mul(self) == *self && b.mul(self).mul(&b) == b);
        b
    }

    /// Characteristic polynomial `det(X·1 - A)`, via reduction to upper
    /// Hessenberg form.
    pub fn characteristic_polynomial(&self) -> Polynomial {
        assert!(
            self.is_square(),
            "characteristic polynomial of a non-square matrix"
        );
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                h.swap_rows(piv, j + 1);
                for r in 0..n {
                    let (x, y) = (h.get(r, piv).clone(), h.get(r, j + 1).clone());
                    h.set(r, piv, y);
                    h.set(r, j + 1, x);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).expect("nonzero pivot");
            for k in j + 2..n {
                let t = f.mul(h.get(k, j), &inv);
                if t.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(k, c), &f.mul(&t, h.get(j + 1, c)));
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), &f.mul(&t, h.get(r, k)));
                    h.set(r, j + 1, v);
                }
            }
        }
        let x = Polynomial::x(f);
        let mut p = vec![Polynomial::one(f)];
        for m in 1..=n {
            let diag = Polynomial::constant(f, h.get(m - 1, m - 1).clone());
            let mut next = x.sub(&diag).mul(&p[m - 1]);
            let mut t = f.one();
            for i in 1..m {
                t = f.mul(&t, h.get(m - i, m - i - 1));
                let c = f.mul(h.get(m - i - 1, m - 1), &t);
                next = next.sub(&p[m - i - 1].scale(&c));
            }
            p.push(next);
        }
        p.pop().expect("nonempty")
    }

    /// Minimal polynomial of a square matrix, found as the first linear
    /// dependence among `1, A, A^2, ...`.
    pub fn minimal_polynomial(&self) -> Polynomial {
        assert!(
            self.is_square(),
            "minimal polynomial of a non-square matrix"
        );
        let f = self.field;
        let n = self.rows;
        let flatten = |m: &Matrix| Matrix {
            field: f,
            rows: n * n,
            cols: 1,
            data: m.data.clone(),
        };
        let mut powers = flatten(&Self::identity(f, n));
        let mut current = self.clone();
        for k in 1..=n.max(1) {
            let target = flatten(&current);
            if let Some(c) = powers.solve_right(&target) {
                let mut coeffs: Vec<Scalar> = (0..k).map(|i| f.neg(c.get(i, 0))).collect();
                coeffs.push(f.one());
                return Polynomial::new(f, coeffs);
            }
            powers = powers.hcat(&target);
            current = current.mul(self);
        }
        unreachable!("Cayley-Hamilton bounds the degree by n")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);
    const F5: Field = Field::Prime(5);

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(F5, 3).rank(), 3);
        assert_eq!(
            Matrix::identity(F5, 3).normalized_rank(),
            Rational64::from_integer(1)
        );
        let e12 = Matrix::from_i64(F2, &[[0, 1], [0, 0]]);
        assert_eq!(e12.normalized_rank(), Rational64::new(1, 2));
        assert_eq!(Matrix::zeros(Field::Rationals, 4, 4).rank(), 0);
    }

    #[test]
    fn quasi_inverse_examples() {
        let d = Matrix::from_i64(F3, &[[1, 0], [0, 0]]);
        assert_eq!(d.quasi_inverse(), d);
        let e12 = Matrix::from_i64(F2, &[[0, 1], [0, 0]]);
        assert_eq!(e12.quasi_inverse(), Matrix::from_i64(F2, &[[0, 0], [1, 0]]));
        let g = Matrix::from_i64(F5, &[[1, 2], [3, 4]]);
        assert_eq!(g.quasi_inverse(), g.inverse().unwrap());
    }

    #[test]
    fn rank_distance_examples() {
        let one = Matrix::identity(F3, 4);
        let mut d = one.clone();
        d.set(3, 3, F3.zero());
        assert_eq!(
            one.rank_distance(&one).unwrap(),
            Rational64::from_integer(0)
        );
        assert_eq!(one.rank_distance(&d).unwrap(), Rational64::new(1, 4));
        assert!(one.rank_distance(&Matrix::identity(F3, 3)).is_err());
        assert!(one.rank_distance(&Matrix::identity(F5, 4)).is_err());
    }

    #[test]
    fn minimal_polynomial_examples() {
        let one = Matrix::identity(F3, 3);
        assert_eq!(one.minimal_polynomial(), Polynomial::from_i64(F3, &[-1, 1]));
        let e12 = Matrix::from_i64(F3, &[[0, 1], [0, 0]]);
        assert_eq!(
            e12.minimal_polynomial(),
            Polynomial::from_i64(F3, &[0, 0, 1])
        );
        let companion = Matrix::from_i64(F3, &[[0, -1], [1, 0]]);
        assert_eq!(
            companion.minimal_polynomial(),
            Polynomial::from_i64(F3, &[1, 0, 1])
        );
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(Field::Rationals, &[[2, 1], [7, 4]]);
        assert_eq!(m.det(), Field::Rationals.from_i64(1));
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let s = Matrix::from_i64(F3, &[[1, 2], [2, 1]]);
        assert!(s.det().is_zero());
        assert_eq!(s.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn characteristic_polynomials() {
        let c = Matrix::from_i64(F5, &[[0, 0, 3], [1, 0, 1], [0, 1, 4]]);
        assert_eq!(
            c.characteristic_polynomial(),
            Polynomial::from_i64(F5, &[-3, -1, -4, 1])
        );
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[[2, 1, 0, 5], [7, 4, 1, 1], [0, 3, 3, 2], [1, 0, 2, 6]]);
        let p = m.characteristic_polynomial();
        assert_eq!(p.coeff(0), m.det());
        assert!(p.eval_matrix(&m).is_zero());
        assert_eq!(p.degree(), Some(4));
        let z = Matrix::from_i64(F5, &[[0, 0, 0], [0, 0, 0], [1, 0, 0]]);
        assert_eq!(z.characteristic_polynomial(), Polynomial::monomial(F5, 3));
    }

    #[test]
    fn kernels() {
        let a = Matrix::from_i64(F5, &[[1, 2, 3], [2, 4, 2]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        let l = a.transpose().left_kernel_basis();
        assert!(l.mul(&a.transpose()).is_zero());
    }
}
