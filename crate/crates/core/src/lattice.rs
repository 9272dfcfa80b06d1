//! The lattice of principal right ideals of `M_n(K)`.
//!
//! A principal right ideal `aR` is determined by the column space of `a`, so
//! right ideals are stored as subspaces of `K^n` with a canonical
//! reduced-column-echelon basis; left ideals are stored as row spaces in
//! reduced row echelon form. Idempotent generators are derived on demand.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// A principal right ideal, represented by a subspace `V` of `K^n`; the ideal
/// is `{m : colspace(m) ⊆ V}`.
///
/// The basis is canonical: each basis column has a leading `1` in its pivot
/// row, zeros above it, and zeros in the pivot rows of the other columns, with
/// pivots increasing. Equal ideals therefore have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RightIdeal {
    basis: Matrix,
}

/// A principal left ideal `Ra`, represented by the row space of `a` in
/// reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeftIdeal {
    basis: Matrix,
}

/// A square matrix `e` with `e^2 = e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Idempotent {
    matrix: Matrix,
}

impl RightIdeal {
    /// The ideal generated by (the column space of) the given columns.
    pub fn from_columns(columns: &Matrix) -> Self {
        let f = columns.field();
        let n = columns.rows();
        let (r, pivots) = columns.transpose().rref();
        let rows: Vec<usize> = (0..pivots.len()).collect();
        let basis = if rows.is_empty() {
            Matrix::zeros(f, n, 0)
        } else {
            r.select_rows(&rows).transpose()
        };
        RightIdeal { basis }
    }

    /// `aR`, the ideal of the column space of `a`.
    pub fn of_matrix(a: &Matrix) -> Self {
        Self::from_columns(a)
    }

    /// The zero ideal of `M_n(K)`.
    pub fn zero(field: Field, n: usize) -> Self {
        RightIdeal {
            basis: Matrix::zeros(field, n, 0),
        }
    }

    /// The whole ring.
    pub fn full(field: Field, n: usize) -> Self {
        RightIdeal {
            basis: Matrix::identity(field, n),
        }
    }

    /// Ideal spanned by standard basis vectors `e_i` for the given indices.
    pub fn coordinate(field: Field, n: usize, indices: &[usize]) -> Self {
        Self::from_columns(&Matrix::identity(field, n).select_columns(indices))
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.basis.field()
    }

    /// Ambient side length.
    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    /// Dimension of the underlying subspace.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Normalized dimension `dim / n`, the dimension function of the lattice.
    pub fn delta(&self) -> Rational64 {
        Rational64::new(self.dim() as i64, self.n() as i64)
    }

    /// Whether this is the zero ideal.
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Whether this is the whole ring.
    pub fn is_full(&self) -> bool {
        self.dim() == self.n()
    }

    /// Pivot row of each canonical basis column.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|j| {
                (0..self.n())
                    .find(|&i| !self.basis.get(i, j).is_zero())
                    .expect("nonzero")
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ));
        }
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "n = {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Whether the column vector lies in the subspace.
    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let col = Matrix::from_columns(self.field(), self.n(), &[v.to_vec()]);
        self.basis.solve_right(&col).is_some()
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.dim() == 0 || self.basis.solve_right(&other.basis).is_some()
    }

    /// Join `I ∨ J = I + J`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_columns(&self.basis.hcat(&other.basis)))
    }

    /// Join of a list of ideals (zero for an empty list is not available, so
    /// at least one ideal is required).
    pub fn sum_all(ideals: &[RightIdeal]) -> Result<Self> {
        let first = ideals
            .first()
            .ok_or_else(|| Error::Precondition("empty ideal family".into()))?;
        let mut basis = first.basis.clone();
        for i in &ideals[1..] {
            first.check(i)?;
            basis = basis.hcat(&i.basis);
        }
        Ok(Self::from_columns(&basis))
    }

    /// Meet `I ∧ J = I ∩ J`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field(), self.n()));
        }
        let stacked = self.basis.hcat(&other.basis.neg());
        let kernel = stacked.kernel_basis();
        let top: Vec<usize> = (0..self.dim()).collect();
        let coords = kernel.select_rows(&top);
        Ok(Self::from_columns(&self.basis.mul(&coords)))
    }

    /// `aI`, the image of the subspace under `a`.
    pub fn image_under(&self, a: &Matrix) -> Self {
        Self::from_columns(&a.mul(&self.basis))
    }

    /// `{v ∈ V : x v = 0}` for the subspace `V` of this ideal.
    pub fn restricted_kernel(&self, x: &Matrix) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let k = x.mul(&self.basis).kernel_basis();
        Self::from_columns(&self.basis.mul(&k))
    }

    /// The left annihilator `{m : m I = 0}`.
    pub fn left_annihilator(&self) -> LeftIdeal {
        if self.is_zero() {
            return LeftIdeal::full(self.field(), self.n());
        }
        LeftIdeal::from_rows(&self.basis.left_kernel_basis())
    }

    /// Idempotent generator: the projection onto the subspace along the span
    /// of the non-pivot standard basis vectors.
    pub fn idempotent_generator(&self) -> Idempotent {
        let f = self.field();
        let n = self.n();
        let mut e = Matrix::zeros(f, n, n);
        for (j, p) in self.pivots().into_iter().enumerate() {
            for i in 0..n {
                e.set(i, p, self.basis.get(i, j).clone());
            }
        }
        Idempotent { matrix: e }
    }

    /// The `k` leading canonical basis vectors.
    pub fn leading(&self, k: usize) -> Self {
        let cols: Vec<usize> = (0..k.min(self.dim())).collect();
        RightIdeal {
            basis: self.basis.select_columns(&cols),
        }
    }
}

impl fmt::Display for RightIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for j in 0..self.dim() {
            let col: Vec<String> = self
                .basis
                .column(j)
                .iter()
                .map(ToString::to_string)
                .collect();
            write!(f, "{}({})", if j > 0 { ", " } else { "" }, col.join(","))?;
        }
        write!(f, "}}")
    }
}

impl LeftIdeal {
    /// The left ideal generated by (the row space of) the given rows.
    pub fn from_rows(rows: &Matrix) -> Self {
        let (r, pivots) = rows.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        LeftIdeal {
            basis: r.select_rows(&keep),
        }
    }

    /// `Ra`, the ideal of the row space of `a`.
    pub fn of_matrix(a: &Matrix) -> Self {
        Self::from_rows(a)
    }

    /// The whole ring.
    pub fn full(field: Field, n: usize) -> Self {
        LeftIdeal {
            basis: Matrix::identity(field, n),
        }
    }

    /// Canonical basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.basis.field()
    }

    /// Ambient side length.
    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    /// Dimension of the row space.
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Normalized dimension.
    pub fn delta(&self) -> Rational64 {
        Rational64::new(self.dim() as i64, self.n() as i64)
    }

    /// The right annihilator `{m : L m = 0}`.
    pub fn right_annihilator(&self) -> RightIdeal {
        if self.dim() == 0 {
            return RightIdeal::full(self.field(), self.n());
        }
        RightIdeal::from_columns(&self.basis.kernel_basis())
    }
}

/// `aR`.
pub fn ideal_of(a: &Matrix) -> RightIdeal {
    RightIdeal::of_matrix(a)
}

/// `rAnn(a) = {m : am = 0}`, the ideal of the kernel of `a`.
pub fn r_ann(a: &Matrix) -> RightIdeal {
    RightIdeal::from_columns(&a.kernel_basis())
}

/// `lAnn(a) = {m : ma = 0}`, the ideal of the left kernel of `a`.
pub fn l_ann(a: &Matrix) -> LeftIdeal {
    let k = a.left_kernel_basis();
    if k.rows() == 0 {
        return LeftIdeal {
            basis: Matrix::zeros(a.field(), 0, a.cols()),
        };
    }
    LeftIdeal::from_rows(&k)
}

/// Whether `(I_1, ..., I_k)` is independent, tested by the prefix condition
/// `(I_1 ∨ ... ∨ I_i) ∧ I_{i+1} = 0`.
pub fn is_independent(ideals: &[RightIdeal]) -> bool {
    let Some(first) = ideals.first() else {
        return true;
    };
    let mut acc = first.clone();
    for next in &ideals[1..] {
        if acc.dim() + next.dim() > acc.n() {
            return false;
        }
        let joined = acc.sum(next).expect("compatible ideals");
        if joined.dim() != acc.dim() + next.dim() {
            return false;
        }
        acc = joined;
    }
    true
}

/// Extends `x` to `x'` with `x ≤ x'`, `x' ∧ y = 0` and `x' ∨ y = z`.
///
/// The extension adds canonical basis vectors of `z` in order, keeping each
/// one that is not already in `x' + y`.
pub fn relative_complement(x: &RightIdeal, y: &RightIdeal, z: &RightIdeal) -> Result<RightIdeal> {
    x.check(y)?;
    x.check(z)?;
    let xy = x.sum(y)?;
    if xy.dim() != x.dim() + y.dim() {
        return Err(Error::Precondition(
            "relative complement needs x ∧ y = 0".into(),
        ));
    }
    if !z.contains(&xy) {
        return Err(Error::Precondition(
            "relative complement needs x ∨ y ≤ z".into(),
        ));
    }
    let mut out = x.basis.clone();
    let mut span = xy;
    for j in 0..z.dim() {
        if span.dim() == z.dim() {
            break;
        }
        let v = z.basis.column(j);
        if !span.contains_vector(&v) {
            let col = Matrix::from_columns(z.field(), z.n(), &[v]);
            out = out.hcat(&col);
            span = RightIdeal::from_columns(&span.basis.hcat(&col));
        }
    }
    Ok(RightIdeal::from_columns(&out))
}

impl Idempotent {
    /// Wraps a matrix, checking `e^2 = e`.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_idempotent() {
            return Err(Error::NotIdempotent);
        }
        Ok(Idempotent { matrix })
    }

    /// The zero idempotent.
    pub fn zero(field: Field, n: usize) -> Self {
        Idempotent {
            matrix: Matrix::zeros(field, n, n),
        }
    }

    /// The identity.
    pub fn one(field: Field, n: usize) -> Self {
        Idempotent {
            matrix: Matrix::identity(field, n),
        }
    }

    /// Diagonal 0/1 idempotent with ones at the given indices.
    pub fn coordinate(field: Field, n: usize, indices: &[usize]) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for &i in indices {
            m.set(i, i, field.one());
        }
        Idempotent { matrix: m }
    }

    /// The projection onto the span of `image` along the span of `kernel`;
    /// the two column sets together must form a basis of `K^n`.
    pub fn from_decomposition(image: &Matrix, kernel: &Matrix) -> Result<Self> {
        let f = image.field();
        let n = image.rows();
        let b = image.hcat(kernel);
        if b.cols() != n {
            return Err(Error::Precondition(
                "image and kernel dimensions do not add to n".into(),
            ));
        }
        let inv = b
            .inverse()
            .map_err(|_| Error::Precondition("image and kernel are not complementary".into()))?;
        let r = image.cols();
        let mut d = Matrix::zeros(f, n, n);
        for i in 0..r {
            d.set(i, i, f.one());
        }
        Ok(Idempotent {
            matrix: b.mul(&d).mul(&inv),
        })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Consumes the wrapper.
    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Rank (equal to the trace for idempotents in characteristic zero).
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Normalized rank.
    pub fn normalized_rank(&self) -> Rational64 {
        self.matrix.normalized_rank()
    }

    /// `eR`.
    pub fn image(&self) -> RightIdeal {
        RightIdeal::of_matrix(&self.matrix)
    }

    /// `(1-e)R = rAnn(e)`.
    pub fn kernel(&self) -> RightIdeal {
        r_ann(&self.matrix)
    }

    /// `1 - e`.
    pub fn complement(&self) -> Idempotent {
        Idempotent {
            matrix: Matrix::identity(self.field(), self.n()).sub(&self.matrix),
        }
    }

    /// `e ≤ f`, meaning `ef = fe = e`.
    pub fn leq(&self, f: &Idempotent) -> bool {
        self.matrix.mul(&f.matrix) == self.matrix && f.matrix.mul(&self.matrix) == self.matrix
    }

    /// `e ⊥ f`, meaning `ef = fe = 0`.
    pub fn orthogonal(&self, f: &Idempotent) -> bool {
        self.matrix.mul(&f.matrix).is_zero() && f.matrix.mul(&self.matrix).is_zero()
    }

    /// `e + f` for orthogonal idempotents.
    pub fn orthogonal_sum(&self, f: &Idempotent) -> Result<Idempotent> {
        if !self.orthogonal(f) {
            return Err(Error::Precondition("idempotents are not orthogonal".into()));
        }
        Ok(Idempotent {
            matrix: self.matrix.add(&f.matrix),
        })
    }

    /// `f - e` for `e ≤ f`.
    pub fn difference(&self, lower: &Idempotent) -> Result<Idempotent> {
        if !lower.leq(self) {
            return Err(Error::Precondition("idempotents are not ordered".into()));
        }
        Ok(Idempotent {
            matrix: self.matrix.sub(&lower.matrix),
        })
    }

    /// Conjugate `g e g^{-1}`.
    pub fn conjugate(&self, g: &Matrix) -> Result<Idempotent> {
        let gi = g.inverse()?;
        Ok(Idempotent {
            matrix: g.mul(&self.matrix).mul(&gi),
        })
    }
}

/// The idempotent `f` with `lower ≤ f ≤ upper` and `fR = image`.
///
/// Requires `lower ≤ upper` and `lower R ⊆ image ⊆ upper R`. The kernel of the
/// result is `(1-upper)R ⊕ W`, where `W` is the canonical complement of
/// `image ∩ M` inside `M = upper R ∩ (1-lower)R`.
pub fn idempotent_between(
    lower: &Idempotent,
    upper: &Idempotent,
    image: &RightIdeal,
) -> Result<Idempotent> {
    if !lower.leq(upper) {
        return Err(Error::Precondition(
            "lower idempotent is not below the upper one".into(),
        ));
    }
    let upper_im = upper.image();
    if !image.contains(&lower.image()) || !upper_im.contains(image) {
        return Err(Error::Precondition(
            "image is not between the two idempotents".into(),
        ));
    }
    let middle = upper.difference(lower)?.image();
    let shared = image.intersect(&middle)?;
    let zero = RightIdeal::zero(image.field(), image.n());
    let w = relative_complement(&zero, &shared, &middle)?;
    let kernel = upper.kernel().sum(&w)?;
    Idempotent::from_decomposition(image.basis(), kernel.basis())
}

fn check_rank_target(n: usize, t: Rational64) -> Result<usize> {
    let scaled = t * Rational64::from_integer(n as i64);
    if !scaled.is_integer() || scaled < Rational64::from_integer(0) {
        return Err(Error::RankNotRepresentable(format!(
            "rank {t} is not a multiple of 1/{n}"
        )));
    }
    Ok(scaled.to_integer() as usize)
}

/// Some `f` with `e ≤ f ≤ e'` and normalized rank exactly `t`.
pub fn interpolate_idempotent(
    e: &Idempotent,
    e2: &Idempotent,
    t: Rational64,
) -> Result<Idempotent> {
    if !e.leq(e2) {
        return Err(Error::Precondition("interpolation needs e ≤ e'".into()));
    }
    let target = check_rank_target(e.n(), t)?;
    let (lo, hi) = (e.rank(), e2.rank());
    if target < lo || target > hi {
        return Err(Error::Precondition(format!(
            "rank {t} outside [{}, {}]",
            e.normalized_rank(),
            e2.normalized_rank()
        )));
    }
    let middle = e2.difference(e)?.image();
    let image = e.image().sum(&middle.leading(target - lo))?;
    idempotent_between(e, e2, &image)
}

/// Pairwise orthogonal idempotents `e_1 = e, e_2, ..., e_t` with
/// `rk(e_k) = 2^{-k}`.
pub fn dyadic_chain(e: &Idempotent, depth: usize) -> Result<Vec<Idempotent>> {
    let n = e.n();
    if depth == 0 {
        return Ok(Vec::new());
    }
    if depth >= usize::BITS as usize || !n.is_multiple_of(1usize << depth) {
        return Err(Error::RankNotRepresentable(format!(
            "2^{depth} does not divide {n}"
        )));
    }
    if 2 * e.rank() != n {
        return Err(Error::Precondition("dyadic chain needs rk(e) = 1/2".into()));
    }
    let mut chain = vec![e.clone()];
    let mut used = e.clone();
    let zero = Idempotent::zero(e.field(), n);
    for k in 2..=depth {
        let next = interpolate_idempotent(&zero, &used.complement(), Rational64::new(1, 1 << k))?;
        used = used.orthogonal_sum(&next)?;
        chain.push(next);
    }
    Ok(chain)
}

/// Some `b` with `ba = f`, provided `rAnn(a) ⊆ (1-f)R`.
///
/// When the precondition fails the error names a kernel vector `x` of `a`
/// with `fx ≠ 0`.
pub fn left_quotient(a: &Matrix, f: &Idempotent) -> Result<Matrix> {
    a.check_compatible(f.matrix())?;
    let kernel = a.kernel_basis();
    for j in 0..kernel.cols() {
        let x = kernel.select_columns(&[j]);
        if !f.matrix().mul(&x).is_zero() {
            let v: Vec<String> = x.column(0).iter().map(ToString::to_string).collect();
            return Err(Error::Precondition(format!(
                "rAnn(a) ⊄ (1-f)R: witness vector ({}) has a·x = 0 but f·x ≠ 0",
                v.join(",")
            )));
        }
    }
    let b = a
        .solve_left(f.matrix())
        .expect("row space of f lies in that of a");
    debug_assert!(b.mul(a) == *f.matrix());
    Ok(b)
}
