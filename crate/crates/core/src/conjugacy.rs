//! Conjugacy of idempotents, square-zero elements and involutions, the
//! correspondences between them, involution splittings and the embedding of
//! a Boolean algebra of idempotents into the unit group.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{idempotent_between, interpolate_idempotent, r_ann, Idempotent, RightIdeal};
use crate::matricial::complete_matrix_units_in;
use crate::matrix::Matrix;

/// A square matrix `u` with `u^2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Involution {
    matrix: Matrix,
}

/// A square matrix `x` with `x^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoNilpotent {
    matrix: Matrix,
}

impl Involution {
    /// Wraps a matrix, checking `u^2 = 1`.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_involution() {
            return Err(Error::NotInvolution);
        }
        Ok(Involution { matrix })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Consumes the wrapper.
    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Normalized rank of `1 - u`.
    pub fn defect(&self) -> Rational64 {
        let one = Matrix::identity(self.matrix.field(), self.matrix.n());
        one.sub(&self.matrix).normalized_rank()
    }
}

impl TwoNilpotent {
    /// Wraps a matrix, checking `x^2 = 0`.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square_zero() {
            return Err(Error::NotSquareZero);
        }
        Ok(TwoNilpotent { matrix })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

fn one(field: Field, n: usize) -> Matrix {
    Matrix::identity(field, n)
}

/// Invertible `(L, R)` with `L a R = diag(1, ..., 1, 0, ..., 0)`.
fn normal_form_transforms(a: &Matrix) -> (Matrix, Matrix) {
    let (r1, t1, _) = a.rref_with_transform();
    let (_, t2, _) = r1.transpose().rref_with_transform();
    (t1, t2.transpose())
}

/// Invertible `U, V` with `B = U A V`, for matrices of equal rank.
pub fn rank_factorize(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
    a.check_compatible(b)?;
    let (ra, rb) = (a.rank(), b.rank());
    if ra != rb {
        return Err(Error::RankMismatch(ra, rb));
    }
    let (la, ra_) = normal_form_transforms(a);
    let (lb, rb_) = normal_form_transforms(b);
    let u = lb.inverse()?.mul(&la);
    let v = ra_.mul(&rb_.inverse()?);
    debug_assert!(u.mul(a).mul(&v) == *b);
    Ok((u, v))
}

/// Invertible `g` with `g e g^{-1} = f`, mapping the canonical image and
/// kernel bases of `e` onto those of `f`.
pub fn conjugate_idempotents(e: &Idempotent, f: &Idempotent) -> Result<Matrix> {
    e.matrix().check_compatible(f.matrix())?;
    let (re, rf) = (e.rank(), f.rank());
    if re != rf {
        return Err(Error::RankMismatch(re, rf));
    }
    let source = e.image().basis().hcat(e.kernel().basis());
    let target = f.image().basis().hcat(f.kernel().basis());
    let g = target.mul(&source.inverse()?);
    verify_conjugator(&g, e.matrix(), f.matrix())?;
    Ok(g)
}

fn verify_conjugator(g: &Matrix, a: &Matrix, b: &Matrix) -> Result<()> {
    if !g.is_invertible() || g.mul(a) != b.mul(g) {
        return Err(Error::Precondition("conjugator verification failed".into()));
    }
    Ok(())
}

/// Invertible `g` with `g a g^{-1} = b` for square-zero `a, b` of equal rank.
///
/// With `b = u a v`, `fR = rAnn(a)`, `e ≤ f` with `eR = aR`,
/// `f~ = v^{-1} f v`, `e~ ≤ f~` with `e~R = bR` and `w (f-e) w~ = f~ - e~`,
/// the conjugator is `g = v^{-1}(1-f) + w(f-e) + ue`.
pub fn conjugate_nilpotents(a: &TwoNilpotent, b: &TwoNilpotent) -> Result<Matrix> {
    let (am, bm) = (a.matrix(), b.matrix());
    am.check_compatible(bm)?;
    let (field, n) = (am.field(), am.n());
    let (u, v) = rank_factorize(am, bm)?;
    let v_inv = v.inverse()?;
    let zero = Idempotent::zero(field, n);
    let f = r_ann(am).idempotent_generator();
    let e = idempotent_between(&zero, &f, &RightIdeal::of_matrix(am))?;
    let f_t = Idempotent::new(v_inv.mul(f.matrix()).mul(&v))?;
    let e_t = idempotent_between(&zero, &f_t, &RightIdeal::of_matrix(bm))?;
    let f_minus_e = f.matrix().sub(e.matrix());
    let (w, _) = rank_factorize(&f_minus_e, &f_t.matrix().sub(e_t.matrix()))?;
    let g = v_inv
        .mul(&one(field, n).sub(f.matrix()))
        .add(&w.mul(&f_minus_e))
        .add(&u.mul(e.matrix()));
    verify_conjugator(&g, am, bm)?;
    Ok(g)
}

fn require_char_not_two(field: Field) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::WrongCharacteristic(
            "needs characteristic other than 2".into(),
        ));
    }
    Ok(())
}

fn require_char_two(field: Field) -> Result<()> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic("needs characteristic 2".into()));
    }
    Ok(())
}

/// `e = (1 + u)/2` (characteristic other than 2).
pub fn idempotent_of_involution(u: &Involution) -> Result<Idempotent> {
    let m = u.matrix();
    let field = m.field();
    require_char_not_two(field)?;
    let half = field.inv(&field.from_i64(2)).expect("2 is invertible");
    Idempotent::new(one(field, m.n()).add(m).scale(&half))
}

/// `u = 2e - 1` (characteristic other than 2).
pub fn involution_of_idempotent(e: &Idempotent) -> Result<Involution> {
    let field = e.field();
    require_char_not_two(field)?;
    Involution::new(e.matrix().scale(&field.from_i64(2)).sub(&one(field, e.n())))
}

/// `x = 1 + u` (characteristic 2).
pub fn nilpotent_of_involution(u: &Involution) -> Result<TwoNilpotent> {
    let m = u.matrix();
    require_char_two(m.field())?;
    TwoNilpotent::new(one(m.field(), m.n()).add(m))
}

/// `u = 1 + x` (characteristic 2).
pub fn involution_of_nilpotent(x: &TwoNilpotent) -> Result<Involution> {
    let m = x.matrix();
    require_char_two(m.field())?;
    Involution::new(one(m.field(), m.n()).add(m))
}

/// Invertible `g` with `g a g^{-1} = b` for involutions with
/// `rk(1-a) = rk(1-b)`, through idempotents or square-zero elements depending
/// on the characteristic.
pub fn conjugate_involutions(a: &Involution, b: &Involution) -> Result<Matrix> {
    let (am, bm) = (a.matrix(), b.matrix());
    am.check_compatible(bm)?;
    let n = am.n();
    let (da, db) = (a.defect(), b.defect());
    if da != db {
        let scale = Rational64::from_integer(n as i64);
        return Err(Error::RankMismatch(
            (da * scale).to_integer() as usize,
            (db * scale).to_integer() as usize,
        ));
    }
    if am.field().characteristic() == 2 {
        conjugate_nilpotents(&nilpotent_of_involution(a)?, &nilpotent_of_involution(b)?)
    } else {
        conjugate_idempotents(&idempotent_of_involution(a)?, &idempotent_of_involution(b)?)
    }
}

/// Involutions `g, h` with `gh = a` and `rk(1-g) = rk(1-h)` equal to `1/2`
/// (characteristic other than 2) or `1/4` (characteristic 2).
///
/// In characteristic other than 2, with `a = 2e - 1`, both `rank e` and
/// `n - rank e` must be even; this is also necessary, since `det a` is
/// `(-1)^{n - rank e}` while `det(gh) = 1`. In characteristic 2 the side must
/// be divisible by 4.
pub fn split_involution(a: &Involution) -> Result<(Involution, Involution)> {
    let m = a.matrix();
    let (g, h) = if m.field().characteristic() == 2 {
        split_char_two(m)?
    } else {
        split_odd(a)?
    };
    let (g, h) = (Involution::new(g)?, Involution::new(h)?);
    let target = if m.field().characteristic() == 2 {
        Rational64::new(1, 4)
    } else {
        Rational64::new(1, 2)
    };
    if g.matrix().mul(h.matrix()) != *m || g.defect() != target || h.defect() != target {
        return Err(Error::Precondition(
            "involution split verification failed".into(),
        ));
    }
    Ok((g, h))
}

fn split_odd(a: &Involution) -> Result<(Matrix, Matrix)> {
    let e = idempotent_of_involution(a)?;
    let (field, n) = (e.field(), e.n());
    let k = e.rank();
    if k % 2 != 0 || (n - k) % 2 != 0 {
        return Err(Error::RankNotRepresentable(format!(
            "rank(e) = {k} and n - rank(e) = {} must both be even",
            n - k
        )));
    }
    let zero = Idempotent::zero(field, n);
    let f = interpolate_idempotent(&zero, &e, Rational64::new((k / 2) as i64, n as i64))?;
    let fp = interpolate_idempotent(
        &zero,
        &e.complement(),
        Rational64::new(((n - k) / 2) as i64, n as i64),
    )?;
    let two = field.from_i64(2);
    let id = one(field, n);
    let g = e
        .matrix()
        .sub(f.matrix())
        .add(fp.matrix())
        .scale(&two)
        .sub(&id);
    let h = id.sub(f.matrix()).sub(fp.matrix()).scale(&two).sub(&id);
    Ok((g, h))
}

/// Adapted basis for a square-zero `b`: columns `[W | V | F]` with
/// `b W = V` a basis of `im b` and `ker b = V ⊕ F`.
fn square_zero_basis(b: &Matrix) -> Result<(Matrix, usize, usize)> {
    let (field, n) = (b.field(), b.n());
    let kernel = r_ann(b);
    let zero = RightIdeal::zero(field, n);
    let w = relative_complement_basis(&zero, &kernel, &RightIdeal::full(field, n))?;
    let v = b.mul(&w);
    let image = RightIdeal::from_columns(&v);
    let f = relative_complement_basis(&zero, &image, &kernel)?;
    let r = w.cols();
    let s = f.cols();
    Ok((w.hcat(&v).hcat(&f), r, s))
}

fn relative_complement_basis(x: &RightIdeal, y: &RightIdeal, z: &RightIdeal) -> Result<Matrix> {
    Ok(crate::lattice::relative_complement(x, y, z)?
        .basis()
        .clone())
}

/// `P C P^{-1}` for a coordinate matrix `C` given by its nonzero entries.
fn in_basis(p: &Matrix, p_inv: &Matrix, entries: &[(usize, usize)]) -> Matrix {
    let field = p.field();
    let n = p.rows();
    let mut c = Matrix::zeros(field, n, n);
    for &(i, j) in entries {
        c.set(i, j, field.one());
    }
    p.mul(&c).mul(p_inv)
}

fn split_char_two(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let (field, n) = (a.field(), a.n());
    let id = one(field, n);
    let b = id.add(a);
    let (p, r, s) = square_zero_basis(&b)?;
    let p_inv = p.inverse()?;
    if r % 2 == 0 && s % 4 == 0 {
        let half = r / 2;
        let quarter = s / 4;
        let projector = |range: std::ops::Range<usize>| -> Matrix {
            let entries: Vec<(usize, usize)> = range.map(|i| (i, i)).collect();
            in_basis(&p, &p_inv, &entries)
        };
        let e0 = projector(0..half);
        let e1 = projector(half..r);
        let f_base = 2 * r;
        let f0 = projector(f_base..f_base + quarter);
        let swap: Vec<(usize, usize)> = (0..quarter)
            .flat_map(|i| {
                let (x, y) = (f_base + i, f_base + quarter + i);
                [(x, y), (y, x)]
            })
            .chain((f_base + 2 * quarter..n).map(|i| (i, i)))
            .collect();
        let u = in_basis(&p, &p_inv, &swap);
        let uf0 = u.mul(&f0);
        let g0 = id.add(&uf0).add(&b.mul(&e0));
        let g1 = id.add(&uf0).add(&b.mul(&e1));
        return Ok((g0, g1));
    }
    if n % 4 != 0 {
        return Err(Error::RankNotRepresentable(format!(
            "quarter-rank involutions need 4 | n, got n = {n}"
        )));
    }
    let q = n / 4;
    let (r0, t, tp, d) = quarter_parameters(r, s, q).ok_or_else(|| {
        Error::RankNotRepresentable(format!(
            "no quarter-rank split for rank(1+a) = {r}, n = {n}"
        ))
    })?;
    let (w0, v0, f0) = (0, r, 2 * r);
    let mut entries = Vec::new();
    for i in 0..r0 {
        entries.push((v0 + i, w0 + i));
    }
    for j in 0..d {
        entries.push((f0 + d + j, f0 + j));
    }
    for k in 0..t {
        entries.push((v0 + r0 + k, f0 + 2 * d + k));
    }
    for k in 0..tp {
        entries.push((v0 + k, f0 + 2 * d + t + k));
    }
    let y = in_basis(&p, &p_inv, &entries);
    Ok((id.add(&y), id.add(&b).add(&y)))
}

/// Parameters `(r0, t, t', d)` of a square-zero `y` with `yb = by = 0` and
/// `rank y = rank(b + y) = q`; see [`split_involution`].
fn quarter_parameters(r: usize, s: usize, q: usize) -> Option<(usize, usize, usize, usize)> {
    for r0 in 0..=r {
        for d in 0..=s / 2 {
            if r0 + d > q || r - r0 + d > q {
                continue;
            }
            let t = q - r0 - d;
            let tp = q - (r - r0) - d;
            if t <= r - r0 && tp <= r0 && t + tp + 2 * d <= s {
                return Some((r0, t, tp, d));
            }
        }
    }
    None
}

/// `φ(x) = ax + xa^{-1} + 1 - x - axa^{-1}` for an idempotent `x ≤ e`, where
/// `e ⊥ aea^{-1}`.
pub fn boolean_embed(e: &Idempotent, a: &Matrix, x: &Idempotent) -> Result<Matrix> {
    e.matrix().check_compatible(a)?;
    e.matrix().check_compatible(x.matrix())?;
    let a_inv = a.inverse()?;
    let conj = Idempotent::new(a.mul(e.matrix()).mul(&a_inv))?;
    if !e.orthogonal(&conj) {
        return Err(Error::Precondition(
            "e and aea^{-1} are not orthogonal".into(),
        ));
    }
    if !x.leq(e) {
        return Err(Error::Precondition("x is not below e".into()));
    }
    let xm = x.matrix();
    let ax = a.mul(xm);
    Ok(ax
        .add(&xm.mul(&a_inv))
        .add(&one(a.field(), a.n()))
        .sub(xm)
        .sub(&ax.mul(&a_inv)))
}

/// `U = s12 + s21 - s33` inside the corner `unit R unit`, for orthogonal
/// `e1, e2 ≤ unit` of a third of its rank each; returned as a corner element
/// (zero outside the corner).
pub(crate) fn swap_in_corner(
    unit: &Idempotent,
    e1: &Idempotent,
    e2: &Idempotent,
) -> Result<Matrix> {
    let e3 = unit.difference(&e1.orthogonal_sum(e2)?)?;
    let fam = complete_matrix_units_in(unit, &[e1.clone(), e2.clone(), e3])?;
    Ok(fam.unit(0, 1).add(fam.unit(1, 0)).sub(fam.unit(2, 2)))
}

/// Involution `u` of determinant one with `u e1 u = e2`, the image of
/// `[[0,1,0],[1,0,0],[0,0,-1]]` under a matrix-unit embedding with
/// `s11 = e1`, `s22 = e2`.
pub fn swap_involution(e1: &Idempotent, e2: &Idempotent) -> Result<Involution> {
    e1.matrix().check_compatible(e2.matrix())?;
    let n = e1.n();
    if !n.is_multiple_of(3) {
        return Err(Error::RankNotRepresentable(format!(
            "3 does not divide {n}"
        )));
    }
    if e1.rank() * 3 != n || e2.rank() * 3 != n {
        return Err(Error::Precondition(
            "swap needs rk(e1) = rk(e2) = 1/3".into(),
        ));
    }
    if !e1.orthogonal(e2) {
        return Err(Error::Precondition("swap needs e1 ⊥ e2".into()));
    }
    let u = swap_in_corner(&Idempotent::one(e1.field(), n), e1, e2)?;
    let u = Involution::new(u)?;
    debug_assert!(u.matrix().mul(e1.matrix()).mul(u.matrix()) == *e2.matrix());
    Ok(u)
}

/// Involution `v` of determinant one supported on `e + f` with `vfv ≤ e`,
/// for orthogonal nonzero `e, f` with `rk(e) = 2 rk(f)`.
pub fn shift_involution(e: &Idempotent, f: &Idempotent) -> Result<Involution> {
    e.matrix().check_compatible(f.matrix())?;
    if f.rank() == 0 || e.rank() == 0 {
        return Err(Error::Precondition(
            "shift needs nonzero idempotents".into(),
        ));
    }
    if e.rank() != 2 * f.rank() {
        return Err(Error::Precondition("shift needs rk(e) = 2 rk(f)".into()));
    }
    let corner = e.orthogonal_sum(f)?;
    let (field, n) = (e.field(), e.n());
    let e_small = interpolate_idempotent(
        &Idempotent::zero(field, n),
        e,
        Rational64::new(f.rank() as i64, n as i64),
    )?;
    let u = swap_in_corner(&corner, f, &e_small)?;
    let v = u.add(corner.complement().matrix());
    let v = Involution::new(v)?;
    let moved = Idempotent::new(v.matrix().mul(f.matrix()).mul(v.matrix()))?;
    if !moved.leq(e) || !v.matrix().det().is_one() {
        return Err(Error::Precondition(
            "shift involution verification failed".into(),
        ));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);
    const F5: Field = Field::Prime(5);

    fn inv(field: Field, rows: &[&[i64]]) -> Involution {
        Involution::new(Matrix::from_i64(field, rows)).unwrap()
    }

    #[test]
    fn rank_factorize_examples() {
        let a = Matrix::from_i64(F2, &[[1, 0], [0, 0]]);
        let b = Matrix::from_i64(F2, &[[0, 1], [0, 0]]);
        let (u, v) = rank_factorize(&a, &b).unwrap();
        assert_eq!(u.mul(&a).mul(&v), b);
        assert!(matches!(
            rank_factorize(&a, &Matrix::identity(F2, 2)),
            Err(Error::RankMismatch(1, 2))
        ));
    }

    #[test]
    fn idempotent_conjugation_examples() {
        let e = Idempotent::coordinate(F3, 2, &[0]);
        let f = Idempotent::coordinate(F3, 2, &[1]);
        assert_eq!(
            conjugate_idempotents(&e, &f).unwrap(),
            Matrix::from_i64(F3, &[[0, 1], [1, 0]])
        );
        assert!(conjugate_idempotents(&e, &e).unwrap().is_identity());
        assert!(conjugate_idempotents(&e, &Idempotent::one(F3, 2)).is_err());
    }

    #[test]
    fn nilpotent_conjugation_examples() {
        let z = TwoNilpotent::new(Matrix::zeros(F3, 2, 2)).unwrap();
        assert!(conjugate_nilpotents(&z, &z).unwrap().is_identity());
        let a = TwoNilpotent::new(Matrix::from_i64(F3, &[[0, 1], [0, 0]])).unwrap();
        let b = TwoNilpotent::new(Matrix::from_i64(F3, &[[0, 0], [1, 0]])).unwrap();
        let g = conjugate_nilpotents(&a, &b).unwrap();
        assert_eq!(g.mul(a.matrix()).mul(&g.inverse().unwrap()), *b.matrix());
        assert!(conjugate_nilpotents(&a, &z).is_err());
    }

    #[test]
    fn correspondences() {
        let one3 = Involution::new(Matrix::identity(F3, 2)).unwrap();
        assert!(idempotent_of_involution(&one3)
            .unwrap()
            .matrix()
            .is_identity());
        let u = inv(F5, &[&[1, 0], &[0, -1]]);
        assert_eq!(
            idempotent_of_involution(&u).unwrap(),
            Idempotent::coordinate(F5, 2, &[0])
        );
        let v = inv(F2, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            nilpotent_of_involution(&v).unwrap().matrix(),
            &Matrix::from_i64(F2, &[[0, 1], [0, 0]])
        );
        assert!(idempotent_of_involution(&v).is_err());
        assert!(nilpotent_of_involution(&u).is_err());
    }

    #[test]
    fn involution_conjugation_examples() {
        let a = inv(F3, &[&[-1, 0], &[0, 1]]);
        let b = inv(F3, &[&[1, 0], &[0, -1]]);
        assert_eq!(
            conjugate_involutions(&a, &b).unwrap(),
            Matrix::from_i64(F3, &[[0, 1], [1, 0]])
        );
        let one = Involution::new(Matrix::identity(F3, 2)).unwrap();
        assert!(conjugate_involutions(&a, &one).is_err());
    }

    #[test]
    fn split_examples() {
        let one = Involution::new(Matrix::identity(F3, 4)).unwrap();
        let (g, h) = split_involution(&one).unwrap();
        assert_eq!(g, h);
        let minus = Involution::new(Matrix::identity(F3, 2).neg()).unwrap();
        let (g, h) = split_involution(&minus).unwrap();
        assert_eq!(g.matrix().mul(h.matrix()), *minus.matrix());
        let mut m = Matrix::identity(F2, 4);
        m.set(0, 1, F2.one());
        let a = Involution::new(m).unwrap();
        let (g, h) = split_involution(&a).unwrap();
        assert_eq!(g.matrix().mul(h.matrix()), *a.matrix());
        assert_eq!(g.defect(), Rational64::new(1, 4));
        let odd = inv(F3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        assert!(matches!(
            split_involution(&odd),
            Err(Error::RankNotRepresentable(_))
        ));
    }

    #[test]
    fn boolean_embed_examples() {
        let e = Idempotent::coordinate(F3, 2, &[0]);
        let a = Matrix::from_i64(F3, &[[0, 1], [1, 0]]);
        assert!(boolean_embed(&e, &a, &Idempotent::zero(F3, 2))
            .unwrap()
            .is_identity());
        let phi = boolean_embed(&e, &a, &e).unwrap();
        assert_eq!(phi, a);
        assert!(phi.is_involution());
        assert!(boolean_embed(&e, &Matrix::identity(F3, 2), &e).is_err());
    }

    #[test]
    fn swap_examples() {
        let e1 = Idempotent::coordinate(F5, 3, &[0]);
        let e2 = Idempotent::coordinate(F5, 3, &[1]);
        let u = swap_involution(&e1, &e2).unwrap();
        assert_eq!(
            u.matrix(),
            &Matrix::from_i64(F5, &[[0, 1, 0], [1, 0, 0], [0, 0, -1]])
        );
        let e4 = Idempotent::coordinate(F5, 4, &[0]);
        assert!(swap_involution(&e4, &Idempotent::coordinate(F5, 4, &[1])).is_err());
    }

    #[test]
    fn shift_examples() {
        let e = Idempotent::coordinate(F3, 3, &[0, 1]);
        let f = Idempotent::coordinate(F3, 3, &[2]);
        let v = shift_involution(&e, &f).unwrap();
        let moved = Idempotent::new(v.matrix().mul(f.matrix()).mul(v.matrix())).unwrap();
        assert!(moved.leq(&e));
        assert!(shift_involution(&e, &Idempotent::zero(F3, 3)).is_err());
        assert!(shift_involution(&f, &f).is_err());
    }
}
