//! Corner subgroups `Γ(e)`, support shrinking and self-certifying
//! factorizations: four involutions, a single commutator, and the truncated
//! locally-special decomposition.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use rand::Rng;

use crate::conjugacy::shift_involution;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lattice::{
    dyadic_chain, idempotent_between, interpolate_idempotent, r_ann, Idempotent, RightIdeal,
};
use crate::matricial::{approx_special_at_level, TowerElement};
use crate::matrix::Matrix;
use crate::rng::RandomSource;

/// Default attempt budget of [`commutator_decompose`].
pub const DEFAULT_COMMUTATOR_BUDGET: usize = 64;
/// Default attempt budget of [`four_involutions`].
pub const DEFAULT_INVOLUTION_BUDGET: usize = 256;
/// Largest solution space enumerated exhaustively, and the number of random
/// samples drawn from larger ones.
const SOLUTION_SAMPLES: u64 = 2048;
/// Largest number of tuples [`word_image`] evaluates.
pub const ENUMERATION_GUARD: u64 = 1_000_000;

/// Whether `m` lies in `Γ(e) = GL(eRe) + (1-e)`.
pub fn in_corner_group(e: &Idempotent, m: &Matrix) -> bool {
    if e.matrix().check_compatible(m).is_err() {
        return false;
    }
    let comp = e.complement();
    m.mul(e.matrix()) == e.matrix().mul(m)
        && m.mul(comp.matrix()) == *comp.matrix()
        && m.is_invertible()
}

/// An element of `Γ(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerUnit {
    e: Idempotent,
    matrix: Matrix,
}

fn corner_frame(e: &Idempotent) -> (Matrix, Matrix) {
    let image = e.image();
    (
        image.basis().clone(),
        e.matrix().select_rows(&image.pivots()),
    )
}

impl CornerUnit {
    /// Wraps `m`, checking membership in `Γ(e)`.
    pub fn new(e: Idempotent, m: Matrix) -> Result<Self> {
        if !in_corner_group(&e, &m) {
            return Err(Error::Precondition(
                "matrix is not in the corner group of the idempotent".into(),
            ));
        }
        Ok(CornerUnit { e, matrix: m })
    }

    /// The identity of `Γ(e)`.
    pub fn identity(e: Idempotent) -> Self {
        let m = Matrix::identity(e.field(), e.n());
        CornerUnit { e, matrix: m }
    }

    /// `h ↦ h + 1 - e` for a unit `h` of `eRe`.
    pub fn from_corner(e: Idempotent, h: &Matrix) -> Result<Self> {
        e.matrix().check_compatible(h)?;
        if e.matrix().mul(h).mul(e.matrix()) != *h {
            return Err(Error::Precondition(
                "element does not lie in the corner ring".into(),
            ));
        }
        let m = h.add(e.complement().matrix());
        Self::new(e, m)
    }

    /// Element of `Γ(e)` with the given `rank(e) x rank(e)` coordinates in the
    /// canonical frame of `eR`.
    pub fn from_corner_coordinates(e: Idempotent, c: &Matrix) -> Result<Self> {
        let (b, rows) = corner_frame(&e);
        if c.rows() != b.cols() || c.cols() != b.cols() {
            return Err(Error::DimensionMismatch(
                "corner coordinates have the wrong size".into(),
            ));
        }
        let h = b.mul(c).mul(&rows);
        Self::from_corner(e, &h)
    }

    /// The idempotent `e`.
    pub fn e(&self) -> &Idempotent {
        &self.e
    }

    /// The ambient matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `a ↦ ae`, the corresponding unit of `eRe`.
    pub fn to_corner(&self) -> Matrix {
        self.matrix.mul(self.e.matrix())
    }

    /// Coordinates of `ae` in the canonical frame of `eR`.
    pub fn corner_coordinates(&self) -> Matrix {
        let (b, rows) = corner_frame(&self.e);
        rows.mul(&self.matrix).mul(&b)
    }

    /// Determinant of the corner part.
    pub fn corner_det(&self) -> Scalar {
        self.corner_coordinates().det()
    }

    /// Group product inside `Γ(e)`.
    pub fn mul(&self, other: &CornerUnit) -> Result<CornerUnit> {
        if self.e != other.e {
            return Err(Error::Precondition(
                "corner units over different idempotents".into(),
            ));
        }
        Ok(CornerUnit {
            e: self.e.clone(),
            matrix: self.matrix.mul(&other.matrix),
        })
    }
}

/// Greedy complement of `base` inside `within`, preferring columns of
/// `preferred` before the canonical basis of `within`.
fn preferred_complement(base: &RightIdeal, preferred: &Matrix, within: &RightIdeal) -> Matrix {
    let (field, n) = (within.field(), within.n());
    let mut out = Matrix::zeros(field, n, 0);
    let mut span = base.clone();
    let candidates = preferred.hcat(within.basis());
    for j in 0..candidates.cols() {
        if span.dim() == within.dim() {
            break;
        }
        let v = candidates.column(j);
        if !span.contains_vector(&v) {
            let col = Matrix::from_columns(field, n, &[v]);
            out = out.hcat(&col);
            span = RightIdeal::from_columns(&span.basis().hcat(&col));
        }
    }
    out
}

/// Some `f ≤ e` with `a ∈ Γ(f)` and `rk(f) ≤ 2 rk(1-a)`.
///
/// `e'` is the idempotent onto `rAnn(e-a) ∩ eR` whose kernel inside `eR` is
/// spanned first by `(1-a)R`, and `f` is the idempotent between `e - e'` and
/// `e` with `fR = (e-e')R + (1-a)R`.
pub fn shrink_support(a: &CornerUnit) -> Result<Idempotent> {
    let e = a.e();
    let (field, n) = (e.field(), e.n());
    let one = Matrix::identity(field, n);
    let defect = one.sub(a.matrix());
    let fixed = r_ann(&e.matrix().sub(a.matrix())).intersect(&e.image())?;
    let moving = preferred_complement(
        &fixed,
        &RightIdeal::of_matrix(&defect).basis().clone(),
        &e.image(),
    );
    let e_prime = Idempotent::from_decomposition(fixed.basis(), &moving.hcat(e.kernel().basis()))?;
    let lower = e.difference(&e_prime)?;
    let image = lower.image().sum(&RightIdeal::of_matrix(&defect))?;
    let f = idempotent_between(&lower, e, &image)?;
    if !f.leq(e) || !in_corner_group(&f, a.matrix()) || f.rank() > 2 * defect.rank() {
        return Err(Error::Precondition(
            "support shrinking verification failed".into(),
        ));
    }
    Ok(f)
}

/// Attempt budget and randomness for the width searches.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    max_attempts: usize,
    rng: RandomSource,
}

impl SearchBudget {
    /// Budget of `max_attempts ≥ 1` attempts driven by `seed`.
    pub fn new(max_attempts: usize, seed: u64) -> Result<Self> {
        if max_attempts == 0 {
            return Err(Error::Precondition(
                "budget must allow at least one attempt".into(),
            ));
        }
        Ok(SearchBudget {
            max_attempts,
            rng: RandomSource::new(seed),
        })
    }

    /// Maximal number of attempts.
    pub fn max_attempts(&self) -> usize {
        self.max_attempts
    }

    /// The generator.
    pub fn rng(&mut self) -> &mut RandomSource {
        &mut self.rng
    }
}

/// One stage `(e_i, f_i, a_i, b_i, v_i, u_i)` of a locally-special
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    /// `e_i`, of rank `2^{-i}`.
    pub e: Matrix,
    /// `f_i ≤ e_i`, of rank `2^{-(i+2)}`.
    pub f: Matrix,
    /// `a_i` (the target for `i = 1`).
    pub a: Matrix,
    /// Simply special `b_i` with `b_i^{-1} a_i ∈ Γ(f_i)`.
    pub b: Matrix,
    /// Involution `v_i ∈ Γ(e_{i+1} + f_i)` with `v_i f_i v_i ≤ e_{i+1}`.
    pub v: Matrix,
    /// `u_i = (b_i^{-1}a_i) v_i (b_i^{-1}a_i)^{-1}`.
    pub u: Matrix,
}

/// A self-certifying factorization of a target matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `target = j1 j2 j3 j4` with involutions `j_k`.
    FourInvolutions {
        /// The factored matrix.
        target: Matrix,
        /// The four involutions.
        factors: [Matrix; 4],
    },
    /// `target = X Y X^{-1} Y^{-1}`.
    Commutator {
        /// The factored matrix (`diag(source, source)` when lifted).
        target: Matrix,
        /// `X`.
        x: Matrix,
        /// `Y`.
        y: Matrix,
        /// Original input when the target is its diagonal lift.
        source: Option<Matrix>,
    },
    /// Truncated locally-special decomposition.
    LocallySpecial {
        /// The factored matrix `a = a_1`.
        target: Matrix,
        /// Stage records `1..=t`.
        stages: Vec<StageRecord>,
        /// `e_{t+1}`.
        tail: Matrix,
        /// `a_{t+1}`, supported on `v_t f_t v_t`.
        residual: CornerUnit,
    },
}

impl Certificate {
    /// Kind tag used in the file format.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::FourInvolutions { .. } => "four-involutions",
            Certificate::Commutator { .. } => "commutator",
            Certificate::LocallySpecial { .. } => "locally-special",
        }
    }

    /// The factored matrix.
    pub fn target(&self) -> &Matrix {
        match self {
            Certificate::FourInvolutions { target, .. }
            | Certificate::Commutator { target, .. }
            | Certificate::LocallySpecial { target, .. } => target,
        }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    /// Whether every relation holds.
    pub valid: bool,
    /// The first failing relation.
    pub reason: Option<String>,
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            None => write!(f, "valid"),
            Some(r) => write!(f, "invalid: {r}"),
        }
    }
}

fn fail(reason: impl Into<String>) -> std::result::Result<(), String> {
    Err(reason.into())
}

fn same_shape(target: &Matrix, ms: &[&Matrix]) -> std::result::Result<(), String> {
    if !target.is_square() {
        return fail("target is not square");
    }
    for m in ms {
        if target.check_compatible(m).is_err() {
            return fail("factor shape or field mismatch");
        }
    }
    Ok(())
}

fn idem(m: &Matrix, name: &str) -> std::result::Result<Idempotent, String> {
    Idempotent::new(m.clone()).map_err(|_| format!("{name} is not idempotent"))
}

fn check_four(target: &Matrix, factors: &[Matrix; 4]) -> std::result::Result<(), String> {
    same_shape(target, &factors.iter().collect::<Vec<_>>())?;
    for (k, j) in factors.iter().enumerate() {
        if !j.is_involution() {
            return fail(format!("factor {} is not an involution", k + 1));
        }
    }
    let prod = factors[0]
        .mul(&factors[1])
        .mul(&factors[2])
        .mul(&factors[3]);
    if prod != *target {
        return fail("product mismatch");
    }
    Ok(())
}

fn check_commutator(
    target: &Matrix,
    x: &Matrix,
    y: &Matrix,
    source: Option<&Matrix>,
) -> std::result::Result<(), String> {
    same_shape(target, &[x, y])?;
    let xi = x.inverse().map_err(|_| "X is not invertible".to_string())?;
    let yi = y.inverse().map_err(|_| "Y is not invertible".to_string())?;
    if x.mul(y).mul(&xi).mul(&yi) != *target {
        return fail("product mismatch");
    }
    if let Some(s) = source {
        if s.field() != target.field() || s.direct_sum(s) != *target {
            return fail("target is not the diagonal lift of the source");
        }
    }
    Ok(())
}

fn rank_is(e: &Idempotent, n: usize, denom_log: usize) -> bool {
    e.rank() << denom_log == n
}

fn check_locally_special(
    target: &Matrix,
    stages: &[StageRecord],
    tail: &Matrix,
    residual: &CornerUnit,
) -> std::result::Result<(), String> {
    if stages.is_empty() {
        return fail("no stages");
    }
    let (field, n) = (target.field(), target.n());
    let one = Matrix::identity(field, n);
    let mut es = Vec::with_capacity(stages.len() + 1);
    for (idx, s) in stages.iter().enumerate() {
        let i = idx + 1;
        same_shape(target, &[&s.e, &s.f, &s.a, &s.b, &s.v, &s.u])
            .map_err(|r| format!("stage {i}: {r}"))?;
        es.push(idem(&s.e, &format!("stage {i}: e"))?);
    }
    same_shape(target, &[tail, residual.matrix()])?;
    es.push(idem(tail, "tail idempotent")?);
    for (i, e) in es.iter().enumerate() {
        if !rank_is(e, n, i + 1) {
            return fail(format!("stage {}: rk(e) is not 2^-{}", i + 1, i + 1));
        }
        for (j, other) in es.iter().enumerate().skip(i + 1) {
            if !e.orthogonal(other) {
                return fail(format!("e_{} and e_{} are not orthogonal", i + 1, j + 1));
            }
        }
    }
    if stages[0].a != *target {
        return fail("stage 1: a_1 differs from the target");
    }
    let mut product = one.clone();
    for (idx, s) in stages.iter().enumerate() {
        let i = idx + 1;
        let at = |r: String| format!("stage {i}: {r}");
        let e = &es[idx];
        let e_next = &es[idx + 1];
        let f = idem(&s.f, &format!("stage {i}: f"))?;
        if !f.leq(e) {
            return fail(at("nesting f ≤ e fails".into()));
        }
        if !rank_is(&f, n, i + 2) {
            return fail(at(format!("rk(f) is not 2^-{}", i + 2)));
        }
        let corner = if i == 1 {
            Idempotent::one(field, n)
        } else {
            e.clone()
        };
        if i > 1 && !in_corner_group(e, &s.a) {
            return fail(at("a is not supported on e".into()));
        }
        if !in_corner_group(&corner, &s.b) {
            return fail(at("b is not supported on e".into()));
        }
        let b_unit = CornerUnit {
            e: corner,
            matrix: s.b.clone(),
        };
        if !b_unit.corner_det().is_one() {
            return fail(at("b is not simply special".into()));
        }
        let b_inv =
            s.b.inverse()
                .map_err(|_| at("b is not invertible".into()))?;
        let c = b_inv.mul(&s.a);
        if !in_corner_group(&f, &c) {
            return fail(at("support b^-1 a ∈ Γ(f) fails".into()));
        }
        if !s.v.is_involution() {
            return fail(at("v is not an involution".into()));
        }
        let vcorner = e_next
            .orthogonal_sum(&f)
            .map_err(|_| at("e_next and f are not orthogonal".into()))?;
        if !in_corner_group(&vcorner, &s.v) {
            return fail(at("v is not supported on e_next + f".into()));
        }
        let v_unit = CornerUnit {
            e: vcorner,
            matrix: s.v.clone(),
        };
        if !v_unit.corner_det().is_one() {
            return fail(at("v is not simply special in its corner".into()));
        }
        let moved = idem(&s.v.mul(&s.f).mul(&s.v), &at("vfv".into()))?;
        if !moved.leq(e_next) {
            return fail(at("similar idempotents vfv ≤ e_next fails".into()));
        }
        let next_a = if idx + 1 < stages.len() {
            &stages[idx + 1].a
        } else {
            residual.matrix()
        };
        if s.v.mul(&c).mul(&s.v) != *next_a {
            return fail(at("connection a_next = v b^-1 a v fails".into()));
        }
        let c_inv = c
            .inverse()
            .map_err(|_| at("b^-1 a is not invertible".into()))?;
        if c.mul(&s.v).mul(&c_inv) != s.u {
            return fail(at("u differs from (b^-1 a) v (b^-1 a)^-1".into()));
        }
        let next_inv = next_a
            .inverse()
            .map_err(|_| at("a_next is not invertible".into()))?;
        if s.b.mul(&s.u).mul(&s.v) != s.a.mul(&next_inv) {
            return fail(at("telescoping b u v = a a_next^-1 fails".into()));
        }
        product = product.mul(&s.b).mul(&s.u).mul(&s.v);
        if idx + 1 == stages.len() {
            if residual.e() != &moved {
                return fail("residual support differs from v_t f_t v_t");
            }
            if !in_corner_group(residual.e(), residual.matrix()) {
                return fail("residual is not supported on its idempotent");
            }
        }
    }
    if product.mul(residual.matrix()) != *target {
        return fail("product mismatch");
    }
    Ok(())
}

/// Recomputes every relation of a certificate.
pub fn verify_certificate(c: &Certificate) -> Verification {
    let outcome = match c {
        Certificate::FourInvolutions { target, factors } => check_four(target, factors),
        Certificate::Commutator {
            target,
            x,
            y,
            source,
        } => check_commutator(target, x, y, source.as_ref()),
        Certificate::LocallySpecial {
            target,
            stages,
            tail,
            residual,
        } => check_locally_special(target, stages, tail, residual),
    };
    match outcome {
        Ok(()) => Verification {
            valid: true,
            reason: None,
        },
        Err(r) => Verification {
            valid: false,
            reason: Some(r),
        },
    }
}

fn certified(c: Certificate) -> Result<Certificate> {
    let v = verify_certificate(&c);
    match v.reason {
        None => Ok(c),
        Some(r) => Err(Error::Precondition(format!(
            "internal certificate check failed: {r}"
        ))),
    }
}

/// Basis of `{X : aX = Xb}` for square `a, b` of equal size.
pub fn sylvester_space(a: &Matrix, b: &Matrix) -> Vec<Matrix> {
    let (field, n) = (a.field(), a.n());
    let nn = n * n;
    let mut m = Matrix::zeros(field, nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let col = k * n + j;
                let v = field.add(m.get(row, col), a.get(i, k));
                m.set(row, col, v);
                let col = i * n + k;
                let v = field.sub(m.get(row, col), b.get(k, j));
                m.set(row, col, v);
            }
        }
    }
    let kernel = m.kernel_basis();
    (0..kernel.cols())
        .map(|c| {
            let v = kernel.column(c);
            let rows: Vec<Vec<Scalar>> = v.chunks(n).map(<[Scalar]>::to_vec).collect();
            Matrix::from_rows(field, rows)
        })
        .collect()
}

/// Similarity test: `a ~ b` iff `dim{X : aX = Xa}`, `dim{X : aX = Xb}` and
/// `dim{X : bX = Xb}` coincide.
pub fn similar(a: &Matrix, b: &Matrix) -> bool {
    if a.check_compatible(b).is_err() || !a.is_square() {
        return false;
    }
    let aa = sylvester_space(a, a).len();
    aa == sylvester_space(a, b).len() && aa == sylvester_space(b, b).len()
}

/// Linear combinations of `basis` in a fixed order: all of them when the
/// space has at most [`SOLUTION_SAMPLES`] elements, otherwise random ones.
fn combinations<'a, R: Rng + ?Sized>(
    field: Field,
    basis: &'a [Matrix],
    rng: &'a mut R,
) -> Box<dyn Iterator<Item = Matrix> + 'a> {
    let d = basis.len();
    let Some((first, _)) = basis.split_first() else {
        return Box::new(std::iter::empty());
    };
    let zero = Matrix::zeros(field, first.rows(), first.cols());
    let combine = move |coeffs: &[Scalar]| -> Matrix {
        basis.iter().zip(coeffs).fold(zero.clone(), |acc, (b, c)| {
            if c.is_zero() {
                acc
            } else {
                acc.add(&b.scale(c))
            }
        })
    };
    let total = field.order().and_then(|q| q.checked_pow(d as u32));
    match total {
        Some(t) if t <= SOLUTION_SAMPLES => {
            let q = field.order().expect("finite field");
            Box::new((1..t).map(move |mut idx| {
                let coeffs: Vec<Scalar> = (0..d)
                    .map(|_| {
                        let c = field.from_i64((idx % q) as i64);
                        idx /= q;
                        c
                    })
                    .collect();
                combine(&coeffs)
            }))
        }
        _ => Box::new((0..SOLUTION_SAMPLES).map(move |_| {
            let coeffs: Vec<Scalar> = (0..d).map(|_| field.random(rng)).collect();
            combine(&coeffs)
        })),
    }
}

/// Random involution: a random conjugate of `diag(-1,...,-1,1,...,1)`, or of
/// `1 + x` with `x` square-zero in characteristic 2.
pub fn random_involution<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    let mut d = Matrix::identity(field, n);
    if field.characteristic() == 2 {
        let r = rng.random_range(0..=n / 2);
        for i in 0..r {
            d.set(i, r + i, field.one());
        }
    } else {
        let k = rng.random_range(0..=n);
        for i in 0..k {
            d.set(i, i, field.from_i64(-1));
        }
    }
    let g = Matrix::random_invertible(field, n, rng);
    g.mul(&d).mul(&g.inverse().expect("invertible"))
}

/// An involution `V` with `V b V = b^{-1}`, when one is found.
///
/// For cyclic `b` with `char(b) = char(b^{-1})` the map `b^k v ↦ b^{-k} v`
/// on a cyclic vector `v` is such an involution. Otherwise the solutions of
/// `Vb = b^{-1}V` are searched directly.
fn involutive_intertwiner<R: Rng + ?Sized>(b: &Matrix, rng: &mut R) -> Result<Option<Matrix>> {
    let (field, n) = (b.field(), b.n());
    let b_inv = b.inverse()?;
    let krylov = |m: &Matrix, v: &Matrix| -> Matrix {
        let mut cols = Vec::with_capacity(n);
        let mut cur = v.clone();
        for _ in 0..n {
            cols.push(cur.column(0));
            cur = m.mul(&cur);
        }
        Matrix::from_columns(field, n, &cols)
    };
    let starts = (0..n)
        .map(|i| Matrix::unit(field, n, i, 0).select_columns(&[0]))
        .chain((0..4).map(|_| Matrix::random(field, n, 1, rng)))
        .collect::<Vec<_>>();
    for v in &starts {
        let p = krylov(b, v);
        if let Ok(p_inv) = p.inverse() {
            let candidate = krylov(&b_inv, v).mul(&p_inv);
            let works = candidate.is_involution() && candidate.mul(b).mul(&candidate) == b_inv;
            return Ok(works.then_some(candidate));
        }
    }
    if !similar(b, &b_inv) {
        return Ok(None);
    }
    let space = sylvester_space(&b_inv, b);
    let found = combinations(field, &space, rng).find(Matrix::is_involution);
    Ok(found)
}

/// A reflection `j = 1 - u φ^T` (a transvection in characteristic 2) with
/// `char(c j a)` self-reciprocal.
///
/// With `φ^T u = 2` fixed, the determinant of `c j a` is fixed and its
/// characteristic coefficients are affine in `u`, so the reciprocity
/// conditions `c_i = c_{n-i} / c_0` form a linear system in `u`.
fn reciprocal_reflection<R: Rng + ?Sized>(c: &Matrix, a: &Matrix, rng: &mut R) -> Option<Matrix> {
    let (field, n) = (a.field(), a.n());
    let phi = loop {
        let phi = Matrix::random(field, 1, n, rng);
        if !phi.is_zero() {
            break phi;
        }
    };
    let two = field.from_i64(2);
    let one = Matrix::identity(field, n);
    let reflection =
        |u: &[Scalar]| one.sub(&Matrix::from_columns(field, n, &[u.to_vec()]).mul(&phi));
    let sign = if n % 2 == 0 {
        field.one()
    } else {
        field.from_i64(-1)
    };
    let det_r = field.sub(&field.one(), &two);
    let c0 = field.mul(&sign, &field.mul(&c.det(), &field.mul(&det_r, &a.det())));
    let c0_inv = field.inv(&c0)?;
    let residual = |u: &[Scalar]| -> Vec<Scalar> {
        let coeffs = lower_coefficients(&c.mul(&reflection(u)).mul(a));
        let coeff = |i: usize| {
            if i == n {
                field.one()
            } else {
                coeffs[i].clone()
            }
        };
        (1..n)
            .map(|i| field.sub(&coeff(i), &field.mul(&coeff(n - i), &c0_inv)))
            .collect()
    };
    let zero = vec![field.zero(); n];
    let base = residual(&zero);
    let mut columns = Vec::with_capacity(n);
    for k in 0..n {
        let mut u = zero.clone();
        u[k] = field.one();
        let mut col: Vec<Scalar> = residual(&u)
            .iter()
            .zip(&base)
            .map(|(x, y)| field.sub(x, y))
            .collect();
        col.push(phi.get(0, k).clone());
        columns.push(col);
    }
    let lin = Matrix::from_columns(field, n, &columns);
    let mut rhs: Vec<Scalar> = base.iter().map(|x| field.neg(x)).collect();
    rhs.push(two);
    let particular = lin.solve_right(&Matrix::from_columns(field, n, &[rhs]))?;
    let kernel = lin.kernel_basis();
    let shift = kernel.mul(&Matrix::random(field, kernel.cols(), 1, rng));
    let u = particular.add(&shift).column(0);
    let j = reflection(&u);
    j.is_involution().then_some(j)
}

/// Involutions `j1, j2, j3, j4` with `j1 j2 j3 j4 = a`, for `det a = ±1`.
///
/// Each attempt picks an involution `j2` (the identity on the first attempt)
/// and a reflection `j1` making `B = j2 j1 a` have a self-reciprocal
/// characteristic polynomial, then looks for an involution `V` with
/// `V B V = B^{-1}`; when that fails it retries with a random pair `j1, j2`.
/// The factors are `(j1, j2, V, VB)`.
pub fn four_involutions(a: &Matrix, budget: &mut SearchBudget) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "four involutions need a square matrix".into(),
        ));
    }
    let (field, n) = (a.field(), a.n());
    let det = a.det();
    if !det.is_one() && det != field.from_i64(-1) {
        return Err(Error::Precondition("determinant must be 1 or -1".into()));
    }
    let one = Matrix::identity(field, n);
    if a.is_involution() {
        return certified(Certificate::FourInvolutions {
            target: a.clone(),
            factors: [a.clone(), one.clone(), one.clone(), one],
        });
    }
    for attempt in 0..budget.max_attempts {
        let j2 = if attempt == 0 {
            one.clone()
        } else {
            random_involution(field, n, &mut budget.rng)
        };
        let structured = reciprocal_reflection(&j2, a, &mut budget.rng).map(|j1| (j1, j2));
        let random = (
            random_involution(field, n, &mut budget.rng),
            random_involution(field, n, &mut budget.rng),
        );
        for (j1, j2) in structured.into_iter().chain(std::iter::once(random)) {
            let b = j2.mul(&j1).mul(a);
            if let Some(v) = involutive_intertwiner(&b, &mut budget.rng)? {
                let vb = v.mul(&b);
                return certified(Certificate::FourInvolutions {
                    target: a.clone(),
                    factors: [j1, j2, v, vb],
                });
            }
        }
    }
    Err(Error::BudgetExhausted {
        attempts: budget.max_attempts,
    })
}

/// Coefficients `x^0..x^{n-1}` of `char(m) - x^n`.
fn lower_coefficients(m: &Matrix) -> Vec<Scalar> {
    let p = m.characteristic_polynomial();
    (0..m.n()).map(|i| p.coeff(i)).collect()
}

/// Companion-type matrix `N + w e_n^T` (ones on the subdiagonal, last column
/// `w`).
fn companion_with(field: Field, w: &[Scalar]) -> Matrix {
    let n = w.len();
    let mut c = Matrix::zeros(field, n, n);
    for i in 1..n {
        c.set(i, i - 1, field.one());
    }
    for (i, wi) in w.iter().enumerate() {
        c.set(i, n - 1, wi.clone());
    }
    c
}

/// Some `C = N + w e_n^T` with `char(C a') = char(C)`.
///
/// Both characteristic polynomials are affine in `w` (the first by the
/// matrix determinant lemma, since `C a' = N a' + w e_n^T a'`), so the
/// condition is a linear system, solved here with a random kernel component.
fn matching_companion<R: Rng + ?Sized>(a: &Matrix, rng: &mut R) -> Option<Matrix> {
    let (field, n) = (a.field(), a.n());
    let diff = |w: &[Scalar]| -> Vec<Scalar> {
        let c = companion_with(field, w);
        let lhs = lower_coefficients(&c.mul(a));
        let rhs = lower_coefficients(&c);
        lhs.iter().zip(&rhs).map(|(x, y)| field.sub(x, y)).collect()
    };
    let zero = vec![field.zero(); n];
    let base = diff(&zero);
    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = zero.clone();
        w[i] = field.one();
        let d = diff(&w);
        columns.push(
            d.iter()
                .zip(&base)
                .map(|(x, y)| field.sub(x, y))
                .collect::<Vec<_>>(),
        );
    }
    let lin = Matrix::from_columns(field, n, &columns);
    let rhs = Matrix::from_columns(field, n, &[base.iter().map(|x| field.neg(x)).collect()]);
    let particular = lin.solve_right(&rhs)?;
    let kernel = lin.kernel_basis();
    let shift = kernel.mul(&Matrix::random(field, kernel.cols(), 1, rng));
    let w = particular.add(&shift).column(0);
    let c = companion_with(field, &w);
    c.is_invertible().then_some(c)
}

/// `X, Y` with `X Y X^{-1} Y^{-1} = a` for `det a = 1`.
///
/// A commutator exists as soon as some `Z = X^{-1}` has `Za ~ Z`, and then
/// `Y` is any invertible solution of the linear condition `XY = aYX`. Each
/// attempt takes a random conjugate `a' = g^{-1} a g` and a companion-type
/// `C` with `char(C a') = char(C)`, giving `Z = g C g^{-1}`; when that fails
/// it falls back to a uniformly random `X`. Over `M_2(F_2)` the target is
/// first lifted to `diag(a, a)` in `M_4(F_2)`.
pub fn commutator_decompose(a: &Matrix, budget: &mut SearchBudget) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "commutators need a square matrix".into(),
        ));
    }
    let (field, n) = (a.field(), a.n());
    if !a.det().is_one() {
        return Err(Error::Precondition("determinant must be 1".into()));
    }
    let (target, source) = if n == 2 && field == Field::Prime(2) {
        (a.direct_sum(a), Some(a.clone()))
    } else {
        (a.clone(), None)
    };
    let n = target.n();
    let one = Matrix::identity(field, n);
    if target.is_identity() {
        return certified(Certificate::Commutator {
            target,
            x: one.clone(),
            y: one,
            source,
        });
    }
    let try_x = |x: &Matrix, rng: &mut RandomSource| -> Result<Option<Matrix>> {
        let x_inv = x.inverse()?;
        let left = x_inv.mul(&target);
        if !similar(&left, &x_inv) {
            return Ok(None);
        }
        let space = sylvester_space(&left, &x_inv);
        let found = combinations(field, &space, rng).find(Matrix::is_invertible);
        Ok(found)
    };
    for _ in 0..budget.max_attempts {
        let g = Matrix::random_invertible(field, n, &mut budget.rng);
        let g_inv = g.inverse()?;
        let conjugated = g_inv.mul(&target).mul(&g);
        if let Some(c) = matching_companion(&conjugated, &mut budget.rng) {
            let x = g.mul(&c.inverse()?).mul(&g_inv);
            if let Some(y) = try_x(&x, &mut budget.rng)? {
                return certified(Certificate::Commutator {
                    target,
                    x,
                    y,
                    source,
                });
            }
        }
        let x = Matrix::random_invertible(field, n, &mut budget.rng);
        if let Some(y) = try_x(&x, &mut budget.rng)? {
            return certified(Certificate::Commutator {
                target,
                x,
                y,
                source,
            });
        }
    }
    Err(Error::BudgetExhausted {
        attempts: budget.max_attempts,
    })
}

/// Simply special `b ∈ Γ(e)` and `ē ≤ e` with `b^{-1}a ∈ Γ(ē)` and
/// `rk(ē) ≤ 2/n`, by scaling one corner row by the inverse corner determinant.
fn partial_approximation(e: &Idempotent, a: &Matrix) -> Result<(Matrix, Idempotent)> {
    let unit = CornerUnit::new(e.clone(), a.clone())?;
    let coords = TowerElement::new(unit.corner_coordinates())?;
    let level = coords.level();
    let fixed = approx_special_at_level(&coords, level)?;
    let b = CornerUnit::from_corner_coordinates(e.clone(), fixed.approximant.matrix())?;
    let c = CornerUnit::new(e.clone(), b.matrix().inverse()?.mul(a))?;
    let ebar = shrink_support(&c)?;
    Ok((b.matrix().clone(), ebar))
}

/// Truncated locally-special decomposition of `a ∈ GL_{2^k}(K)` with
/// `t ≥ 1` stages, `t ≤ k - 2`.
///
/// Stage `i` records `e_i, f_i, a_i, b_i, v_i, u_i` with `rk(e_i) = 2^{-i}`,
/// `rk(f_i) = 2^{-(i+2)}`, `b_i^{-1} a_i ∈ Γ(f_i)`, `v_i` the shift involution
/// of `f_i` into `e_{i+1}`, `a_{i+1} = v_i b_i^{-1} a_i v_i` and
/// `u_i = (b_i^{-1}a_i) v_i (b_i^{-1}a_i)^{-1}`, so that
/// `a = (Π b_i u_i v_i) a_{t+1}`.
pub fn locally_special_decompose(a: &Matrix, depth: usize) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "decomposition needs a square matrix".into(),
        ));
    }
    let (field, n) = (a.field(), a.n());
    if !n.is_power_of_two() {
        return Err(Error::Precondition(format!(
            "side {n} is not a power of two"
        )));
    }
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let k = n.trailing_zeros() as usize;
    if depth + 2 > k {
        return Err(Error::RankNotRepresentable(format!(
            "depth {depth} needs rank 2^-{} at side {n}",
            depth + 2
        )));
    }
    if !a.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let one = Idempotent::one(field, n);
    let (b1, ebar) = partial_approximation(&one, a)?;
    let f1 = interpolate_idempotent(&ebar, &one, Rational64::new(1, 8))?;
    let e1 = interpolate_idempotent(&f1, &one, Rational64::new(1, 2))?;
    let chain = dyadic_chain(&e1, depth + 1)?;
    let mut stages = Vec::with_capacity(depth);
    let (mut a_i, mut b_i, mut f_i) = (a.clone(), b1, f1);
    let mut residual = None;
    for i in 1..=depth {
        let e_i = &chain[i - 1];
        let e_next = &chain[i];
        let v = shift_involution(e_next, &f_i)?.into_matrix();
        let c = b_i.inverse()?.mul(&a_i);
        let u = c.mul(&v).mul(&c.inverse()?);
        let a_next = v.mul(&c).mul(&v);
        let moved = Idempotent::new(v.mul(f_i.matrix()).mul(&v))?;
        stages.push(StageRecord {
            e: e_i.matrix().clone(),
            f: f_i.matrix().clone(),
            a: a_i.clone(),
            b: b_i.clone(),
            v,
            u,
        });
        if i == depth {
            residual = Some(CornerUnit::new(moved, a_next.clone())?);
        } else {
            let (b_next, ebar) = partial_approximation(e_next, &a_next)?;
            let target = Rational64::new(chain[i + 1].rank() as i64, 2 * n as i64);
            f_i = interpolate_idempotent(&ebar, e_next, target)?;
            b_i = b_next;
        }
        a_i = a_next;
    }
    certified(Certificate::LocallySpecial {
        target: a.clone(),
        stages,
        tail: chain[depth].matrix().clone(),
        residual: residual.expect("at least one stage"),
    })
}

/// A group word: letters with nonzero integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<String>,
    syllables: Vec<(usize, i64)>,
}

impl Word {
    /// Parses a word such as `x y x^-1`, `x^2 y^3` or `[x,y]^2`; the empty
    /// string and `1` denote the empty word.
    pub fn parse(text: &str) -> Result<Word> {
        let mut word = Word {
            letters: Vec::new(),
            syllables: Vec::new(),
        };
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(word);
        }
        word.parse_into(trimmed)?;
        Ok(word)
    }

    fn letter_index(&mut self, name: &str) -> usize {
        match self.letters.iter().position(|l| l == name) {
            Some(i) => i,
            None => {
                self.letters.push(name.to_string());
                self.letters.len() - 1
            }
        }
    }

    /// An optional `^k` suffix starting at `chars[*i]`, defaulting to 1.
    fn exponent(chars: &[char], i: &mut usize, text: &str) -> Result<i64> {
        if *i >= chars.len() || chars[*i] != '^' {
            return Ok(1);
        }
        *i += 1;
        let s = *i;
        if *i < chars.len() && (chars[*i] == '-' || chars[*i] == '+') {
            *i += 1;
        }
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        let digits: String = chars[s..*i].iter().collect();
        digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))
    }

    fn parse_into(&mut self, text: &str) -> Result<()> {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' {
                i += 1;
            } else if c == '[' {
                let close = chars[i..]
                    .iter()
                    .position(|&ch| ch == ']')
                    .ok_or_else(|| Error::Parse("unclosed commutator bracket".into()))?
                    + i;
                let inner: String = chars[i + 1..close].iter().collect();
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Parse("commutator needs exactly two entries".into()));
                }
                let mut x = Word {
                    letters: self.letters.clone(),
                    syllables: Vec::new(),
                };
                x.parse_into(parts[0].trim())?;
                let mut y = Word {
                    letters: x.letters.clone(),
                    syllables: Vec::new(),
                };
                y.parse_into(parts[1].trim())?;
                self.letters = y.letters.clone();
                let inv = |s: &[(usize, i64)]| -> Vec<(usize, i64)> {
                    s.iter().rev().map(|&(l, e)| (l, -e)).collect()
                };
                let mut commutator: Vec<(usize, i64)> = x.syllables.clone();
                commutator.extend(y.syllables.iter().copied());
                commutator.extend(inv(&x.syllables));
                commutator.extend(inv(&y.syllables));
                i = close + 1;
                let exp = Self::exponent(&chars, &mut i, text)?;
                let block = if exp < 0 {
                    inv(&commutator)
                } else {
                    commutator
                };
                for _ in 0..exp.unsigned_abs() {
                    self.syllables.extend(block.iter().copied());
                }
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let exp = Self::exponent(&chars, &mut i, text)?;
                let l = self.letter_index(&name);
                if exp != 0 {
                    self.syllables.push((l, exp));
                }
            } else {
                return Err(Error::Parse(format!("unexpected character {c:?} in word")));
            }
        }
        Ok(())
    }

    /// Number of distinct letters.
    pub fn arity(&self) -> usize {
        self.letters.len()
    }

    /// Letters in order of first appearance.
    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Evaluates the word at invertible matrices (one per letter, with their
    /// inverses).
    pub fn evaluate(&self, values: &[(Matrix, Matrix)], one: &Matrix) -> Matrix {
        let mut out = one.clone();
        for &(l, e) in &self.syllables {
            let (m, inv) = &values[l];
            let base = if e > 0 { m } else { inv };
            out = out.mul(&base.pow(e.unsigned_abs()));
        }
        out
    }
}

fn gl_order(field: Field, n: usize) -> Option<u64> {
    let q = field.order()?;
    let qn = q.checked_pow(n as u32)?;
    let mut total = 1u64;
    let mut qi = 1u64;
    for _ in 0..n {
        total = total.checked_mul(qn - qi)?;
        qi = qi.checked_mul(q)?;
    }
    Some(total)
}

/// All of `GL_n(F_p)` in lexicographic order of entries.
pub fn enumerate_gl(field: Field, n: usize) -> Result<Vec<Matrix>> {
    let order = gl_order(field, n)
        .filter(|&o| o <= ENUMERATION_GUARD)
        .ok_or_else(|| {
            Error::EnumerationTooLarge(format!("GL_{n}({field}) exceeds {ENUMERATION_GUARD}"))
        })?;
    let q = field.order().expect("finite field");
    let all = q.pow((n * n) as u32);
    let mut out = Vec::with_capacity(order as usize);
    for idx in 0..all {
        let mut rem = idx;
        let mut data = vec![0i64; n * n];
        for slot in data.iter_mut().rev() {
            *slot = (rem % q) as i64;
            rem /= q;
        }
        let rows: Vec<Vec<i64>> = data.chunks(n).map(<[i64]>::to_vec).collect();
        let m = Matrix::from_i64(field, &rows);
        if m.is_invertible() {
            out.push(m);
        }
    }
    Ok(out)
}

fn residues(m: &Matrix) -> Vec<u32> {
    m.to_rows()
        .iter()
        .flatten()
        .map(|s| s.residue().expect("prime field"))
        .collect()
}

/// `{w(g_1, ..., g_m) : g_i ∈ GL_n(F_p)}` by exhaustive enumeration, sorted
/// lexicographically by entries.
pub fn word_image(word: &Word, n: usize, field: Field) -> Result<Vec<Matrix>> {
    if field == Field::Rationals {
        return Err(Error::Unsupported("word images need a finite field".into()));
    }
    let one = Matrix::identity(field, n);
    let m = word.arity();
    if m == 0 {
        return Ok(vec![one]);
    }
    let order = gl_order(field, n).unwrap_or(u64::MAX);
    let tuples = order.checked_pow(m as u32).unwrap_or(u64::MAX);
    if tuples > ENUMERATION_GUARD {
        return Err(Error::EnumerationTooLarge(format!(
            "{m}-tuples over GL_{n}({field}) exceed {ENUMERATION_GUARD}"
        )));
    }
    let group: Vec<(Matrix, Matrix)> = enumerate_gl(field, n)?
        .into_iter()
        .map(|g| {
            let inv = g.inverse().expect("invertible");
            (g, inv)
        })
        .collect();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut idx = vec![0usize; m];
    loop {
        let values: Vec<(Matrix, Matrix)> = idx.iter().map(|&i| group[i].clone()).collect();
        seen.insert(residues(&word.evaluate(&values, &one)));
        let mut pos = 0;
        loop {
            if pos == m {
                let rows = |v: &Vec<u32>| -> Vec<Vec<i64>> {
                    v.chunks(n)
                        .map(|c| c.iter().map(|&x| i64::from(x)).collect())
                        .collect()
                };
                return Ok(seen
                    .iter()
                    .map(|v| Matrix::from_i64(field, &rows(v)))
                    .collect());
            }
            idx[pos] += 1;
            if idx[pos] < group.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);
    const F5: Field = Field::Prime(5);

    #[test]
    fn corner_examples() {
        let one = Idempotent::one(F5, 2);
        let g = Matrix::from_i64(F5, &[[1, 2], [3, 4]]);
        let u = CornerUnit::new(one.clone(), g.clone()).unwrap();
        assert_eq!(u.to_corner(), g);
        let e = Idempotent::coordinate(F5, 2, &[0]);
        let h = Matrix::from_i64(F5, &[[2, 0], [0, 0]]);
        let u = CornerUnit::from_corner(e.clone(), &h).unwrap();
        assert_eq!(u.matrix(), &Matrix::from_i64(F5, &[[2, 0], [0, 1]]));
        assert_eq!(u.to_corner(), h);
        assert!(CornerUnit::new(e, g).is_err());
    }

    #[test]
    fn shrink_examples() {
        let one = Idempotent::one(F5, 4);
        let id = CornerUnit::identity(one.clone());
        assert_eq!(shrink_support(&id).unwrap().rank(), 0);
        let a = Matrix::diagonal(F5, &[2, 1, 1, 1].map(|v| F5.from_i64(v)));
        let f = shrink_support(&CornerUnit::new(one.clone(), a.clone()).unwrap()).unwrap();
        assert!(f.rank() <= 2);
        assert!(in_corner_group(&f, &a));
        let full = Matrix::scalar(F5, 4, F5.from_i64(2));
        let f = shrink_support(&CornerUnit::new(one, full).unwrap()).unwrap();
        assert_eq!(f.rank(), 4);
    }

    #[test]
    fn four_involution_examples() {
        let mut budget = SearchBudget::new(DEFAULT_INVOLUTION_BUDGET, 0).unwrap();
        let one = Matrix::identity(F5, 2);
        match four_involutions(&one, &mut budget).unwrap() {
            Certificate::FourInvolutions { factors, .. } => {
                assert!(factors.iter().all(Matrix::is_identity))
            }
            _ => unreachable!(),
        }
        let d = Matrix::from_i64(F5, &[[1, 0], [0, -1]]);
        match four_involutions(&d, &mut budget).unwrap() {
            Certificate::FourInvolutions { factors, .. } => {
                assert_eq!(factors[0], d);
                assert!(factors[1..].iter().all(Matrix::is_identity));
            }
            _ => unreachable!(),
        }
        let t = Matrix::from_i64(F5, &[[1, 1], [0, 1]]);
        let cert = four_involutions(&t, &mut budget).unwrap();
        assert!(verify_certificate(&cert).valid);
        assert!(four_involutions(&Matrix::from_i64(F5, &[[2, 0], [0, 1]]), &mut budget).is_err());
    }

    #[test]
    fn commutator_examples() {
        let mut budget = SearchBudget::new(DEFAULT_COMMUTATOR_BUDGET, 0).unwrap();
        let cert = commutator_decompose(&Matrix::identity(F3, 2), &mut budget).unwrap();
        assert!(verify_certificate(&cert).valid);
        let t = Matrix::from_i64(F3, &[[1, 1], [0, 1]]);
        assert!(verify_certificate(&commutator_decompose(&t, &mut budget).unwrap()).valid);
        let t2 = Matrix::from_i64(F2, &[[1, 1], [0, 1]]);
        match commutator_decompose(&t2, &mut budget).unwrap() {
            Certificate::Commutator { target, source, .. } => {
                assert_eq!(target.n(), 4);
                assert_eq!(source, Some(t2));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut budget = SearchBudget::new(DEFAULT_INVOLUTION_BUDGET, 1).unwrap();
        let t = Matrix::from_i64(F3, &[[1, 1], [0, 1]]);
        let mut cert = four_involutions(&t, &mut budget).unwrap();
        if let Certificate::FourInvolutions { target, .. } = &mut cert {
            *target = Matrix::from_i64(F3, &[[1, 2], [0, 1]]);
        }
        let v = verify_certificate(&cert);
        assert!(!v.valid);
        assert_eq!(v.reason.as_deref(), Some("product mismatch"));
    }

    #[test]
    fn locally_special_identity() {
        let one = Matrix::identity(F3, 8);
        let cert = locally_special_decompose(&one, 1).unwrap();
        let Certificate::LocallySpecial {
            stages, residual, ..
        } = &cert
        else {
            unreachable!()
        };
        assert!(stages[0].b.is_identity());
        assert_eq!(stages[0].u, stages[0].v);
        assert!(residual.matrix().is_identity());
        assert!(locally_special_decompose(&Matrix::identity(F3, 6), 1).is_err());
        assert!(locally_special_decompose(&one, 2).is_err());
    }

    #[test]
    fn locally_special_random() {
        let mut rng = RandomSource::new(3);
        let a = Matrix::random_invertible(F2, 16, &mut rng);
        let cert = locally_special_decompose(&a, 2).unwrap();
        let mut broken = cert.clone();
        if let Certificate::LocallySpecial { stages, .. } = &mut broken {
            stages[1].a = stages[1].a.mul(&stages[1].v);
        }
        let v = verify_certificate(&broken);
        assert!(!v.valid);
        assert!(v.reason.unwrap().starts_with("stage 1"));
    }

    #[test]
    fn word_examples() {
        let x = Word::parse("x").unwrap();
        assert_eq!(word_image(&x, 2, F2).unwrap().len(), 6);
        assert_eq!(
            word_image(&Word::parse("").unwrap(), 2, F3).unwrap(),
            vec![Matrix::identity(F3, 2)]
        );
        let c = Word::parse("[x,y]").unwrap();
        assert_eq!(c.arity(), 2);
        let image = word_image(&c, 2, F2).unwrap();
        assert_eq!(image.len(), 3);
        assert!(word_image(&c, 3, F3).is_err());
    }
}
