//! Univariate polynomials over a [`Field`], with factorization over prime
//! fields by square-free decomposition followed by Berlekamp splitting.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// A polynomial with coefficients listed from the constant term upwards.
///
/// The coefficient vector never ends in a zero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

/// Complete factorization `leading * prod(f_i^{m_i})` with monic, pairwise
/// distinct irreducible `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the factored polynomial.
    pub leading: Scalar,
    /// Monic irreducible factors with multiplicities, in canonical order.
    pub factors: Vec<(Polynomial, usize)>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients (constant term first).
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    /// Builds a polynomial from integer coefficients (constant term first).
    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The zero polynomial.
    pub fn zero(field: Field) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one(field: Field) -> Self {
        Self::constant(field, field.one())
    }

    /// A constant polynomial.
    pub fn constant(field: Field, c: Scalar) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `X`.
    pub fn x(field: Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `X^k`.
    pub fn monomial(field: Field, k: usize) -> Self {
        let mut c = vec![field.zero(); k + 1];
        c[k] = field.one();
        Self::new(field, c)
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.field
    }

    /// Coefficients from the constant term upwards.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether this is the constant `1`.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Divides by the leading coefficient; the zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Self {
        match self.field.inv(&self.leading()) {
            None => self.clone(),
            Some(inv) => self.scale(&inv),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.sub(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(&out[i + j], a, b);
            }
        }
        Self::new(f, out)
    }

    /// `self^e`.
    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division `self = q*d + r` with `deg r < deg d`.
    ///
    /// # Panics
    /// Panics if `d` is the zero polynomial.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(&d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dd], &lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, di));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    /// Remainder of division by `d`.
    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Whether `d` divides `self`.
    pub fn is_divisible_by(&self, d: &Self) -> bool {
        self.rem(d).is_zero()
    }

    /// Monic greatest common divisor (zero when both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self^e mod m` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Value at a scalar.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Value at a square matrix, by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(&Matrix::scalar(self.field, n, c.clone()));
        }
        acc
    }

    /// Factors a nonzero polynomial over a prime field into monic irreducible
    /// powers.
    pub fn factor(&self) -> Result<Factorization> {
        let p = match self.field {
            Field::Prime(p) => p,
            Field::Rationals => {
                return Err(Error::Unsupported(
                    "factorization over the rationals".into(),
                ))
            }
        };
        if self.is_zero() {
            return Err(Error::Precondition(
                "cannot factor the zero polynomial".into(),
            ));
        }
        let leading = self.leading();
        let mut factors: Vec<(Polynomial, usize)> = Vec::new();
        for (part, mult) in square_free_decomposition(&self.monic(), p) {
            for irr in berlekamp(&part, p) {
                match factors.iter_mut().find(|(g, _)| *g == irr) {
                    Some(entry) => entry.1 += mult,
                    None => factors.push((irr, mult)),
                }
            }
        }
        factors.sort_by(|a, b| canonical_order(&a.0, &b.0));
        Ok(Factorization { leading, factors })
    }

    /// Whether the polynomial is irreducible over its prime field.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(false);
        }
        let fac = self.factor()?;
        Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
    }
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, field: Field) -> Polynomial {
        self.factors.iter().fold(
            Polynomial::constant(field, self.leading.clone()),
            |acc, (g, m)| acc.mul(&g.pow(*m)),
        )
    }
}

/// Orders polynomials by degree, then by coefficients from the top down.
pub fn canonical_order(a: &Polynomial, b: &Polynomial) -> Ordering {
    a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| {
        for (x, y) in a.coeffs.iter().rev().zip(b.coeffs.iter().rev()) {
            let o = x.residue().cmp(&y.residue());
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Splits a monic polynomial over `F_p` into pairwise coprime square-free
/// parts `(g_i, i)` with `f = prod g_i^i`.
fn square_free_decomposition(f: &Polynomial, p: u32) -> Vec<(Polynomial, usize)> {
    let field = f.field;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let p_usize = p as usize;
        let root_coeffs: Vec<Scalar> = c.coeffs.iter().step_by(p_usize).cloned().collect();
        let root = Polynomial::new(field, root_coeffs);
        for (g, m) in square_free_decomposition(&root, p) {
            out.push((g, m * p_usize));
        }
    }
    out
}

/// Berlekamp splitting of a monic square-free polynomial over `F_p`.
fn berlekamp(f: &Polynomial, p: u32) -> Vec<Polynomial> {
    let field = f.field;
    let d = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f.clone()],
        Some(d) => d,
    };
    let xp = Polynomial::x(field).pow_mod(u64::from(p), f);
    let mut q = Matrix::zeros(field, d, d);
    let mut col = Polynomial::one(field);
    for i in 0..d {
        for r in 0..d {
            q.set(r, i, col.coeff(r));
        }
        col = col.mul(&xp).rem(f);
    }
    let kernel = q.sub(&Matrix::identity(field, d)).kernel_basis();
    let k = kernel.cols();
    let mut factors = vec![f.clone()];
    for j in 0..k {
        if factors.len() == k {
            break;
        }
        let v = Polynomial::new(field, (0..d).map(|r| kernel.get(r, j).clone()).collect());
        if v.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for h in factors {
            let mut rest = h;
            for s in 0..p {
                if rest.degree().unwrap_or(0) <= 1 {
                    break;
                }
                let shifted = v.sub(&Polynomial::constant(field, Scalar::Fp(s)));
                let g = rest.gcd(&shifted);
                if g.degree().unwrap_or(0) > 0 && g.degree() < rest.degree() {
                    rest = rest.div_exact(&g);
                    next.push(g);
                }
            }
            next.push(rest);
        }
        factors = next;
    }
    factors.iter().map(Polynomial::monic).collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{c}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, c: &[i64]) -> Polynomial {
        Polynomial::from_i64(Field::Prime(p), c)
    }

    #[test]
    fn division_identity() {
        let a = poly(7, &[3, 0, 5, 1, 2]);
        let d = poly(7, &[1, 4, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn factor_small_cases() {
        let f = poly(3, &[-1, 0, 1]).factor().unwrap();
        assert_eq!(
            f.factors,
            vec![(poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 1)]
        );
        let g = poly(2, &[0, 0, 1]).factor().unwrap();
        assert_eq!(g.factors, vec![(poly(2, &[0, 1]), 2)]);
        let h = poly(2, &[1, 1, 0, 0, 1]).factor().unwrap();
        assert_eq!(h.factors, vec![(poly(2, &[1, 1, 0, 0, 1]), 1)]);
    }

    #[test]
    fn factor_inseparable_power() {
        let x = Polynomial::x(Field::Prime(2));
        let f = x
            .add(&Polynomial::one(Field::Prime(2)))
            .pow(4)
            .mul(&x.pow(3));
        let fac = f.factor().unwrap();
        assert_eq!(fac.expand(Field::Prime(2)), f);
        assert_eq!(fac.factors.len(), 2);
    }

    #[test]
    fn rationals_unsupported() {
        let f = Polynomial::from_i64(Field::Rationals, &[1, 1]);
        assert!(matches!(f.factor(), Err(Error::Unsupported(_))));
    }
}
