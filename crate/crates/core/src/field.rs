//! Prime fields `F_p` and the rationals, with exact scalar arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const PRIME_BOUND: u32 = 1 << 16;

/// Coefficient field of a matrix ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The prime field with the given modulus.
    Prime(u32),
    /// The field of rational numbers.
    Rationals,
}

/// An exact field element in canonical form.
///
/// Residues are kept in `0..p`; rationals are kept reduced with a positive
/// denominator (guaranteed by [`BigRational`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// A residue modulo the field's prime.
    Fp(u32),
    /// A rational number.
    Q(BigRational),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds `F_p`, checking that `p` is a prime below `2^16`.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= PRIME_BOUND || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a prime below 2^16")));
        }
        Ok(Field::Prime(p))
    }

    /// Characteristic of the field (`0` for the rationals).
    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(u64::from(*p)),
            Field::Rationals => None,
        }
    }

    /// All elements in increasing residue order, if the field is finite.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Some((0..*p).map(Scalar::Fp).collect()),
            Field::Rationals => None,
        }
    }

    /// Additive identity.
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Fp(0),
            Field::Rationals => Scalar::Q(BigRational::zero()),
        }
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp(1 % p),
            Field::Rationals => Scalar::Q(BigRational::one()),
        }
    }

    /// Image of an integer.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp(v.rem_euclid(i64::from(*p)) as u32),
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// The fraction `num/den` as a field element; fails when `den` vanishes in
    /// the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    u32::try_from(r).expect("residue below p")
                };
                let d = Scalar::Fp(reduce(den));
                let inv = self
                    .inv(&d)
                    .ok_or_else(|| Error::Parse(format!("denominator divisible by {p}")))?;
                Ok(self.mul(&Scalar::Fp(reduce(num)), &inv))
            }
            Field::Rationals => Ok(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            Field::Prime(p) => u64::from(*p),
            Field::Rationals => unreachable!("rational field has no modulus"),
        }
    }

    /// Sum of two elements.
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((u64::from(*x) + u64::from(*y)) % self.modulus()) as u32)
            }
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            _ => panic!("mixed scalar representations"),
        }
    }

    /// Difference of two elements.
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let m = self.modulus();
                Scalar::Fp(((u64::from(*x) + m - u64::from(*y)) % m) as u32)
            }
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x - y),
            _ => panic!("mixed scalar representations"),
        }
    }

    /// Product of two elements.
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((u64::from(*x) * u64::from(*y)) % self.modulus()) as u32)
            }
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            _ => panic!("mixed scalar representations"),
        }
    }

    /// `acc + a*b`.
    pub fn mul_add(&self, acc: &Scalar, a: &Scalar, b: &Scalar) -> Scalar {
        match (acc, a, b) {
            (Scalar::Fp(c), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(
                ((u64::from(*c) + u64::from(*x) * u64::from(*y)) % self.modulus()) as u32,
            ),
            _ => self.add(acc, &self.mul(a, b)),
        }
    }

    /// Additive inverse.
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Fp(x) => {
                let m = self.modulus();
                Scalar::Fp(((m - u64::from(*x)) % m) as u32)
            }
            Scalar::Q(x) => Scalar::Q(-x),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Fp(0) => None,
            Scalar::Fp(x) => {
                let m = self.modulus() as i64;
                let (mut r0, mut r1) = (m, i64::from(*x));
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Some(Scalar::Fp(t0.rem_euclid(m) as u32))
            }
            Scalar::Q(x) if x.is_zero() => None,
            Scalar::Q(x) => Some(Scalar::Q(x.recip())),
        }
    }

    /// Quotient `a / b`, `None` when `b` is zero.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// `a^e` for a nonnegative exponent.
    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Uniform residue over `F_p`; a small rational with numerator in
    /// `-4..=4` and denominator in `1..=3` over the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp(rng.random_range(0..*p)),
            Field::Rationals => {
                let num: i64 = rng.random_range(-4..=4);
                let den: i64 = rng.random_range(1..=3);
                Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
        }
    }

    /// Checks that a scalar uses this field's representation.
    pub fn owns(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(x)) => x < p,
            (Field::Rationals, Scalar::Q(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl Scalar {
    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp(x) => *x == 0,
            Scalar::Q(x) => x.is_zero(),
        }
    }

    /// Whether the element is one.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp(x) => *x == 1,
            Scalar::Q(x) => x.is_one(),
        }
    }

    /// Residue value, if this is a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Fp(x) => Some(*x),
            Scalar::Q(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Q(x) if x.denom().is_one() => write!(f, "{}", x.numer()),
            Scalar::Q(x) => {
                let sign = if x.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}/{}", x.numer().abs(), x.denom())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::prime(65521).is_ok());
        assert!(Field::prime(65537).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(91).is_err());
    }

    #[test]
    fn inverses_mod_p() {
        let f = Field::Prime(7);
        for x in 1..7 {
            let a = Scalar::Fp(x);
            let b = f.inv(&a).unwrap();
            assert!(f.mul(&a, &b).is_one());
        }
        assert!(f.inv(&Scalar::Fp(0)).is_none());
    }

    #[test]
    fn fractions() {
        let f = Field::Prime(5);
        let half = f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half, Scalar::Fp(3));
        assert!(f
            .from_fraction(&BigInt::from(1), &BigInt::from(10))
            .is_err());
        let q = Field::Rationals;
        let x = q
            .from_fraction(&BigInt::from(2), &BigInt::from(-4))
            .unwrap();
        assert_eq!(x.to_string(), "-1/2");
    }
}
