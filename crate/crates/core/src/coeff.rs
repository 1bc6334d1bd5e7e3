//! Exact scalars: arbitrary-precision rationals for characteristic 0 and
//! least residues for prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("characteristic {0} is not 0 or a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
}

/// The coefficient field: `Q` (characteristic 0) or `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u32,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self, CoeffError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(CoeffError::BadCharacteristic(p));
        }
        Ok(FieldSpec { characteristic: p as u32 })
    }

    /// Accepts 0 or a prime.
    pub fn new(characteristic: u64) -> Result<Self, CoeffError> {
        if characteristic == 0 {
            Ok(Self::RATIONALS)
        } else {
            Self::prime(characteristic)
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> Coefficient {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coefficient {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coefficient {
        if self.characteristic == 0 {
            Coefficient::Rational(BigRational::from_integer(BigInt::from(v)))
        } else {
            let p = self.characteristic as i64;
            Coefficient::Residue { value: v.rem_euclid(p) as u32, modulus: self.characteristic }
        }
    }

    /// Maps an integer into the field (reduction mod p in characteristic p).
    pub fn from_bigint(&self, v: &BigInt) -> Coefficient {
        if self.characteristic == 0 {
            Coefficient::Rational(BigRational::from_integer(v.clone()))
        } else {
            let p = BigInt::from(self.characteristic);
            let r = ((v % &p) + &p) % &p;
            Coefficient::Residue { value: r.to_u32().expect("residue below modulus"), modulus: self.characteristic }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "QQ")
        } else {
            write!(f, "GF({})", self.characteristic)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element in canonical form.
///
/// Rationals are kept reduced with positive denominator (guaranteed by
/// `BigRational`); residues live in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Coefficient {
    pub fn field(&self) -> FieldSpec {
        match self {
            Coefficient::Rational(_) => FieldSpec::RATIONALS,
            Coefficient::Residue { modulus, .. } => FieldSpec { characteristic: *modulus },
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, CoeffError> {
        if den == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Coefficient::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn residue(value: i64, p: u32) -> Result<Self, CoeffError> {
        Ok(FieldSpec::prime(p as u64)?.from_i64(value))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_zero(),
            Coefficient::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_one(),
            Coefficient::Residue { value, .. } => *value == 1,
        }
    }

    /// True when the printed form carries a leading minus sign.
    ///
    /// Residues are printed as symmetric representatives, so values above
    /// `p / 2` count as negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_negative(),
            Coefficient::Residue { value, modulus } => *value as u64 * 2 > *modulus as u64,
        }
    }

    fn check(&self, other: &Self) -> Result<(), CoeffError> {
        if self.field() != other.field() {
            Err(CoeffError::FieldMismatch(self.field(), other.field()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(rational_op(a, b, false)),
            (Coefficient::Residue { value: a, modulus }, Coefficient::Residue { value: b, .. }) => {
                Coefficient::Residue { value: ((*a as u64 + *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(rational_op(a, b, true)),
            (Coefficient::Residue { value: a, modulus }, Coefficient::Residue { value: b, .. }) => {
                Coefficient::Residue { value: ((*a as u64 * *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, CoeffError> {
        match self {
            Coefficient::Rational(r) => {
                if r.is_zero() {
                    Err(CoeffError::DivisionByZero)
                } else {
                    Ok(Coefficient::Rational(r.recip()))
                }
            }
            Coefficient::Residue { value, modulus } => {
                Ok(Coefficient::Residue { value: prime_field_inv(*value, *modulus)?, modulus: *modulus })
            }
        }
    }

    /// `self^e` for a non-negative exponent.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The residue, for prime-field elements.
    pub fn as_residue(&self) -> Option<u32> {
        match self {
            Coefficient::Residue { value, .. } => Some(*value),
            Coefficient::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coefficient::Rational(r) => Some(r),
            Coefficient::Residue { .. } => None,
        }
    }

    /// Absolute value of the printed representative, formatted.
    pub(crate) fn magnitude_string(&self) -> String {
        match self {
            Coefficient::Rational(r) => {
                let a = r.abs();
                if a.denom().is_one() {
                    a.numer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
            Coefficient::Residue { value, modulus } => {
                if self.is_negative() {
                    (modulus - value).to_string()
                } else {
                    value.to_string()
                }
            }
        }
    }
}

/// Inverse of `a` modulo the prime `p` by the extended Euclidean algorithm.
/// Sum or product of two rationals. Integers skip `Ratio`'s reduction,
/// whose gcd is costly for large numerators even against a denominator of 1.
fn rational_op(a: &BigRational, b: &BigRational, mul: bool) -> BigRational {
    match (a.is_integer(), b.is_integer(), mul) {
        (true, true, true) => BigRational::from_integer(a.numer() * b.numer()),
        (true, true, false) => BigRational::from_integer(a.numer() + b.numer()),
        (_, _, true) => a * b,
        (_, _, false) => a + b,
    }
}

pub fn prime_field_inv(a: u32, p: u32) -> Result<u32, CoeffError> {
    let a = a % p;
    if a == 0 {
        return Err(CoeffError::DivisionByZero);
    }
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(t0.rem_euclid(p as i64) as u32)
}

/// Panicking operators for internal use where both operands are known to
/// share a field (every polynomial carries exactly one `FieldSpec`).
impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Self) -> Coefficient {
        self.try_add(rhs).expect("coefficient field mismatch")
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Self) -> Coefficient {
        self.try_sub(rhs).expect("coefficient field mismatch")
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Self) -> Coefficient {
        self.try_mul(rhs).expect("coefficient field mismatch")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(r) => Coefficient::Rational(-r),
            Coefficient::Residue { value, modulus } => {
                Coefficient::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            write!(f, "-")?;
        }
        write!(f, "{}", self.magnitude_string())
    }
}
