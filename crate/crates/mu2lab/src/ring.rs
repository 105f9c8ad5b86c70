//! A minimal commutative-ring interface so that Witt structure constants,
//! series and polynomial code can run over Z, Q, F_q, finite quotients and
//! the truncated d.v.r. itself.

use crate::dvr::{DvrElement, DvrRing, QuotientRing, Residue};
use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Ring: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Image of num/den; den must map to a unit.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    /// Whether a zero-valued element still carries information that must not
    /// be discarded from a polynomial (an inexact zero clamps the precision
    /// of anything later added at its monomial). Exact rings never keep
    /// zeros.
    fn keep_zero_term(&self, _e: &Self::Elem) -> bool {
        false
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }
    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// The integers (arbitrary precision).
#[derive(Clone, Debug)]
pub struct ZZ;

impl Ring for ZZ {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigInt> {
        if den.is_zero() || !(num % den).is_zero() {
            return Err(Error::NonIntegralCoefficient(format!("{num}/{den} over Z")));
        }
        Ok(num / den)
    }
}

/// The rationals.
#[derive(Clone, Debug)]
pub struct QQ;

impl Ring for QQ {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(Error::NonIntegralCoefficient("division by zero".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
}

/// Whether a rational is p-integral (denominator coprime to p).
pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    let p = BigInt::from(p);
    !(x.denom().abs() % p).is_zero()
}

/// Z/m with machine-word residues.
#[derive(Clone, Debug)]
pub struct ZMod(pub u64);

impl Ring for ZMod {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = BigInt::from(self.0);
        (((n % &m) + &m) % &m).to_u64().unwrap()
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64> {
        let d = self.from_bigint(den);
        // Fermat-free inverse by search; moduli used here are small
        let mut inv = None;
        for c in 1..self.0 {
            if self.mul(&d, &c) == self.one() {
                inv = Some(c);
                break;
            }
        }
        let inv = inv.ok_or(Error::NonUnit(0))?;
        Ok(self.mul(&self.from_bigint(num), &inv))
    }
}

/// A finite field as a coefficient ring.
#[derive(Clone, Debug)]
pub struct FqRing(pub Fq);

impl Ring for FqRing {
    type Elem = FqElem;
    fn zero(&self) -> FqElem {
        0
    }
    fn one(&self) -> FqElem {
        1
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.0.add(*a, *b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        self.0.neg(*a)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.0.mul(*a, *b)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        *a == 0
    }
    fn from_bigint(&self, n: &BigInt) -> FqElem {
        use num_traits::ToPrimitive;
        let p = BigInt::from(self.0.p());
        let r = ((n % &p) + &p) % &p;
        self.0.from_i64(r.to_i64().unwrap())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FqElem> {
        let d = self.from_bigint(den);
        let di = self.0.inv(d)?;
        Ok(self.0.mul(self.from_bigint(num), di))
    }
}

/// A finite quotient R/lambda R as a coefficient ring.
#[derive(Clone, Debug)]
pub struct ResidueRing(pub QuotientRing);

impl Ring for ResidueRing {
    type Elem = Residue;
    fn zero(&self) -> Residue {
        self.0.zero()
    }
    fn one(&self) -> Residue {
        self.0.one()
    }
    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        self.0.add(a, b)
    }
    fn neg(&self, a: &Residue) -> Residue {
        self.0.neg(a)
    }
    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &Residue) -> bool {
        self.0.is_zero(a)
    }
    fn from_bigint(&self, n: &BigInt) -> Residue {
        self.0
            .reduce(&self.0.dvr().from_bigint(n))
            .expect("full-precision integer")
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Residue> {
        if self.0.is_zero_ring() {
            return Ok(self.0.zero());
        }
        let d = self.from_bigint(den);
        let di = self.0.inv(&d)?;
        Ok(self.0.mul(&self.from_bigint(num), &di))
    }
}

/// The truncated d.v.r. R itself as a coefficient ring.
#[derive(Clone, Debug)]
pub struct DvrCoeff(pub DvrRing);

impl Ring for DvrCoeff {
    type Elem = DvrElement;
    fn zero(&self) -> DvrElement {
        self.0.zero()
    }
    fn one(&self) -> DvrElement {
        self.0.one()
    }
    fn add(&self, a: &DvrElement, b: &DvrElement) -> DvrElement {
        self.0.add(a, b)
    }
    fn neg(&self, a: &DvrElement) -> DvrElement {
        self.0.neg(a)
    }
    fn mul(&self, a: &DvrElement, b: &DvrElement) -> DvrElement {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &DvrElement) -> bool {
        self.0.is_zero(a)
    }
    fn from_bigint(&self, n: &BigInt) -> DvrElement {
        self.0.from_bigint(n)
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<DvrElement> {
        let d = self.0.from_bigint(den);
        let di = self.0.inv(&d)?;
        Ok(self.0.mul(&self.0.from_bigint(num), &di))
    }
    fn keep_zero_term(&self, e: &DvrElement) -> bool {
        e.precision() < self.0.cap()
    }
}
