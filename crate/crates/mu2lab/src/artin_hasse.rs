//! The Artin-Hasse exponential E_p(T) = exp(sum_r T^{p^r}/p^r) and its
//! two-parameter deformation E_p(U, L; T), computed exactly over the
//! rationals and specialized into any coefficient ring.
//!
//! The deformation is assembled from the product formula
//!   p > 2:  prod_{(i,p)=1} E_p(U L^{i-1} T^i)^{(-1)^{i-1}/i}
//!   p = 2:  prod_{i odd} E_2(U L^{i-1} T^i)^{1/i}
//!           * [ prod_{i odd} E_2(U L^{2i-1} T^{2i})^{1/i} ]^{-1}
//! with exact rational exponentials; every coefficient is asserted to be
//! p-integral as a polynomial in U and L before it is ever specialized.

use crate::dvr::{QuotientRing, Residue};
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, PolyRing};
use crate::ring::{is_p_integral, ResidueRing, Ring, QQ};
use crate::witt::WittVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Power series truncated at a fixed degree (coefficients 0..=trunc).
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    pub ring: R,
    pub trunc: usize,
    pub coeffs: Vec<R::Elem>,
}

impl<R: Ring> std::fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Series[trunc {}: {:?}]", self.trunc, self.coeffs)
    }
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(ring: &R, trunc: usize) -> Self {
        TruncatedSeries {
            ring: ring.clone(),
            trunc,
            coeffs: vec![ring.zero(); trunc + 1],
        }
    }
    pub fn one(ring: &R, trunc: usize) -> Self {
        let mut s = Self::zero(ring, trunc);
        s.coeffs[0] = ring.one();
        s
    }
    pub fn from_coeffs(ring: &R, trunc: usize, coeffs: &[R::Elem]) -> Self {
        let mut s = Self::zero(ring, trunc);
        for (i, c) in coeffs.iter().enumerate().take(trunc + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }
    pub fn coeff(&self, d: usize) -> R::Elem {
        if d <= self.trunc {
            self.coeffs[d].clone()
        } else {
            self.ring.zero()
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.trunc, other.trunc);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs,
        }
    }
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.trunc, other.trunc);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs,
        }
    }
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.trunc, other.trunc);
        let mut out = Self::zero(&self.ring, self.trunc);
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > self.trunc {
                    break;
                }
                let t = self.ring.mul(a, b);
                out.coeffs[i + j] = self.ring.add(&out.coeffs[i + j], &t);
            }
        }
        out
    }
    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs,
        }
    }
    /// Substitute T -> T^k and re-truncate at `trunc`.
    pub fn stretch_into(&self, trunc: usize, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(&self.ring, trunc);
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * k > trunc {
                break;
            }
            out.coeffs[i * k] = a.clone();
        }
        out
    }
    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(&self.ring, self.trunc);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
    pub fn is_polynomial_of_degree_le(&self, d: usize) -> bool {
        self.coeffs.iter().skip(d + 1).all(|c| self.ring.is_zero(c))
    }
    pub fn degree(&self) -> Option<usize> {
        (0..=self.trunc)
            .rev()
            .find(|&d| !self.ring.is_zero(&self.coeffs[d]))
    }
    /// Multiplicative inverse of a series with constant term 1.
    pub fn invert(&self) -> Result<Self> {
        assert!(
            self.coeffs[0] == self.ring.one(),
            "series inversion requires constant term 1"
        );
        let mut inv = Self::zero(&self.ring, self.trunc);
        inv.coeffs[0] = self.ring.one();
        for d in 1..=self.trunc {
            let mut acc = self.ring.zero();
            for j in 0..d {
                let t = self.ring.mul(&inv.coeffs[j], &self.coeffs[d - j]);
                acc = self.ring.add(&acc, &t);
            }
            inv.coeffs[d] = self.ring.neg(&acc);
        }
        Ok(inv)
    }
}

/// Rings containing Q, where division by a nonzero integer is always legal.
pub trait QAlgebra: Ring {
    fn div_int(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem;
}

impl QAlgebra for QQ {
    fn div_int(&self, a: &BigRational, n: &BigInt) -> BigRational {
        a / BigRational::from_integer(n.clone())
    }
}

impl QAlgebra for PolyRing<QQ> {
    fn div_int(&self, a: &MPoly<QQ>, n: &BigInt) -> MPoly<QQ> {
        let inv = BigRational::new(BigInt::one(), n.clone());
        a.scale(&inv)
    }
}

impl<R: QAlgebra> TruncatedSeries<R> {
    /// exp(f) for f with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(
            self.ring.is_zero(&self.coeffs[0]),
            "exp needs zero constant term"
        );
        let mut acc = Self::one(&self.ring, self.trunc);
        let mut power = Self::one(&self.ring, self.trunc);
        let mut factorial = BigInt::one();
        for k in 1..=self.trunc {
            power = power.mul(self);
            factorial *= k;
            let term = TruncatedSeries {
                ring: self.ring.clone(),
                trunc: self.trunc,
                coeffs: power
                    .coeffs
                    .iter()
                    .map(|c| self.ring.div_int(c, &factorial))
                    .collect(),
            };
            acc = acc.add(&term);
        }
        acc
    }
    /// log(f) for f with constant term 1.
    pub fn log(&self) -> Self {
        assert!(
            self.coeffs[0] == self.ring.one(),
            "log needs constant term 1"
        );
        let mut g = self.clone();
        g.coeffs[0] = self.ring.zero();
        let mut acc = Self::zero(&self.ring, self.trunc);
        let mut power = Self::one(&self.ring, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(&g);
            let sign = if k % 2 == 1 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let sign_el = self.ring.from_bigint(&sign);
            let term = TruncatedSeries {
                ring: self.ring.clone(),
                trunc: self.trunc,
                coeffs: power
                    .coeffs
                    .iter()
                    .map(|c| {
                        self.ring
                            .div_int(&self.ring.mul(c, &sign_el), &BigInt::from(k))
                    })
                    .collect(),
            };
            acc = acc.add(&term);
        }
        acc
    }
    /// f^(num/den) for f with constant term 1.
    pub fn pow_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        let l = self.log();
        let mut scaled = Self::zero(&self.ring, self.trunc);
        for (d, c) in l.coeffs.iter().enumerate() {
            let t = self.ring.mul(c, &self.ring.from_bigint(num));
            scaled.coeffs[d] = self.ring.div_int(&t, den);
        }
        scaled.exp()
    }
}

/// E_p(T) truncated, over Q; coefficients are checked to be p-integral.
pub fn artin_hasse_series(p: u64, trunc: usize) -> Result<Arc<TruncatedSeries<QQ>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<TruncatedSeries<QQ>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&(p, trunc)) {
        return Ok(s.clone());
    }
    let ring = QQ;
    let mut arg = TruncatedSeries::zero(&ring, trunc);
    let mut pk: u64 = 1;
    let mut pr = BigInt::one();
    while (pk as usize) <= trunc {
        arg.coeffs[pk as usize] = BigRational::new(BigInt::one(), pr.clone());
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        pr *= p;
    }
    let s = arg.exp();
    for (d, c) in s.coeffs.iter().enumerate() {
        if !is_p_integral(c, p) {
            return Err(Error::NonIntegralCoefficient(format!(
                "E_p coefficient at degree {d} is {c}"
            )));
        }
    }
    let arc = Arc::new(s);
    cache.lock().unwrap().insert((p, trunc), arc.clone());
    Ok(arc)
}

/// Universal deformed exponential: the T-coefficients of E_p(U, L; T) as
/// exact polynomials in U (var 0) and L (var 1) over Q.
pub fn deformed_ep_universal(p: u64, trunc: usize) -> Result<Arc<Vec<MPoly<QQ>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Vec<MPoly<QQ>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&(p, trunc)) {
        return Ok(s.clone());
    }
    let base = QQ;
    let pr = PolyRing {
        base: base.clone(),
        nvars: 2,
    };
    let ah = artin_hasse_series(p, trunc)?;
    let u = MPoly::var(&base, 2, 0);
    let l = MPoly::var(&base, 2, 1);

    // E_p((U L^{j}) T^i) as a series with polynomial coefficients
    let factor = |i: usize, j: usize| -> TruncatedSeries<PolyRing<QQ>> {
        let ul = u.mul(&l.pow(j as u64));
        let mut s = TruncatedSeries::zero(&pr, trunc);
        for (k, c) in ah.coeffs.iter().enumerate() {
            if k * i > trunc {
                break;
            }
            s.coeffs[k * i] = ul.pow(k as u64).scale(c);
        }
        s
    };

    let mut acc = TruncatedSeries::one(&pr, trunc);
    if p > 2 {
        for i in 1..=trunc {
            if (i as u64).is_multiple_of(p) {
                continue;
            }
            let sign = if i % 2 == 1 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            acc = acc.mul(&factor(i, i - 1).pow_ratio(&sign, &BigInt::from(i)));
        }
    } else {
        for i in (1..=trunc).step_by(2) {
            acc = acc.mul(&factor(i, i - 1).pow_ratio(&BigInt::one(), &BigInt::from(i)));
        }
        let mut denom = TruncatedSeries::one(&pr, trunc);
        for i in (1..=trunc).step_by(2) {
            if 2 * i > trunc {
                break;
            }
            denom =
                denom.mul(&factor(2 * i, 2 * i - 1).pow_ratio(&BigInt::one(), &BigInt::from(i)));
        }
        acc = acc.mul(&denom.invert()?);
    }

    // universal p-integrality
    for (d, poly) in acc.coeffs.iter().enumerate() {
        for (m, c) in &poly.terms {
            if !is_p_integral(c, p) {
                return Err(Error::NonIntegralCoefficient(format!(
                    "deformed exponential coefficient at T^{d}, monomial {m:?}: {c}"
                )));
            }
        }
    }
    let arc = Arc::new(acc.coeffs);
    cache.lock().unwrap().insert((p, trunc), arc.clone());
    Ok(arc)
}

/// E_p(a, mu; T) over an arbitrary coefficient ring, truncated.
pub fn deformed_ep<R: Ring>(
    ring: &R,
    p: u64,
    a: &R::Elem,
    mu: &R::Elem,
    trunc: usize,
) -> Result<TruncatedSeries<R>> {
    let uni = deformed_ep_universal(p, trunc)?;
    let mut out = TruncatedSeries::zero(ring, trunc);
    for (d, poly) in uni.iter().enumerate() {
        let mut acc = ring.zero();
        for (m, c) in &poly.terms {
            let scalar = ring.from_ratio(c.numer(), c.denom())?;
            let t = ring.mul(
                &scalar,
                &ring.mul(&ring.pow(a, m[0] as u64), &ring.pow(mu, m[1] as u64)),
            );
            acc = ring.add(&acc, &t);
        }
        out.coeffs[d] = acc;
    }
    Ok(out)
}

/// The degree-(p-1) closed form
/// 1 + sum_{i=1}^{p-1} (prod_{k=0}^{i-1}(a - k mu) / i!) T^i over R/lambda R.
pub fn ep_closed_form(q: &QuotientRing, a: &Residue, mu: &Residue) -> Vec<Residue> {
    let p = q.dvr().p();
    let mut coeffs = Vec::with_capacity(p as usize);
    coeffs.push(q.one());
    let mut num = q.one();
    let mut fact = 1i64;
    for i in 1..p {
        let k = q.from_i64((i - 1) as i64);
        num = q.mul(&num, &q.sub(a, &q.mul(&k, mu)));
        fact *= i as i64;
        let fact_inv = q.inv(&q.from_i64(fact)).expect("i! is a unit for i < p");
        coeffs.push(q.mul(&num, &fact_inv));
    }
    coeffs
}

/// E_p(a, mu; T) = prod_k E_p(a_k, mu^{p^k}; T^{p^k}) for a finite-support
/// Witt vector over R/lambda R.
pub fn ep_witt(
    q: &QuotientRing,
    a: &WittVector<Residue>,
    mu: &Residue,
    trunc: usize,
) -> Result<TruncatedSeries<ResidueRing>> {
    let ring = ResidueRing(q.clone());
    let p = q.dvr().p();
    let mut acc = TruncatedSeries::one(&ring, trunc);
    let mut pk: usize = 1;
    for entry in &a.entries {
        if pk > trunc {
            break;
        }
        let mu_pk = q.pow(mu, pk as u64);
        let f = deformed_ep(&ring, p, entry, &mu_pk, trunc / pk)?;
        acc = acc.mul(&f.stretch_into(trunc, pk));
        pk *= p as usize;
    }
    Ok(acc)
}

/// Does F (given by its coefficient vector over R/lambda R, F(0)=1) satisfy
/// the exact polynomial identity F(U) F(V) = F(U + V + mu U V)?
pub fn satisfies_hom_equation(q: &QuotientRing, f: &[Residue], mu: &Residue) -> bool {
    let ring = ResidueRing(q.clone());
    let u = MPoly::var(&ring, 2, 0);
    let v = MPoly::var(&ring, 2, 1);
    let eval = |arg: &MPoly<ResidueRing>| -> MPoly<ResidueRing> {
        let mut acc = MPoly::zero(&ring, 2);
        let mut pw = MPoly::one(&ring, 2);
        for (i, c) in f.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(arg);
            }
            acc = acc.add(&pw.scale(c));
        }
        acc
    };
    let lhs = eval(&u).mul(&eval(&v));
    let arg = u.add(&v).add(&u.mul(&v).scale(mu));
    let rhs = eval(&arg);
    lhs == rhs
}
