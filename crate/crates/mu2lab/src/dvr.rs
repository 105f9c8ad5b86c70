//! Exact arithmetic in truncated discrete valuation rings and their
//! finite quotients.
//!
//! Two cases are supported. In mixed characteristic the ring is
//! (Z/p^N)[u]/(E(u)) for an Eisenstein polynomial E of degree e, so elements
//! are canonical polynomials of degree < e with coefficients mod p^N and the
//! uniformizer is pi = u. In equal characteristic the ring is F_q[[pi]]/pi^N.
//!
//! Every element carries an absolute precision: the number of pi-adic digits
//! that are trusted. Ring operations propagate precision; dividing by pi^t
//! costs t digits. Comparisons happen at the smaller of the two precisions
//! and refuse to run when nothing is known.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub enum DvrCase {
    Mixed {
        /// ramification index e = v(p)
        e: u32,
        /// Eisenstein polynomial, ascending coefficients mod p^N, length e+1, monic
        eisenstein: Vec<u64>,
        /// F(u) = (E(u) - u^e)/p, ascending, degree < e
        f_poly: Vec<u64>,
        /// F(pi)^{-1} in the ring (coefficient vector)
        f_inv: Vec<u64>,
        /// p/pi as a ring element: -F(pi)^{-1} * pi^{e-1}
        p_over_pi: Vec<u64>,
        /// residue field (degree f = 1)
        k: Fq,
    },
    Equal {
        k: Fq,
    },
}

#[derive(Debug)]
pub struct DvrSpec {
    pub p: u64,
    /// working precision exponent N
    pub n_prec: u32,
    /// p^N
    pub pn: u64,
    /// pi-adic digit capacity: e*N (mixed) or N (equal)
    pub cap: u32,
    pub case: DvrCase,
    zeta2: bool,
}

/// Shared handle to a truncated d.v.r.; cloning is cheap.
#[derive(Clone, Debug)]
pub struct DvrRing(Arc<DvrSpec>);

#[derive(Clone, Debug)]
pub enum Repr {
    /// degree < e polynomial in pi, coefficients mod p^N
    Mixed(Vec<u64>),
    /// power series in pi truncated at N, coefficients in F_q
    Equal(Vec<FqElem>),
}

#[derive(Clone, Debug)]
pub struct DvrElement {
    ring: DvrRing,
    repr: Repr,
    /// trusted pi-adic digits (absolute precision)
    prec: u32,
}

fn vp(mut c: u64, p: u64, max: u32) -> u32 {
    if c == 0 {
        return max;
    }
    let mut v = 0;
    while c.is_multiple_of(p) && v < max {
        c /= p;
        v += 1;
    }
    v
}

fn pow_u64(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("p^k overflow")
}

impl DvrRing {
    /// Mixed-characteristic ring (Z/p^N)[u]/(E(u)).
    ///
    /// `eisenstein` is ascending with length e+1; it must be monic, have all
    /// non-leading coefficients divisible by p and constant term of
    /// p-valuation exactly 1.
    pub fn mixed(p: u64, n_prec: u32, eisenstein: &[i64]) -> Result<DvrRing> {
        if eisenstein.len() < 2 {
            return Err(Error::BadConfig(
                "Eisenstein polynomial needs degree >= 1".into(),
            ));
        }
        let e = (eisenstein.len() - 1) as u32;
        if n_prec == 0 {
            return Err(Error::BadConfig("precision N must be >= 1".into()));
        }
        let pn = p
            .checked_pow(n_prec)
            .filter(|&x| x < (1u64 << 62))
            .ok_or_else(|| Error::BadConfig("p^N does not fit the coefficient type".into()))?;
        let to_mod =
            |c: i64| -> u64 { (((c as i128 % pn as i128) + pn as i128) % pn as i128) as u64 };
        let eis: Vec<u64> = eisenstein.iter().map(|&c| to_mod(c)).collect();
        if *eis.last().unwrap() != 1 {
            return Err(Error::BadConfig(
                "Eisenstein polynomial must be monic".into(),
            ));
        }
        for (i, &c) in eis.iter().enumerate().take(e as usize) {
            if c % p != 0 {
                return Err(Error::BadConfig(format!(
                    "Eisenstein coefficient {i} not divisible by p"
                )));
            }
        }
        if (eis[0] / p).is_multiple_of(p) {
            return Err(Error::BadConfig(
                "Eisenstein constant term must have p-valuation exactly 1".into(),
            ));
        }
        let f_poly: Vec<u64> = eis.iter().take(e as usize).map(|&c| c / p).collect();
        let make = |f_inv: Vec<u64>, p_over_pi: Vec<u64>, zeta2: bool| -> Result<DvrRing> {
            Ok(DvrRing(Arc::new(DvrSpec {
                p,
                n_prec,
                pn,
                cap: e * n_prec,
                case: DvrCase::Mixed {
                    e,
                    eisenstein: eis.clone(),
                    f_poly: f_poly.clone(),
                    f_inv,
                    p_over_pi,
                    k: Fq::new(p, 1)?,
                },
                zeta2,
            })))
        };
        // bootstrap ring: mul/add/inv need only f_poly, not p/pi
        let boot = make(vec![], vec![], false)?;
        let f_el = DvrElement {
            ring: boot.clone(),
            repr: Repr::Mixed({
                let mut v = f_poly.clone();
                v.resize(e as usize, 0);
                v
            }),
            prec: e * n_prec,
        };
        let f_inv = match boot.inv(&f_el)?.repr {
            Repr::Mixed(v) => v,
            _ => unreachable!(),
        };
        // p/pi = -F(pi)^{-1} * pi^{e-1}, reduced by the Eisenstein relation
        let mut shifted = vec![0u64; e as usize + f_inv.len()];
        for (i, &c) in f_inv.iter().enumerate() {
            shifted[i + e as usize - 1] = (pn - c) % pn;
        }
        reduce_mixed(&mut shifted, e as usize, p, pn, &f_poly);
        shifted.truncate(e as usize);
        let ring = make(f_inv.clone(), shifted.clone(), false)?;
        // v(p) = e must hold for an Eisenstein presentation
        let p_el = ring.from_i64(p as i64);
        if ring.valuation(&p_el) != Some(e) {
            return Err(Error::BadConfig(
                "v(p) != deg E; polynomial is not Eisenstein".into(),
            ));
        }
        let z2 = ring.detect_zeta2();
        make(f_inv, shifted, z2)
    }

    /// Equal-characteristic ring F_q[[pi]]/pi^N.
    pub fn equal(p: u64, f: u32, n_prec: u32) -> Result<DvrRing> {
        if n_prec == 0 {
            return Err(Error::BadConfig("precision N must be >= 1".into()));
        }
        let k = Fq::new(p, f)?;
        Ok(DvrRing(Arc::new(DvrSpec {
            p,
            n_prec,
            pn: 0,
            cap: n_prec,
            case: DvrCase::Equal { k },
            zeta2: false,
        })))
    }

    pub fn spec(&self) -> &DvrSpec {
        &self.0
    }
    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn cap(&self) -> u32 {
        self.0.cap
    }
    pub fn is_mixed(&self) -> bool {
        matches!(self.0.case, DvrCase::Mixed { .. })
    }
    /// v(p); None in equal characteristic (p = 0).
    pub fn val_p(&self) -> Option<u32> {
        match &self.0.case {
            DvrCase::Mixed { e, .. } => Some(*e),
            DvrCase::Equal { .. } => None,
        }
    }
    pub fn residue_field(&self) -> &Fq {
        match &self.0.case {
            DvrCase::Mixed { k, .. } => k,
            DvrCase::Equal { k } => k,
        }
    }
    pub fn same_ring(&self, other: &DvrRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
    fn assert_same(&self, other: &DvrRing) {
        assert!(self.same_ring(other), "elements belong to different rings");
    }

    pub fn zero(&self) -> DvrElement {
        self.from_i64(0)
    }
    pub fn one(&self) -> DvrElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> DvrElement {
        match &self.0.case {
            DvrCase::Mixed { e, .. } => {
                let pn = self.0.pn as i128;
                let c = (((n as i128) % pn + pn) % pn) as u64;
                let mut v = vec![0u64; *e as usize];
                v[0] = c;
                DvrElement {
                    ring: self.clone(),
                    repr: Repr::Mixed(v),
                    prec: self.0.cap,
                }
            }
            DvrCase::Equal { k } => {
                let mut v = vec![0u8; self.0.n_prec as usize];
                v[0] = k.from_i64(n);
                DvrElement {
                    ring: self.clone(),
                    repr: Repr::Equal(v),
                    prec: self.0.cap,
                }
            }
        }
    }

    pub fn from_bigint(&self, n: &num_bigint::BigInt) -> DvrElement {
        use num_traits::ToPrimitive;
        match &self.0.case {
            DvrCase::Mixed { .. } => {
                let pn = num_bigint::BigInt::from(self.0.pn);
                let r = ((n % &pn) + &pn) % &pn;
                self.from_i64(r.to_i64().expect("reduced residue fits i64"))
            }
            DvrCase::Equal { .. } => {
                let p = num_bigint::BigInt::from(self.0.p);
                let r = ((n % &p) + &p) % &p;
                self.from_i64(r.to_i64().unwrap())
            }
        }
    }

    /// The fixed uniformizer pi.
    pub fn pi(&self) -> DvrElement {
        self.pi_pow(1)
    }

    /// pi^t as an exact element.
    pub fn pi_pow(&self, t: u32) -> DvrElement {
        if t >= self.0.cap {
            return self.zero();
        }
        match &self.0.case {
            DvrCase::Mixed { e, .. } => {
                let e = *e as usize;
                let mut v = vec![0u64; e];
                let q = t as usize / e;
                let r = t as usize % e;
                v[r] = pow_u64(self.0.p, q as u32) % self.0.pn;
                DvrElement {
                    ring: self.clone(),
                    repr: Repr::Mixed(v),
                    prec: self.0.cap,
                }
            }
            DvrCase::Equal { .. } => {
                let mut v = vec![0u8; self.0.n_prec as usize];
                v[t as usize] = 1;
                DvrElement {
                    ring: self.clone(),
                    repr: Repr::Equal(v),
                    prec: self.0.cap,
                }
            }
        }
    }

    pub fn add(&self, a: &DvrElement, b: &DvrElement) -> DvrElement {
        self.assert_same(&a.ring);
        self.assert_same(&b.ring);
        let prec = a.prec.min(b.prec);
        let repr = match (&a.repr, &b.repr) {
            (Repr::Mixed(x), Repr::Mixed(y)) => Repr::Mixed(
                x.iter()
                    .zip(y)
                    .map(|(&u, &v)| (u + v) % self.0.pn)
                    .collect(),
            ),
            (Repr::Equal(x), Repr::Equal(y)) => {
                let k = self.residue_field();
                Repr::Equal(x.iter().zip(y).map(|(&u, &v)| k.add(u, v)).collect())
            }
            _ => unreachable!(),
        };
        let mut out = DvrElement {
            ring: self.clone(),
            repr,
            prec,
        };
        out.truncate_to_prec();
        out
    }

    pub fn neg(&self, a: &DvrElement) -> DvrElement {
        self.assert_same(&a.ring);
        let repr = match &a.repr {
            Repr::Mixed(x) => Repr::Mixed(x.iter().map(|&u| (self.0.pn - u) % self.0.pn).collect()),
            Repr::Equal(x) => {
                let k = self.residue_field();
                Repr::Equal(x.iter().map(|&u| k.neg(u)).collect())
            }
        };
        DvrElement {
            ring: self.clone(),
            repr,
            prec: a.prec,
        }
    }

    pub fn sub(&self, a: &DvrElement, b: &DvrElement) -> DvrElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &DvrElement, b: &DvrElement) -> DvrElement {
        self.assert_same(&a.ring);
        self.assert_same(&b.ring);
        let va = self.valuation(a).unwrap_or(a.prec);
        let vb = self.valuation(b).unwrap_or(b.prec);
        let prec = (va + b.prec).min(vb + a.prec).min(self.0.cap);
        let repr = match (&a.repr, &b.repr) {
            (Repr::Mixed(x), Repr::Mixed(y)) => {
                let e = x.len();
                let pn = self.0.pn as u128;
                let mut prod = vec![0u64; 2 * e - 1];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        let t = (xi as u128 * yj as u128 + prod[i + j] as u128) % pn;
                        prod[i + j] = t as u64;
                    }
                }
                let f_poly = match &self.0.case {
                    DvrCase::Mixed { f_poly, .. } => f_poly,
                    _ => unreachable!(),
                };
                reduce_mixed(&mut prod, e, self.0.p, self.0.pn, f_poly);
                prod.truncate(e);
                Repr::Mixed(prod)
            }
            (Repr::Equal(x), Repr::Equal(y)) => {
                let k = self.residue_field();
                let n = x.len();
                let mut prod = vec![0u8; n];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        if i + j >= n {
                            break;
                        }
                        prod[i + j] = k.add(prod[i + j], k.mul(xi, yj));
                    }
                }
                Repr::Equal(prod)
            }
            _ => unreachable!(),
        };
        let mut out = DvrElement {
            ring: self.clone(),
            repr,
            prec,
        };
        out.truncate_to_prec();
        out
    }

    pub fn pow(&self, a: &DvrElement, mut n: u64) -> DvrElement {
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

    /// Largest t with pi^t | x at the element's precision; None if x is zero
    /// at that precision.
    pub fn valuation(&self, a: &DvrElement) -> Option<u32> {
        match &a.repr {
            Repr::Mixed(x) => {
                let e = x.len() as u32;
                let mut best: Option<u32> = None;
                for (i, &c) in x.iter().enumerate() {
                    if c != 0 {
                        let v = vp(c, self.0.p, self.0.n_prec) * e + i as u32;
                        best = Some(best.map_or(v, |b: u32| b.min(v)));
                    }
                }
                best.filter(|&v| v < a.prec)
            }
            Repr::Equal(x) => x
                .iter()
                .position(|&c| c != 0)
                .map(|i| i as u32)
                .filter(|&v| v < a.prec),
        }
    }

    pub fn is_zero(&self, a: &DvrElement) -> bool {
        self.valuation(a).is_none()
    }

    pub fn is_unit(&self, a: &DvrElement) -> bool {
        self.valuation(a) == Some(0)
    }

    /// Multiplicative inverse of a unit, by Newton iteration.
    pub fn inv(&self, a: &DvrElement) -> Result<DvrElement> {
        match self.valuation(a) {
            Some(0) => {}
            v => return Err(Error::NonUnit(v.unwrap_or(a.prec))),
        }
        let mut g = match &a.repr {
            Repr::Mixed(x) => {
                let r = x[0] % self.0.p;
                let mut inv0 = 0u64;
                for c in 1..self.0.p {
                    if (c * r) % self.0.p == 1 {
                        inv0 = c;
                        break;
                    }
                }
                self.from_i64(inv0 as i64)
            }
            Repr::Equal(x) => {
                let k = self.residue_field();
                let i0 = k.inv(x[0])?;
                let mut v = vec![0u8; x.len()];
                v[0] = i0;
                DvrElement {
                    ring: self.clone(),
                    repr: Repr::Equal(v),
                    prec: self.0.cap,
                }
            }
        };
        let two = self.from_i64(2);
        let steps = 64 - u64::from(self.0.cap).leading_zeros() + 1;
        for _ in 0..steps {
            // g <- g(2 - a g)
            let t = self.sub(&two, &self.mul(a, &g));
            g = self.mul(&g, &t);
        }
        g.prec = a.prec;
        g.truncate_to_prec();
        debug_assert!(self.eq_at(&self.mul(a, &g), &self.one(), a.prec));
        Ok(g)
    }

    /// y with pi^t y = x, when v(x) >= t. Costs t digits of precision.
    pub fn exact_divide(&self, a: &DvrElement, t: u32) -> Result<DvrElement> {
        if t == 0 {
            return Ok(a.clone());
        }
        if a.prec < t {
            return Err(Error::InsufficientPrecision(format!(
                "dividing by pi^{t} an element known to precision {}",
                a.prec
            )));
        }
        match self.valuation(a) {
            None => {
                // zero at precision: quotient is zero known to prec - t
                let mut out = self.zero();
                out.prec = a.prec - t;
                if out.prec == 0 {
                    return Err(Error::InsufficientPrecision(
                        "division consumed all precision".into(),
                    ));
                }
                out.truncate_to_prec();
                return Ok(out);
            }
            Some(v) if v < t => return Err(Error::NotDivisible { needed: t, have: v }),
            _ => {}
        }
        let mut cur = a.clone();
        for _ in 0..t {
            cur = self.divide_by_pi_once(&cur)?;
        }
        Ok(cur)
    }

    fn divide_by_pi_once(&self, a: &DvrElement) -> Result<DvrElement> {
        let prec = a.prec - 1;
        if prec == 0 {
            return Err(Error::InsufficientPrecision(
                "division consumed all precision".into(),
            ));
        }
        let repr = match &a.repr {
            Repr::Mixed(x) => {
                let e = x.len();
                let p_over_pi = match &self.0.case {
                    DvrCase::Mixed { p_over_pi, .. } => p_over_pi,
                    _ => unreachable!(),
                };
                debug_assert_eq!(x[0] % self.0.p, 0, "not divisible by pi");
                let c0p = x[0] / self.0.p;
                let mut v: Vec<u64> = x[1..].to_vec();
                v.push(0);
                if c0p != 0 {
                    let pn = self.0.pn as u128;
                    for (vi, &w) in v.iter_mut().zip(p_over_pi) {
                        *vi = ((*vi as u128 + c0p as u128 * w as u128) % pn) as u64;
                    }
                }
                v.truncate(e);
                Repr::Mixed(v)
            }
            Repr::Equal(x) => {
                debug_assert_eq!(x[0], 0, "not divisible by pi");
                let mut v: Vec<u8> = x[1..].to_vec();
                v.push(0);
                Repr::Equal(v)
            }
        };
        let mut out = DvrElement {
            ring: self.clone(),
            repr,
            prec,
        };
        out.truncate_to_prec();
        Ok(out)
    }

    /// Unit part of a nonzero element: x / pi^{v(x)}.
    pub fn unit_part(&self, a: &DvrElement) -> Result<DvrElement> {
        let v = self
            .valuation(a)
            .ok_or_else(|| Error::InsufficientPrecision("unit part of zero".into()))?;
        self.exact_divide(a, v)
    }

    /// Equality of the two canonical forms truncated to `digits`.
    pub fn eq_at(&self, a: &DvrElement, b: &DvrElement, digits: u32) -> bool {
        let d = digits.min(a.prec).min(b.prec);
        assert!(d > 0, "comparison at zero precision");
        let mut x = a.clone();
        x.prec = d;
        x.truncate_to_prec();
        let mut y = b.clone();
        y.prec = d;
        y.truncate_to_prec();
        x.repr_eq(&y)
    }

    /// x == y mod pi^t, requiring both operands to carry >= t digits.
    pub fn congruent_mod_pi(&self, a: &DvrElement, b: &DvrElement, t: u32) -> Result<bool> {
        if t == 0 {
            return Ok(true);
        }
        if a.prec < t || b.prec < t {
            return Err(Error::InsufficientPrecision(format!(
                "congruence mod pi^{t} with precisions {} and {}",
                a.prec, b.prec
            )));
        }
        Ok(self.eq_at(a, b, t))
    }

    /// Budget guard: a top-level computation that divides by pi^depth in
    /// total and compares mod pi^target needs cap >= depth + target + guard.
    pub fn require_budget(&self, depth: u32, target: u32) -> Result<()> {
        let guard = match &self.0.case {
            DvrCase::Mixed { e, .. } => *e,
            DvrCase::Equal { .. } => 1,
        };
        if self.0.cap < depth + target + guard {
            return Err(Error::InsufficientPrecision(format!(
                "cap {} < division depth {} + target {} + guard {}",
                self.0.cap, depth, target, guard
            )));
        }
        Ok(())
    }

    fn detect_zeta2(&self) -> bool {
        // pi = zeta_{p^2} - 1 exactly when 1 + pi is a root of the p^2-th
        // cyclotomic polynomial sum_{k<p} x^{kp}
        let one_pi = self.add(&self.one(), &self.pi());
        let mut acc = self.zero();
        for k in 0..self.0.p {
            acc = self.add(&acc, &self.pow(&one_pi, k * self.0.p));
        }
        self.is_zero(&acc)
    }

    /// Whether the configuration was entered as pi = zeta_{p^2} - 1.
    pub fn has_zeta2(&self) -> bool {
        self.0.zeta2
    }

    /// Mixed case: F(u) = (E(u) - u^e)/p reduced modulo p, as residue-field
    /// indices (constant term first). F(0) is a unit for Eisenstein E.
    pub fn eisenstein_f_mod_p(&self) -> Option<Vec<u8>> {
        match &self.0.case {
            DvrCase::Mixed { f_poly, .. } => {
                Some(f_poly.iter().map(|&c| (c % self.0.p) as u8).collect())
            }
            DvrCase::Equal { .. } => None,
        }
    }

    /// lambda_{(1)} = zeta_1 - 1 = (1+pi)^p - 1 in a zeta_2 configuration.
    pub fn lambda1(&self) -> Result<DvrElement> {
        if !self.0.zeta2 {
            return Err(Error::NoRootOfUnity);
        }
        let one_pi = self.add(&self.one(), &self.pi());
        Ok(self.sub(&self.pow(&one_pi, self.0.p), &self.one()))
    }
}

/// Reduce a raw coefficient vector (length up to 2e-1) by u^e = -p F(u).
fn reduce_mixed(v: &mut [u64], e: usize, p: u64, pn: u64, f_poly: &[u64]) {
    for d in (e..v.len()).rev() {
        let c = v[d];
        if c == 0 {
            continue;
        }
        v[d] = 0;
        let pc = ((c as u128 * p as u128) % pn as u128) as u64;
        let m = (pn - pc) % pn;
        if m == 0 {
            continue;
        }
        for (k, &fk) in f_poly.iter().enumerate() {
            if fk != 0 {
                let idx = d - e + k;
                v[idx] = ((v[idx] as u128 + m as u128 * fk as u128) % pn as u128) as u64;
            }
        }
    }
}

impl DvrElement {
    pub fn ring(&self) -> &DvrRing {
        &self.ring
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn repr_eq(&self, other: &DvrElement) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Mixed(a), Repr::Mixed(b)) => a == b,
            (Repr::Equal(a), Repr::Equal(b)) => a == b,
            _ => false,
        }
    }

    /// Zero out all digits at or above the precision bound.
    fn truncate_to_prec(&mut self) {
        let prec = self.prec;
        let ring = self.ring.clone();
        match &mut self.repr {
            Repr::Mixed(x) => {
                let e = x.len() as u32;
                for (i, c) in x.iter_mut().enumerate() {
                    let i = i as u32;
                    let keep = prec.saturating_sub(i);
                    let kd = keep.div_ceil(e).min(ring.0.n_prec);
                    *c %= pow_u64(ring.0.p, kd);
                }
            }
            Repr::Equal(x) => {
                for c in x.iter_mut().skip(prec as usize) {
                    *c = 0;
                }
            }
        }
    }

    /// Raw mixed-case coefficient vector (degree < e, mod p^N).
    pub fn mixed_coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Mixed(v) => Some(v),
            _ => None,
        }
    }
    pub fn equal_coeffs(&self) -> Option<&[FqElem]> {
        match &self.repr {
            Repr::Equal(v) => Some(v),
            _ => None,
        }
    }
}

impl PartialEq for DvrElement {
    fn eq(&self, other: &Self) -> bool {
        assert!(
            self.ring.same_ring(&other.ring),
            "elements belong to different rings"
        );
        self.ring.eq_at(self, other, self.prec.min(other.prec))
    }
}

impl fmt::Display for DvrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        let mut push = |i: usize, c: u64| {
            if c != 0 {
                terms.push(match i {
                    0 => format!("{c}"),
                    1 => format!("{c}*pi"),
                    _ => format!("{c}*pi^{i}"),
                });
            }
        };
        match &self.repr {
            Repr::Mixed(v) => {
                for (i, &c) in v.iter().enumerate() {
                    push(i, c);
                }
            }
            Repr::Equal(v) => {
                for (i, &c) in v.iter().enumerate() {
                    push(i, c as u64);
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " (prec {})", self.prec)
    }
}

// ---------------------------------------------------------------------------
// finite quotients R/lambda R
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct QuotientInner {
    dvr: DvrRing,
    /// v(lambda); the ideal (lambda) equals (pi^w)
    w: u32,
    modulus: DvrElement,
}

/// The finite quotient R/lambda R with an enumerable canonical residue system.
#[derive(Clone, Debug)]
pub struct QuotientRing(Arc<QuotientInner>);

/// Canonical residue: pi-adic digit vector of length v(lambda).
/// Digits are residue-field indices (see `Fq`). Ordering follows the fixed
/// enumeration order (digit-counter order, least-significant digit first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    pub digits: Vec<u8>,
}

impl QuotientRing {
    pub fn new(dvr: &DvrRing, modulus: &DvrElement) -> Result<QuotientRing> {
        let w = match dvr.valuation(modulus) {
            Some(v) => v,
            None => {
                return Err(Error::InsufficientPrecision(
                    "modulus is zero at working precision".into(),
                ))
            }
        };
        Ok(QuotientRing(Arc::new(QuotientInner {
            dvr: dvr.clone(),
            w,
            modulus: modulus.clone(),
        })))
    }

    /// Quotient by pi^w (unit scaling does not change the ideal).
    pub fn by_pi_power(dvr: &DvrRing, w: u32) -> Result<QuotientRing> {
        if w > dvr.cap() {
            return Err(Error::InsufficientPrecision(format!(
                "quotient modulus pi^{w} beyond cap {}",
                dvr.cap()
            )));
        }
        let modulus = dvr.pi_pow(w);
        Ok(QuotientRing(Arc::new(QuotientInner {
            dvr: dvr.clone(),
            w,
            modulus,
        })))
    }

    pub fn dvr(&self) -> &DvrRing {
        &self.0.dvr
    }
    pub fn modulus_valuation(&self) -> u32 {
        self.0.w
    }
    pub fn modulus(&self) -> &DvrElement {
        &self.0.modulus
    }
    pub fn is_zero_ring(&self) -> bool {
        self.0.w == 0
    }
    pub fn same_ring(&self, other: &QuotientRing) -> bool {
        self.0.dvr.same_ring(&other.0.dvr) && self.0.w == other.0.w
    }

    /// Residue count q^{v(lambda)}.
    pub fn residue_count(&self) -> u64 {
        self.0.dvr.residue_field().q().pow(self.0.w)
    }

    pub fn zero(&self) -> Residue {
        Residue {
            digits: vec![0; self.0.w as usize],
        }
    }
    pub fn one(&self) -> Residue {
        let mut r = self.zero();
        if self.0.w > 0 {
            r.digits[0] = 1;
        }
        r
    }
    pub fn from_i64(&self, n: i64) -> Residue {
        self.reduce(&self.0.dvr.from_i64(n))
            .expect("full-precision input")
    }

    /// Canonical digit expansion of x modulo pi^w.
    pub fn reduce(&self, x: &DvrElement) -> Result<Residue> {
        let w = self.0.w;
        if x.precision() < w {
            return Err(Error::InsufficientPrecision(format!(
                "reducing mod pi^{w} an element of precision {}",
                x.precision()
            )));
        }
        let dvr = &self.0.dvr;
        let mut digits = Vec::with_capacity(w as usize);
        let mut cur = x.clone();
        for _ in 0..w {
            let d: u8 = match &cur.repr {
                Repr::Mixed(v) => (v[0] % dvr.p()) as u8,
                Repr::Equal(v) => v[0],
            };
            digits.push(d);
            let dl = self.digit_lift(d);
            cur = dvr.sub(&cur, &dl);
            cur = dvr.divide_by_pi_once(&cur)?;
        }
        Ok(Residue { digits })
    }

    fn digit_lift(&self, d: u8) -> DvrElement {
        let dvr = &self.0.dvr;
        match &dvr.0.case {
            DvrCase::Mixed { .. } => dvr.from_i64(d as i64),
            DvrCase::Equal { .. } => {
                let mut v = vec![0u8; dvr.0.n_prec as usize];
                v[0] = d;
                DvrElement {
                    ring: dvr.clone(),
                    repr: Repr::Equal(v),
                    prec: dvr.0.cap,
                }
            }
        }
    }

    /// Canonical lift sum_i d_i pi^i; exact (full precision).
    pub fn lift(&self, r: &Residue) -> DvrElement {
        let dvr = &self.0.dvr;
        let mut acc = dvr.zero();
        for (i, &d) in r.digits.iter().enumerate() {
            let t = dvr.mul(&self.digit_lift(d), &dvr.pi_pow(i as u32));
            acc = dvr.add(&acc, &t);
        }
        acc
    }

    /// All residues, in the fixed enumeration order.
    pub fn enumerate(&self) -> Vec<Residue> {
        let q = self.0.dvr.residue_field().q();
        let w = self.0.w as usize;
        let mut out = Vec::with_capacity((q as usize).pow(w as u32));
        let mut digits = vec![0u8; w];
        loop {
            out.push(Residue {
                digits: digits.clone(),
            });
            let mut i = 0;
            loop {
                if i == w {
                    return out;
                }
                digits[i] += 1;
                if (digits[i] as u64) < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Residue {
        let s = self.0.dvr.add(&self.lift(a), &self.lift(b));
        self.reduce(&s).unwrap()
    }
    pub fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        let s = self.0.dvr.sub(&self.lift(a), &self.lift(b));
        self.reduce(&s).unwrap()
    }
    pub fn neg(&self, a: &Residue) -> Residue {
        let s = self.0.dvr.neg(&self.lift(a));
        self.reduce(&s).unwrap()
    }
    pub fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        let s = self.0.dvr.mul(&self.lift(a), &self.lift(b));
        self.reduce(&s).unwrap()
    }
    pub fn pow(&self, a: &Residue, n: u64) -> Residue {
        let s = self.0.dvr.pow(&self.lift(a), n);
        self.reduce(&s).unwrap()
    }
    pub fn inv(&self, a: &Residue) -> Result<Residue> {
        if self.is_zero_ring() {
            return Ok(self.zero());
        }
        if a.digits[0] == 0 {
            return Err(Error::NonUnit(0));
        }
        let l = self.lift(a);
        let li = self.0.dvr.inv(&l)?;
        self.reduce(&li)
    }
    pub fn from_int(&self, n: i64) -> Residue {
        self.from_i64(n)
    }
    pub fn is_zero(&self, a: &Residue) -> bool {
        a.digits.iter().all(|&d| d == 0)
    }
    /// Nilpotent in R/pi^w: zero constant digit (or the zero ring).
    pub fn is_nilpotent(&self, a: &Residue) -> bool {
        self.0.w == 0 || a.digits[0] == 0
    }
}

impl Residue {
    /// Position in the fixed enumeration order.
    pub fn order_key(&self, q: u64) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * q as u128 + d as u128)
    }
}

// ---------------------------------------------------------------------------
// plain-text configuration
// ---------------------------------------------------------------------------

/// Parse a key=value configuration:
///
/// ```text
/// p = 3
/// case = mixed
/// eisenstein = 3,9,18,21,15,6,1
/// precision = 6
/// ```
///
/// For the equal-characteristic case use `case = equal` and `q = 9`.
/// `eisenstein` lists ascending coefficients (constant term first).
pub fn parse_config(text: &str) -> Result<DvrRing> {
    let mut p: Option<u64> = None;
    let mut case: Option<String> = None;
    let mut q: Option<u64> = None;
    let mut eis: Option<Vec<i64>> = None;
    let mut prec: Option<u32> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::BadConfig(format!("bad config line: {line}")))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "p" => p = Some(v.parse().map_err(|_| Error::BadConfig("bad p".into()))?),
            "case" => case = Some(v.to_string()),
            "q" => q = Some(v.parse().map_err(|_| Error::BadConfig("bad q".into()))?),
            "e" => { /* implied by the Eisenstein polynomial degree */ }
            "eisenstein" => {
                let coeffs: std::result::Result<Vec<i64>, _> =
                    v.split(',').map(|c| c.trim().parse()).collect();
                eis = Some(coeffs.map_err(|_| Error::BadConfig("bad eisenstein list".into()))?);
            }
            "precision" | "N" => {
                prec = Some(
                    v.parse()
                        .map_err(|_| Error::BadConfig("bad precision".into()))?,
                )
            }
            _ => return Err(Error::BadConfig(format!("unknown config key: {k}"))),
        }
    }
    let p = p.ok_or_else(|| Error::BadConfig("missing p".into()))?;
    let case = case.ok_or_else(|| Error::BadConfig("missing case".into()))?;
    let prec = prec.ok_or_else(|| Error::BadConfig("missing precision".into()))?;
    match case.as_str() {
        "mixed" => {
            let eis = eis.ok_or_else(|| Error::BadConfig("missing eisenstein".into()))?;
            DvrRing::mixed(p, prec, &eis)
        }
        "equal" => {
            let q = q.unwrap_or(p);
            let mut f = 0u32;
            let mut qq = q;
            while qq > 1 && qq.is_multiple_of(p) {
                qq /= p;
                f += 1;
            }
            if qq != 1 || f == 0 {
                return Err(Error::BadConfig(format!("q={q} is not a power of p={p}")));
            }
            DvrRing::equal(p, f, prec)
        }
        other => Err(Error::BadConfig(format!("unknown case: {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_ring() -> DvrRing {
        // p=3, E(u) = u^2 - 3
        DvrRing::mixed(3, 6, &[-3, 0, 1]).unwrap()
    }

    #[test]
    fn add_identity_and_eisenstein_reduction() {
        let r = z3_ring();
        let pi = r.pi();
        let x = r.add(&r.from_i64(5), &r.mul(&pi, &r.from_i64(2)));
        assert_eq!(r.add(&x, &r.zero()), x);
        // pi + pi = 2 pi
        assert_eq!(r.add(&pi, &pi), r.mul(&r.from_i64(2), &pi));
        // pi^2 reduces to 3
        assert_eq!(r.mul(&pi, &pi), r.from_i64(3));
    }

    #[test]
    fn inverse_of_one_plus_pi() {
        let r = z3_ring();
        let x = r.add(&r.one(), &r.pi());
        let y = r.inv(&x).unwrap();
        assert!(r.is_zero(&r.sub(&r.mul(&x, &y), &r.one())));
    }

    #[test]
    fn valuations() {
        let r = z3_ring();
        assert_eq!(r.valuation(&r.zero()), None);
        assert_eq!(r.valuation(&r.from_i64(3)), Some(2));
        let u = r.add(&r.one(), &r.pi());
        assert_eq!(r.valuation(&r.mul(&r.pi(), &u)), Some(1));
    }

    #[test]
    fn exact_divide_binomial() {
        let r = z3_ring();
        // ((1+pi)^3 - 1)/pi  ->  canonical form of 3 + 3 pi + pi^2
        let x = r.sub(&r.pow(&r.add(&r.one(), &r.pi()), 3), &r.one());
        let y = r.exact_divide(&x, 1).unwrap();
        let expect = {
            let a = r.from_i64(3);
            let b = r.mul(&r.from_i64(3), &r.pi());
            let c = r.mul(&r.pi(), &r.pi());
            r.add(&r.add(&a, &b), &c)
        };
        assert!(r.eq_at(&y, &expect, y.precision()));
        // re-multiplying by pi recovers x at the reduced precision
        let back = r.mul(&y, &r.pi());
        assert!(r.eq_at(&back, &x, y.precision()));
        // pi^3 / pi^2 = pi
        assert_eq!(r.exact_divide(&r.pi_pow(3), 2).unwrap(), r.pi());
        // pi / pi^2 fails
        assert!(matches!(
            r.exact_divide(&r.pi(), 2),
            Err(Error::NotDivisible { needed: 2, have: 1 })
        ));
    }

    #[test]
    fn reduce_and_lift_roundtrip() {
        // equal char p=2, q=4, modulus pi^2: all 16 residues round-trip
        let r = DvrRing::equal(2, 2, 8).unwrap();
        let q = QuotientRing::by_pi_power(&r, 2).unwrap();
        assert_eq!(q.residue_count(), 16);
        let all = q.enumerate();
        assert_eq!(all.len(), 16);
        for res in &all {
            assert_eq!(&q.reduce(&q.lift(res)).unwrap(), res);
        }
        // reduce_mod(lambda) = 0
        let lam = r.pi_pow(2);
        assert!(q.is_zero(&q.reduce(&lam).unwrap()));
        // 1 + pi + pi^2 reduces to 1 + pi mod pi^2
        let x = r.add(&r.add(&r.one(), &r.pi()), &r.pi_pow(2));
        let red = q.reduce(&x).unwrap();
        assert_eq!(red.digits, vec![1, 1]);
    }

    #[test]
    fn residue_counts_mixed() {
        let r = z3_ring();
        let q = QuotientRing::by_pi_power(&r, 2).unwrap();
        assert_eq!(q.residue_count(), 9);
        assert_eq!(q.enumerate().len(), 9);
        // zero ring convention
        let q0 = QuotientRing::by_pi_power(&r, 0).unwrap();
        assert_eq!(q0.enumerate().len(), 1);
        assert!(q0.is_zero_ring());
    }

    #[test]
    fn zeta2_detection() {
        // p=2: pi = zeta_4 - 1 has minimal polynomial u^2 + 2u + 2
        let r = DvrRing::mixed(2, 10, &[2, 2, 1]).unwrap();
        assert!(r.has_zeta2());
        let l1 = r.lambda1().unwrap();
        assert_eq!(r.valuation(&l1), Some(2)); // v(lambda_1) = v(p)/(p-1) = 2
                                               // p=3, e=2 non-cyclotomic ring
        let r2 = z3_ring();
        assert!(!r2.has_zeta2());
        assert!(r2.lambda1().is_err());
    }

    #[test]
    fn config_parse() {
        let r = parse_config("p = 3\ncase = mixed\neisenstein = -3,0,1\nprecision = 6\n").unwrap();
        assert!(r.is_mixed());
        assert_eq!(r.val_p(), Some(2));
        let r2 = parse_config("p = 2\ncase = equal\nq = 4\nprecision = 8\n").unwrap();
        assert_eq!(r2.residue_field().q(), 4);
    }
}
