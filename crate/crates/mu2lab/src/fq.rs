//! Small finite fields F_q, q = p^f, with table-driven arithmetic.
//!
//! Elements are indices 0..q into a fixed enumeration: the element with
//! polynomial coordinates (c_0, ..., c_{f-1}) over F_p has index
//! sum c_i p^i. Index 0 is zero and index 1 is one.

use crate::error::{Error, Result};
use std::sync::Arc;

#[derive(Debug)]
struct FqTables {
    p: u64,
    f: u32,
    q: u64,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>, // inv[0] unused
    frob: Vec<u8>,
    modulus: Vec<u8>, // monic irreducible of degree f, ascending, length f+1
}

/// A finite field F_q shared behind an `Arc`; cloning is cheap.
#[derive(Clone, Debug)]
pub struct Fq {
    t: Arc<FqTables>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

pub type FqElem = u8;

fn poly_of_index(mut i: u64, p: u64, f: u32) -> Vec<u8> {
    let mut c = vec![0u8; f as usize];
    for ck in c.iter_mut() {
        *ck = (i % p) as u8;
        i /= p;
    }
    c
}

fn index_of_poly(c: &[u8], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
}

/// Multiply two F_p[x] polynomials and reduce by the monic modulus.
fn polymul_mod(a: &[u8], b: &[u8], modulus: &[u8], p: u64) -> Vec<u8> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    // reduce by x^f = -(modulus - x^f)
    for d in (f..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..f {
            let m = modulus[k] as u64;
            if m != 0 {
                let idx = d - f + k;
                prod[idx] = (prod[idx] + c * (p - m)) % p;
            }
        }
    }
    prod.truncate(f);
    let mut out = vec![0u8; f];
    for (o, v) in out.iter_mut().zip(prod) {
        *o = v as u8;
    }
    out
}

fn is_irreducible(m: &[u8], p: u64) -> bool {
    // no roots, and for degree 4 no irreducible quadratic factors; enough for f <= 4
    let f = m.len() - 1;
    let eval = |x: u64| -> u64 {
        m.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x + c as u64) % p)
    };
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    if f == 4 {
        // trial division by monic irreducible quadratics
        for b in 0..p {
            for c in 0..p {
                let quad = [c as u8, b as u8, 1u8];
                if (0..p).any(|x| (x * x + b * x + c) % p == 0) {
                    continue;
                }
                if poly_divides(&quad, m, p) {
                    return false;
                }
            }
        }
    }
    true
}

fn poly_divides(d: &[u8], m: &[u8], p: u64) -> bool {
    // monic divisor; returns true if remainder of m by d is zero
    let mut r: Vec<u64> = m.iter().map(|&c| c as u64).collect();
    let dd = d.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let deg = r.len() - 1;
        if lead != 0 {
            for k in 0..dd {
                let idx = deg - dd + k;
                r[idx] = (r[idx] + lead * (p - d[k] as u64)) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

impl Fq {
    /// Build F_q for q = p^f. Picks the lexicographically first monic
    /// irreducible polynomial of degree f as modulus.
    pub fn new(p: u64, f: u32) -> Result<Fq> {
        if f == 0 || f > 4 {
            return Err(Error::BadConfig(format!(
                "unsupported residue degree f={f}"
            )));
        }
        if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::BadConfig(format!("p={p} is not prime")));
        }
        let q = p
            .checked_pow(f)
            .ok_or_else(|| Error::BadConfig("q overflow".into()))?;
        if q > 256 {
            return Err(Error::BadConfig(format!("q={q} too large (max 256)")));
        }
        let mut modulus = vec![0u8; f as usize + 1];
        modulus[f as usize] = 1;
        if f > 1 {
            let count = p.pow(f);
            let mut found = false;
            for low in 0..count {
                let mut m = poly_of_index(low, p, f);
                m.push(1);
                if is_irreducible(&m, p) {
                    modulus = m;
                    found = true;
                    break;
                }
            }
            assert!(found, "no irreducible polynomial found");
        }
        let qu = q as usize;
        let mut add = vec![0u8; qu * qu];
        let mut mul = vec![0u8; qu * qu];
        let mut neg = vec![0u8; qu];
        for i in 0..q {
            let pi = poly_of_index(i, p, f);
            let ni: Vec<u8> = pi.iter().map(|&c| ((p - c as u64) % p) as u8).collect();
            neg[i as usize] = index_of_poly(&ni, p) as u8;
            for j in 0..q {
                let pj = poly_of_index(j, p, f);
                let s: Vec<u8> = pi
                    .iter()
                    .zip(&pj)
                    .map(|(&a, &b)| ((a as u64 + b as u64) % p) as u8)
                    .collect();
                add[(i * q + j) as usize] = index_of_poly(&s, p) as u8;
                let m = polymul_mod(&pi, &pj, &modulus, p);
                mul[(i * q + j) as usize] = index_of_poly(&m, p) as u8;
            }
        }
        let mut inv = vec![0u8; qu];
        for i in 1..q {
            for j in 1..q {
                if mul[(i * q + j) as usize] == 1 {
                    inv[i as usize] = j as u8;
                    break;
                }
            }
            assert_ne!(inv[i as usize], 0, "field element without inverse");
        }
        let mut frob = vec![0u8; qu];
        for i in 0..q {
            let mut acc = 1u8;
            for _ in 0..p {
                acc = mul[(acc as u64 * q + i) as usize];
            }
            frob[i as usize] = acc;
        }
        Ok(Fq {
            t: Arc::new(FqTables {
                p,
                f,
                q,
                add,
                mul,
                neg,
                inv,
                frob,
                modulus,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.t.p
    }
    pub fn f(&self) -> u32 {
        self.t.f
    }
    pub fn q(&self) -> u64 {
        self.t.q
    }
    pub fn modulus(&self) -> &[u8] {
        &self.t.modulus
    }

    pub fn zero(&self) -> FqElem {
        0
    }
    pub fn one(&self) -> FqElem {
        1
    }
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.t.neg[a as usize]
    }
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a == 0 {
            return Err(Error::NonUnit(0));
        }
        Ok(self.t.inv[a as usize])
    }
    /// x -> x^p, the arithmetic Frobenius of F_q.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.t.frob[a as usize]
    }
    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// Canonical image of an integer.
    pub fn from_i64(&self, n: i64) -> FqElem {
        let p = self.t.p as i64;
        let r = ((n % p) + p) % p;
        r as u8 // integers land in the prime subfield, index = residue
    }
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.t.q).map(|i| i as u8)
    }
    pub fn same_field(&self, other: &Fq) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || (self.t.p == other.t.p && self.t.f == other.t.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_has_sixteen_products() {
        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.q(), 4);
        // x^2 + x + 1 is the first irreducible quadratic over F_2
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        // every nonzero element has an inverse
        for a in 1..4u8 {
            let b = f4.inv(a).unwrap();
            assert_eq!(f4.mul(a, b), 1);
        }
        // frobenius squares: x -> x^2 permutes, fixes prime field
        assert_eq!(f4.frobenius(0), 0);
        assert_eq!(f4.frobenius(1), 1);
        assert_eq!(f4.frobenius(f4.frobenius(2)), 2);
    }

    #[test]
    fn f9_field_axioms() {
        let f9 = Fq::new(3, 2).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(f9.add(a, b), f9.add(b, a));
                assert_eq!(f9.mul(a, b), f9.mul(b, a));
                for c in f9.elements() {
                    assert_eq!(f9.mul(a, f9.add(b, c)), f9.add(f9.mul(a, b), f9.mul(a, c)));
                }
            }
        }
    }
}
