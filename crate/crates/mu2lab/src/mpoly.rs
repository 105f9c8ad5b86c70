//! Sparse multivariate polynomials over any [`Ring`], with normal-form
//! reduction by triangular monic rewrite systems. This is the workhorse for
//! Witt structure constants, functional-equation checks and Hopf-axiom
//! verification in tensor powers of coordinate rings.

use crate::error::Result;
use crate::ring::Ring;
use std::collections::BTreeMap;

pub type Mono = Vec<u16>;

#[derive(Clone)]
pub struct MPoly<R: Ring> {
    pub ring: R,
    pub nvars: usize,
    pub terms: BTreeMap<Mono, R::Elem>,
}

impl<R: Ring> std::fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MPoly{{{} vars: ", self.nvars)?;
        for (m, c) in &self.terms {
            write!(f, "{m:?}:{c:?} ")?;
        }
        write!(f, "}}")
    }
}

impl<R: Ring> MPoly<R> {
    pub fn zero(ring: &R, nvars: usize) -> Self {
        MPoly {
            ring: ring.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, nvars: usize, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, nvars);
        if !ring.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(ring: &R, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }

    pub fn var(ring: &R, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut m = vec![0u16; nvars];
        m[i] = 1;
        let mut p = Self::zero(ring, nvars);
        p.terms.insert(m, ring.one());
        p
    }

    pub fn from_terms(ring: &R, nvars: usize, terms: Vec<(Mono, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (m, c) in terms {
            p.add_term(&m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> R::Elem {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff(&self, m: &Mono) -> R::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn add_term(&mut self, m: &Mono, c: R::Elem) {
        if self.ring.is_zero(&c) && !self.ring.keep_zero_term(&c) {
            return;
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                let s = self.ring.add(existing, &c);
                if self.ring.is_zero(&s) && !self.ring.keep_zero_term(&s) {
                    self.terms.remove(m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m.clone(), c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(&self.ring, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(&x, &y)| x + y).collect();
                out.add_term(&m, self.ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m, self.ring.mul(v, c));
        }
        out
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(&self.ring, self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Substitute args[i] for variable i. Args may live in a different
    /// variable count; all args must share nvars.
    pub fn subst(&self, args: &[Self]) -> Self {
        assert_eq!(args.len(), self.nvars);
        let out_nvars = args.first().map_or(self.nvars, |a| a.nvars);
        let mut out = Self::zero(&self.ring, out_nvars);
        // memoize powers of each argument
        let mut pows: Vec<Vec<Self>> = args
            .iter()
            .map(|a| vec![Self::one(&self.ring, out_nvars), a.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut term = Self::constant(&self.ring, out_nvars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&args[i]);
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Map coefficients into another ring.
    pub fn map_coeffs<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, ring: &S, f: F) -> MPoly<S> {
        let mut out = MPoly::zero(ring, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m, f(c));
        }
        out
    }

    /// Map coefficients fallibly.
    pub fn try_map_coeffs<S: Ring, F: Fn(&R::Elem) -> Result<S::Elem>>(
        &self,
        ring: &S,
        f: F,
    ) -> Result<MPoly<S>> {
        let mut out = MPoly::zero(ring, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m, f(c)?);
        }
        Ok(out)
    }

    /// Insert the polynomial into a larger variable set, placing variable i
    /// at position offset + i.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        let mut out = Self::zero(&self.ring, nvars);
        for (m, c) in &self.terms {
            let mut mm = vec![0u16; nvars];
            mm[offset..offset + self.nvars].copy_from_slice(m);
            out.terms.insert(mm, c.clone());
        }
        out
    }
}

impl<R: Ring> PartialEq for MPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((ma, ca), (mb, cb))| ma == mb && ca == cb)
    }
}

/// Polynomials over a base ring, viewed as a coefficient ring themselves
/// (used for series whose coefficients are polynomials in deformation
/// parameters).
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub nvars: usize,
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = MPoly<R>;
    fn zero(&self) -> MPoly<R> {
        MPoly::zero(&self.base, self.nvars)
    }
    fn one(&self) -> MPoly<R> {
        MPoly::one(&self.base, self.nvars)
    }
    fn add(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.add(b)
    }
    fn neg(&self, a: &MPoly<R>) -> MPoly<R> {
        a.neg()
    }
    fn mul(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.mul(b)
    }
    fn is_zero(&self, a: &MPoly<R>) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, n: &num_bigint::BigInt) -> MPoly<R> {
        MPoly::constant(&self.base, self.nvars, self.base.from_bigint(n))
    }
    fn from_ratio(&self, num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> Result<MPoly<R>> {
        Ok(MPoly::constant(
            &self.base,
            self.nvars,
            self.base.from_ratio(num, den)?,
        ))
    }
}

/// Rewrite rule T_var^deg -> rhs, with rhs of strictly smaller degree in
/// `var`. A triangular family of monic relations (one per generator, each
/// rhs only involving generators of the same tensor block at equal or lower
/// level) yields unique normal forms.
#[derive(Clone, Debug)]
pub struct RewriteRule<R: Ring> {
    pub var: usize,
    pub deg: u16,
    pub rhs: MPoly<R>,
}

#[derive(Clone, Debug)]
pub struct ReductionSystem<R: Ring> {
    pub rules: Vec<RewriteRule<R>>,
}

impl<R: Ring> ReductionSystem<R> {
    pub fn new(rules: Vec<RewriteRule<R>>) -> Self {
        for r in &rules {
            assert!(
                r.rhs.degree_in(r.var) < r.deg,
                "rewrite rule must lower its own variable"
            );
        }
        ReductionSystem { rules }
    }

    /// From a monic relation rel = T_var^deg + tail: T_var^deg -> -tail.
    pub fn rule_from_monic(rel: &MPoly<R>, var: usize) -> RewriteRule<R> {
        let deg = rel.degree_in(var);
        let mut lead_mono = vec![0u16; rel.nvars];
        lead_mono[var] = deg;
        let lead = rel.coeff(&lead_mono);
        assert!(
            lead == rel.ring.one(),
            "relation must be monic in its lead variable"
        );
        let mut tail = rel.clone();
        tail.terms.remove(&lead_mono);
        RewriteRule {
            var,
            deg,
            rhs: tail.neg(),
        }
    }

    pub fn normal_form(&self, f: &MPoly<R>) -> MPoly<R> {
        let mut cur = f.clone();
        'outer: loop {
            for rule in &self.rules {
                let hit = cur
                    .terms
                    .iter()
                    .find(|(m, _)| m[rule.var] >= rule.deg)
                    .map(|(m, c)| (m.clone(), c.clone()));
                if let Some((m, c)) = hit {
                    cur.terms.remove(&m);
                    let mut rest = m.clone();
                    rest[rule.var] -= rule.deg;
                    let mut piece = MPoly::zero(&cur.ring, cur.nvars);
                    piece.terms.insert(rest, c);
                    cur = cur.add(&rule.rhs.mul(&piece));
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Lift the system to a tensor power: block b of `copies` gets variable
    /// i at position b*block_size + i.
    pub fn tensor(&self, block_size: usize, copies: usize) -> ReductionSystem<R> {
        let nvars = block_size * copies;
        let mut rules = Vec::new();
        for b in 0..copies {
            for r in &self.rules {
                rules.push(RewriteRule {
                    var: b * block_size + r.var,
                    deg: r.deg,
                    rhs: r.rhs.embed(nvars, b * block_size),
                });
            }
        }
        ReductionSystem { rules }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ZZ;
    use num_bigint::BigInt;

    #[test]
    fn arithmetic_and_substitution() {
        let r = ZZ;
        let x = MPoly::var(&r, 2, 0);
        let y = MPoly::var(&r, 2, 1);
        let f = x.add(&y).pow(2);
        let expect = x
            .pow(2)
            .add(&x.mul(&y).scale(&BigInt::from(2)))
            .add(&y.pow(2));
        assert_eq!(f, expect);
        // substitute x -> y, y -> 0: (y)^2
        let g = f.subst(&[y.clone(), MPoly::zero(&r, 2)]);
        assert_eq!(g, y.pow(2));
    }

    #[test]
    fn normal_form_by_monic_relation() {
        let r = ZZ;
        // relation x^2 - 2 (i.e. x^2 -> 2), reduce x^3 + x^2
        let x = MPoly::var(&r, 1, 0);
        let rel = x.pow(2).sub(&MPoly::constant(&r, 1, BigInt::from(2)));
        let sys = ReductionSystem::new(vec![ReductionSystem::rule_from_monic(&rel, 0)]);
        let f = x.pow(3).add(&x.pow(2));
        let nf = sys.normal_form(&f);
        // x^3 -> 2x, x^2 -> 2
        let expect = x
            .scale(&BigInt::from(2))
            .add(&MPoly::constant(&r, 1, BigInt::from(2)));
        assert_eq!(nf, expect);
    }
}
