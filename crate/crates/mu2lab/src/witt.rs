//! p-typical Witt vectors over arbitrary coefficient rings.
//!
//! The universal structure polynomials (sum, product, additive inverse,
//! Frobenius components, and for p = 2 the twisted Verschiebung) are computed
//! once per (p, window) by exact integer recursion against the ghost
//! polynomials Phi_r(T) = T_0^{p^r} + p T_1^{p^{r-1}} + ... + p^r T_r, with
//! every division checked for exactness; a non-integral quotient aborts.
//!
//! Window discipline: a vector of window n stands for the finite-support
//! vector (a_0, ..., a_{n-1}, 0, 0, ...). Binary operations require equal
//! windows. Frobenius fills a caller-chosen output window (its true support
//! can exceed the input window); Verschiebung widens the window by one.

use crate::dvr::{DvrElement, QuotientRing, Residue};
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::{DvrCoeff, ResidueRing, Ring, ZZ};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<E> {
    pub entries: Vec<E>,
}

impl<E: Clone> WittVector<E> {
    pub fn window(&self) -> usize {
        self.entries.len()
    }
    pub fn zero_extend(&self, m: usize, zero: E) -> Self {
        assert!(m >= self.entries.len());
        let mut v = self.entries.clone();
        v.resize(m, zero);
        WittVector { entries: v }
    }
}

/// Universal integer structure polynomials for one (p, window).
#[derive(Debug)]
pub struct StructurePolynomials {
    pub p: u64,
    pub window: usize,
    /// sum components, window polys in 2*window vars (U then V)
    pub sum: Vec<MPoly<ZZ>>,
    /// product components, window polys in 2*window vars
    pub prod: Vec<MPoly<ZZ>>,
    /// additive inverse components, window polys in window vars
    pub neg: Vec<MPoly<ZZ>>,
    /// Frobenius components F_r, window polys in window+1 vars
    pub frob: Vec<MPoly<ZZ>>,
    /// p = 2 twisted Verschiebung components, window polys in window vars
    pub vtilde: Option<Vec<MPoly<ZZ>>>,
}

fn ghost_poly(polys: &[MPoly<ZZ>], p: u64, r: usize) -> MPoly<ZZ> {
    // Phi_r(x_0..x_r) evaluated at the given polynomials
    let ring = ZZ;
    let nvars = polys[0].nvars;
    let mut acc = MPoly::zero(&ring, nvars);
    for (i, q) in polys.iter().enumerate().take(r + 1) {
        let pk = BigInt::from(p).pow(i as u32);
        let e = p.pow((r - i) as u32);
        acc = acc.add(&q.pow(e).scale(&pk));
    }
    acc
}

fn div_exact(poly: &MPoly<ZZ>, d: &BigInt) -> Result<MPoly<ZZ>> {
    let ring = ZZ;
    let mut out = MPoly::zero(&ring, poly.nvars);
    for (m, c) in &poly.terms {
        if !(c % d).is_zero() {
            return Err(Error::NonIntegralCoefficient(format!(
                "coefficient {c} not divisible by {d} in structure recursion"
            )));
        }
        out.terms.insert(m.clone(), c / d);
    }
    Ok(out)
}

/// Phi_r in `nvars` variables starting at `offset`.
fn phi_in_vars(p: u64, r: usize, nvars: usize, offset: usize) -> MPoly<ZZ> {
    let ring = ZZ;
    let vars: Vec<MPoly<ZZ>> = (0..=r)
        .map(|i| MPoly::var(&ring, nvars, offset + i))
        .collect();
    ghost_poly(&vars, p, r)
}

pub fn build_structure_polynomials(p: u64, window: usize) -> Result<Arc<StructurePolynomials>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<StructurePolynomials>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(sp) = cache.lock().unwrap().get(&(p, window)) {
        return Ok(sp.clone());
    }
    assert!(window >= 1);
    let ring = ZZ;
    let two_n = 2 * window;

    // sum: Phi_r(s) = Phi_r(U) + Phi_r(V)
    let mut sum: Vec<MPoly<ZZ>> = Vec::with_capacity(window);
    for r in 0..window {
        let target = phi_in_vars(p, r, two_n, 0).add(&phi_in_vars(p, r, two_n, window));
        let mut rest = target;
        for (i, s) in sum.iter().enumerate() {
            let pk = BigInt::from(p).pow(i as u32);
            let e = p.pow((r - i) as u32);
            rest = rest.sub(&s.pow(e).scale(&pk));
        }
        sum.push(div_exact(&rest, &BigInt::from(p).pow(r as u32))?);
    }

    // product: Phi_r(m) = Phi_r(U) * Phi_r(V)
    let mut prod: Vec<MPoly<ZZ>> = Vec::with_capacity(window);
    for r in 0..window {
        let target = phi_in_vars(p, r, two_n, 0).mul(&phi_in_vars(p, r, two_n, window));
        let mut rest = target;
        for (i, s) in prod.iter().enumerate() {
            let pk = BigInt::from(p).pow(i as u32);
            let e = p.pow((r - i) as u32);
            rest = rest.sub(&s.pow(e).scale(&pk));
        }
        prod.push(div_exact(&rest, &BigInt::from(p).pow(r as u32))?);
    }

    // additive inverse: Phi_r(n) = -Phi_r(T)
    let mut neg: Vec<MPoly<ZZ>> = Vec::with_capacity(window);
    for r in 0..window {
        let target = phi_in_vars(p, r, window, 0).neg();
        let mut rest = target;
        for (i, s) in neg.iter().enumerate() {
            let pk = BigInt::from(p).pow(i as u32);
            let e = p.pow((r - i) as u32);
            rest = rest.sub(&s.pow(e).scale(&pk));
        }
        neg.push(div_exact(&rest, &BigInt::from(p).pow(r as u32))?);
    }

    // Frobenius: Phi_r(F_0..F_r) = Phi_{r+1}(T), window+1 vars
    let mut frob: Vec<MPoly<ZZ>> = Vec::with_capacity(window);
    for r in 0..window {
        let target = phi_in_vars(p, r + 1, window + 1, 0);
        let mut rest = target;
        for (i, s) in frob.iter().enumerate() {
            let pk = BigInt::from(p).pow(i as u32);
            let e = p.pow((r - i) as u32);
            rest = rest.sub(&s.pow(e).scale(&pk));
        }
        frob.push(div_exact(&rest, &BigInt::from(p).pow(r as u32))?);
    }

    // p = 2 twist: VT_0 = 0, Phi_r(VT_0..VT_r) = 2^{2^r} Phi_{r-1}(T)
    let vtilde = if p == 2 {
        let mut vt: Vec<MPoly<ZZ>> = vec![MPoly::zero(&ring, window)];
        for r in 1..window {
            let scale = BigInt::from(2).pow(1u32 << r);
            let target = phi_in_vars(2, r - 1, window, 0).scale(&scale);
            let mut rest = target;
            for (i, s) in vt.iter().enumerate() {
                let pk = BigInt::from(2).pow(i as u32);
                let e = 2u64.pow((r - i) as u32);
                rest = rest.sub(&s.pow(e).scale(&pk));
            }
            vt.push(div_exact(&rest, &BigInt::from(2).pow(r as u32))?);
        }
        Some(vt)
    } else {
        None
    };

    let sp = Arc::new(StructurePolynomials {
        p,
        window,
        sum,
        prod,
        neg,
        frob,
        vtilde,
    });
    cache.lock().unwrap().insert((p, window), sp.clone());
    Ok(sp)
}

/// Symbolic sanity of the cached polynomials: ghost identities hold exactly.
pub fn verify_ghost_identities(p: u64, window: usize) -> Result<()> {
    let sp = build_structure_polynomials(p, window)?;
    let two_n = 2 * window;
    for r in 0..window {
        let lhs = ghost_poly(&sp.sum, p, r);
        let rhs = phi_in_vars(p, r, two_n, 0).add(&phi_in_vars(p, r, two_n, window));
        if lhs != rhs {
            return Err(Error::NonIntegralCoefficient(format!(
                "sum ghost identity fails at {r}"
            )));
        }
        let lhs = ghost_poly(&sp.prod, p, r);
        let rhs = phi_in_vars(p, r, two_n, 0).mul(&phi_in_vars(p, r, two_n, window));
        if lhs != rhs {
            return Err(Error::NonIntegralCoefficient(format!(
                "prod ghost identity fails at {r}"
            )));
        }
        let lhs = ghost_poly(&sp.frob, p, r);
        let rhs = phi_in_vars(p, r + 1, window + 1, 0);
        if lhs != rhs {
            return Err(Error::NonIntegralCoefficient(format!(
                "frob ghost identity fails at {r}"
            )));
        }
        if let Some(vt) = &sp.vtilde {
            if r >= 1 {
                let lhs = ghost_poly(vt, 2, r);
                let rhs = phi_in_vars(2, r - 1, window, 0).scale(&BigInt::from(2).pow(1u32 << r));
                if lhs != rhs {
                    return Err(Error::NonIntegralCoefficient(format!(
                        "twisted Verschiebung ghost identity fails at {r}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn eval_zz<R: Ring>(poly: &MPoly<ZZ>, ring: &R, args: &[R::Elem]) -> R::Elem {
    let mut pows: Vec<Vec<R::Elem>> = args.iter().map(|a| vec![ring.one(), a.clone()]).collect();
    let mut acc = ring.zero();
    for (m, c) in &poly.terms {
        let mut term = ring.from_bigint(c);
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while pows[i].len() <= e as usize {
                let next = ring.mul(pows[i].last().unwrap(), &args[i]);
                pows[i].push(next);
            }
            term = ring.mul(&term, &pows[i][e as usize]);
        }
        acc = ring.add(&acc, &term);
    }
    acc
}

pub fn witt_add<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
    b: &WittVector<R::Elem>,
) -> Result<WittVector<R::Elem>> {
    let n = a.window();
    assert_eq!(n, b.window(), "window mismatch");
    let sp = build_structure_polynomials(p, n)?;
    let args: Vec<R::Elem> = a.entries.iter().chain(&b.entries).cloned().collect();
    Ok(WittVector {
        entries: sp.sum.iter().map(|q| eval_zz(q, ring, &args)).collect(),
    })
}

pub fn witt_mul<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
    b: &WittVector<R::Elem>,
) -> Result<WittVector<R::Elem>> {
    let n = a.window();
    assert_eq!(n, b.window(), "window mismatch");
    let sp = build_structure_polynomials(p, n)?;
    let args: Vec<R::Elem> = a.entries.iter().chain(&b.entries).cloned().collect();
    Ok(WittVector {
        entries: sp.prod.iter().map(|q| eval_zz(q, ring, &args)).collect(),
    })
}

pub fn witt_neg<R: Ring>(ring: &R, p: u64, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
    let sp = build_structure_polynomials(p, a.window())?;
    Ok(WittVector {
        entries: sp
            .neg
            .iter()
            .map(|q| eval_zz(q, ring, &a.entries))
            .collect(),
    })
}

pub fn witt_sub<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
    b: &WittVector<R::Elem>,
) -> Result<WittVector<R::Elem>> {
    witt_add(ring, p, a, &witt_neg(ring, p, b)?)
}

/// k * a by double-and-add.
pub fn witt_scalar_int<R: Ring>(
    ring: &R,
    p: u64,
    k: u64,
    a: &WittVector<R::Elem>,
) -> Result<WittVector<R::Elem>> {
    let zero = WittVector {
        entries: vec![ring.zero(); a.window()],
    };
    let mut acc = zero;
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = witt_add(ring, p, &acc, &base)?;
        }
        if k > 1 {
            base = witt_add(ring, p, &base, &base)?;
        }
        k >>= 1;
    }
    Ok(acc)
}

/// Entries 0..out-1 of the Frobenius image of the finite-support vector a.
pub fn frobenius_ext<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
    out: usize,
) -> Result<WittVector<R::Elem>> {
    let sp = build_structure_polynomials(p, out)?;
    let ext = a.zero_extend(a.window().max(out + 1), ring.zero());
    let args = &ext.entries[..out + 1];
    Ok(WittVector {
        entries: sp.frob.iter().map(|q| eval_zz(q, ring, args)).collect(),
    })
}

/// Frobenius, truncated to the input window.
pub fn frobenius<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
) -> Result<WittVector<R::Elem>> {
    frobenius_ext(ring, p, a, a.window())
}

/// Verschiebung (shift); widens the window by one.
pub fn verschiebung<R: Ring>(ring: &R, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
    let mut v = Vec::with_capacity(a.window() + 1);
    v.push(ring.zero());
    v.extend(a.entries.iter().cloned());
    WittVector { entries: v }
}

/// Entries 0..out-1 of the p = 2 twisted Verschiebung image.
pub fn tilde_verschiebung<R: Ring>(
    ring: &R,
    p: u64,
    a: &WittVector<R::Elem>,
    out: usize,
) -> Result<WittVector<R::Elem>> {
    if p != 2 {
        return Err(Error::WrongPrime {
            expected: 2,
            found: p,
        });
    }
    let sp = build_structure_polynomials(2, out)?;
    let vt = sp.vtilde.as_ref().unwrap();
    let ext = a.zero_extend(a.window().max(out), ring.zero());
    let args = &ext.entries[..out];
    Ok(WittVector {
        entries: vt.iter().map(|q| eval_zz(q, ring, args)).collect(),
    })
}

pub fn teichmuller<R: Ring>(ring: &R, x: &R::Elem, window: usize) -> WittVector<R::Elem> {
    let mut entries = vec![ring.zero(); window];
    entries[0] = x.clone();
    WittVector { entries }
}

/// Ghost components Phi_0..Phi_{n-1}.
pub fn ghost<R: Ring>(ring: &R, p: u64, a: &WittVector<R::Elem>) -> Vec<R::Elem> {
    (0..a.window())
        .map(|r| {
            let mut acc = ring.zero();
            for i in 0..=r {
                let pk = ring.from_bigint(&BigInt::from(p).pow(i as u32));
                let e = p.pow((r - i) as u32);
                acc = ring.add(&acc, &ring.mul(&pk, &ring.pow(&a.entries[i], e)));
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// kernels and the maps used by the classification
// ---------------------------------------------------------------------------

fn ceil_log(p: u64, w: u32) -> usize {
    let mut t = 0;
    let mut acc: u64 = 1;
    while acc < w as u64 {
        acc *= p;
        t += 1;
    }
    t
}

/// Output window guaranteeing that the Frobenius image and the Teichmueller
/// multiple of a window-n nilpotent-entry vector both vanish beyond it.
/// Structure components are isobaric, so a component at index r evaluates to
/// a sum of monomials of total degree >= p^{r+1-n}; with all entries in the
/// maximal ideal these die in R/pi^w once p^{r+1-n} >= w.
fn support_bound(p: u64, window: usize, w: u32) -> usize {
    window.max(window - 1 + ceil_log(p, w)).max(window)
}

/// All finite-support vectors in the window with nilpotent entries and
/// F(a) = [mu^{p-1}] a, over R/lambda R. With `strict`, a solution with a
/// nonzero boundary entry aborts (the kernel may continue past the window).
pub fn kernel_f_minus_teich(
    q: &QuotientRing,
    mu_bar: &Residue,
    window: usize,
    strict: bool,
) -> Result<Vec<WittVector<Residue>>> {
    let ring = ResidueRing(q.clone());
    let p = q.dvr().p();
    let w = q.modulus_valuation();
    if q.is_zero_ring() {
        return Ok(vec![WittVector {
            entries: vec![q.zero(); window],
        }]);
    }
    let bound = support_bound(p, window, w);
    let c = q.pow(mu_bar, p - 1);
    let cvec = teichmuller(&ring, &c, bound);
    let nilpotents: Vec<Residue> = q
        .enumerate()
        .into_iter()
        .filter(|r| q.is_nilpotent(r))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; window];
    loop {
        let entries: Vec<Residue> = idx.iter().map(|&i| nilpotents[i].clone()).collect();
        let a = WittVector { entries };
        let ax = a.zero_extend(bound, q.zero());
        let fa = frobenius_ext(&ring, p, &ax, bound)?;
        let rhs = witt_mul(&ring, p, &cvec, &ax)?;
        if fa == rhs {
            out.push(a);
        }
        // advance the counter
        let mut i = 0;
        loop {
            if i == window {
                if strict {
                    for v in &out {
                        if !q.is_zero(&v.entries[window - 1]) {
                            return Err(Error::InsufficientWindow(window - 1));
                        }
                    }
                }
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < nilpotents.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Single-residue solutions of a^p = mu^{p-1} a in R/lambda R (units allowed;
/// these index the Hom group of the order-p kernel).
pub fn frobenius_twist_solutions(q: &QuotientRing, mu_bar: &Residue) -> Vec<Residue> {
    if q.is_zero_ring() {
        return vec![q.zero()];
    }
    let p = q.dvr().p();
    let c = q.pow(mu_bar, p - 1);
    q.enumerate()
        .into_iter()
        .filter(|a| q.pow(a, p) == q.mul(&c, a))
        .collect()
}

/// Does a + b equal the componentwise sum? True on the Frobenius kernel
/// under a mild bound on v(lambda); the deviation terms are isobaric of
/// degree >= p and die in R/lambda R.
pub fn termwise_sum_check(
    q: &QuotientRing,
    a: &WittVector<Residue>,
    b: &WittVector<Residue>,
) -> Result<bool> {
    let ring = ResidueRing(q.clone());
    let p = q.dvr().p();
    let s = witt_add(&ring, p, a, b)?;
    let termwise: Vec<Residue> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| q.add(x, y))
        .collect();
    Ok(s.entries == termwise)
}

/// p times a chosen lift of `a`, reduced into R/lambda^p R. The result is
/// independent of the lift; `lift_perturbation` (entrywise, added after
/// multiplying by lambda) exists so tests can exercise that.
pub fn pushforward_p(
    q_src: &QuotientRing,
    q_dst: &QuotientRing,
    a: &WittVector<Residue>,
    lift_perturbation: Option<&[DvrElement]>,
) -> Result<WittVector<Residue>> {
    let dvr = q_src.dvr().clone();
    let p = dvr.p();
    let ring = DvrCoeff(dvr.clone());
    let mut lifts: Vec<DvrElement> = a.entries.iter().map(|r| q_src.lift(r)).collect();
    if let Some(pert) = lift_perturbation {
        assert_eq!(pert.len(), lifts.len());
        for (l, t) in lifts.iter_mut().zip(pert) {
            *l = dvr.add(l, &dvr.mul(q_src.modulus(), t));
        }
    }
    let la = WittVector { entries: lifts };
    let pa = witt_scalar_int(&ring, p, p, &la)?;
    let entries: Result<Vec<Residue>> = pa.entries.iter().map(|x| q_dst.reduce(x)).collect();
    Ok(WittVector { entries: entries? })
}

/// The pullback of a homomorphism along the degree-p isogeny of the deformed
/// multiplicative group, in Witt coordinates:
/// equal characteristic: a -> V(a); mixed, p > 2 (needs p^2 = 0 mod lambda):
/// a -> [p/mu^{p-1}] a + V(a); mixed, p = 2: a -> [2/mu] a + V(a) + VT(a).
/// Output window is one more than the input.
pub fn psi_pullback(
    q: &QuotientRing,
    mu: &DvrElement,
    a: &WittVector<Residue>,
) -> Result<WittVector<Residue>> {
    let dvr = q.dvr().clone();
    let p = dvr.p();
    let ring = ResidueRing(q.clone());
    let n1 = a.window() + 1;
    let va = verschiebung(&ring, a);
    if !dvr.is_mixed() {
        return Ok(va);
    }
    let e = dvr.val_p().unwrap();
    let vmu = dvr.valuation(mu).unwrap_or(0);
    if (p as u32 - 1) * vmu > e {
        return Err(Error::CaseNotApplicable(
            "(p-1) v(mu) exceeds v(p); p/mu^{p-1} is not integral".into(),
        ));
    }
    let c = {
        let unit = dvr.unit_part(mu)?;
        let unit_inv = dvr.inv(&unit)?;
        let num = dvr.mul(&dvr.from_i64(p as i64), &dvr.pow(&unit_inv, p - 1));
        dvr.exact_divide(&num, (p as u32 - 1) * vmu)?
    };
    let cbar = q.reduce(&c)?;
    let ca = witt_mul(
        &ring,
        p,
        &teichmuller(&ring, &cbar, n1),
        &a.zero_extend(n1, q.zero()),
    )?;
    if p == 2 {
        let vt = tilde_verschiebung(&ring, 2, a, n1)?;
        witt_add(&ring, 2, &witt_add(&ring, 2, &ca, &va)?, &vt)
    } else {
        if 2 * e < q.modulus_valuation() {
            return Err(Error::CaseNotApplicable(
                "pullback formula needs p^2 = 0 mod lambda".into(),
            ));
        }
        let va = va.zero_extend(n1, q.zero());
        witt_add(&ring, p, &ca, &va)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::DvrRing;
    use num_traits::ToPrimitive;

    #[test]
    fn ghost_identities_p2_p3() {
        verify_ghost_identities(2, 4).unwrap();
        verify_ghost_identities(3, 3).unwrap();
    }

    #[test]
    fn sum_component_p2() {
        // c_1(U, V) = U_1 + V_1 - U_0 V_0
        let sp = build_structure_polynomials(2, 2).unwrap();
        let ring = ZZ;
        let u0 = MPoly::var(&ring, 4, 0);
        let u1 = MPoly::var(&ring, 4, 1);
        let v0 = MPoly::var(&ring, 4, 2);
        let v1 = MPoly::var(&ring, 4, 3);
        assert_eq!(sp.sum[0], u0.add(&v0));
        assert_eq!(sp.sum[1], u1.add(&v1).sub(&u0.mul(&v0)));
    }

    #[test]
    fn tilde_verschiebung_congruence() {
        // VT(a) = (0, 2a_0, 2a_0^2, ...) mod 4, and VT(a) = 0 mod 2
        let sp = build_structure_polynomials(2, 3).unwrap();
        let vt = sp.vtilde.as_ref().unwrap();
        let ring = ZZ;
        for (r, q) in vt.iter().enumerate().skip(1) {
            let lead = MPoly::var(&ring, 3, 0)
                .pow(1 << (r - 1))
                .scale(&BigInt::from(2));
            let diff = q.sub(&lead);
            for c in diff.terms.values() {
                assert!(
                    (c % BigInt::from(4)).is_zero(),
                    "VT_{r} != 2 a_0^(2^(r-1)) mod 4"
                );
            }
            for c in q.terms.values() {
                assert!((c % BigInt::from(2)).is_zero(), "VT not divisible by 2");
            }
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_over_z() {
        let ring = ZZ;
        for p in [2u64, 3] {
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    let ta = teichmuller(&ring, &BigInt::from(a), 3);
                    let tb = teichmuller(&ring, &BigInt::from(b), 3);
                    let prod = witt_mul(&ring, p, &ta, &tb).unwrap();
                    let tab = teichmuller(&ring, &BigInt::from(a * b), 3);
                    assert_eq!(prod, tab);
                }
            }
        }
    }

    #[test]
    fn frobenius_verschiebung_ghost_relations() {
        let ring = ZZ;
        for p in [2u64, 3] {
            let a = WittVector {
                entries: vec![BigInt::from(2), BigInt::from(-1), BigInt::from(3)],
            };
            // Phi_r(F(a)) = Phi_{r+1}(a)
            let fa = frobenius_ext(&ring, p, &a, 3).unwrap();
            let ga = ghost(&ring, p, &a.zero_extend(4, BigInt::zero()));
            let gfa = ghost(&ring, p, &fa);
            for r in 0..3 {
                assert_eq!(gfa[r], ga[r + 1]);
            }
            // Phi_r(V(a)) = p Phi_{r-1}(a)
            let va = verschiebung(&ring, &a);
            let gva = ghost(&ring, p, &va);
            assert_eq!(gva[0], BigInt::zero());
            for r in 1..4 {
                assert_eq!(gva[r], BigInt::from(p) * &ga[r - 1]);
            }
            // F(V(a)) = p a
            let fva = frobenius_ext(&ring, p, &va, 3).unwrap();
            let pa = witt_scalar_int(&ring, p, p, &a).unwrap();
            assert_eq!(fva, pa);
        }
    }

    #[test]
    fn equal_char_frobenius_is_entrywise_power() {
        let dvr = DvrRing::equal(3, 1, 6).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 3).unwrap();
        let ring = ResidueRing(q.clone());
        let a = WittVector {
            entries: vec![q.from_i64(2), q.reduce(&dvr.pi()).unwrap()],
        };
        let fa = frobenius(&ring, 3, &a).unwrap();
        for (x, y) in a.entries.iter().zip(&fa.entries) {
            assert_eq!(q.pow(x, 3), *y);
        }
    }

    #[test]
    fn kernel_window1_examples() {
        // p=3 equal char, mu = pi, lambda = pi^2: kernel = multiples of pi, size 3
        let dvr = DvrRing::equal(3, 1, 8).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let mu = q.reduce(&dvr.pi()).unwrap();
        let ker = kernel_f_minus_teich(&q, &mu, 1, false).unwrap();
        assert_eq!(ker.len(), 3);
        for v in &ker {
            assert!(q.is_nilpotent(&v.entries[0]));
        }
        // p=2, mu = pi, lambda = pi: kernel in window 1 = {0}
        let dvr2 = DvrRing::equal(2, 1, 8).unwrap();
        let q2 = QuotientRing::by_pi_power(&dvr2, 1).unwrap();
        let mu2 = q2.reduce(&dvr2.pi()).unwrap();
        let ker2 = kernel_f_minus_teich(&q2, &mu2, 1, true).unwrap();
        assert_eq!(ker2.len(), 1);
        // zero ring: singleton
        let q0 = QuotientRing::by_pi_power(&dvr2, 0).unwrap();
        let mu0 = q0.zero();
        assert_eq!(kernel_f_minus_teich(&q0, &mu0, 2, true).unwrap().len(), 1);
    }

    #[test]
    fn frobenius_twist_solution_counts() {
        // mu a unit: exactly p solutions {i*mu}
        let dvr = DvrRing::equal(3, 1, 8).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let sols = frobenius_twist_solutions(&q, &q.one());
        assert_eq!(sols.len(), 3);
        // p=3 equal char, mu=pi, lambda=pi^2: 3 solutions (a^3 = 0)
        let mu = q.reduce(&dvr.pi()).unwrap();
        let sols2 = frobenius_twist_solutions(&q, &mu);
        assert_eq!(sols2.len(), 3);
        assert!(sols2.iter().all(|a| q.is_nilpotent(a)));
    }

    #[test]
    fn termwise_sum_and_negative_control() {
        // all kernel pairs at p=3 equal char, lambda=pi^2, window 2
        let dvr = DvrRing::equal(3, 1, 8).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let mu = q.zero(); // F - [0]: plain Frobenius kernel
        let ker = kernel_f_minus_teich(&q, &mu, 2, false).unwrap();
        assert_eq!(ker.len(), 9);
        for a in &ker {
            for b in &ker {
                assert!(termwise_sum_check(&q, a, b).unwrap());
            }
        }
        // negative control: a_0 b_0 (a_0 + b_0) of low valuation, lambda = pi^4
        let q4 = QuotientRing::by_pi_power(&dvr, 4).unwrap();
        let pi = q4.reduce(&dvr.pi()).unwrap();
        let a = WittVector {
            entries: vec![pi.clone(), q4.zero()],
        };
        assert!(!termwise_sum_check(&q4, &a, &a).unwrap());
    }

    #[test]
    fn pushforward_lift_independence() {
        let dvr = DvrRing::equal(2, 1, 12).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let qp = QuotientRing::by_pi_power(&dvr, 4).unwrap();
        let mu = q.reduce(&dvr.pi()).unwrap();
        let ker = kernel_f_minus_teich(&q, &mu, 2, false).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for a in &ker {
            let base = pushforward_p(&q, &qp, a, None).unwrap();
            for _ in 0..50 / ker.len().max(1) {
                let pert: Vec<_> = (0..a.window())
                    .map(|_| dvr.from_i64(rng.gen_range(0..8)))
                    .collect();
                let other = pushforward_p(&q, &qp, a, Some(&pert)).unwrap();
                assert_eq!(base, other);
            }
        }
        // a = 0 -> 0
        let zero = WittVector {
            entries: vec![q.zero(); 2],
        };
        let z = pushforward_p(&q, &qp, &zero, None).unwrap();
        assert!(z.entries.iter().all(|r| qp.is_zero(r)));
    }

    #[test]
    fn pullback_cases() {
        // equal char: a -> V(a)
        let dvr = DvrRing::equal(3, 1, 8).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let mu = dvr.pi();
        let a = WittVector {
            entries: vec![q.reduce(&dvr.pi()).unwrap()],
        };
        let va = psi_pullback(&q, &mu, &a).unwrap();
        assert!(q.is_zero(&va.entries[0]));
        assert_eq!(va.entries[1], a.entries[0]);
        // zero maps to zero
        let z = WittVector {
            entries: vec![q.zero()],
        };
        let vz = psi_pullback(&q, &mu, &z).unwrap();
        assert!(vz.entries.iter().all(|r| q.is_zero(r)));
        // mixed p=3: [3x/mu^2] + V([x]) via structure polynomials
        let dm = DvrRing::mixed(3, 6, &[-3, 0, 1]).unwrap();
        let qm = QuotientRing::by_pi_power(&dm, 2).unwrap();
        let mu_m = dm.pi();
        let x = qm.reduce(&dm.pi()).unwrap();
        let ax = WittVector {
            entries: vec![x.clone()],
        };
        let got = psi_pullback(&qm, &mu_m, &ax).unwrap();
        // expected: [c] x + V(x) where c = 3/pi^2 (= unit here since v(3)=2)
        let ring = ResidueRing(qm.clone());
        let c = dm.exact_divide(&dm.from_i64(3), 2).unwrap();
        let cbar = qm.reduce(&c).unwrap();
        let ca = witt_mul(
            &ring,
            3,
            &teichmuller(&ring, &cbar, 2),
            &ax.zero_extend(2, qm.zero()),
        )
        .unwrap();
        let expected = witt_add(&ring, 3, &ca, &verschiebung(&ring, &ax)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn associativity_random_window3() {
        // 200 random triples over Z/3^4, window 3
        let ring = crate::ring::ZMod(81);
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let mut rand_vec = |rng: &mut rand::rngs::StdRng| WittVector {
            entries: (0..3).map(|_| rng.gen_range(0..81u64)).collect(),
        };
        for _ in 0..200 {
            let a = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let c = rand_vec(&mut rng);
            let left = witt_add(&ring, 3, &witt_add(&ring, 3, &a, &b).unwrap(), &c).unwrap();
            let right = witt_add(&ring, 3, &a, &witt_add(&ring, 3, &b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
