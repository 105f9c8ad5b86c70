//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the checked quantities. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines).

use mu2lab::artin_hasse::ep_closed_form;
use mu2lab::breuil_kisin::{bk_enumerate, cross_check_counts, BkAmbient};
use mu2lab::classify::{
    canonicalize_model, enumerate_models, eta_congruence_ok, eta_element, hom_models,
    hom_models_brute, iso_test, p2_kernel_by_valuation, p2_projection, phi_enumerate, HomStructure,
    PhiElement,
};
use mu2lab::dvr::{DvrRing, QuotientRing, Residue};
use mu2lab::group_scheme::{
    build_model, div_elem, hom_group_brute, is_hopf_morphism, p_relation, ModelDescriptor,
};
use mu2lab::mpoly::{MPoly, ReductionSystem};
use mu2lab::ring::{DvrCoeff, ZMod};
use mu2lab::special_fiber::{fiber_oracle_check, wilson_step_congruences, FiberClass};
use mu2lab::witt::{
    frobenius_ext, frobenius_twist_solutions, kernel_f_minus_teich, teichmuller,
    termwise_sum_check, verify_ghost_identities, verschiebung, witt_add, witt_mul, witt_scalar_int,
    WittVector,
};
use rand::{Rng, SeedableRng};

fn zeta9_ring() -> DvrRing {
    DvrRing::mixed(3, 6, &[3, 9, 18, 21, 15, 6, 1]).unwrap()
}
fn p3e2_ring() -> DvrRing {
    DvrRing::mixed(3, 8, &[-3, 0, 1]).unwrap()
}

#[test]
fn criterion_01_witt_integrity() {
    for p in [2u64, 3] {
        verify_ghost_identities(p, 4).unwrap();
        let ring = ZMod(p.pow(5));
        let mut rng = rand::rngs::StdRng::seed_from_u64(2026);
        let rand_vec = |rng: &mut rand::rngs::StdRng| WittVector {
            entries: (0..4)
                .map(|_| rng.gen_range(0..p.pow(5)))
                .collect::<Vec<u64>>(),
        };
        for _ in 0..500 {
            let a = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let c = rand_vec(&mut rng);
            // ring axioms
            let ab = witt_add(&ring, p, &a, &b).unwrap();
            let ba = witt_add(&ring, p, &b, &a).unwrap();
            assert_eq!(ab, ba);
            let l = witt_add(&ring, p, &ab, &c).unwrap();
            let r = witt_add(&ring, p, &a, &witt_add(&ring, p, &b, &c).unwrap()).unwrap();
            assert_eq!(l, r);
            let ml = witt_mul(&ring, p, &witt_mul(&ring, p, &a, &b).unwrap(), &c).unwrap();
            let mr = witt_mul(&ring, p, &a, &witt_mul(&ring, p, &b, &c).unwrap()).unwrap();
            assert_eq!(ml, mr);
            let dist_l = witt_mul(&ring, p, &a, &witt_add(&ring, p, &b, &c).unwrap()).unwrap();
            let dist_r = witt_add(
                &ring,
                p,
                &witt_mul(&ring, p, &a, &b).unwrap(),
                &witt_mul(&ring, p, &a, &c).unwrap(),
            )
            .unwrap();
            assert_eq!(dist_l, dist_r);
            // F(V(a)) = p a
            let fva = frobenius_ext(&ring, p, &verschiebung(&ring, &a), 4).unwrap();
            let pa = witt_scalar_int(&ring, p, p, &a).unwrap();
            assert_eq!(fva, pa);
            // Teichmueller multiplicativity
            let x = rng.gen_range(0..p.pow(5));
            let y = rng.gen_range(0..p.pow(5));
            let t = witt_mul(
                &ring,
                p,
                &teichmuller(&ring, &x, 4),
                &teichmuller(&ring, &y, 4),
            )
            .unwrap();
            let xy = (x as u128 * y as u128 % p.pow(5) as u128) as u64;
            assert_eq!(t, teichmuller(&ring, &xy, 4));
        }
    }
    println!("[criterion 1] PASS: ghost identities p=2,3 window 4; 500 random vectors over Z/p^5 satisfy ring axioms, F.V = p, Teichmueller multiplicativity");
}

#[test]
fn criterion_02_termwise_addition() {
    for p in [2u64, 3] {
        let dvr = DvrRing::equal(p, 1, 10).unwrap();
        let q = QuotientRing::by_pi_power(&dvr, 2).unwrap();
        let ker = kernel_f_minus_teich(&q, &q.zero(), 2, false).unwrap();
        assert_eq!(ker.len(), (p as usize).pow(2));
        let mut pairs = 0;
        for a in &ker {
            for b in &ker {
                assert!(termwise_sum_check(&q, a, b).unwrap());
                pairs += 1;
            }
        }
        println!(
            "[criterion 2] PASS p={p}: termwise addition on all {pairs} exhaustive kernel pairs, lambda = pi^2, window 2"
        );
    }
}

#[test]
fn criterion_03_hom_bijection() {
    for p in [2u64, 3] {
        let dvr = DvrRing::equal(p, 1, 12).unwrap();
        let cells: Vec<(u32, u32)> = vec![(1, 1), (2, 1), (p as u32, 1), (2, 2)];
        for (vm, vl) in cells {
            let q = QuotientRing::by_pi_power(&dvr, vl).unwrap();
            let mu = q.reduce(&dvr.pi_pow(vm)).unwrap();
            let homs = hom_group_brute(&q, &mu, 1 << 22).unwrap();
            let kernel = frobenius_twist_solutions(&q, &mu);
            assert_eq!(
                homs.len(),
                kernel.len(),
                "count mismatch at p={p}, (v(mu),v(lambda))=({vm},{vl})"
            );
            for f in &homs {
                let hits = kernel
                    .iter()
                    .filter(|a| &ep_closed_form(&q, a, &mu) == f)
                    .count();
                assert_eq!(hits, 1, "hom element must match exactly one kernel residue");
            }
            println!(
                "[criterion 3] PASS p={p} (v(mu),v(lambda))=({vm},{vl}): {} homs = kernel size, bijective via the closed form",
                homs.len()
            );
        }
    }
}

fn criterion4_models() -> (Vec<(DvrRing, mu2lab::classify::ModelRecord)>, usize, usize) {
    let dvr2 = DvrRing::equal(2, 1, 14).unwrap();
    let models2 = enumerate_models(&dvr2, 4, 1).unwrap();
    let n2 = models2.len();
    let dvr3 = p3e2_ring();
    let models3 = enumerate_models(&dvr3, 4, 4).unwrap();
    let n3 = models3.len();
    let mut all = Vec::new();
    for r in models2 {
        all.push((dvr2.clone(), r));
    }
    for r in models3 {
        all.push((dvr3.clone(), r));
    }
    (all, n2, n3)
}

#[test]
fn criterion_04_hopf_soundness() {
    let (models, n2, n3) = criterion4_models();
    assert_eq!(n2, 8);
    assert_eq!(n3, 2);
    for (dvr, r) in &models {
        let h = build_model(dvr, &r.descriptor).unwrap();
        let rep = h.verify();
        assert!(
            rep.all_ok(),
            "model (m={}, n={}) fails: {:?}",
            r.m,
            r.n,
            rep.failures
        );
        assert_eq!(h.rank, Some(dvr.p() * dvr.p()));
    }
    println!(
        "[criterion 4] PASS: all {} models (p=2 equal char m<=4 n<=1: {n2}; p=3 mixed e=2: {n3}) pass coassociativity, counit, antipode, commutativity, rank p^2",
        models.len()
    );
}

#[test]
fn criterion_05_phi_against_oracle() {
    // the oracle recomputes both membership conditions from scratch with
    // valuation arithmetic over all residue pairs
    let configs: Vec<(DvrRing, u32, u32)> = {
        let mut v = Vec::new();
        let dvr2 = DvrRing::equal(2, 1, 14).unwrap();
        for n in 0..=1u32 {
            for m in 0..=4u32 {
                v.push((dvr2.clone(), m, n));
            }
        }
        let dvr3 = p3e2_ring();
        for n in 0..=1u32 {
            for m in 0..=1u32 {
                v.push((dvr3.clone(), m, n));
            }
        }
        v
    };
    for (dvr, m, n) in &configs {
        let p = dvr.p();
        let mu = dvr.pi_pow(*m);
        let lam = dvr.pi_pow(*n);
        let phi = phi_enumerate(dvr, &mu, &lam).unwrap();
        // oracle: every residue pair, direct congruence arithmetic
        let q = QuotientRing::by_pi_power(dvr, *n).unwrap();
        let mut oracle: Vec<PhiElement> = Vec::new();
        for a in q.enumerate() {
            let al = q.lift(&a);
            let kernel_ok = {
                let x = dvr.sub(&dvr.pow(&al, p), &dvr.mul(&dvr.pow(&mu, p - 1), &al));
                dvr.valuation(&x).map_or(true, |v| v >= *n)
            };
            if !kernel_ok {
                continue;
            }
            for j in 0..p {
                let deep_ok = if dvr.is_mixed() {
                    let u = div_elem(dvr, &dvr.from_i64(p as i64), &dvr.pow(&mu, p - 1)).unwrap();
                    let x = dvr.sub(
                        &dvr.sub(
                            &dvr.mul(&dvr.from_i64(p as i64), &al),
                            &dvr.mul(&dvr.from_i64(j as i64), &mu),
                        ),
                        &dvr.mul(&u, &dvr.pow(&al, p)),
                    );
                    dvr.valuation(&x).map_or(true, |v| v >= p as u32 * *n)
                } else {
                    let x = dvr.mul(&dvr.from_i64(j as i64), &mu);
                    dvr.valuation(&x).map_or(true, |v| v >= p as u32 * *n)
                };
                if deep_ok {
                    oracle.push(PhiElement { a: a.clone(), j });
                }
            }
        }
        // compare after canonicalization
        let ctx = mu2lab::classify::PhiContext::new(dvr, &mu, &lam).unwrap();
        let qq = dvr.residue_field().q();
        let mut oracle_reps: Vec<PhiElement> = oracle
            .iter()
            .map(|x| ctx.canonical_rep(&x.a, x.j))
            .collect();
        oracle_reps.sort_by_key(|x| (x.j, x.a.order_key(qq)));
        oracle_reps.dedup();
        assert_eq!(phi, oracle_reps, "Phi mismatch at (m,n)=({m},{n})");
        // projection kernel against the valuation characterization
        let ker = p2_projection(&phi).kernel;
        let by_val = p2_kernel_by_valuation(dvr, &mu, &lam).unwrap();
        assert_eq!(ker, by_val, "projection kernel mismatch at (m,n)=({m},{n})");
        // equal characteristic: surjective iff v(mu) >= p v(lambda)
        if !dvr.is_mixed() {
            assert_eq!(p2_projection(&phi).surjective, *m >= p as u32 * *n);
        }
    }
    println!(
        "[criterion 5] PASS: pair-group enumeration matches the direct congruence oracle and the projection-kernel valuation formula on {} configurations",
        configs.len()
    );
}

#[test]
fn criterion_06_cyclic_example() {
    let dvr = zeta9_ring();
    let eta = eta_element(&dvr).unwrap();
    assert_eq!(dvr.valuation(&eta), Some(1));
    assert!(eta_congruence_ok(&dvr).unwrap());
    // the descriptor (lambda_1, lambda_1, F~ = sum (eta T)^k/k!, 1)
    let l1 = dvr.lambda1().unwrap();
    let q = QuotientRing::new(&dvr, &l1).unwrap();
    let f_lift = {
        let half = dvr.inv(&dvr.from_i64(2)).unwrap();
        vec![dvr.one(), eta.clone(), dvr.mul(&dvr.mul(&eta, &eta), &half)]
    };
    let f_bar: Vec<Residue> = f_lift.iter().map(|c| q.reduce(c).unwrap()).collect();
    let d = ModelDescriptor {
        mu: l1.clone(),
        lam: l1.clone(),
        f_bar,
        f_lift: Some(f_lift),
        j: 1,
    };
    d.validate(&dvr).unwrap();
    let h = build_model(&dvr, &d).unwrap();
    let rep = h.verify();
    assert!(rep.all_ok(), "{:?}", rep.failures);
    let t = canonicalize_model(&dvr, &d).unwrap();
    assert_eq!((t.m, t.n), (3, 3));
    println!(
        "[criterion 6] PASS: eta congruence holds in R/lambda_1^3 R, v(eta)=1, and the cyclic-group descriptor builds and verifies; canonical name (3,3,a)"
    );
}

#[test]
fn criterion_07_limit_isogeny_kernel() {
    // explicit mutually inverse maps between E^{(lambda^p,lambda;1,1)} and
    // the order-p^2 kernel of the deformation, p=2 equal char, v(lambda)=1
    let dvr = DvrRing::equal(2, 1, 14).unwrap();
    let p = 2u64;
    let lam = dvr.pi();
    let q = QuotientRing::by_pi_power(&dvr, 1).unwrap();
    let d = ModelDescriptor {
        mu: dvr.pow(&lam, p),
        lam: lam.clone(),
        f_bar: vec![q.one()],
        f_lift: None,
        j: 1,
    };
    let e = build_model(&dvr, &d).unwrap();
    assert!(e.verify().all_ok());
    let ring = DvrCoeff(dvr.clone());
    let t = MPoly::var(&ring, 1, 0);
    let one_lt = MPoly::one(&ring, 1).add(&t.scale(&lam));
    let num = one_lt.pow(p * p).sub(&MPoly::one(&ring, 1));
    let rel = mu2lab::group_scheme::div_poly(&dvr, &num, &dvr.pow(&lam, p * p)).unwrap();
    let x = MPoly::var(&ring, 2, 0);
    let y = MPoly::var(&ring, 2, 1);
    let sys = ReductionSystem::new(vec![ReductionSystem::rule_from_monic(&rel, 0)]);
    let s = sys.normal_form(&t.neg().mul(&one_lt.pow(p * p - 1)));
    let g2 = mu2lab::group_scheme::HopfPresentation {
        dvr: dvr.clone(),
        gens: vec!["T".into()],
        relations: vec![rel],
        comul: vec![x.add(&y).add(&x.mul(&y).scale(&lam))],
        counit: vec![dvr.zero()],
        antipode: vec![mu2lab::group_scheme::Frac {
            num: s,
            den: vec![],
        }],
        inverted: vec![],
        rank: Some(p * p),
    };
    assert!(g2.verify().all_ok());
    let t2 = MPoly::var(&ring, 2, 1);
    assert!(is_hopf_morphism(&e, &g2, &[t2]));
    let pl1 = p_relation(&dvr, &lam, 1, 0).unwrap();
    assert!(is_hopf_morphism(&g2, &e, &[pl1.clone(), t.clone()]));
    // compositions are the identity on generators
    let sys_e = e.reduction().unwrap();
    let back = sys_e.normal_form(&pl1.subst(&[MPoly::var(&ring, 2, 1)]));
    let t1 = MPoly::var(&ring, 2, 0);
    assert!(mu2lab::group_scheme::poly_is_zero(&back.sub(&t1)));
    println!("[criterion 7] PASS: the two explicit maps are Hopf morphisms and mutually inverse (p=2, equal char, v(lambda)=1)");
}

#[test]
fn criterion_08_classification_uniqueness() {
    let (models, _, _) = criterion4_models();
    let mut pairs = 0;
    // group records by ring (pointer identity via is_mixed/p)
    for (dvr, r) in &models {
        let t = canonicalize_model(dvr, &r.descriptor).unwrap();
        assert_eq!(
            (t.m, t.n, t.a.clone()),
            (r.m, r.n, r.a.clone()),
            "idempotence"
        );
    }
    for (dvr1, x) in &models {
        for (dvr2, y) in &models {
            if !dvr1.same_ring(dvr2) {
                continue;
            }
            pairs += 1;
            let same = iso_test(dvr1, &x.descriptor, &y.descriptor).unwrap();
            assert_eq!(same, (x.m, x.n, &x.a) == (y.m, y.n, &y.a));
            let (tag, homs) = hom_models(dvr1, &x.descriptor, &y.descriptor).unwrap();
            let brute = hom_models_brute(dvr1, &x.descriptor, &y.descriptor).unwrap();
            let expected = match tag {
                HomStructure::Zero => 1,
                HomStructure::ZModP => dvr1.p() as usize,
                HomStructure::ZModPSquared => (dvr1.p() * dvr1.p()) as usize,
            };
            assert_eq!(homs.len(), expected);
            assert_eq!(
                brute.len(),
                expected,
                "Hom search disagrees with the predicted tag"
            );
        }
    }
    println!("[criterion 8] PASS: canonical names unique and idempotent; isomorphism = equal canonical triple; Hom tags match explicit searches on {pairs} ordered pairs");
}

#[test]
fn criterion_09_special_fiber_oracle() {
    let (models, _, _) = criterion4_models();
    for (dvr, r) in &models {
        let m = fiber_oracle_check(dvr, &r.descriptor).unwrap();
        let _ = m;
    }
    // zeta_9 ring: all fibers including the etale families, plus the
    // Wilson-step congruences
    let dvr = zeta9_ring();
    assert!(wilson_step_congruences(&dvr).unwrap());
    let models9 = enumerate_models(&dvr, 3, 3).unwrap();
    let mut b_of_cyclic = None;
    for r in &models9 {
        let m = fiber_oracle_check(&dvr, &r.descriptor).unwrap();
        if (r.m, r.n) == (3, 3) {
            if let FiberClass::ZpByZp { a, b } = m.class {
                b_of_cyclic = Some((a, b));
            }
        }
    }
    assert_eq!(b_of_cyclic, Some((0, 1)));
    println!(
        "[criterion 9] PASS: every enumerated model's reduction matches the predicted family presentation (with recorded change of variables); Wilson-step congruences verified at p=3"
    );
}

#[test]
fn criterion_10_module_cross_check() {
    // (p=3, e=2)
    let dvr = p3e2_ring();
    let rep = cross_check_counts(&dvr).unwrap();
    assert!(rep.all_match, "{rep:?}");
    // (p=3, e=6, pi = zeta_9 - 1)
    let dvr9 = zeta9_ring();
    let rep9 = cross_check_counts(&dvr9).unwrap();
    assert!(rep9.all_match, "{rep9:?}");
    let total9: u64 = rep9.cells.iter().map(|c| c.module_count).sum();
    assert_eq!(total9, 7);
    // every emitted triple rebuilds its module with witnesses (checked in
    // bk_enumerate); re-run explicitly
    for ring in [&dvr, &dvr9] {
        let amb = BkAmbient::from_ring(ring).unwrap();
        for t in bk_enumerate(&amb).unwrap() {
            mu2lab::breuil_kisin::bk_build_module(&amb, &t).unwrap();
        }
    }
    println!(
        "[criterion 10] PASS: per-cell counts agree between the group-scheme and semilinear classifications at (p=3,e=2) and the zeta_9 ring ({total9} classes); all module witnesses found"
    );
}

#[test]
fn criterion_11_determinism() {
    let dvr = DvrRing::equal(2, 1, 14).unwrap();
    let models = enumerate_models(&dvr, 4, 1).unwrap();
    let config = mu2lab::json::config_doc(&dvr, None, 0);
    let doc1 = mu2lab::json::enumerate_doc(&dvr, config.clone(), 4, 1, &models).unwrap();
    let body1 = mu2lab::json::render(&doc1);
    let models2 = enumerate_models(&dvr, 4, 1).unwrap();
    let doc2 = mu2lab::json::enumerate_doc(&dvr, config, 4, 1, &models2).unwrap();
    let body2 = mu2lab::json::render(&doc2);
    assert_eq!(body1, body2);
    assert!(!body1.is_empty());
    println!("[criterion 11] PASS: identical configurations render byte-identical classification tables ({} bytes)", body1.len());
}
