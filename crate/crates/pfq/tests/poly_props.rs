use std::collections::BTreeSet;

use pfq::field::{Elt, Ext4, Tower, E4};
use pfq::poly::{
    conj_reciprocal, mobius_mu_to_p1, mobius_permuting_mu, quad_root_profile, Point, Poly, RatFn,
    RootProfile,
};
use proptest::prelude::*;

fn poly<'a>(t: &'a Tower, c: &[u32]) -> Poly<'a> {
    Poly::new(t, c.iter().map(|&v| t.elt(v % t.q2())).collect())
}

/// Multiplicity of a root in F_{q^4} by repeated synthetic division.
fn mult4(e: &Ext4<'_>, coeffs: &[E4], r: E4) -> usize {
    let mut c = coeffs.to_vec();
    let mut m = 0;
    while c.len() > 1 {
        let mut q = vec![e.zero(); c.len() - 1];
        let mut acc = e.zero();
        for i in (0..c.len()).rev() {
            acc = e.add(e.mul(acc, r), c[i]);
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if acc != e.zero() {
            break;
        }
        m += 1;
        c = q;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conj_reciprocal_is_an_involution(c in prop::collection::vec(0u32..49, 1..8)) {
        let t = Tower::new(7, 1, 1, None).unwrap();
        let d = poly(&t, &c);
        prop_assume!(!d.is_zero() && !d.coeff(0).is_zero());
        let back = conj_reciprocal(&conj_reciprocal(&d).unwrap()).unwrap();
        // equal up to a unit of norm one; here the unit is 1
        let u = back.lead() / d.lead();
        prop_assert!(u.in_mu());
        prop_assert_eq!(back, d.scale(u));
    }

    #[test]
    fn reciprocal_roots_have_matching_multiplicity(
        roots in prop::collection::vec(1u32..9, 1..4),
        tail in prop::collection::vec(0u32..9, 1..4),
    ) {
        let t = Tower::new(3, 1, 1, None).unwrap();
        let e = Ext4::new(&t);
        // repeated linear factors force multiplicities above one
        let mut d = poly(&t, &tail);
        prop_assume!(!d.is_zero() && !d.coeff(0).is_zero());
        for &r in &roots {
            d = d.mul(&Poly::linear_root(t.elt(r)));
        }
        let hat = conj_reciprocal(&d).unwrap();
        let lift = |p: &Poly<'_>| p.coeffs().iter().map(|&x| e.embed(x)).collect::<Vec<_>>();
        let (dc, hc) = (lift(&d), lift(&hat));
        let q = t.q() as u128;
        for a in e.elements().skip(1) {
            let m = mult4(&e, &dc, a);
            if m == 0 {
                continue;
            }
            let image = e.inv(e.pow(a, q)).unwrap();
            prop_assert_eq!(m, mult4(&e, &hc, image));
        }
    }

    #[test]
    fn ratfn_reduction_is_canonical(
        n in prop::collection::vec(0u32..25, 1..5),
        d in prop::collection::vec(0u32..25, 1..5),
        m in prop::collection::vec(0u32..25, 1..4),
    ) {
        let t = Tower::new(5, 1, 1, None).unwrap();
        let (n, d, m) = (poly(&t, &n), poly(&t, &d), poly(&t, &m));
        prop_assume!(!d.is_zero() && !m.is_zero());
        let a = RatFn::new(n.clone(), d.clone()).unwrap();
        let b = RatFn::new(n.mul(&m), d.mul(&m)).unwrap();
        prop_assert!(a == b);
        prop_assert!(a.den().is_monic());
    }

    #[test]
    fn mobius_tags_are_verified_bijections(a in 0u32..81, b in 0u32..81, g in 0u32..81, h in 0u32..81) {
        let t = Tower::new(3, 2, 1, None).unwrap();
        let mu = t.mu_elements();
        if let Ok(m) = mobius_permuting_mu(t.elt(a), t.elt(b)) {
            let imgs: BTreeSet<_> = mu.iter().map(|&x| m.eval(Point::Fin(x))).collect();
            let want: BTreeSet<_> = mu.iter().map(|&x| Point::Fin(x)).collect();
            prop_assert_eq!(imgs, want);
        }
        if let Ok(m) = mobius_mu_to_p1(t.elt(g), t.elt(h)) {
            let imgs: BTreeSet<_> = mu.iter().map(|&x| m.eval(Point::Fin(x))).collect();
            let want: BTreeSet<_> = t.fq_elements().map(Point::Fin).chain([Point::Inf]).collect();
            prop_assert_eq!(imgs, want);
        }
    }
}

#[test]
fn quad_profile_matches_direct_root_search() {
    for (p, k) in [(3, 1), (5, 1), (7, 1)] {
        let t = Tower::new(p, k, 1, None).unwrap();
        for alpha in t.elements() {
            for beta in t.fq_elements() {
                if alpha.is_zero() && beta.is_zero() {
                    continue;
                }
                let d = Poly::new(&t, vec![alpha.bar(), beta, alpha]);
                let prof = quad_root_profile(&d).unwrap().profile;
                let roots: Vec<Elt<'_>> = t.elements().filter(|&x| d.eval(x).is_zero()).collect();
                let double = |r: Elt<'_>| d.derivative().eval(r).is_zero();
                let expect = if alpha.is_zero() {
                    RootProfile::NoneInMu(vec![t.zero()])
                } else if roots.len() == 1 && double(roots[0]) {
                    RootProfile::MultipleInMu(roots[0])
                } else {
                    assert_eq!(roots.len(), 2, "roots of {d:?} lie in F_q^2");
                    if roots.iter().all(|r| r.in_mu()) {
                        RootProfile::TwoDistinctInMu(roots[0], roots[1])
                    } else {
                        assert!(roots.iter().all(|r| !r.in_mu()));
                        RootProfile::NoneInMu(roots.clone())
                    }
                };
                assert_eq!(prof, expect, "alpha={alpha} beta={beta}");
            }
        }
    }
}
