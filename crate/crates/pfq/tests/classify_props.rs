use std::sync::OnceLock;

use pfq::classify::{
    canonical_decomposition, classify_full, coarse_case, family, ClassTag, Coarse, SquareClass,
};
use pfq::field::{Elt, Tower};
use pfq::oracle::{
    canonical_coeffs, compose_linear, is_planar_bruteforce, CanonicalTag, FnTable, LinMap,
};
use pfq::quad::CoeffVec;
use proptest::prelude::*;

const FIELDS: [(u32, u32, u32); 6] = [
    (3, 1, 1),
    (3, 1, 2),
    (5, 1, 1),
    (3, 2, 1),
    (3, 2, 2),
    (3, 3, 1),
];

fn towers() -> &'static Vec<Tower> {
    static T: OnceLock<Vec<Tower>> = OnceLock::new();
    T.get_or_init(|| {
        FIELDS
            .iter()
            .map(|&(p, k, l)| Tower::new(p, k, l, None).unwrap())
            .collect()
    })
}

fn eval_quad<'a>(c: [Elt<'a>; 4], x: Elt<'a>) -> Elt<'a> {
    let t = x.tower();
    let (q, bq) = (t.q() as u128, t.big_q() as u128);
    let e = [q * bq + q, q * bq + 1, bq + q, bq + 1];
    (0..4).fold(t.zero(), |acc, i| acc + c[i] * x.pow(e[i]))
}

fn lin<'a>(t: &'a Tower, s: u32, u: u32) -> LinMap<'a> {
    LinMap::new(t.elt(s % t.q2()), t.elt(u % t.q2()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decision_tree_is_total(fi in 0..FIELDS.len(), raw in any::<[u32; 4]>()) {
        let t = &towers()[fi];
        let Ok(c) = CoeffVec::from_indices(t, raw.map(|v| v % t.q2())) else { return Ok(()) };
        let coarse = coarse_case(&c);
        let fam = family(&c);
        match coarse {
            Coarse::MonomialEquiv | Coarse::BranchOneQ => prop_assert!(fam.is_ok(), "{c}: {fam:?}"),
            Coarse::ConstantG | Coarse::ARootInMu => prop_assert!(fam.is_err()),
        }
        let cl = classify_full(&c).unwrap();
        if let Ok(f) = fam {
            prop_assert_eq!(cl.label.tag, ClassTag::from(f.target()));
            let w = cl.witness.expect("families carry a witness");
            // witness checked against the exponent formula, not the library tables
            let h = canonical_coeffs(f.target(), cl.label.epsilon, t).unwrap();
            prop_assert!(t.elements().all(|x| w.l1.eval(eval_quad(h.c, w.l2.eval(x))) == eval_quad(c.c, x)));
        }
    }

    #[test]
    fn verdict_matches_brute_force(fi in 0..FIELDS.len(), raw in any::<[u32; 4]>()) {
        let t = &towers()[fi];
        let Ok(c) = CoeffVec::from_indices(t, raw.map(|v| v % t.q2())) else { return Ok(()) };
        let v = classify_full(&c).unwrap().verdict;
        prop_assert_eq!(v.planar, is_planar_bruteforce(t, &FnTable::of_coeffs(&c)).planar, "{}", c);
    }

    #[test]
    fn round_trips_keep_the_class(
        fi in prop::sample::select(vec![3usize, 5]),
        ti in 0..7usize,
        e in any::<u32>(),
        l in any::<[u32; 4]>(),
    ) {
        let t = &towers()[fi];
        let tag = [
            CanonicalTag::P0, CanonicalTag::F0, CanonicalTag::F1, CanonicalTag::P1,
            CanonicalTag::P2, CanonicalTag::P3, CanonicalTag::F2,
        ][ti];
        let eps = tag.needs_epsilon().then(|| match tag {
            CanonicalTag::F2 => t.elt(1 + e % (t.q2() - 1)),
            _ => t.elt(1 + e % (t.q() - 1)),
        });
        let Ok(base) = canonical_coeffs(tag, eps, t) else { return Ok(()) };
        let (l1, l2) = (lin(t, l[0], l[1]), lin(t, l[2], l[3]));
        prop_assume!(l1.is_bijective() && l2.is_bijective());
        let c = compose_linear(&base, &l1, &l2).unwrap();
        let (label, w) = canonical_decomposition(&c).unwrap();
        prop_assert_eq!(label.tag, ClassTag::from(tag));
        prop_assert!(w.holds(&c));
        match tag {
            CanonicalTag::P2 if (t.k() / t.delta()) % 2 == 1 => {
                let sq = |x: Elt<'_>| t.fq_elements().any(|r| r * r == x);
                let want = if sq(eps.unwrap()) { SquareClass::Square } else { SquareClass::Nonsquare };
                prop_assert_eq!(label.epsilon_square_class(), Some(want));
            }
            CanonicalTag::F2 => prop_assert!(!label.epsilon.unwrap().in_mu()),
            _ => {}
        }
    }
}
