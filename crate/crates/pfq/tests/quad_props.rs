use pfq::field::Tower;
use pfq::geometry::{hurwitz_check, ram_report, GeometryError};
use pfq::poly::{conj_reciprocal, Point, Poly};
use pfq::quad::{build_quad, check_identities, invariants, CoeffVec};
use proptest::prelude::*;

const FIELDS: [(u32, u32, u32); 6] = [
    (3, 1, 1),
    (3, 1, 2),
    (5, 1, 1),
    (7, 1, 1),
    (3, 2, 1),
    (3, 3, 1),
];

fn case() -> impl Strategy<Value = ((u32, u32, u32), [u32; 4], u32, u32)> {
    (
        prop::sample::select(FIELDS.to_vec()),
        any::<[u32; 4]>(),
        any::<u32>(),
        any::<u32>(),
    )
}

fn coeffs<'a>(t: &'a Tower, raw: [u32; 4]) -> Option<CoeffVec<'a>> {
    CoeffVec::from_indices(t, raw.map(|v| v % t.q2())).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn identities_hold((f, raw, x, _) in case()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let Some(c) = coeffs(&t, raw) else { return Ok(()) };
        let r = check_identities(&c);
        prop_assert!(r.all(), "{c}: {r:?}");
        // the last identity once more, pointwise
        let (qd, inv) = (build_quad(&c), invariants(&c));
        let x = t.elt(x % t.q2());
        let (a, b) = (qd.a.eval(x), qd.b.eval(x));
        let lhs = inv.u.eval(x) * inv.v.frob_expand(t.big_q()).eval(x);
        let rhs = inv.w.coeff(2) * b * b + inv.w.coeff(1) * a * b + inv.w.coeff(0) * a * a;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subfield_scaling((f, raw, a, x) in case()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let Some(c) = coeffs(&t, raw) else { return Ok(()) };
        let a = t.elt(a % t.q());
        let x = t.elt(x % t.q2());
        prop_assert_eq!(c.eval(a * x), a.pow(t.big_q() as u128 + 1) * c.eval(x));
    }

    #[test]
    fn b_is_the_conjugate_reciprocal_of_a((f, raw, _, _) in case()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let Some(c) = coeffs(&t, raw) else { return Ok(()) };
        let qd = build_quad(&c);
        let top = t.big_q() as usize + 1;
        let shift = top - qd.a.deg().unwrap();
        let expect = conj_reciprocal(&qd.a).unwrap().mul(&Poly::monomial(t.one(), shift));
        prop_assert_eq!(qd.b, expect);
    }

    #[test]
    fn swap_symmetry((f, raw, _, _) in case()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let Some(c) = coeffs(&t, raw) else { return Ok(()) };
        let (i, j) = (invariants(&c), invariants(&c.swapped()));
        prop_assert_eq!(j.v, i.v.conj().neg());
        prop_assert_eq!(j.w, i.w);
    }

    #[test]
    fn ramification_lemma((f, raw, _, _) in case()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let Some(c) = coeffs(&t, raw) else { return Ok(()) };
        let inv = invariants(&c);
        let g = build_quad(&c).g;
        let rep = match ram_report(&c) {
            Ok(r) => r,
            Err(GeometryError::ConstantG | GeometryError::BothUVZero | GeometryError::DegenerateInvariants | GeometryError::NonSeparable) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{c}: {e}"))),
        };
        prop_assert!(rep.checks.complete && rep.checks.branch_in_lambda, "{c}: {:?}", rep.checks);
        if !inv.u.is_zero() && !inv.v.is_zero() && !inv.w.is_zero() {
            prop_assert!(rep.checks.mu_shape && rep.checks.cardinality, "{c}: {:?}", rep.checks);
        }
        // ramification points are the roots of the wronskian plus possibly infinity
        let wr = g.num().derivative().mul(g.den()).sub(&g.num().mul(&g.den().derivative()));
        for (pt, e) in &rep.ram_indices {
            if let Point::Fin(x) = pt {
                prop_assert_eq!(*e > 1, wr.eval(*x).is_zero());
            }
        }
        for fib in &rep.branch {
            prop_assert_eq!(fib.multiset.iter().sum::<usize>(), g.degree());
        }
        let h = hurwitz_check(&g).unwrap();
        prop_assert!(h.holds && h.equality_iff_tame, "{c}: {h:?}");
    }
}
