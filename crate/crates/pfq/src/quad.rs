//! The quadrinomial f_c, its rational function g = B/A, and the invariant
//! pack (e1, e2, e3, theta2, theta3, theta1^2, U, V, W).

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{inv_frobenius_power, Elt, FieldError, Tower};
use crate::poly::{poly_gcd, scr_delta, Poly, RatFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("all four coefficients are zero")]
    AllZeroCoefficients,
    #[error("expected four coefficients, got {0}")]
    WrongLength(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// c = (c0, c1, c2, c3), never all zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoeffVec<'a> {
    pub c: [Elt<'a>; 4],
}

impl std::fmt::Debug for CoeffVec<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

impl std::fmt::Display for CoeffVec<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl<'a> CoeffVec<'a> {
    pub fn new(c: [Elt<'a>; 4]) -> Result<CoeffVec<'a>, QuadError> {
        if c.iter().all(|x| x.is_zero()) {
            return Err(QuadError::AllZeroCoefficients);
        }
        Ok(CoeffVec { c })
    }

    pub fn from_indices(t: &'a Tower, v: [u32; 4]) -> Result<CoeffVec<'a>, QuadError> {
        CoeffVec::new(v.map(|x| t.elt(x)))
    }

    /// Accepts four element strings, or one string with comma-separated entries.
    pub fn parse(t: &'a Tower, parts: &[String]) -> Result<CoeffVec<'a>, QuadError> {
        let items: Vec<&str> = if parts.len() == 1 {
            parts[0].split(',').collect()
        } else {
            parts.iter().map(|s| s.as_str()).collect()
        };
        if items.len() != 4 {
            return Err(QuadError::WrongLength(items.len()));
        }
        let mut c = [t.zero(); 4];
        for (slot, s) in c.iter_mut().zip(items) {
            *slot = t.parse(s)?;
        }
        CoeffVec::new(c)
    }

    pub fn tower(&self) -> &'a Tower {
        self.c[0].tower()
    }

    /// (c3, c2, c1, c0), which corresponds to g(1/X).
    pub fn swapped(&self) -> CoeffVec<'a> {
        CoeffVec {
            c: [self.c[3], self.c[2], self.c[1], self.c[0]],
        }
    }

    /// The four exponents of f_c in order c0..c3.
    pub fn exponents(&self) -> [u64; 4] {
        let t = self.tower();
        let (q, bq) = (t.q() as u64, t.big_q());
        let n = t.q2() as u64 - 1;
        // reduce mod q^2 - 1 but keep positive exponents positive
        let red = |e: u64| if e == 0 { 0 } else { (e - 1) % n + 1 };
        [red(q * (bq + 1)), red(q * bq + 1), red(bq + q), red(bq + 1)]
    }

    pub fn eval(&self, x: Elt<'a>) -> Elt<'a> {
        let e = self.exponents();
        self.c
            .iter()
            .zip(e)
            .fold(self.tower().zero(), |acc, (&c, e)| {
                acc + c * x.pow(e as u128)
            })
    }

    /// f_c on every element, indexed by element index.
    pub fn values(&self) -> Vec<u32> {
        let t = self.tower();
        let e = self.exponents();
        let cs = self.c.map(|x| x.index());
        (0..t.q2())
            .map(|x| {
                let mut acc = 0u32;
                for i in 0..4 {
                    if cs[i] != 0 {
                        acc = t.add_raw(acc, t.mul_raw(cs[i], t.pow_raw(x, e[i] as u128)));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct QuadData<'a> {
    pub a: Poly<'a>,
    pub b: Poly<'a>,
    pub g: RatFn<'a>,
    pub c_gcd: Poly<'a>,
    pub deg_g: usize,
}

fn qpos(t: &Tower) -> usize {
    usize::try_from(t.big_q()).expect("Q fits usize")
}

/// A(X) = c0 X^(Q+1) + c1 X^Q + c2 X + c3.
pub fn poly_a<'a>(c: &CoeffVec<'a>) -> Poly<'a> {
    let t = c.tower();
    let q = qpos(t);
    Poly::from_terms(t, &[(q + 1, c.c[0]), (q, c.c[1]), (1, c.c[2]), (0, c.c[3])])
}

/// B(X) = conj(c3) X^(Q+1) + conj(c2) X^Q + conj(c1) X + conj(c0).
pub fn poly_b<'a>(c: &CoeffVec<'a>) -> Poly<'a> {
    let t = c.tower();
    let q = qpos(t);
    let b = c.c.map(|x| x.bar());
    Poly::from_terms(t, &[(q + 1, b[3]), (q, b[2]), (1, b[1]), (0, b[0])])
}

pub fn build_quad<'a>(c: &CoeffVec<'a>) -> QuadData<'a> {
    let a = poly_a(c);
    let b = poly_b(c);
    let g = RatFn::new(b.clone(), a.clone()).expect("A is nonzero for c != 0");
    let c_gcd = poly_gcd(&a, &b).expect("A is nonzero");
    let deg_g = g.degree();
    QuadData {
        a,
        b,
        g,
        c_gcd,
        deg_g,
    }
}

#[derive(Debug, Clone)]
pub struct InvariantPack<'a> {
    pub e1: Elt<'a>,
    pub e2: Elt<'a>,
    pub e3: Elt<'a>,
    pub theta2: Elt<'a>,
    pub theta3: Elt<'a>,
    pub theta1_sq: Elt<'a>,
    pub u: Poly<'a>,
    pub v: Poly<'a>,
    pub w: Poly<'a>,
}

pub fn invariants<'a>(c: &CoeffVec<'a>) -> InvariantPack<'a> {
    let t = c.tower();
    let [c0, c1, c2, c3] = c.c;
    let n = |x: Elt<'a>| x * x.bar();
    let (n0, n1, n2, n3) = (n(c0), n(c1), n(c2), n(c3));
    let e1 = n0 - n1 - n2 + n3;
    let e2 = -n0 - n1 + n2 + n3;
    let e3 = -n0 + n1 - n2 + n3;
    let theta2 = c2.bar() * c3 - c0.bar() * c1;
    let theta3 = c1.bar() * c3 - c0.bar() * c2;
    let theta1_sq = e2 * e2 - t.from_int(4) * theta2 * theta2.bar();
    let w_top = c1 * c2 - c0 * c3;
    let w = Poly::new(t, vec![w_top.bar(), e1, w_top]);
    let u = Poly::new(t, vec![theta2, e2, theta2.bar()]);
    let ell = t.ell();
    let r = |x: Elt<'a>| inv_frobenius_power(x, ell);
    let v = Poly::new(t, vec![r(theta3), r(e3), r(theta3.bar())]);
    InvariantPack {
        e1,
        e2,
        e3,
        theta2,
        theta3,
        theta1_sq,
        u,
        v,
        w,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityReport {
    pub e1: bool,
    pub e2: bool,
    pub e3: bool,
    pub e4: bool,
}

impl IdentityReport {
    pub fn all(&self) -> bool {
        self.e1 && self.e2 && self.e3 && self.e4
    }
}

pub fn check_identities(c: &CoeffVec<'_>) -> IdentityReport {
    check_identities_impl(c, false)
}

/// Negative control: checks the fourth identity with its sign flipped.
#[doc(hidden)]
pub fn check_identities_faulty(c: &CoeffVec<'_>) -> IdentityReport {
    check_identities_impl(c, true)
}

fn check_identities_impl(c: &CoeffVec<'_>, flip_e4: bool) -> IdentityReport {
    let t = c.tower();
    let qd = build_quad(c);
    let inv = invariants(c);
    let (a, b) = (&qd.a, &qd.b);
    let [c0, c1, c2, c3] = c.c;
    let bq = t.big_q();

    let lhs1 = Poly::new(t, vec![c2.bar(), c3.bar()])
        .mul(a)
        .sub(&Poly::new(t, vec![c1, c0]).mul(b));
    let e1 = inv.u == lhs1;

    let vq = inv.v.frob_expand(bq);
    let e2 = vq == a.mul(&b.derivative()).sub(&a.derivative().mul(b));

    let e3 = match (scr_delta(&inv.w), scr_delta(&inv.u), scr_delta(&inv.v)) {
        (Ok(dw), Ok(du), Ok(dv)) => dw == du && du == dv.pow(bq as u128) && du == inv.theta1_sq,
        _ => false,
    };

    let rhs4 = b
        .mul(b)
        .scale(inv.w.coeff(2))
        .add(&b.mul(a).scale(inv.w.coeff(1)))
        .add(&a.mul(a).scale(inv.w.coeff(0)));
    let rhs4 = if flip_e4 { rhs4.scale(-t.one()) } else { rhs4 };
    let e4 = inv.u.mul(&vq) == rhs4;

    IdentityReport { e1, e2, e3, e4 }
}

pub fn invariants_json(c: &CoeffVec<'_>) -> Value {
    let inv = invariants(c);
    let qd = build_quad(c);
    let id = check_identities(c);
    json!({
        "c": c.to_strings(),
        "e1": inv.e1.to_string(),
        "e2": inv.e2.to_string(),
        "e3": inv.e3.to_string(),
        "theta2": inv.theta2.to_string(),
        "theta3": inv.theta3.to_string(),
        "theta1_sq": inv.theta1_sq.to_string(),
        "U": inv.u.to_strings(),
        "V": inv.v.to_strings(),
        "W": inv.w.to_strings(),
        "deg_g": qd.deg_g,
        "C": qd.c_gcd.to_strings(),
        "identities": {"E1": id.e1, "E2": id.e2, "E3": id.e3, "E4": id.e4},
    })
}
