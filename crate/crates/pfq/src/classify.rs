//! Decision tree for quadrinomials, canonical decompositions with explicit
//! linear witnesses, and the planarity verdict.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{hilbert90, Elt, Tower};
use crate::geometry::scr_point_set;
use crate::oracle::{biprojective_coeffs, canonical_coeffs, CanonicalTag, LinMap};
use crate::poly::{
    mu_to_p1_sending, perm_mu_sending, poly_gcd, quad_root_profile, roots_in_mu, Mobius, Point,
    Poly, RatFn, RootProfile,
};
use crate::quad::{build_quad, invariants, CoeffVec, InvariantPack, QuadData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("all coefficients are zero")]
    AllZeroCoefficients,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("witness verification failed: {0}")]
    WitnessVerificationFailed(String),
    #[error("k does not divide ell")]
    KDoesNotDivideL,
}

fn fail(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::WitnessVerificationFailed(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coarse {
    ConstantG,
    ARootInMu,
    MonomialEquiv,
    BranchOneQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    I1,
    I2,
    I3,
    II1,
    II2,
    II3,
    II4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::I1 => "i1",
            Family::I2 => "i2",
            Family::I3 => "i3",
            Family::II1 => "ii1",
            Family::II2 => "ii2",
            Family::II3 => "ii3",
            Family::II4 => "ii4",
        };
        f.write_str(s)
    }
}

impl Family {
    pub fn target(self) -> CanonicalTag {
        match self {
            Family::I1 => CanonicalTag::P0,
            Family::I2 => CanonicalTag::F0,
            Family::I3 => CanonicalTag::F1,
            Family::II1 => CanonicalTag::P1,
            Family::II2 => CanonicalTag::P2,
            Family::II3 => CanonicalTag::P3,
            Family::II4 => CanonicalTag::F2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassTag {
    ConstantG,
    ARootInMu,
    P0,
    F0,
    F1,
    P1,
    P2,
    P3,
    F2,
}

impl From<CanonicalTag> for ClassTag {
    fn from(t: CanonicalTag) -> Self {
        match t {
            CanonicalTag::P0 => ClassTag::P0,
            CanonicalTag::F0 => ClassTag::F0,
            CanonicalTag::F1 => ClassTag::F1,
            CanonicalTag::P1 => ClassTag::P1,
            CanonicalTag::P2 => ClassTag::P2,
            CanonicalTag::P3 => ClassTag::P3,
            CanonicalTag::F2 => ClassTag::F2,
            CanonicalTag::X2 => panic!("X^2 is not a class label"),
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassLabel<'a> {
    pub tag: ClassTag,
    pub epsilon: Option<Elt<'a>>,
}

impl fmt::Display for ClassLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.epsilon {
            Some(e) => write!(f, "{}(eps={})", self.tag, e),
            None => write!(f, "{}", self.tag),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SquareClass {
    Square,
    Nonsquare,
}

impl ClassLabel<'_> {
    /// Square class in F_q of a base-field epsilon.
    pub fn epsilon_square_class(&self) -> Option<SquareClass> {
        let e = self.epsilon?;
        if !e.in_fq() {
            return None;
        }
        Some(if e.is_square_fq() {
            SquareClass::Square
        } else {
            SquareClass::Nonsquare
        })
    }
}

trait FqSquare {
    #[allow(clippy::wrong_self_convention)]
    fn is_square_fq(self) -> bool;
}

impl FqSquare for Elt<'_> {
    fn is_square_fq(self) -> bool {
        crate::field::is_square_in_fq(self).expect("base field element")
    }
}

/// f_c = l1 o canonical o l2 on F_{q^2}.  For the biprojective targets the
/// canonical function is the form pulled to F_{q^2} through X = x + zeta*y.
#[derive(Debug, Clone)]
pub struct EquivWitness<'a> {
    pub l1: LinMap<'a>,
    pub l2: LinMap<'a>,
    pub target: CanonicalTag,
    pub canonical: CoeffVec<'a>,
    pub zeta: Option<Elt<'a>>,
}

impl<'a> EquivWitness<'a> {
    /// Pointwise check over all of F_{q^2}.
    pub fn holds(&self, c: &CoeffVec<'a>) -> bool {
        let t = c.tower();
        let (fv, gv) = (c.values(), self.canonical.values());
        self.l1.is_bijective()
            && self.l2.is_bijective()
            && t.elements().all(|x| {
                let inner = t.elt(gv[self.l2.eval(x).index() as usize]);
                self.l1.eval(inner).index() == fv[x.index() as usize]
            })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "L1": self.l1.to_strings(),
            "L2": self.l2.to_strings(),
            "target": self.target.to_string(),
            "canonical": self.canonical.to_strings(),
            "zeta": self.zeta.map(|z| z.to_string()),
        })
    }
}

struct Ctx<'a> {
    qd: QuadData<'a>,
    inv: InvariantPack<'a>,
}

fn ctx<'a>(c: &CoeffVec<'a>) -> Ctx<'a> {
    Ctx {
        qd: build_quad(c),
        inv: invariants(c),
    }
}

fn coarse_of(c: &CoeffVec<'_>, x: &Ctx<'_>) -> Coarse {
    let (u, v) = (&x.inv.u, &x.inv.v);
    if u.is_zero() && v.is_zero() {
        return Coarse::ConstantG;
    }
    let has_mu_root = |p: &Poly<'_>| !p.is_zero() && !roots_in_mu(p).expect("nonzero").is_empty();
    let qq = c.tower().big_q() as usize;
    if (has_mu_root(u) || has_mu_root(v)) && x.qd.deg_g != qq + 1 {
        return Coarse::ARootInMu;
    }
    if !u.is_zero() && !v.is_zero() {
        let k = u.lead() / v.lead();
        if *u == v.scale(k) {
            return Coarse::MonomialEquiv;
        }
    }
    Coarse::BranchOneQ
}

pub fn coarse_case(c: &CoeffVec<'_>) -> Coarse {
    coarse_of(c, &ctx(c))
}

fn family_of(x: &Ctx<'_>, coarse: Coarse) -> Result<Family, ClassifyError> {
    let (u, v) = (&x.inv.u, &x.inv.v);
    if !matches!(coarse, Coarse::MonomialEquiv | Coarse::BranchOneQ) {
        return Err(ClassifyError::PreconditionViolated(format!(
            "coarse case {coarse:?}"
        )));
    }
    if u.is_zero() || v.is_zero() {
        return Err(ClassifyError::PreconditionViolated(
            "U or V vanishes".into(),
        ));
    }
    if coarse == Coarse::MonomialEquiv {
        let gamma = scr_point_set(v);
        if gamma.iter().all(|p| p.fin().is_some_and(|e| e.in_mu())) {
            return Ok(Family::I1);
        }
        return Ok(if x.qd.c_gcd.deg() == Some(0) {
            Family::I2
        } else {
            Family::I3
        });
    }
    if poly_gcd(u, v).expect("nonzero").deg() != Some(0) {
        return Ok(Family::II1);
    }
    if u.deg() != Some(2) {
        return Ok(Family::II4);
    }
    Ok(match quad_root_profile(u).expect("SCR shape").profile {
        RootProfile::MultipleInMu(_) => Family::II2,
        RootProfile::TwoDistinctInMu(..) => Family::II3,
        RootProfile::NoneInMu(_) => Family::II4,
    })
}

pub fn family(c: &CoeffVec<'_>) -> Result<Family, ClassifyError> {
    let x = ctx(c);
    family_of(&x, coarse_of(c, &x))
}

fn fin<'a>(p: Point<'a>, what: &str) -> Result<Elt<'a>, ClassifyError> {
    p.fin().ok_or_else(|| fail(format!("{what} is infinite")))
}

fn mobius(r: Result<Mobius<'_>, crate::poly::PolyError>) -> Result<Mobius<'_>, ClassifyError> {
    r.map_err(|e| fail(format!("mobius construction: {e}")))
}

/// h = rho o g o sigma^-1.
fn conjugate<'a>(g: &RatFn<'a>, rho: &Mobius<'a>, sigma: &Mobius<'a>) -> RatFn<'a> {
    g.compose_right(&sigma.inverse()).compose_left(rho)
}

fn ratfn<'a>(num: Poly<'a>, den: Poly<'a>) -> RatFn<'a> {
    RatFn::new(num, den).expect("nonzero denominator")
}

/// Solves l1 with l1(w) = v from sample pairs, where w runs over values of
/// canonical o l2 and v over values of f_c.
fn solve_outer<'a>(
    t: &'a Tower,
    pairs: impl Iterator<Item = (Elt<'a>, Elt<'a>)>,
) -> Option<LinMap<'a>> {
    let mut first: Option<(Elt<'a>, Elt<'a>)> = None;
    let mut second = None;
    for (w, v) in pairs {
        if w.is_zero() {
            continue;
        }
        match first {
            None => first = Some((w, v)),
            Some((w1, _)) => {
                if !(w / w1).in_fq() {
                    second = Some((w, v));
                    break;
                }
            }
        }
    }
    let (w1, v1) = first?;
    // values on a single F_q-line: extend by zeta-scaling
    let (w2, v2) = second.unwrap_or((t.u() * w1, t.u() * v1));
    let det = w1 * w2.bar() - w1.bar() * w2;
    let s = (v1 * w2.bar() - v2 * w1.bar()) / det;
    let tt = (w1 * v2 - w2 * v1) / det;
    let l = LinMap::new(s, tt);
    l.is_bijective().then_some(l)
}

fn finish<'a>(
    c: &CoeffVec<'a>,
    target: CanonicalTag,
    canonical: CoeffVec<'a>,
    l2: LinMap<'a>,
    zeta: Option<Elt<'a>>,
) -> Result<EquivWitness<'a>, ClassifyError> {
    let t = c.tower();
    if !l2.is_bijective() {
        return Err(fail("inner map is singular"));
    }
    let (fv, gv) = (c.values(), canonical.values());
    let pairs = t.elements().map(|x| {
        (
            t.elt(gv[l2.eval(x).index() as usize]),
            t.elt(fv[x.index() as usize]),
        )
    });
    let l1 = solve_outer(t, pairs).ok_or_else(|| fail("no bijective outer map"))?;
    let w = EquivWitness {
        l1,
        l2,
        target,
        canonical,
        zeta,
    };
    if !w.holds(c) {
        return Err(fail(format!("pointwise identity fails for {target}")));
    }
    Ok(w)
}

/// sigma maps mu_{q+1} onto P^1(F_q); the inner map is read off its
/// normalised form (alpha X + gamma conj(alpha)) / (X + gamma).
fn biprojective_witness<'a>(
    c: &CoeffVec<'a>,
    tag: CanonicalTag,
    eps: Option<Elt<'a>>,
    sigma: &Mobius<'a>,
) -> Result<EquivWitness<'a>, ClassifyError> {
    let t = c.tower();
    if sigma.c.is_zero() {
        return Err(fail("sigma fixes infinity"));
    }
    let alpha = sigma.a / sigma.c;
    let gamma = sigma.d / sigma.c;
    let e = hilbert90(gamma).ok_or_else(|| fail("pole of sigma outside mu"))?;
    let zeta = t.u();
    let l2 = LinMap::new(e.bar() * (alpha.bar() + zeta), e * (alpha + zeta));
    let (n, d) = biprojective_coeffs(tag, eps, t).map_err(|er| fail(er.to_string()))?;
    let canonical =
        crate::oracle::embed_biprojective_coeffs(n, d, zeta).map_err(|er| fail(er.to_string()))?;
    finish(c, tag, canonical, l2, Some(zeta))
}

/// sigma permutes mu_{q+1}; written as (conj(a2) X + conj(a1)) / (a1 X + a2)
/// it gives the inner map a1 X^q + a2 X.
fn monomial_witness<'a>(
    c: &CoeffVec<'a>,
    tag: CanonicalTag,
    eps: Option<Elt<'a>>,
    sigma: &Mobius<'a>,
) -> Result<EquivWitness<'a>, ClassifyError> {
    let t = c.tower();
    // sigma = kappa * normal form, with conj(kappa)/kappa fixed by the entries
    let ratio = if !sigma.a.is_zero() {
        sigma.d.bar() / sigma.a
    } else {
        sigma.c.bar() / sigma.b
    };
    let kappa = hilbert90(ratio).ok_or_else(|| fail("sigma does not permute mu"))?;
    let (a1, a2) = (sigma.c / kappa, sigma.d / kappa);
    let l2 = LinMap::new(a2, a1);
    let canonical = canonical_coeffs(tag, eps, t).map_err(|er| fail(er.to_string()))?;
    finish(c, tag, canonical, l2, None)
}

fn expect_shape(
    h: &RatFn<'_>,
    num: &[(usize, Elt<'_>)],
    den: &[(usize, Elt<'_>)],
    what: &str,
) -> Result<(), ClassifyError> {
    let t = h.tower();
    let want = ratfn(Poly::from_terms(t, num), Poly::from_terms(t, den));
    if *h != want {
        return Err(fail(format!("{what}: got {h:?}")));
    }
    Ok(())
}

fn smallest_other<'a>(t: &'a Tower, avoid: Elt<'a>) -> Elt<'a> {
    t.mu_elements()
        .into_iter()
        .find(|&m| m != avoid)
        .expect("mu has q+1 >= 4 points")
}

pub fn canonical_decomposition<'a>(
    c: &CoeffVec<'a>,
) -> Result<(ClassLabel<'a>, EquivWitness<'a>), ClassifyError> {
    let t = c.tower();
    let x = ctx(c);
    let fam = family_of(&x, coarse_of(c, &x))?;
    let g = &x.qd.g;
    let (u, v, w) = (&x.inv.u, &x.inv.v, &x.inv.w);
    let qq = t.big_q() as usize;
    let (zero, one) = (t.zero(), t.one());
    let tag = fam.target();

    let (eps, witness) = match fam {
        Family::I1 => {
            let gamma = scr_point_set(v);
            if gamma.len() != 2 {
                return Err(fail("expected two ramification points"));
            }
            let (b1, b2) = (fin(gamma[0], "beta1")?, fin(gamma[1], "beta2")?);
            let (g1, g2) = (
                fin(g.eval(Point::Fin(b1)), "g(beta1)")?,
                fin(g.eval(Point::Fin(b2)), "g(beta2)")?,
            );
            let sigma = mobius(mu_to_p1_sending(b1, b2))?;
            let rho_t = mobius(mu_to_p1_sending(g1, g2))?;
            let h = conjugate(g, &rho_t, &sigma);
            let lambda = h.num().lead();
            let rho = rho_t.scaled(lambda.inv());
            expect_shape(
                &conjugate(g, &rho, &sigma),
                &[(qq + 1, one)],
                &[(0, one)],
                "P0 shape",
            )?;
            (None, biprojective_witness(c, tag, None, &sigma)?)
        }
        Family::II1 => {
            let common = poly_gcd(u, v).expect("nonzero");
            if common.deg() != Some(1) {
                return Err(fail("gcd(U,V) is not linear"));
            }
            let alpha = -common.coeff(0);
            let gamma = scr_point_set(v);
            let b2 = gamma
                .iter()
                .filter_map(|p| p.fin())
                .find(|&b| b != alpha)
                .ok_or_else(|| fail("V has no second root"))?;
            let (g1, g2) = (
                fin(g.eval(Point::Fin(b2)), "g(beta2)")?,
                fin(g.eval(Point::Fin(alpha)), "g(alpha)")?,
            );
            let sigma_t = mobius(mu_to_p1_sending(b2, alpha))?;
            let rho_t = mobius(mu_to_p1_sending(g1, g2))?;
            let h = conjugate(g, &rho_t, &sigma_t);
            // h = lambda X^(Q+1) / (X + e)
            let (lambda, e) = (h.num().lead(), h.den().coeff(0));
            if h.den().deg() != Some(1) || e.is_zero() {
                return Err(fail(format!("P1 pre-shape: got {h:?}")));
            }
            let sigma = sigma_t.scaled(e.inv());
            let rho = rho_t.scaled((lambda * e.pow(qq as u128)).inv());
            expect_shape(
                &conjugate(g, &rho, &sigma),
                &[(qq + 1, one)],
                &[(1, one), (0, one)],
                "P1 shape",
            )?;
            (None, biprojective_witness(c, tag, None, &sigma)?)
        }
        Family::II2 => {
            let a1 = match quad_root_profile(u).expect("SCR").profile {
                RootProfile::MultipleInMu(r) => r,
                _ => return Err(fail("U has no double root")),
            };
            let a2 = fin(
                *scr_point_set(v)
                    .first()
                    .ok_or_else(|| fail("V has no root"))?,
                "alpha2",
            )?;
            let beta = fin(
                *scr_point_set(w)
                    .first()
                    .ok_or_else(|| fail("W has no root"))?,
                "beta",
            )?;
            // sigma sends alpha1 to infinity and alpha2 to 0
            let sigma = mobius(mu_to_p1_sending(a1, a2))?;
            let rho_t = mobius(mu_to_p1_sending(smallest_other(t, beta), beta))?;
            let h = conjugate(g, &rho_t, &sigma);
            let lambda = h.num().lead();
            if h.num().deg() != Some(qq)
                || h.num().coeffs()[..qq].iter().any(|e| !e.is_zero())
                || h.den().deg() != Some(qq + 1)
            {
                return Err(fail(format!("P2 pre-shape: got {h:?}")));
            }
            let d = |i: usize| h.den().coeff(i) / lambda;
            let (c00, c01, c02, c03) = (d(qq + 1), d(qq), d(1), d(0));
            if !c02.is_zero() {
                return Err(fail("c02 is nonzero"));
            }
            let m = mobius(Mobius::new(c00, zero, -c01, one))?;
            let rho = m.compose(&rho_t);
            let eps = c03 / c00;
            expect_shape(
                &conjugate(g, &rho, &sigma),
                &[(qq, one)],
                &[(qq + 1, one), (0, eps)],
                "P2 shape",
            )?;
            (Some(eps), biprojective_witness(c, tag, Some(eps), &sigma)?)
        }
        Family::II3 => {
            let gamma = scr_point_set(v);
            if gamma.len() != 2 {
                return Err(fail("V needs two roots"));
            }
            let (b1, b2) = (fin(gamma[0], "beta1")?, fin(gamma[1], "beta2")?);
            let (g1, g2) = (
                fin(g.eval(Point::Fin(b1)), "g(beta1)")?,
                fin(g.eval(Point::Fin(b2)), "g(beta2)")?,
            );
            let sigma_t = mobius(mu_to_p1_sending(b1, b2))?;
            let rho_t = mobius(mu_to_p1_sending(g1, g2))?;
            let h = conjugate(g, &rho_t, &sigma_t);
            // h = lambda X^Q (X + e1) / (X + e2)
            let lambda = h.num().lead();
            let e1 = h.num().coeff(qq) / lambda;
            let e2 = h.den().coeff(0);
            if e1.is_zero() || h.den().deg() != Some(1) {
                return Err(fail(format!("P3 pre-shape: got {h:?}")));
            }
            let sigma = sigma_t.scaled(-e1.inv());
            let rho = rho_t.scaled(-(lambda * e1.pow(qq as u128)).inv());
            let eps = -e2 / e1;
            expect_shape(
                &conjugate(g, &rho, &sigma),
                &[(qq + 1, one), (qq, -one)],
                &[(1, one), (0, eps)],
                "P3 shape",
            )?;
            (Some(eps), biprojective_witness(c, tag, Some(eps), &sigma)?)
        }
        Family::I2 | Family::I3 | Family::II4 => {
            let pts: Vec<Point<'a>> = if fam == Family::I3 {
                let cg = &x.qd.c_gcd;
                match cg.deg() {
                    Some(2) => cg.roots_in_field().into_iter().map(Point::Fin).collect(),
                    Some(1) => vec![Point::Fin(-cg.coeff(0)), Point::Inf],
                    _ => return Err(fail("unexpected gcd(A,B) degree")),
                }
            } else {
                scr_point_set(v)
            };
            let beta = *pts
                .iter()
                .min()
                .ok_or_else(|| fail("empty ramification set"))?;
            let sigma = mobius(perm_mu_sending(t, beta))?;
            let rho_t = mobius(perm_mu_sending(t, g.eval(beta)))?;
            let h = conjugate(g, &rho_t, &sigma);
            match fam {
                Family::I2 | Family::I3 => {
                    let e = if fam == Family::I2 { qq + 1 } else { qq - 1 };
                    let rho = rho_t.scaled(h.num().lead().inv());
                    expect_shape(
                        &conjugate(g, &rho, &sigma),
                        &[(e, one)],
                        &[(0, one)],
                        "monomial shape",
                    )?;
                    (None, monomial_witness(c, tag, None, &sigma)?)
                }
                _ => {
                    // h = X^Q (a X + b) / (X + eps)
                    let b = h.num().coeff(qq);
                    let eps = h.den().coeff(0);
                    if b.is_zero() || h.den().deg() != Some(1) {
                        return Err(fail(format!("F2 pre-shape: got {h:?}")));
                    }
                    let rho = rho_t.scaled(b.inv());
                    expect_shape(
                        &conjugate(g, &rho, &sigma),
                        &[(qq + 1, eps.bar()), (qq, one)],
                        &[(1, one), (0, eps)],
                        "F2 shape",
                    )?;
                    (Some(eps), monomial_witness(c, tag, Some(eps), &sigma)?)
                }
            }
        }
    };
    Ok((
        ClassLabel {
            tag: tag.into(),
            epsilon: eps,
        },
        witness,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// k | ell: the function reduces to a quadratic form in X and X^q.
    TildeReduced,
    ConstantG,
    ARootInMu,
    P0NeverPlanar,
    F0EllOverDeltaEven,
    F1KEllOverDeltaSqOdd,
    P1NeverPlanar,
    P2KOverDeltaOddEpsNonsquare,
    P3NeverPlanar,
    F2NeverPlanar,
}

impl Rule {
    /// The condition the verdict was read from.
    pub fn explain(self) -> &'static str {
        match self {
            Rule::TildeReduced => {
                "k | ell: planar iff the reduced discriminant is a nonzero square in F_q"
            }
            Rule::ConstantG => "g is constant: never planar",
            Rule::ARootInMu => "A has a root in mu_(q+1): never planar",
            Rule::P0NeverPlanar => "class P0: never planar",
            Rule::F0EllOverDeltaEven => "class F0: planar iff ell/delta is even",
            Rule::F1KEllOverDeltaSqOdd => "class F1: planar iff k*ell/delta^2 is odd",
            Rule::P1NeverPlanar => "class P1: never planar",
            Rule::P2KOverDeltaOddEpsNonsquare => {
                "class P2: planar iff k/delta is odd and epsilon is a nonsquare in F_q"
            }
            Rule::P3NeverPlanar => "class P3: never planar",
            Rule::F2NeverPlanar => "class F2: never planar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeData<'a> {
    pub a: [Elt<'a>; 3],
    pub e: Elt<'a>,
    pub theta: Elt<'a>,
    pub delta: Elt<'a>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<'a> {
    pub planar: bool,
    pub rule: Rule,
    pub class: Option<ClassLabel<'a>>,
    pub tilde: Option<TildeData<'a>>,
}

/// The (X^q)^2, X^(q+1), X^2 coefficients of the function f_c induces when k | ell.
pub fn tilde_reduce<'a>(c: &CoeffVec<'a>) -> Result<[Elt<'a>; 3], ClassifyError> {
    let t = c.tower();
    if !t.k_divides_ell() {
        return Err(ClassifyError::KDoesNotDivideL);
    }
    let [c0, c1, c2, c3] = c.c;
    Ok(if (t.ell() / t.k()) % 2 == 1 {
        [c2, c0 + c3, c1]
    } else {
        [c0, c1 + c2, c3]
    })
}

/// Verdict for a0 conj(X)^2 + a1 X conj(X) + a2 X^2.
pub fn tilde_verdict_of<'a>(a: [Elt<'a>; 3]) -> Verdict<'a> {
    let [a0, a1, a2] = a;
    let q = a0.tower().q() as u128;
    let e = a2 * a2.bar() - a0 * a0.bar();
    let theta = a1.bar() * a2 - a0.bar() * a1;
    let delta = e * e - theta.pow(q + 1);
    let planar = !delta.is_zero() && delta.is_square_fq();
    Verdict {
        planar,
        rule: Rule::TildeReduced,
        class: None,
        tilde: Some(TildeData { a, e, theta, delta }),
    }
}

pub fn tilde_verdict<'a>(c: &CoeffVec<'a>) -> Result<Verdict<'a>, ClassifyError> {
    Ok(tilde_verdict_of(tilde_reduce(c)?))
}

fn label_only<'a>(tag: ClassTag) -> ClassLabel<'a> {
    ClassLabel { tag, epsilon: None }
}

/// Verdict for a class label when k does not divide ell.  Parity side
/// conditions use integers only.
pub fn verdict_for_label<'a>(t: &Tower, label: ClassLabel<'a>) -> Verdict<'a> {
    let (k, ell, d) = (t.k(), t.ell(), t.delta());
    let (planar, rule) = match label.tag {
        ClassTag::ConstantG => (false, Rule::ConstantG),
        ClassTag::ARootInMu => (false, Rule::ARootInMu),
        ClassTag::P0 => (false, Rule::P0NeverPlanar),
        ClassTag::F0 => ((ell / d) % 2 == 0, Rule::F0EllOverDeltaEven),
        ClassTag::F1 => (((k / d) * (ell / d)) % 2 == 1, Rule::F1KEllOverDeltaSqOdd),
        ClassTag::P1 => (false, Rule::P1NeverPlanar),
        ClassTag::P2 => {
            let nonsq = label.epsilon_square_class() == Some(SquareClass::Nonsquare);
            ((k / d) % 2 == 1 && nonsq, Rule::P2KOverDeltaOddEpsNonsquare)
        }
        ClassTag::P3 => (false, Rule::P3NeverPlanar),
        ClassTag::F2 => (false, Rule::F2NeverPlanar),
    };
    Verdict {
        planar,
        rule,
        class: Some(label),
        tilde: None,
    }
}

/// Everything known about one coefficient vector, computed once.
#[derive(Debug, Clone)]
pub struct Classification<'a> {
    pub coarse: Coarse,
    pub family: Option<Family>,
    pub label: ClassLabel<'a>,
    pub witness: Option<EquivWitness<'a>>,
    pub verdict: Verdict<'a>,
}

impl Classification<'_> {
    /// True when the square class of a P2 epsilon need not be an invariant.
    pub fn epsilon_class_may_vary(&self) -> bool {
        let t = self.label.epsilon.map(|e| e.tower());
        self.label.tag == ClassTag::P2 && t.is_some_and(|t| (t.k() / t.delta()) % 2 == 0)
    }
}

pub fn classify_full<'a>(c: &CoeffVec<'a>) -> Result<Classification<'a>, ClassifyError> {
    let t = c.tower();
    let x = ctx(c);
    let coarse = coarse_of(c, &x);
    let (family, label, witness) = match coarse {
        Coarse::ConstantG => (None, label_only(ClassTag::ConstantG), None),
        Coarse::ARootInMu => (None, label_only(ClassTag::ARootInMu), None),
        _ => {
            let fam = family_of(&x, coarse)?;
            let (label, w) = canonical_decomposition(c)?;
            (Some(fam), label, Some(w))
        }
    };
    let verdict = if t.k_divides_ell() {
        tilde_verdict(c)?
    } else {
        verdict_for_label(t, label)
    };
    Ok(Classification {
        coarse,
        family,
        label,
        witness,
        verdict,
    })
}

pub fn planar_verdict<'a>(c: &CoeffVec<'a>) -> Result<Verdict<'a>, ClassifyError> {
    let t = c.tower();
    if t.k_divides_ell() {
        return tilde_verdict(c);
    }
    let x = ctx(c);
    let coarse = coarse_of(c, &x);
    let label = match coarse {
        Coarse::ConstantG => label_only(ClassTag::ConstantG),
        Coarse::ARootInMu => label_only(ClassTag::ARootInMu),
        _ => match family_of(&x, coarse)? {
            // only these carry an epsilon
            Family::II2 | Family::II3 | Family::II4 => canonical_decomposition(c)?.0,
            fam => label_only(fam.target().into()),
        },
    };
    Ok(verdict_for_label(t, label))
}

/// Full classification record as printed by the command line tool.
pub fn classify_json(c: &CoeffVec<'_>, with_witness: bool) -> Result<Value, ClassifyError> {
    let cl = classify_full(c)?;
    let v = &cl.verdict;
    let mut out = json!({
        "c": c.to_strings(),
        "coarse": cl.coarse,
        "family": cl.family.map(|f| f.to_string()),
        "class": cl.label.tag.to_string(),
        "epsilon": cl.label.epsilon.map(|e| e.to_string()),
        "epsilon_square_class": cl.label.epsilon_square_class(),
        "epsilon_class_may_vary": cl.epsilon_class_may_vary(),
        "verdict": v.planar,
        "rule": v.rule,
        "rule_text": v.rule.explain(),
    });
    if let Some(td) = &v.tilde {
        out["tilde"] = json!({
            "a": td.a.map(|e| e.to_string()),
            "e": td.e.to_string(),
            "theta": td.theta.to_string(),
            "delta": td.delta.to_string(),
        });
    }
    if with_witness {
        out["witness"] = cl.witness.map(|w| w.to_json()).unwrap_or(Value::Null);
    }
    Ok(out)
}
