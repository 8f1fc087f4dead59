//! Ramification of g = B/A and the point sets Gamma, Lambda, Sigma built
//! from the roots of V, W and U.

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Tower;
use crate::poly::{quad_root_profile, Mobius, Point, Poly, RatFn, RootProfile};
use crate::quad::{build_quad, invariants, CoeffVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the rational function is constant")]
    ConstantFunction,
    #[error("g is constant")]
    ConstantG,
    #[error("U and V are both zero")]
    BothUVZero,
    #[error("the rational function is not separable")]
    NonSeparable,
    #[error("U or W vanishes, so the ramification lemma does not apply")]
    DegenerateInvariants,
    #[error("some preimages lie outside F_(q^4)")]
    PreimageOutsideWorkingField,
    #[error("some ramification lies outside F_(q^2)")]
    RamificationOutsideWorkingField,
}

fn inversion(t: &Tower) -> Mobius<'_> {
    Mobius::new(t.zero(), t.one(), t.one(), t.zero()).unwrap()
}

/// The polynomial whose roots are the finite preimages of beta.
fn fiber_poly<'a>(g: &RatFn<'a>, beta: Point<'a>) -> Poly<'a> {
    match beta {
        Point::Inf => g.den().clone(),
        Point::Fin(b) => g.num().sub(&g.den().scale(b)),
    }
}

/// e_G(alpha).
pub fn ram_index<'a>(g: &RatFn<'a>, alpha: Point<'a>) -> Result<usize, GeometryError> {
    if g.is_constant() {
        return Err(GeometryError::ConstantFunction);
    }
    match alpha {
        Point::Inf => {
            let t = g.tower();
            ram_index(&g.compose_right(&inversion(t)), Point::Fin(t.zero()))
        }
        Point::Fin(a) => Ok(fiber_poly(g, g.eval(alpha)).root_multiplicity(a)),
    }
}

/// E_G(beta): the ramification indices over beta, sorted, for preimages in P^1(F_{q^4}).
pub fn ram_multiset<'a>(g: &RatFn<'a>, beta: Point<'a>) -> Result<Vec<usize>, GeometryError> {
    if g.is_constant() {
        return Err(GeometryError::ConstantFunction);
    }
    let t = g.tower();
    let mut out = Vec::new();
    if g.eval(Point::Inf) == beta {
        out.push(ram_index(g, Point::Inf)?);
    }
    let mut h = fiber_poly(g, beta);
    let q4 = (t.q2() as u128) * (t.q2() as u128);
    // counts[j] = number of F_{q^4}-roots of multiplicity > j
    let mut counts = Vec::new();
    while h.deg().is_some_and(|d| d > 0) {
        let frob = Poly::x(t).pow_mod(q4, &h).sub(&Poly::x(t));
        let r = crate::poly::poly_gcd(&h, &frob).expect("h is nonzero");
        let d = r.deg().unwrap_or(0);
        if d == 0 {
            break;
        }
        counts.push(d);
        h = h.divrem(&r).0;
    }
    for j in 0..counts.len() {
        let exact = counts[j] - counts.get(j + 1).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(j + 1, exact));
    }
    out.sort_unstable();
    if out.iter().sum::<usize>() < g.degree() {
        return Err(GeometryError::PreimageOutsideWorkingField);
    }
    Ok(out)
}

/// Roots of a nonzero SCR-shaped polynomial of degree at most 2, as a set,
/// padded with infinity when the degree is 1.
pub fn scr_point_set<'a>(p: &Poly<'a>) -> Vec<Point<'a>> {
    let t = p.tower();
    let mut out: Vec<Point<'a>> = match p.deg() {
        Some(1) => vec![Point::Fin(t.zero()), Point::Inf],
        Some(2) => match quad_root_profile(p).expect("SCR shape").profile {
            RootProfile::MultipleInMu(r) => vec![Point::Fin(r)],
            RootProfile::TwoDistinctInMu(a, b) => vec![Point::Fin(a), Point::Fin(b)],
            RootProfile::NoneInMu(r) => r.into_iter().map(Point::Fin).collect(),
        },
        _ => Vec::new(),
    };
    out.sort();
    out.dedup();
    out
}

fn in_mu_point(p: Point<'_>) -> bool {
    p.fin().is_some_and(|x| x.in_mu())
}

/// Either every point lies in mu_{q+1}, or the set is {a, conj(a)^-1} with a outside mu.
fn mu_shape_ok(set: &[Point<'_>]) -> bool {
    if set.iter().all(|&p| in_mu_point(p)) {
        return true;
    }
    if set.len() != 2 || set.iter().any(|&p| in_mu_point(p)) {
        return false;
    }
    let (a, b) = (set[0], set[1]);
    match (a, b) {
        (Point::Fin(x), Point::Inf) | (Point::Inf, Point::Fin(x)) => x.is_zero(),
        (Point::Fin(x), Point::Fin(y)) => !x.is_zero() && x.bar().inv() == y,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaChecks {
    /// |Gamma| = |Lambda| in {1,2}, with size 1 exactly when theta1^2 = 0.
    pub cardinality: bool,
    /// Gamma and Lambda both inside mu, or both of the form {a, conj(a)^-1}.
    pub mu_shape: bool,
    /// Gamma is exactly the set of ramification points.
    pub complete: bool,
    /// Every branch point lies in Lambda.
    pub branch_in_lambda: bool,
    /// When C = 1: Lambda is the branch set and every fiber is [Q+1] or [1,Q].
    pub coprime_fibers: Option<bool>,
}

impl LemmaChecks {
    pub fn all(&self) -> bool {
        self.cardinality
            && self.mu_shape
            && self.complete
            && self.branch_in_lambda
            && self.coprime_fibers != Some(false)
    }
}

#[derive(Debug, Clone)]
pub struct BranchFiber<'a> {
    pub point: Point<'a>,
    pub multiset: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RamReport<'a> {
    pub gamma: Vec<Point<'a>>,
    pub lambda: Vec<Point<'a>>,
    pub sigma: Vec<Point<'a>>,
    pub ram_indices: Vec<(Point<'a>, usize)>,
    pub branch: Vec<BranchFiber<'a>>,
    pub hurwitz_lhs: usize,
    pub hurwitz_rhs: usize,
    pub tame: bool,
    pub checks: LemmaChecks,
}

pub fn ram_report<'a>(c: &CoeffVec<'a>) -> Result<RamReport<'a>, GeometryError> {
    let t = c.tower();
    let qd = build_quad(c);
    let inv = invariants(c);
    if inv.u.is_zero() && inv.v.is_zero() {
        return Err(if qd.g.is_constant() {
            GeometryError::ConstantG
        } else {
            GeometryError::BothUVZero
        });
    }
    if qd.g.is_constant() {
        return Err(GeometryError::ConstantG);
    }
    if inv.v.is_zero() {
        return Err(GeometryError::NonSeparable);
    }
    if inv.u.is_zero() || inv.w.is_zero() {
        return Err(GeometryError::DegenerateInvariants);
    }
    let g = &qd.g;
    let gamma = scr_point_set(&inv.v);
    let lambda = scr_point_set(&inv.w);
    let sigma = scr_point_set(&inv.u);

    // ramification points from the roots of A B' - A' B, plus infinity
    let wr =
        qd.a.mul(&qd.b.derivative())
            .sub(&qd.a.derivative().mul(&qd.b));
    let wr_roots = wr.roots_in_field();
    if wr_roots.len() != wr.deg().unwrap_or(0) {
        return Err(GeometryError::RamificationOutsideWorkingField);
    }
    let mut from_wronskian: Vec<Point<'a>> = wr_roots.into_iter().map(Point::Fin).collect();
    from_wronskian.dedup();
    let e_inf = ram_index(g, Point::Inf)?;
    if e_inf > 1 {
        from_wronskian.push(Point::Inf);
    }

    // ramification points by scanning P^1(F_{q^2})
    let mut ram_indices = Vec::new();
    for x in t.elements().map(Point::Fin).chain([Point::Inf]) {
        let e = ram_index(g, x)?;
        if e > 1 {
            ram_indices.push((x, e));
        }
    }
    let scanned: Vec<Point<'a>> = ram_indices.iter().map(|&(x, _)| x).collect();
    let complete = scanned == gamma && from_wronskian == gamma;

    let mut branch_points: Vec<Point<'a>> = scanned.iter().map(|&x| g.eval(x)).collect();
    branch_points.sort();
    branch_points.dedup();
    let branch_in_lambda = branch_points.iter().all(|b| lambda.contains(b));
    let mut branch = Vec::new();
    for &b in &branch_points {
        branch.push(BranchFiber {
            point: b,
            multiset: ram_multiset(g, b)?,
        });
    }

    let cardinality = gamma.len() == lambda.len()
        && (1..=2).contains(&gamma.len())
        && ((gamma.len() == 1) == inv.theta1_sq.is_zero());
    let mu_shape = mu_shape_ok(&gamma)
        && mu_shape_ok(&lambda)
        && (in_mu_point(gamma[0]) == in_mu_point(lambda[0]));

    let coprime_fibers = (qd.c_gcd.deg() == Some(0)).then(|| {
        let qq = t.big_q() as usize;
        branch_points == lambda
            && branch
                .iter()
                .all(|f| f.multiset == vec![qq + 1] || f.multiset == vec![1, qq])
    });

    let hurwitz_lhs = 2 * qd.deg_g - 2;
    let hurwitz_rhs = ram_indices.iter().map(|&(_, e)| e - 1).sum();
    let tame = ram_indices.iter().all(|&(_, e)| e % t.p() as usize != 0);

    Ok(RamReport {
        gamma,
        lambda,
        sigma,
        ram_indices,
        branch,
        hurwitz_lhs,
        hurwitz_rhs,
        tame,
        checks: LemmaChecks {
            cardinality,
            mu_shape,
            complete,
            branch_in_lambda,
            coprime_fibers,
        },
    })
}

impl RamReport<'_> {
    pub fn to_json(&self) -> Value {
        let pts = |v: &[Point<'_>]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        json!({
            "gamma": pts(&self.gamma),
            "lambda": pts(&self.lambda),
            "sigma": pts(&self.sigma),
            "ramification": self.ram_indices.iter().map(|(p, e)| json!({"point": p.to_string(), "e": e})).collect::<Vec<_>>(),
            "branch": self.branch.iter().map(|f| json!({"point": f.point.to_string(), "multiset": f.multiset})).collect::<Vec<_>>(),
            "hurwitz_lhs": self.hurwitz_lhs,
            "hurwitz_rhs": self.hurwitz_rhs,
            "tame": self.tame,
            "checks": {
                "cardinality": self.checks.cardinality,
                "mu_shape": self.checks.mu_shape,
                "complete": self.checks.complete,
                "branch_in_lambda": self.checks.branch_in_lambda,
                "coprime_fibers": self.checks.coprime_fibers,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hurwitz {
    pub lhs: usize,
    pub rhs: usize,
    pub tame: bool,
    pub holds: bool,
    /// Equality holds exactly when the ramification is tame.
    pub equality_iff_tame: bool,
}

/// Riemann-Hurwitz for a map P^1 -> P^1 whose ramification lies over F_{q^2}.
pub fn hurwitz_check(g: &RatFn<'_>) -> Result<Hurwitz, GeometryError> {
    if g.is_constant() {
        return Err(GeometryError::ConstantFunction);
    }
    let (n, d) = (g.num(), g.den());
    let wr = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
    if wr.is_zero() {
        return Err(GeometryError::NonSeparable);
    }
    let roots = wr.roots_in_field();
    if roots.len() != wr.deg().unwrap_or(0) {
        return Err(GeometryError::RamificationOutsideWorkingField);
    }
    let mut cands: Vec<Point<'_>> = roots.into_iter().map(Point::Fin).collect();
    cands.dedup();
    cands.push(Point::Inf);
    let p = g.tower().p() as usize;
    let mut rhs = 0;
    let mut tame = true;
    for x in cands {
        let e = ram_index(g, x)?;
        rhs += e - 1;
        if e > 1 && e % p == 0 {
            tame = false;
        }
    }
    let lhs = 2 * g.degree() - 2;
    Ok(Hurwitz {
        lhs,
        rhs,
        tame,
        holds: lhs >= rhs,
        equality_iff_tame: (lhs == rhs) == tame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Tower {
        Tower::new(3, 1, 1, None).unwrap()
    }

    fn mono(t: &Tower, n: usize) -> RatFn<'_> {
        RatFn::poly(Poly::monomial(t.one(), n))
    }

    #[test]
    fn ram_index_examples() {
        let t = f9();
        let x2 = mono(&t, 2);
        assert_eq!(ram_index(&x2, Point::Fin(t.zero())).unwrap(), 2);
        assert_eq!(ram_index(&x2, Point::Fin(t.one())).unwrap(), 1);
        assert_eq!(ram_index(&mono(&t, 4), Point::Inf).unwrap(), 4);
        let c = RatFn::poly(Poly::one(&t));
        assert_eq!(
            ram_index(&c, Point::Inf),
            Err(GeometryError::ConstantFunction)
        );
    }

    #[test]
    fn ram_multiset_examples() {
        let t = f9();
        let g = mono(&t, 4);
        assert_eq!(ram_multiset(&g, Point::Fin(t.zero())).unwrap(), vec![4]);
        assert_eq!(
            ram_multiset(&g, Point::Fin(t.one())).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert_eq!(ram_multiset(&g, Point::Inf).unwrap(), vec![4]);
    }

    #[test]
    fn ram_report_examples() {
        let t = f9();
        let (z, o) = (t.zero(), t.one());
        let zi = vec![Point::Fin(z), Point::Inf];
        let r = ram_report(&CoeffVec::new([z, z, z, o]).unwrap()).unwrap();
        assert_eq!(
            (r.gamma.clone(), r.lambda.clone()),
            (zi.clone(), zi.clone())
        );
        assert!(r.branch.iter().all(|f| f.multiset == vec![4]));
        assert!(r.checks.all());
        let r = ram_report(&CoeffVec::new([z, o, z, z]).unwrap()).unwrap();
        assert_eq!((r.gamma.clone(), r.lambda.clone()), (zi.clone(), zi));
        assert!(r.ram_indices.iter().all(|&(_, e)| e == 2));
        assert!(r.checks.all());
        assert_eq!(
            ram_report(&CoeffVec::new([o, z, z, o]).unwrap()).unwrap_err(),
            GeometryError::ConstantG
        );
    }

    #[test]
    fn hurwitz_examples() {
        let t = f9();
        let h = hurwitz_check(&mono(&t, 2)).unwrap();
        assert_eq!((h.lhs, h.rhs, h.tame, h.holds), (2, 2, true, true));
        let h = hurwitz_check(&mono(&t, 4)).unwrap();
        assert_eq!((h.lhs, h.rhs, h.tame), (6, 6, true));
        assert!(h.equality_iff_tame);
        assert_eq!(
            hurwitz_check(&mono(&t, 3)),
            Err(GeometryError::NonSeparable)
        );
    }
}
