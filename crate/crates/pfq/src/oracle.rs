//! Brute-force planarity and two-to-one tests, constructors for the named
//! families, and the linear maps X -> sX + tX^q acting on quadrinomials.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Elt, Tower};
use crate::quad::CoeffVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("epsilon violates the constraint of {0}")]
    EpsilonConstraintViolated(CanonicalTag),
    #[error("{0} needs an epsilon")]
    MissingEpsilon(CanonicalTag),
    #[error("zeta lies in F_q")]
    ZetaInBaseField,
    #[error("linear map is not bijective")]
    SingularLinearMap,
    #[error("composition disagrees with pointwise evaluation")]
    CompositionMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableKind {
    Univariate,
    Biprojective,
}

/// Values of a map on q^2 points.  Univariate tables are indexed by element
/// index; biprojective tables by x + q*y for (x, y) in F_q^2, with values
/// encoded the same way.  Since F_q^2 pairs add componentwise, both kinds
/// share the additive structure of the index encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnTable {
    pub kind: TableKind,
    pub vals: Vec<u32>,
}

impl FnTable {
    pub fn univariate(vals: Vec<u32>) -> FnTable {
        FnTable {
            kind: TableKind::Univariate,
            vals,
        }
    }
    pub fn of_coeffs(c: &CoeffVec<'_>) -> FnTable {
        FnTable::univariate(c.values())
    }
    pub fn len(&self) -> usize {
        self.vals.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub a: u32,
    pub b: u32,
    pub x1: u32,
    pub x2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteResult {
    pub planar: bool,
    pub witness: Option<Collision>,
}

/// Finds x1 != x2 with F(x1 + a) - F(x1) = F(x2 + a) - F(x2), if any.
fn direction_collision(t: &Tower, f: &[u32], a: u32) -> Option<Collision> {
    let n = f.len();
    let mut seen = vec![u32::MAX; n];
    for x in 0..n as u32 {
        let d = t.sub_raw(f[t.add_raw(x, a) as usize], f[x as usize]);
        let prev = seen[d as usize];
        if prev != u32::MAX {
            return Some(Collision {
                a,
                b: d,
                x1: prev,
                x2: x,
            });
        }
        seen[d as usize] = x;
    }
    None
}

pub fn is_planar_bruteforce(t: &Tower, f: &FnTable) -> BruteResult {
    assert_eq!(f.len(), t.q2() as usize);
    let witness = (1..t.q2())
        .into_par_iter()
        .find_map_first(|a| direction_collision(t, &f.vals, a));
    BruteResult {
        planar: witness.is_none(),
        witness,
    }
}

/// Re-checks a non-planarity witness.
pub fn witness_holds(t: &Tower, f: &FnTable, w: &Collision) -> bool {
    let d = |x: u32| t.sub_raw(f.vals[t.add_raw(x, w.a) as usize], f.vals[x as usize]);
    w.a != 0 && w.x1 != w.x2 && d(w.x1) == w.b && d(w.x2) == w.b
}

fn fiber_sizes(f: &FnTable) -> Vec<u32> {
    let mut sizes = vec![0u32; f.len()];
    for &v in &f.vals {
        sizes[v as usize] += 1;
    }
    sizes
}

pub fn is_two_to_one(f: &FnTable) -> bool {
    let sizes = fiber_sizes(f);
    let singles = sizes.iter().filter(|&&s| s == 1).count();
    let others_ok = sizes.iter().all(|&s| s == 0 || s == 1 || s == 2);
    let want_singles = if f.len() % 2 == 1 { 1 } else { 0 };
    others_ok && singles == want_singles
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DoEquivalence {
    pub planar: bool,
    pub two_to_one_with_zero_kernel: bool,
    pub agree: bool,
}

pub fn do_planarity_equivalence(t: &Tower, f: &FnTable) -> DoEquivalence {
    let planar = is_planar_bruteforce(t, f).planar;
    let zero_kernel = f.vals[0] == 0 && f.vals.iter().filter(|&&v| v == 0).count() == 1;
    let two = is_two_to_one(f) && zero_kernel;
    DoEquivalence {
        planar,
        two_to_one_with_zero_kernel: two,
        agree: planar == two,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CanonicalTag {
    P0,
    F0,
    F1,
    P1,
    P2,
    P3,
    F2,
    X2,
}

impl CanonicalTag {
    pub const ALL: [CanonicalTag; 8] = [
        CanonicalTag::P0,
        CanonicalTag::F0,
        CanonicalTag::F1,
        CanonicalTag::P1,
        CanonicalTag::P2,
        CanonicalTag::P3,
        CanonicalTag::F2,
        CanonicalTag::X2,
    ];

    pub fn needs_epsilon(self) -> bool {
        matches!(self, CanonicalTag::P2 | CanonicalTag::P3 | CanonicalTag::F2)
    }

    pub fn is_biprojective(self) -> bool {
        matches!(
            self,
            CanonicalTag::P0 | CanonicalTag::P1 | CanonicalTag::P2 | CanonicalTag::P3
        )
    }
}

impl fmt::Display for CanonicalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for CanonicalTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        CanonicalTag::ALL
            .into_iter()
            .find(|t| t.to_string() == up)
            .ok_or_else(|| format!("unknown family tag `{s}`"))
    }
}

/// Checks the epsilon constraint of a tagged family.
pub fn check_epsilon(tag: CanonicalTag, eps: Option<Elt<'_>>) -> Result<(), OracleError> {
    if !tag.needs_epsilon() {
        return Ok(());
    }
    let e = eps.ok_or(OracleError::MissingEpsilon(tag))?;
    let t = e.tower();
    let ok = match tag {
        CanonicalTag::P2 => e.in_fq() && !e.is_zero(),
        CanonicalTag::P3 => e.in_fq() && !e.is_zero() && e != -t.one(),
        CanonicalTag::F2 => !e.is_zero() && !e.in_mu(),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(OracleError::EpsilonConstraintViolated(tag))
    }
}

/// Coefficients (n, d) of a biprojective form: the two components are
/// n0 x^(Q+1) + n1 x^Q y + n2 x y^Q + n3 y^(Q+1) and the same with d.
pub fn biprojective_coeffs<'a>(
    tag: CanonicalTag,
    eps: Option<Elt<'a>>,
    t: &'a Tower,
) -> Result<([Elt<'a>; 4], [Elt<'a>; 4]), OracleError> {
    check_epsilon(tag, eps)?;
    let (z, o) = (t.zero(), t.one());
    Ok(match tag {
        CanonicalTag::P0 => ([o, z, z, z], [z, z, z, o]),
        CanonicalTag::P1 => ([o, z, z, z], [z, z, o, o]),
        CanonicalTag::P2 => ([z, o, z, z], [o, z, z, eps.unwrap()]),
        CanonicalTag::P3 => ([o, -o, z, z], [z, z, o, eps.unwrap()]),
        _ => panic!("{tag} is not biprojective"),
    })
}

/// Table of a general biprojective map with F_q coefficients.
pub fn biprojective_table(t: &Tower, n: [Elt<'_>; 4], d: [Elt<'_>; 4]) -> FnTable {
    let q = t.q();
    let bq = t.big_q() as u128;
    let mut vals = Vec::with_capacity(t.q2() as usize);
    for y in 0..q {
        for x in 0..q {
            let (xe, ye) = (t.elt(x), t.elt(y));
            let (xq, yq) = (xe.pow(bq), ye.pow(bq));
            let m = [xq * xe, xq * ye, xe * yq, yq * ye];
            let comp = |c: &[Elt<'_>; 4]| (0..4).fold(t.zero(), |acc, i| acc + c[i] * m[i]).index();
            vals.push(comp(&n) + q * comp(&d));
        }
    }
    FnTable {
        kind: TableKind::Biprojective,
        vals,
    }
}

/// A canonical coefficient vector for the univariate families.
pub fn canonical_coeffs<'a>(
    tag: CanonicalTag,
    eps: Option<Elt<'a>>,
    t: &'a Tower,
) -> Result<CoeffVec<'a>, OracleError> {
    check_epsilon(tag, eps)?;
    let (z, o) = (t.zero(), t.one());
    let c = match tag {
        CanonicalTag::F0 => [z, z, z, o],
        CanonicalTag::F1 => [z, z, o, z],
        CanonicalTag::F2 => [z, z, o, eps.unwrap()],
        CanonicalTag::X2 => panic!("X^2 is not a quadrinomial in general"),
        _ => {
            let (n, d) = biprojective_coeffs(tag, eps, t)?;
            return embed_biprojective_coeffs(n, d, t.u());
        }
    };
    Ok(CoeffVec::new(c).expect("nonzero"))
}

pub fn make_family(
    tag: CanonicalTag,
    eps: Option<Elt<'_>>,
    t: &Tower,
) -> Result<FnTable, OracleError> {
    check_epsilon(tag, eps)?;
    if tag.is_biprojective() {
        let (n, d) = biprojective_coeffs(tag, eps, t)?;
        return Ok(biprojective_table(t, n, d));
    }
    if tag == CanonicalTag::X2 {
        return Ok(FnTable::univariate(
            (0..t.q2()).map(|x| t.mul_raw(x, x)).collect(),
        ));
    }
    Ok(FnTable::of_coeffs(&canonical_coeffs(tag, eps, t)?))
}

/// The univariate map X -> iota(P(iota^-1 X)) for iota(x, y) = x + zeta*y.
pub fn embed_biprojective(p: &FnTable, zeta: Elt<'_>) -> Result<FnTable, OracleError> {
    if zeta.in_fq() {
        return Err(OracleError::ZetaInBaseField);
    }
    let t = zeta.tower();
    let q = t.q();
    let iota = |v: u32| (t.elt(v % q) + zeta * t.elt(v / q)).index();
    let mut vals = vec![0u32; p.len()];
    for (xy, &v) in p.vals.iter().enumerate() {
        vals[iota(xy as u32) as usize] = iota(v);
    }
    Ok(FnTable::univariate(vals))
}

/// X -> sX + tX^q.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct LinMap<'a> {
    pub s: Elt<'a>,
    pub t: Elt<'a>,
}

impl fmt::Debug for LinMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})X + ({})X^q", self.s, self.t)
    }
}

impl<'a> LinMap<'a> {
    pub fn new(s: Elt<'a>, t: Elt<'a>) -> LinMap<'a> {
        LinMap { s, t }
    }
    pub fn identity(t: &'a Tower) -> LinMap<'a> {
        LinMap {
            s: t.one(),
            t: t.zero(),
        }
    }
    pub fn eval(&self, x: Elt<'a>) -> Elt<'a> {
        self.s * x + self.t * x.bar()
    }
    pub fn is_bijective(&self) -> bool {
        self.s * self.s.bar() != self.t * self.t.bar()
    }
    /// x -> conj(self(x)).
    pub fn conj(&self) -> LinMap<'a> {
        LinMap {
            s: self.t.bar(),
            t: self.s.bar(),
        }
    }
    /// self o o.
    pub fn compose(&self, o: &LinMap<'a>) -> LinMap<'a> {
        LinMap {
            s: self.s * o.s + self.t * o.t.bar(),
            t: self.s * o.t + self.t * o.s.bar(),
        }
    }
    pub fn to_strings(&self) -> [String; 2] {
        [self.s.to_string(), self.t.to_string()]
    }
}

/// Coefficient vector of L^Q * M.
pub fn dyad<'a>(l: &LinMap<'a>, m: &LinMap<'a>) -> [Elt<'a>; 4] {
    let bq = l.s.tower().big_q() as u128;
    let (sq, tq) = (l.s.pow(bq), l.t.pow(bq));
    [tq * m.t, tq * m.s, sq * m.t, sq * m.s]
}

fn add4<'a>(a: [Elt<'a>; 4], b: [Elt<'a>; 4]) -> [Elt<'a>; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale4<'a>(k: Elt<'a>, a: [Elt<'a>; 4]) -> [Elt<'a>; 4] {
    a.map(|x| k * x)
}

/// Coefficients of conj(f_c(X)) as a quadrinomial.
pub fn conj_coeffs<'a>(c: [Elt<'a>; 4]) -> [Elt<'a>; 4] {
    [c[3].bar(), c[2].bar(), c[1].bar(), c[0].bar()]
}

/// The coordinate maps x, y of X = x + zeta*y, as linear maps of X.
pub fn coordinate_maps(zeta: Elt<'_>) -> (LinMap<'_>, LinMap<'_>) {
    let d = (zeta - zeta.bar()).inv();
    (LinMap::new(-zeta.bar() * d, zeta * d), LinMap::new(d, -d))
}

/// The quadrinomial induced by a biprojective form through X = x + zeta*y.
pub fn embed_biprojective_coeffs<'a>(
    n: [Elt<'a>; 4],
    d: [Elt<'a>; 4],
    zeta: Elt<'a>,
) -> Result<CoeffVec<'a>, OracleError> {
    if zeta.in_fq() {
        return Err(OracleError::ZetaInBaseField);
    }
    let t = zeta.tower();
    let (x, y) = coordinate_maps(zeta);
    let monos = [dyad(&x, &x), dyad(&x, &y), dyad(&y, &x), dyad(&y, &y)];
    let mut c = [t.zero(); 4];
    for j in 0..4 {
        c = add4(c, scale4(n[j] + zeta * d[j], monos[j]));
    }
    Ok(CoeffVec::new(c).expect("biprojective forms here are nonzero"))
}

/// c' with f_c' = l1 o f_c o l2, checked pointwise.
pub fn compose_linear<'a>(
    c: &CoeffVec<'a>,
    l1: &LinMap<'a>,
    l2: &LinMap<'a>,
) -> Result<CoeffVec<'a>, OracleError> {
    if !l1.is_bijective() || !l2.is_bijective() {
        return Err(OracleError::SingularLinearMap);
    }
    let t = c.tower();
    let l2b = l2.conj();
    let [c0, c1, c2, c3] = c.c;
    let mut inner = [t.zero(); 4];
    inner = add4(inner, scale4(c3, dyad(l2, l2)));
    inner = add4(inner, scale4(c2, dyad(l2, &l2b)));
    inner = add4(inner, scale4(c1, dyad(&l2b, l2)));
    inner = add4(inner, scale4(c0, dyad(&l2b, &l2b)));
    let out = add4(scale4(l1.s, inner), scale4(l1.t, conj_coeffs(inner)));
    let res = CoeffVec::new(out).expect("bijections keep f nonzero");
    let (fv, rv) = (c.values(), res.values());
    let ok = t.elements().all(|x| {
        let inner = t.elt(fv[l2.eval(x).index() as usize]);
        l1.eval(inner).index() == rv[x.index() as usize]
    });
    if !ok {
        return Err(OracleError::CompositionMismatch);
    }
    Ok(res)
}
