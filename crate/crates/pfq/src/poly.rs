//! Polynomials and rational functions over F_{q^2}, plus the Möbius maps
//! that move mu_{q+1} around the projective line.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::field::{hilbert90, Elt, Tower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("both inputs are zero")]
    BothZero,
    #[error("polynomial does not have the expected shape")]
    ShapeViolation,
    #[error("degenerate parameters: alpha*conj(alpha) = beta*conj(beta)")]
    DegenerateParameters,
    #[error("gamma is not in mu_(q+1)")]
    GammaNotInMu,
    #[error("delta lies in F_q")]
    DeltaInBaseField,
    #[error("coefficients are not in F_q")]
    CoefficientsNotInBaseField,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("singular Möbius transformation")]
    Singular,
}

/// A point of P^1(F_{q^2}); `Inf` sorts after every finite point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point<'a> {
    Fin(Elt<'a>),
    Inf,
}

impl<'a> Point<'a> {
    pub fn fin(self) -> Option<Elt<'a>> {
        match self {
            Point::Fin(x) => Some(x),
            Point::Inf => None,
        }
    }
    pub fn is_inf(self) -> bool {
        matches!(self, Point::Inf)
    }
}

impl fmt::Display for Point<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Fin(x) => write!(f, "{x}"),
            Point::Inf => f.write_str("inf"),
        }
    }
}
impl fmt::Debug for Point<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense polynomial, lowest degree first, never with a trailing zero.
#[derive(Clone)]
pub struct Poly<'a> {
    t: &'a Tower,
    c: Vec<Elt<'a>>,
}

impl PartialEq for Poly<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for Poly<'_> {}

impl fmt::Debug for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coef = if c.is_one() && i > 0 {
                String::new()
            } else {
                format!("({c})")
            };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}X")?,
                _ => write!(f, "{coef}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Poly<'a> {
    pub fn new(t: &'a Tower, mut c: Vec<Elt<'a>>) -> Poly<'a> {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { t, c }
    }
    pub fn zero(t: &'a Tower) -> Poly<'a> {
        Poly { t, c: Vec::new() }
    }
    pub fn constant(x: Elt<'a>) -> Poly<'a> {
        Poly::new(x.tower(), vec![x])
    }
    pub fn one(t: &'a Tower) -> Poly<'a> {
        Poly::constant(t.one())
    }
    /// a * X^n.
    pub fn monomial(a: Elt<'a>, n: usize) -> Poly<'a> {
        let t = a.tower();
        let mut c = vec![t.zero(); n + 1];
        c[n] = a;
        Poly::new(t, c)
    }
    pub fn x(t: &'a Tower) -> Poly<'a> {
        Poly::monomial(t.one(), 1)
    }
    /// X - r.
    pub fn linear_root(r: Elt<'a>) -> Poly<'a> {
        Poly::new(r.tower(), vec![-r, r.tower().one()])
    }
    /// Builds from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms(t: &'a Tower, terms: &[(usize, Elt<'a>)]) -> Poly<'a> {
        let n = terms.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
        let mut c = vec![t.zero(); n];
        for &(e, a) in terms {
            c[e] += a;
        }
        Poly::new(t, c)
    }

    pub fn tower(&self) -> &'a Tower {
        self.t
    }
    pub fn coeffs(&self) -> &[Elt<'a>] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Elt<'a> {
        self.c.get(i).copied().unwrap_or(self.t.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> Elt<'a> {
        self.c.last().copied().unwrap_or(self.t.zero())
    }
    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval(&self, x: Elt<'a>) -> Elt<'a> {
        let t = self.t;
        let xv = x.index();
        let v = self
            .c
            .iter()
            .rev()
            .fold(0u32, |acc, c| t.add_raw(t.mul_raw(acc, xv), c.index()));
        t.elt(v)
    }

    pub fn scale(&self, a: Elt<'a>) -> Poly<'a> {
        Poly::new(self.t, self.c.iter().map(|&x| x * a).collect())
    }

    pub fn monic(&self) -> Poly<'a> {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.lead().inv())
    }

    /// Coefficient-wise Frobenius x -> x^q.
    pub fn conj(&self) -> Poly<'a> {
        Poly::new(self.t, self.c.iter().map(|x| x.bar()).collect())
    }

    /// P(X)^m for m a power of p: coefficients raised to m, X^i -> X^(i m).
    pub fn frob_expand(&self, m: u64) -> Poly<'a> {
        let Some(d) = self.deg() else {
            return self.clone();
        };
        let m = m as usize;
        let mut c = vec![self.t.zero(); d * m + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * m] = x.pow(m as u128);
        }
        Poly::new(self.t, c)
    }

    pub fn derivative(&self) -> Poly<'a> {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| self.t.from_int(i as i64) * x)
            .collect();
        Poly::new(self.t, c)
    }

    pub fn add(&self, o: &Poly<'a>) -> Poly<'a> {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.t, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly<'a>) -> Poly<'a> {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.t, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly<'a> {
        Poly::new(self.t, self.c.iter().map(|&x| -x).collect())
    }

    pub fn mul(&self, o: &Poly<'a>) -> Poly<'a> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.t);
        }
        let t = self.t;
        let mut out = vec![0u32; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = t.add_raw(out[i + j], t.mul_raw(a.index(), b.index()));
                }
            }
        }
        Poly::new(t, out.into_iter().map(|v| t.elt(v)).collect())
    }

    pub fn pow(&self, mut e: u64) -> Poly<'a> {
        let (mut base, mut acc) = (self.clone(), Poly::one(self.t));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly<'a>) -> (Poly<'a>, Poly<'a>) {
        let t = self.t;
        let dd = d.deg().expect("division by the zero polynomial");
        if self.c.len() <= dd {
            return (Poly::zero(t), self.clone());
        }
        let inv = d.lead().inv().index();
        let mut r: Vec<u32> = self.c.iter().map(|x| x.index()).collect();
        let mut quo = vec![0u32; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let f = t.mul_raw(r[top], inv);
            if f == 0 {
                continue;
            }
            quo[top - dd] = f;
            for (i, b) in d.c.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = t.sub_raw(r[idx], t.mul_raw(f, b.index()));
            }
        }
        r.truncate(dd);
        let q = Poly::new(t, quo.into_iter().map(|v| t.elt(v)).collect());
        (q, Poly::new(t, r.into_iter().map(|v| t.elt(v)).collect()))
    }

    pub fn rem(&self, d: &Poly<'a>) -> Poly<'a> {
        self.divrem(d).1
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u128, m: &Poly<'a>) -> Poly<'a> {
        let (mut base, mut acc) = (self.rem(m), Poly::one(self.t).rem(m));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Multiplicity of r as a root.
    pub fn root_multiplicity(&self, r: Elt<'a>) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_linear(r);
            m += 1;
        }
        m
    }

    /// Quotient by X - r, assuming r is a root.
    pub fn div_linear(&self, r: Elt<'a>) -> Poly<'a> {
        if self.c.len() <= 1 {
            return Poly::zero(self.t);
        }
        let mut q = vec![self.t.zero(); self.c.len() - 1];
        let mut acc = self.t.zero();
        for i in (1..self.c.len()).rev() {
            acc = acc * r + self.c[i];
            q[i - 1] = acc;
        }
        Poly::new(self.t, q)
    }

    /// All roots in F_{q^2} with multiplicity, by scanning the field.
    pub fn roots_in_field(&self) -> Vec<Elt<'a>> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        for x in self.t.elements() {
            if self.eval(x).is_zero() {
                out.extend(std::iter::repeat_n(x, self.root_multiplicity(x)));
            }
        }
        out
    }

    pub fn coeffs_in_fq(&self) -> bool {
        self.c.iter().all(|x| x.in_fq())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
}

/// D^(X) = X^deg D * D^(q)(1/X).
pub fn conj_reciprocal<'a>(d: &Poly<'a>) -> Result<Poly<'a>, PolyError> {
    if d.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(Poly::new(d.t, d.c.iter().rev().map(|x| x.bar()).collect()))
}

/// The alpha with D^ = alpha D when D is self-conjugate reciprocal.
pub fn scr_witness<'a>(d: &Poly<'a>) -> Result<Option<Elt<'a>>, PolyError> {
    let hat = conj_reciprocal(d)?;
    if d.coeff(0).is_zero() {
        return Ok(None);
    }
    let alpha = d.coeff(0).bar() / d.lead();
    Ok((hat == d.scale(alpha)).then_some(alpha))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootProfile<'a> {
    MultipleInMu(Elt<'a>),
    /// Sorted by index.
    TwoDistinctInMu(Elt<'a>, Elt<'a>),
    /// The roots, all outside mu_{q+1}; they always lie in F_{q^2}.
    NoneInMu(Vec<Elt<'a>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadProfile<'a> {
    pub profile: RootProfile<'a>,
    pub delta: Elt<'a>,
}

/// The discriminant beta^2 - 4 alpha conj(alpha) of alpha X^2 + beta X + conj(alpha).
pub fn scr_delta<'a>(d: &Poly<'a>) -> Result<Elt<'a>, PolyError> {
    let (gamma, beta, alpha) = (d.coeff(0), d.coeff(1), d.coeff(2));
    if d.deg().is_some_and(|n| n > 2) || !beta.in_fq() || gamma != alpha.bar() {
        return Err(PolyError::ShapeViolation);
    }
    let t = d.t;
    Ok(beta * beta - t.from_int(4) * alpha * gamma)
}

pub fn quad_root_profile<'a>(d: &Poly<'a>) -> Result<QuadProfile<'a>, PolyError> {
    if d.is_zero() {
        return Err(PolyError::BothZero);
    }
    let delta = scr_delta(d)?;
    let (beta, alpha) = (d.coeff(1), d.coeff(2));
    let t = d.t;
    if alpha.is_zero() {
        return Ok(QuadProfile {
            profile: RootProfile::NoneInMu(vec![t.zero()]),
            delta,
        });
    }
    let two_a = t.from_int(2) * alpha;
    let profile = if delta.is_zero() {
        let r = -beta / two_a;
        assert!(r.in_mu(), "double root of an SCR quadratic lies in mu");
        RootProfile::MultipleInMu(r)
    } else {
        let s = delta
            .sqrt()
            .expect("elements of F_q are squares in F_{q^2}");
        let (mut r1, mut r2) = ((-beta + s) / two_a, (-beta - s) / two_a);
        if r2 < r1 {
            std::mem::swap(&mut r1, &mut r2);
        }
        let square = delta.pow((t.q() as u128 - 1) / 2).is_one();
        if square {
            assert!(!r1.in_mu() && !r2.in_mu());
            RootProfile::NoneInMu(vec![r1, r2])
        } else {
            assert!(r1.in_mu() && r2.in_mu());
            RootProfile::TwoDistinctInMu(r1, r2)
        }
    };
    Ok(QuadProfile { profile, delta })
}

/// Monic gcd.
pub fn poly_gcd<'a>(a: &Poly<'a>, b: &Poly<'a>) -> Result<Poly<'a>, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Roots lying in mu_{q+1}, with multiplicity, in index order.
pub fn roots_in_mu<'a>(d: &Poly<'a>) -> Result<Vec<Elt<'a>>, PolyError> {
    if d.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for x in d.t.mu_elements() {
        let m = d.root_multiplicity(x);
        out.extend(std::iter::repeat_n(x, m));
    }
    Ok(out)
}

/// A reduced rational function with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn<'a> {
    num: Poly<'a>,
    den: Poly<'a>,
}

impl fmt::Debug for RatFn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<'a> RatFn<'a> {
    pub fn new(num: Poly<'a>, den: Poly<'a>) -> Result<RatFn<'a>, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let g = poly_gcd(&num, &den)?;
        let (mut n, mut d) = (num.divrem(&g).0, den.divrem(&g).0);
        let l = d.lead().inv();
        n = n.scale(l);
        d = d.scale(l);
        Ok(RatFn { num: n, den: d })
    }
    pub fn poly(p: Poly<'a>) -> RatFn<'a> {
        let t = p.t;
        RatFn {
            num: p,
            den: Poly::one(t),
        }
    }
    pub fn num(&self) -> &Poly<'a> {
        &self.num
    }
    pub fn den(&self) -> &Poly<'a> {
        &self.den
    }
    pub fn tower(&self) -> &'a Tower {
        self.num.t
    }
    pub fn degree(&self) -> usize {
        self.num.deg().unwrap_or(0).max(self.den.deg().unwrap_or(0))
    }
    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, x: Point<'a>) -> Point<'a> {
        match x {
            Point::Fin(x) => {
                let d = self.den.eval(x);
                if d.is_zero() {
                    Point::Inf
                } else {
                    Point::Fin(self.num.eval(x) / d)
                }
            }
            Point::Inf => {
                let (dn, dd) = (self.num.deg(), self.den.deg().unwrap_or(0));
                match dn {
                    None => Point::Fin(self.tower().zero()),
                    Some(n) if n > dd => Point::Inf,
                    Some(n) if n == dd => Point::Fin(self.num.lead() / self.den.lead()),
                    _ => Point::Fin(self.tower().zero()),
                }
            }
        }
    }

    /// m o self.
    pub fn compose_left(&self, m: &Mobius<'a>) -> RatFn<'a> {
        let n = self.num.scale(m.a).add(&self.den.scale(m.b));
        let d = self.num.scale(m.c).add(&self.den.scale(m.d));
        RatFn::new(n, d).expect("invertible map keeps the denominator nonzero")
    }

    /// self o m, by homogeneous substitution.
    pub fn compose_right(&self, m: &Mobius<'a>) -> RatFn<'a> {
        let t = self.tower();
        let n = self.degree();
        let l = Poly::new(t, vec![m.b, m.a]);
        let r = Poly::new(t, vec![m.d, m.c]);
        let mut rpow = vec![Poly::one(t)];
        for i in 1..=n {
            rpow.push(rpow[i - 1].mul(&r));
        }
        let subst = |p: &Poly<'a>| {
            let mut acc = Poly::zero(t);
            for i in (0..=n).rev() {
                acc = acc.mul(&l).add(&rpow[n - i].scale(p.coeff(i)));
            }
            acc
        };
        RatFn::new(subst(&self.num), subst(&self.den))
            .expect("invertible map keeps the denominator nonzero")
    }

    pub fn coeffs_in_fq(&self) -> bool {
        self.num.coeffs_in_fq() && self.den.coeffs_in_fq()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusKind {
    PermutesMu,
    MuToP1,
    General,
}

/// (aX + b) / (cX + d) with ad - bc != 0.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Mobius<'a> {
    pub a: Elt<'a>,
    pub b: Elt<'a>,
    pub c: Elt<'a>,
    pub d: Elt<'a>,
    pub kind: MobiusKind,
}

impl fmt::Debug for Mobius<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({})X + ({})) / (({})X + ({})) [{:?}]",
            self.a, self.b, self.c, self.d, self.kind
        )
    }
}

impl<'a> Mobius<'a> {
    /// Builds the map and tags it after checking its action on mu_{q+1}.
    pub fn new(a: Elt<'a>, b: Elt<'a>, c: Elt<'a>, d: Elt<'a>) -> Result<Mobius<'a>, PolyError> {
        if (a * d - b * c).is_zero() {
            return Err(PolyError::Singular);
        }
        let mut m = Mobius {
            a,
            b,
            c,
            d,
            kind: MobiusKind::General,
        };
        m.kind = m.detect_kind();
        Ok(m)
    }

    pub fn identity(t: &'a Tower) -> Mobius<'a> {
        Mobius::new(t.one(), t.zero(), t.zero(), t.one()).unwrap()
    }

    fn detect_kind(&self) -> MobiusKind {
        let t = self.a.tower();
        let mu = t.mu_elements();
        let imgs: Vec<Point<'a>> = mu.iter().map(|&x| self.eval(Point::Fin(x))).collect();
        // injective already, so landing in the target set of size q+1 is bijective
        if imgs.iter().all(|p| p.fin().is_some_and(|y| y.in_mu())) {
            MobiusKind::PermutesMu
        } else if imgs.iter().all(|p| p.fin().is_none_or(|y| y.in_fq())) {
            MobiusKind::MuToP1
        } else {
            MobiusKind::General
        }
    }

    pub fn eval(&self, x: Point<'a>) -> Point<'a> {
        match x {
            Point::Fin(x) => {
                let den = self.c * x + self.d;
                if den.is_zero() {
                    Point::Inf
                } else {
                    Point::Fin((self.a * x + self.b) / den)
                }
            }
            Point::Inf => {
                if self.c.is_zero() {
                    Point::Inf
                } else {
                    Point::Fin(self.a / self.c)
                }
            }
        }
    }

    /// self o o.
    pub fn compose(&self, o: &Mobius<'a>) -> Mobius<'a> {
        Mobius::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
        .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Mobius<'a> {
        Mobius::new(self.d, -self.b, -self.c, self.a).expect("inverse of invertible map")
    }

    /// Multiplies the whole map by a nonzero constant on the left: s * m(X).
    pub fn scaled(&self, s: Elt<'a>) -> Mobius<'a> {
        Mobius::new(s * self.a, s * self.b, self.c, self.d).expect("nonzero scale")
    }

    pub fn as_ratfn(&self) -> RatFn<'a> {
        let t = self.a.tower();
        RatFn::new(
            Poly::new(t, vec![self.b, self.a]),
            Poly::new(t, vec![self.d, self.c]),
        )
        .unwrap()
    }

    /// True when both maps agree on every point of P^1(F_{q^2}).
    pub fn same_map(&self, o: &Mobius<'a>) -> bool {
        (self.a * o.b - self.b * o.a).is_zero()
            && (self.a * o.c - self.c * o.a).is_zero()
            && (self.a * o.d - self.d * o.a).is_zero()
            && (self.b * o.c - self.c * o.b).is_zero()
            && (self.b * o.d - self.d * o.b).is_zero()
            && (self.c * o.d - self.d * o.c).is_zero()
    }
}

/// (conj(beta) X + conj(alpha)) / (alpha X + beta), which permutes mu_{q+1}.
pub fn mobius_permuting_mu<'a>(alpha: Elt<'a>, beta: Elt<'a>) -> Result<Mobius<'a>, PolyError> {
    if alpha * alpha.bar() == beta * beta.bar() {
        return Err(PolyError::DegenerateParameters);
    }
    let m = Mobius::new(beta.bar(), alpha.bar(), alpha, beta)?;
    assert_eq!(m.kind, MobiusKind::PermutesMu);
    Ok(m)
}

/// (delta X + gamma conj(delta)) / (X + gamma), which maps mu_{q+1} onto P^1(F_q).
pub fn mobius_mu_to_p1<'a>(gamma: Elt<'a>, delta: Elt<'a>) -> Result<Mobius<'a>, PolyError> {
    if !gamma.in_mu() {
        return Err(PolyError::GammaNotInMu);
    }
    if delta.in_fq() {
        return Err(PolyError::DeltaInBaseField);
    }
    let t = gamma.tower();
    let m = Mobius::new(delta, gamma * delta.bar(), t.one(), gamma)?;
    assert_eq!(m.kind, MobiusKind::MuToP1);
    Ok(m)
}

/// A map from mu_{q+1} onto P^1(F_q) sending a to infinity and b to 0.
pub fn mu_to_p1_sending<'a>(a: Elt<'a>, b: Elt<'a>) -> Result<Mobius<'a>, PolyError> {
    if !a.in_mu() || !b.in_mu() {
        return Err(PolyError::GammaNotInMu);
    }
    if a == b {
        return Err(PolyError::DegenerateParameters);
    }
    let kappa = hilbert90(b / a).expect("b/a lies in mu");
    let t = a.tower();
    let m = Mobius::new(kappa, -kappa * b, t.one(), -a)?;
    assert_eq!(m.kind, MobiusKind::MuToP1);
    Ok(m)
}

/// A permutation of mu_{q+1} sending beta to infinity and conj(beta)^-1 to 0;
/// the identity when beta is infinity.
pub fn perm_mu_sending<'a>(t: &'a Tower, beta: Point<'a>) -> Result<Mobius<'a>, PolyError> {
    match beta {
        Point::Inf => Ok(Mobius::identity(t)),
        Point::Fin(b) => {
            let m = Mobius::new(-b.bar(), t.one(), t.one(), -b)?;
            if m.kind != MobiusKind::PermutesMu {
                return Err(PolyError::DegenerateParameters);
            }
            Ok(m)
        }
    }
}

/// h = rho o g o sigma^-1 for g mapping mu_{q+1} into mu_{q+1} u {0, inf}, with
/// the coefficients of h checked to lie in F_q.
pub fn conjugate_to_base<'a>(
    g: &RatFn<'a>,
    rho: &Mobius<'a>,
    sigma: &Mobius<'a>,
) -> Result<RatFn<'a>, PolyError> {
    if rho.kind != MobiusKind::MuToP1 || sigma.kind != MobiusKind::MuToP1 {
        return Err(PolyError::ShapeViolation);
    }
    let t = g.tower();
    let shape_ok = t
        .mu_elements()
        .into_iter()
        .all(|x| match g.eval(Point::Fin(x)) {
            Point::Inf => true,
            Point::Fin(y) => y.is_zero() || y.in_mu(),
        });
    if !shape_ok {
        return Err(PolyError::ShapeViolation);
    }
    let h = g.compose_right(&sigma.inverse()).compose_left(rho);
    if !h.coeffs_in_fq() {
        return Err(PolyError::CoefficientsNotInBaseField);
    }
    Ok(h)
}

impl PartialOrd for Poly<'_> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Poly<'_> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&o.c.len())
            .then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Tower {
        Tower::new(3, 1, 1, None).unwrap()
    }

    fn imag(t: &Tower) -> Elt<'_> {
        t.elements()
            .find(|x| *x * *x == -t.one() && !x.in_fq())
            .unwrap()
    }

    fn p<'a>(t: &'a Tower, c: &[Elt<'a>]) -> Poly<'a> {
        Poly::new(t, c.to_vec())
    }

    #[test]
    fn conj_reciprocal_examples() {
        let t = f9();
        let (o, z, i) = (t.one(), t.zero(), imag(&t));
        let d = p(&t, &[o, z, o]);
        assert_eq!(conj_reciprocal(&d).unwrap(), d);
        assert_eq!(conj_reciprocal(&Poly::x(&t)).unwrap(), Poly::one(&t));
        let d = p(&t, &[-i, o, i]);
        // reversing (-i, 1, i) and conjugating each entry: (-i, 1, i) again
        assert_eq!(conj_reciprocal(&d).unwrap(), d);
        assert_eq!(
            conj_reciprocal(&Poly::zero(&t)),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn scr_examples() {
        let t = f9();
        let (o, i) = (t.one(), imag(&t));
        assert_eq!(scr_witness(&p(&t, &[-i, o, i])).unwrap(), Some(o));
        assert_eq!(scr_witness(&Poly::x(&t)).unwrap(), None);
        assert_eq!(scr_witness(&p(&t, &[o, o, o])).unwrap(), Some(o));
    }

    #[test]
    fn quad_profile_examples() {
        let t = f9();
        let (o, z, i) = (t.one(), t.zero(), imag(&t));
        let pr = quad_root_profile(&p(&t, &[-i, o, i])).unwrap();
        assert_eq!(pr.delta, z);
        assert_eq!(pr.profile, RootProfile::MultipleInMu(-i));
        let pr = quad_root_profile(&p(&t, &[o, z, o])).unwrap();
        assert_eq!(pr.delta, t.from_int(2));
        let (a, b) = if i < -i { (i, -i) } else { (-i, i) };
        assert_eq!(pr.profile, RootProfile::TwoDistinctInMu(a, b));
        let w = o + i;
        let pr = quad_root_profile(&p(&t, &[w.bar(), z, w])).unwrap();
        assert_eq!(pr.delta, o);
        match pr.profile {
            RootProfile::NoneInMu(r) => {
                for x in r {
                    assert_eq!(x * x, i);
                    assert_eq!(x.pow(4), -o);
                }
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            quad_root_profile(&p(&t, &[o, i, o])),
            Err(PolyError::ShapeViolation)
        );
        assert_eq!(quad_root_profile(&Poly::zero(&t)), Err(PolyError::BothZero));
    }

    #[test]
    fn gcd_examples() {
        let t = f9();
        let (o, i) = (t.one(), imag(&t));
        let x2m1 = p(&t, &[-o, t.zero(), o]);
        assert_eq!(
            poly_gcd(&x2m1, &Poly::linear_root(o)).unwrap(),
            Poly::linear_root(o)
        );
        let t27 = Tower::new(3, 3, 2, None).unwrap();
        let xq = Poly::monomial(t27.one(), t27.big_q() as usize);
        assert_eq!(poly_gcd(&xq, &Poly::x(&t27)).unwrap(), Poly::x(&t27));
        let a = Poly::linear_root(i).mul(&Poly::linear_root(o));
        let b = Poly::linear_root(i).mul(&Poly::linear_root(-o));
        assert_eq!(poly_gcd(&a, &b).unwrap(), Poly::linear_root(i));
        assert_eq!(
            poly_gcd(&Poly::zero(&t), &Poly::zero(&t)),
            Err(PolyError::BothZero)
        );
    }

    #[test]
    fn mu_root_examples() {
        let t = f9();
        let (o, z, i) = (t.one(), t.zero(), imag(&t));
        let mut want = vec![i, -i];
        want.sort();
        assert_eq!(roots_in_mu(&p(&t, &[o, z, o])).unwrap(), want);
        assert!(roots_in_mu(&Poly::linear_root(o + i)).unwrap().is_empty());
        assert!(roots_in_mu(&Poly::monomial(o, 2)).unwrap().is_empty());
    }

    #[test]
    fn mobius_examples() {
        let t = f9();
        let (o, z, i) = (t.one(), t.zero(), imag(&t));
        let id = mobius_permuting_mu(z, o).unwrap();
        assert!(id.same_map(&Mobius::identity(&t)));
        let inv = mobius_permuting_mu(o, z).unwrap();
        for x in t.mu_elements() {
            assert_eq!(inv.eval(Point::Fin(x)), Point::Fin(x.inv()));
        }
        assert_eq!(
            mobius_permuting_mu(o, o).unwrap_err(),
            PolyError::DegenerateParameters
        );

        let m = mobius_mu_to_p1(o, i).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (i, -i, o, o));
        let mut imgs: Vec<Point> = t
            .mu_elements()
            .iter()
            .map(|&x| m.eval(Point::Fin(x)))
            .collect();
        imgs.sort();
        let mut p1: Vec<Point> = t.fq_elements().map(Point::Fin).collect();
        p1.push(Point::Inf);
        assert_eq!(imgs, p1);
        assert_eq!(
            mobius_mu_to_p1(o, o).unwrap_err(),
            PolyError::DeltaInBaseField
        );
        assert_eq!(
            mobius_mu_to_p1(o + i, i).unwrap_err(),
            PolyError::GammaNotInMu
        );
    }

    #[test]
    fn helper_maps_send_points() {
        let t = Tower::new(5, 1, 1, None).unwrap();
        let mu = t.mu_elements();
        let m = mu_to_p1_sending(mu[1], mu[4]).unwrap();
        assert_eq!(m.eval(Point::Fin(mu[1])), Point::Inf);
        assert_eq!(m.eval(Point::Fin(mu[4])), Point::Fin(t.zero()));
        let b = t
            .elements()
            .find(|x| !x.is_zero() && !x.in_mu() && !x.in_fq())
            .unwrap();
        let s = perm_mu_sending(&t, Point::Fin(b)).unwrap();
        assert_eq!(s.eval(Point::Fin(b)), Point::Inf);
        assert_eq!(s.eval(Point::Fin(b.bar().inv())), Point::Fin(t.zero()));
    }

    #[test]
    fn conjugate_to_base_examples() {
        let t = f9();
        let (o, i) = (t.one(), imag(&t));
        let m = mobius_mu_to_p1(o, i).unwrap();
        let h = conjugate_to_base(&RatFn::poly(Poly::x(&t)), &m, &m).unwrap();
        assert_eq!(h.degree(), 1);
        let g = RatFn::poly(Poly::monomial(o, 4));
        let h = conjugate_to_base(&g, &m, &m).unwrap();
        assert_eq!(h.degree(), 4);
        assert!(h.coeffs_in_fq());
        let perm = mobius_permuting_mu(t.zero(), o).unwrap();
        assert_eq!(
            conjugate_to_base(&g, &m, &perm),
            Err(PolyError::ShapeViolation)
        );
    }

    #[test]
    fn composition_matches_pointwise() {
        let t = Tower::new(5, 1, 1, None).unwrap();
        let g = RatFn::new(
            Poly::new(&t, vec![t.elt(3), t.elt(7), t.zero(), t.elt(1)]),
            Poly::new(&t, vec![t.elt(2), t.elt(11)]),
        )
        .unwrap();
        let m = Mobius::new(t.elt(4), t.elt(9), t.elt(13), t.elt(2)).unwrap();
        let right = g.compose_right(&m);
        let left = g.compose_left(&m);
        let mut pts: Vec<Point> = t.elements().map(Point::Fin).collect();
        pts.push(Point::Inf);
        for x in pts {
            assert_eq!(right.eval(x), g.eval(m.eval(x)));
            assert_eq!(left.eval(x), m.eval(g.eval(x)));
        }
    }
}
