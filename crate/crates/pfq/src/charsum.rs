//! Multiplicative characters of F_q^*, character sums of rational functions
//! over P^1(F_q), and the two sum-positivity non-planarity certificates.

use serde::Serialize;
use thiserror::Error;

use crate::field::{Elt, Tower};
use crate::poly::{Point, Poly, RatFn};

/// Slack for the final floating point comparisons.
pub const MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharsumError {
    #[error("zero function")]
    ZeroFunction,
    #[error("function is a d-th power up to a constant; the bound does not apply")]
    IsDthPower,
    #[error("function has coefficients outside F_q")]
    NotOverBaseField,
    #[error("zeros or poles outside F_{{q^2}}")]
    UnsupportedFactorization,
    #[error("character order {0} does not divide q - 1 or is 1")]
    BadOrder(u64),
    #[error("k divides ell")]
    KDividesL,
    #[error("k / gcd(k, ell) is even")]
    KOverDeltaEven,
    #[error("k*ell / gcd(k, ell)^2 is even; apply the ell -> k + ell reduction first")]
    KEllOverDeltaSqEven,
    #[error("epsilon violates its constraint")]
    EpsilonConstraintViolated,
    #[error("epsilon lies in mu_(q+1) or is zero")]
    EpsilonInMu,
    #[error("xi lies in F_q")]
    XiInBaseField,
    #[error("epsilon is -1")]
    EpsilonIsMinusOne,
    #[error("t is outside F_q minus {{0, 1, -1/epsilon}}")]
    TOutOfRange,
    #[error("direction is zero")]
    ZeroDirection,
}

/// A character of F_q^* of order dividing `order`, raised to `power`:
/// chi(g^((q+1) j)) = zeta_order^(power * j) for the tower generator g.
#[derive(Debug, Clone, Copy)]
pub struct MultChar<'a> {
    t: &'a Tower,
    order: u64,
    power: u64,
}

impl<'a> MultChar<'a> {
    pub fn new(t: &'a Tower, order: u64) -> Result<MultChar<'a>, CharsumError> {
        if order < 2 || !(t.q() as u64 - 1).is_multiple_of(order) {
            return Err(CharsumError::BadOrder(order));
        }
        Ok(MultChar { t, order, power: 1 })
    }

    /// chi^i.
    pub fn pow(&self, i: u64) -> MultChar<'a> {
        MultChar {
            power: (self.power * i) % self.order,
            ..*self
        }
    }

    /// The modulus of the exponent representation.
    pub fn modulus(&self) -> u64 {
        self.order
    }

    /// The true order of this power of the base character.
    pub fn order(&self) -> u64 {
        if self.power == 0 {
            1
        } else {
            self.order / crate::field::gcd_u64(self.order, self.power)
        }
    }

    pub fn is_principal(&self) -> bool {
        self.power == 0
    }

    /// Exponent e with chi(x) = zeta^e, or None when x = 0.
    pub fn exponent(&self, x: Elt<'a>) -> Option<u64> {
        assert!(x.in_fq(), "character argument must lie in F_q");
        let l = x.log()?;
        let j = l / (self.t.q() as u64 + 1);
        Some((j % self.order) * self.power % self.order)
    }

    /// Exponent at a point of P^1; None at 0 and infinity, where chi vanishes.
    pub fn exponent_at(&self, p: Point<'a>) -> Option<u64> {
        p.fin().and_then(|x| self.exponent(x))
    }
}

/// An exact sum of roots of unity, stored as counts per exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycloSum {
    pub counts: Vec<u64>,
}

impl CycloSum {
    pub fn zero(d: u64) -> CycloSum {
        CycloSum {
            counts: vec![0; d as usize],
        }
    }

    pub fn add(&mut self, e: u64) {
        self.counts[e as usize] += 1;
    }

    pub fn complex(&self) -> (f64, f64) {
        let d = self.counts.len() as f64;
        self.counts
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (e, &n)| {
                let a = 2.0 * std::f64::consts::PI * e as f64 / d;
                (re + n as f64 * a.cos(), im + n as f64 * a.sin())
            })
    }

    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.complex();
        re.hypot(im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSum {
    pub sum: CycloSum,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    /// Total degree of the finite zeros and poles.
    pub m: usize,
    pub bound: f64,
    pub within_bound: bool,
}

/// Distinct roots with multiplicities, all of which must lie in F_{q^2}.
fn root_data<'a>(p: &Poly<'a>) -> Result<Vec<(Elt<'a>, usize)>, CharsumError> {
    let mut out = Vec::new();
    let mut total = 0;
    let mut roots = p.roots_in_field();
    roots.dedup();
    for r in roots {
        let m = p.root_multiplicity(r);
        total += m;
        out.push((r, m));
    }
    if total != p.deg().unwrap_or(0) {
        return Err(CharsumError::UnsupportedFactorization);
    }
    Ok(out)
}

/// Sum of chi(f(x)) over x in P^1(F_q), with the Weil bound (m - 1) sqrt(q).
pub fn char_sum<'a>(chi: &MultChar<'a>, f: &RatFn<'a>) -> Result<CharSum, CharsumError> {
    let t = chi.t;
    if f.num().is_zero() {
        return Err(CharsumError::ZeroFunction);
    }
    if !f.coeffs_in_fq() {
        return Err(CharsumError::NotOverBaseField);
    }
    let (zn, zd) = (root_data(f.num())?, root_data(f.den())?);
    let ord = chi.order();
    if chi.is_principal()
        || zn
            .iter()
            .chain(&zd)
            .all(|&(_, m)| (m as u64).is_multiple_of(ord))
    {
        return Err(CharsumError::IsDthPower);
    }
    let mut roots: Vec<Elt<'a>> = zn.iter().chain(&zd).map(|&(r, _)| r).collect();
    roots.sort();
    roots.dedup();
    let m = roots.len();

    let mut sum = CycloSum::zero(chi.modulus());
    for x in t.fq_elements().map(Point::Fin).chain([Point::Inf]) {
        if let Some(e) = chi.exponent_at(f.eval(x)) {
            sum.add(e);
        }
    }
    let (re, im) = sum.complex();
    let magnitude = re.hypot(im);
    let bound = (m as f64 - 1.0) * (t.q() as f64).sqrt();
    Ok(CharSum {
        sum,
        re,
        im,
        magnitude,
        m,
        bound,
        within_bound: magnitude <= bound + MARGIN,
    })
}

fn require_k_not_dividing_l(t: &Tower) -> Result<(), CharsumError> {
    if t.k_divides_ell() {
        return Err(CharsumError::KDividesL);
    }
    if (t.k() / t.delta()).is_multiple_of(2) {
        return Err(CharsumError::KOverDeltaEven);
    }
    Ok(())
}

fn order_of(t: &Tower) -> u64 {
    (t.p() as u64).pow(t.delta()) - 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixReport {
    /// The double sum, an integer.
    pub sum: i64,
    /// The same sum recomputed from the isolated principal term plus the
    /// non-principal sums over P^1(F_q).
    pub sum_from_parts: f64,
    pub identity_holds: bool,
    pub lower_bound: f64,
    pub bound_holds: bool,
    pub positive: bool,
    pub weil: Vec<CharSum>,
    pub weil_ok: bool,
}

fn finish_report(sum: i64, principal: i64, weil: Vec<CharSum>, lower_bound: f64) -> AppendixReport {
    let sum_from_parts = principal as f64 + weil.iter().map(|w| w.re).sum::<f64>();
    let weil_ok = weil.iter().all(|w| w.within_bound);
    AppendixReport {
        sum,
        sum_from_parts,
        identity_holds: (sum_from_parts - sum as f64).abs() <= MARGIN,
        lower_bound,
        bound_holds: sum as f64 + MARGIN >= lower_bound,
        positive: sum > 0,
        weil,
        weil_ok,
    }
}

/// Sums chi^i(v) over i = 0..d-1 exactly: d when v is a nonzero d-th power, else 0.
fn full_orthogonal_sum(chi: &MultChar<'_>, v: Point<'_>) -> i64 {
    let d = chi.modulus();
    match chi.exponent_at(v) {
        None => 0,
        Some(e) => {
            let mut s = CycloSum::zero(d);
            for i in 0..d {
                s.add(e * i % d);
            }
            // all exponents e*i cover a subgroup evenly; the sum is real and integral
            let (re, _) = s.complex();
            re.round() as i64
        }
    }
}

pub fn p3_bound(p: u32, k: u32, delta: u32) -> f64 {
    let (p, k, d) = (p as f64, k as f64, delta as f64);
    p.powf(k) - 2.0 * p.powf(d + k / 2.0) + 4.0 * p.powf(k / 2.0) - 3.0
}

pub fn f2_bound(p: u32, k: u32, delta: u32) -> f64 {
    let (p, k, d) = (p as f64, k as f64, delta as f64);
    p.powf(k) - 3.0 * p.powf(d + k / 2.0) + 6.0 * p.powf(k / 2.0) + 1.0
}

fn check_p3_epsilon(eps: Elt<'_>) -> Result<(), CharsumError> {
    let t = eps.tower();
    if !eps.in_fq() || eps.is_zero() || eps == -t.one() {
        return Err(CharsumError::EpsilonConstraintViolated);
    }
    Ok(())
}

/// -(eps + 1) t / ((1 + eps t)(1 - t)).
pub fn p3_function<'a>(eps: Elt<'a>) -> RatFn<'a> {
    let t = eps.tower();
    let one = t.one();
    let num = Poly::new(t, vec![t.zero(), -(eps + one)]);
    let den = Poly::new(t, vec![one, eps]).mul(&Poly::new(t, vec![one, -one]));
    RatFn::new(num, den).expect("nonzero denominator")
}

/// The sum over t in F_q minus {0, 1, -1/eps} of all characters of order
/// p^delta - 1 at the P3 function, with its lower bound.
pub fn appendix_a<'a>(t: &'a Tower, eps: Elt<'a>) -> Result<AppendixReport, CharsumError> {
    require_k_not_dividing_l(t)?;
    check_p3_epsilon(eps)?;
    let d = order_of(t);
    let chi = MultChar::new(t, d)?;
    let f = p3_function(eps);
    let excluded = [t.zero(), t.one(), -eps.inv()];
    let domain: Vec<Elt<'a>> = t.fq_elements().filter(|x| !excluded.contains(x)).collect();
    let sum: i64 = domain
        .iter()
        .map(|&x| full_orthogonal_sum(&chi, f.eval(Point::Fin(x))))
        .sum();
    let weil = (1..d)
        .map(|i| char_sum(&chi.pow(i), &f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(finish_report(
        sum,
        t.q() as i64 - 3,
        weil,
        p3_bound(t.p(), t.k(), t.delta()),
    ))
}

fn check_f2_epsilon(eps: Elt<'_>) -> Result<(), CharsumError> {
    if eps.is_zero() || eps.in_mu() {
        return Err(CharsumError::EpsilonInMu);
    }
    if eps == -eps.tower().one() {
        return Err(CharsumError::EpsilonIsMinusOne);
    }
    Ok(())
}

/// lambda_eps N(x) / D(x) with N = (x + xi)(x + conj(xi)) and D built from
/// r = (conj(xi) + eps xi) / (1 + eps).
pub fn f2_function<'a>(eps: Elt<'a>, xi: Elt<'a>) -> RatFn<'a> {
    let t = eps.tower();
    let one = t.one();
    let lambda = (eps * eps.bar() - one) / ((one + eps) * (one + eps.bar()));
    let r = (xi.bar() + eps * xi) / (one + eps);
    let quad = |z: Elt<'a>| Poly::new(t, vec![z * z.bar(), z + z.bar(), one]);
    RatFn::new(quad(xi).scale(lambda), quad(r)).expect("nonzero denominator")
}

/// The sum over P^1(F_q) of all characters of order p^delta - 1 at the f2
/// function, with its lower bound.  Expects k*ell / delta^2 odd; see
/// [`appendix_b_reduced`] for the general case.
pub fn appendix_b<'a>(
    t: &'a Tower,
    eps: Elt<'a>,
    xi: Elt<'a>,
) -> Result<AppendixReport, CharsumError> {
    require_k_not_dividing_l(t)?;
    check_f2_epsilon(eps)?;
    if xi.in_fq() {
        return Err(CharsumError::XiInBaseField);
    }
    if ((t.k() / t.delta()) * (t.ell() / t.delta())).is_multiple_of(2) {
        return Err(CharsumError::KEllOverDeltaSqEven);
    }
    let d = order_of(t);
    let chi = MultChar::new(t, d)?;
    let f = f2_function(eps, xi);
    let sum: i64 = t
        .fq_elements()
        .map(Point::Fin)
        .chain([Point::Inf])
        .map(|x| full_orthogonal_sum(&chi, f.eval(x)))
        .sum();
    let weil = (1..d)
        .map(|i| char_sum(&chi.pow(i), &f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(finish_report(
        sum,
        t.q() as i64 + 1,
        weil,
        f2_bound(t.p(), t.k(), t.delta()),
    ))
}

/// Applies X -> X^q to f2 when ell / delta is even (ell becomes k + ell and
/// eps becomes eps^-q), then runs [`appendix_b`].  Returns the ell used.
pub fn appendix_b_reduced(
    t: &Tower,
    eps: u32,
    xi: u32,
) -> Result<(u32, AppendixReport), CharsumError> {
    require_k_not_dividing_l(t)?;
    if (t.ell() / t.delta()).is_multiple_of(2) {
        let t2 = t
            .with_ell(t.k() + t.ell())
            .map_err(|_| CharsumError::KDividesL)?;
        let e = t2.elt(eps);
        check_f2_epsilon(e)?;
        let e2 = e.bar().inv();
        let r = appendix_b(&t2, e2, t2.elt(xi))?;
        Ok((t2.ell(), r))
    } else {
        Ok((t.ell(), appendix_b(t, t.elt(eps), t.elt(xi))?))
    }
}

/// Solutions (X, Z) in F_q^2 of X^Q + X + (tau1 - tau2) Z = 0 and
/// Z^Q + (tau1 + tau2 - 1) Z = 0, where tau1 = 1/(1 - t), tau2 = eps t/(1 + eps t).
pub fn p3_reduced_solutions<'a>(
    tw: &'a Tower,
    eps: Elt<'a>,
    t: Elt<'a>,
) -> Result<usize, CharsumError> {
    check_p3_epsilon(eps)?;
    let one = tw.one();
    if !t.in_fq() || t.is_zero() || t == one || t == -eps.inv() {
        return Err(CharsumError::TOutOfRange);
    }
    let bq = tw.big_q() as u128;
    let tau1 = (one - t).inv();
    let tau2 = eps * t / (one + eps * t);
    let fq: Vec<Elt<'a>> = tw.fq_elements().collect();
    let mut count = 0;
    for &z in &fq {
        if !(z.pow(bq) + (tau1 + tau2 - one) * z).is_zero() {
            continue;
        }
        count += fq
            .iter()
            .filter(|&&x| (x.pow(bq) + x + (tau1 - tau2) * z).is_zero())
            .count();
    }
    Ok(count)
}

fn p3_eval<'a>(eps: Elt<'a>, x: Elt<'a>, y: Elt<'a>) -> (Elt<'a>, Elt<'a>) {
    let bq = x.tower().big_q() as u128;
    let (xq, yq) = (x.pow(bq), y.pow(bq));
    (xq * x - xq * y, x * yq + eps * yq * y)
}

/// Solutions (x, y) in F_q^2 of P3(x + a, y + b) - P3(x, y) = P3(a, b).
pub fn p3_direct_count<'a>(eps: Elt<'a>, a: Elt<'a>, b: Elt<'a>) -> usize {
    let tw = eps.tower();
    let target = p3_eval(eps, a, b);
    let fq: Vec<Elt<'a>> = tw.fq_elements().collect();
    let mut count = 0;
    for &x in &fq {
        for &y in &fq {
            let (u1, v1) = p3_eval(eps, x + a, y + b);
            let (u0, v0) = p3_eval(eps, x, y);
            if (u1 - u0, v1 - v0) == target {
                count += 1;
            }
        }
    }
    count
}

/// First t whose reduced system has a nonzero solution, if any.
pub fn p3_certificate<'a>(
    tw: &'a Tower,
    eps: Elt<'a>,
) -> Result<Option<(Elt<'a>, usize)>, CharsumError> {
    check_p3_epsilon(eps)?;
    for t in tw.fq_elements() {
        match p3_reduced_solutions(tw, eps, t) {
            Ok(n) if n > 1 => return Ok(Some((t, n))),
            Ok(_) | Err(CharsumError::TOutOfRange) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Solutions (y, z), y in F_q and conj(z) = -z, of y^Q + y + (conj(tau) - tau) z = 0
/// and z^Q + (1 - tau - conj(tau)) z = 0, where tau = 1/(1 + eps a^(1-q)).
pub fn f2_reduced_solutions<'a>(
    tw: &'a Tower,
    eps: Elt<'a>,
    a: Elt<'a>,
) -> Result<usize, CharsumError> {
    check_f2_epsilon(eps)?;
    if a.is_zero() {
        return Err(CharsumError::ZeroDirection);
    }
    let one = tw.one();
    let bq = tw.big_q() as u128;
    let tau = (one + eps * a / a.bar()).inv();
    let zs = anti_fixed(tw);
    let fq: Vec<Elt<'a>> = tw.fq_elements().collect();
    let mut count = 0;
    for &z in &zs {
        if !(z.pow(bq) + (one - tau - tau.bar()) * z).is_zero() {
            continue;
        }
        count += fq
            .iter()
            .filter(|&&y| (y.pow(bq) + y + (tau.bar() - tau) * z).is_zero())
            .count();
    }
    Ok(count)
}

/// The q elements z of F_{q^2} with conj(z) = -z.
pub fn anti_fixed(tw: &Tower) -> Vec<Elt<'_>> {
    tw.elements().filter(|z| z.bar() == -*z).collect()
}

fn f2_eval<'a>(eps: Elt<'a>, x: Elt<'a>) -> Elt<'a> {
    let bq = x.tower().big_q() as u128;
    let xq = x.pow(bq);
    xq * x.bar() + eps * xq * x
}

/// Solutions x in F_{q^2} of f2(x + a) - f2(x) = f2(a).
pub fn f2_direct_count<'a>(eps: Elt<'a>, a: Elt<'a>) -> usize {
    let tw = eps.tower();
    let target = f2_eval(eps, a);
    tw.elements()
        .filter(|&x| f2_eval(eps, x + a) - f2_eval(eps, x) == target)
        .count()
}

/// First direction a (over representatives of F_{q^2}^* / F_q^*) whose
/// reduced system has a nonzero solution.
pub fn f2_certificate<'a>(
    tw: &'a Tower,
    eps: Elt<'a>,
) -> Result<Option<(Elt<'a>, usize)>, CharsumError> {
    check_f2_epsilon(eps)?;
    let g = tw.generator();
    for j in 0..=tw.q() as u128 {
        let a = g.pow(j);
        let n = f2_reduced_solutions(tw, eps, a)?;
        if n > 1 {
            return Ok(Some((a, n)));
        }
    }
    Ok(None)
}
