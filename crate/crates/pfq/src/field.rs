//! Arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^2}.
//!
//! An element of F_{q^2} is stored as the index `a0 + q*a1`, where `a0 + a1*u`
//! is its coordinate pair over F_q and `u` is a root of the quadratic modulus.
//! An element of F_q is the base-p integer whose digits are its coefficients
//! in the power basis of the degree-k modulus, lowest degree first.  Hence
//! F_q sits inside F_{q^2} as the indices `0..q`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod ext4;
mod fp_poly;

pub use ext4::{Ext4, E4};

/// Largest q^2 for which log/antilog tables are built.
pub const TABLE_LIMIT: u64 = 1 << 20;
/// Largest q^2 for which a full addition table is built.
const ADD_TABLE_LIMIT: u64 = 1 << 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("no irreducible polynomial of degree {0} found")]
    IrreducibleSearchFailure(u32),
    #[error("element is not in the base field F_q")]
    NotInBaseField,
    #[error("zero input")]
    ZeroInput,
    #[error("extension degrees k and ell must be positive")]
    InvalidDegree,
    #[error("field too large: p^(2k) and p^ell must fit the index type")]
    FieldTooLarge,
    #[error("modulus is malformed or reducible")]
    BadModulus,
    #[error("cannot parse element `{0}`")]
    Parse(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Serializable description of a tower; moduli are given by coefficients,
/// lowest degree first.  `modulus_q2` holds the three coefficients of the
/// monic quadratic over F_q, each as a list of k base-p digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u32,
    pub k: u32,
    pub ell: u32,
    pub modulus_q: Vec<u32>,
    pub modulus_q2: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct Tables {
    fq_add: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    frob: Vec<u32>,
}

/// The arithmetic context (p, k, ell).  Immutable once built.
#[derive(Clone)]
pub struct Tower {
    p: u32,
    k: u32,
    ell: u32,
    delta: u32,
    q: u32,
    q2: u32,
    big_q: u64,
    modulus_q: Vec<u32>,
    m0: u32,
    m1: u32,
    gen: u32,
    tables: Option<Tables>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("ell", &self.ell)
            .field("modulus_q", &self.modulus_q)
            .field("modulus_q2", &[self.m0, self.m1, 1])
            .finish()
    }
}

impl Tower {
    /// Builds the tower with the smallest irreducible moduli, searching from
    /// an offset derived from `seed` when one is given.
    pub fn new(p: u32, k: u32, ell: u32, seed: Option<u64>) -> Result<Tower, FieldError> {
        check_params(p, k, ell)?;
        let start = seed.unwrap_or(0);
        let modulus_q = fp_poly::find_irreducible(p, k, start)
            .ok_or(FieldError::IrreducibleSearchFailure(k))?;
        let mut t = Tower::skeleton(p, k, ell, modulus_q)?;
        let q = t.q as u64;
        let mut found = None;
        for i in 0..q * q {
            let n = (start.wrapping_add(i)) % (q * q);
            let (m0, m1) = ((n % q) as u32, (n / q) as u32);
            if t.quadratic_irreducible(m0, m1) {
                found = Some((m0, m1));
                break;
            }
        }
        let (m0, m1) = found.ok_or(FieldError::IrreducibleSearchFailure(2))?;
        t.m0 = m0;
        t.m1 = m1;
        t.finish(true);
        Ok(t)
    }

    /// Rebuilds a tower from its serialized description, re-verifying both moduli.
    pub fn from_spec(spec: &TowerSpec) -> Result<Tower, FieldError> {
        check_params(spec.p, spec.k, spec.ell)?;
        let (p, k) = (spec.p, spec.k);
        if spec.modulus_q.len() != k as usize + 1
            || spec.modulus_q[k as usize] != 1
            || spec.modulus_q.iter().any(|&d| d >= p)
            || !fp_poly::is_irreducible(p, &spec.modulus_q)
        {
            return Err(FieldError::BadModulus);
        }
        let mut t = Tower::skeleton(p, k, spec.ell, spec.modulus_q.clone())?;
        if spec.modulus_q2.len() != 3 {
            return Err(FieldError::BadModulus);
        }
        let mut coeffs = [0u32; 3];
        for (slot, digits) in coeffs.iter_mut().zip(&spec.modulus_q2) {
            if digits.len() > k as usize || digits.iter().any(|&d| d >= p) {
                return Err(FieldError::BadModulus);
            }
            *slot = t.fq_from_digits(digits);
        }
        if coeffs[2] != 1 || !t.quadratic_irreducible(coeffs[0], coeffs[1]) {
            return Err(FieldError::BadModulus);
        }
        t.m0 = coeffs[0];
        t.m1 = coeffs[1];
        t.finish(true);
        Ok(t)
    }

    /// Same field with a different ell.
    pub fn with_ell(&self, ell: u32) -> Result<Tower, FieldError> {
        check_params(self.p, self.k, ell)?;
        let mut t = self.clone();
        t.ell = ell;
        t.delta = gcd_u64(self.k as u64, ell as u64) as u32;
        t.big_q = (self.p as u64)
            .checked_pow(ell)
            .ok_or(FieldError::FieldTooLarge)?;
        Ok(t)
    }

    #[cfg(test)]
    pub(crate) fn without_tables(&self) -> Tower {
        let mut t = self.clone();
        t.tables = None;
        t
    }

    fn skeleton(p: u32, k: u32, ell: u32, modulus_q: Vec<u32>) -> Result<Tower, FieldError> {
        let q = (p as u64).checked_pow(k).ok_or(FieldError::FieldTooLarge)?;
        let q2 = q
            .checked_mul(q)
            .filter(|&v| v <= u32::MAX as u64)
            .ok_or(FieldError::FieldTooLarge)?;
        let big_q = (p as u64)
            .checked_pow(ell)
            .ok_or(FieldError::FieldTooLarge)?;
        Ok(Tower {
            p,
            k,
            ell,
            delta: gcd_u64(k as u64, ell as u64) as u32,
            q: q as u32,
            q2: q2 as u32,
            big_q,
            modulus_q,
            m0: 0,
            m1: 0,
            gen: 0,
            tables: None,
        })
    }

    fn quadratic_irreducible(&self, m0: u32, m1: u32) -> bool {
        (0..self.q).all(|x| {
            let v = self.fq_add_slow(self.fq_mul_slow(x, self.fq_add_slow(x, m1)), m0);
            v != 0
        })
    }

    fn finish(&mut self, build_tables: bool) {
        let n = self.q2 as u64 - 1;
        let factors = prime_factors(n);
        let gen = (1..self.q2)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        self.gen = gen;
        if build_tables && (self.q2 as u64) <= TABLE_LIMIT {
            self.tables = Some(self.build_tables());
        }
    }

    fn build_tables(&self) -> Tables {
        let (q, q2) = (self.q as usize, self.q2 as usize);
        let mut fq_add = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                fq_add[a * q + b] = self.fq_add_slow(a as u32, b as u32);
            }
        }
        let n = q2 - 1;
        let mut log = vec![0u32; q2];
        let mut exp = vec![0u32; 2 * n];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, self.gen);
        }
        let neg: Vec<u32> = (0..q2 as u32).map(|v| self.neg_slow(v)).collect();
        let frob: Vec<u32> = (0..q2 as u32).map(|v| self.frob_slow(v)).collect();
        let add = if (q2 as u64) <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; q2 * q2];
            for a in 0..q2 {
                for b in 0..q2 {
                    t[a * q2 + b] = self.add_split(&fq_add, a as u32, b as u32);
                }
            }
            Some(t)
        } else {
            None
        };
        Tables {
            fq_add,
            add,
            neg,
            log,
            exp,
            frob,
        }
    }

    fn add_split(&self, fq_add: &[u32], a: u32, b: u32) -> u32 {
        let q = self.q;
        let lo = fq_add[((a % q) * q + b % q) as usize];
        let hi = fq_add[((a / q) * q + b / q) as usize];
        lo + q * hi
    }

    // ---- slow arithmetic (always available) ----

    fn fq_add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let (mut r, mut w) = (0u32, 1u32);
        for _ in 0..self.k {
            r += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w = w.wrapping_mul(p);
        }
        r
    }

    fn fq_neg_slow(&self, mut a: u32) -> u32 {
        let p = self.p;
        let (mut r, mut w) = (0u32, 1u32);
        for _ in 0..self.k {
            r += ((p - a % p) % p) * w;
            a /= p;
            w = w.wrapping_mul(p);
        }
        r
    }

    fn fq_digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn fq_from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &x| acc * self.p + x)
    }

    fn fq_mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = fp_poly::mul(self.p, &self.fq_digits(a), &self.fq_digits(b));
        let r = fp_poly::rem(self.p, &prod, &self.modulus_q);
        let mut d = r;
        d.resize(self.k as usize, 0);
        self.fq_from_digits(&d)
    }

    fn neg_slow(&self, v: u32) -> u32 {
        let q = self.q;
        self.fq_neg_slow(v % q) + q * self.fq_neg_slow(v / q)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let q = self.q;
        self.fq_add_slow(a % q, b % q) + q * self.fq_add_slow(a / q, b / q)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let q = self.q;
        let (a0, a1, b0, b1) = (a % q, a / q, b % q, b / q);
        let t = self.fq_mul_slow(a1, b1);
        let c0 = self.fq_add_slow(
            self.fq_mul_slow(a0, b0),
            self.fq_neg_slow(self.fq_mul_slow(self.m0, t)),
        );
        let c1 = self.fq_add_slow(
            self.fq_add_slow(self.fq_mul_slow(a0, b1), self.fq_mul_slow(a1, b0)),
            self.fq_neg_slow(self.fq_mul_slow(self.m1, t)),
        );
        c0 + q * c1
    }

    fn pow_slow(&self, x: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (x, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    // bar(a0 + a1 u) = (a0 - a1 m1) - a1 u, since u + bar(u) = -m1.
    fn frob_slow(&self, v: u32) -> u32 {
        let q = self.q;
        let (a0, a1) = (v % q, v / q);
        let c0 = self.fq_add_slow(a0, self.fq_neg_slow(self.fq_mul_slow(a1, self.m1)));
        c0 + q * self.fq_neg_slow(a1)
    }

    // ---- raw arithmetic on indices ----

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => match &t.add {
                Some(add) => add[(a * self.q2 + b) as usize],
                None => self.add_split(&t.fq_add, a, b),
            },
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    /// x^e with e taken modulo q^2 - 1 for nonzero x; 0^0 = 1.
    pub fn pow_raw(&self, x: u32, e: u128) -> u32 {
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.q2 as u128 - 1;
        let e = (e % n) as u64;
        match &self.tables {
            Some(t) => t.exp[((t.log[x as usize] as u64 * e) % n as u64) as usize],
            None => self.pow_slow(x, e),
        }
    }

    pub fn inv_raw(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let n = self.q2 - 1;
        Some(match &self.tables {
            Some(t) => t.exp[((n - t.log[x as usize]) % n) as usize],
            None => self.pow_slow(x, n as u64 - 1),
        })
    }

    #[inline]
    pub fn frob_raw(&self, x: u32) -> u32 {
        match &self.tables {
            Some(t) => t.frob[x as usize],
            None => self.frob_slow(x),
        }
    }

    /// Discrete logarithm to the tower generator; None at zero.
    pub fn log_raw(&self, x: u32) -> Option<u64> {
        if x == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[x as usize] as u64),
            None => {
                let (mut acc, mut i) = (1u32, 0u64);
                while acc != x {
                    acc = self.mul_slow(acc, self.gen);
                    i += 1;
                }
                Some(i)
            }
        }
    }

    // ---- accessors ----

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn ell(&self) -> u32 {
        self.ell
    }
    /// gcd(k, ell).
    pub fn delta(&self) -> u32 {
        self.delta
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn q2(&self) -> u32 {
        self.q2
    }
    /// Q = p^ell.
    pub fn big_q(&self) -> u64 {
        self.big_q
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }
    pub fn k_divides_ell(&self) -> bool {
        self.ell.is_multiple_of(self.k)
    }

    pub fn spec(&self) -> TowerSpec {
        let mut m2 = Vec::new();
        for c in [self.m0, self.m1, 1] {
            m2.push(self.fq_digits(c));
        }
        TowerSpec {
            p: self.p,
            k: self.k,
            ell: self.ell,
            modulus_q: self.modulus_q.clone(),
            modulus_q2: m2,
        }
    }

    pub fn elt(&self, v: u32) -> Elt<'_> {
        debug_assert!(v < self.q2);
        Elt { t: self, v }
    }
    pub fn zero(&self) -> Elt<'_> {
        self.elt(0)
    }
    pub fn one(&self) -> Elt<'_> {
        self.elt(1)
    }
    /// The image of an integer under Z -> F_p.
    pub fn from_int(&self, n: i64) -> Elt<'_> {
        self.elt(n.rem_euclid(self.p as i64) as u32)
    }
    /// The root u of the quadratic modulus; it generates F_{q^2} over F_q.
    pub fn u(&self) -> Elt<'_> {
        self.elt(self.q)
    }
    /// A generator of the multiplicative group of F_{q^2}.
    pub fn generator(&self) -> Elt<'_> {
        self.elt(self.gen)
    }
    pub fn from_coords(&self, a0: u32, a1: u32) -> Elt<'_> {
        assert!(a0 < self.q && a1 < self.q);
        self.elt(a0 + self.q * a1)
    }
    pub fn elements(&self) -> impl Iterator<Item = Elt<'_>> + '_ {
        (0..self.q2).map(move |v| self.elt(v))
    }
    pub fn fq_elements(&self) -> impl Iterator<Item = Elt<'_>> + '_ {
        (0..self.q).map(move |v| self.elt(v))
    }
    /// The q+1 elements of mu_{q+1}, in index order.
    pub fn mu_elements(&self) -> Vec<Elt<'_>> {
        let g = self.generator();
        let step = g.pow(self.q as u128 - 1);
        let mut out = Vec::with_capacity(self.q as usize + 1);
        let mut x = self.one();
        for _ in 0..=self.q {
            out.push(x);
            x *= step;
        }
        out.sort();
        out
    }

    /// Parses "d0d1..+u*d0d1..", base-p digits lowest degree first.
    pub fn parse(&self, s: &str) -> Result<Elt<'_>, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        let (lo, hi) = match s.find("u*") {
            Some(pos) => {
                let head = s[..pos].trim_end();
                let head = head.strip_suffix('+').ok_or_else(err)?.trim_end();
                let head = if head.is_empty() { "0" } else { head };
                (head, &s[pos + 2..])
            }
            None => (s, "0"),
        };
        let a0 = self.parse_fq(lo).ok_or_else(err)?;
        let a1 = self.parse_fq(hi.trim()).ok_or_else(err)?;
        Ok(self.from_coords(a0, a1))
    }

    fn parse_fq(&self, s: &str) -> Option<u32> {
        if s.is_empty() || s.chars().count() > self.k as usize {
            return None;
        }
        let mut digits = Vec::new();
        for ch in s.chars() {
            let d = ch.to_digit(36)?;
            if d >= self.p {
                return None;
            }
            digits.push(d);
        }
        Some(self.fq_from_digits(&digits))
    }

    fn format_fq(&self, a: u32) -> String {
        let mut d = self.fq_digits(a);
        while d.len() > 1 && *d.last().unwrap() == 0 {
            d.pop();
        }
        d.iter()
            .map(|&x| std::char::from_digit(x, 36).unwrap())
            .collect()
    }

    pub fn format(&self, v: u32) -> String {
        let (a0, a1) = (v % self.q, v / self.q);
        if a1 == 0 {
            self.format_fq(a0)
        } else {
            format!("{}+u*{}", self.format_fq(a0), self.format_fq(a1))
        }
    }
}

fn check_params(p: u32, k: u32, ell: u32) -> Result<(), FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NonPrime(p as u64));
    }
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if k == 0 || ell == 0 {
        return Err(FieldError::InvalidDegree);
    }
    Ok(())
}

/// An element of F_{q^2} bound to its tower.
#[derive(Clone, Copy)]
pub struct Elt<'a> {
    t: &'a Tower,
    v: u32,
}

impl<'a> Elt<'a> {
    pub fn index(self) -> u32 {
        self.v
    }
    pub fn tower(self) -> &'a Tower {
        self.t
    }
    pub fn is_zero(self) -> bool {
        self.v == 0
    }
    pub fn is_one(self) -> bool {
        self.v == 1
    }
    /// Coordinates (a0, a1) over F_q.
    pub fn coords(self) -> (u32, u32) {
        (self.v % self.t.q, self.v / self.t.q)
    }
    /// x^q.
    pub fn bar(self) -> Elt<'a> {
        self.t.elt(self.t.frob_raw(self.v))
    }
    pub fn pow(self, e: u128) -> Elt<'a> {
        self.t.elt(self.t.pow_raw(self.v, e))
    }
    pub fn inv(self) -> Elt<'a> {
        self.checked_inv().expect("inverse of zero")
    }
    pub fn checked_inv(self) -> Option<Elt<'a>> {
        self.t.inv_raw(self.v).map(|v| self.t.elt(v))
    }
    /// x^(p^j).
    pub fn frob_p(self, j: u32) -> Elt<'a> {
        let mut x = self;
        for _ in 0..j {
            x = x.pow(self.t.p as u128);
        }
        x
    }
    pub fn in_fq(self) -> bool {
        self.v < self.t.q
    }
    pub fn in_mu(self) -> bool {
        in_mu(self)
    }
    pub fn is_square(self) -> bool {
        self.v == 0 || self.pow((self.t.q2 as u128 - 1) / 2).is_one()
    }
    /// Some square root in F_{q^2}, if one exists.
    pub fn sqrt(self) -> Option<Elt<'a>> {
        if self.v == 0 {
            return Some(self);
        }
        if !self.is_square() {
            return None;
        }
        if let Some(t) = &self.t.tables {
            return Some(self.t.elt(t.exp[(t.log[self.v as usize] / 2) as usize]));
        }
        Some(tonelli_shanks(self))
    }
    pub fn log(self) -> Option<u64> {
        self.t.log_raw(self.v)
    }
}

fn tonelli_shanks(a: Elt<'_>) -> Elt<'_> {
    let t = a.t;
    let n = t.q2 as u128 - 1;
    let (mut s, mut odd) = (0u32, n);
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let z = t
        .elements()
        .skip(1)
        .find(|z| !z.is_square())
        .expect("nonsquare exists");
    let mut m = s;
    let mut c = z.pow(odd);
    let mut x = a.pow(odd.div_ceil(2));
    let mut b = a.pow(odd);
    while !b.is_one() {
        let mut i = 0;
        let mut bb = b;
        while !bb.is_one() {
            bb = bb * bb;
            i += 1;
        }
        let mut f = c;
        for _ in 0..(m - i - 1) {
            f = f * f;
        }
        x *= f;
        c = f * f;
        b *= c;
        m = i;
    }
    x
}

impl PartialEq for Elt<'_> {
    fn eq(&self, o: &Self) -> bool {
        debug_assert!(std::ptr::eq(self.t, o.t), "elements from different towers");
        self.v == o.v
    }
}
impl Eq for Elt<'_> {}
impl Hash for Elt<'_> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.v.hash(h)
    }
}
impl PartialOrd for Elt<'_> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Elt<'_> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.v.cmp(&o.v)
    }
}
impl fmt::Display for Elt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.t.format(self.v))
    }
}
impl fmt::Debug for Elt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.t.format(self.v))
    }
}

impl<'a> Add for Elt<'a> {
    type Output = Elt<'a>;
    fn add(self, o: Self) -> Self {
        self.t.elt(self.t.add_raw(self.v, o.v))
    }
}
impl<'a> Sub for Elt<'a> {
    type Output = Elt<'a>;
    fn sub(self, o: Self) -> Self {
        self.t.elt(self.t.sub_raw(self.v, o.v))
    }
}
impl<'a> Mul for Elt<'a> {
    type Output = Elt<'a>;
    fn mul(self, o: Self) -> Self {
        self.t.elt(self.t.mul_raw(self.v, o.v))
    }
}
impl<'a> Div for Elt<'a> {
    type Output = Elt<'a>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}
impl<'a> Neg for Elt<'a> {
    type Output = Elt<'a>;
    fn neg(self) -> Self {
        self.t.elt(self.t.neg_raw(self.v))
    }
}
impl AddAssign for Elt<'_> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}
impl SubAssign for Elt<'_> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}
impl MulAssign for Elt<'_> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

pub fn make_tower(p: u32, k: u32, ell: u32, seed: Option<u64>) -> Result<Tower, FieldError> {
    Tower::new(p, k, ell, seed)
}

pub fn frobenius(x: Elt<'_>) -> Elt<'_> {
    x.bar()
}

/// The unique y with y^(p^m) = x.
pub fn inv_frobenius_power(x: Elt<'_>, m: u32) -> Elt<'_> {
    let two_k = 2 * x.t.k;
    let j = (two_k - m % two_k) % two_k;
    x.frob_p(j)
}

pub fn in_mu(x: Elt<'_>) -> bool {
    x.pow(x.t.q as u128 + 1).is_one()
}

pub fn is_square_in_fq(x: Elt<'_>) -> Result<bool, FieldError> {
    if !x.in_fq() {
        return Err(FieldError::NotInBaseField);
    }
    if x.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    Ok(x.pow((x.t.q as u128 - 1) / 2).is_one())
}

/// Solves e^(q-1) = gamma for gamma in mu_{q+1}.
pub fn hilbert90<'a>(gamma: Elt<'a>) -> Option<Elt<'a>> {
    let t = gamma.t;
    if !gamma.in_mu() {
        return None;
    }
    let qm1 = t.q as u64 - 1;
    match gamma.log() {
        Some(l) if t.has_tables() => Some(t.generator().pow((l / qm1) as u128)),
        _ => t.elements().skip(1).find(|e| e.pow(qm1 as u128) == gamma),
    }
}

/// The pair gcd(p^k - 1, p^ell - 1) and gcd(p^k + 1, p^ell - 1) by closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdForms {
    pub minus: u128,
    pub plus: u128,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Closed forms, asserted against the integer gcd.
pub fn gcd_power_forms(p: u32, k: u32, ell: u32) -> GcdForms {
    let p = p as u128;
    let d = gcd_u64(k as u64, ell as u64) as u32;
    let minus = p.pow(d) - 1;
    let plus = if (ell / d).is_multiple_of(2) {
        p.pow(d) + 1
    } else if p == 2 {
        1
    } else {
        2
    };
    assert_eq!(minus, gcd_u128(p.pow(k) - 1, p.pow(ell) - 1));
    assert_eq!(plus, gcd_u128(p.pow(k) + 1, p.pow(ell) - 1));
    GcdForms { minus, plus }
}
