//! F_{q^4} as F_{q^2}(w) with w^2 = n for a fixed nonsquare n.

use super::{Elt, Tower};

/// a + b*w, components as tower indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E4 {
    pub a: u32,
    pub b: u32,
}

#[derive(Debug, Clone)]
pub struct Ext4<'a> {
    t: &'a Tower,
    n: u32,
}

impl<'a> Ext4<'a> {
    pub fn new(t: &'a Tower) -> Ext4<'a> {
        let n = t
            .elements()
            .skip(1)
            .find(|x| !x.is_square())
            .expect("nonsquare exists");
        Ext4 { t, n: n.index() }
    }

    pub fn tower(&self) -> &'a Tower {
        self.t
    }

    pub fn embed(&self, x: Elt<'_>) -> E4 {
        E4 { a: x.index(), b: 0 }
    }

    /// The component in F_{q^2}, if the element lies there.
    pub fn project(&self, x: E4) -> Option<Elt<'a>> {
        (x.b == 0).then(|| self.t.elt(x.a))
    }

    pub fn zero(&self) -> E4 {
        E4 { a: 0, b: 0 }
    }
    pub fn one(&self) -> E4 {
        E4 { a: 1, b: 0 }
    }

    pub fn add(&self, x: E4, y: E4) -> E4 {
        E4 {
            a: self.t.add_raw(x.a, y.a),
            b: self.t.add_raw(x.b, y.b),
        }
    }

    pub fn sub(&self, x: E4, y: E4) -> E4 {
        E4 {
            a: self.t.sub_raw(x.a, y.a),
            b: self.t.sub_raw(x.b, y.b),
        }
    }

    pub fn mul(&self, x: E4, y: E4) -> E4 {
        let t = self.t;
        let bb = t.mul_raw(t.mul_raw(x.b, y.b), self.n);
        E4 {
            a: t.add_raw(t.mul_raw(x.a, y.a), bb),
            b: t.add_raw(t.mul_raw(x.a, y.b), t.mul_raw(x.b, y.a)),
        }
    }

    pub fn pow(&self, x: E4, mut e: u128) -> E4 {
        let (mut base, mut acc) = (x, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: E4) -> Option<E4> {
        // (a + bw)^-1 = (a - bw) / (a^2 - n b^2)
        let t = self.t;
        let norm = t.sub_raw(t.mul_raw(x.a, x.a), t.mul_raw(self.n, t.mul_raw(x.b, x.b)));
        let ni = t.inv_raw(norm)?;
        Some(E4 {
            a: t.mul_raw(x.a, ni),
            b: t.neg_raw(t.mul_raw(x.b, ni)),
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = E4> + '_ {
        let q2 = self.t.q2();
        (0..q2).flat_map(move |b| (0..q2).map(move |a| E4 { a, b }))
    }

    /// Evaluates a polynomial with F_{q^2} coefficients, lowest degree first.
    pub fn eval(&self, coeffs: &[Elt<'_>], x: E4) -> E4 {
        coeffs.iter().rev().fold(self.zero(), |acc, c| {
            self.add(self.mul(acc, x), self.embed(*c))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_f81() {
        let t = Tower::new(3, 1, 1, None).unwrap();
        let e = Ext4::new(&t);
        let all: Vec<E4> = e.elements().collect();
        assert_eq!(all.len(), 81);
        for &x in &all {
            if x != e.zero() {
                assert_eq!(e.mul(x, e.inv(x).unwrap()), e.one());
                assert_eq!(e.pow(x, 80), e.one());
            }
        }
        // every element of F_81 satisfies X^81 = X and F_9 is fixed by x -> x^9
        let fixed = all.iter().filter(|&&x| e.pow(x, 9) == x).count();
        assert_eq!(fixed, 9);
    }
}
