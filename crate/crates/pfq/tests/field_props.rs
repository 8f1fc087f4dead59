use pfq::field::{
    frobenius, gcd_power_forms, in_mu, inv_frobenius_power, is_square_in_fq, Elt, Tower,
};
use proptest::prelude::*;

/// Schoolbook arithmetic from the published moduli, sharing nothing with the
/// table-driven implementation.
struct Slow {
    p: u64,
    k: usize,
    q: u64,
    mq: Vec<u64>,
    m0: Vec<u64>,
    m1: Vec<u64>,
}

impl Slow {
    fn new(t: &Tower) -> Slow {
        let s = t.spec();
        let pad = |v: &Vec<u32>| {
            let mut d: Vec<u64> = v.iter().map(|&x| x as u64).collect();
            d.resize(t.k() as usize, 0);
            d
        };
        Slow {
            p: t.p() as u64,
            k: t.k() as usize,
            q: t.q() as u64,
            mq: s.modulus_q.iter().map(|&x| x as u64).collect(),
            m0: pad(&s.modulus_q2[0]),
            m1: pad(&s.modulus_q2[1]),
        }
    }

    fn digits(&self, mut v: u64) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn fq_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn fq_neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    fn fq_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; 2 * self.k];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic modulus, top down
        for i in (self.k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, m) in self.mq.iter().enumerate() {
                let slot = i - self.k + j;
                prod[slot] = (prod[slot] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        prod.truncate(self.k);
        prod
    }

    fn split(&self, v: u32) -> (Vec<u64>, Vec<u64>) {
        let v = v as u64;
        (self.digits(v % self.q), self.digits(v / self.q))
    }

    fn join(&self, a0: &[u64], a1: &[u64]) -> u32 {
        (self.undigits(a0) + self.q * self.undigits(a1)) as u32
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        self.join(&self.fq_add(&a0, &b0), &self.fq_add(&a1, &b1))
    }

    /// (a0 + a1 u)(b0 + b1 u) with u^2 = -m1 u - m0.
    fn mul(&self, a: u32, b: u32) -> u32 {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        let c0 = self.fq_mul(&a0, &b0);
        let c1 = self.fq_add(&self.fq_mul(&a0, &b1), &self.fq_mul(&a1, &b0));
        let c2 = self.fq_mul(&a1, &b1);
        let r0 = self.fq_add(&c0, &self.fq_neg(&self.fq_mul(&c2, &self.m0)));
        let r1 = self.fq_add(&c1, &self.fq_neg(&self.fq_mul(&c2, &self.m1)));
        self.join(&r0, &r1)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = self.join(&self.digits(1), &self.digits(0));
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

const FIELDS: [(u32, u32, u32); 6] = [
    (3, 1, 1),
    (5, 1, 2),
    (7, 1, 1),
    (3, 2, 1),
    (3, 3, 1),
    (5, 2, 3),
];

fn field() -> impl Strategy<Value = (u32, u32, u32)> {
    prop::sample::select(FIELDS.to_vec())
}

fn with_elts<F: Fn(&Tower, Elt<'_>, Elt<'_>)>(f: (u32, u32, u32), a: u32, b: u32, body: F) {
    let t = Tower::new(f.0, f.1, f.2, None).unwrap();
    let (a, b) = (a % t.q2(), b % t.q2());
    body(&t, t.elt(a), t.elt(b));
}

proptest! {
    #[test]
    fn arithmetic_matches_schoolbook(f in field(), a in any::<u32>(), b in any::<u32>()) {
        with_elts(f, a, b, |t, x, y| {
            let s = Slow::new(t);
            assert_eq!((x + y).index(), s.add(x.index(), y.index()));
            assert_eq!((x * y).index(), s.mul(x.index(), y.index()));
            assert_eq!(frobenius(x).index(), s.pow(x.index(), t.q() as u64));
            if !x.is_zero() {
                assert_eq!(s.mul(x.inv().index(), x.index()), t.one().index());
            }
        });
    }

    #[test]
    fn frobenius_is_an_involution(f in field(), a in any::<u32>()) {
        with_elts(f, a, 0, |_, x, _| assert_eq!(frobenius(frobenius(x)), x));
    }

    #[test]
    fn mu_membership_is_the_norm_condition(f in field(), a in any::<u32>()) {
        with_elts(f, a, 0, |t, x, _| {
            assert_eq!(in_mu(x), x.pow(t.q() as u128 + 1) == t.one());
        });
    }

    #[test]
    fn squareness_is_multiplicative(f in field(), a in any::<u32>(), b in any::<u32>()) {
        let t = Tower::new(f.0, f.1, f.2, None).unwrap();
        let (x, y) = (t.elt(1 + a % (t.q() - 1)), t.elt(1 + b % (t.q() - 1)));
        let sq = |e: Elt<'_>| is_square_in_fq(e).unwrap();
        // squareness by search, independent of the library
        let search = |e: Elt<'_>| t.fq_elements().any(|r| r * r == e);
        assert_eq!(sq(x), search(x));
        assert_eq!(sq(x * y), sq(x) == sq(y));
    }

    #[test]
    fn inverse_frobenius_power_round_trips(f in field(), a in any::<u32>(), m in 1u32..=12) {
        with_elts(f, a, 0, |t, x, _| {
            let m = 1 + (m - 1) % (4 * t.k());
            let y = inv_frobenius_power(x, m);
            assert_eq!(y.pow((t.p() as u128).pow(m)), x);
        });
    }
}

#[test]
fn gcd_forms_over_small_parameters() {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    for p in [3u32, 5, 7] {
        for k in 1..=6 {
            for ell in 1..=6 {
                let g = gcd_power_forms(p, k, ell);
                let pp = p as u128;
                assert_eq!(g.minus, gcd(pp.pow(k) - 1, pp.pow(ell) - 1));
                assert_eq!(g.plus, gcd(pp.pow(k) + 1, pp.pow(ell) - 1));
            }
        }
    }
}
