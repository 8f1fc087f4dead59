//! Dense polynomials over F_p, used only to build and check the base modulus.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(p: u32, a: u32) -> u32 {
    let (p64, mut base, mut e, mut acc) = (p as u64, a as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

pub(super) fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    trim(out.into_iter().map(|v| v as u32).collect())
}

pub(super) fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(p, m[dm]) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top] as u64 * lead_inv % p64;
        for (i, &c) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = ((r[idx] as u64 + p64 - f * c as u64 % p64) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let r = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(r)
}

fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn powmod(p: u32, x: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let (mut base, mut acc) = (rem(p, x, m), vec![1u32]);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(p, &mul(p, &acc, &base), m);
        }
        base = rem(p, &mul(p, &base, &base), m);
        e >>= 1;
    }
    acc
}

/// Ben-Or: f of degree k is irreducible iff gcd(X^(p^i) - X, f) = 1 for i <= k/2.
pub(super) fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let k = f.len() - 1;
    let mut xp = rem(p, &[0, 1], &f);
    for _ in 0..k / 2 {
        xp = powmod(p, &xp, p as u64, &f);
        if gcd(p, &sub(p, &xp, &[0, 1]), &f).len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest irreducible monic polynomial of degree k in the order of its
/// integer encoding, starting the scan at `start` and wrapping.
pub(super) fn find_irreducible(p: u32, k: u32, start: u64) -> Option<Vec<u32>> {
    if k == 1 {
        return Some(vec![0, 1]);
    }
    let count = (p as u64).checked_pow(k)?;
    (0..count).find_map(|i| {
        let mut n = (start % count + i) % count;
        let mut f = Vec::with_capacity(k as usize + 1);
        for _ in 0..k {
            f.push((n % p as u64) as u32);
            n /= p as u64;
        }
        f.push(1);
        is_irreducible(p, &f).then_some(f)
    })
}
