//! Arithmetic on elements of `F_p[x]/(m(x))` held as base-`p` digit vectors.
//!
//! This is the slow reference path for extension fields that have no
//! precomputed tables. Everything else in the crate is checked against it.

pub(crate) const MAX_K: usize = 64;

pub(crate) type Digits = [u64; MAX_K];

pub(crate) fn decode(mut v: u64, p: u64, k: usize) -> Digits {
    let mut out = [0u64; MAX_K];
    for d in out.iter_mut().take(k) {
        *d = v % p;
        v /= p;
    }
    out
}

pub(crate) fn encode(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

pub(crate) fn add(a: u64, b: u64, p: u64, k: usize) -> u64 {
    let (x, y) = (decode(a, p, k), decode(b, p, k));
    let mut z = [0u64; MAX_K];
    for i in 0..k {
        z[i] = (x[i] + y[i]) % p;
    }
    encode(&z[..k], p)
}

pub(crate) fn neg(a: u64, p: u64, k: usize) -> u64 {
    let x = decode(a, p, k);
    let mut z = [0u64; MAX_K];
    for i in 0..k {
        z[i] = (p - x[i]) % p;
    }
    encode(&z[..k], p)
}

pub(crate) fn mul(a: u64, b: u64, p: u64, modulus: &[u64]) -> u64 {
    let k = modulus.len() - 1;
    let (x, y) = (decode(a, p, k), decode(b, p, k));
    let mut t = [0u64; 2 * MAX_K];
    for i in 0..k {
        if x[i] == 0 {
            continue;
        }
        for j in 0..k {
            t[i + j] = (t[i + j] + x[i] * y[j]) % p;
        }
    }
    for i in (k..2 * k - 1).rev() {
        let c = t[i];
        if c == 0 {
            continue;
        }
        t[i] = 0;
        for j in 0..k {
            t[i - k + j] = (t[i - k + j] + c * (p - modulus[j])) % p;
        }
    }
    encode(&t[..k], p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

pub(crate) fn inv_prime(a: u64, p: u64) -> u64 {
    inv_mod_p(a, p)
}

/// `(a, b) -> (q, r)` over `F_p`, `b` nonzero and trimmed.
fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod_p(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + b.len() - 1] * lead_inv % p;
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + c * (p - bj)) % p;
            }
        }
    }
    r.truncate(b.len() - 1);
    trim(&mut r);
    (q, r)
}

fn mul_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

/// Inverse of a nonzero element by the extended Euclidean algorithm on its
/// polynomial representative against the modulus.
pub(crate) fn inv(a: u64, p: u64, modulus: &[u64]) -> u64 {
    let k = modulus.len() - 1;
    let mut r0 = modulus.to_vec();
    let mut r1 = decode(a, p, k)[..k].to_vec();
    trim(&mut r1);
    assert!(!r1.is_empty(), "inverse of zero");
    let (mut s0, mut s1) = (Vec::<u64>::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub_poly(&s0, &mul_poly(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since the modulus is irreducible.
    debug_assert_eq!(r0.len(), 1);
    let c = inv_mod_p(r0[0], p);
    let mut out = [0u64; MAX_K];
    for (i, &s) in s0.iter().enumerate() {
        out[i] = s * c % p;
    }
    encode(&out[..k], p)
}

/// Binary-field multiply: `a`, `b` are bit vectors of degree `< k`,
/// `modbits` is the full modulus including the `x^k` bit.
pub(crate) fn bin_mul(mut a: u64, mut b: u64, k: u32, modbits: u64) -> u64 {
    let top = 1u64 << k;
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modbits;
        }
    }
    r
}

fn bin_deg(x: u64) -> i32 {
    63 - x.leading_zeros() as i32
}

pub(crate) fn bin_inv(a: u64, modbits: u64) -> u64 {
    assert!(a != 0, "inverse of zero");
    // Invariant: s0 * a == r0 and s1 * a == r1 (mod modulus).
    let (mut r0, mut r1) = (modbits, a);
    let (mut s0, mut s1) = (0u64, 1u64);
    while r1 != 1 {
        if r1 == 0 {
            unreachable!("modulus not irreducible");
        }
        let mut q = 0u64;
        let mut r = r0;
        let db = bin_deg(r1);
        while r != 0 && bin_deg(r) >= db {
            let sh = bin_deg(r) - db;
            q ^= 1 << sh;
            r ^= r1 << sh;
        }
        let mut qs = 0u64;
        let mut qq = q;
        let mut sh = 0;
        while qq != 0 {
            if qq & 1 == 1 {
                qs ^= s1 << sh;
            }
            qq >>= 1;
            sh += 1;
        }
        let s = s0 ^ qs;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // reduce s1 modulo the modulus (degrees stay below k by construction)
    s1
}
