//! Slice-level polynomial routines, generic over the field backend.
//! Polynomials are coefficient vectors, constant first; "trimmed" means no
//! trailing zeros.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::gf::ops::FieldOps;

static KARATSUBA_THRESHOLD: AtomicUsize = AtomicUsize::new(32);

/// Operand length below which multiplication stays schoolbook.
pub fn karatsuba_threshold() -> usize {
    KARATSUBA_THRESHOLD.load(Ordering::Relaxed)
}

pub fn set_karatsuba_threshold(t: usize) {
    KARATSUBA_THRESHOLD.store(t.max(2), Ordering::Relaxed);
}

#[inline]
pub(crate) fn trim(v: &mut Vec<u64>) {
    while let Some(&0) = v.last() {
        v.pop();
    }
}

pub(crate) fn add<F: FieldOps>(o: &F, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (x, &y) in out.iter_mut().zip(short) {
        *x = o.add(*x, y);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub<F: FieldOps>(o: &F, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    out[..a.len()].copy_from_slice(a);
    for (x, &y) in out.iter_mut().zip(b) {
        *x = o.sub(*x, y);
    }
    trim(&mut out);
    out
}

pub(crate) fn scale<F: FieldOps>(o: &F, a: &[u64], c: u64) -> Vec<u64> {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| o.mul(x, c)).collect()
}

pub(crate) fn mul<F: FieldOps>(o: &F, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    mul_into(o, a, b, &mut out);
    trim(&mut out);
    out
}

fn add_at<F: FieldOps>(o: &F, out: &mut [u64], off: usize, src: &[u64]) {
    for (i, &s) in src.iter().enumerate() {
        if s != 0 {
            out[off + i] = o.add(out[off + i], s);
        }
    }
}

/// `out = a * b`; `out.len() == a.len() + b.len() - 1`.
fn mul_into<F: FieldOps>(o: &F, a: &[u64], b: &[u64], out: &mut [u64]) {
    let t = karatsuba_threshold();
    if a.len() < t || b.len() < t {
        o.conv(a, b, out);
        return;
    }
    let n = a.len().max(b.len());
    let m = n / 2;
    if a.len() <= m || b.len() <= m {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let (l0, l1) = long.split_at(m);
        out.iter_mut().for_each(|x| *x = 0);
        let mut t0 = vec![0u64; l0.len() + short.len() - 1];
        mul_into(o, l0, short, &mut t0);
        add_at(o, out, 0, &t0);
        let mut t1 = vec![0u64; l1.len() + short.len() - 1];
        mul_into(o, l1, short, &mut t1);
        add_at(o, out, m, &t1);
        return;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let mut z0 = vec![0u64; 2 * m - 1];
    mul_into(o, a0, b0, &mut z0);
    let mut z2 = vec![0u64; a1.len() + b1.len() - 1];
    mul_into(o, a1, b1, &mut z2);
    let sum = |x0: &[u64], x1: &[u64]| -> Vec<u64> {
        let mut s = vec![0u64; x0.len().max(x1.len())];
        s[..x0.len()].copy_from_slice(x0);
        for (d, &y) in s.iter_mut().zip(x1) {
            *d = o.add(*d, y);
        }
        s
    };
    let sa = sum(a0, a1);
    let sb = sum(b0, b1);
    let mut z1 = vec![0u64; sa.len() + sb.len() - 1];
    mul_into(o, &sa, &sb, &mut z1);
    for (i, x) in z1.iter_mut().enumerate() {
        let mut v = *x;
        if let Some(&y) = z0.get(i) {
            v = o.sub(v, y);
        }
        if let Some(&y) = z2.get(i) {
            v = o.sub(v, y);
        }
        *x = v;
    }
    out.iter_mut().for_each(|x| *x = 0);
    out[..z0.len()].copy_from_slice(&z0);
    let len = out.len();
    for (i, &v) in z1.iter().enumerate() {
        if m + i < len {
            out[m + i] = o.add(out[m + i], v);
        } else {
            debug_assert_eq!(v, 0);
        }
    }
    add_at(o, out, 2 * m, &z2);
}

/// Reduce `a` modulo the trimmed nonzero `b`, in place.
pub(crate) fn rem_in_place<F: FieldOps>(o: &F, a: &mut Vec<u64>, b: &[u64]) {
    let db = b.len() - 1;
    if a.len() <= db {
        trim(a);
        return;
    }
    let lead = b[db];
    let lead_inv = if lead == 1 { 1 } else { o.inv(lead) };
    for i in (db..a.len()).rev() {
        let c = a[i];
        if c == 0 {
            continue;
        }
        let c = if lead == 1 { c } else { o.mul(c, lead_inv) };
        o.sub_scaled(&mut a[i - db..i], c, &b[..db]);
        a[i] = 0;
    }
    a.truncate(db);
    trim(a);
}

pub(crate) fn divrem<F: FieldOps>(o: &F, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = o.inv(b[db]);
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let c = o.mul(c, lead_inv);
        q[i - db] = c;
        o.sub_scaled(&mut r[i - db..i], c, &b[..db]);
        r[i] = 0;
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn make_monic<F: FieldOps>(o: &F, a: &mut [u64]) {
    if let Some(&lc) = a.last() {
        if lc != 1 {
            let inv = o.inv(lc);
            for x in a.iter_mut() {
                *x = o.mul(*x, inv);
            }
        }
    }
}

/// Monic gcd; empty when both inputs are zero.
pub(crate) fn gcd<F: FieldOps>(o: &F, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        rem_in_place(o, &mut r0, &r1);
        std::mem::swap(&mut r0, &mut r1);
    }
    make_monic(o, &mut r0);
    r0
}

pub(crate) fn mulmod<F: FieldOps>(o: &F, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let mut t = mul(o, a, b);
    rem_in_place(o, &mut t, f);
    t
}

/// `a^e mod f`.
pub(crate) fn powmod<F: FieldOps>(o: &F, a: &[u64], e: u128, f: &[u64]) -> Vec<u64> {
    let mut base = a.to_vec();
    rem_in_place(o, &mut base, f);
    let mut acc = vec![1u64];
    rem_in_place(o, &mut acc, f);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(o, &acc, &base, f);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(o, &base, &base, f);
        }
    }
    acc
}

/// `a^q mod f` where `q` is the size of the coefficient field.
pub(crate) fn pow_q<F: FieldOps>(o: &F, a: &[u64], q: u64, f: &[u64]) -> Vec<u64> {
    powmod(o, a, q as u128, f)
}

pub(crate) fn derivative<F: FieldOps>(o: &F, a: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| {
            let m = (i as u64) % p;
            // m * c as repeated addition in the prime subfield
            let mut acc = 0;
            for _ in 0..m {
                acc = o.add(acc, c);
            }
            acc
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn eval<F: FieldOps>(o: &F, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| o.add(o.mul(acc, x), c))
}

/// Matrix of the `q`-power map on `F_q[x]/(f)`: row `i` holds
/// `x^{q i} mod f`, `n = deg f` entries each.
pub(crate) fn frobenius_matrix<F: FieldOps>(o: &F, q: u64, f: &[u64]) -> Vec<u64> {
    let n = f.len() - 1;
    let mut rows = vec![0u64; n * n];
    let mut cur = vec![1u64];
    rem_in_place(o, &mut cur, f);
    let shift = q <= 4 * n as u64 + 64;
    let xq = if shift {
        Vec::new()
    } else {
        pow_q(o, &[0, 1], q, f)
    };
    for i in 0..n {
        rows[i * n..i * n + cur.len()].copy_from_slice(&cur);
        if i + 1 == n {
            break;
        }
        if shift {
            let mut t = vec![0u64; cur.len() + q as usize];
            t[q as usize..].copy_from_slice(&cur);
            rem_in_place(o, &mut t, f);
            cur = t;
        } else {
            cur = mulmod(o, &cur, &xq, f);
        }
    }
    rows
}

/// `h^q mod f` through a matrix from [`frobenius_matrix`]; `h` reduced.
pub(crate) fn apply_frobenius<F: FieldOps>(o: &F, rows: &[u64], n: usize, h: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n];
    o.mat_vec(h, rows, n, &mut out);
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ops::ConstPrime;

    #[test]
    fn karatsuba_matches_schoolbook() {
        let o = ConstPrime::<7>;
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % 7
        };
        for (la, lb) in [(40, 40), (100, 33), (33, 100), (257, 64), (64, 300), (31, 500)] {
            let a: Vec<u64> = (0..la).map(|_| next()).collect();
            let b: Vec<u64> = (0..lb).map(|_| next()).collect();
            let mut want = vec![0u64; la + lb - 1];
            for i in 0..la {
                for j in 0..lb {
                    want[i + j] = (want[i + j] + a[i] * b[j]) % 7;
                }
            }
            trim(&mut want);
            assert_eq!(mul(&o, &a, &b), want, "{la}x{lb}");
        }
    }
}
