use crate::error::{Error, Result};
use crate::gf::ops::{with_ops, FieldOps};
use crate::gf::FieldCtx;

use super::{kernel, Poly};

/// Largest `q^n` for which enumeration uses a sieve bitmap.
const SIEVE_LIMIT: u64 = 1 << 30;

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

/// Rabin's test on a monic `f` of degree at least 1.
pub(crate) fn rabin<F: FieldOps>(o: &F, q: u64, f: &[u64]) -> bool {
    let n = (f.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let primes = prime_factors(n);
    let x = [0u64, 1];
    // h_j = x^{q^j} mod f for j = 1..n
    let mut h = x.to_vec();
    let mut checkpoints: Vec<u64> = primes.iter().map(|&l| n / l).collect();
    checkpoints.sort_unstable();
    let mut next = 0;
    for j in 1..=n {
        h = kernel::pow_q(o, &h, q, f);
        while next < checkpoints.len() && checkpoints[next] == j {
            let d = kernel::sub(o, &h, &x);
            let g = kernel::gcd(o, &d, f);
            if g.len() != 1 {
                return false;
            }
            next += 1;
        }
    }
    h == x
}

/// Rabin irreducibility test.
pub fn irreducible_test(f: &Poly) -> Result<bool> {
    match f.degree() {
        None | Some(0) => Err(Error::DegreeZero),
        Some(_) => {
            let m = f.monic();
            let q = f.ctx().q();
            Ok(with_ops!(f.ctx(), |o| rabin(&o, q, m.coeffs())))
        }
    }
}

fn mobius(n: u64) -> i128 {
    let mut m = n;
    let mut sign = 1i128;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `n` over `F_q`, by the necklace
/// formula. Panics if `q^n` does not fit in 127 bits.
pub fn count_irreducibles(q: u64, n: u32) -> u128 {
    assert!(n >= 1, "degree must be at least 1");
    let mut total = 0i128;
    for m in 1..=n as u64 {
        if !(n as u64).is_multiple_of(m) {
            continue;
        }
        let mu = mobius(m);
        if mu == 0 {
            continue;
        }
        let e = n / m as u32;
        let t = (q as i128)
            .checked_pow(e)
            .expect("q^n too large for the necklace count");
        total += mu * t;
    }
    (total / n as i128) as u128
}

/// Monic irreducibles of one degree, ascending by the encoding
/// `sum_{i<n} c_i q^i` of the coefficients below the leading one.
pub struct Irreducibles {
    ctx: FieldCtx,
    n: usize,
    next: u64,
    total: u64,
    bits: Option<Vec<u64>>,
}

impl Irreducibles {
    /// Next tail index, skipping reducible candidates.
    pub(crate) fn next_tail(&mut self) -> Option<u64> {
        while self.next < self.total {
            let t = self.next;
            self.next += 1;
            let irreducible = match &self.bits {
                Some(b) => b[(t / 64) as usize] >> (t % 64) & 1 == 0,
                None => {
                    let f = tail_to_coeffs(self.ctx.q(), self.n, t);
                    let q = self.ctx.q();
                    with_ops!(self.ctx, |o| rabin(&o, q, &f))
                }
            };
            if irreducible {
                return Some(t);
            }
        }
        None
    }

    /// All remaining tail indices.
    pub(crate) fn tails(mut self) -> Vec<u64> {
        let mut out = Vec::new();
        while let Some(t) = self.next_tail() {
            out.push(t);
        }
        out
    }
}

impl Iterator for Irreducibles {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let t = self.next_tail()?;
        Some(Poly::from_raw(
            &self.ctx,
            tail_to_coeffs(self.ctx.q(), self.n, t),
        ))
    }
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-`q`
/// digits of `t`.
pub(crate) fn tail_to_coeffs(q: u64, n: usize, mut t: u64) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    for d in c.iter_mut().take(n) {
        *d = t % q;
        t /= q;
    }
    c[n] = 1;
    c
}

/// All monic irreducibles of degree `n`, ascending by coefficient tuple
/// `(c_{n-1}, ..., c_0)`.
pub fn enumerate_irreducibles(ctx: &FieldCtx, n: usize) -> Result<Irreducibles> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let total = ctx
        .q()
        .checked_pow(n as u32)
        .ok_or(Error::Config(format!("q^{n} exceeds 64 bits")))?;
    let bits = if total <= SIEVE_LIMIT {
        Some(sieve(ctx, n, total))
    } else {
        None
    };
    Ok(Irreducibles {
        ctx: ctx.clone(),
        n,
        next: 0,
        total,
        bits,
    })
}

/// Bitmap over tails marking every reducible monic of degree `n`: each is
/// a product `g * h` with `g` irreducible of degree at most `n/2`.
fn sieve(ctx: &FieldCtx, n: usize, total: u64) -> Vec<u64> {
    let q = ctx.q();
    let mut bits = vec![0u64; total.div_ceil(64) as usize];
    let mut factors: Vec<Vec<u64>> = Vec::new();
    for j in 1..=n / 2 {
        let e = enumerate_irreducibles(ctx, j).expect("smaller degree");
        factors.extend(e.map(Poly::into_coeffs));
    }
    let pw: Vec<u64> = (0..=n).map(|i| q.pow(i as u32)).collect();
    with_ops!(ctx, |o| {
        // Difference between consecutive encodings, wrapping at q.
        let dv: Vec<u64> = (0..q)
            .map(|v| if v + 1 < q { o.sub(v + 1, v) } else { o.neg(v) })
            .collect();
        let mut prod = vec![0u64; n + 1];
        let mut t = vec![0u64; n];
        for g in &factors {
            let j = g.len() - 1;
            let m = n - j;
            prod.iter_mut().for_each(|x| *x = 0);
            prod[m..=n].copy_from_slice(g);
            t[..m].iter_mut().for_each(|x| *x = 0);
            let mut idx = (0..n).fold(0u64, |acc, i| acc.wrapping_add(prod[i] * pw[i]));
            'outer: loop {
                bits[(idx / 64) as usize] |= 1 << (idx % 64);
                let mut pos = 0;
                loop {
                    if pos == m {
                        break 'outer;
                    }
                    let v = t[pos];
                    let d = dv[v as usize];
                    t[pos] = if v + 1 == q { 0 } else { v + 1 };
                    for (i, &gi) in g.iter().enumerate() {
                        let k = pos + i;
                        let old = prod[k];
                        let new = o.add(old, o.mul(d, gi));
                        prod[k] = new;
                        idx = idx.wrapping_sub(old * pw[k]).wrapping_add(new * pw[k]);
                    }
                    if v + 1 < q {
                        break;
                    }
                    pos += 1;
                }
            }
        }
    });
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_extension;

    #[test]
    fn counts() {
        assert_eq!(count_irreducibles(2, 1), 2);
        assert_eq!(count_irreducibles(2, 13), 630);
        assert_eq!(count_irreducibles(5, 5), 624);
        assert_eq!(count_irreducibles(2, 4), 3);
    }

    #[test]
    fn sieve_matches_rabin() {
        for (p, k, n) in [(2u64, 1u32, 6usize), (3, 1, 4), (2, 2, 3), (3, 2, 2), (5, 1, 3)] {
            let f = make_extension(p, k).unwrap();
            let q = f.q();
            let sieved: Vec<u64> = enumerate_irreducibles(&f, n).unwrap().tails();
            let brute: Vec<u64> = (0..q.pow(n as u32))
                .filter(|&t| {
                    let c = tail_to_coeffs(q, n, t);
                    with_ops!(f, |o| rabin(&o, q, &c))
                })
                .collect();
            assert_eq!(sieved, brute, "{p}^{k} degree {n}");
            assert_eq!(sieved.len() as u128, count_irreducibles(q, n as u32));
        }
    }

    #[test]
    fn f2_low_degrees() {
        let f2 = make_extension(2, 1).unwrap();
        let one: Vec<String> = enumerate_irreducibles(&f2, 1)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(one, ["[0,1]", "[1,1]"]);
        let two: Vec<String> = enumerate_irreducibles(&f2, 2)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(two, ["[1,1,1]"]);
    }
}
