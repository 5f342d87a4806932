//! Factorization over `F_q`: squarefree decomposition, distinct-degree
//! splitting with a Frobenius matrix, then Cantor-Zassenhaus.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::ops::{with_ops, FieldOps};
use crate::gf::{FieldCtx, FqElem};

use super::{kernel, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub input: Poly,
    pub unit: FqElem,
    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// coefficients.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Factor degrees in ascending order, repeated by multiplicity.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m as usize))
            .collect();
        d.sort_unstable();
        d
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// `unit * prod f_i^{e_i}`.
    pub fn product(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (p, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({p}, {m})")?;
        }
        f.write_str("]")
    }
}

/// Complete factorization. The seed drives Cantor-Zassenhaus only; the
/// output is sorted, so it does not depend on the seed.
pub fn factor(f: &Poly, rng_seed: u64) -> Result<Factorization> {
    match f.degree() {
        None | Some(0) => return Err(Error::DegreeZero),
        _ => {}
    }
    let ctx = f.ctx().clone();
    let unit = f.lead();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let raw = with_ops!(ctx, |o| factor_monic(&o, &ctx, monic.coeffs(), &mut rng));
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (c, m) in raw {
        let p = Poly::from_raw(&ctx, c);
        match factors.iter_mut().find(|(g, _)| *g == p) {
            Some(e) => e.1 += m,
            None => factors.push((p, m)),
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization {
        input: f.clone(),
        unit,
        factors,
    })
}

fn factor_monic<F: FieldOps>(
    o: &F,
    ctx: &FieldCtx,
    f: &[u64],
    rng: &mut ChaCha8Rng,
) -> Vec<(Vec<u64>, u32)> {
    let mut out = Vec::new();
    for (sf, mult) in squarefree(o, ctx, f) {
        for (part, j) in ddf(o, ctx.q(), &sf) {
            for g in edf(o, ctx, &part, j, rng) {
                out.push((g, mult));
            }
        }
    }
    out
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with `g`
/// squarefree monic, the product of `g^m` being `f`.
fn squarefree<F: FieldOps>(o: &F, ctx: &FieldCtx, f: &[u64]) -> Vec<(Vec<u64>, u32)> {
    let p = ctx.p();
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = kernel::derivative(o, f, p);
    if df.is_empty() {
        // f(x) = h(x^p): take p-th roots of the coefficients.
        for (g, m) in squarefree(o, ctx, &pth_root(ctx, f)) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = kernel::gcd(o, f, &df);
    let mut w = kernel::divrem(o, f, &c).0;
    let mut i = 1u32;
    while w.len() > 1 {
        let y = kernel::gcd(o, &w, &c);
        let fac = kernel::divrem(o, &w, &y).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        w = y;
        c = kernel::divrem(o, &c, &w).0;
        i += 1;
    }
    if c.len() > 1 {
        for (g, m) in squarefree(o, ctx, &pth_root(ctx, &c)) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// `h` with `h(x)^p = f(x)`, for `f` a polynomial in `x^p`.
fn pth_root(ctx: &FieldCtx, f: &[u64]) -> Vec<u64> {
    let p = ctx.p() as usize;
    let k = ctx.k() as u64;
    f.iter()
        .step_by(p)
        .map(|&c| ctx.frob(c, k - 1))
        .collect()
}

/// Distinct-degree factorization of a squarefree monic `f`: pairs
/// `(product of all irreducible factors of degree j, j)`.
fn ddf<F: FieldOps>(o: &F, q: u64, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = [0u64, 1];
    let mut mat_n = f.len() - 1;
    let mut rows = Vec::new();
    let mut h = x.to_vec();
    let mut j = 0usize;
    while 2 * (j + 1) < f.len() {
        j += 1;
        if rows.is_empty() {
            mat_n = f.len() - 1;
            rows = kernel::frobenius_matrix(o, q, &f);
            kernel::rem_in_place(o, &mut h, &f);
        }
        h = kernel::apply_frobenius(o, &rows, mat_n, &h);
        let mut hr = h.clone();
        kernel::rem_in_place(o, &mut hr, &f);
        let d = kernel::sub(o, &hr, &x);
        let g = kernel::gcd(o, &d, &f);
        if g.len() > 1 {
            f = kernel::divrem(o, &f, &g).0;
            out.push((g, j));
            if (f.len() - 1) * 4 < mat_n * 3 {
                rows.clear();
            }
        }
    }
    if f.len() > 1 {
        let d = f.len() - 1;
        out.push((f, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of
/// degree `j`.
fn edf<F: FieldOps>(
    o: &F,
    ctx: &FieldCtx,
    f: &[u64],
    j: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == j {
        return vec![f.to_vec()];
    }
    let q = ctx.q();
    loop {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let mut a = a;
        kernel::trim(&mut a);
        if a.len() <= 1 {
            continue;
        }
        let b = if ctx.p() == 2 {
            // trace map sum_{i < k j} a^{2^i}
            let steps = ctx.k() as usize * j;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                t = kernel::mulmod(o, &t, &t, f);
                acc = kernel::add(o, &acc, &t);
            }
            acc
        } else {
            // a^{(q^j - 1)/2} = (a^{1 + q + ... + q^{j-1}})^{(q-1)/2}
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..j {
                t = kernel::pow_q(o, &t, q, f);
                norm = kernel::mulmod(o, &norm, &t, f);
            }
            let e = kernel::powmod(o, &norm, ((q - 1) / 2) as u128, f);
            kernel::sub(o, &e, &[1])
        };
        let g = kernel::gcd(o, &b, f);
        if g.len() > 1 && g.len() < f.len() {
            let h = kernel::divrem(o, f, &g).0;
            let mut out = edf(o, ctx, &g, j, rng);
            out.extend(edf(o, ctx, &h, j, rng));
            return out;
        }
    }
}

/// Roots of `f` lying in `ctx`, sorted by encoding. The coefficient field
/// of `f` must be a subfield of `ctx`.
pub fn roots_in_field(f: &Poly, ctx: &FieldCtx) -> Result<Vec<FqElem>> {
    match f.degree() {
        None | Some(0) => return Err(Error::DegreeZero),
        _ => {}
    }
    if f.ctx().p() != ctx.p() {
        return Err(Error::MixedCharacteristic);
    }
    let f = f.embed(ctx)?.monic();
    let q = ctx.q();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut roots: Vec<u64> = with_ops!(ctx, |o| {
        let fc = f.coeffs();
        let xq = kernel::pow_q(&o, &[0, 1], q, fc);
        let d = kernel::sub(&o, &xq, &[0, 1]);
        let g = kernel::gcd(&o, &d, fc);
        if g.len() <= 1 {
            Vec::new()
        } else {
            edf(&o, ctx, &g, 1, &mut rng)
                .into_iter()
                .map(|lin| o.neg(lin[0]))
                .collect()
        }
    });
    roots.sort_unstable();
    Ok(roots.into_iter().map(|v| ctx.raw(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_extension;

    #[test]
    fn examples() {
        let f2 = make_extension(2, 1).unwrap();
        let f = Poly::new(&f2, vec![1, 1, 0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(factor(&f, 1).unwrap().degrees(), [1, 3, 5]);
        let sq = Poly::new(&f2, vec![1, 0, 1]).unwrap();
        let fac = factor(&sq, 1).unwrap();
        assert_eq!(fac.to_string(), "[([1,1], 2)]");
        let f9 = make_extension(3, 2).unwrap();
        let f3 = make_extension(3, 1).unwrap();
        let e = Poly::new(&f3, vec![1, 0, 1]).unwrap();
        assert!(roots_in_field(&e, &f3).unwrap().is_empty());
        let r: Vec<u64> = roots_in_field(&e, &f9)
            .unwrap()
            .iter()
            .map(FqElem::value)
            .collect();
        assert_eq!(r, [3, 6]);
    }
}
