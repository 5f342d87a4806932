//! Orbits of `r -> F(r) + λ` in the residue ring `F_q[λ]/(g)`.
//!
//! For irreducible `g` the ring is the field `F_{q^m}` and `λ` becomes a
//! root of `g`, so a hit `r_n = β` means every root of `g` sends `α` to `β`
//! in `n` steps.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::ops::{with_ops, FieldOps};
use crate::gf::{FieldCtx, FqElem};
use crate::poly::{kernel, Poly};

/// States kept in the seen-set before switching to Brent's method.
pub const HASH_CAP: usize = 1 << 16;

/// Default ceiling on iterations, applied on top of the state count.
pub const DEFAULT_STEP_LIMIT: u64 = 10_000_000;

/// The map `z -> F(z) + λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `F(z) = z^d`.
    Pure(u64),
    /// `F(z) = g0(z)`, coefficients over the field of the points.
    Custom(Poly),
}

impl FamilySpec {
    pub fn pure(d: u64) -> Result<FamilySpec> {
        if d < 2 {
            return Err(Error::Config(format!("exponent d = {d} must be at least 2")));
        }
        Ok(FamilySpec::Pure(d))
    }

    pub fn custom(g0: Poly) -> Result<FamilySpec> {
        match g0.degree() {
            Some(d) if d >= 2 => Ok(FamilySpec::Custom(g0)),
            _ => Err(Error::Config("family polynomial needs degree >= 2".into())),
        }
    }

    pub fn degree(&self) -> u64 {
        match self {
            FamilySpec::Pure(d) => *d,
            FamilySpec::Custom(g) => g.degree().unwrap_or(0) as u64,
        }
    }

    /// `F(z) + λ` evaluated in a field that contains the family's
    /// coefficients.
    pub fn apply(&self, z: &FqElem, lambda: &FqElem) -> Result<FqElem> {
        let fz = match self {
            FamilySpec::Pure(d) => z.pow(*d),
            FamilySpec::Custom(g) => g.embed(z.ctx())?.eval(z)?,
        };
        fz.try_add(lambda)
    }

    fn check_field(&self, ctx: &FieldCtx) -> Result<()> {
        match self {
            FamilySpec::Custom(g) if g.ctx() != ctx => Err(Error::MixedFields),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Pure(d) => write!(f, "z^{d}"),
            FamilySpec::Custom(g) => write!(f, "{g}"),
        }
    }
}

/// Minimal `(i, n)`, `i < n`, with `f^i(α) = f^n(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Portrait {
    pub preperiod: u64,
    pub n: u64,
}

impl Portrait {
    pub fn period(&self) -> u64 {
        self.n - self.preperiod
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitOutcome {
    Hit(u64),
    Cycle(Portrait),
    Inconclusive(u64),
}

impl OrbitOutcome {
    pub fn is_hit(&self) -> bool {
        matches!(self, OrbitOutcome::Hit(_))
    }
}

impl fmt::Display for OrbitOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitOutcome::Hit(n) => write!(f, "H{n}"),
            OrbitOutcome::Cycle(p) => write!(f, "C{},{}", p.preperiod, p.n),
            OrbitOutcome::Inconclusive(s) => write!(f, "I{s}"),
        }
    }
}

impl std::str::FromStr for OrbitOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad outcome {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match s.get(..1) {
            Some("H") => Ok(OrbitOutcome::Hit(num(&s[1..])?)),
            Some("I") => Ok(OrbitOutcome::Inconclusive(num(&s[1..])?)),
            Some("C") => {
                let (i, n) = s[1..].split_once(',').ok_or_else(bad)?;
                Ok(OrbitOutcome::Cycle(Portrait {
                    preperiod: num(i)?,
                    n: num(n)?,
                }))
            }
            _ => Err(bad()),
        }
    }
}

/// `q^m` if it fits.
pub(crate) fn state_count(q: u64, m: usize) -> Option<u64> {
    q.checked_pow(m as u32)
}

/// Default step cap `min(q^m + 1, 10^7)`.
pub fn default_step_cap(q: u64, m: usize) -> u64 {
    match state_count(q, m) {
        Some(n) => n.saturating_add(1).min(DEFAULT_STEP_LIMIT),
        None => DEFAULT_STEP_LIMIT,
    }
}

fn pow_mod_u64(b: u64, e: u64, m: u64) -> u64 {
    let (mut acc, mut b, mut e) = (1u128 % m as u128, b as u128 % m as u128, e);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Iteration engine for one modulus `g` over one field backend.
pub(crate) struct Engine<F: FieldOps> {
    o: F,
    m: usize,
    /// Rows `λ^{m+j} mod g`, `j < m-1`.
    red: Vec<u64>,
    /// Rows `λ^{p i} mod g`, `i < m`; present when the family uses them.
    frob: Vec<u64>,
    step_kind: StepKind,
    lambda: Vec<u64>,
    perm: bool,
    t: Vec<u64>,
    u: Vec<u64>,
    v: Vec<u64>,
}

enum StepKind {
    /// `z^{s p^r}`.
    Pure { s: u64, r: u32 },
    /// Horner over the coefficients of `g0`, top first.
    Custom(Vec<u64>),
}

/// `out = a * b mod g`, with `t` scratch of length `2m - 1`.
#[inline]
fn mulmod<F: FieldOps>(
    o: &F,
    m: usize,
    red: &[u64],
    t: &mut [u64],
    a: &[u64],
    b: &[u64],
    out: &mut [u64],
) {
    o.conv(a, b, t);
    if m > 1 {
        let (lo, hi) = t.split_at(m);
        o.mat_vec(hi, red, m, out);
        for (x, &l) in out.iter_mut().zip(lo) {
            *x = o.add(*x, l);
        }
    } else {
        out[0] = t[0];
    }
}

impl<F: FieldOps> Engine<F> {
    /// `g` monic of degree `m >= 1`.
    pub(crate) fn new(o: F, ctx: &FieldCtx, g: &[u64], family: &FamilySpec) -> Engine<F> {
        let m = g.len() - 1;
        let p = ctx.p();
        let q = ctx.q();
        let mut red = vec![0u64; m.saturating_sub(1) * m];
        let mut cur: Vec<u64> = vec![0u64; m];
        cur.push(1);
        kernel::rem_in_place(&o, &mut cur, g);
        for j in 0..m.saturating_sub(1) {
            red[j * m..j * m + cur.len()].copy_from_slice(&cur);
            let mut nx = vec![0u64];
            nx.extend_from_slice(&cur);
            kernel::rem_in_place(&o, &mut nx, g);
            cur = nx;
        }
        let (step_kind, perm) = match family {
            FamilySpec::Pure(d) => {
                let (mut s, mut r) = (*d, 0u32);
                while s % p == 0 {
                    s /= p;
                    r += 1;
                }
                let qm_minus_1 = (pow_mod_u64(q, m as u64, *d) + *d - 1) % *d;
                (StepKind::Pure { s, r }, gcd_u64(*d, qm_minus_1) == 1)
            }
            FamilySpec::Custom(g0) => {
                (StepKind::Custom(g0.coeffs().iter().rev().copied().collect()), false)
            }
        };
        let mut frob = Vec::new();
        if matches!(step_kind, StepKind::Pure { r, .. } if r > 0) {
            frob = vec![0u64; m * m];
            for i in 0..m {
                let mut e = vec![0u64; i * p as usize + 1];
                e[i * p as usize] = 1;
                kernel::rem_in_place(&o, &mut e, g);
                frob[i * m..i * m + e.len()].copy_from_slice(&e);
            }
        }
        let mut lambda = vec![0u64, 1];
        kernel::rem_in_place(&o, &mut lambda, g);
        lambda.resize(m, 0);
        Engine {
            o,
            m,
            red,
            frob,
            step_kind,
            lambda,
            perm,
            t: vec![0u64; 2 * m],
            u: vec![0u64; m],
            v: vec![0u64; m],
        }
    }

    /// One application of `r -> F(r) + λ`, in place.
    pub(crate) fn step(&mut self, r: &mut [u64]) {
        let Engine {
            o,
            m,
            red,
            frob,
            step_kind,
            lambda,
            t,
            u,
            v,
            ..
        } = self;
        let (o, m) = (&*o, *m);
        let t = &mut t[..2 * m - 1];
        match step_kind {
            StepKind::Pure { s, r: fr } => {
                // u = r^s by left-to-right square-and-multiply
                u.copy_from_slice(r);
                let s = *s;
                let top = 63 - s.leading_zeros();
                for bit in (0..top).rev() {
                    mulmod(o, m, red, t, u, u, v);
                    if s >> bit & 1 == 1 {
                        mulmod(o, m, red, t, v, r, u);
                    } else {
                        std::mem::swap(u, v);
                    }
                }
                for _ in 0..*fr {
                    for (x, &y) in t.iter_mut().zip(u.iter()) {
                        *x = o.frob(y);
                    }
                    o.mat_vec(&t[..m], frob, m, v);
                    std::mem::swap(u, v);
                }
            }
            StepKind::Custom(coeffs) => {
                u.iter_mut().for_each(|x| *x = 0);
                u[0] = coeffs[0];
                for &c in &coeffs[1..] {
                    mulmod(o, m, red, t, u, r, v);
                    v[0] = o.add(v[0], c);
                    std::mem::swap(u, v);
                }
            }
        }
        for ((x, &a), &l) in r.iter_mut().zip(u.iter()).zip(lambda.iter()) {
            *x = o.add(a, l);
        }
    }

    fn key(r: &[u64], q: u64) -> u64 {
        r.iter().rev().fold(0u64, |acc, &c| acc * q + c)
    }

    /// Orbit of the constant `alpha` against the constant `beta`.
    pub(crate) fn run(&mut self, q: u64, alpha: u64, beta: u64, step_cap: u64) -> OrbitOutcome {
        let m = self.m;
        let mut a = vec![0u64; m];
        a[0] = alpha;
        let mut b = vec![0u64; m];
        b[0] = beta;
        let states = state_count(q, m);
        let limit = match states {
            Some(n) if step_cap > n => u64::MAX,
            _ => step_cap,
        };
        let mut cur = a.clone();
        if self.perm {
            let mut n = 0u64;
            while n < limit {
                self.step(&mut cur);
                n += 1;
                if cur == b {
                    return OrbitOutcome::Hit(n);
                }
                if cur == a {
                    return OrbitOutcome::Cycle(Portrait { preperiod: 0, n });
                }
            }
            return OrbitOutcome::Inconclusive(limit);
        }
        let mut n = 0u64;
        if states.is_some() {
            let mut seen: FxHashMap<u64, u64> = FxHashMap::default();
            seen.insert(Self::key(&a, q), 0);
            while n < limit {
                self.step(&mut cur);
                n += 1;
                if cur == b {
                    return OrbitOutcome::Hit(n);
                }
                let k = Self::key(&cur, q);
                if let Some(&i) = seen.get(&k) {
                    return OrbitOutcome::Cycle(Portrait { preperiod: i, n });
                }
                if seen.len() >= HASH_CAP {
                    break;
                }
                seen.insert(k, n);
            }
            if n >= limit {
                return OrbitOutcome::Inconclusive(limit);
            }
        }
        self.brent(&a, &b, cur, n, limit)
    }

    /// Brent's cycle search from `x0 = r_{n0}`, checking every new state
    /// against `b`; the preperiod is then recovered from `a` by replay.
    fn brent(&mut self, a: &[u64], b: &[u64], x0: Vec<u64>, n0: u64, limit: u64) -> OrbitOutcome {
        let mut tort = x0.clone();
        let mut hare = x0;
        let mut idx = n0;
        let (mut power, mut lam) = (1u64, 0u64);
        loop {
            if idx >= limit {
                return OrbitOutcome::Inconclusive(limit);
            }
            self.step(&mut hare);
            idx += 1;
            lam += 1;
            if hare == b {
                return OrbitOutcome::Hit(idx);
            }
            if hare == tort {
                break;
            }
            if power == lam {
                tort.copy_from_slice(&hare);
                power *= 2;
                lam = 0;
            }
        }
        let mut x = a.to_vec();
        let mut y = a.to_vec();
        for _ in 0..lam {
            self.step(&mut y);
        }
        let mut mu = 0u64;
        while x != y {
            self.step(&mut x);
            self.step(&mut y);
            mu += 1;
        }
        OrbitOutcome::Cycle(Portrait {
            preperiod: mu,
            n: mu + lam,
        })
    }
}

fn check_inputs(
    ctx: &FieldCtx,
    g: &Poly,
    family: &FamilySpec,
    alpha: &FqElem,
    beta: &FqElem,
) -> Result<()> {
    if g.ctx() != ctx || alpha.ctx() != ctx || beta.ctx() != ctx {
        return Err(Error::MixedFields);
    }
    family.check_field(ctx)?;
    match g.degree() {
        None | Some(0) => Err(Error::DegreeZero),
        _ => Ok(()),
    }
}

/// Iterate `r_0 = α`, `r_j = F(r_{j-1}) + λ` modulo `g` until `r_n = β`
/// (`n >= 1`), a repeated state, or `step_cap` steps. `None` selects the
/// default cap. A cap above the number of residues never gives up.
pub fn orbit_search(
    ctx: &FieldCtx,
    g: &Poly,
    family: &FamilySpec,
    alpha: &FqElem,
    beta: &FqElem,
    step_cap: Option<u64>,
) -> Result<OrbitOutcome> {
    check_inputs(ctx, g, family, alpha, beta)?;
    let g = g.monic();
    let m = g.degree().unwrap();
    let cap = step_cap.unwrap_or_else(|| default_step_cap(ctx.q(), m));
    let q = ctx.q();
    Ok(with_ops!(ctx, |o| {
        Engine::new(o, ctx, g.coeffs(), family).run(q, alpha.value(), beta.value(), cap)
    }))
}

/// [`orbit_search`] after confirming that `g` is irreducible.
pub fn orbit_search_checked(
    ctx: &FieldCtx,
    g: &Poly,
    family: &FamilySpec,
    alpha: &FqElem,
    beta: &FqElem,
    step_cap: Option<u64>,
) -> Result<OrbitOutcome> {
    check_inputs(ctx, g, family, alpha, beta)?;
    if !crate::poly::irreducible_test(g)? {
        return Err(Error::NotIrreducible);
    }
    orbit_search(ctx, g, family, alpha, beta, step_cap)
}

/// The residues `r_0, ..., r_n` modulo `g`.
pub fn orbit_residues(
    ctx: &FieldCtx,
    g: &Poly,
    family: &FamilySpec,
    alpha: &FqElem,
    n: usize,
) -> Result<Vec<Poly>> {
    check_inputs(ctx, g, family, alpha, alpha)?;
    let g = g.monic();
    let m = g.degree().unwrap();
    Ok(with_ops!(ctx, |o| {
        let mut eng = Engine::new(o, ctx, g.coeffs(), family);
        let mut cur = vec![0u64; m];
        cur[0] = alpha.value();
        let mut out = vec![Poly::from_raw(ctx, cur.clone())];
        for _ in 0..n {
            eng.step(&mut cur);
            out.push(Poly::from_raw(ctx, cur.clone()));
        }
        out
    }))
}

/// Portrait of `α` under `z -> F(z) + λ0` inside the field of `λ0`.
pub fn portrait_of(
    ctx_big: &FieldCtx,
    lambda0: &FqElem,
    family: &FamilySpec,
    alpha: &FqElem,
) -> Result<Portrait> {
    if lambda0.ctx() != ctx_big || alpha.ctx() != ctx_big {
        return Err(Error::MixedFields);
    }
    let f = |z: &FqElem| family.apply(z, lambda0);
    let mut tort = alpha.clone();
    let mut hare = f(alpha)?;
    let (mut power, mut lam) = (1u64, 1u64);
    while tort != hare {
        if power == lam {
            tort = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = f(&hare)?;
        lam += 1;
    }
    let mut x = alpha.clone();
    let mut y = alpha.clone();
    for _ in 0..lam {
        y = f(&y)?;
    }
    let mut mu = 0;
    while x != y {
        x = f(&x)?;
        y = f(&y)?;
        mu += 1;
    }
    Ok(Portrait {
        preperiod: mu,
        n: mu + lam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_extension;

    #[test]
    fn f2_examples() {
        let f2 = make_extension(2, 1).unwrap();
        let fam = FamilySpec::pure(3).unwrap();
        let (z, o) = (f2.zero(), f2.one());
        let g = |c: &[u64]| Poly::new(&f2, c.to_vec()).unwrap();
        let run = |gp: &Poly| orbit_search(&f2, gp, &fam, &z, &o, None).unwrap();
        assert_eq!(run(&g(&[1, 1])), OrbitOutcome::Hit(1));
        assert_eq!(
            run(&g(&[0, 1])),
            OrbitOutcome::Cycle(Portrait { preperiod: 0, n: 1 })
        );
        assert_eq!(run(&g(&[1, 1, 0, 1])), OrbitOutcome::Hit(2));
    }

    #[test]
    fn portraits() {
        let f2 = make_extension(2, 1).unwrap();
        let f3 = make_extension(3, 1).unwrap();
        let fam3 = FamilySpec::pure(3).unwrap();
        let fam2 = FamilySpec::pure(2).unwrap();
        let pr = |ctx: &FieldCtx, l: u64, fam: &FamilySpec| {
            let p = portrait_of(ctx, &ctx.raw(l), fam, &ctx.zero()).unwrap();
            (p.preperiod, p.n)
        };
        assert_eq!(pr(&f2, 0, &fam3), (0, 1));
        assert_eq!(pr(&f2, 1, &fam3), (0, 2));
        assert_eq!(pr(&f3, 1, &fam2), (2, 3));
    }

    #[test]
    fn outcome_text() {
        for s in ["H3", "C2,5", "I100"] {
            assert_eq!(s.parse::<OrbitOutcome>().unwrap().to_string(), s);
        }
    }
}
