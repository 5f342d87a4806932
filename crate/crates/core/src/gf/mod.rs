//! Finite fields `F_{p^k}` with `q = p^k < 2^64`.
//!
//! Elements are stored by their integer encoding `sum c_i p^i`, where
//! `c_0 + c_1 x + ...` is the representative modulo the defining
//! polynomial. The defining polynomial of `F_{p^k}` is the least monic
//! irreducible of degree `k` when its lower coefficients
//! `(c_{k-1}, ..., c_0)` are compared lexicographically.

mod digits;
pub(crate) mod ops;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use ops::{BinOps, GenericOps, Tables};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    P2,
    P3,
    P5,
    P7,
    Prime,
    Table,
    Binary,
    Generic,
}

pub(crate) struct FieldInner {
    pub(crate) p: u64,
    pub(crate) k: u32,
    pub(crate) q: u64,
    /// Base-`p` digits of the monic modulus, constant first (length `k+1`).
    pub(crate) modulus: Vec<u64>,
    pub(crate) kind: Kind,
    pub(crate) tables: Option<Tables>,
    /// Modulus as a bit vector, for `p = 2`.
    pub(crate) modbits: u64,
}

/// Handle to a finite field. Cheap to clone; compares by `(p, k, modulus)`.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({self})")
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p(), self.k())?;
        if self.k() > 1 {
            let m: Vec<String> = self.inner.modulus.iter().map(u64::to_string).collect();
            write!(f, "[{}]", m.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FieldCtx {
    type Err = Error;

    /// Parses `"p^k"` (default modulus) or `"p^k[m0,...,mk]"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, modulus) = match s.find('[') {
            Some(i) => (&s[..i], Some(parse_list(&s[i..])?)),
            None => (s, None),
        };
        let (p, k) = head
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("expected p^k, got {s:?}")))?;
        let p: u64 = p.trim().parse().map_err(|_| Error::Parse(p.into()))?;
        let k: u32 = k.trim().parse().map_err(|_| Error::Parse(k.into()))?;
        match modulus {
            Some(m) if k > 1 => {
                if m.len() != k as usize + 1 {
                    return Err(Error::Parse(format!("modulus must have {} entries", k + 1)));
                }
                make_extension_with_modulus(p, &m)
            }
            _ => make_extension(p, k),
        }
    }
}

/// Parses `"[a,b,c]"` into integers.
pub(crate) fn parse_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let body = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..], got {s:?}")))?;
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(t.into())))
        .collect()
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if p >= 1 << 31 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldCtx>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The prime field `F_p`.
pub fn make_prime_field(p: u64) -> Result<FieldCtx> {
    make_extension(p, 1)
}

/// `F_{p^k}` with the lexicographically least monic irreducible modulus.
pub fn make_extension(p: u64, k: u32) -> Result<FieldCtx> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::DegreeZero);
    }
    let q = p.checked_pow(k).ok_or(Error::TooLarge { p, k })?;
    if let Some(f) = field_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let ctx = if k == 1 {
        build(p, 1, vec![0, 1])
    } else {
        let base = make_extension(p, 1)?;
        let modulus = least_irreducible(&base, k as usize, q);
        build(p, k, modulus)
    };
    field_cache().lock().unwrap().insert((p, k), ctx.clone());
    Ok(ctx)
}

/// `F_{p^k}` defined by the given monic modulus (base-`p` digits, constant
/// first). Rejected unless irreducible.
pub fn make_extension_with_modulus(p: u64, modulus: &[u64]) -> Result<FieldCtx> {
    check_prime(p)?;
    if modulus.len() < 2 {
        return Err(Error::DegreeZero);
    }
    let k = (modulus.len() - 1) as u32;
    p.checked_pow(k).ok_or(Error::TooLarge { p, k })?;
    if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
        return Err(Error::NotIrreducible);
    }
    if k == 1 {
        return make_extension(p, 1);
    }
    let base = make_extension(p, 1)?;
    let f = Poly::new(&base, modulus.to_vec())?;
    if !poly::irreducible_test(&f)? {
        return Err(Error::NotIrreducible);
    }
    let std = make_extension(p, k)?;
    if std.inner.modulus == modulus {
        return Ok(std);
    }
    Ok(build(p, k, modulus.to_vec()))
}

fn least_irreducible(base: &FieldCtx, k: usize, q: u64) -> Vec<u64> {
    let p = base.p();
    let mut digits = vec![0u64; k + 1];
    digits[k] = 1;
    // Tails with c_0 = 0 are divisible by x; start at 1.
    for tail in 1..q {
        let mut t = tail;
        for d in digits.iter_mut().take(k) {
            *d = t % p;
            t /= p;
        }
        if digits[0] == 0 {
            continue;
        }
        let f = Poly::from_raw(base, digits.clone());
        if poly::irreducible_test(&f).unwrap_or(false) {
            return digits;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build(p: u64, k: u32, modulus: Vec<u64>) -> FieldCtx {
    let q = p.pow(k);
    let modbits = if p == 2 {
        modulus
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (c << i))
    } else {
        0
    };
    let mut inner = FieldInner {
        p,
        k,
        q,
        modulus,
        kind: Kind::Generic,
        tables: None,
        modbits,
    };
    inner.kind = if k == 1 {
        match p {
            2 => Kind::P2,
            3 => Kind::P3,
            5 => Kind::P5,
            7 => Kind::P7,
            _ => Kind::Prime,
        }
    } else if q <= 256 {
        let t = if p == 2 {
            Tables::build(BinOps { k, modbits }, q as usize, p)
        } else {
            Tables::build(GenericOps { f: &inner }, q as usize, p)
        };
        inner.tables = Some(t);
        Kind::Table
    } else if p == 2 {
        Kind::Binary
    } else {
        Kind::Generic
    };
    FieldCtx {
        inner: Arc::new(inner),
    }
}

impl FieldCtx {
    pub(crate) fn inner(&self) -> &FieldInner {
        &self.inner
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Modulus digits over `F_p`, constant first.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    pub fn elem(&self, v: u64) -> Result<FqElem> {
        if v >= self.q() {
            return Err(Error::BadElement(v));
        }
        Ok(FqElem {
            ctx: self.clone(),
            v,
        })
    }

    pub(crate) fn raw(&self, v: u64) -> FqElem {
        debug_assert!(v < self.q());
        FqElem {
            ctx: self.clone(),
            v,
        }
    }

    pub fn zero(&self) -> FqElem {
        self.raw(0)
    }

    pub fn one(&self) -> FqElem {
        self.raw(1)
    }

    /// The residue class of `x`; for `k = 1` this is 0.
    pub fn generator(&self) -> FqElem {
        if self.k() == 1 {
            self.zero()
        } else {
            self.raw(self.p())
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        self.raw(n.rem_euclid(self.p() as i64) as u64)
    }

    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        ops::with_ops!(self, |o| o.add(a, b))
    }
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        ops::with_ops!(self, |o| o.sub(a, b))
    }
    pub(crate) fn neg(&self, a: u64) -> u64 {
        ops::with_ops!(self, |o| o.neg(a))
    }
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        ops::with_ops!(self, |o| o.mul(a, b))
    }
    pub(crate) fn inv(&self, a: u64) -> u64 {
        ops::with_ops!(self, |o| o.inv(a))
    }
    pub(crate) fn pow(&self, a: u64, e: u64) -> u64 {
        ops::with_ops!(self, |o| o.pow(a, e))
    }
    pub(crate) fn pow_big(&self, a: u64, e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }
    /// `a^{p^j}`.
    pub(crate) fn frob(&self, a: u64, j: u64) -> u64 {
        let j = j % self.k() as u64;
        ops::with_ops!(self, |o| {
            let mut x = a;
            for _ in 0..j {
                x = o.frob(x);
            }
            x
        })
    }

    /// Base-`p` digits of an element.
    pub(crate) fn digits(&self, v: u64) -> Vec<u64> {
        let p = self.p();
        let mut v = v;
        (0..self.k())
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub(crate) fn from_digits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p() + c)
    }

    /// True when the encoding lies in the prime subfield.
    pub fn in_prime_field(&self, v: u64) -> bool {
        v < self.p()
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqElem {
    ctx: FieldCtx,
    v: u64,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.v, self.ctx)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Pow,
}

impl FqElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Integer encoding.
    pub fn value(&self) -> u64 {
        self.v
    }

    /// Coefficients in the power basis, constant first; always `k` long.
    pub fn coeffs(&self) -> Vec<u64> {
        self.ctx.digits(self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn same(&self, o: &FqElem) -> Result<()> {
        if self.ctx == o.ctx {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, o: &FqElem) -> Result<FqElem> {
        self.same(o)?;
        Ok(self.ctx.raw(self.ctx.add(self.v, o.v)))
    }

    pub fn try_sub(&self, o: &FqElem) -> Result<FqElem> {
        self.same(o)?;
        Ok(self.ctx.raw(self.ctx.sub(self.v, o.v)))
    }

    pub fn try_mul(&self, o: &FqElem) -> Result<FqElem> {
        self.same(o)?;
        Ok(self.ctx.raw(self.ctx.mul(self.v, o.v)))
    }

    pub fn try_div(&self, o: &FqElem) -> Result<FqElem> {
        self.same(o)?;
        Ok(self.ctx.raw(self.ctx.mul(self.v, o.inv()?.v)))
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.v == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.ctx.raw(self.ctx.inv(self.v)))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.ctx.raw(self.ctx.pow(self.v, e))
    }

    pub fn pow_big(&self, e: u128) -> FqElem {
        self.ctx.raw(self.ctx.pow_big(self.v, e))
    }
}

macro_rules! bin_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&FqElem> for &FqElem {
            type Output = FqElem;
            fn $m(self, o: &FqElem) -> FqElem {
                self.$f(o).expect("elements of different fields")
            }
        }
        impl std::ops::$tr for FqElem {
            type Output = FqElem;
            fn $m(self, o: FqElem) -> FqElem {
                (&self).$f(&o).expect("elements of different fields")
            }
        }
    };
}

bin_op!(Add, add, try_add);
bin_op!(Sub, sub, try_sub);
bin_op!(Mul, mul, try_mul);

impl std::ops::Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        self.ctx.raw(self.ctx.neg(self.v))
    }
}

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        -&self
    }
}

/// One arithmetic operation; `y` is ignored for `Inv`, and for `Pow` the
/// exponent is the integer encoding of `y`. Use [`FqElem::pow`] for
/// exponents larger than the field.
pub fn field_arith(x: &FqElem, y: &FqElem, op: FieldOp) -> Result<FqElem> {
    match op {
        FieldOp::Add => x.try_add(y),
        FieldOp::Sub => x.try_sub(y),
        FieldOp::Mul => x.try_mul(y),
        FieldOp::Div => x.try_div(y),
        FieldOp::Inv => x.inv(),
        FieldOp::Pow => Ok(x.pow(y.v)),
    }
}

/// `x^{p^j}`, one `p`-th power at a time.
pub fn frobenius(x: &FqElem, j: u64) -> FqElem {
    x.ctx.raw(x.ctx.frob(x.v, j))
}

/// Absolute trace `sum_{j<k} x^{p^j}`, as an element of `F_p`.
pub fn trace_to_prime(x: &FqElem) -> Result<FqElem> {
    let ctx = &x.ctx;
    let mut acc = 0u64;
    let mut y = x.v;
    for _ in 0..ctx.k() {
        acc = ctx.add(acc, y);
        y = ctx.frob(y, 1);
    }
    debug_assert!(acc < ctx.p());
    make_prime_field(ctx.p())?.elem(acc)
}

/// All elements in ascending encoding order.
pub fn enumerate_elements(ctx: &FieldCtx) -> impl Iterator<Item = FqElem> + '_ {
    (0..ctx.q()).map(move |v| ctx.raw(v))
}

fn embed_cache() -> &'static Mutex<HashMap<(FieldCtx, FieldCtx), u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(FieldCtx, FieldCtx), u64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Image of the generator of `from` in `to`: the least-encoded root of the
/// modulus of `from`.
fn generator_image(from: &FieldCtx, to: &FieldCtx) -> Result<u64> {
    let key = (from.clone(), to.clone());
    if let Some(&v) = embed_cache().lock().unwrap().get(&key) {
        return Ok(v);
    }
    let f = Poly::from_raw(to, from.modulus().to_vec());
    let roots = poly::roots_in_field(&f, to)?;
    let r = roots
        .first()
        .map(FqElem::value)
        .ok_or(Error::NotASubfield {
            from: from.k(),
            to: to.k(),
        })?;
    embed_cache().lock().unwrap().insert(key, r);
    Ok(r)
}

/// Field embedding `F_{p^a} -> F_{p^b}` for `a | b`. The prime subfield is
/// fixed; the generator goes to the least root of its minimal polynomial.
pub fn embed_subfield(x: &FqElem, target: &FieldCtx) -> Result<FqElem> {
    let src = &x.ctx;
    if src.p() != target.p() {
        return Err(Error::MixedCharacteristic);
    }
    if !target.k().is_multiple_of(src.k()) {
        return Err(Error::NotASubfield {
            from: src.k(),
            to: target.k(),
        });
    }
    if src == target || src.k() == 1 {
        return Ok(target.raw(x.v));
    }
    let g = generator_image(src, target)?;
    Ok(target.raw(embed_raw(src, target, g, x.v)))
}

/// Horner evaluation of the digit polynomial of `v` at `g` in `target`.
pub(crate) fn embed_raw(src: &FieldCtx, target: &FieldCtx, g: u64, v: u64) -> u64 {
    src.digits(v)
        .iter()
        .rev()
        .fold(0u64, |acc, &c| target.add(target.mul(acc, g), c))
}

/// Embedding as a lookup closure, for bulk conversions.
pub(crate) fn embedder(src: &FieldCtx, target: &FieldCtx) -> Result<impl Fn(u64) -> u64> {
    if src.p() != target.p() {
        return Err(Error::MixedCharacteristic);
    }
    if !target.k().is_multiple_of(src.k()) {
        return Err(Error::NotASubfield {
            from: src.k(),
            to: target.k(),
        });
    }
    let trivial = src == target || src.k() == 1;
    let g = if trivial {
        0
    } else {
        generator_image(src, target)?
    };
    let (s, t) = (src.clone(), target.clone());
    Ok(move |v: u64| if trivial { v } else { embed_raw(&s, &t, g, v) })
}

#[cfg(test)]
mod tests {
    use super::ops::FieldOps;
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(make_extension(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_extension(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_extension(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_extension(6, 1).unwrap_err(), Error::NotPrime(6));
        assert_eq!(make_extension(3, 0).unwrap_err(), Error::DegreeZero);
    }

    #[test]
    fn text_round_trip() {
        let f = make_extension(3, 2).unwrap();
        assert_eq!(f.to_string(), "3^2[1,0,1]");
        assert_eq!("3^2[1,0,1]".parse::<FieldCtx>().unwrap(), f);
        assert_eq!("5^1".parse::<FieldCtx>().unwrap().q(), 5);
    }

    #[test]
    fn backends_agree_with_digits() {
        // Every backend must agree with the reference digit arithmetic.
        for (p, k) in [(3u64, 2u32), (2, 3), (2, 9), (3, 5), (5, 3), (7, 3), (2, 20)] {
            let f = make_extension(p, k).unwrap();
            let inner = f.inner();
            let g = GenericOps { f: inner };
            let q = f.q();
            let step = (q / 97).max(1);
            let mut a = 0;
            while a < q {
                let mut b = 1;
                while b < q {
                    assert_eq!(f.mul(a, b), g.mul(a, b), "{p}^{k}: {a}*{b}");
                    assert_eq!(f.add(a, b), g.add(a, b));
                    assert_eq!(f.sub(a, b), g.sub(a, b));
                    b += step;
                }
                if a != 0 {
                    assert_eq!(f.inv(a), g.inv(a));
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                a += step;
            }
        }
    }
}
