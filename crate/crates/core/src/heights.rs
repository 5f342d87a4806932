//! Heights on `F_q(t)` for `f_λ(z) = z^d + λ`, with `|γ|_v = e^{-ord_v γ}`
//! so every logarithm is an integer.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::gf::{make_extension, FieldCtx, FqElem};
use crate::poly::{factor, poly_gcd, roots_in_field, Poly};

/// Largest degree an iterate may reach before [`Error::BudgetExceeded`].
pub const HEIGHT_BUDGET: u64 = 1 << 20;

/// Reduced quotient `num/den` with `den` monic; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if num.ctx() != den.ctx() {
            return Err(Error::MixedFields);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero(num.ctx()));
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = poly_gcd(&num, &den)?;
            if g.is_one() {
                (num, den)
            } else {
                (num.divrem(&g)?.0, den.divrem(&g)?.0)
            }
        };
        let lead = den.lead().inv()?;
        Ok(RationalFunction {
            num: num.scale(&lead)?,
            den: den.scale(&lead)?,
        })
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let den = Poly::one(p.ctx());
        RationalFunction { num: p, den }
    }

    pub fn constant(c: &FqElem) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn zero(ctx: &FieldCtx) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero(ctx))
    }

    /// The variable `t`.
    pub fn t(ctx: &FieldCtx) -> RationalFunction {
        RationalFunction::from_poly(Poly::x(ctx))
    }

    /// `N` or `N/D` with each side in polynomial text form.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<RationalFunction> {
        match s.split_once('/') {
            Some((n, d)) => RationalFunction::new(Poly::parse(ctx, n.trim())?, Poly::parse(ctx, d.trim())?),
            None => Ok(RationalFunction::from_poly(Poly::parse(ctx, s.trim())?)),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn try_add(&self, o: &RationalFunction) -> Result<RationalFunction> {
        if self.is_polynomial() && o.is_polynomial() {
            return Ok(RationalFunction::from_poly(self.num.try_add(&o.num)?));
        }
        let num = self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?;
        RationalFunction::new(num, self.den.try_mul(&o.den)?)
    }

    pub fn try_sub(&self, o: &RationalFunction) -> Result<RationalFunction> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_div(&self, o: &RationalFunction) -> Result<RationalFunction> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.num.try_mul(&o.den)?, self.den.try_mul(&o.num)?)
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// `self^e`; numerator and denominator stay coprime.
    pub fn pow(&self, e: u64) -> RationalFunction {
        RationalFunction {
            num: poly_pow(&self.num, e),
            den: poly_pow(&self.den, e),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn poly_pow(p: &Poly, mut e: u64) -> Poly {
    let mut acc = Poly::one(p.ctx());
    let mut base = p.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `z^d + λ`.
pub fn apply(z: &RationalFunction, lambda: &RationalFunction, d: u64) -> Result<RationalFunction> {
    z.pow(d).try_add(lambda)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// The zero of `t - c`, with `c` in some extension of the coefficient field.
    Finite(FqElem),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(c) => write!(f, "t={}@{}", c.value(), c.ctx()),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// `max(deg num, deg den)`.
pub fn weil_height(g: &RationalFunction) -> u64 {
    g.num.degree().unwrap_or(0).max(g.den.degree().unwrap_or(0)) as u64
}

fn ord_at(p: &Poly, c: &FqElem) -> Result<i64> {
    let p = p.embed(c.ctx())?;
    let lin = Poly::from_elems(c.ctx(), &[-c, c.ctx().one()])?;
    let mut cur = p;
    let mut n = 0;
    loop {
        let (q, r) = cur.divrem(&lin)?;
        if !r.is_zero() {
            return Ok(n);
        }
        cur = q;
        n += 1;
    }
}

/// `log|γ|_v`: `ord_c(den) - ord_c(num)` at a finite place, `deg num - deg den`
/// at infinity.
pub fn local_log_abs(g: &RationalFunction, v: &Place) -> Result<i64> {
    if g.is_zero() {
        return Err(Error::ZeroInput);
    }
    match v {
        Place::Infinity => Ok(g.num.degree().unwrap() as i64 - g.den.degree().unwrap() as i64),
        Place::Finite(c) => Ok(ord_at(&g.den, c)? - ord_at(&g.num, c)?),
    }
}

/// The finite places where some polynomial in `polys` vanishes, each root
/// taken in the smallest extension containing it.
pub fn places_of(polys: &[&Poly]) -> Result<Vec<Place>> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let ctx = first.ctx();
    let mut prod = Poly::one(ctx);
    for p in polys {
        if !p.is_zero() {
            prod = prod.try_mul(p)?;
        }
    }
    if prod.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (g, _) in factor(&prod, 0)?.factors {
        let e = g.degree().unwrap() as u32;
        let big = make_extension(ctx.p(), ctx.k() * e)?;
        out.extend(roots_in_field(&g, &big)?.into_iter().map(Place::Finite));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalStatus {
    Exact,
    /// No case of the escape trichotomy applied within the iteration limit.
    AssumedZero,
}

fn log_abs_or_neg_inf(g: &RationalFunction, v: &Place) -> Result<Option<i64>> {
    if g.is_zero() {
        Ok(None)
    } else {
        local_log_abs(g, v).map(Some)
    }
}

/// `ĥ_{λ,v}(α)` by locating the first iterate where one of the three cases
/// `|γ|, |λ| <= 1`; `|γ|^d > max(1, |λ|)`; `|λ| > max(1, |γ|^d)` holds.
pub fn local_canonical_height(
    alpha: &RationalFunction,
    lambda: &RationalFunction,
    d: u64,
    v: &Place,
    max_iter: u32,
) -> Result<(Rational64, LocalStatus)> {
    if max_iter == 0 {
        return Err(Error::Config("max_iter must be at least 1".into()));
    }
    let dl = d as i64;
    let l = log_abs_or_neg_inf(lambda, v)?;
    let mut z = alpha.clone();
    let mut scale = 1i64;
    for j in 0..max_iter {
        let a = log_abs_or_neg_inf(&z, v)?;
        let la = l.unwrap_or(i64::MIN);
        let da = a.map_or(i64::MIN, |a| a * dl);
        if a.is_none_or(|a| a <= 0) && la <= 0 {
            return Ok((Rational64::from_integer(0), LocalStatus::Exact));
        }
        if da > la.max(0) {
            return Ok((Rational64::new(a.unwrap(), scale), LocalStatus::Exact));
        }
        if la > da.max(0) {
            return Ok((Rational64::new(la, dl * scale), LocalStatus::Exact));
        }
        if j + 1 < max_iter {
            z = apply(&z, lambda, d)?;
            scale = scale.checked_mul(dl).ok_or(Error::TooLarge {
                p: d,
                k: j + 1,
            })?;
        }
    }
    Ok((Rational64::from_integer(0), LocalStatus::AssumedZero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalHeight {
    pub place: Place,
    pub value: Rational64,
    pub status: LocalStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub alpha: RationalFunction,
    pub lambda: RationalFunction,
    pub d: u64,
    /// `h(f^n(α))` for `n = 0, 1, ...`, stopping once the estimate is exact.
    pub heights: Vec<u64>,
    pub hhat: Rational64,
    pub exact: bool,
    /// Infinity and the poles of `α` and `λ`; every other place contributes 0.
    pub local: Vec<LocalHeight>,
}

impl HeightReport {
    /// Sum of the local heights when all of them are exact.
    pub fn local_sum(&self) -> Option<Rational64> {
        if self.local.iter().all(|l| l.status == LocalStatus::Exact) {
            Some(self.local.iter().map(|l| l.value).sum())
        } else {
            None
        }
    }
}

pub const DEFAULT_N_MAX: u32 = 8;
const LOCAL_ITER: u32 = 12;
/// Iterates past the point of exactness are only computed up to this degree.
const TAIL_BUDGET: u64 = 4096;

fn pow_i64(d: u64, n: usize) -> Result<i64> {
    (d as i64).checked_pow(n as u32).ok_or(Error::TooLarge { p: d, k: n as u32 })
}

/// `ĥ_λ(α) = lim h(f^n(α))/d^n`. Exact once `h` is multiplied by `d` at two
/// consecutive steps, or once the orbit repeats (then `ĥ = 0`).
pub fn canonical_height_estimate(
    alpha: &RationalFunction,
    lambda: &RationalFunction,
    d: u64,
    n_max: u32,
) -> Result<HeightReport> {
    if alpha.ctx() != lambda.ctx() {
        return Err(Error::MixedFields);
    }
    if d < 2 {
        return Err(Error::Config("degree d must be at least 2".into()));
    }
    let mut orbit = vec![alpha.clone()];
    let mut heights = vec![weil_height(alpha)];
    // (index n, ĥ) once settled.
    let mut settled: Option<Rational64> = None;
    for n in 0..n_max as usize {
        let needed = heights[n] as u128 * d as u128 + weil_height(lambda) as u128;
        if settled.is_some() && needed > TAIL_BUDGET as u128 {
            break;
        }
        if needed > HEIGHT_BUDGET as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: HEIGHT_BUDGET,
            });
        }
        let next = apply(&orbit[n], lambda, d)?;
        heights.push(weil_height(&next));
        if settled.is_none() {
            if orbit.contains(&next) {
                settled = Some(Rational64::from_integer(0));
            } else if n >= 1 && heights[n] == d * heights[n - 1] && heights[n + 1] == d * heights[n] {
                settled = Some(Rational64::new(heights[n - 1] as i64, pow_i64(d, n - 1)?));
            }
        }
        orbit.push(next);
    }
    let exact = settled.is_some();
    let hhat = match settled {
        Some(h) => h,
        None => {
            let n = heights.len() - 1;
            Rational64::new(heights[n] as i64, pow_i64(d, n)?)
        }
    };
    let mut places = vec![Place::Infinity];
    places.extend(places_of(&[alpha.den(), lambda.den()])?);
    let local = places
        .into_iter()
        .map(|place| {
            let (value, status) = local_canonical_height(alpha, lambda, d, &place, LOCAL_ITER)?;
            Ok(LocalHeight {
                place,
                value,
                status,
            })
        })
        .collect::<Result<_>>()?;
    Ok(HeightReport {
        alpha: alpha.clone(),
        lambda: lambda.clone(),
        d,
        heights,
        hhat,
        exact,
        local,
    })
}

/// Both sides of `h(λ)/d - h(α) <= ĥ_λ(α) <= h(λ)/d + h(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub hhat: Rational64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

pub fn variation_bounds(alpha: &RationalFunction, lambda: &RationalFunction, d: u64) -> Result<BoundCheck> {
    let rep = canonical_height_estimate(alpha, lambda, d, DEFAULT_N_MAX)?;
    if !rep.exact {
        return Err(Error::InexactEstimate);
    }
    let hl = Rational64::new(weil_height(lambda) as i64, d as i64);
    let ha = Rational64::from_integer(weil_height(alpha) as i64);
    Ok(BoundCheck {
        hhat: rep.hhat,
        lower_ok: hl - ha <= rep.hhat,
        upper_ok: rep.hhat <= hl + ha,
    })
}

pub fn check_variation_bounds(alpha: &RationalFunction, lambda: &RationalFunction, d: u64) -> Result<bool> {
    variation_bounds(alpha, lambda, d).map(|b| b.holds())
}

/// `ĥ_λ(α) <= (2h(α) + 2h(β))/d^m` for a verified `f^m(α) = β`.
pub fn check_collision_bound(
    alpha: &RationalFunction,
    beta: &RationalFunction,
    lambda: &RationalFunction,
    d: u64,
    m: u32,
) -> Result<bool> {
    let mut z = alpha.clone();
    for _ in 0..m {
        z = apply(&z, lambda, d)?;
    }
    if z != *beta {
        return Err(Error::NotACollision);
    }
    let rep = canonical_height_estimate(alpha, lambda, d, DEFAULT_N_MAX)?;
    if !rep.exact {
        return Err(Error::InexactEstimate);
    }
    let dm = (d as i64)
        .checked_pow(m)
        .ok_or(Error::TooLarge { p: d, k: m })?;
    let bound = Rational64::new(2 * weil_height(alpha) as i64 + 2 * weil_height(beta) as i64, dm);
    Ok(rep.hhat <= bound)
}
