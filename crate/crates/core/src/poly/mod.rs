//! Dense univariate polynomials over a [`FieldCtx`].

mod factor;
mod irreducible;
pub(crate) mod kernel;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{ops::with_ops, parse_list, FieldCtx, FqElem};

pub use factor::{factor, roots_in_field, Factorization};
pub use irreducible::{
    count_irreducibles, enumerate_irreducibles, irreducible_test, Irreducibles,
};
pub(crate) use irreducible::tail_to_coeffs;
pub use kernel::{karatsuba_threshold, set_karatsuba_threshold};

/// Polynomial with coefficients stored by integer encoding, constant term
/// first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: FieldCtx,
    c: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.ctx)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl Poly {
    /// Checked constructor; coefficients are integer encodings.
    pub fn new(ctx: &FieldCtx, coeffs: Vec<u64>) -> Result<Poly> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= ctx.q()) {
            return Err(Error::BadElement(bad));
        }
        Ok(Poly::from_raw(ctx, coeffs))
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, mut coeffs: Vec<u64>) -> Poly {
        kernel::trim(&mut coeffs);
        Poly {
            ctx: ctx.clone(),
            c: coeffs,
        }
    }

    pub fn from_elems(ctx: &FieldCtx, coeffs: &[FqElem]) -> Result<Poly> {
        if coeffs.iter().any(|e| e.ctx() != ctx) {
            return Err(Error::MixedFields);
        }
        Ok(Poly::from_raw(ctx, coeffs.iter().map(FqElem::value).collect()))
    }

    /// Parses the text form `"[e0,e1,...]"`.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Poly> {
        Poly::new(ctx, parse_list(s)?)
    }

    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly::from_raw(ctx, Vec::new())
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Poly::from_raw(ctx, vec![1])
    }

    /// The indeterminate.
    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly::from_raw(ctx, vec![0, 1])
    }

    pub fn constant(c: &FqElem) -> Poly {
        Poly::from_raw(c.ctx(), vec![c.value()])
    }

    /// `c * x^n`.
    pub fn monomial(c: &FqElem, n: usize) -> Poly {
        let mut v = vec![0u64; n + 1];
        v[n] = c.value();
        Poly::from_raw(c.ctx(), v)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Coefficient encodings, constant first.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub(crate) fn into_coeffs(self) -> Vec<u64> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.ctx.raw(self.c.get(i).copied().unwrap_or(0))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> FqElem {
        self.ctx.raw(self.c.last().copied().unwrap_or(0))
    }

    pub fn monic(&self) -> Poly {
        let mut c = self.c.clone();
        with_ops!(self.ctx, |o| kernel::make_monic(&o, &mut c));
        Poly::from_raw(&self.ctx, c)
    }

    fn same(&self, o: &Poly) -> Result<()> {
        if self.ctx == o.ctx {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, b: &Poly) -> Result<Poly> {
        self.same(b)?;
        let c = with_ops!(self.ctx, |o| kernel::add(&o, &self.c, &b.c));
        Ok(Poly::from_raw(&self.ctx, c))
    }

    pub fn try_sub(&self, b: &Poly) -> Result<Poly> {
        self.same(b)?;
        let c = with_ops!(self.ctx, |o| kernel::sub(&o, &self.c, &b.c));
        Ok(Poly::from_raw(&self.ctx, c))
    }

    /// Schoolbook below the Karatsuba threshold, Karatsuba above.
    pub fn try_mul(&self, b: &Poly) -> Result<Poly> {
        self.same(b)?;
        let c = with_ops!(self.ctx, |o| kernel::mul(&o, &self.c, &b.c));
        Ok(Poly::from_raw(&self.ctx, c))
    }

    pub fn scale(&self, c: &FqElem) -> Result<Poly> {
        if c.ctx() != &self.ctx {
            return Err(Error::MixedFields);
        }
        let v = with_ops!(self.ctx, |o| kernel::scale(&o, &self.c, c.value()));
        Ok(Poly::from_raw(&self.ctx, v))
    }

    /// `(quotient, remainder)` with `deg r < deg b`.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.same(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = with_ops!(self.ctx, |o| kernel::divrem(&o, &self.c, &b.c));
        Ok((Poly::from_raw(&self.ctx, q), Poly::from_raw(&self.ctx, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        self.same(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut c = self.c.clone();
        with_ops!(self.ctx, |o| kernel::rem_in_place(&o, &mut c, &b.c));
        Ok(Poly::from_raw(&self.ctx, c))
    }

    pub fn eval(&self, x: &FqElem) -> Result<FqElem> {
        if x.ctx() != &self.ctx {
            return Err(Error::MixedFields);
        }
        let v = with_ops!(self.ctx, |o| kernel::eval(&o, &self.c, x.value()));
        Ok(self.ctx.raw(v))
    }

    pub fn derivative(&self) -> Poly {
        let p = self.ctx.p();
        let c = with_ops!(self.ctx, |o| kernel::derivative(&o, &self.c, p));
        Poly::from_raw(&self.ctx, c)
    }

    /// Canonical order: by degree, then by coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }

    /// Same polynomial viewed over a field containing this one's.
    pub fn embed(&self, target: &FieldCtx) -> Result<Poly> {
        let f = crate::gf::embedder(&self.ctx, target)?;
        Ok(Poly::from_raw(target, self.c.iter().map(|&v| f(v)).collect()))
    }
}

macro_rules! poly_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, b: &Poly) -> Poly {
                self.$f(b).expect("polynomials over different fields")
            }
        }
        impl std::ops::$tr for Poly {
            type Output = Poly;
            fn $m(self, b: Poly) -> Poly {
                (&self).$f(&b).expect("polynomials over different fields")
            }
        }
    };
}

poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let c = with_ops!(self.ctx, |o| self.c.iter().map(|&x| o.neg(x)).collect());
        Poly::from_raw(&self.ctx, c)
    }
}

/// Monic gcd by Euclid.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.same(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let g = with_ops!(a.ctx, |o| kernel::gcd(&o, &a.c, &b.c));
    Ok(Poly::from_raw(&a.ctx, g))
}

/// `a^e mod f` by square-and-multiply.
pub fn powmod(a: &Poly, e: u128, f: &Poly) -> Result<Poly> {
    a.same(f)?;
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let c = with_ops!(a.ctx, |o| kernel::powmod(&o, &a.c, e, &f.c));
    Ok(Poly::from_raw(&a.ctx, c))
}

/// `a^{q^j} mod f`, by `j` successive `q`-th powers.
pub fn powmod_frobenius(a: &Poly, j: u64, f: &Poly) -> Result<Poly> {
    a.same(f)?;
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = a.ctx.q();
    let c = with_ops!(a.ctx, |o| {
        let mut h = a.c.clone();
        kernel::rem_in_place(&o, &mut h, &f.c);
        for _ in 0..j {
            h = kernel::pow_q(&o, &h, q, &f.c);
        }
        h
    });
    Ok(Poly::from_raw(&a.ctx, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_extension;

    fn p(ctx: &FieldCtx, c: &[u64]) -> Poly {
        Poly::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        let f2 = make_extension(2, 1).unwrap();
        assert_eq!(&p(&f2, &[1, 1]) * &p(&f2, &[1, 1]), p(&f2, &[1, 0, 1]));
        let (q, r) = p(&f2, &[1, 1, 0, 1]).divrem(&p(&f2, &[1, 1])).unwrap();
        assert_eq!(q, p(&f2, &[0, 1, 1]));
        assert_eq!(r, p(&f2, &[1]));
        let g = poly_gcd(&p(&f2, &[1, 1, 0, 1]), &p(&f2, &[1, 0, 1])).unwrap();
        assert!(g.is_one());
        let f3 = make_extension(3, 1).unwrap();
        let m = p(&f3, &[1, 0, 1]);
        assert_eq!(powmod(&Poly::x(&f3), 3, &m).unwrap(), p(&f3, &[0, 2]));
        assert_eq!(powmod(&p(&f3, &[2, 1]), 0, &m).unwrap(), Poly::one(&f3));
    }

    #[test]
    fn text_form() {
        let f9 = make_extension(3, 2).unwrap();
        let a = Poly::parse(&f9, "[3, 0, 1]").unwrap();
        assert_eq!(a.to_string(), "[3,0,1]");
        assert_eq!(Poly::parse(&f9, "[]").unwrap(), Poly::zero(&f9));
        assert!(Poly::parse(&f9, "[9]").is_err());
    }
}
