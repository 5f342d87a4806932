//! The parameter polynomials `P_{n,α}(λ) = f_λ^n(α)` for `f_λ(z) = z^d + λ`.
//!
//! `P_1 = λ + α^d` and `P_{m+1} = P_m^d + λ`, so `deg P_n = d^{n-1}`.

use crate::error::{Error, Result};
use crate::gf::ops::{with_ops, FieldOps};
use crate::gf::{make_prime_field, FieldCtx, FqElem};
use crate::orbit::FamilySpec;
use crate::poly::{kernel, Poly};

/// Default cap on the degree of a built iterate.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// `d = p^r s` with `p` not dividing `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeSplit {
    pub d: u64,
    pub r: u32,
    pub s: u64,
}

impl DegreeSplit {
    pub fn new(d: u64, p: u64) -> DegreeSplit {
        let (mut s, mut r) = (d, 0);
        while s % p == 0 {
            s /= p;
            r += 1;
        }
        DegreeSplit { d, r, s }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPolynomial {
    pub alpha: FqElem,
    pub d: u64,
    pub n: u32,
    pub poly: Poly,
}

fn check_budget(base: u64, exp: u32, budget: u64) -> Result<u64> {
    let needed = (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

/// `a^{p^r}` for a polynomial: exponents scale by `p`, coefficients take
/// their `p`-th power.
fn spread<F: FieldOps>(o: &F, a: &[u64], p: usize) -> Vec<u64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; (a.len() - 1) * p + 1];
    for (i, &c) in a.iter().enumerate() {
        out[i * p] = o.frob(c);
    }
    out
}

fn pow_small<F: FieldOps>(o: &F, a: &[u64], e: u64) -> Vec<u64> {
    let mut acc = a.to_vec();
    let top = 63 - e.leading_zeros();
    for bit in (0..top).rev() {
        acc = kernel::mul(o, &acc, &acc);
        if e >> bit & 1 == 1 {
            acc = kernel::mul(o, &acc, a);
        }
    }
    acc
}

/// `P_{n,α}` by the recurrence, within the default budget.
pub fn iterate_param_poly(ctx: &FieldCtx, alpha: &FqElem, d: u64, n: u32) -> Result<ParamPolynomial> {
    iterate_param_poly_with_budget(ctx, alpha, d, n, DEFAULT_BUDGET)
}

pub fn iterate_param_poly_with_budget(
    ctx: &FieldCtx,
    alpha: &FqElem,
    d: u64,
    n: u32,
    budget: u64,
) -> Result<ParamPolynomial> {
    let poly = iterate_family_poly(ctx, &FamilySpec::pure(d)?, alpha, n, budget)?;
    Ok(ParamPolynomial {
        alpha: alpha.clone(),
        d,
        n,
        poly,
    })
}

/// `f_λ^n(α)` as a polynomial in `λ` for any family `F(z) + λ`; degree
/// `(deg F)^{n-1}`.
pub fn iterate_family_poly(
    ctx: &FieldCtx,
    family: &FamilySpec,
    alpha: &FqElem,
    n: u32,
    budget: u64,
) -> Result<Poly> {
    if alpha.ctx() != ctx {
        return Err(Error::MixedFields);
    }
    if n == 0 {
        return Err(Error::Config("iterate index n must be at least 1".into()));
    }
    check_budget(family.degree(), n - 1, budget)?;
    let p = ctx.p() as usize;
    let c = with_ops!(ctx, |o| {
        let step = |cur: &[u64]| -> Vec<u64> {
            let mut next = match family {
                FamilySpec::Pure(d) => {
                    let sp = DegreeSplit::new(*d, p as u64);
                    let mut v = pow_small(&o, cur, sp.s);
                    for _ in 0..sp.r {
                        v = spread(&o, &v, p);
                    }
                    v
                }
                FamilySpec::Custom(g0) => {
                    let gc = g0.coeffs();
                    let mut acc = vec![*gc.last().unwrap()];
                    for &c in gc.iter().rev().skip(1) {
                        acc = kernel::mul(&o, &acc, cur);
                        acc = kernel::add(&o, &acc, &[c]);
                    }
                    acc
                }
            };
            if next.len() < 2 {
                next.resize(2, 0);
            }
            next[1] = o.add(next[1], 1);
            kernel::trim(&mut next);
            next
        };
        let mut cur = vec![alpha.value()];
        kernel::trim(&mut cur);
        for _ in 0..n {
            cur = step(&cur);
        }
        cur
    });
    Ok(Poly::from_raw(ctx, c))
}

/// `f_{λ0}^n(α)` by plain iteration in the field.
pub fn iterate_value(family: &FamilySpec, alpha: &FqElem, lambda0: &FqElem, n: u64) -> Result<FqElem> {
    let mut z = alpha.clone();
    for _ in 0..n {
        z = family.apply(&z, lambda0)?;
    }
    Ok(z)
}

/// `α^{p^{ℓn}} + sum_{i<n} λ^{p^{iℓ}}`, which equals `P_{n,α}` for
/// `d = p^ℓ`.
pub fn additive_closed_form(ell: u32, n: u32, alpha: &FqElem) -> Result<Poly> {
    let ctx = alpha.ctx();
    let p = ctx.p();
    if n == 0 || ell == 0 {
        return Err(Error::Config("need n >= 1 and l >= 1".into()));
    }
    let deg = check_budget(p, ell * (n - 1), DEFAULT_BUDGET)? as usize;
    let mut c = vec![0u64; deg + 1];
    let mut e = 1usize;
    for _ in 0..n {
        c[e] = ctx.add(c[e], 1);
        e = e.saturating_mul(p.pow(ell) as usize);
    }
    c[0] = ctx.frob(alpha.value(), ell as u64 * n as u64);
    Ok(Poly::from_raw(ctx, c))
}

/// `P_{n,α}` over `F_p[α]`, stored through `A = α^d`: every coefficient is a
/// polynomial in `α^d`, since `P_1 = λ + α^d` and the recurrence adds only
/// `λ`.
#[derive(Clone, Debug)]
pub struct BivariateIterate {
    pub p: u64,
    pub d: u64,
    pub n: u32,
    /// `by_lambda[j]` is the coefficient of `λ^j` as a polynomial in `A`.
    by_lambda: Vec<Vec<u64>>,
}

impl BivariateIterate {
    /// Degree of `P_n` in `λ`.
    pub fn lambda_degree(&self) -> usize {
        self.by_lambda.len() - 1
    }

    /// `c_{n,i}` in the variable `A = α^d`: the coefficient of
    /// `λ^{d^{n-1} - i}`.
    pub fn coeff_in_alpha_pow_d(&self, i: usize) -> &[u64] {
        &self.by_lambda[self.lambda_degree() - i]
    }

    /// `c_{n,i}` as a polynomial in `α`.
    pub fn coeff(&self, i: usize) -> Poly {
        let ctx = make_prime_field(self.p).expect("prime");
        let a = self.coeff_in_alpha_pow_d(i);
        let mut c = vec![0u64; if a.is_empty() { 0 } else { (a.len() - 1) * self.d as usize + 1 }];
        for (j, &v) in a.iter().enumerate() {
            c[j * self.d as usize] = v;
        }
        Poly::from_raw(&ctx, c)
    }

    /// Substitute a concrete `α`.
    pub fn specialize(&self, alpha: &FqElem) -> Result<Poly> {
        let ctx = alpha.ctx();
        if ctx.p() != self.p {
            return Err(Error::MixedCharacteristic);
        }
        let a = alpha.pow(self.d).value();
        let c = self
            .by_lambda
            .iter()
            .map(|poly_a| poly_a.iter().rev().fold(0u64, |acc, &v| ctx.add(ctx.mul(acc, a), v)))
            .collect();
        Ok(Poly::from_raw(ctx, c))
    }
}

/// Dense bivariate polynomial: `rows[j]` holds the `A`-polynomial at `λ^j`.
type Bi = Vec<Vec<u64>>;

fn bi_adeg(a: &Bi) -> usize {
    a.iter().map(|r| r.len()).max().unwrap_or(1).max(1) - 1
}

/// Product via Kronecker substitution `λ^j A^k -> x^{j S + k}`.
fn bi_mul<F: FieldOps>(o: &F, a: &Bi, b: &Bi) -> Bi {
    let stride = bi_adeg(a) + bi_adeg(b) + 1;
    let pack = |x: &Bi| -> Vec<u64> {
        let mut v = vec![0u64; x.len() * stride];
        for (j, r) in x.iter().enumerate() {
            v[j * stride..j * stride + r.len()].copy_from_slice(r);
        }
        kernel::trim(&mut v);
        v
    };
    let prod = kernel::mul(o, &pack(a), &pack(b));
    let rows = a.len() + b.len() - 1;
    (0..rows)
        .map(|j| {
            let lo = (j * stride).min(prod.len());
            let hi = ((j + 1) * stride).min(prod.len());
            let mut r = prod[lo..hi].to_vec();
            kernel::trim(&mut r);
            r
        })
        .collect()
}

fn bi_spread(a: &Bi, p: usize) -> Bi {
    let mut out: Bi = vec![Vec::new(); (a.len() - 1) * p + 1];
    for (j, r) in a.iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        let mut nr = vec![0u64; (r.len() - 1) * p + 1];
        for (k, &c) in r.iter().enumerate() {
            nr[k * p] = c;
        }
        out[j * p] = nr;
    }
    out
}

/// All `c_{n,i}(α)` over `F_p`. The work grows like `d^{2(n-1)}`; the budget
/// bounds `d^{n-1} * d^n`.
pub fn iterate_bivariate(p: u64, d: u64, n: u32) -> Result<BivariateIterate> {
    iterate_bivariate_with_budget(p, d, n, 20_000_000)
}

pub fn iterate_bivariate_with_budget(p: u64, d: u64, n: u32, budget: u64) -> Result<BivariateIterate> {
    let ctx = make_prime_field(p)?;
    if d < 2 || n == 0 {
        return Err(Error::Config("need d >= 2 and n >= 1".into()));
    }
    check_budget(d, 2 * n - 1, budget)?;
    let sp = DegreeSplit::new(d, p);
    let by_lambda = with_ops!(ctx, |o| {
        // P_1 = A + λ
        let mut cur: Bi = vec![vec![0, 1], vec![1]];
        for _ in 1..n {
            let mut acc = cur.clone();
            let top = 63 - sp.s.leading_zeros();
            for bit in (0..top).rev() {
                acc = bi_mul(&o, &acc, &acc);
                if sp.s >> bit & 1 == 1 {
                    acc = bi_mul(&o, &acc, &cur);
                }
            }
            for _ in 0..sp.r {
                acc = bi_spread(&acc, p as usize);
            }
            if acc[1].is_empty() {
                acc[1].push(0);
            }
            acc[1][0] = o.add(acc[1][0], 1);
            kernel::trim(&mut acc[1]);
            cur = acc;
        }
        cur
    });
    Ok(BivariateIterate { p, d, n, by_lambda })
}

/// Outcome of each coefficient identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub p: u64,
    pub d: u64,
    pub n: u32,
    /// `c_{n,0} = 1`.
    pub leading_one: bool,
    /// `c_{n,d^{n-1}} = α^{d^n}`.
    pub constant_term: bool,
    /// `deg_α c_{n,i} <= d i` for all `i`.
    pub degree_bound: bool,
    /// The vanishing range and first nonzero coefficient for `d = p^r s`,
    /// `s >= 2`; `None` when `s = 1`.
    pub structure: Option<StructureCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    /// `c_{n,i} = 0` for `1 <= i < p^{(n-1)r}`.
    pub vanishing: bool,
    /// `c_{n,p^{(n-1)r}} = s^E α^{p^{rn} s}`.
    pub first_term: bool,
    /// First index where the coefficient differs from the predicted form,
    /// with the predicted and actual coefficients in `α^d`.
    pub mismatch: Option<(usize, Vec<u64>, Vec<u64>)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.basic_passed() && self.structure.as_ref().is_none_or(|s| s.vanishing && s.first_term)
    }

    /// Only the leading, constant and degree clauses.
    pub fn basic_passed(&self) -> bool {
        self.leading_one && self.constant_term && self.degree_bound
    }
}

/// Check the coefficient identities on the exact bivariate iterate.
pub fn verify_coefficient_lemmas(p: u64, d: u64, n: u32) -> Result<LemmaReport> {
    let b = iterate_bivariate(p, d, n)?;
    let big_d = b.lambda_degree();
    let leading_one = b.coeff_in_alpha_pow_d(0) == [1];
    // α^{d^n} = A^{d^{n-1}}
    let mut want = vec![0u64; big_d + 1];
    want[big_d] = 1;
    let constant_term = b.coeff_in_alpha_pow_d(big_d) == want.as_slice();
    let degree_bound = (0..=big_d).all(|i| b.coeff_in_alpha_pow_d(i).len() <= i + 1);
    let sp = DegreeSplit::new(d, p);
    let structure = (sp.s >= 2).then(|| {
        let pr = p.pow(sp.r);
        let first = pr.pow(n - 1) as usize;
        let mut mismatch = None;
        let vanishing = (1..first).all(|i| {
            let ok = b.coeff_in_alpha_pow_d(i).is_empty();
            if !ok && mismatch.is_none() {
                mismatch = Some((i, Vec::new(), b.coeff_in_alpha_pow_d(i).to_vec()));
            }
            ok
        });
        // exponent of s: (p^{r(n-1)} - 1)/(p^r - 1), or n - 1 when r = 0
        let e = if sp.r == 0 {
            (n - 1) as u64
        } else {
            (pr.pow(n - 1) - 1) / (pr - 1)
        };
        let coeff = crate::gf::make_prime_field(p)
            .map(|f| f.from_int((sp.s % p) as i64).pow(e).value())
            .unwrap_or(0);
        // α^{p^{rn} s} = A^{p^{r(n-1)}}
        let mut predicted = vec![0u64; first + 1];
        predicted[first] = coeff;
        kernel::trim(&mut predicted);
        let actual = b.coeff_in_alpha_pow_d(first).to_vec();
        let first_term = actual == predicted;
        if !first_term && mismatch.is_none() {
            mismatch = Some((first, predicted, actual));
        }
        StructureCheck {
            vanishing,
            first_term,
            mismatch,
        }
    });
    Ok(LemmaReport {
        p,
        d,
        n,
        leading_one,
        constant_term,
        degree_bound,
        structure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_extension;

    #[test]
    fn small_iterates() {
        let f2 = make_extension(2, 1).unwrap();
        let p = iterate_param_poly(&f2, &f2.zero(), 3, 2).unwrap();
        assert_eq!(p.poly.to_string(), "[0,1,0,1]");
        let f5 = make_extension(5, 1).unwrap();
        let a = f5.raw(2);
        let p1 = iterate_param_poly(&f5, &a, 4, 1).unwrap();
        assert_eq!(p1.poly.coeffs(), &[a.pow(4).value(), 1]);
    }

    #[test]
    fn closed_form_examples() {
        let f2 = make_extension(2, 1).unwrap();
        assert_eq!(additive_closed_form(1, 2, &f2.zero()).unwrap().to_string(), "[0,1,1]");
        let f3 = make_extension(3, 1).unwrap();
        let c = additive_closed_form(1, 3, &f3.one()).unwrap();
        assert_eq!(c.to_string(), "[1,1,0,1,0,0,0,0,0,1]");
        assert_eq!(c, iterate_param_poly(&f3, &f3.one(), 3, 3).unwrap().poly);
    }

    #[test]
    fn bivariate_specializes() {
        let b = iterate_bivariate(3, 4, 3).unwrap();
        let f9 = make_extension(3, 2).unwrap();
        for v in 0..9 {
            let a = f9.raw(v);
            let direct = iterate_param_poly(&f9, &a, 4, 3).unwrap().poly;
            assert_eq!(b.specialize(&a).unwrap(), direct);
        }
    }
}
