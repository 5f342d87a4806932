//! The family `z^{p^ℓ} + λ`, where collision sets are either empty or
//! infinite. Solvability reduces to a finite search over `F_q`, and a
//! solution gives `λ` as roots of an additive equation.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{embed_subfield, embedder, frobenius, make_extension, FieldCtx, FqElem};

/// `α_2 - α_1 = δ_1` and `β - α_1 = δ_2`, both in `F_q`, `q = p^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveInstance {
    pub ell: u32,
    pub ctx: FieldCtx,
    pub delta1: FqElem,
    pub delta2: FqElem,
}

impl AdditiveInstance {
    pub fn new(ctx: &FieldCtx, ell: u32, delta1: FqElem, delta2: FqElem) -> Result<AdditiveInstance> {
        if ell == 0 {
            return Err(Error::Config("ell must be at least 1".into()));
        }
        if delta1.ctx() != ctx || delta2.ctx() != ctx {
            return Err(Error::MixedFields);
        }
        if delta1.is_zero() {
            return Err(Error::Delta1Zero);
        }
        Ok(AdditiveInstance {
            ell,
            ctx: ctx.clone(),
            delta1,
            delta2,
        })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn r(&self) -> u32 {
        self.ctx.k()
    }

    /// `d = p^ℓ`.
    pub fn degree(&self) -> Option<u64> {
        self.p().checked_pow(self.ell)
    }
}

/// Partial sums `u_a = Σ_{i<a} γ^{p^{ie}}`; `u_0 = 0`, `u_{a+1} = u_a^{p^e} + γ`.
/// The map is a bijection of `F_q`, so the sequence is purely periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    pub gamma: FqElem,
    pub e: u32,
    /// `u_0, ..., u_{T-1}`.
    pub sums: Vec<FqElem>,
}

impl FrobeniusOrbit {
    pub fn new(gamma: &FqElem, e: u32) -> FrobeniusOrbit {
        let ctx = gamma.ctx();
        let g = gamma.value();
        let mut raw = vec![0u64];
        loop {
            let next = ctx.add(ctx.frob(*raw.last().unwrap(), e as u64), g);
            if next == 0 {
                break;
            }
            raw.push(next);
        }
        FrobeniusOrbit {
            gamma: gamma.clone(),
            e,
            sums: raw.into_iter().map(|v| ctx.raw(v)).collect(),
        }
    }

    pub fn period(&self) -> usize {
        self.sums.len()
    }

    pub fn u(&self, a: u64) -> &FqElem {
        &self.sums[(a % self.sums.len() as u64) as usize]
    }
}

/// A solution `(γ, k, s_1, s_2)` of
/// `δ_1 = Σ_{i<s_1} γ^{p^{ikℓ}}`, `δ_2 = Σ_{i<s_2} γ^{p^{ikℓ}}`, with `s_2 > s_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub gamma: FqElem,
    pub k: u64,
    pub s1: u64,
    pub s2: u64,
}

impl Witness {
    /// `f^m(α_1) = β`.
    pub fn m(&self) -> u64 {
        self.k * self.s2
    }

    /// `f^n(α_2) = β`.
    pub fn n(&self) -> u64 {
        self.k * (self.s2 - self.s1)
    }

    /// Evaluate the two defining sums directly.
    pub fn sums(&self, ell: u32) -> (FqElem, FqElem) {
        let ctx = self.gamma.ctx();
        let step = self.k * ell as u64;
        let mut acc = ctx.zero();
        let mut term = self.gamma.clone();
        let mut d1 = ctx.zero();
        for i in 0..self.s2.max(self.s1) {
            if i == self.s1 {
                d1 = acc.clone();
            }
            acc = &acc + &term;
            term = frobenius(&term, step);
        }
        if self.s1 >= self.s2 {
            d1 = acc.clone();
        }
        (d1, acc)
    }

    pub fn satisfies(&self, inst: &AdditiveInstance) -> bool {
        if self.gamma.ctx() != &inst.ctx || self.k == 0 || self.s1 == 0 || self.s2 <= self.s1 {
            return false;
        }
        let (d1, d2) = self.sums(inst.ell);
        d1 == inst.delta1 && d2 == inst.delta2
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.gamma.value(), self.k, self.s1, self.s2)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least `k >= 1` with `kℓ ≡ e (mod r)`.
fn least_k(ell: u32, r: u32, e: u32) -> Option<u64> {
    (1..=r as u64).find(|k| (k * ell as u64) % r as u64 == e as u64)
}

/// Exhaustive decision procedure. Returns the least witness ordered by
/// `(γ, e, s_1, s_2)` with `e = kℓ mod r`, or `None` when the collision set
/// is empty.
pub fn solve_system(inst: &AdditiveInstance) -> Result<Option<Witness>> {
    if inst.delta1.is_zero() {
        return Err(Error::Delta1Zero);
    }
    let ctx = &inst.ctx;
    let r = inst.r();
    let step = gcd(inst.ell as u64, r as u64) as usize;
    for gv in 1..ctx.q() {
        let gamma = ctx.raw(gv);
        for e in (0..r).step_by(step) {
            let orbit = FrobeniusOrbit::new(&gamma, e);
            let t = orbit.period() as u64;
            let Some(s1) = (1..t).find(|&a| *orbit.u(a) == inst.delta1) else {
                continue;
            };
            let Some(s2) = (s1 + 1..=s1 + t).find(|&a| *orbit.u(a) == inst.delta2) else {
                continue;
            };
            let k = least_k(inst.ell, r, e).expect("e is a multiple of gcd(ell, r)");
            return Ok(Some(Witness {
                gamma,
                k,
                s1,
                s2,
            }));
        }
    }
    Ok(None)
}

/// Sufficient condition for emptiness over `q = p^2`: `δ_1, δ_2 ∉ F_p`,
/// `δ_1 - δ_2 ∉ F_p` and `δ_1/δ_2 ∉ F_p`.
pub fn quick_empty_check(inst: &AdditiveInstance) -> bool {
    let ctx = &inst.ctx;
    if ctx.k() != 2 {
        return false;
    }
    let (d1, d2) = (&inst.delta1, &inst.delta2);
    let outside = |x: &FqElem| !ctx.in_prime_field(x.value());
    if !outside(d1) || !outside(d2) || !outside(&(d1 - d2)) {
        return false;
    }
    match d1.try_div(d2) {
        Ok(ratio) => outside(&ratio),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSolution {
    pub lambda: FqElem,
    /// The witness with `k` replaced by the schedule entry that produced `λ`.
    pub witness: Witness,
}

impl LambdaSolution {
    pub fn field(&self) -> &FieldCtx {
        self.lambda.ctx()
    }
}

/// Largest extension degree tried, as a multiple of `r`.
pub const MAX_EXTENSION_FACTOR: u32 = 64;

/// Distinct `λ` with `f_λ^{k'}(α_1) = α_1 + γ`, i.e. roots of
/// `Σ_{i<k'} λ^{p^{iℓ}} = α_1 + γ - α_1^{p^{k'ℓ}}`, for `k'` running over the
/// schedule (default `k, k + r, k + 2r, ...`). All roots live in one field
/// `F_{p^M}`, with `M` the least multiple of the degree of `α_1`'s field
/// giving `how_many` values.
pub fn construct_lambdas(
    inst: &AdditiveInstance,
    w: &Witness,
    alpha1: &FqElem,
    how_many: usize,
    k_schedule: Option<&[u64]>,
) -> Result<Vec<LambdaSolution>> {
    if how_many == 0 {
        return Ok(Vec::new());
    }
    if !w.satisfies(inst) {
        return Err(Error::Config(format!("{w} does not solve the instance")));
    }
    let p = inst.p();
    let r = inst.r();
    let a_ctx = alpha1.ctx();
    if a_ctx.p() != p {
        return Err(Error::MixedCharacteristic);
    }
    if !a_ctx.k().is_multiple_of(r) {
        return Err(Error::NotASubfield {
            from: r,
            to: a_ctx.k(),
        });
    }
    let e = (w.k * inst.ell as u64) % r as u64;
    if let Some(s) = k_schedule {
        if let Some(bad) = s.iter().find(|&&k| k == 0 || (k * inst.ell as u64) % r as u64 != e) {
            return Err(Error::Config(format!(
                "schedule entry {bad} changes the Frobenius exponent"
            )));
        }
    }
    let base = a_ctx.k();
    let mut tried = base;
    for m in (base..=MAX_EXTENSION_FACTOR * r).step_by(base as usize) {
        if !p.checked_pow(m).is_some_and(|q| q < 1 << 62) {
            break;
        }
        tried = m;
        let big = make_extension(p, m)?;
        // L_{k'} depends on k' modulo p times the order of Frobenius^ℓ,
        // which divides p*m; the default schedule covers one period.
        let schedule: Vec<u64> = match k_schedule {
            Some(s) => s.to_vec(),
            None => (0..m as u64 * p).map(|i| w.k + i * r as u64).collect(),
        };
        let found = lambdas_in(inst, w, alpha1, &big, &schedule, how_many)?;
        if found.len() >= how_many {
            return Ok(found);
        }
    }
    Err(Error::NoSolutionInChosenExtension { tried })
}

fn lambdas_in(
    inst: &AdditiveInstance,
    w: &Witness,
    alpha1: &FqElem,
    big: &FieldCtx,
    schedule: &[u64],
    how_many: usize,
) -> Result<Vec<LambdaSolution>> {
    let p = big.p();
    let m = big.k() as usize;
    let ell = inst.ell as u64;
    let up_q = embedder(&inst.ctx, big)?;
    let up_a = embedder(alpha1.ctx(), big)?;
    let a1 = up_a(alpha1.value());
    let g = up_q(w.gamma.value());

    // Columns L_{k'}(b_j) for the basis b_j = p^j, advanced along the schedule.
    let basis: Vec<u64> = (0..m).map(|j| p.pow(j as u32)).collect();
    let mut sums = vec![0u64; m];
    let mut terms = basis.clone();
    let mut done = 0u64;

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut order: Vec<u64> = schedule.to_vec();
    order.dedup();
    let mut sorted = order.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let mut columns = std::collections::HashMap::new();
    for &kp in &sorted {
        while done < kp {
            for j in 0..m {
                sums[j] = big.add(sums[j], terms[j]);
                terms[j] = big.frob(terms[j], ell);
            }
            done += 1;
        }
        columns.insert(kp, sums.clone());
    }
    for &kp in &order {
        if out.len() >= how_many {
            break;
        }
        let rhs = big.sub(big.add(a1, g), big.frob(a1, kp * ell % m as u64));
        let cols = &columns[&kp];
        let Some((x0, kernel)) = solve_affine(big, cols, rhs) else {
            continue;
        };
        // Walk x0 + Σ c_i v_i over coefficient vectors in base-p order.
        let mut coeffs = vec![0u64; kernel.len()];
        loop {
            let mut x = x0.clone();
            for (c, v) in coeffs.iter().zip(&kernel) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi = (*xi + c * vi) % p;
                }
            }
            let lam = big.from_digits(&x);
            if seen.insert(lam) {
                out.push(LambdaSolution {
                    lambda: big.raw(lam),
                    witness: Witness { k: kp, ..w.clone() },
                });
                if out.len() >= how_many {
                    break;
                }
            }
            let mut i = 0;
            while i < coeffs.len() {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == coeffs.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Solve `Σ x_j cols[j] = rhs` over `F_p` in digit coordinates. Returns a
/// particular solution and a kernel basis.
fn solve_affine(ctx: &FieldCtx, cols: &[u64], rhs: u64) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let p = ctx.p();
    let m = cols.len();
    // Row i: digit i of each column, then digit i of rhs.
    let col_digits: Vec<Vec<u64>> = cols.iter().map(|&c| ctx.digits(c)).collect();
    let rhs_digits = ctx.digits(rhs);
    let mut a: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut row: Vec<u64> = col_digits.iter().map(|d| d[i]).collect();
            row.push(rhs_digits[i]);
            row
        })
        .collect();
    let inv = |x: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(pr) = (row..m).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let s = inv(a[row][col]);
        for v in a[row].iter_mut() {
            *v = *v * s % p;
        }
        for i in 0..m {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..=m {
                    a[i][j] = (a[i][j] + (p - f) * a[row][j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| r[m] != 0) {
        return None;
    }
    let mut x0 = vec![0u64; m];
    for (i, &c) in pivots.iter().enumerate() {
        x0[c] = a[i][m];
    }
    let kernel = (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; m];
            v[free] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = (p - a[i][free]) % p;
            }
            v
        })
        .collect();
    Some((x0, kernel))
}

/// Check by direct iteration of `z -> z^{p^ℓ} + λ` that
/// `f^{k s_1}(α_1) = α_2`, `f^{k s_2}(α_1) = β`, `f^{k(s_2 - s_1)}(α_2) = β`,
/// and that `α_1` is periodic. All points must lie in `λ`'s field.
pub fn validate_witness(
    inst: &AdditiveInstance,
    w: &Witness,
    lambda: &FqElem,
    alpha1: &FqElem,
    alpha2: &FqElem,
    beta: &FqElem,
) -> Result<bool> {
    let field = lambda.ctx();
    if alpha1.ctx() != field || alpha2.ctx() != field || beta.ctx() != field {
        return Err(Error::MixedFields);
    }
    let d1 = embed_subfield(&inst.delta1, field)?;
    let d2 = embed_subfield(&inst.delta2, field)?;
    if alpha2 != &(alpha1 + &d1) || beta != &(alpha1 + &d2) {
        return Err(Error::Config("points do not match the instance".into()));
    }
    if w.k == 0 || w.s1 == 0 || w.s2 <= w.s1 {
        return Ok(false);
    }
    let d = inst.degree().ok_or(Error::TooLarge {
        p: inst.p(),
        k: inst.ell,
    })? as u128;
    let f = |z: &FqElem| &z.pow_big(d) + lambda;
    let iterate = |z: &FqElem, n: u64| (0..n).fold(z.clone(), |z, _| f(&z));

    if iterate(alpha1, w.k * w.s1) != *alpha2 {
        return Ok(false);
    }
    if iterate(alpha1, w.m()) != *beta {
        return Ok(false);
    }
    if iterate(alpha2, w.n()) != *beta {
        return Ok(false);
    }
    // The orbit of α_1 moves by translations in F_q every k steps, so its
    // period divides k·T with T <= q.
    let limit = w.k.saturating_mul(inst.ctx.q());
    let mut z = f(alpha1);
    for _ in 1..limit {
        if z == *alpha1 {
            return Ok(true);
        }
        z = f(&z);
    }
    Ok(z == *alpha1)
}
