//! Collision-set searches: sweep monic irreducibles `g` by degree and ask
//! whether every point reaches the target modulo `g`.

mod checkpoint;
mod export;
pub mod tables;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::ops::with_ops;
use crate::gf::{embedder, make_extension, FieldCtx, FqElem};
use crate::iterates::{iterate_family_poly, DEFAULT_BUDGET};
use crate::orbit::{default_step_cap, Engine, FamilySpec, OrbitOutcome};
use crate::poly::{enumerate_irreducibles, factor, roots_in_field, Poly};

pub use checkpoint::config_hash;
pub use export::{
    export_factor_rows, export_results, import_json, ExportFormat, RecordRow, SummaryRow,
};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub ctx: FieldCtx,
    pub family: FamilySpec,
    /// `α_1, ..., α_s`, searched in this order with short-circuit.
    pub points: Vec<FqElem>,
    pub target: FqElem,
    pub deg_min: usize,
    pub deg_max: usize,
    /// `None` uses `min(q^deg + 1, 10^7)` per modulus.
    pub step_cap: Option<u64>,
    pub threads: usize,
    pub rng_seed: u64,
    /// Per-degree checkpoints are written to this directory.
    pub checkpoint_dir: Option<PathBuf>,
    /// Reuse checkpoints already present in `checkpoint_dir`.
    pub resume: bool,
}

impl SearchConfig {
    pub fn new(
        ctx: &FieldCtx,
        family: FamilySpec,
        points: Vec<FqElem>,
        target: FqElem,
        deg_min: usize,
        deg_max: usize,
    ) -> Result<SearchConfig> {
        let cfg = SearchConfig {
            ctx: ctx.clone(),
            family,
            points,
            target,
            deg_min,
            deg_max,
            step_cap: None,
            threads: 1,
            rng_seed: 0,
            checkpoint_dir: None,
            resume: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Config("at least one point is required".into()));
        }
        if self.deg_min < 1 {
            return Err(Error::Config("degrees start at 1".into()));
        }
        if self.points.iter().any(|a| a.ctx() != &self.ctx) || self.target.ctx() != &self.ctx {
            return Err(Error::MixedFields);
        }
        if let FamilySpec::Custom(g) = &self.family {
            if g.ctx() != &self.ctx {
                return Err(Error::MixedFields);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionRecord {
    pub g: Poly,
    pub degree: usize,
    /// One entry per point examined; the sweep stops at the first non-hit.
    pub outcomes: Vec<OrbitOutcome>,
    pub success: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TallyRow {
    pub candidates: u64,
    pub successes: u64,
    pub inconclusive: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeTally {
    pub rows: BTreeMap<usize, TallyRow>,
}

impl DegreeTally {
    pub fn successes(&self) -> Vec<u64> {
        self.rows.values().map(|r| r.successes).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchResult {
    pub tally: DegreeTally,
    /// Sorted by degree, then by the coefficients of `g`.
    pub records: Vec<CollisionRecord>,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

/// Outcomes for one modulus `g` (monic coefficients).
fn examine(cfg: &SearchConfig, g: &[u64]) -> Vec<OrbitOutcome> {
    let ctx = &cfg.ctx;
    let q = ctx.q();
    let m = g.len() - 1;
    let cap = cfg.step_cap.unwrap_or_else(|| default_step_cap(q, m));
    let beta = cfg.target.value();
    with_ops!(ctx, |o| {
        let mut eng = Engine::new(o, ctx, g, &cfg.family);
        let mut out = Vec::with_capacity(cfg.points.len());
        for a in &cfg.points {
            let r = eng.run(q, a.value(), beta, cap);
            out.push(r);
            if !r.is_hit() {
                break;
            }
        }
        out
    })
}

/// Records for every monic irreducible of one degree, in enumeration order.
pub fn search_degree(cfg: &SearchConfig, degree: usize, pool: &rayon::ThreadPool) -> Result<Vec<CollisionRecord>> {
    let q = cfg.ctx.q();
    let tails = enumerate_irreducibles(&cfg.ctx, degree)?.tails();
    let s = cfg.points.len();
    let records = pool.install(|| {
        tails
            .par_iter()
            .map(|&t| {
                let c = crate::poly::tail_to_coeffs(q, degree, t);
                let outcomes = examine(cfg, &c);
                let success = outcomes.len() == s && outcomes.iter().all(OrbitOutcome::is_hit);
                CollisionRecord {
                    g: Poly::from_raw(&cfg.ctx, c),
                    degree,
                    outcomes,
                    success,
                }
            })
            .collect()
    });
    Ok(records)
}

pub(crate) fn tally_of(records: &[CollisionRecord]) -> TallyRow {
    let mut row = TallyRow::default();
    for r in records {
        row.candidates += 1;
        row.successes += r.success as u64;
        row.inconclusive += r
            .outcomes
            .iter()
            .any(|o| matches!(o, OrbitOutcome::Inconclusive(_))) as u64;
    }
    row
}

/// The degree sweep. Output is independent of the thread count.
pub fn gcd_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let pool = pool(cfg.threads)?;
    let mut result = SearchResult::default();
    for degree in cfg.deg_min..=cfg.deg_max {
        let records = match checkpoint::load(cfg, degree)? {
            Some(r) => r,
            None => {
                let r = search_degree(cfg, degree, &pool)?;
                checkpoint::store(cfg, degree, &r)?;
                r
            }
        };
        result.tally.rows.insert(degree, tally_of(&records));
        result.records.extend(records);
    }
    Ok(result)
}

/// Irreducible factors of `P_n - β`: `(degree, multiplicity)` per distinct
/// factor, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRow {
    pub n: u32,
    pub factors: Vec<(usize, u32)>,
}

impl FactorRow {
    /// Degrees of the distinct irreducible factors.
    pub fn distinct_degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|&(d, _)| d).collect()
    }

    pub fn all_simple(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Sum of degrees times multiplicities.
    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|&(d, m)| d * m as usize).sum()
    }
}

/// Factor `f_λ^n(α) - β` for each `n` in the range.
pub fn factor_scan(
    ctx: &FieldCtx,
    family: &FamilySpec,
    alpha: &FqElem,
    beta: &FqElem,
    n_min: u32,
    n_max: u32,
    rng_seed: u64,
) -> Result<Vec<FactorRow>> {
    (n_min.max(1)..=n_max)
        .map(|n| {
            let p = iterate_family_poly(ctx, family, alpha, n, DEFAULT_BUDGET)?;
            let f = &p - &Poly::constant(beta);
            let fac = factor(&f, rng_seed)?;
            Ok(FactorRow {
                n,
                factors: fac
                    .factors
                    .iter()
                    .map(|(g, m)| (g.degree().unwrap(), *m))
                    .collect(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossReport {
    pub moduli_checked: usize,
    /// Per degree: successes with every hit index `<= max_n` from the
    /// orbit route, and the count from intersecting factor sets.
    pub tallies: BTreeMap<usize, (u64, u64)>,
    pub first_mismatch: Option<String>,
}

impl CrossReport {
    pub fn ok(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compare the orbit route against explicit divisibility and factorization
/// for all irreducibles of degree `<= max_degree` and iterates `n <= max_n`.
pub fn cross_validate(cfg: &SearchConfig, max_degree: usize, max_n: u32) -> Result<CrossReport> {
    let mut report = CrossReport {
        moduli_checked: 0,
        tallies: BTreeMap::new(),
        first_mismatch: None,
    };
    if max_degree == 0 || max_n == 0 {
        return Ok(report);
    }
    let mut small = cfg.clone();
    small.deg_min = 1;
    small.deg_max = max_degree;
    small.checkpoint_dir = None;
    let route_a = gcd_search(&small)?;

    // Explicit iterates P_{m,α_i} - β for m <= max_n.
    let iterates: Vec<Vec<Poly>> = cfg
        .points
        .iter()
        .map(|a| {
            (1..=max_n)
                .map(|m| {
                    let p = iterate_family_poly(&cfg.ctx, &cfg.family, a, m, DEFAULT_BUDGET)?;
                    Ok(&p - &Poly::constant(&cfg.target))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // Factor sets per point, restricted to small degrees.
    let factor_sets: Vec<BTreeSet<Vec<u64>>> = iterates
        .iter()
        .map(|ps| {
            let mut set = BTreeSet::new();
            for p in ps {
                if p.is_zero() || p.degree() == Some(0) {
                    continue;
                }
                for (g, _) in factor(p, cfg.rng_seed)?.factors {
                    if g.degree().unwrap() <= max_degree {
                        set.insert(g.coeffs().to_vec());
                    }
                }
            }
            Ok(set)
        })
        .collect::<Result<_>>()?;
    let mut common = factor_sets[0].clone();
    for s in &factor_sets[1..] {
        common = common.intersection(s).cloned().collect();
    }

    for rec in &route_a.records {
        report.moduli_checked += 1;
        let divides = |ps: &[Poly]| -> Result<Option<u32>> {
            for (i, p) in ps.iter().enumerate() {
                if p.rem(&rec.g)?.is_zero() {
                    return Ok(Some(i as u32 + 1));
                }
            }
            Ok(None)
        };
        let first_b = divides(&iterates[0])?;
        let first_a = match rec.outcomes[0] {
            OrbitOutcome::Hit(n) if n <= max_n as u64 => Some(n as u32),
            _ => None,
        };
        if first_a != first_b && report.first_mismatch.is_none() {
            report.first_mismatch = Some(format!(
                "g = {}: orbit route gives {:?}, divisibility gives {:?} for the first point",
                rec.g, first_a, first_b
            ));
        }
        let entry = report.tallies.entry(rec.degree).or_insert((0, 0));
        let within = rec.success
            && rec
                .outcomes
                .iter()
                .all(|o| matches!(o, OrbitOutcome::Hit(n) if *n <= max_n as u64));
        entry.0 += within as u64;
        entry.1 += common.contains(rec.g.coeffs()) as u64;
    }
    if report.first_mismatch.is_none() {
        if let Some((d, (a, b))) = report.tallies.iter().find(|(_, (a, b))| a != b) {
            report.first_mismatch =
                Some(format!("degree {d}: orbit route counts {a}, factor sets give {b}"));
        }
    }
    Ok(report)
}

/// Recheck a success in the field `F_q[λ]/(g) = F_{q^m}`: take a root `λ0`
/// of `g` there and iterate each point by plain field arithmetic.
pub fn verify_lambda(record: &CollisionRecord, cfg: &SearchConfig) -> Result<bool> {
    if !record.success {
        return Err(Error::Config("verify_lambda needs a successful record".into()));
    }
    let ctx = &cfg.ctx;
    let big = make_extension(ctx.p(), ctx.k() * record.degree as u32)?;
    let Some(lambda0) = roots_in_field(&record.g, &big)?.into_iter().next() else {
        return Ok(false);
    };
    let up = embedder(ctx, &big)?;
    let family = match &cfg.family {
        FamilySpec::Custom(g0) => FamilySpec::Custom(g0.embed(&big)?),
        f => f.clone(),
    };
    let beta = big.elem(up(cfg.target.value()))?;
    for (a, out) in cfg.points.iter().zip(&record.outcomes) {
        let OrbitOutcome::Hit(n) = *out else {
            return Ok(false);
        };
        let mut z = big.elem(up(a.value()))?;
        for _ in 0..n {
            z = family.apply(&z, &lambda0)?;
        }
        if z != beta {
            return Ok(false);
        }
    }
    Ok(true)
}
