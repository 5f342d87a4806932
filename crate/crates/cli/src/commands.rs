use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use collide_core::addcase::{
    construct_lambdas, quick_empty_check, solve_system, validate_witness, AdditiveInstance,
};
use collide_core::collision::tables::{table, CountTable, FactorTable, Table};
use collide_core::collision::{
    export_factor_rows, export_results, factor_scan as scan, gcd_search, ExportFormat, FactorRow,
    SearchConfig, SearchResult,
};
use collide_core::gf::{embed_subfield, make_extension, make_extension_with_modulus, FieldCtx, FqElem};
use collide_core::heights::{canonical_height_estimate, variation_bounds, RationalFunction};
use collide_core::orbit::FamilySpec;
use collide_core::poly::Poly;
use collide_core::Error;
use serde::Serialize;

use crate::args::{AddArgs, FamilyArgs, FieldArgs, Format, HeightArgs, ReproduceArgs, ScanArgs, SearchArgs};
use crate::manifest;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Mismatch(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Io(m) => Failure::Io(m),
            e => Failure::Config(e.to_string()),
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn export_format(f: Format) -> ExportFormat {
    match f {
        Format::Csv => ExportFormat::Csv,
        Format::Json => ExportFormat::Json,
    }
}

fn result_files(f: Format) -> &'static [&'static str] {
    match f {
        Format::Csv => &["summary.csv", "records.csv"],
        Format::Json => &["results.json"],
    }
}

fn factor_files(f: Format) -> &'static [&'static str] {
    match f {
        Format::Csv => &["factors.csv"],
        Format::Json => &["factors.json"],
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| Failure::Config(format!("bad integer {x:?}: {e}")))
        })
        .collect()
}

fn field(a: &FieldArgs) -> Result<FieldCtx, Failure> {
    match &a.modulus {
        Some(m) => {
            let coeffs = parse_u64_list(m)?;
            let ctx = make_extension_with_modulus(a.p, &coeffs)?;
            if a.k != 1 && a.k != ctx.k() {
                return Err(Failure::Config(format!(
                    "--k {} disagrees with a modulus of degree {}",
                    a.k,
                    ctx.k()
                )));
            }
            Ok(ctx)
        }
        None => Ok(make_extension(a.p, a.k)?),
    }
}

fn family(a: &FamilyArgs, ctx: &FieldCtx) -> Result<FamilySpec, Failure> {
    match (a.d, &a.family_poly) {
        (Some(d), None) => Ok(FamilySpec::pure(d)?),
        (None, Some(g)) => Ok(FamilySpec::custom(Poly::parse(ctx, g)?)?),
        _ => Err(Failure::Config("give exactly one of --d and --family-poly".into())),
    }
}

fn elems(ctx: &FieldCtx, s: &str) -> Result<Vec<FqElem>, Failure> {
    parse_u64_list(s)?
        .into_iter()
        .map(|v| ctx.elem(v).map_err(Failure::from))
        .collect()
}

fn print_tally(res: &SearchResult) {
    println!("degree,candidates,successes,inconclusive");
    for (d, r) in &res.tally.rows {
        println!("{d},{},{},{}", r.candidates, r.successes, r.inconclusive);
    }
}

pub fn search(a: &SearchArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let ctx = field(&a.field)?;
    let fam = family(&a.family, &ctx)?;
    let points = elems(&ctx, &a.points)?;
    let target = ctx.elem(a.target)?;
    let mut cfg = SearchConfig::new(
        &ctx,
        fam,
        points,
        target,
        a.deg.start as usize,
        a.deg.end as usize,
    )?;
    cfg.step_cap = a.step_cap;
    cfg.threads = a.threads;
    cfg.rng_seed = a.seed;
    cfg.checkpoint_dir = Some(a.out.out.join("checkpoints"));
    cfg.resume = a.resume;
    let res = gcd_search(&cfg)?;
    export_results(&res.tally, &res.records, export_format(a.out.format), &a.out.out)?;
    print_tally(&res);
    manifest::write(
        &a.out.out,
        "search",
        a,
        a.seed,
        start.elapsed(),
        result_files(a.out.format),
    )
}

pub fn reproduce(a: &ReproduceArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let outcome = match table(a.table)? {
        Table::Count(t) => reproduce_counts(a, &t)?,
        Table::Factor(t) => reproduce_factors(a, &t)?,
    };
    let files = match table(a.table)? {
        Table::Count(_) => result_files(a.out.format),
        Table::Factor(_) => factor_files(a.out.format),
    };
    manifest::write(&a.out.out, "reproduce", a, a.seed, start.elapsed(), files)?;
    match outcome {
        None => Ok(()),
        Some(msg) => Err(Failure::Mismatch(msg)),
    }
}

/// `Some(first differing cell)` on mismatch.
fn reproduce_counts(a: &ReproduceArgs, t: &CountTable) -> Result<Option<String>, Failure> {
    let (lo, hi) = match a.deg {
        Some(r) => (r.start.max(1) as usize, r.end as usize),
        None => (1, t.required),
    };
    let mut cfg = t.config(hi)?;
    cfg.deg_min = lo;
    cfg.threads = a.threads;
    cfg.rng_seed = a.seed;
    cfg.checkpoint_dir = Some(a.out.out.join("checkpoints"));
    cfg.resume = a.resume;
    let res = gcd_search(&cfg)?;
    export_results(&res.tally, &res.records, export_format(a.out.format), &a.out.out)?;
    print_tally(&res);
    for (&d, row) in &res.tally.rows {
        if let Some(&want) = t.counts.get(d - 1) {
            if row.successes != want {
                return Ok(Some(format!(
                    "table {} degree {d}: expected {want}, got {}",
                    t.id, row.successes
                )));
            }
        }
    }
    let checked = hi.min(t.counts.len());
    println!("table {}: degrees {lo}..{checked} match", t.id);
    Ok(None)
}

fn print_factor_rows(rows: &[FactorRow]) {
    for r in rows {
        let cells: Vec<String> = r
            .factors
            .iter()
            .map(|&(d, m)| if m == 1 { d.to_string() } else { format!("{d}^{m}") })
            .collect();
        println!("n={}: [{}]", r.n, cells.join(", "));
    }
}

fn reproduce_factors(a: &ReproduceArgs, t: &FactorTable) -> Result<Option<String>, Failure> {
    let (lo, hi) = match a.n {
        Some(r) => (r.start.max(1), r.end),
        None => (1, t.required),
    };
    let ctx = t.field()?;
    let rows = scan(&ctx, &t.family()?, &t.alpha(&ctx)?, &t.beta(&ctx)?, lo, hi, a.seed)?;
    export_factor_rows(&rows, export_format(a.out.format), &a.out.out)?;
    print_factor_rows(&rows);
    for r in &rows {
        if let Some(want) = t.rows.get(r.n as usize - 1) {
            let got = r.distinct_degrees();
            if got != *want {
                return Ok(Some(format!(
                    "table {} row n={}: expected {want:?}, got {got:?}",
                    t.id, r.n
                )));
            }
        }
    }
    println!("table {}: rows {lo}..{} match", t.id, hi.min(t.rows.len() as u32));
    Ok(None)
}

pub fn factor_scan(a: &ScanArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let ctx = field(&a.field)?;
    let fam = family(&a.family, &ctx)?;
    let rows = scan(&ctx, &fam, &ctx.elem(a.alpha)?, &ctx.elem(a.target)?, a.n.start, a.n.end, a.seed)?;
    export_factor_rows(&rows, export_format(a.out.format), &a.out.out)?;
    print_factor_rows(&rows);
    manifest::write(
        &a.out.out,
        "factor-scan",
        a,
        a.seed,
        start.elapsed(),
        factor_files(a.out.format),
    )
}

pub fn addcase(a: &AddArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let ctx = field(&a.field)?;
    let inst = AdditiveInstance::new(&ctx, a.l, ctx.elem(a.delta1)?, ctx.elem(a.delta2)?)?;
    let mut rep = String::new();
    let _ = writeln!(
        rep,
        "instance: field {ctx}, d = {}^{}, delta1 = {}, delta2 = {}",
        ctx.p(),
        a.l,
        a.delta1,
        a.delta2
    );
    let _ = writeln!(rep, "quick empty check: {}", quick_empty_check(&inst));
    let w = solve_system(&inst)?;
    let mut all_valid = true;
    match &w {
        None => {
            let _ = writeln!(rep, "verdict: EMPTY");
        }
        Some(w) => {
            let _ = writeln!(rep, "verdict: INFINITE");
            let _ = writeln!(rep, "witness (gamma, k, s1, s2): {w}; m = {}, n = {}", w.m(), w.n());
            if a.emit_lambdas > 0 {
                let a1 = ctx.elem(a.alpha1)?;
                let sols = construct_lambdas(&inst, w, &a1, a.emit_lambdas, None)?;
                for s in &sols {
                    let f = s.field();
                    let x1 = embed_subfield(&a1, f)?;
                    let x2 = embed_subfield(&(&a1 + &inst.delta1), f)?;
                    let b = embed_subfield(&(&a1 + &inst.delta2), f)?;
                    let ok = validate_witness(&inst, &s.witness, &s.lambda, &x1, &x2, &b)?;
                    all_valid &= ok;
                    let _ = writeln!(
                        rep,
                        "lambda {} in {} (k = {}): {}",
                        s.lambda.value(),
                        f,
                        s.witness.k,
                        if ok { "valid" } else { "INVALID" }
                    );
                }
            }
        }
    }
    print!("{rep}");
    fs::create_dir_all(&a.out).map_err(io)?;
    fs::write(a.out.join("addcase.txt"), &rep).map_err(io)?;
    manifest::write(&a.out, "addcase", a, 0, start.elapsed(), &["addcase.txt"])?;
    if all_valid {
        Ok(())
    } else {
        Err(Failure::Mismatch("a constructed parameter failed validation".into()))
    }
}

#[derive(Serialize)]
struct HeightRow {
    alpha: String,
    lambda: String,
    d: u64,
    hhat_num: i64,
    hhat_den: i64,
    exact: bool,
    lower_ok: Option<bool>,
    upper_ok: Option<bool>,
}

#[derive(Serialize)]
struct HeightJson<'a> {
    #[serde(flatten)]
    row: &'a HeightRow,
    heights: &'a [u64],
}

pub fn heights(a: &HeightArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let ctx = field(&a.field)?;
    let alpha = RationalFunction::parse(&ctx, &a.alpha)?;
    let lambda = RationalFunction::parse(&ctx, &a.lambda)?;
    let rep = canonical_height_estimate(&alpha, &lambda, a.d, a.n.end)?;
    let bounds = if rep.exact {
        Some(variation_bounds(&alpha, &lambda, a.d)?)
    } else {
        None
    };
    let heights: Vec<String> = rep.heights.iter().map(u64::to_string).collect();
    println!("h(f^n(alpha)), n >= 0: {}", heights.join(", "));
    println!(
        "hhat = {}{}",
        rep.hhat,
        if rep.exact { " (exact)" } else { " (estimate)" }
    );
    for l in &rep.local {
        println!("  local at {}: {} {:?}", l.place, l.value, l.status);
    }
    if let Some(b) = &bounds {
        println!("variation bounds: lower {}, upper {}", b.lower_ok, b.upper_ok);
    }
    let row = HeightRow {
        alpha: alpha.to_string(),
        lambda: lambda.to_string(),
        d: a.d,
        hhat_num: *rep.hhat.numer(),
        hhat_den: *rep.hhat.denom(),
        exact: rep.exact,
        lower_ok: bounds.map(|b| b.lower_ok),
        upper_ok: bounds.map(|b| b.upper_ok),
    };
    let dir: &Path = &a.out.out;
    fs::create_dir_all(dir).map_err(io)?;
    let name = match a.out.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_path(dir.join("heights.csv"))
                .map_err(|e| Failure::Io(e.to_string()))?;
            w.serialize(&row).map_err(|e| Failure::Io(e.to_string()))?;
            w.flush().map_err(io)?;
            "heights.csv"
        }
        Format::Json => {
            let doc = HeightJson {
                row: &row,
                heights: &rep.heights,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?;
            s.push('\n');
            fs::write(dir.join("heights.json"), s).map_err(io)?;
            "heights.json"
        }
    };
    manifest::write(dir, "heights", a, 0, start.elapsed(), &[name])
}
