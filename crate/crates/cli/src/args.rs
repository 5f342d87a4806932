use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "collide", version, about = "Orbit collisions for z^d + λ over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Sweep irreducible moduli by degree and count common-orbit parameters.
    Search(SearchArgs),
    /// Rerun one of the bundled experiments (1 to 10) and compare.
    Reproduce(ReproduceArgs),
    /// Factor f_λ^n(α) - β as a polynomial in λ.
    FactorScan(ScanArgs),
    /// Decide a collision problem for z^{p^l} + λ and build parameters.
    Addcase(AddArgs),
    /// Canonical height of α under z^d + λ over F_q(t).
    Heights(HeightArgs),
}

/// `A:B`, or a single value `A` meaning `A:A`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Range {
    pub start: u32,
    pub end: u32,
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let a = parse(s)?;
                (a, a)
            }
        };
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(Range { start: a, end: b })
    }
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Extension degree of F_q over F_p.
    #[arg(long, default_value_t = 1, alias = "q-ext")]
    pub k: u32,
    /// Defining polynomial of F_q, constant term first, e.g. [1,0,1].
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct OutArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct FamilyArgs {
    /// Exponent of the pure family z^d + λ.
    #[arg(long)]
    pub d: Option<u64>,
    /// Coefficients of g0 in g0(z) + λ, e.g. [0,1,0,1] for z^3 + z.
    #[arg(long)]
    pub family_poly: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Comma-separated element encodings.
    #[arg(long)]
    pub points: String,
    /// Encoding of β.
    #[arg(long)]
    pub target: u64,
    /// Degrees of the moduli, `A:B`.
    #[arg(long)]
    pub deg: Range,
    /// Orbit steps per point before giving up; default min(q^deg + 1, 10^7).
    #[arg(long)]
    pub step_cap: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
    /// Reuse per-degree checkpoints from an earlier run with the same config.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ReproduceArgs {
    pub table: u32,
    /// Override the degree range of a count table.
    #[arg(long)]
    pub deg: Option<Range>,
    /// Override the row range of a factor table.
    #[arg(long)]
    pub n: Option<Range>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
    #[arg(long)]
    pub resume: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub alpha: u64,
    #[arg(long)]
    pub target: u64,
    /// Iterate indices, `A:B`.
    #[arg(long)]
    pub n: Range,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct AddArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// d = p^l.
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub delta1: u64,
    #[arg(long)]
    pub delta2: u64,
    /// α_1 used when building parameters.
    #[arg(long, default_value_t = 0)]
    pub alpha1: u64,
    /// Number of parameters λ to construct and validate.
    #[arg(long, default_value_t = 0)]
    pub emit_lambdas: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct HeightArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Rational function in t, `N` or `N/D` with polynomials like [0,1].
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    pub d: u64,
    /// Iterates 0..=B are computed for `--n A:B`.
    #[arg(long, default_value = "0:8")]
    pub n: Range,
    #[command(flatten)]
    pub out: OutArgs,
}
