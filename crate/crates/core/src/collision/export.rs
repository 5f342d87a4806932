use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CollisionRecord, DegreeTally, FactorRow, TallyRow};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::orbit::OrbitOutcome;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub degree: usize,
    pub candidates: u64,
    pub successes: u64,
    pub inconclusive: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub degree: usize,
    pub poly: String,
    pub success: bool,
    pub outcomes: String,
}

impl RecordRow {
    pub fn from_record(r: &CollisionRecord) -> RecordRow {
        RecordRow {
            degree: r.degree,
            poly: r.g.to_string(),
            success: r.success,
            outcomes: r
                .outcomes
                .iter()
                .map(OrbitOutcome::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    pub fn to_record(&self, ctx: &FieldCtx) -> Result<CollisionRecord> {
        let outcomes = if self.outcomes.is_empty() {
            Vec::new()
        } else {
            self.outcomes
                .split(';')
                .map(str::parse)
                .collect::<Result<Vec<OrbitOutcome>>>()?
        };
        Ok(CollisionRecord {
            g: Poly::parse(ctx, &self.poly)?,
            degree: self.degree,
            outcomes,
            success: self.success,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    summary: Vec<SummaryRow>,
    records: Vec<RecordRow>,
}

fn summary_rows(tally: &DegreeTally) -> Vec<SummaryRow> {
    tally
        .rows
        .iter()
        .map(|(&degree, r)| SummaryRow {
            degree,
            candidates: r.candidates,
            successes: r.successes,
            inconclusive: r.inconclusive,
        })
        .collect()
}

fn sorted_rows(records: &[CollisionRecord]) -> Vec<RecordRow> {
    let mut recs: Vec<&CollisionRecord> = records.iter().collect();
    recs.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.g.canonical_cmp(&b.g)));
    recs.into_iter().map(RecordRow::from_record).collect()
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Write `summary.csv` and `records.csv`, or `results.json`, into `dir`.
pub fn export_results(
    tally: &DegreeTally,
    records: &[CollisionRecord],
    format: ExportFormat,
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let summary = summary_rows(tally);
    let rows = sorted_rows(records);
    match format {
        ExportFormat::Csv => {
            write_csv(
                &dir.join("summary.csv"),
                &["degree", "candidates", "successes", "inconclusive"],
                &summary,
            )?;
            write_csv(
                &dir.join("records.csv"),
                &["degree", "poly", "success", "outcomes"],
                &rows,
            )
        }
        ExportFormat::Json => {
            let doc = JsonDoc {
                summary,
                records: rows,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            fs::write(dir.join("results.json"), s)?;
            Ok(())
        }
    }
}

/// Read back a `results.json` written by [`export_results`].
pub fn import_json(ctx: &FieldCtx, path: &Path) -> Result<(DegreeTally, Vec<CollisionRecord>)> {
    let text = fs::read_to_string(path)?;
    let doc: JsonDoc = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut tally = DegreeTally::default();
    for r in doc.summary {
        tally.rows.insert(
            r.degree,
            TallyRow {
                candidates: r.candidates,
                successes: r.successes,
                inconclusive: r.inconclusive,
            },
        );
    }
    let records = doc
        .records
        .iter()
        .map(|r| r.to_record(ctx))
        .collect::<Result<_>>()?;
    Ok((tally, records))
}

#[derive(Serialize)]
struct FactorCsvRow {
    n: u32,
    degree: usize,
    multiplicity: u32,
}

/// Write `factors.csv` (`n,degree,multiplicity`, one line per distinct
/// factor) or `factors.json` into `dir`.
pub fn export_factor_rows(rows: &[FactorRow], format: ExportFormat, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    match format {
        ExportFormat::Csv => {
            let flat: Vec<FactorCsvRow> = rows
                .iter()
                .flat_map(|r| {
                    r.factors.iter().map(|&(degree, multiplicity)| FactorCsvRow {
                        n: r.n,
                        degree,
                        multiplicity,
                    })
                })
                .collect();
            write_csv(&dir.join("factors.csv"), &["n", "degree", "multiplicity"], &flat)
        }
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            fs::write(dir.join("factors.json"), s)?;
            Ok(())
        }
    }
}
