//! Per-degree result files so an interrupted sweep can pick up where it
//! stopped. Thread count and seed do not affect results and are not hashed.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use super::export::RecordRow;
use super::{CollisionRecord, SearchConfig};
use crate::error::{Error, Result};

/// Hex digest identifying everything that determines a degree's records.
pub fn config_hash(cfg: &SearchConfig) -> String {
    let mut h = Sha256::new();
    h.update(cfg.ctx.to_string());
    h.update(b"|");
    h.update(cfg.family.to_string());
    h.update(b"|");
    for a in &cfg.points {
        h.update(a.value().to_le_bytes());
    }
    h.update(b"|");
    h.update(cfg.target.value().to_le_bytes());
    h.update(b"|");
    match cfg.step_cap {
        Some(c) => h.update(c.to_le_bytes()),
        None => h.update(b"default"),
    }
    hex::encode(&h.finalize()[..12])
}

fn path_for(cfg: &SearchConfig, degree: usize) -> Option<PathBuf> {
    let dir = cfg.checkpoint_dir.as_ref()?;
    Some(dir.join(format!("deg{degree:02}-{}.json", config_hash(cfg))))
}

pub(super) fn load(cfg: &SearchConfig, degree: usize) -> Result<Option<Vec<CollisionRecord>>> {
    let Some(path) = path_for(cfg, degree) else {
        return Ok(None);
    };
    if !cfg.resume || !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)?;
    let rows: Vec<RecordRow> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let recs = rows
        .iter()
        .map(|r| r.to_record(&cfg.ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(recs))
}

pub(super) fn store(cfg: &SearchConfig, degree: usize, records: &[CollisionRecord]) -> Result<()> {
    let Some(path) = path_for(cfg, degree) else {
        return Ok(());
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let rows: Vec<RecordRow> = records.iter().map(RecordRow::from_record).collect();
    let text = serde_json::to_string(&rows).map_err(|e| Error::Io(e.to_string()))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}
