use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::Failure;

#[derive(Serialize)]
pub struct RunManifest<'a, C: Serialize> {
    pub command: &'a str,
    pub config: &'a C,
    pub version: &'a str,
    pub rng_seed: u64,
    pub elapsed_ms: u128,
    /// sha256 of each output file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
}

pub fn write<C: Serialize>(
    dir: &Path,
    command: &str,
    config: &C,
    rng_seed: u64,
    elapsed: Duration,
    files: &[&str],
) -> Result<(), Failure> {
    let mut outputs = BTreeMap::new();
    for name in files {
        let bytes = fs::read(dir.join(name)).map_err(|e| Failure::Io(format!("{name}: {e}")))?;
        outputs.insert(name.to_string(), hex::encode(Sha256::digest(&bytes)));
    }
    let m = RunManifest {
        command,
        config,
        version: env!("CARGO_PKG_VERSION"),
        rng_seed,
        elapsed_ms: elapsed.as_millis(),
        outputs,
    };
    let mut text = serde_json::to_string_pretty(&m).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    fs::write(dir.join("manifest.json"), text).map_err(|e| Failure::Io(e.to_string()))
}
