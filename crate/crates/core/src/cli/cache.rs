//! Append-only JSONL cache of per-field results. Numbers are decimal strings.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1.0";
const SCHEMA_MAJOR: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedEntry {
    pub p: String,
    pub e: String,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema_version: String,
    pub field_descriptor: String,
    pub disc: String,
    pub signature: Vec<String>,
    pub class_invariants: Vec<String>,
    pub polya_invariants: Vec<String>,
    pub ramified: Vec<RamifiedEntry>,
    pub unit_norm: Option<String>,
    /// check id → predicted value.
    pub predictions: BTreeMap<String, String>,
    pub computed_at: String,
    pub seed: String,
    pub budgets: String,
    #[serde(default)]
    pub certified: bool,
}

impl CacheRecord {
    pub fn matches(&self, descriptor: &str, seed: u64, budget: &str) -> bool {
        self.field_descriptor == descriptor && self.seed == seed.to_string() && self.budgets == budget
    }
}

pub fn now_stamp() -> String {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    secs.to_string()
}

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records in file order. A missing file is an empty cache.
    pub fn read_all(&self) -> Result<Vec<CacheRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::Io(format!("{}: {e}", self.path.display()))),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::Io(format!("{}: {e}", self.path.display())))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("{} line {}: {e}", self.path.display(), i + 1)))?;
            let major = rec.schema_version.split('.').next().unwrap_or("");
            if major != SCHEMA_MAJOR {
                return Err(Error::Parse(format!(
                    "{} line {}: unsupported schema version {}",
                    self.path.display(),
                    i + 1,
                    rec.schema_version
                )));
            }
            out.push(rec);
        }
        Ok(out)
    }

    /// Latest record per key, later lines winning.
    pub fn latest(&self, seed: u64, budget: &str) -> Result<BTreeMap<String, CacheRecord>> {
        let mut map = BTreeMap::new();
        for r in self.read_all()? {
            if r.seed == seed.to_string() && r.budgets == budget {
                map.insert(r.field_descriptor.clone(), r);
            }
        }
        Ok(map)
    }

    /// Appends records, one `write` per line so concurrent appenders never interleave
    /// partial lines.
    pub fn append(&self, records: &[CacheRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Io(format!("{}: {e}", self.path.display())))?;
        for r in records {
            let mut line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
            line.push('\n');
            f.write_all(line.as_bytes()).map_err(|e| Error::Io(format!("{}: {e}", self.path.display())))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(desc: &str) -> CacheRecord {
        CacheRecord {
            schema_version: SCHEMA_VERSION.into(),
            field_descriptor: desc.into(),
            disc: "-84".into(),
            signature: vec!["0".into(), "1".into()],
            class_invariants: vec!["2".into(), "2".into()],
            polya_invariants: vec!["2".into(), "2".into()],
            ramified: vec![RamifiedEntry { p: "2".into(), e: "2".into(), f: "1".into() }],
            unit_norm: None,
            predictions: BTreeMap::from([("hilbert".to_string(), "4".to_string())]),
            computed_at: "0".into(),
            seed: "0".into(),
            budgets: "default".into(),
            certified: true,
        }
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = std::env::temp_dir().join(format!("polya-cache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.jsonl");
        let _ = std::fs::remove_file(&path);
        let c = Cache::new(&path);
        assert!(c.read_all().unwrap().is_empty());
        c.append(&[record("quad:-21"), record("quad:-5")]).unwrap();
        assert_eq!(c.read_all().unwrap(), vec![record("quad:-21"), record("quad:-5")]);
        assert_eq!(c.latest(0, "default").unwrap().len(), 2);
        assert!(c.latest(1, "default").unwrap().is_empty());
        std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{not json\n").unwrap();
        let err = c.read_all().unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let mut r = record("quad:-1");
        r.schema_version = "2.0".into();
        std::fs::write(&path, serde_json::to_string(&r).unwrap() + "\n").unwrap();
        assert!(c.read_all().unwrap_err().to_string().contains("schema version 2.0"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
