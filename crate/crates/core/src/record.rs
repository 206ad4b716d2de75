//! Line-delimited record files: data-pair lists and pipeline results.
//!
//! Results files start with a schema-versioned meta record followed by one
//! result record per pair, in batch order. Everything serialized here is a
//! deterministic function of the run's inputs (no timestamps, no absolute
//! scratch paths), so replayed runs produce byte-identical files.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::DataPair;
use crate::refine::{PipelineMode, PipelineResult};

pub const RESULTS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {details}")]
    Malformed { line: usize, details: String },
    #[error("results schema mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: u32, found: u32 },
    #[error("missing meta record header")]
    MissingMeta,
}

/// Header record of a results file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsMeta {
    pub schema_version: u32,
    pub mode: PipelineMode,
    pub model: String,
    pub pair_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum ResultsLine {
    Meta(ResultsMeta),
    Result(Box<PipelineResult>),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RecordError + '_ {
    move |source| RecordError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write one pair per line.
pub fn write_pairs(path: &Path, pairs: &[DataPair]) -> Result<(), RecordError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    for pair in pairs {
        let line = serde_json::to_string(pair).expect("pair serialization");
        writeln!(file, "{line}").map_err(io_err(path))?;
    }
    Ok(())
}

pub fn read_pairs(path: &Path) -> Result<Vec<DataPair>, RecordError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let pair: DataPair = serde_json::from_str(line).map_err(|e| RecordError::Malformed {
            line: i + 1,
            details: e.to_string(),
        })?;
        out.push(pair);
    }
    Ok(out)
}

/// Write a results file: meta header, then one result per line.
pub fn write_results(
    path: &Path,
    meta: &ResultsMeta,
    results: &[PipelineResult],
) -> Result<(), RecordError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    let header = serde_json::to_string(&ResultsLine::Meta(meta.clone()))
        .expect("meta serialization");
    writeln!(file, "{header}").map_err(io_err(path))?;
    for r in results {
        let line = serde_json::to_string(&ResultsLine::Result(Box::new(r.clone())))
            .expect("result serialization");
        writeln!(file, "{line}").map_err(io_err(path))?;
    }
    Ok(())
}

/// Read a results file, validating the schema version.
pub fn read_results(path: &Path) -> Result<(ResultsMeta, Vec<PipelineResult>), RecordError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut meta: Option<ResultsMeta> = None;
    let mut results = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ResultsLine =
            serde_json::from_str(line).map_err(|e| RecordError::Malformed {
                line: i + 1,
                details: e.to_string(),
            })?;
        match parsed {
            ResultsLine::Meta(m) => {
                if m.schema_version != RESULTS_SCHEMA_VERSION {
                    return Err(RecordError::SchemaMismatch {
                        expected: RESULTS_SCHEMA_VERSION,
                        found: m.schema_version,
                    });
                }
                meta = Some(m);
            }
            ResultsLine::Result(r) => results.push(*r),
        }
    }
    let meta = meta.ok_or(RecordError::MissingMeta)?;
    Ok((meta, results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{dummy_pair, synthetic_result};

    #[test]
    fn pairs_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.jsonl");
        let pairs = vec![dummy_pair(1), dummy_pair(2)];
        write_pairs(&path, &pairs).unwrap();
        assert_eq!(read_pairs(&path).unwrap(), pairs);
    }

    #[test]
    fn results_roundtrip_and_schema_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let meta = ResultsMeta {
            schema_version: RESULTS_SCHEMA_VERSION,
            mode: PipelineMode::Full,
            model: "gpt-3.5-turbo".to_string(),
            pair_count: 2,
        };
        let results = vec![synthetic_result(true, true, true), synthetic_result(true, false, false)];
        write_results(&path, &meta, &results).unwrap();
        let (meta2, results2) = read_results(&path).unwrap();
        assert_eq!(meta2, meta);
        assert_eq!(results2, results);

        // Tampered schema version is rejected.
        let text = std::fs::read_to_string(&path).unwrap();
        let bad = text.replace("\"schema_version\":1", "\"schema_version\":99");
        std::fs::write(&path, bad).unwrap();
        assert!(matches!(
            read_results(&path),
            Err(RecordError::SchemaMismatch { found: 99, .. })
        ));
    }

    #[test]
    fn write_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.jsonl");
        let b = dir.path().join("b.jsonl");
        let meta = ResultsMeta {
            schema_version: RESULTS_SCHEMA_VERSION,
            mode: PipelineMode::Basic,
            model: "m".to_string(),
            pair_count: 1,
        };
        let results = vec![synthetic_result(true, true, false)];
        write_results(&a, &meta, &results).unwrap();
        write_results(&b, &meta, &results).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}
