//! Aggregation of pipeline results into correctness metrics, error
//! breakdowns, and assertion-count distributions.
//!
//! Percentages are computed per repeat on each pair's final outcome,
//! averaged across repeats, and rounded half-up to one decimal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use javakit::ast::call_sites;
use javakit::parse::parse_java;

use crate::diag::{categorize_compile, categorize_runtime, ErrorKind};
use crate::refine::PipelineResult;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no results to tally")]
    EmptyInput,
    #[error("repeats have unequal result counts: {0:?}")]
    UnequalRepeats(Vec<usize>),
    #[error("test source does not parse; cannot count assertions")]
    InvalidSource,
    #[error("io error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("report schema mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: u32, found: u32 },
    #[error("malformed report: {0}")]
    Malformed(String),
}

/// Aggregated metrics for one batch (or averaged repeats of one batch).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    /// Pairs per repeat.
    pub total: u64,
    /// Percentages, one decimal, averaged across repeats.
    pub syntactic_pct: f64,
    pub compile_pct: f64,
    pub pass_pct: f64,
    /// Diagnostic occurrences per category across all repeats.
    pub compile_breakdown: BTreeMap<ErrorKind, u64>,
    pub runtime_breakdown: BTreeMap<ErrorKind, u64>,
    /// Assertion-count buckets over final tests that parse.
    pub assertion_histogram: BTreeMap<String, u64>,
    pub repeats_averaged: u32,
}

/// Round half-up to one decimal (values are non-negative).
fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn pct(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

pub const ASSERTION_BUCKETS: &[(&str, u64, u64)] = &[
    ("0-2", 0, 2),
    ("3-5", 3, 5),
    ("6-8", 6, 8),
    ("9+", 9, u64::MAX),
];

fn bucket_of(n: u64) -> &'static str {
    for (label, lo, hi) in ASSERTION_BUCKETS {
        if n >= *lo && n <= *hi {
            return label;
        }
    }
    "9+"
}

/// Mergeable intermediate counts: tallying a batch equals tallying disjoint
/// shards of it and merging.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tally {
    pub total: u64,
    pub syntactic: u64,
    pub compiled: u64,
    pub passed: u64,
    pub compile_breakdown: BTreeMap<ErrorKind, u64>,
    pub runtime_breakdown: BTreeMap<ErrorKind, u64>,
    pub assertion_histogram: BTreeMap<String, u64>,
}

impl Tally {
    pub fn of(results: &[PipelineResult]) -> Tally {
        let mut t = Tally::default();
        for r in results {
            t.total += 1;
            if r.final_outcome.syntactic_ok {
                t.syntactic += 1;
            }
            if r.final_outcome.compiled {
                t.compiled += 1;
            }
            if r.final_outcome.passed {
                t.passed += 1;
            }
            for d in &r.final_outcome.diagnostics {
                *t.compile_breakdown
                    .entry(categorize_compile(d).kind)
                    .or_insert(0) += 1;
            }
            if let Some(f) = &r.final_outcome.runtime_failure {
                *t.runtime_breakdown
                    .entry(categorize_runtime(f).kind)
                    .or_insert(0) += 1;
            }
            if let Some(src) = r.final_test_source() {
                if let Ok(n) = count_assertions(src) {
                    *t.assertion_histogram
                        .entry(bucket_of(n as u64).to_string())
                        .or_insert(0) += 1;
                }
            }
        }
        t
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.syntactic += other.syntactic;
        self.compiled += other.compiled;
        self.passed += other.passed;
        for (k, v) in other.compile_breakdown {
            *self.compile_breakdown.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.runtime_breakdown {
            *self.runtime_breakdown.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.assertion_histogram {
            *self.assertion_histogram.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Tally a single batch.
pub fn tally(results: &[PipelineResult]) -> Result<MetricsReport, ReportError> {
    tally_repeats(std::slice::from_ref(&results))
}

/// Tally repeated batches (equal sizes), averaging percentages.
pub fn tally_repeats<R: AsRef<[PipelineResult]>>(
    repeats: &[R],
) -> Result<MetricsReport, ReportError> {
    if repeats.is_empty() || repeats.iter().any(|r| r.as_ref().is_empty()) {
        return Err(ReportError::EmptyInput);
    }
    let counts: Vec<usize> = repeats.iter().map(|r| r.as_ref().len()).collect();
    if counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(ReportError::UnequalRepeats(counts));
    }
    let total = counts[0] as u64;

    let mut syn_pcts = Vec::new();
    let mut compile_pcts = Vec::new();
    let mut pass_pcts = Vec::new();
    let mut merged = Tally::default();

    for repeat in repeats {
        let t = Tally::of(repeat.as_ref());
        syn_pcts.push(pct(t.syntactic, total));
        compile_pcts.push(pct(t.compiled, total));
        pass_pcts.push(pct(t.passed, total));
        merged = merged.merge(t);
    }

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(MetricsReport {
        schema_version: REPORT_SCHEMA_VERSION,
        total,
        syntactic_pct: round1(mean(&syn_pcts)),
        compile_pct: round1(mean(&compile_pcts)),
        pass_pct: round1(mean(&pass_pcts)),
        compile_breakdown: merged.compile_breakdown,
        runtime_breakdown: merged.runtime_breakdown,
        assertion_histogram: merged.assertion_histogram,
        repeats_averaged: repeats.len() as u32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownStage {
    Compile,
    Runtime,
}

/// Count every diagnostic occurrence (not per test) across final outcomes.
pub fn error_breakdown(
    results: &[PipelineResult],
    stage: BreakdownStage,
) -> BTreeMap<ErrorKind, u64> {
    let mut map = BTreeMap::new();
    for r in results {
        match stage {
            BreakdownStage::Compile => {
                for d in &r.final_outcome.diagnostics {
                    *map.entry(categorize_compile(d).kind).or_insert(0) += 1;
                }
            }
            BreakdownStage::Runtime => {
                if let Some(f) = &r.final_outcome.runtime_failure {
                    *map.entry(categorize_runtime(f).kind).or_insert(0) += 1;
                }
            }
        }
    }
    map
}

/// Static count of assertion-invocation statements: calls whose simple name
/// starts with `assert`, plus `fail(...)`.
pub fn count_assertions(test_source: &str) -> Result<usize, ReportError> {
    let body: String = test_source
        .lines()
        .filter(|l| {
            let t = l.trim_start();
            !t.starts_with("import ") && !t.starts_with("package ")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let direct = parse_java(&body);
    let parsed = if direct.is_valid() && !direct.unit.types.is_empty() {
        direct
    } else {
        let wrapped = format!("class AssertionProbe {{\n{body}\n}}\n");
        let p = parse_java(&wrapped);
        if !p.is_valid() || p.unit.types.is_empty() {
            return Err(ReportError::InvalidSource);
        }
        p
    };
    let mut n = 0;
    for decl in parsed.unit.all_types() {
        for m in &decl.methods {
            if let Some(stmts) = &m.body {
                n += call_sites(stmts)
                    .iter()
                    .filter(|c| c.name.starts_with("assert") || c.name == "fail")
                    .count();
            }
        }
    }
    Ok(n)
}

/// Serialization formats for [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// JSON object with a schema version field; round-trips losslessly.
    StructuredRecord,
    /// Tab-separated table for terminals and spreadsheets.
    DelimitedTable,
}

/// Render a report in the requested format.
pub fn render(report: &MetricsReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::StructuredRecord => {
            serde_json::to_string_pretty(report).expect("report serialization") + "\n"
        }
        ReportFormat::DelimitedTable => {
            let mut out = String::new();
            out.push_str("metric\tvalue\n");
            out.push_str(&format!("schema_version\t{}\n", report.schema_version));
            out.push_str(&format!("total\t{}\n", report.total));
            out.push_str(&format!("repeats_averaged\t{}\n", report.repeats_averaged));
            out.push_str(&format!("syntactic_pct\t{:.1}\n", report.syntactic_pct));
            out.push_str(&format!("compile_pct\t{:.1}\n", report.compile_pct));
            out.push_str(&format!("pass_pct\t{:.1}\n", report.pass_pct));
            out.push_str("\ncompile_error\tcount\n");
            for (k, v) in &report.compile_breakdown {
                out.push_str(&format!("{}\t{v}\n", k.as_str()));
            }
            out.push_str("\nruntime_error\tcount\n");
            for (k, v) in &report.runtime_breakdown {
                out.push_str(&format!("{}\t{v}\n", k.as_str()));
            }
            out.push_str("\nassertions_per_test\tcount\n");
            for (k, v) in &report.assertion_histogram {
                out.push_str(&format!("{k}\t{v}\n"));
            }
            out
        }
    }
}

/// Write a report to disk.
pub fn emit(
    report: &MetricsReport,
    format: ReportFormat,
    path: &std::path::Path,
) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| ReportError::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(path, render(report, format)).map_err(|e| ReportError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Parse a structured-record report back.
pub fn read_report(path: &std::path::Path) -> Result<MetricsReport, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReportError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let report: MetricsReport =
        serde_json::from_str(&text).map_err(|e| ReportError::Malformed(e.to_string()))?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(ReportError::SchemaMismatch {
            expected: REPORT_SCHEMA_VERSION,
            found: report.schema_version,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::synthetic_result;

    fn batch(total: usize, compiled: usize, passed: usize, syntactic: usize) -> Vec<PipelineResult> {
        (0..total)
            .map(|i| synthetic_result(i < syntactic, i < compiled, i < passed))
            .collect()
    }

    #[test]
    fn single_batch_percentages() {
        let results = batch(1000, 421, 248, 1000);
        let report = tally(&results).unwrap();
        assert_eq!(report.total, 1000);
        assert_eq!(report.compile_pct, 42.1);
        assert_eq!(report.pass_pct, 24.8);
        assert_eq!(report.syntactic_pct, 100.0);
        assert_eq!(report.repeats_averaged, 1);
    }

    #[test]
    fn repeats_averaged_half_up() {
        let repeats = vec![
            batch(100, 73, 41, 100),
            batch(100, 73, 41, 100),
            batch(100, 74, 41, 100),
        ];
        let report = tally_repeats(&repeats).unwrap();
        assert_eq!(report.compile_pct, 73.3);
        assert_eq!(report.pass_pct, 41.0);
        assert_eq!(report.repeats_averaged, 3);
    }

    #[test]
    fn all_failing_syntax_is_all_zero() {
        let results = batch(10, 0, 0, 0);
        let report = tally(&results).unwrap();
        assert_eq!(report.syntactic_pct, 0.0);
        assert_eq!(report.compile_pct, 0.0);
        assert_eq!(report.pass_pct, 0.0);
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(
            tally(&[]),
            Err(ReportError::EmptyInput)
        ));
        let uneven: Vec<Vec<PipelineResult>> = vec![batch(2, 1, 1, 2), batch(3, 1, 1, 3)];
        assert!(matches!(
            tally_repeats(&uneven),
            Err(ReportError::UnequalRepeats(_))
        ));
    }

    #[test]
    fn counts_assertions_statically() {
        let src = r#"@Test
public void t() {
    assertEquals(1, 1);
    assertEquals(2, 2);
    assertEquals(3, 3);
}"#;
        assert_eq!(count_assertions(src).unwrap(), 3);
        assert_eq!(count_assertions("@Test\npublic void t() { int x = 1; }").unwrap(), 0);
        let looped = r#"@Test
public void t() {
    for (int i = 0; i < 10; i++) {
        assertTrue(i < 10);
    }
    fail("end");
}"#;
        assert_eq!(count_assertions(looped).unwrap(), 2);
        assert!(count_assertions("not java ( ; {").is_err());
    }

    #[test]
    fn report_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        let results = batch(8, 4, 2, 8);
        let report = tally(&results).unwrap();
        emit(&report, ReportFormat::StructuredRecord, &path).unwrap();
        let back = read_report(&path).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn delimited_table_renders_rows() {
        let results = batch(8, 4, 2, 8);
        let report = tally(&results).unwrap();
        let table = render(&report, ReportFormat::DelimitedTable);
        assert!(table.contains("compile_pct\t50.0"));
        assert!(table.contains("total\t8"));
    }

    #[test]
    fn tally_permutation_invariant() {
        let mut results = batch(20, 9, 4, 18);
        let a = tally(&results).unwrap();
        results.reverse();
        let b = tally(&results).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sharded_merge_equals_unsharded() {
        let results = batch(50, 23, 11, 47);
        let whole = Tally::of(&results);
        let merged = results
            .chunks(7)
            .map(Tally::of)
            .fold(Tally::default(), Tally::merge);
        assert_eq!(whole, merged);
    }
}
