//! Corpus-scale batch validation and failure analytics.
//!
//! A corpus run validates every scene file in a directory, aggregates
//! marginal per-test failure rates, and assigns each failing scene to
//! its exact failed-test set (its co-failure pattern). Results are
//! byte-identical regardless of worker count or processing order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::params::ValidationParams;
use crate::scene::{parse_scene, Scene};
use crate::span_table::SpanTable;
use crate::validate::{run_suite, SuiteReport, TestId, ValidateError};

/// Per-scene summary kept in the corpus report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SceneDigest {
    pub id: String,
    pub overall_pass: bool,
    pub failed: Vec<TestId>,
    pub tsi: f64,
    pub violation_count: usize,
}

/// One exact failed-test set and how many scenes landed on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CofailurePattern {
    pub tests: Vec<TestId>,
    pub count: usize,
    /// Fraction of failing scenes assigned to this pattern.
    pub fraction: f64,
}

/// A scene file that could not be evaluated (unreadable, malformed, or a
/// span-table configuration error). Excluded from rate denominators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileIssue {
    pub file: String,
    pub error: String,
}

/// Corpus-level aggregation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    /// Scenes successfully evaluated.
    pub total: usize,
    pub pass_rate: f64,
    /// Marginal failure rate per test: failing scenes / total.
    pub per_test_failure_rate: BTreeMap<TestId, f64>,
    /// Exact failed-test sets, ranked by count (descending) then by
    /// lexicographic test set.
    pub cofailure_patterns: Vec<CofailurePattern>,
    pub per_scene: Vec<SceneDigest>,
    pub errors: Vec<FileIssue>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus directory {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corpus directory {0} contains no scene files")]
    Empty(PathBuf),
}

/// Validates a batch of already-loaded scenes. `workers` selects the
/// execution mode: `Some(1)` forces the sequential path, `Some(n)` uses
/// a bounded pool, `None` uses the default pool (or runs sequentially
/// when the `parallel` feature is disabled). The output is identical in
/// every mode.
pub fn validate_scenes(
    scenes: &[(String, Scene)],
    table: &SpanTable,
    params: &ValidationParams,
    workers: Option<usize>,
) -> Vec<(String, Result<SuiteReport, ValidateError>)> {
    let eval = |(id, scene): &(String, Scene)| (id.clone(), run_suite(scene, table, params));
    run_batch(scenes, workers, eval)
}

#[cfg(feature = "parallel")]
fn run_batch<T: Sync, U: Send>(
    items: &[T],
    workers: Option<usize>,
    eval: impl Fn(&T) -> U + Sync + Send,
) -> Vec<U> {
    match workers {
        Some(1) => items.iter().map(eval).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(|| items.par_iter().map(eval).collect()),
        None => items.par_iter().map(eval).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_batch<T, U>(items: &[T], _workers: Option<usize>, eval: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(eval).collect()
}

/// Validates every `.json` scene in a directory and aggregates the
/// results. Unreadable or unevaluable files are reported per-file and
/// excluded from denominators.
pub fn run_corpus(
    directory: &Path,
    table: &SpanTable,
    params: &ValidationParams,
    workers: Option<usize>,
) -> Result<CorpusReport, CorpusError> {
    let io_err = |source| CorpusError::Io { path: directory.to_path_buf(), source };
    let mut files: Vec<PathBuf> = std::fs::read_dir(directory)
        .map_err(io_err)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CorpusError::Empty(directory.to_path_buf()));
    }

    let mut errors = Vec::new();
    let mut scenes: Vec<(String, Scene)> = Vec::new();
    for path in &files {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let loaded = std::fs::read(path)
            .map_err(|e| e.to_string())
            .and_then(|bytes| parse_scene(&bytes).map_err(|e| e.to_string()));
        match loaded {
            Ok(scene) => scenes.push((id, scene)),
            Err(error) => errors.push(FileIssue { file: id, error }),
        }
    }

    let mut digests = Vec::new();
    for (id, outcome) in validate_scenes(&scenes, table, params, workers) {
        match outcome {
            Ok(report) => digests.push(digest(id, &report)),
            Err(e) => errors.push(FileIssue { file: id, error: e.to_string() }),
        }
    }

    Ok(aggregate(digests, errors))
}

fn digest(id: String, report: &SuiteReport) -> SceneDigest {
    SceneDigest {
        id,
        overall_pass: report.overall_pass,
        failed: report.failed_tests(),
        tsi: report.tsi,
        violation_count: report.violations.len(),
    }
}

fn aggregate(per_scene: Vec<SceneDigest>, errors: Vec<FileIssue>) -> CorpusReport {
    let total = per_scene.len();
    let passing = per_scene.iter().filter(|d| d.overall_pass).count();
    let failing = total - passing;

    let mut per_test_failure_rate = BTreeMap::new();
    for test in TestId::ALL {
        let count = per_scene.iter().filter(|d| d.failed.contains(&test)).count();
        per_test_failure_rate.insert(test, if total == 0 { 0.0 } else { count as f64 / total as f64 });
    }

    let mut patterns: BTreeMap<Vec<TestId>, usize> = BTreeMap::new();
    for d in per_scene.iter().filter(|d| !d.overall_pass) {
        *patterns.entry(d.failed.clone()).or_default() += 1;
    }
    let mut cofailure_patterns: Vec<CofailurePattern> = patterns
        .into_iter()
        .map(|(tests, count)| CofailurePattern {
            tests,
            count,
            fraction: count as f64 / failing as f64,
        })
        .collect();
    cofailure_patterns.sort_by(|a, b| b.count.cmp(&a.count).then(a.tests.cmp(&b.tests)));

    CorpusReport {
        total,
        pass_rate: if total == 0 { 0.0 } else { passing as f64 / total as f64 },
        per_test_failure_rate,
        cofailure_patterns,
        per_scene,
        errors,
    }
}

/// Machine output for corpus mode: one JSON record per scene (in file
/// order) and a trailing summary record, line-delimited and versioned.
pub fn machine_lines(report: &CorpusReport) -> String {
    #[derive(Serialize)]
    struct SceneLine<'a> {
        schema_version: u32,
        record: &'static str,
        #[serde(flatten)]
        digest: &'a SceneDigest,
    }
    #[derive(Serialize)]
    struct SummaryLine<'a> {
        schema_version: u32,
        record: &'static str,
        total: usize,
        pass_rate: f64,
        per_test_failure_rate: &'a BTreeMap<TestId, f64>,
        cofailure_patterns: &'a [CofailurePattern],
        errors: &'a [FileIssue],
    }

    let mut out = String::new();
    for digest in &report.per_scene {
        let line = SceneLine { schema_version: 1, record: "scene", digest };
        out.push_str(&serde_json::to_string(&line).expect("digest serialization"));
        out.push('\n');
    }
    let summary = SummaryLine {
        schema_version: 1,
        record: "summary",
        total: report.total,
        pass_rate: report.pass_rate,
        per_test_failure_rate: &report.per_test_failure_rate,
        cofailure_patterns: &report.cofailure_patterns,
        errors: &report.errors,
    };
    out.push_str(&serde_json::to_string(&summary).expect("summary serialization"));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// LoD 350 mapping
// ---------------------------------------------------------------------------

/// The four constructibility requirements the tests map onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LodRequirement {
    AccurateGeometry,
    NoHardClashes,
    InterfaceDefinition,
    LoadPathIntegrity,
}

impl LodRequirement {
    pub fn label(self) -> &'static str {
        match self {
            LodRequirement::AccurateGeometry => "(i) accurate geometry",
            LodRequirement::NoHardClashes => "(ii) no hard clashes",
            LodRequirement::InterfaceDefinition => "(iii) interface definition",
            LodRequirement::LoadPathIntegrity => "(iv) load-path integrity",
        }
    }

    /// What failing this requirement means, per the fixed mapping table.
    pub fn narrative(self) -> &'static str {
        match self {
            LodRequirement::AccurateGeometry => {
                "Non-standard cross-sections; spans exceeding code limits; serviceability \
                 failure under design load"
            }
            LodRequirement::NoHardClashes => {
                "Members overlap or leave gaps wider than one stud bay; framing cannot be \
                 physically assembled"
            }
            LodRequirement::InterfaceDefinition => {
                "Rafters/studs free at one end (hinge failure under load); roof plane \
                 incompletely framed"
            }
            LodRequirement::LoadPathIntegrity => {
                "Floating members; unsupported elevated sections; stability index below 1.0"
            }
        }
    }
}

/// The fixed test-to-requirement mapping; total over the ten tests, each
/// covered exactly once.
pub fn lod_requirement(test: TestId) -> LodRequirement {
    match test {
        TestId::T4 | TestId::T2 | TestId::T5 => LodRequirement::AccurateGeometry,
        TestId::T7 | TestId::T3 => LodRequirement::NoHardClashes,
        TestId::T10 | TestId::T6 => LodRequirement::InterfaceDefinition,
        TestId::T1 | TestId::T9 | TestId::T8 => LodRequirement::LoadPathIntegrity,
    }
}

/// One finding per failed test, mapped onto its requirement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LodFinding {
    pub test: TestId,
    pub requirement: LodRequirement,
    pub narrative: String,
}

pub fn lod_map(report: &SuiteReport) -> Vec<LodFinding> {
    report
        .failed_tests()
        .into_iter()
        .map(|test| {
            let requirement = lod_requirement(test);
            LodFinding {
                test,
                requirement,
                narrative: requirement.narrative().to_string(),
            }
        })
        .collect()
}
