//! The ten-test structural validation suite.
//!
//! Each test is a pure function of the scene, the span table, and the
//! validation parameters; the runner executes them in fixed id order and
//! assembles a [`SuiteReport`]. An unresolvable span-table key is a
//! configuration error that makes the suite not-evaluable, which is
//! distinct from a structural failure.

mod checks;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use checks::{
    cantilever, deflection, dual_end, gap_detection, joist_deflection, load_path, oc_spacing,
    roof_coverage, span_limits, stability, standard_dimensions,
};

use crate::contact::compute_support;
use crate::params::ValidationParams;
use crate::scene::Scene;
use crate::span_table::SpanTable;

/// Identifiers of the ten tests, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum TestId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
}

impl TestId {
    pub const ALL: [TestId; 10] = [
        TestId::T1,
        TestId::T2,
        TestId::T3,
        TestId::T4,
        TestId::T5,
        TestId::T6,
        TestId::T7,
        TestId::T8,
        TestId::T9,
        TestId::T10,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TestId::T1 => "T1",
            TestId::T2 => "T2",
            TestId::T3 => "T3",
            TestId::T4 => "T4",
            TestId::T5 => "T5",
            TestId::T6 => "T6",
            TestId::T7 => "T7",
            TestId::T8 => "T8",
            TestId::T9 => "T9",
            TestId::T10 => "T10",
        }
    }

    /// Human-readable test name.
    pub fn name(self) -> &'static str {
        match self {
            TestId::T1 => "load path",
            TestId::T2 => "span limits",
            TestId::T3 => "o.c. spacing",
            TestId::T4 => "standard dimensions",
            TestId::T5 => "deflection L/360",
            TestId::T6 => "roof coverage",
            TestId::T7 => "gap detection",
            TestId::T8 => "cantilever limits",
            TestId::T9 => "stability score",
            TestId::T10 => "dual-end connection",
        }
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Pass/fail verdict for one test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A measured value with its unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: &'static str,
}

impl Quantity {
    pub fn meters(value: f64) -> Self {
        Quantity { value, unit: "m" }
    }

    pub fn ratio(value: f64) -> Self {
        Quantity { value, unit: "ratio" }
    }
}

/// One recorded rule breach: which test, which members, what was measured
/// against which limit, and a feedback line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub test: TestId,
    pub members: Vec<String>,
    pub measured: Quantity,
    pub limit: Quantity,
    pub message: String,
}

/// Outcome of a single test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub id: TestId,
    pub violations: Vec<Violation>,
}

impl TestResult {
    pub(crate) fn new(id: TestId, violations: Vec<Violation>) -> Self {
        TestResult { id, violations }
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        if self.pass() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Aggregated verdicts and violations for one scene.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub verdicts: BTreeMap<TestId, Verdict>,
    pub violations: Vec<Violation>,
    /// Topological Stability Index (supported fraction).
    pub tsi: f64,
    pub overall_pass: bool,
}

impl SuiteReport {
    pub fn failed_tests(&self) -> Vec<TestId> {
        TestId::ALL
            .iter()
            .copied()
            .filter(|t| self.verdicts.get(t) == Some(&Verdict::Fail))
            .collect()
    }
}

/// Suite-level configuration errors (the scene could not be evaluated).
#[derive(Debug, Error)]
pub enum ValidateError {
    #[error(
        "no span-table entry for member {member}: cross-section {width_mm:.0}x{depth_mm:.0} mm \
         resolves to standard size {key}, which the table lacks"
    )]
    MissingSpanEntry {
        member: String,
        width_mm: f64,
        depth_mm: f64,
        key: String,
    },
    #[error("span table resolution needs a non-empty standard lumber set")]
    EmptyLumberSet,
}

/// Runs T1 through T10 in fixed order. Deterministic across runs and
/// thread counts; shared computations (support fixed point, roof grid)
/// are evaluated once.
pub fn run_suite(
    scene: &Scene,
    table: &SpanTable,
    params: &ValidationParams,
) -> Result<SuiteReport, ValidateError> {
    let support = compute_support(scene, &params.contact);
    let grid = checks::RoofGrid::build(scene, params);

    let results = [
        checks::load_path_with(scene, &support),
        checks::span_limits(scene, table, params)?,
        checks::oc_spacing(scene, params),
        checks::standard_dimensions(scene, params),
        checks::deflection(scene, params),
        checks::roof_coverage_with(&grid, params),
        checks::gap_detection_with(&grid, params),
        checks::cantilever(scene, params),
        checks::stability_with(scene, &support),
        checks::dual_end(scene, params),
    ];

    let mut verdicts = BTreeMap::new();
    let mut violations = Vec::new();
    for result in results {
        verdicts.insert(result.id, result.verdict());
        violations.extend(result.violations);
    }
    let overall_pass = verdicts.values().all(|v| *v == Verdict::Pass);

    Ok(SuiteReport {
        verdicts,
        violations,
        tsi: support.tsi,
        overall_pass,
    })
}

/// Formats a length for feedback text: up to three decimals, trailing
/// zeros trimmed, at least one decimal kept (`3.0`, `0.812`, `4.326`).
pub(crate) fn fmt_quantity(value: f64) -> String {
    let mut s = format!("{value:.3}");
    if s.contains('.') {
        while s.ends_with('0') && !s.ends_with(".0") {
            s.pop();
        }
    }
    s
}

/// One feedback line per violation, ordered by test id then first member
/// name. The machine-readable variant is the serialized violation list.
pub fn format_feedback(report: &SuiteReport) -> String {
    let mut ordered: Vec<&Violation> = report.violations.iter().collect();
    ordered.sort_by(|a, b| {
        (a.test, a.members.first(), &a.message).cmp(&(b.test, b.members.first(), &b.message))
    });
    ordered
        .iter()
        .map(|v| v.message.as_str())
        .collect::<Vec<_>>()
        .join("\n")
}
