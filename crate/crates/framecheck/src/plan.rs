//! Construction-plan document validation.
//!
//! Plans are hierarchical JSON documents: an analysis block with the
//! injected building context, a section list with bounds, and a stepwise
//! construction order whose `depends_on` indices must form a DAG. The
//! checker verifies the injected lot size, the member-type taxonomy, the
//! dependency graph, and that section bounds fit the lot.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scene::{Category, Phase, RoofType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Simple,
    Moderate,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepType {
    Critical,
    Safe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LotSize {
    pub width: f64,
    pub depth: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanAnalysis {
    pub description: String,
    pub stories: u32,
    pub sections: Vec<String>,
    pub roof_type: RoofType,
    pub complexity: Complexity,
    pub lot_size: LotSize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_base: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSection {
    pub name: String,
    pub bounds: SectionBounds,
    pub stories: u32,
    pub systems: Vec<Phase>,
    #[serde(default)]
    pub dependencies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepMembers {
    #[serde(rename = "type")]
    pub member_type: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub step: i64,
    pub section: String,
    pub phase: Phase,
    pub step_type: StepType,
    #[serde(default)]
    pub members: Vec<StepMembers>,
    #[serde(default)]
    pub depends_on: Vec<i64>,
}

/// The full plan document (Output JSON Schema).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub analysis: PlanAnalysis,
    #[serde(default)]
    pub sections: Vec<PlanSection>,
    pub construction_order: Vec<PlanStep>,
    #[serde(default)]
    pub expected_member_counts: BTreeMap<String, u64>,
}

impl PlanDocument {
    pub fn from_json(bytes: &[u8]) -> Result<Self, PlanError> {
        serde_json::from_slice(bytes).map_err(|e| PlanError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// The injected building context the plan must echo.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanContext {
    pub lot_width: f64,
    pub lot_depth: f64,
    pub stories: u32,
    pub roof_type: RoofType,
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("malformed plan document at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanViolationKind {
    LotMismatch,
    UnknownMemberType,
    UnknownStepRef,
    DependencyCycle,
    DuplicateStep,
    BoundsExceedLot,
    PhaseOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanViolation {
    pub kind: PlanViolationKind,
    pub severity: Severity,
    pub message: String,
}

fn err(kind: PlanViolationKind, message: String) -> PlanViolation {
    PlanViolation { kind, severity: Severity::Error, message }
}

/// Two-decimal agreement: `|a - b| < 0.005`.
fn two_decimal_eq(a: f64, b: f64) -> bool {
    (a - b).abs() < 0.005
}

/// Checks a plan against the injected context. An empty result means the
/// plan is accepted; phase-order breaches are warnings, everything else
/// is an error.
pub fn check_plan(plan: &PlanDocument, ctx: &PlanContext) -> Vec<PlanViolation> {
    let mut violations = Vec::new();

    // (i) Injected lot size must match to two decimals, and the echoed
    // area must agree with width x depth.
    let lot = &plan.analysis.lot_size;
    if !two_decimal_eq(lot.width, ctx.lot_width) || !two_decimal_eq(lot.depth, ctx.lot_depth) {
        violations.push(err(
            PlanViolationKind::LotMismatch,
            format!(
                "lot_size {:.2} x {:.2} does not match the injected {:.2} x {:.2}",
                lot.width, lot.depth, ctx.lot_width, ctx.lot_depth
            ),
        ));
    }
    if !two_decimal_eq(lot.area, lot.width * lot.depth) {
        violations.push(err(
            PlanViolationKind::LotMismatch,
            format!(
                "lot_size area {:.2} does not equal width x depth = {:.2}",
                lot.area,
                lot.width * lot.depth
            ),
        ));
    }

    // (ii) Member type strings must come from the 19-category taxonomy.
    let mut seen_types = BTreeSet::new();
    for step in &plan.construction_order {
        for m in &step.members {
            if Category::from_name(&m.member_type).is_none() && seen_types.insert(m.member_type.clone()) {
                violations.push(err(
                    PlanViolationKind::UnknownMemberType,
                    format!("member type {:?} is not in the taxonomy", m.member_type),
                ));
            }
        }
    }
    for name in plan.expected_member_counts.keys() {
        if Category::from_name(name).is_none() && seen_types.insert(name.clone()) {
            violations.push(err(
                PlanViolationKind::UnknownMemberType,
                format!("member type {name:?} is not in the taxonomy"),
            ));
        }
    }

    // (iii) Step ids unique, references known, dependency graph acyclic.
    let mut ids = BTreeSet::new();
    for step in &plan.construction_order {
        if !ids.insert(step.step) {
            violations.push(err(
                PlanViolationKind::DuplicateStep,
                format!("duplicate step id {}", step.step),
            ));
        }
    }
    for step in &plan.construction_order {
        for dep in &step.depends_on {
            if !ids.contains(dep) {
                violations.push(err(
                    PlanViolationKind::UnknownStepRef,
                    format!("step {} depends on unknown step {}", step.step, dep),
                ));
            }
        }
    }
    if let TopoOutcome::Cycle(cycle) = topo_order(plan) {
        let path: Vec<String> = cycle.iter().map(|id| id.to_string()).collect();
        violations.push(err(
            PlanViolationKind::DependencyCycle,
            format!("dependency cycle: {} -> {}", path.join(" -> "), path[0]),
        ));
    }

    // (iv) Section bounds must fit inside a lot-sized rectangle
    // (translation-free, since the lot origin is not fixed).
    for section in &plan.sections {
        let bw = section.bounds.x_max - section.bounds.x_min;
        let bd = section.bounds.y_max - section.bounds.y_min;
        if bw < 0.0 || bd < 0.0 || bw > ctx.lot_width + 0.005 || bd > ctx.lot_depth + 0.005 {
            violations.push(err(
                PlanViolationKind::BoundsExceedLot,
                format!(
                    "section {:?} bounds {:.2} x {:.2} do not fit the {:.2} x {:.2} lot",
                    section.name, bw, bd, ctx.lot_width, ctx.lot_depth
                ),
            ));
        }
    }

    // Phase-monotonicity advisory: within one section, a later-phase step
    // must never be a (transitive) prerequisite of an earlier-phase step.
    violations.extend(phase_order_warnings(plan));

    violations
}

fn phase_order_warnings(plan: &PlanDocument) -> Vec<PlanViolation> {
    let index: HashMap<i64, &PlanStep> = plan
        .construction_order
        .iter()
        .map(|s| (s.step, s))
        .collect();
    let mut warnings = Vec::new();
    for step in &plan.construction_order {
        // Ancestors of `step`: everything that must precede it.
        let mut stack: Vec<i64> = step.depends_on.clone();
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            let Some(ancestor) = index.get(&id) else { continue };
            if ancestor.section == step.section && ancestor.phase > step.phase {
                warnings.push(PlanViolation {
                    kind: PlanViolationKind::PhaseOrder,
                    severity: Severity::Warning,
                    message: format!(
                        "section {:?}: step {} ({:?}) is forced before step {} ({:?})",
                        step.section, ancestor.step, ancestor.phase, step.step, step.phase
                    ),
                });
            }
            stack.extend(ancestor.depends_on.iter().copied());
        }
    }
    warnings
}

/// Result of ordering the construction steps.
#[derive(Debug, Clone, PartialEq)]
pub enum TopoOutcome {
    /// A full topological order, ties broken by ascending step id.
    Order(Vec<i64>),
    /// The smallest dependency cycle found, as a step-id sequence.
    Cycle(Vec<i64>),
}

/// Kahn's algorithm with an ascending-id tie break; on failure, reports
/// the shortest cycle (smallest id sequence among equals).
pub fn topo_order(plan: &PlanDocument) -> TopoOutcome {
    let ids: BTreeSet<i64> = plan.construction_order.iter().map(|s| s.step).collect();
    // successors[a] = steps that depend on a; indegree counts known deps.
    let mut successors: BTreeMap<i64, Vec<i64>> = ids.iter().map(|&id| (id, Vec::new())).collect();
    let mut indegree: BTreeMap<i64, usize> = ids.iter().map(|&id| (id, 0)).collect();
    for step in &plan.construction_order {
        for dep in &step.depends_on {
            if ids.contains(dep) && *dep != step.step {
                successors.get_mut(dep).unwrap().push(step.step);
                *indegree.get_mut(&step.step).unwrap() += 1;
            } else if *dep == step.step {
                return TopoOutcome::Cycle(vec![step.step]);
            }
        }
    }

    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<i64>> = indegree
        .iter()
        .filter(|(_, &deg)| deg == 0)
        .map(|(&id, _)| std::cmp::Reverse(id))
        .collect();
    let mut order = Vec::with_capacity(ids.len());
    while let Some(std::cmp::Reverse(id)) = ready.pop() {
        order.push(id);
        for &next in &successors[&id] {
            let deg = indegree.get_mut(&next).unwrap();
            *deg -= 1;
            if *deg == 0 {
                ready.push(std::cmp::Reverse(next));
            }
        }
    }
    if order.len() == ids.len() {
        return TopoOutcome::Order(order);
    }

    // Remaining nodes all sit on or behind cycles; find the shortest one
    // by BFS from each remaining node.
    let remaining: BTreeSet<i64> = ids.difference(&order.iter().copied().collect()).copied().collect();
    let mut best: Option<Vec<i64>> = None;
    for &start in &remaining {
        let mut queue = VecDeque::new();
        let mut parent: BTreeMap<i64, i64> = BTreeMap::new();
        queue.push_back(start);
        'bfs: while let Some(node) = queue.pop_front() {
            for &next in &successors[&node] {
                if !remaining.contains(&next) {
                    continue;
                }
                if next == start {
                    let mut cycle = vec![start];
                    let mut cur = node;
                    while cur != start {
                        cycle.push(cur);
                        cur = parent[&cur];
                    }
                    cycle.reverse();
                    // cycle currently ends at start; rotate to start-first.
                    let pos = cycle.iter().position(|&x| x == start).unwrap();
                    cycle.rotate_left(pos);
                    let better = match &best {
                        None => true,
                        Some(b) => cycle.len() < b.len() || (cycle.len() == b.len() && cycle < *b),
                    };
                    if better {
                        best = Some(cycle);
                    }
                    break 'bfs;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(node);
                    queue.push_back(next);
                }
            }
        }
    }
    TopoOutcome::Cycle(best.expect("non-empty remainder implies a cycle"))
}
