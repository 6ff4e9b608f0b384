//! Parametric generation of a known-valid gable fixture, plus mutation
//! operators that each provoke a specific test failure.
//!
//! The generator emits one gable archetype on an axis-aligned lattice:
//! perimeter sills, a rim-and-joist floor per story (split by a center
//! beam when a single bay would over-span), plated stud walls, and a
//! ridge-rafter-collar roof. Every member is named with its taxonomy
//! prefix, every cross-section comes from the standard lumber set, and
//! the output passes all ten validation tests under the fixture span
//! table — the module's central guarantee, property-tested over
//! randomized specs.
//!
//! Geometry notes that keep the guarantee watertight:
//! - Rafters are flat slabs 0.302 m deep: deep enough to be subject to
//!   dual-end checks, within tolerance of the 286 mm standard depth, and
//!   the ridge is their only top-zone connector, so removing the ridge
//!   always fails the dual-end test.
//! - The ridge is a 140 x 140 beam, separating the two rafters of a pair
//!   by more than the connection tolerance so they cannot vouch for each
//!   other's top zones.
//! - Joists stay on the bare spacing lattice (no flush edge member, which
//!   would break spacing compliance); rafters and studs do take a flush
//!   edge member when it lands clear of the lattice, which keeps the
//!   roof blanket covering every footprint cell.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Axis, Box3};
use crate::params::ValidationParams;
use crate::scene::{Category, Member, Scene, SceneError};
use crate::span_table::{SectionKey, SpanTable};
use crate::validate::TestId;

const PLATE_THICKNESS: f64 = 0.038;
const PLATE_WIDTH: f64 = 0.089;
const STUD_THICKNESS: f64 = 0.038;
const SILL_SIDE: f64 = 0.089;
const BEAM_SIDE: f64 = 0.089;
const RIDGE_SIDE: f64 = 0.140;
const RAFTER_THICKNESS: f64 = 0.038;
const RAFTER_DEPTH: f64 = 0.302;
const COLLAR_DEPTH: f64 = 0.089;
const JOIST_THICKNESS: f64 = 0.038;
/// Ridge half-width: rafter pairs stop this far short of the centerline.
const RIDGE_HALF: f64 = RIDGE_SIDE / 2.0;
/// A flush edge member is only placed when at least this far from the
/// last lattice position, so it never couples to a lattice neighbor
/// within the connection tolerance.
const FLUSH_CLEARANCE: f64 = 0.2;
/// Ridge apex height band above the wall top: the low end keeps the apex
/// at or above the rafter slabs, the high end keeps ridge-rafter contact
/// within the adjacency tolerance.
const RISE_MIN: f64 = 0.302;
const RISE_MAX: f64 = 0.49;

/// Input parameters for the gable generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub width: f64,
    pub depth: f64,
    pub stories: u32,
    /// Roof rise over run; the run is half the depth.
    pub roof_pitch_ratio: f64,
    pub stud_spacing: f64,
    pub joist_spacing: f64,
    pub rafter_spacing: f64,
    pub story_height: f64,
    /// Top of the first floor system.
    pub first_floor_z: f64,
}

impl FixtureSpec {
    /// A spec with standard spacings and a pitch that lands the ridge
    /// mid-band for any depth.
    pub fn new(width: f64, depth: f64, stories: u32) -> Self {
        FixtureSpec {
            width,
            depth,
            stories,
            roof_pitch_ratio: 0.75 / depth,
            stud_spacing: 0.406,
            joist_spacing: 0.406,
            rafter_spacing: 0.610,
            story_height: 2.7,
            first_floor_z: 0.3,
        }
    }

    /// Floor-system top elevation per story (0.3, 3.0, 5.7, ... at the
    /// defaults).
    pub fn floor_z(&self, story: u32) -> f64 {
        self.first_floor_z + story as f64 * self.story_height
    }

    /// Ridge apex rise above the wall top.
    pub fn rise(&self) -> f64 {
        self.roof_pitch_ratio * self.depth / 2.0
    }

    fn validate(&self) -> Result<(), FixtureError> {
        let bad = |msg: String| Err(FixtureError::BadSpec(msg));
        if !(self.width > 1.0 && self.depth > 1.0) {
            return bad(format!(
                "footprint must exceed 1 m per side, got {} x {}",
                self.width, self.depth
            ));
        }
        if self.stories == 0 {
            return bad("stories must be at least 1".into());
        }
        if self.roof_pitch_ratio <= 0.0 {
            return bad("roof pitch must be positive".into());
        }
        let rise = self.rise();
        if !(RISE_MIN..=RISE_MAX).contains(&rise) {
            return bad(format!(
                "ridge rise {rise:.3} m outside the buildable band [{RISE_MIN}, {RISE_MAX}] \
                 for slab rafters; adjust pitch or depth"
            ));
        }
        if !(0.1..=0.335).contains(&self.first_floor_z) {
            return bad(format!(
                "first floor top {} m must sit in [0.1, 0.335] so ground-story joists reach \
                 both the ground set and the sills",
                self.first_floor_z
            ));
        }
        if self.story_height < 1.0 || self.story_height > 4.0 {
            return bad(format!("story height {} m out of range", self.story_height));
        }
        if self.stud_spacing <= FLUSH_CLEARANCE || self.stud_spacing > 1.0 {
            return bad(format!("stud spacing {} m out of range", self.stud_spacing));
        }
        if self.rafter_spacing <= FLUSH_CLEARANCE || self.rafter_spacing > 0.61 {
            return bad(format!(
                "rafter spacing {} m out of range: above 0.61 m the inflated rafter strips \
                 no longer blanket the footprint",
                self.rafter_spacing
            ));
        }
        // The joist lattice itself must be spacing-compliant.
        let p = ValidationParams::default();
        let compliant = p
            .spacing_standards
            .iter()
            .any(|s| (self.joist_spacing - s).abs() < p.spacing_tolerance)
            || self.joist_spacing <= p.spacing_exempt_below;
        if !compliant || self.joist_spacing <= 0.0 {
            return bad(format!(
                "joist spacing {} m is not compliant with the standard set",
                self.joist_spacing
            ));
        }
        Ok(())
    }
}

/// Fixture generation and mutation errors.
#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("invalid fixture spec: {0}")]
    BadSpec(String),
    #[error(
        "joist bay span {span:.2} m exceeds the fixture span table even at maximum lumber \
         depth; add a CenterBeam to split the span (not auto-inserted)"
    )]
    SpanBeyondTable { span: f64 },
    #[error("mutation target {pattern:?} matches no member")]
    TargetNotFound { pattern: String },
    #[error("mutated scene is no longer well-formed: {0}")]
    Rebuild(#[from] SceneError),
}

/// Maximum joist span allowed by the deflection test for a `b x h`
/// section (closed form of the L/360 limit).
fn deflection_cap(b: f64, h: f64, params: &ValidationParams) -> f64 {
    let inertia = b * h * h * h / 12.0;
    ((1.0 + params.deflection_tolerance_tau_delta) * 384.0 * params.elastic_modulus_e * inertia
        / (360.0 * 5.0 * params.deflection_load_w))
        .cbrt()
}

#[derive(Debug, Clone, Copy)]
struct FloorPlan {
    joist_depth: f64,
    split: bool,
}

/// Picks the shallowest standard joist section whose table entry and
/// deflection cap both cover the bay; splits the floor with a center
/// beam when a single bay cannot work.
fn plan_floor(
    span: f64,
    grounded_floor_z: Option<f64>,
    table: &SpanTable,
    params: &ValidationParams,
) -> Result<FloorPlan, FixtureError> {
    const DEPTHS: [f64; 5] = [0.089, 0.140, 0.184, 0.235, 0.286];
    let pick = |bay: f64| -> Option<f64> {
        DEPTHS.iter().copied().find(|&depth| {
            if let Some(fz) = grounded_floor_z {
                // Ground-story joists must reach the ground set.
                if fz - depth >= params.contact.ground_height - 0.005 {
                    return false;
                }
            }
            let key = SectionKey::new(38, (depth * 1000.0).round() as u32);
            match table.joist_spans.get(&key) {
                Some(&allowed) => bay <= allowed.min(deflection_cap(JOIST_THICKNESS, depth, params)),
                None => false,
            }
        })
    };
    if let Some(depth) = pick(span) {
        return Ok(FloorPlan { joist_depth: depth, split: false });
    }
    if let Some(depth) = pick(span / 2.0) {
        return Ok(FloorPlan { joist_depth: depth, split: true });
    }
    Err(FixtureError::SpanBeyondTable { span: span / 2.0 })
}

/// Lattice positions along `[0, limit]` for members of the given
/// thickness, plus a flush end position when it lands clear of the
/// lattice. Returns `(offset, is_end)` pairs.
fn lattice(limit: f64, spacing: f64, thickness: f64, flush_end: bool) -> Vec<(f64, bool)> {
    let mut positions = Vec::new();
    let mut x = 0.0;
    while x + thickness <= limit + 1e-9 {
        positions.push((x, false));
        x += spacing;
    }
    if flush_end {
        let flush = limit - thickness;
        if let Some(&(last, _)) = positions.last() {
            if flush - last >= FLUSH_CLEARANCE {
                positions.push((flush, true));
            }
        }
    }
    positions
}

struct Builder {
    members: Vec<Member>,
}

impl Builder {
    fn push(&mut self, name: String, min: [f64; 3], max: [f64; 3]) {
        let category = crate::scene::classify_member(&name).expect("fixture names carry a prefix");
        self.members.push(Member {
            name,
            category,
            box3: Box3::new(min, max).expect("fixture boxes are well-formed"),
        });
    }
}

/// Generates the gable fixture. The output is deterministic in the spec
/// and passes all ten tests under [`SpanTable::fixture`] at default
/// parameters.
pub fn generate_gable(spec: &FixtureSpec) -> Result<Scene, FixtureError> {
    spec.validate()?;
    let table = SpanTable::fixture();
    let params = ValidationParams::default();
    let (w, d) = (spec.width, spec.depth);
    let mut b = Builder { members: Vec::new() };

    // Foundation: perimeter sills on the ground.
    b.push("Sill_front".into(), [0.0, 0.0, 0.0], [w, SILL_SIDE, SILL_SIDE]);
    b.push("Sill_back".into(), [0.0, d - SILL_SIDE, 0.0], [w, d, SILL_SIDE]);
    b.push("Sill_left".into(), [0.0, SILL_SIDE, 0.0], [SILL_SIDE, d - SILL_SIDE, SILL_SIDE]);
    b.push("Sill_right".into(), [w - SILL_SIDE, SILL_SIDE, 0.0], [w, d - SILL_SIDE, SILL_SIDE]);

    for story in 0..spec.stories {
        let fz = spec.floor_z(story);
        let grounded = if story == 0 { Some(fz) } else { None };
        let plan = plan_floor(d, grounded, &table, &params)?;
        let z0 = fz - plan.joist_depth;
        let tag = story + 1;

        // Floor: rims across the joist ends, joists on the lattice, and a
        // center beam when the floor is split into two bays.
        b.push(format!("Rim_s{tag}_front"), [0.0, 0.0, z0], [w, JOIST_THICKNESS, fz]);
        b.push(format!("Rim_s{tag}_back"), [0.0, d - JOIST_THICKNESS, z0], [w, d, fz]);
        for (k, (x, _)) in lattice(w, spec.joist_spacing, JOIST_THICKNESS, false)
            .into_iter()
            .enumerate()
        {
            if plan.split {
                b.push(format!("Joist_s{tag}_{k:03}a"), [x, 0.0, z0], [x + JOIST_THICKNESS, d / 2.0, fz]);
                b.push(format!("Joist_s{tag}_{k:03}b"), [x, d / 2.0, z0], [x + JOIST_THICKNESS, d, fz]);
            } else {
                b.push(format!("Joist_s{tag}_{k:03}"), [x, 0.0, z0], [x + JOIST_THICKNESS, d, fz]);
            }
        }
        if plan.split {
            b.push(
                format!("CenterBeam_s{tag}"),
                [0.0, d / 2.0 - BEAM_SIDE / 2.0, fz - BEAM_SIDE],
                [w, d / 2.0 + BEAM_SIDE / 2.0, fz],
            );
        }

        // Walls: sole plate, studs, top plate on all four sides.
        let wall_top = fz + spec.story_height;
        let stud_lo = fz + PLATE_THICKNESS;
        let stud_hi = wall_top - PLATE_THICKNESS;
        let stud_name = |side: &str, k: usize, end: bool| {
            if end {
                format!("Stud_s{tag}_{side}_end")
            } else {
                format!("Stud_s{tag}_{side}_{k:03}")
            }
        };

        for (side, y0, y1) in [("front", 0.0, PLATE_WIDTH), ("back", d - PLATE_WIDTH, d)] {
            b.push(format!("SolePlate_s{tag}_{side}"), [0.0, y0, fz], [w, y1, fz + PLATE_THICKNESS]);
            for (k, (x, end)) in lattice(w, spec.stud_spacing, STUD_THICKNESS, true)
                .into_iter()
                .enumerate()
            {
                b.push(stud_name(side, k, end), [x, y0, stud_lo], [x + STUD_THICKNESS, y1, stud_hi]);
            }
            b.push(format!("TopPlate_s{tag}_{side}"), [0.0, y0, stud_hi], [w, y1, wall_top]);
        }
        let side_span = d - 2.0 * PLATE_WIDTH;
        for (side, x0, x1) in [("left", 0.0, PLATE_WIDTH), ("right", w - PLATE_WIDTH, w)] {
            b.push(format!("SolePlate_s{tag}_{side}"), [x0, PLATE_WIDTH, fz], [x1, d - PLATE_WIDTH, fz + PLATE_THICKNESS]);
            for (k, (y, end)) in lattice(side_span, spec.stud_spacing, STUD_THICKNESS, true)
                .into_iter()
                .enumerate()
            {
                let y = y + PLATE_WIDTH;
                b.push(stud_name(side, k, end), [x0, y, stud_lo], [x1, y + STUD_THICKNESS, stud_hi]);
            }
            b.push(format!("TopPlate_s{tag}_{side}"), [x0, PLATE_WIDTH, stud_hi], [x1, d - PLATE_WIDTH, wall_top]);
        }
    }

    // Roof: ridge beam at the apex, rafter slabs meeting it from both
    // eaves, collar ties low across each pair.
    let roof_base = spec.floor_z(spec.stories - 1) + spec.story_height;
    let rise = spec.rise();
    b.push(
        "Ridge".into(),
        [0.0, d / 2.0 - RIDGE_HALF, roof_base + rise - RIDGE_SIDE],
        [w, d / 2.0 + RIDGE_HALF, roof_base + rise],
    );
    let rafter_top = roof_base + RAFTER_DEPTH;
    for (k, (x, end)) in lattice(w, spec.rafter_spacing, RAFTER_THICKNESS, true)
        .into_iter()
        .enumerate()
    {
        let name = |half: &str| {
            if end {
                format!("Rafter_{half}_end")
            } else {
                format!("Rafter_{half}_{k:03}")
            }
        };
        b.push(name("south"), [x, 0.0, roof_base], [x + RAFTER_THICKNESS, d / 2.0 - RIDGE_HALF, rafter_top]);
        b.push(name("north"), [x, d / 2.0 + RIDGE_HALF, roof_base], [x + RAFTER_THICKNESS, d, rafter_top]);
        let collar = if end {
            "Collar_end".to_string()
        } else {
            format!("Collar_{k:03}")
        };
        b.push(collar, [x, d / 4.0, roof_base], [x + RAFTER_THICKNESS, 3.0 * d / 4.0, roof_base + COLLAR_DEPTH]);
    }

    Ok(Scene::new(b.members, None)?)
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

/// Fault-injection operators. Each kind has a documented target-test set
/// it always provokes and a co-failure closure it never escapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    RemoveMember,
    ShiftMember,
    ResizeSection,
    DeleteEveryOtherJoist,
    RemoveRidge,
    FloatMember,
    StretchSpan,
}

impl MutationKind {
    pub const ALL: [MutationKind; 7] = [
        MutationKind::RemoveMember,
        MutationKind::ShiftMember,
        MutationKind::ResizeSection,
        MutationKind::DeleteEveryOtherJoist,
        MutationKind::RemoveRidge,
        MutationKind::FloatMember,
        MutationKind::StretchSpan,
    ];

    /// Tests a canonical application always fails.
    pub fn target_tests(self) -> &'static [TestId] {
        match self {
            MutationKind::RemoveMember => &[TestId::T10],
            MutationKind::ShiftMember => &[TestId::T10],
            MutationKind::ResizeSection => &[TestId::T4],
            MutationKind::DeleteEveryOtherJoist => &[TestId::T3],
            MutationKind::RemoveRidge => &[TestId::T10],
            MutationKind::FloatMember => &[TestId::T1, TestId::T9],
            MutationKind::StretchSpan => &[TestId::T2, TestId::T5],
        }
    }

    /// Tests a canonical application may fail; nothing outside this set
    /// ever fails.
    pub fn cofailure_closure(self) -> &'static [TestId] {
        match self {
            // A joist stretched past the roofline can open footprint cells
            // the rafters no longer cover.
            MutationKind::StretchSpan => &[TestId::T2, TestId::T5, TestId::T6, TestId::T7],
            other => other.target_tests(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::RemoveMember => "remove_member",
            MutationKind::ShiftMember => "shift_member",
            MutationKind::ResizeSection => "resize_section",
            MutationKind::DeleteEveryOtherJoist => "delete_every_other_joist",
            MutationKind::RemoveRidge => "remove_ridge",
            MutationKind::FloatMember => "float_member",
            MutationKind::StretchSpan => "stretch_span",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<MutationKind> {
        MutationKind::ALL.iter().copied().find(|k| k.as_str() == s)
    }
}

/// One fault injection: a kind, a substring pattern over member names,
/// and an optional magnitude (meters for shifts, a ratio for resizes and
/// stretches).
#[derive(Debug, Clone, PartialEq)]
pub struct Mutation {
    pub kind: MutationKind,
    pub target: String,
    pub magnitude: Option<f64>,
}

impl Mutation {
    pub fn new(kind: MutationKind, target: impl Into<String>, magnitude: Option<f64>) -> Self {
        Mutation { kind, target: target.into(), magnitude }
    }
}

/// Applies a mutation, returning a new scene; the input is untouched and
/// only targeted members differ. The target pattern must match at least
/// one member (`remove_ridge` targets the ridge regardless of pattern).
pub fn apply_mutation(scene: &Scene, mutation: &Mutation) -> Result<Scene, FixtureError> {
    let matches: Vec<usize> = scene
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| match mutation.kind {
            MutationKind::RemoveRidge => m.category == Category::Ridge,
            _ => m.name.contains(&mutation.target),
        })
        .map(|(i, _)| i)
        .collect();
    if matches.is_empty() {
        return Err(FixtureError::TargetNotFound {
            pattern: match mutation.kind {
                MutationKind::RemoveRidge => "Ridge".to_string(),
                _ => mutation.target.clone(),
            },
        });
    }

    let mut members = scene.members.clone();
    match mutation.kind {
        MutationKind::RemoveMember | MutationKind::RemoveRidge => {
            let drop: std::collections::HashSet<usize> = matches.into_iter().collect();
            members = members
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, m)| m)
                .collect();
        }
        MutationKind::ShiftMember | MutationKind::FloatMember => {
            let dz = mutation.magnitude.unwrap_or(match mutation.kind {
                MutationKind::ShiftMember => 0.15,
                _ => 1.0,
            });
            for i in matches {
                members[i].box3 = members[i].box3.translated([0.0, 0.0, dz]);
            }
        }
        MutationKind::ResizeSection => {
            let ratio = mutation.magnitude.unwrap_or(1.6);
            for i in matches {
                members[i].box3 = scale_axis(&members[i].box3, thinnest_axis(&members[i].box3), ratio);
            }
        }
        MutationKind::StretchSpan => {
            let ratio = mutation.magnitude.unwrap_or(2.0);
            for i in matches {
                members[i].box3 = scale_axis(&members[i].box3, longest_horizontal(&members[i].box3), ratio);
            }
        }
        MutationKind::DeleteEveryOtherJoist => {
            // Group the matched joists into lines by their perpendicular
            // position, then drop every other line.
            let mut lines: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
            for &i in &matches {
                let m = &members[i];
                if m.category != Category::Joist {
                    continue;
                }
                let spans_x = m.box3.extent(Axis::X) >= m.box3.extent(Axis::Y);
                let c = m.box3.center();
                let p = if spans_x { c[1] } else { c[0] };
                lines.entry((p * 1e6).round() as i64).or_default().push(i);
            }
            if lines.is_empty() {
                return Err(FixtureError::TargetNotFound { pattern: mutation.target.clone() });
            }
            let drop: std::collections::HashSet<usize> = lines
                .values()
                .enumerate()
                .filter(|(line, _)| line % 2 == 1)
                .flat_map(|(_, idxs)| idxs.iter().copied())
                .collect();
            members = members
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, m)| m)
                .collect();
        }
    }
    Ok(Scene::new(members, scene.meta.clone())?)
}

fn thinnest_axis(b: &Box3) -> Axis {
    Axis::ALL
        .into_iter()
        .min_by(|a, c| b.extent(*a).total_cmp(&b.extent(*c)))
        .unwrap()
}

fn longest_horizontal(b: &Box3) -> Axis {
    if b.extent(Axis::X) >= b.extent(Axis::Y) {
        Axis::X
    } else {
        Axis::Y
    }
}

fn scale_axis(b: &Box3, axis: Axis, ratio: f64) -> Box3 {
    let k = axis.index();
    let mut max = b.max();
    max[k] = b.min()[k] + b.extent(axis) * ratio;
    Box3::new(b.min(), max).expect("scaled box stays well-formed")
}

/// Builds the canonical kill-matrix mutation of a kind against a
/// generated fixture, picking among the valid target instances by
/// `selector`. Canonical targets are chosen so the documented target
/// tests fail on every application:
/// - `remove_member`: one top-story front/back top plate (lattice studs
///   away from the rafter lattice lose their only top-zone connector);
/// - `shift_member`: a non-corner lattice stud, lifted 0.15 m (past the
///   0.10 m zone tolerance but still bearing on the top plate);
/// - `resize_section`: any stud, thickness scaled 1.6x off-standard;
/// - `delete_every_other_joist`: the ground-story joist field;
/// - `remove_ridge`: the ridge;
/// - `float_member`: one collar, +1.0 m (clear of the rafter slabs and
///   the ridge apex band);
/// - `stretch_span`: one joist, doubled (past both the shallowest
///   adequate table entry and its deflection cap).
pub fn canonical_mutation(
    kind: MutationKind,
    scene: &Scene,
    selector: usize,
) -> Result<Mutation, FixtureError> {
    let pick = |candidates: Vec<&str>| -> Result<String, FixtureError> {
        if candidates.is_empty() {
            return Err(FixtureError::TargetNotFound {
                pattern: format!("canonical {} target", kind.as_str()),
            });
        }
        Ok(candidates[selector % candidates.len()].to_string())
    };
    let names = |f: &dyn Fn(&Member) -> bool| -> Vec<&str> {
        scene
            .members
            .iter()
            .filter(|m| f(m))
            .map(|m| m.name.as_str())
            .collect()
    };

    let mutation = match kind {
        MutationKind::RemoveMember => {
            let top = format!("TopPlate_s{}", top_story(scene));
            let candidates = names(&|m: &Member| {
                m.name.starts_with(&top)
                    && (m.name.ends_with("_front") || m.name.ends_with("_back"))
            });
            Mutation::new(kind, pick(candidates)?, None)
        }
        MutationKind::ShiftMember => {
            let candidates = names(&|m: &Member| {
                m.category == Category::Stud
                    && (m.name.contains("_front_") || m.name.contains("_back_"))
                    && !m.name.ends_with("_000")
                    && !m.name.ends_with("_end")
            });
            Mutation::new(kind, pick(candidates)?, Some(0.15))
        }
        MutationKind::ResizeSection => {
            let candidates = names(&|m: &Member| m.category == Category::Stud);
            Mutation::new(kind, pick(candidates)?, Some(1.6))
        }
        MutationKind::DeleteEveryOtherJoist => Mutation::new(kind, "Joist_s1_", None),
        MutationKind::RemoveRidge => Mutation::new(kind, "Ridge", None),
        MutationKind::FloatMember => {
            let candidates = names(&|m: &Member| m.category == Category::Collar);
            Mutation::new(kind, pick(candidates)?, Some(1.0))
        }
        MutationKind::StretchSpan => {
            let candidates = names(&|m: &Member| m.category == Category::Joist);
            Mutation::new(kind, pick(candidates)?, Some(2.0))
        }
    };
    Ok(mutation)
}

fn top_story(scene: &Scene) -> u32 {
    scene
        .members
        .iter()
        .filter_map(|m| {
            m.name
                .strip_prefix("TopPlate_s")
                .and_then(|rest| rest.split('_').next())
                .and_then(|s| s.parse::<u32>().ok())
        })
        .max()
        .unwrap_or(1)
}
