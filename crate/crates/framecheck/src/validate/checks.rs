//! Implementations of the ten validation tests.

use crate::contact::{compute_support, SupportState};
use crate::geom::{Axis, Box3};
use crate::params::ValidationParams;
use crate::scene::{Category, Member, Scene};
use crate::span_table::{SectionKey, SpanTable};
use crate::validate::{fmt_quantity, Quantity, TestId, TestResult, ValidateError, Violation};

/// Categories whose XY projections define the footprint for T6/T7.
const FLOOR_CLASSES: [Category; 5] = [
    Category::Sill,
    Category::Rim,
    Category::Joist,
    Category::CenterBeam,
    Category::SolePlate,
];

fn violation(
    test: TestId,
    members: Vec<String>,
    measured: Quantity,
    limit: Quantity,
    message: String,
) -> Violation {
    Violation {
        test,
        members,
        measured,
        limit,
        message,
    }
}

// ---------------------------------------------------------------------------
// T1 load path / T9 stability
// ---------------------------------------------------------------------------

/// T1: every member's load path must reach the ground.
pub fn load_path(scene: &Scene, params: &ValidationParams) -> TestResult {
    load_path_with(scene, &compute_support(scene, &params.contact))
}

pub(crate) fn load_path_with(scene: &Scene, support: &SupportState) -> TestResult {
    let violations = scene
        .members
        .iter()
        .enumerate()
        .filter(|(i, _)| !support.supported[*i])
        .map(|(_, m)| {
            violation(
                TestId::T1,
                vec![m.name.clone()],
                Quantity { value: 0.0, unit: "supported" },
                Quantity { value: 1.0, unit: "supported" },
                format!("{} has no load path to ground; detected unsupported member", m.name),
            )
        })
        .collect();
    TestResult::new(TestId::T1, violations)
}

/// T9: the Topological Stability Index must equal 1. Counting is exact:
/// the supported count must equal the member count.
pub fn stability(scene: &Scene, params: &ValidationParams) -> TestResult {
    stability_with(scene, &compute_support(scene, &params.contact))
}

pub(crate) fn stability_with(scene: &Scene, support: &SupportState) -> TestResult {
    let violations = if support.fully_supported() {
        vec![]
    } else {
        let unsupported: Vec<String> = scene
            .members
            .iter()
            .enumerate()
            .filter(|(i, _)| !support.supported[*i])
            .map(|(_, m)| m.name.clone())
            .collect();
        vec![violation(
            TestId::T9,
            unsupported,
            Quantity::ratio(support.tsi),
            Quantity::ratio(1.0),
            format!(
                "Stability index below 1.0; detected {} of {} members supported",
                support.supported_count(),
                scene.members.len()
            ),
        )]
    };
    TestResult::new(TestId::T9, violations)
}

// ---------------------------------------------------------------------------
// T2 span limits
// ---------------------------------------------------------------------------

/// Two smallest box extents in millimeters (smallest, median) — the
/// cross-section of a framing member.
fn cross_section_mm(member: &Member) -> (f64, f64) {
    let mut e = member.box3.extents();
    e.sort_by(f64::total_cmp);
    (e[0] * 1000.0, e[1] * 1000.0)
}

/// Nearest standard lumber pair to a measured cross-section, by Euclidean
/// distance in millimeters. Ties resolve to the first entry in the set.
fn nearest_standard(
    section: (f64, f64),
    lumber_set: &[(u32, u32)],
) -> Result<SectionKey, ValidateError> {
    lumber_set
        .iter()
        .map(|&(w, d)| {
            let dw = section.0 - w as f64;
            let dd = section.1 - d as f64;
            (dw * dw + dd * dd, SectionKey::new(w, d))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, key)| key)
        .ok_or(ValidateError::EmptyLumberSet)
}

/// T2: joist and rafter clear spans must stay within table limits, after
/// halving rafter effective spans when any purlin is present.
pub fn span_limits(
    scene: &Scene,
    table: &SpanTable,
    params: &ValidationParams,
) -> Result<TestResult, ValidateError> {
    let purlin_present = scene.has_category(Category::Purlin);
    let mut violations = Vec::new();

    for m in &scene.members {
        let (is_joist, spans) = match m.category {
            Category::Joist => (true, &table.joist_spans),
            Category::Rafter => (false, &table.rafter_spans),
            _ => continue,
        };
        let section = cross_section_mm(m);
        let key = nearest_standard(section, &params.lumber_set_lambda)?;
        let allowable = *spans
            .get(&key)
            .ok_or_else(|| ValidateError::MissingSpanEntry {
                member: m.name.clone(),
                width_mm: section.0,
                depth_mm: section.1,
                key: key.to_string(),
            })?;

        let span = m.span();
        let effective = if is_joist || !purlin_present {
            span
        } else {
            span / 2.0
        };
        let limit = (1.0 + params.span_tolerance_tau) * allowable;
        if effective > limit {
            violations.push(violation(
                TestId::T2,
                vec![m.name.clone()],
                Quantity::meters(effective),
                Quantity::meters(limit),
                format!(
                    "{} span exceeds {} m; detected span {} m for {}",
                    m.category,
                    fmt_quantity(limit),
                    fmt_quantity(effective),
                    m.name
                ),
            ));
        }
    }
    Ok(TestResult::new(TestId::T2, violations))
}

// ---------------------------------------------------------------------------
// T3 on-centre spacing
// ---------------------------------------------------------------------------

/// T3: consecutive joist spacings within each (elevation band, direction)
/// group must sit within tolerance of a standard spacing, or be small
/// enough to count as doubled members.
pub fn oc_spacing(scene: &Scene, params: &ValidationParams) -> TestResult {
    let joists: Vec<&Member> = scene
        .members_of(Category::Joist)
        .map(|(_, m)| m)
        .collect();
    let n = joists.len();

    // X-spanning vs Y-spanning, by longest horizontal extent (ties to X).
    let spans_x: Vec<bool> = joists
        .iter()
        .map(|m| m.box3.extent(Axis::X) >= m.box3.extent(Axis::Y))
        .collect();

    // Union-find over joists: same direction and overlapping z-intervals.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if spans_x[i] != spans_x[j] {
                continue;
            }
            let (a, b) = (&joists[i].box3, &joists[j].box3);
            if a.min()[2] <= b.max()[2] && b.min()[2] <= a.max()[2] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let mut violations = Vec::new();
    for group in groups.values() {
        // Perpendicular position: box center on the short horizontal axis.
        let mut positions: Vec<(f64, usize)> = group
            .iter()
            .map(|&i| {
                let c = joists[i].box3.center();
                let p = if spans_x[i] { c[1] } else { c[0] };
                (p, i)
            })
            .collect();
        positions.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for pair in positions.windows(2) {
            let spacing = pair[1].0 - pair[0].0;
            if spacing <= params.spacing_exempt_below {
                continue;
            }
            let nearest = params
                .spacing_standards
                .iter()
                .copied()
                .min_by(|a, b| (a - spacing).abs().total_cmp(&(b - spacing).abs()))
                .unwrap_or(f64::INFINITY);
            let deviation = (spacing - nearest).abs();
            if deviation < params.spacing_tolerance {
                continue;
            }
            let (a, b) = (&joists[pair[0].1], &joists[pair[1].1]);
            violations.push(violation(
                TestId::T3,
                vec![a.name.clone(), b.name.clone()],
                Quantity::meters(spacing),
                Quantity::meters(nearest),
                format!(
                    "Joist spacing off-standard beyond {} m; detected spacing {} m between {} and {}",
                    fmt_quantity(params.spacing_tolerance),
                    fmt_quantity(spacing),
                    a.name,
                    b.name
                ),
            ));
        }
    }
    TestResult::new(TestId::T3, violations)
}

// ---------------------------------------------------------------------------
// T4 standard lumber dimensions
// ---------------------------------------------------------------------------

/// T4: every framing member's cross-section must match a standard nominal
/// pair within (10 mm, 20 mm).
pub fn standard_dimensions(scene: &Scene, params: &ValidationParams) -> TestResult {
    let mut violations = Vec::new();
    for m in &scene.members {
        let (d1, d2) = cross_section_mm(m);
        let matches = params
            .lumber_set_lambda
            .iter()
            .any(|&(w, d)| {
                (d1 - w as f64).abs() < params.lumber_tol_w
                    && (d2 - d as f64).abs() < params.lumber_tol_d
            });
        if !matches {
            // Smallest exceedance over tolerance across all standard pairs.
            let excess = params
                .lumber_set_lambda
                .iter()
                .map(|&(w, d)| {
                    f64::max(
                        (d1 - w as f64).abs() - params.lumber_tol_w,
                        (d2 - d as f64).abs() - params.lumber_tol_d,
                    )
                })
                .min_by(f64::total_cmp)
                .unwrap_or(f64::INFINITY);
            violations.push(violation(
                TestId::T4,
                vec![m.name.clone()],
                Quantity { value: excess, unit: "mm" },
                Quantity { value: 0.0, unit: "mm" },
                format!(
                    "Cross-section {:.0}x{:.0} mm matches no standard lumber size; detected {} mm beyond tolerance for {}",
                    d1,
                    d2,
                    fmt_quantity(excess),
                    m.name
                ),
            ));
        }
    }
    TestResult::new(TestId::T4, violations)
}

// ---------------------------------------------------------------------------
// T5 deflection
// ---------------------------------------------------------------------------

/// Mid-span deflection of a simply supported joist under uniform load:
/// `5 w L^4 / (384 E I)` with `I = b h^3 / 12`.
pub fn joist_deflection(b: f64, h: f64, span: f64, params: &ValidationParams) -> f64 {
    let inertia = b * h * h * h / 12.0;
    5.0 * params.deflection_load_w * span.powi(4) / (384.0 * params.elastic_modulus_e * inertia)
}

/// T5: joist mid-span deflection must stay within the L/360 serviceability
/// limit (with tolerance).
pub fn deflection(scene: &Scene, params: &ValidationParams) -> TestResult {
    let mut violations = Vec::new();
    for (_, m) in scene.members_of(Category::Joist) {
        let b = f64::min(m.box3.extent(Axis::X), m.box3.extent(Axis::Y));
        let h = m.box3.extent(Axis::Z);
        let span = m.span();
        if b <= 0.0 || h <= 0.0 {
            violations.push(violation(
                TestId::T5,
                vec![m.name.clone()],
                Quantity::meters(f64::INFINITY),
                Quantity::meters((1.0 + params.deflection_tolerance_tau_delta) * span / 360.0),
                format!(
                    "Joist {} has a degenerate section (zero moment of inertia); deflection unbounded",
                    m.name
                ),
            ));
            continue;
        }
        let delta = joist_deflection(b, h, span, params);
        let limit = (1.0 + params.deflection_tolerance_tau_delta) * span / 360.0;
        if delta > limit {
            violations.push(violation(
                TestId::T5,
                vec![m.name.clone()],
                Quantity::meters(delta),
                Quantity::meters(limit),
                format!(
                    "Joist deflection exceeds {} m; detected {} m for {}",
                    fmt_quantity(limit),
                    fmt_quantity(delta),
                    m.name
                ),
            ));
        }
    }
    TestResult::new(TestId::T5, violations)
}

// ---------------------------------------------------------------------------
// T6 roof coverage / T7 gap detection
// ---------------------------------------------------------------------------

/// The shared footprint grid for T6 and T7. Cells are `grid_cell`-sized
/// squares on the world-anchored lattice; a cell belongs to the footprint
/// when its center lies inside the XY projection of any floor/sill-class
/// member, and is covered when its center lies inside any rafter
/// projection inflated by the margin.
#[derive(Debug, Clone)]
pub(crate) struct RoofGrid {
    /// Footprint cells as lattice coordinates, with their covered flag.
    pub cells: Vec<((i64, i64), bool)>,
    pub rho: f64,
    pub gamma: f64,
}

impl RoofGrid {
    pub(crate) fn build(scene: &Scene, params: &ValidationParams) -> Self {
        let cell = params.grid_cell;
        let floor_boxes: Vec<Box3> = scene
            .members
            .iter()
            .filter(|m| FLOOR_CLASSES.contains(&m.category))
            .map(|m| m.box3)
            .collect();

        if floor_boxes.is_empty() {
            return RoofGrid { cells: vec![], rho: 1.0, gamma: 0.0 };
        }

        let rafter_boxes: Vec<Box3> = scene
            .members_of(Category::Rafter)
            .map(|(_, m)| m.box3.inflated_xy(params.rafter_margin_mu))
            .collect();

        let mut bounds = floor_boxes[0];
        for b in &floor_boxes[1..] {
            bounds = bounds.union(b);
        }
        let i0 = (bounds.min()[0] / cell).floor() as i64;
        let i1 = (bounds.max()[0] / cell).ceil() as i64;
        let j0 = (bounds.min()[1] / cell).floor() as i64;
        let j1 = (bounds.max()[1] / cell).ceil() as i64;

        let mut cells = Vec::new();
        for i in i0..i1 {
            for j in j0..j1 {
                let cx = (i as f64 + 0.5) * cell;
                let cy = (j as f64 + 0.5) * cell;
                if floor_boxes.iter().any(|b| b.contains_xy(cx, cy)) {
                    let covered = rafter_boxes.iter().any(|b| b.contains_xy(cx, cy));
                    cells.push(((i, j), covered));
                }
            }
        }

        let total = cells.len();
        let rho = if total == 0 {
            1.0
        } else {
            cells.iter().filter(|(_, c)| *c).count() as f64 / total as f64
        };
        RoofGrid { cells, rho, gamma: 1.0 - rho }
    }
}

/// T6: the rafter projections must cover at least `coverage_min_rho` of
/// the footprint cells. Returns the coverage ratio alongside the result.
pub fn roof_coverage(scene: &Scene, params: &ValidationParams) -> (TestResult, f64) {
    let grid = RoofGrid::build(scene, params);
    let rho = grid.rho;
    (roof_coverage_with(&grid, params), rho)
}

pub(crate) fn roof_coverage_with(grid: &RoofGrid, params: &ValidationParams) -> TestResult {
    let violations = if grid.rho >= params.coverage_min_rho {
        vec![]
    } else {
        vec![violation(
            TestId::T6,
            vec![],
            Quantity::ratio(grid.rho),
            Quantity::ratio(params.coverage_min_rho),
            format!(
                "Roof coverage below {}; detected coverage {} over {} footprint cells",
                fmt_quantity(params.coverage_min_rho),
                fmt_quantity(grid.rho),
                grid.cells.len()
            ),
        )]
    };
    TestResult::new(TestId::T6, violations)
}

/// Cap on enumerated gap cells per T7 report.
const GAP_CELL_CAP: usize = 16;

/// T7: the uncovered fraction of the footprint must not exceed
/// `gap_max_gamma`. Returns the gap ratio alongside the result.
pub fn gap_detection(scene: &Scene, params: &ValidationParams) -> (TestResult, f64) {
    let grid = RoofGrid::build(scene, params);
    let gamma = grid.gamma;
    (gap_detection_with(&grid, params), gamma)
}

pub(crate) fn gap_detection_with(grid: &RoofGrid, params: &ValidationParams) -> TestResult {
    let violations = if grid.gamma <= params.gap_max_gamma {
        vec![]
    } else {
        let mut gap_cells: Vec<(i64, i64)> = grid
            .cells
            .iter()
            .filter(|(_, covered)| !covered)
            .map(|(c, _)| *c)
            .collect();
        gap_cells.sort_unstable();
        let shown = gap_cells.len().min(GAP_CELL_CAP);
        let mut listed: Vec<String> = gap_cells[..shown]
            .iter()
            .map(|(i, j)| format!("({i}, {j})"))
            .collect();
        if gap_cells.len() > shown {
            listed.push(format!("and {} more", gap_cells.len() - shown));
        }
        vec![violation(
            TestId::T7,
            vec![],
            Quantity::ratio(grid.gamma),
            Quantity::ratio(params.gap_max_gamma),
            format!(
                "Roof gap ratio exceeds {}; detected {} with uncovered cells {}",
                fmt_quantity(params.gap_max_gamma),
                fmt_quantity(grid.gamma),
                listed.join(", ")
            ),
        )]
    };
    TestResult::new(TestId::T7, violations)
}

// ---------------------------------------------------------------------------
// T8 cantilever limits
// ---------------------------------------------------------------------------

/// T8: elevated sills must sit near ground-reaching supports; long sills
/// need at least two, with no support gap wider than the spacing limit.
pub fn cantilever(scene: &Scene, params: &ValidationParams) -> TestResult {
    let supports: Vec<&Member> = scene
        .members
        .iter()
        .filter(|m| m.box3.min()[2] < params.contact.ground_height)
        .collect();

    let mut violations = Vec::new();
    for (_, sill) in scene.members_of(Category::Sill) {
        if sill.box3.min()[2] <= params.elevated_sill_z {
            continue;
        }
        let length = sill.span();
        let nearby: Vec<&Member> = supports
            .iter()
            .filter(|s| sill.box3.xy_distance(&s.box3) <= params.cantilever_max_c)
            .copied()
            .collect();

        if length > params.cantilever_spacing_c_sp {
            if nearby.len() < 2 {
                violations.push(violation(
                    TestId::T8,
                    vec![sill.name.clone()],
                    Quantity { value: nearby.len() as f64, unit: "supports" },
                    Quantity { value: 2.0, unit: "supports" },
                    format!(
                        "Elevated sill {} lacks supports; detected {} nearby of 2 required",
                        sill.name,
                        nearby.len()
                    ),
                ));
                continue;
            }
            // Project support centers onto the sill's long axis.
            let axis = if sill.box3.extent(Axis::X) >= sill.box3.extent(Axis::Y) {
                Axis::X
            } else {
                Axis::Y
            };
            let mut stations: Vec<(f64, &Member)> = nearby
                .iter()
                .map(|s| (s.box3.center()[axis.index()], *s))
                .collect();
            stations.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.name.cmp(&b.1.name)));
            for pair in stations.windows(2) {
                let gap = pair[1].0 - pair[0].0;
                if gap > params.cantilever_spacing_c_sp {
                    let (a, b) = (pair[0].1, pair[1].1);
                    violations.push(violation(
                        TestId::T8,
                        vec![a.name.clone(), b.name.clone()],
                        Quantity::meters(gap),
                        Quantity::meters(params.cantilever_spacing_c_sp),
                        format!(
                            "{} gap exceeds {} m; detected spacing {} m between {} and {}",
                            a.category,
                            fmt_quantity(params.cantilever_spacing_c_sp),
                            fmt_quantity(gap),
                            a.name,
                            b.name
                        ),
                    ));
                }
            }
        } else if nearby.is_empty() {
            let nearest = supports
                .iter()
                .map(|s| sill.box3.xy_distance(&s.box3))
                .min_by(f64::total_cmp)
                .unwrap_or(f64::INFINITY);
            violations.push(violation(
                TestId::T8,
                vec![sill.name.clone()],
                Quantity::meters(nearest),
                Quantity::meters(params.cantilever_max_c),
                format!(
                    "No support within {} m of elevated sill {}; detected nearest at {} m",
                    fmt_quantity(params.cantilever_max_c),
                    sill.name,
                    fmt_quantity(nearest)
                ),
            ));
        }
    }
    TestResult::new(TestId::T8, violations)
}

// ---------------------------------------------------------------------------
// T10 dual-end connection
// ---------------------------------------------------------------------------

/// 1-D gap between an interval and a zone.
fn interval_gap(lo_a: f64, hi_a: f64, lo_b: f64, hi_b: f64) -> f64 {
    f64::max(0.0, f64::max(lo_a, lo_b) - f64::min(hi_a, hi_b))
}

/// T10: every rafter and stud tall enough to matter must have a connector
/// in both its bottom and top zones. A rafter with a free top end is a
/// hinge failure; a stud with a free bottom end is a floating column.
pub fn dual_end(scene: &Scene, params: &ValidationParams) -> TestResult {
    let eps = params.zone_tolerance_eps_c;
    let mut violations = Vec::new();

    for (i, m) in scene.members.iter().enumerate() {
        if m.category != Category::Rafter && m.category != Category::Stud {
            continue;
        }
        let z_min = m.box3.min()[2];
        let z_max = m.box3.max()[2];
        let height = z_max - z_min;
        if height < params.min_dualend_height {
            continue;
        }
        let zone_depth = params.zone_fraction_alpha * height;
        let zones = [
            ("bottom", z_min, z_min + zone_depth),
            ("top", z_max - zone_depth, z_max),
        ];

        for (end, lo, hi) in zones {
            let mut connected = false;
            // Smallest tolerance that would have connected some member.
            let mut nearest = f64::INFINITY;
            for (j, other) in scene.members.iter().enumerate() {
                if i == j {
                    continue;
                }
                let gx = m.box3.axis_gap(&other.box3, Axis::X);
                let gy = m.box3.axis_gap(&other.box3, Axis::Y);
                let gz = interval_gap(other.box3.min()[2], other.box3.max()[2], lo, hi);
                let reach = gx.max(gy).max(gz);
                nearest = nearest.min(reach);
                if gx <= eps && gy <= eps && gz <= eps {
                    connected = true;
                    break;
                }
            }
            if connected {
                continue;
            }
            let tag = match (m.category, end) {
                (Category::Rafter, "top") => " (hinge failure)",
                (Category::Stud, "bottom") => " (floating column)",
                _ => "",
            };
            violations.push(violation(
                TestId::T10,
                vec![m.name.clone()],
                Quantity::meters(nearest),
                Quantity::meters(eps),
                format!(
                    "{} {} {end} zone unconnected{tag}; detected nearest connector at {} m beyond {} m",
                    m.category,
                    m.name,
                    fmt_quantity(nearest),
                    fmt_quantity(eps)
                ),
            ));
        }
    }
    TestResult::new(TestId::T10, violations)
}
