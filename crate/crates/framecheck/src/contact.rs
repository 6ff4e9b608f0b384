//! Member adjacency, the ground set, and the support fixed point.
//!
//! Two members are adjacent when their boxes overlap within tolerance
//! `eps` on all three axes simultaneously. Support propagates outward
//! from the ground set (members whose bottom face sits below the ground
//! height) along the adjacency relation until a fixed point is reached;
//! the Topological Stability Index is the supported fraction.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::{Axis, Box3};
use crate::scene::{Member, Scene};

/// Contact tolerance and ground threshold, both in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContactParams {
    pub contact_tolerance_eps: f64,
    pub ground_height: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        Self {
            contact_tolerance_eps: 0.05,
            ground_height: 0.1,
        }
    }
}

/// True when the boxes' gaps are within `eps` on all three axes
/// (touching counts, and so does a gap of exactly `eps`).
#[inline]
pub fn boxes_adjacent(a: &Box3, b: &Box3, eps: f64) -> bool {
    a.axis_gap(b, Axis::X) <= eps
        && a.axis_gap(b, Axis::Y) <= eps
        && a.axis_gap(b, Axis::Z) <= eps
}

/// Adjacency of two members under the given parameters.
pub fn are_adjacent(a: &Member, b: &Member, params: &ContactParams) -> bool {
    boxes_adjacent(&a.box3, &b.box3, params.contact_tolerance_eps)
}

/// Reference adjacency: exhaustive pairwise gap checks, O(n^2).
/// Returns index pairs `(i, j)` with `i < j` in lexicographic order.
pub fn adjacency_naive(boxes: &[Box3], eps: f64) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            if boxes_adjacent(&boxes[i], &boxes[j], eps) {
                pairs.push((i as u32, j as u32));
            }
        }
    }
    pairs
}

/// Production adjacency: sweep-and-prune on the X axis to generate
/// candidate pairs, then full gap checks. Output is identical to
/// [`adjacency_naive`] on every input.
pub fn adjacency(boxes: &[Box3], eps: f64) -> Vec<(u32, u32)> {
    // Sort indices by min-x; a pair can only be adjacent while the sweep
    // window overlaps on x (inflated by eps).
    let mut order: Vec<u32> = (0..boxes.len() as u32).collect();
    order.sort_by(|&a, &b| {
        boxes[a as usize].min()[0]
            .total_cmp(&boxes[b as usize].min()[0])
            .then(a.cmp(&b))
    });

    let mut candidates = Vec::new();
    for (si, &i) in order.iter().enumerate() {
        let reach = boxes[i as usize].max()[0] + eps;
        for &j in &order[si + 1..] {
            if boxes[j as usize].min()[0] > reach {
                break;
            }
            candidates.push(if i < j { (i, j) } else { (j, i) });
        }
    }

    let mut pairs = filter_candidates(boxes, eps, &candidates);
    pairs.sort_unstable();
    pairs
}

#[cfg(feature = "parallel")]
fn filter_candidates(boxes: &[Box3], eps: f64, candidates: &[(u32, u32)]) -> Vec<(u32, u32)> {
    candidates
        .par_iter()
        .copied()
        .filter(|&(i, j)| boxes_adjacent(&boxes[i as usize], &boxes[j as usize], eps))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn filter_candidates(boxes: &[Box3], eps: f64, candidates: &[(u32, u32)]) -> Vec<(u32, u32)> {
    candidates
        .iter()
        .copied()
        .filter(|&(i, j)| boxes_adjacent(&boxes[i as usize], &boxes[j as usize], eps))
        .collect()
}

/// Result of support propagation over one scene.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportState {
    /// Adjacent index pairs `(i, j)`, `i < j`, lexicographically sorted.
    pub adjacency: Vec<(u32, u32)>,
    /// Per-member ground-set flag (`z_min < ground_height`).
    pub grounded: Vec<bool>,
    /// Per-member support flag: grounded, or adjacent to a supported member.
    pub supported: Vec<bool>,
    /// Topological Stability Index: supported fraction, 1.0 for an empty scene.
    pub tsi: f64,
}

impl SupportState {
    pub fn supported_count(&self) -> usize {
        self.supported.iter().filter(|&&s| s).count()
    }

    /// True when every member's load path reaches the ground.
    pub fn fully_supported(&self) -> bool {
        self.supported_count() == self.supported.len()
    }
}

/// Computes the least fixed point of the support function: a member is
/// supported when it is grounded or adjacent to a supported member.
/// The result is independent of member order and propagation schedule.
pub fn compute_support(scene: &Scene, params: &ContactParams) -> SupportState {
    let boxes: Vec<Box3> = scene.members.iter().map(|m| m.box3).collect();
    let adjacency = adjacency(&boxes, params.contact_tolerance_eps);

    let n = boxes.len();
    let grounded: Vec<bool> = boxes
        .iter()
        .map(|b| b.min()[2] < params.ground_height)
        .collect();

    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(i, j) in &adjacency {
        neighbors[i as usize].push(j);
        neighbors[j as usize].push(i);
    }

    // Breadth-first propagation from the ground set.
    let mut supported = grounded.clone();
    let mut frontier: Vec<u32> = (0..n as u32).filter(|&i| grounded[i as usize]).collect();
    while let Some(i) = frontier.pop() {
        for &j in &neighbors[i as usize] {
            if !supported[j as usize] {
                supported[j as usize] = true;
                frontier.push(j);
            }
        }
    }

    let tsi = if n == 0 {
        1.0
    } else {
        supported.iter().filter(|&&s| s).count() as f64 / n as f64
    };

    SupportState {
        adjacency,
        grounded,
        supported,
        tsi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Category;

    fn member(name: &str, min: [f64; 3], max: [f64; 3]) -> Member {
        Member {
            name: name.to_string(),
            category: Category::Post,
            box3: Box3::new(min, max).unwrap(),
        }
    }

    fn scene(members: Vec<Member>) -> Scene {
        Scene::new(members, None).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let p = ContactParams::default();
        let a = member("Post_a", [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]);
        // Gap 0.04 on x, overlapping on y and z.
        let b = member("Post_b", [1.04, 0.0, 0.0], [2.04, 1.0, 1.0]);
        assert!(are_adjacent(&a, &b, &p));
        // Gap 0.06 on x.
        let c = member("Post_c", [1.06, 0.0, 0.0], [2.06, 1.0, 1.0]);
        assert!(!are_adjacent(&a, &c, &p));
        // Identical boxes.
        assert!(are_adjacent(&a, &a, &p));
        // Gap of exactly eps is adjacent (binary-exact tolerance so the
        // boundary is representable).
        let exact = ContactParams { contact_tolerance_eps: 0.0625, ..p };
        let d = member("Post_d", [1.0625, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert!(are_adjacent(&a, &d, &exact));
    }

    #[test]
    fn sweep_matches_naive_on_clustered_boxes() {
        // Deterministic pseudo-random boxes, densely packed.
        let mut boxes = Vec::new();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as f64 / (1u64 << 31) as f64
        };
        for _ in 0..120 {
            let min = [next() * 4.0, next() * 4.0, next() * 4.0];
            let ext = [next() + 0.01, next() + 0.01, next() + 0.01];
            boxes.push(
                Box3::new(min, [min[0] + ext[0], min[1] + ext[1], min[2] + ext[2]]).unwrap(),
            );
        }
        assert_eq!(adjacency(&boxes, 0.05), adjacency_naive(&boxes, 0.05));
    }

    #[test]
    fn support_chain_from_ground() {
        let s = scene(vec![
            member("Post_ground", [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]),
            member("Post_mid", [0.0, 0.0, 1.0], [1.0, 1.0, 2.0]),
            member("Post_top", [0.0, 0.0, 2.0], [1.0, 1.0, 3.0]),
        ]);
        let st = compute_support(&s, &ContactParams::default());
        assert!(st.fully_supported());
        assert_eq!(st.tsi, 1.0);
    }

    #[test]
    fn floating_member_lowers_tsi() {
        let mut members = Vec::new();
        for k in 0..9 {
            members.push(member(
                &format!("Post_{k}"),
                [k as f64, 0.0, 0.0],
                [k as f64 + 1.0, 1.0, 1.0],
            ));
        }
        members.push(member("Post_float", [0.0, 0.0, 2.0], [1.0, 1.0, 3.0]));
        let st = compute_support(&scene(members), &ContactParams::default());
        assert_eq!(st.supported_count(), 9);
        assert!((st.tsi - 0.9).abs() < 1e-12);
        assert!(!st.supported[9]);
    }

    #[test]
    fn single_low_box_is_grounded() {
        let s = scene(vec![member("Post_low", [0.0, 0.0, 0.05], [1.0, 1.0, 1.0])]);
        let st = compute_support(&s, &ContactParams::default());
        assert!(st.grounded[0] && st.supported[0]);
        assert_eq!(st.tsi, 1.0);
    }

    #[test]
    fn empty_scene_has_unit_tsi() {
        let st = compute_support(&scene(vec![]), &ContactParams::default());
        assert_eq!(st.tsi, 1.0);
        assert!(st.fully_supported());
    }
}
