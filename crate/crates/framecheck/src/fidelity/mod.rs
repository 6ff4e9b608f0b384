//! Fidelity metrics between a generated scene and its reference.
//!
//! Topological fidelity compares scene graphs directly: per-category
//! census accuracy `C`, Hungarian centroid match rate `M`, voxel IoU `V`,
//! and their weighted composite `T`. Visual fidelity compares rendered
//! views with an alpha-weighted MSE score per view and a joint pass over
//! all five views.

mod assignment;
pub mod visual;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use visual::{load_view_dir, view_score, visual_scores, RasterView, ViewId, VisualScores};

use crate::scene::{Category, Scene};
use crate::validate::SuiteReport;

/// Tolerances, weights, and grid settings for the fidelity metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FidelityParams {
    /// Centroid distance tolerance for a Hungarian match, meters.
    pub match_tolerance_delta: f64,
    /// Composite weights `(w_C, w_M, w_V)`; must sum to 1.
    pub weights: (f64, f64, f64),
    /// Voxel grid cell size, meters.
    pub voxel_resolution: f64,
    /// MSE-to-score scale: `S_v = max(0, 1 - lambda * MSE_v)`.
    pub visual_lambda: f64,
    /// Per-view pass threshold.
    pub visual_threshold_tau: f64,
    /// Alpha values strictly above this count as foreground.
    pub alpha_cutoff: f64,
    /// Joint visual pass over all five views (the stricter rule); when
    /// false, the mean score is thresholded instead.
    pub joint_requires_all_views: bool,
}

impl Default for FidelityParams {
    fn default() -> Self {
        Self {
            match_tolerance_delta: 0.3,
            weights: (0.3, 0.4, 0.3),
            voxel_resolution: 0.1,
            visual_lambda: 10.0,
            visual_threshold_tau: 0.6,
            alpha_cutoff: 0.0,
            joint_requires_all_views: true,
        }
    }
}

/// Fidelity computation errors.
#[derive(Debug, Error)]
pub enum FidelityError {
    #[error("composite weights must sum to 1, got {sum}")]
    WeightSum { sum: f64 },
    #[error("missing view {0}")]
    MissingView(ViewId),
    #[error("duplicate view {0}")]
    DuplicateView(ViewId),
    #[error("view {view}: expected a {expected}x{expected} raster, got {width}x{height}")]
    Dimension {
        view: ViewId,
        expected: u32,
        width: u32,
        height: u32,
    },
    #[error("view id mismatch: generated {generated}, reference {reference}")]
    ViewMismatch { generated: ViewId, reference: ViewId },
    #[error("failed to load image {path}: {source}")]
    Image {
        path: std::path::PathBuf,
        source: image::ImageError,
    },
}

/// The four topological fidelity statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopoScores {
    pub census_c: f64,
    pub match_m: f64,
    pub voxel_v: f64,
    pub composite_t: f64,
}

/// Census accuracy: mean over categories present in either scene of
/// `min(n*, n^) / max(n*, n^)`. Categories absent from both scenes do
/// not count; two empty scenes score 1.
pub fn census_accuracy(reference: &Scene, generated: &Scene) -> f64 {
    let mut counts: BTreeMap<Category, (usize, usize)> = BTreeMap::new();
    for m in &reference.members {
        counts.entry(m.category).or_default().0 += 1;
    }
    for m in &generated.members {
        counts.entry(m.category).or_default().1 += 1;
    }
    if counts.is_empty() {
        return 1.0;
    }
    let total: f64 = counts
        .values()
        .map(|&(a, b)| a.min(b) as f64 / a.max(b) as f64)
        .sum();
    total / counts.len() as f64
}

/// Hungarian match rate: the fraction of reference members whose
/// optimally assigned generated counterpart lies within the positional
/// tolerance. Rectangular problems are padded with dummy entries costing
/// more than any real distance, so dummies never displace a feasible
/// real match. Normalized by the reference member count.
pub fn hungarian_match(reference: &Scene, generated: &Scene, params: &FidelityParams) -> f64 {
    let ref_centroids: Vec<[f64; 3]> = reference.members.iter().map(|m| m.box3.center()).collect();
    let gen_centroids: Vec<[f64; 3]> = generated.members.iter().map(|m| m.box3.center()).collect();

    if ref_centroids.is_empty() {
        return 1.0;
    }
    if gen_centroids.is_empty() {
        return 0.0;
    }

    // Dummy cost: joint bounding diagonal + 1 exceeds any real distance.
    let joint = reference
        .bounds()
        .into_iter()
        .chain(generated.bounds())
        .reduce(|a, b| a.union(&b))
        .expect("both scenes non-empty");
    let dummy = joint.diagonal() + 1.0;

    let n = ref_centroids.len().max(gen_centroids.len());
    let mut cost = vec![dummy; n * n];
    for (i, r) in ref_centroids.iter().enumerate() {
        for (j, g) in gen_centroids.iter().enumerate() {
            cost[i * n + j] = distance(r, g);
        }
    }

    let assignment = assignment::solve(&assignment::CostMatrix::new(n, cost));
    let matched = ref_centroids
        .iter()
        .enumerate()
        .filter(|(i, r)| {
            let j = assignment[*i];
            j < gen_centroids.len() && distance(r, &gen_centroids[j]) <= params.match_tolerance_delta
        })
        .count();
    matched as f64 / ref_centroids.len() as f64
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Occupancy bitset over a shared voxel lattice.
struct VoxelGrid {
    words: Vec<u64>,
}

impl VoxelGrid {
    fn fill(scene: &Scene, origin: [f64; 3], dims: [usize; 3], res: f64) -> Self {
        let total = dims[0] * dims[1] * dims[2];
        let mut words = vec![0u64; total.div_ceil(64)];
        for m in &scene.members {
            let b = &m.box3;
            let mut lo = [0usize; 3];
            let mut hi = [0usize; 3];
            let mut empty = false;
            for k in 0..3 {
                // Voxel centers at origin + (i + 0.5) * res; filled when the
                // center lies inside the box (closed bounds).
                let lo_f = ((b.min()[k] - origin[k]) / res - 0.5).ceil();
                let hi_f = ((b.max()[k] - origin[k]) / res - 0.5).floor();
                if hi_f < lo_f || hi_f < 0.0 || lo_f >= dims[k] as f64 {
                    empty = true;
                    break;
                }
                lo[k] = lo_f.max(0.0) as usize;
                hi[k] = (hi_f as usize).min(dims[k] - 1);
            }
            if empty {
                continue;
            }
            for ix in lo[0]..=hi[0] {
                for iy in lo[1]..=hi[1] {
                    for iz in lo[2]..=hi[2] {
                        let idx = (ix * dims[1] + iy) * dims[2] + iz;
                        words[idx / 64] |= 1u64 << (idx % 64);
                    }
                }
            }
        }
        Self { words }
    }
}

/// Voxel IoU on a shared grid anchored at the joint bounding-box minimum.
/// Two scenes that fill no voxels at all (including two empty scenes)
/// score 1.
pub fn voxel_iou(reference: &Scene, generated: &Scene, params: &FidelityParams) -> f64 {
    let joint = match (reference.bounds(), generated.bounds()) {
        (Some(a), Some(b)) => a.union(&b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return 1.0,
    };
    let res = params.voxel_resolution;
    let origin = joint.min();
    let dims = [
        ((joint.extent(crate::geom::Axis::X) / res).ceil() as usize).max(1),
        ((joint.extent(crate::geom::Axis::Y) / res).ceil() as usize).max(1),
        ((joint.extent(crate::geom::Axis::Z) / res).ceil() as usize).max(1),
    ];

    let (a, b) = fill_pair(reference, generated, origin, dims, res);

    let mut intersection = 0u64;
    let mut union = 0u64;
    for (wa, wb) in a.words.iter().zip(&b.words) {
        intersection += (wa & wb).count_ones() as u64;
        union += (wa | wb).count_ones() as u64;
    }
    if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    }
}

#[cfg(feature = "parallel")]
fn fill_pair(
    reference: &Scene,
    generated: &Scene,
    origin: [f64; 3],
    dims: [usize; 3],
    res: f64,
) -> (VoxelGrid, VoxelGrid) {
    rayon::join(
        || VoxelGrid::fill(reference, origin, dims, res),
        || VoxelGrid::fill(generated, origin, dims, res),
    )
}

#[cfg(not(feature = "parallel"))]
fn fill_pair(
    reference: &Scene,
    generated: &Scene,
    origin: [f64; 3],
    dims: [usize; 3],
    res: f64,
) -> (VoxelGrid, VoxelGrid) {
    (
        VoxelGrid::fill(reference, origin, dims, res),
        VoxelGrid::fill(generated, origin, dims, res),
    )
}

/// Weighted composite `T = w_C C + w_M M + w_V V`.
pub fn composite_topo(
    census_c: f64,
    match_m: f64,
    voxel_v: f64,
    params: &FidelityParams,
) -> Result<f64, FidelityError> {
    let (wc, wm, wv) = params.weights;
    let sum = wc + wm + wv;
    if (sum - 1.0).abs() > 1e-9 {
        return Err(FidelityError::WeightSum { sum });
    }
    Ok(wc * census_c + wm * match_m + wv * voxel_v)
}

/// All four topological statistics in one call.
pub fn topo_scores(
    reference: &Scene,
    generated: &Scene,
    params: &FidelityParams,
) -> Result<TopoScores, FidelityError> {
    let census_c = census_accuracy(reference, generated);
    let match_m = hungarian_match(reference, generated, params);
    let voxel_v = voxel_iou(reference, generated, params);
    let composite_t = composite_topo(census_c, match_m, voxel_v, params)?;
    Ok(TopoScores {
        census_c,
        match_m,
        voxel_v,
        composite_t,
    })
}

/// Joint pass: full structural validity and visual pass simultaneously.
pub fn joint_pass(report: &SuiteReport, visual: &VisualScores) -> bool {
    report.overall_pass && visual.joint_visual_pass
}
