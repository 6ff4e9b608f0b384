//! Visual fidelity: alpha-weighted MSE over rendered views.
//!
//! Views are RGBA rasters resized to 512 x 512 with an area-averaging
//! filter on ingest (so downsampled alpha edges stay in [0, 1] and the
//! foreground cutoff applies after the resize). The per-view score is
//! `S_v = max(0, 1 - lambda * MSE_v)` where the MSE is computed over the
//! union of the two foreground masks, summing squared error across the
//! three color channels.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::{FidelityError, FidelityParams};

/// Scoring resolution: every view is resized to this square size.
pub const SCORE_SIZE: u32 = 512;

/// The five canonical viewpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewId {
    Front,
    Back,
    Left,
    Right,
    FrontRight,
}

impl ViewId {
    pub const ALL: [ViewId; 5] = [
        ViewId::Front,
        ViewId::Back,
        ViewId::Left,
        ViewId::Right,
        ViewId::FrontRight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViewId::Front => "front",
            ViewId::Back => "back",
            ViewId::Left => "left",
            ViewId::Right => "right",
            ViewId::FrontRight => "front_right",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<ViewId> {
        ViewId::ALL.iter().copied().find(|v| v.as_str() == s)
    }

    /// File name of this view inside a per-structure directory.
    pub fn file_name(self) -> String {
        format!("{}.png", self.as_str())
    }
}

impl fmt::Display for ViewId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One view's pixels at scoring resolution: RGB and alpha in [0, 1].
#[derive(Debug, Clone)]
pub struct RasterView {
    pub view_id: ViewId,
    pub width: u32,
    pub height: u32,
    rgb: Vec<[f32; 3]>,
    alpha: Vec<f32>,
}

impl RasterView {
    /// Builds a view from interleaved RGBA data (row-major, values in
    /// [0, 1]), resizing to the scoring resolution by area averaging.
    pub fn from_rgba(view_id: ViewId, width: u32, height: u32, rgba: &[f32]) -> Self {
        assert_eq!(
            rgba.len(),
            (width as usize) * (height as usize) * 4,
            "rgba length must be width * height * 4"
        );
        let resized = if width == SCORE_SIZE && height == SCORE_SIZE {
            rgba.to_vec()
        } else {
            resize_area(rgba, width as usize, height as usize, 4, SCORE_SIZE as usize)
        };
        let pixels = (SCORE_SIZE as usize) * (SCORE_SIZE as usize);
        let mut rgb = Vec::with_capacity(pixels);
        let mut alpha = Vec::with_capacity(pixels);
        for p in 0..pixels {
            rgb.push([resized[p * 4], resized[p * 4 + 1], resized[p * 4 + 2]]);
            alpha.push(resized[p * 4 + 3]);
        }
        RasterView {
            view_id,
            width: SCORE_SIZE,
            height: SCORE_SIZE,
            rgb,
            alpha,
        }
    }

    /// Loads a PNG with alpha channel.
    pub fn from_png(path: &Path, view_id: ViewId) -> Result<Self, FidelityError> {
        let img = image::open(path)
            .map_err(|source| FidelityError::Image {
                path: path.to_path_buf(),
                source,
            })?
            .into_rgba32f();
        let (w, h) = img.dimensions();
        Ok(Self::from_rgba(view_id, w, h, img.as_raw()))
    }
}

/// Separable area-average resample to `out x out` square output.
fn resize_area(src: &[f32], sw: usize, sh: usize, channels: usize, out: usize) -> Vec<f32> {
    let horizontal = resample_rows(src, sw, sh, channels, out);
    // Transposing via index arithmetic: resample columns by treating the
    // image column-major for the second pass.
    let mut transposed = vec![0.0f32; horizontal.len()];
    for y in 0..sh {
        for x in 0..out {
            for c in 0..channels {
                transposed[(x * sh + y) * channels + c] = horizontal[(y * out + x) * channels + c];
            }
        }
    }
    let vertical = resample_rows(&transposed, sh, out, channels, out);
    let mut result = vec![0.0f32; out * out * channels];
    for x in 0..out {
        for y in 0..out {
            for c in 0..channels {
                result[(y * out + x) * channels + c] = vertical[(x * out + y) * channels + c];
            }
        }
    }
    result
}

/// Resamples each row of a `width x rows` image to `out` samples by
/// fractional box averaging.
fn resample_rows(src: &[f32], width: usize, rows: usize, channels: usize, out: usize) -> Vec<f32> {
    let scale = width as f64 / out as f64;
    let mut result = vec![0.0f32; out * rows * channels];
    for row in 0..rows {
        for o in 0..out {
            let lo = o as f64 * scale;
            let hi = (o as f64 + 1.0) * scale;
            let first = lo.floor() as usize;
            let last = (hi.ceil() as usize).min(width);
            let mut acc = vec![0.0f64; channels];
            for i in first..last {
                let weight = (hi.min((i + 1) as f64) - lo.max(i as f64)).max(0.0);
                for (c, a) in acc.iter_mut().enumerate() {
                    *a += weight * src[(row * width + i) * channels + c] as f64;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                result[(row * out + o) * channels + c] = (a / scale) as f32;
            }
        }
    }
    result
}

/// Per-view visual similarity: union-mask alpha-weighted MSE mapped to
/// `max(0, 1 - lambda * MSE)`. Two views with empty masks score 1.
pub fn view_score(
    generated: &RasterView,
    reference: &RasterView,
    params: &FidelityParams,
) -> Result<f64, FidelityError> {
    if generated.view_id != reference.view_id {
        return Err(FidelityError::ViewMismatch {
            generated: generated.view_id,
            reference: reference.view_id,
        });
    }
    for v in [generated, reference] {
        if v.width != SCORE_SIZE || v.height != SCORE_SIZE {
            return Err(FidelityError::Dimension {
                view: v.view_id,
                expected: SCORE_SIZE,
                width: v.width,
                height: v.height,
            });
        }
    }

    let cutoff = params.alpha_cutoff as f32;
    let mut masked = 0u64;
    let mut error_sum = 0.0f64;
    for p in 0..generated.rgb.len() {
        if generated.alpha[p] > cutoff || reference.alpha[p] > cutoff {
            masked += 1;
            for c in 0..3 {
                let d = generated.rgb[p][c] as f64 - reference.rgb[p][c] as f64;
                error_sum += d * d;
            }
        }
    }
    if masked == 0 {
        return Ok(1.0);
    }
    let mse = error_sum / masked as f64;
    Ok(f64::max(0.0, 1.0 - params.visual_lambda * mse))
}

/// Per-view scores, their mean, and the joint pass flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisualScores {
    /// Scores in canonical view order.
    pub per_view: Vec<(ViewId, f64)>,
    pub mean_s: f64,
    /// All five views at or above the threshold (or the mean, when
    /// configured for the mean rule).
    pub joint_visual_pass: bool,
}

/// Scores all five canonical views; both sides must provide each view
/// exactly once.
pub fn visual_scores(
    generated: &[RasterView],
    reference: &[RasterView],
    params: &FidelityParams,
) -> Result<VisualScores, FidelityError> {
    let pick = |views: &[RasterView], id: ViewId| -> Result<usize, FidelityError> {
        let mut found = None;
        for (i, v) in views.iter().enumerate() {
            if v.view_id == id {
                if found.is_some() {
                    return Err(FidelityError::DuplicateView(id));
                }
                found = Some(i);
            }
        }
        found.ok_or(FidelityError::MissingView(id))
    };

    let mut per_view = Vec::with_capacity(5);
    for id in ViewId::ALL {
        let g = &generated[pick(generated, id)?];
        let r = &reference[pick(reference, id)?];
        per_view.push((id, view_score(g, r, params)?));
    }
    let mean_s = per_view.iter().map(|(_, s)| s).sum::<f64>() / per_view.len() as f64;
    let joint_visual_pass = if params.joint_requires_all_views {
        per_view.iter().all(|(_, s)| *s >= params.visual_threshold_tau)
    } else {
        mean_s >= params.visual_threshold_tau
    };
    Ok(VisualScores {
        per_view,
        mean_s,
        joint_visual_pass,
    })
}

/// Loads the five canonical views (`front.png`, `back.png`, `left.png`,
/// `right.png`, `front_right.png`) from a per-structure directory.
pub fn load_view_dir(dir: &Path) -> Result<Vec<RasterView>, FidelityError> {
    ViewId::ALL
        .iter()
        .map(|&id| RasterView::from_png(&dir.join(id.file_name()), id))
        .collect()
}
