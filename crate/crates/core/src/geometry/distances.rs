//! Object-relative distance fields used by the skeleton-aware weights.

use super::edt::{nearest_feature, squared_distances, UNREACHABLE};
use super::SkeletonSet;
use crate::error::{Error, Result};
use crate::raster::{LabelMap, ScalarField};

fn expand(bbox: (usize, usize, usize, usize), r: usize, w: usize, h: usize) -> (usize, usize, usize, usize) {
    (
        bbox.0.saturating_sub(r),
        bbox.1.saturating_sub(r),
        (bbox.2 + r).min(w - 1),
        (bbox.3 + r).min(h - 1),
    )
}

/// Squared distances inside a window, with features selected by image
/// coordinates. Returns the window width alongside the buffer.
fn window_distances(
    window: (usize, usize, usize, usize),
    is_feature: impl Fn(usize, usize) -> bool,
) -> (usize, usize, Vec<u64>) {
    let (x0, y0, x1, y1) = window;
    let (ww, wh) = (x1 - x0 + 1, y1 - y0 + 1);
    let sq = squared_distances(ww, wh, |i| is_feature(x0 + i % ww, y0 + i / ww));
    (ww, wh, sq)
}

/// Distances from every boundary pixel (label 0) to the nearest and the
/// second-nearest *distinct* object, measured to the nearest pixel of each
/// object. Both fields are 0 on object pixels.
///
/// When two objects tie for nearest, `d2 == d1`.
pub fn two_nearest_object_distances(objects: &LabelMap) -> Result<(ScalarField, ScalarField)> {
    let (w, h) = objects.dims();
    let k = objects.num_labels() as usize;
    if k < 2 {
        return Err(Error::NeedTwoObjects(k));
    }
    let labels = objects.labels();
    let boundary: Vec<usize> = (0..w * h).filter(|&i| labels[i] == 0).collect();
    let mut d1 = ScalarField::zeros(w, h)?;
    let mut d2 = ScalarField::zeros(w, h)?;
    if boundary.is_empty() {
        return Ok((d1, d2));
    }

    let nearest_any = squared_distances(w, h, |i| labels[i] != 0);
    let max_d1 = boundary.iter().map(|&i| nearest_any[i]).max().unwrap_or(0);
    // Any object whose expanded box misses a pixel is farther than `radius`
    // from it, so a second-nearest found within `radius` is exact.
    let mut radius = 2 * ((max_d1 as f64).sqrt().ceil() as usize) + 2;
    let boxes = objects.bounding_boxes();
    let mut slot = vec![usize::MAX; w * h];
    for (n, &i) in boundary.iter().enumerate() {
        slot[i] = n;
    }

    loop {
        let mut best = vec![[(UNREACHABLE, 0u32); 2]; boundary.len()];
        for (o, &bbox) in boxes.iter().enumerate() {
            let label = o as u32 + 1;
            let window = expand(bbox, radius, w, h);
            let (ww, wh, sq) = window_distances(window, |x, y| objects.get(x, y) == label);
            for wy in 0..wh {
                for wx in 0..ww {
                    let i = (window.1 + wy) * w + window.0 + wx;
                    let n = slot[i];
                    if n == usize::MAX {
                        continue;
                    }
                    let d = sq[wy * ww + wx];
                    let b = &mut best[n];
                    if d < b[0].0 {
                        b[1] = b[0];
                        b[0] = (d, label);
                    } else if d < b[1].0 {
                        b[1] = (d, label);
                    }
                }
            }
        }
        let covers_image = radius >= w.max(h);
        let resolved = best.iter().all(|b| b[1].0 <= (radius * radius) as u64);
        if resolved || covers_image {
            for (n, &i) in boundary.iter().enumerate() {
                d1.values_mut()[i] = (best[n][0].0 as f64).sqrt();
                d2.values_mut()[i] = (best[n][1].0 as f64).sqrt();
            }
            return Ok((d1, d2));
        }
        radius *= 2;
    }
}

/// For each object pixel `x`: `d_nsp(x)` is the distance to the nearest
/// boundary pixel `b(x)`, and `d0_nsp(x)` is the distance from `b(x)` to
/// `s(x)`, the skeleton pixel of x's own object nearest to `x`. Ties for
/// `b(x)` and `s(x)` resolve to the smallest row-major index. Both fields
/// are 0 on boundary pixels.
pub fn skeleton_normalized_distances(
    objects: &LabelMap,
    skeletons: &SkeletonSet,
) -> Result<(ScalarField, ScalarField)> {
    normalized_distances(objects, &skeletons.per_object_skeletons)
}

pub(crate) fn normalized_distances(objects: &LabelMap, skel: &LabelMap) -> Result<(ScalarField, ScalarField)> {
    let (w, h) = objects.dims();
    if skel.dims() != (w, h) {
        return Err(Error::DimensionMismatch {
            expected: (w, h),
            found: skel.dims(),
        });
    }
    let labels = objects.labels();
    if !labels.contains(&0) {
        return Err(Error::NoFeaturePixels);
    }
    let to_boundary = squared_distances(w, h, |i| labels[i] == 0);

    let mut d_nsp = ScalarField::zeros(w, h)?;
    let mut d0_nsp = ScalarField::zeros(w, h)?;
    for (o, &bbox) in objects.bounding_boxes().iter().enumerate() {
        let label = o as u32 + 1;
        let (ww, wh, to_skeleton) = window_distances(bbox, |x, y| skel.get(x, y) == label);
        for wy in 0..wh {
            for wx in 0..ww {
                let (x, y) = (bbox.0 + wx, bbox.1 + wy);
                let i = y * w + x;
                if labels[i] != label {
                    continue;
                }
                let sq_b = to_boundary[i];
                let b = nearest_feature(x, y, sq_b, w, h, |j| labels[j] == 0).expect("exact distance has a witness");
                let sq_s = to_skeleton[wy * ww + wx];
                assert!(sq_s != UNREACHABLE, "object {label} has an empty skeleton");
                let (sx, sy) = nearest_feature(wx, wy, sq_s, ww, wh, |j| {
                    skel.get(bbox.0 + j % ww, bbox.1 + j / ww) == label
                })
                .expect("exact distance has a witness");
                let s = (bbox.0 + sx, bbox.1 + sy);
                let dx = b.0 as f64 - s.0 as f64;
                let dy = b.1 as f64 - s.1 as f64;
                d_nsp.values_mut()[i] = (sq_b as f64).sqrt();
                d0_nsp.values_mut()[i] = (dx * dx + dy * dy).sqrt();
            }
        }
    }
    Ok((d_nsp, d0_nsp))
}

/// `d_nsp / d0_nsp`, defined as 1 when `d0_nsp` is 0.
///
/// On skeleton pixels `s(x) = x`, so both distances are the same float and
/// the ratio is exactly 1. The ratio is not bounded above: near concave
/// corners the nearest boundary pixel can sit closer to the skeleton point
/// than `x` does.
#[inline]
pub fn skeleton_ratio(d_nsp: f64, d0_nsp: f64) -> f64 {
    if d0_nsp == 0.0 {
        1.0
    } else {
        d_nsp / d0_nsp
    }
}
