//! Skeleton-aware weighted cross-entropy.
//!
//! Weight maps are built once per ground-truth mask with
//! [`build_weight_maps`] and then reused by [`skeaw_loss`] for every
//! prediction scored against that mask.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalized_distances, per_object_skeletons, skeleton_ratio, two_nearest_object_distances};
use crate::raster::{connected_components, dilate, BinaryMask, Connectivity, LabelMap, ScalarField, Target};

/// Probabilities below this are clamped before taking the logarithm.
pub const LOG_FLOOR: f64 = 1e-12;

/// Tolerance on `p0 + p1 = 1`.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// Weight-map hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub w0: f64,
    pub d_iter: usize,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self { w0: 10.0, d_iter: 2 }
    }
}

/// Precomputed per-pixel weights for one ground-truth mask.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMaps {
    /// Foreground weights; nonzero exactly on `dilation_mask`.
    pub w1s: ScalarField,
    /// Background weights; nonzero exactly on object pixels.
    pub w0s: ScalarField,
    /// `dilate(gt, d_iter)`.
    pub dilation_mask: BinaryMask,
    pub params: WeightParams,
    /// `(w0_bce, w1_bce)` of the source mask.
    pub class_weights: (f64, f64),
}

impl WeightMaps {
    pub fn dims(&self) -> (usize, usize) {
        self.w1s.dims()
    }

    /// True where the foreground branch of the loss is scored.
    #[inline]
    pub fn selects_foreground(&self, idx: usize) -> bool {
        let md = if self.dilation_mask.get_index(idx) { 1.0 } else { 0.0 };
        self.w0s.values()[idx] < self.w1s.values()[idx] * md
    }

    /// Mask of pixels scored on the foreground branch.
    pub fn foreground_branch(&self) -> BinaryMask {
        let (w, h) = self.dims();
        BinaryMask::from_fn(w, h, |x, y| self.selects_foreground(y * w + x)).expect("dims already validated")
    }
}

/// Per-pixel class probabilities after softmax.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityPair {
    p0: ScalarField,
    p1: ScalarField,
}

impl ProbabilityPair {
    /// Validates ranges and that `p0 + p1 = 1` within [`SUM_TOLERANCE`].
    pub fn new(p0: ScalarField, p1: ScalarField) -> Result<Self> {
        if p0.dims() != p1.dims() {
            return Err(Error::DimensionMismatch {
                expected: p0.dims(),
                found: p1.dims(),
            });
        }
        let w = p0.width();
        for (i, (&a, &b)) in p0.values().iter().zip(p1.values()).enumerate() {
            let reason = if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                "probability outside [0, 1]"
            } else if (a + b - 1.0).abs() > SUM_TOLERANCE {
                "p0 + p1 differs from 1"
            } else {
                continue;
            };
            return Err(Error::InvalidProbabilities {
                x: i % w,
                y: i / w,
                reason: reason.to_string(),
            });
        }
        Ok(Self { p0, p1 })
    }

    /// Builds the pair from foreground probabilities, with `p0 = 1 - p1`.
    pub fn from_foreground(p1: ScalarField) -> Result<Self> {
        let (w, h) = p1.dims();
        let p0 = ScalarField::from_vec(w, h, p1.values().iter().map(|&p| 1.0 - p).collect())?;
        Self::new(p0, p1)
    }

    pub fn p0(&self) -> &ScalarField {
        &self.p0
    }

    pub fn p1(&self) -> &ScalarField {
        &self.p1
    }

    pub fn dims(&self) -> (usize, usize) {
        self.p1.dims()
    }
}

/// `(w0_bce, w1_bce)` with `w_c = N_other / N`.
pub fn class_balance_weights(gt: &BinaryMask) -> Result<(f64, f64)> {
    let n = gt.len();
    let fg = gt.count_ones();
    if fg == 0 || fg == n {
        return Err(Error::DegenerateClassBalance);
    }
    let n = n as f64;
    Ok((fg as f64 / n, (n - fg as f64) / n))
}

/// Foreground weight of a boundary pixel.
///
/// With `d1_max = 0` the distance term is 0. The distance term is clamped at
/// `-1` so the weight never drops below `w1_bce`.
#[inline]
pub fn foreground_weight(w1_bce: f64, w0: f64, d1: f64, d2: f64, d1_max: f64) -> f64 {
    let ratio = if d1_max == 0.0 {
        0.0
    } else {
        (2.0 * d1_max - d1 - d2) / (2.0 * d1_max)
    };
    w1_bce + w0 * (ratio + 1.0).max(0.0)
}

/// Background weight of an object pixel.
#[inline]
pub fn background_weight(w0_bce: f64, w0: f64, d_nsp: f64, d0_nsp: f64) -> f64 {
    w0_bce + w0 * skeleton_ratio(d_nsp, d0_nsp)
}

/// Builds both weight maps for a ground-truth boundary mask.
///
/// `w1s` is evaluated on the dilated mask `m_d = dilate(gt, d_iter)`, with
/// distances measured to the objects that remain after dilation. `w0s` is
/// evaluated on the original objects.
pub fn build_weight_maps(gt: &BinaryMask, w0: f64, d_iter: usize) -> Result<WeightMaps> {
    if !(w0.is_finite() && w0 > 0.0) {
        return Err(Error::InvalidParameter(format!("w0 must be positive, got {w0}")));
    }
    let (w, h) = gt.dims();
    let (w0_bce, w1_bce) = class_balance_weights(gt)?;

    let objects = connected_components(gt, Target::Background, Connectivity::Four);
    if objects.num_labels() < 2 {
        return Err(Error::NeedTwoObjects(objects.num_labels() as usize));
    }
    let dilation_mask = dilate(gt, d_iter);
    let w1s = foreground_weights(&dilation_mask, w1_bce, w0)?;
    let w0s = background_weights(&objects, w0_bce, w0)?;
    debug_assert_eq!(w1s.dims(), (w, h));

    Ok(WeightMaps {
        w1s,
        w0s,
        dilation_mask,
        params: WeightParams { w0, d_iter },
        class_weights: (w0_bce, w1_bce),
    })
}

fn foreground_weights(frame: &BinaryMask, w1_bce: f64, w0: f64) -> Result<ScalarField> {
    let objects = connected_components(frame, Target::Background, Connectivity::Four);
    let (d1, d2) = two_nearest_object_distances(&objects)?;
    let d1_max = frame.iter_ones().map(|i| d1.values()[i]).fold(0.0, f64::max);
    let mut out = ScalarField::zeros(frame.width(), frame.height())?;
    let values = out.values_mut();
    for i in frame.iter_ones() {
        values[i] = foreground_weight(w1_bce, w0, d1.values()[i], d2.values()[i], d1_max);
    }
    Ok(out)
}

fn background_weights(objects: &LabelMap, w0_bce: f64, w0: f64) -> Result<ScalarField> {
    let skeletons = per_object_skeletons(objects);
    let (d_nsp, d0_nsp) = normalized_distances(objects, &skeletons)?;
    let (w, h) = objects.dims();
    let mut out = ScalarField::zeros(w, h)?;
    let values = out.values_mut();
    for (i, &label) in objects.labels().iter().enumerate() {
        if label != 0 {
            values[i] = background_weight(w0_bce, w0, d_nsp.values()[i], d0_nsp.values()[i]);
        }
    }
    Ok(out)
}

/// Classical per-object normalisation `d_nsp / max(d_nsp over the object)`,
/// for comparison with the skeleton ratio.
pub fn max_normalized_ratio(objects: &LabelMap, d_nsp: &ScalarField) -> Result<ScalarField> {
    let (w, h) = objects.dims();
    let mut max = vec![0.0f64; objects.num_labels() as usize + 1];
    for (&l, &d) in objects.labels().iter().zip(d_nsp.values()) {
        max[l as usize] = max[l as usize].max(d);
    }
    ScalarField::from_fn(w, h, |x, y| {
        let l = objects.get(x, y) as usize;
        if l == 0 || max[l] == 0.0 {
            0.0
        } else {
            d_nsp.get(x, y) / max[l]
        }
    })
}

fn ensure_dims(probs: &ProbabilityPair, wm: &WeightMaps) -> Result<()> {
    if probs.dims() != wm.dims() {
        return Err(Error::DimensionMismatch {
            expected: wm.dims(),
            found: probs.dims(),
        });
    }
    Ok(())
}

/// Sum over pixels of `-w1s·ln p1` on the foreground branch and `-w0s·ln p0`
/// elsewhere.
pub fn skeaw_loss(probs: &ProbabilityPair, wm: &WeightMaps) -> Result<f64> {
    ensure_dims(probs, wm)?;
    let (p0, p1) = (probs.p0.values(), probs.p1.values());
    let (w0s, w1s) = (wm.w0s.values(), wm.w1s.values());
    let mut total = 0.0;
    for i in 0..p1.len() {
        total += if wm.selects_foreground(i) {
            -w1s[i] * p1[i].max(LOG_FLOOR).ln()
        } else {
            -w0s[i] * p0[i].max(LOG_FLOOR).ln()
        };
    }
    Ok(total)
}

/// [`skeaw_loss`] divided by the pixel count.
pub fn skeaw_loss_mean(probs: &ProbabilityPair, wm: &WeightMaps) -> Result<f64> {
    Ok(skeaw_loss(probs, wm)? / probs.p1.values().len() as f64)
}

/// Partial derivatives of [`skeaw_loss`] with respect to `p0` and `p1`,
/// treating the two channels as independent inputs. Zero where the log floor
/// is active.
pub fn skeaw_gradient(probs: &ProbabilityPair, wm: &WeightMaps) -> Result<(ScalarField, ScalarField)> {
    ensure_dims(probs, wm)?;
    let (w, h) = wm.dims();
    let mut g0 = ScalarField::zeros(w, h)?;
    let mut g1 = ScalarField::zeros(w, h)?;
    let (p0, p1) = (probs.p0.values(), probs.p1.values());
    for i in 0..p1.len() {
        if wm.selects_foreground(i) {
            if p1[i] > LOG_FLOOR {
                g1.values_mut()[i] = -wm.w1s.values()[i] / p1[i];
            }
        } else if p0[i] > LOG_FLOOR {
            g0.values_mut()[i] = -wm.w0s.values()[i] / p0[i];
        }
    }
    Ok((g0, g1))
}
