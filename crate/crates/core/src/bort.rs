//! Boundary-rectified term: topological critical-pixel detection and the
//! rectified-likelihood penalty.
//!
//! An error component is *topologically critical* when it touches either
//!
//! * the background skeleton of the opposite mask (a merged or newly
//!   appeared object runs its skeleton through the error), or
//! * foreground-skeleton pixels of the reference mask that the opposite mask
//!   leaves uncovered (a broken or spurious wall).
//!
//! Criticality is decided per 8-connected error component.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{background_skeleton, skeletonize};
use crate::raster::{components_touching, BinaryMask, Connectivity, ScalarField};
use crate::skeaw::{skeaw_loss, ProbabilityPair, WeightMaps};

/// Penalty settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BortParams {
    pub alpha_tfp: f64,
    pub alpha_tfn: f64,
    /// Keep the `ffp`/`ffn` terms.
    pub include_ff: bool,
    /// Keep the `tp`/`tn` terms.
    pub include_tt: bool,
    /// Weight of the rectified term in [`total_loss`].
    pub lambda: f64,
    /// Training step at which a caller should switch the term on. Not read
    /// by any function in this crate.
    pub step_num: u32,
}

impl Default for BortParams {
    fn default() -> Self {
        Self {
            alpha_tfp: 1.0,
            alpha_tfn: 1.0,
            include_ff: true,
            include_tt: true,
            lambda: 1.0,
            step_num: 20,
        }
    }
}

impl BortParams {
    /// Road-network setting: extra weight on `tfn`, no `ff` terms.
    pub fn mass_road(alpha_tfn: f64) -> Self {
        Self {
            alpha_tfn,
            include_ff: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha_tfp", self.alpha_tfp), ("alpha_tfn", self.alpha_tfn)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Confusion masks and their split into critical and non-critical errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPartition {
    pub tp: BinaryMask,
    pub tn: BinaryMask,
    pub fp: BinaryMask,
    pub fn_: BinaryMask,
    pub tfp: BinaryMask,
    pub tfn: BinaryMask,
    pub ffp: BinaryMask,
    pub ffn: BinaryMask,
}

impl ErrorPartition {
    pub fn dims(&self) -> (usize, usize) {
        self.tp.dims()
    }
}

/// `(tp, tn, fp, fn)` on the boundary class.
pub fn confusion_masks(gt: &BinaryMask, pred: &BinaryMask) -> Result<(BinaryMask, BinaryMask, BinaryMask, BinaryMask)> {
    gt.ensure_same_dims(pred.dims())?;
    let tp = gt.and(pred)?;
    let tn = gt.or(pred)?.not();
    let fp = pred.and_not(gt)?;
    let fn_ = gt.and_not(pred)?;
    Ok((tp, tn, fp, fn_))
}

/// Components of `errors = reference ∧ ¬candidate` that are critical.
fn critical_components(reference: &BinaryMask, candidate: &BinaryMask, errors: &BinaryMask) -> Result<BinaryMask> {
    if !errors.any() {
        return Ok(errors.clone());
    }
    let merged_or_new = background_skeleton(candidate);
    let uncovered = skeletonize(reference).and_not(candidate)?;
    let markers = merged_or_new.or(&uncovered)?;
    components_touching(errors, &markers, Connectivity::Eight)
}

/// Topologically critical false negatives.
pub fn identify_tfn(gt: &BinaryMask, pred: &BinaryMask) -> Result<BinaryMask> {
    gt.ensure_same_dims(pred.dims())?;
    critical_components(gt, pred, &gt.and_not(pred)?)
}

/// Topologically critical false positives: [`identify_tfn`] with the roles
/// of `gt` and `pred` swapped.
pub fn identify_tfp(gt: &BinaryMask, pred: &BinaryMask) -> Result<BinaryMask> {
    identify_tfn(pred, gt)
}

/// Full eight-way error partition of a `(gt, pred)` pair.
pub fn partition(gt: &BinaryMask, pred: &BinaryMask) -> Result<ErrorPartition> {
    let (tp, tn, fp, fn_) = confusion_masks(gt, pred)?;
    let tfn = critical_components(gt, pred, &fn_)?;
    let tfp = critical_components(pred, gt, &fp)?;
    let ffn = fn_.and_not(&tfn)?;
    let ffp = fp.and_not(&tfp)?;
    Ok(ErrorPartition {
        tp,
        tn,
        fp,
        fn_,
        tfp,
        tfn,
        ffp,
        ffn,
    })
}

/// Thresholds foreground probabilities: set where `p1 >= threshold`.
pub fn binarize(probs: &ProbabilityPair, threshold: f64) -> BinaryMask {
    let (w, h) = probs.dims();
    let p1 = probs.p1();
    BinaryMask::from_fn(w, h, |x, y| p1.get(x, y) >= threshold).expect("dims already validated")
}

/// Rectified-likelihood map: the per-pixel penalty summed by
/// [`rectified_loss`].
pub fn rectified_map(probs: &ProbabilityPair, part: &ErrorPartition, params: &BortParams) -> Result<ScalarField> {
    params.validate()?;
    if probs.dims() != part.dims() {
        return Err(Error::DimensionMismatch {
            expected: part.dims(),
            found: probs.dims(),
        });
    }
    let (w, h) = part.dims();
    let (p0, p1) = (probs.p0().values(), probs.p1().values());
    let tt = if params.include_tt { 1.0 } else { 0.0 };
    let ff = if params.include_ff { 1.0 } else { 0.0 };
    let values = (0..w * h)
        .map(|i| {
            let on = |m: &BinaryMask| if m.get_index(i) { 1.0 } else { 0.0 };
            // gt background pixels are tn or fp; gt boundary pixels are tp or fn
            let fix0 = tt * on(&part.tn) * p1[i] + params.alpha_tfp * on(&part.tfp) * p1[i] + ff * on(&part.ffp) * p0[i];
            let fix1 = tt * on(&part.tp) * p0[i] + params.alpha_tfn * on(&part.tfn) * p0[i] + ff * on(&part.ffn) * p1[i];
            fix0 + fix1
        })
        .collect();
    ScalarField::from_vec(w, h, values)
}

/// Sum of the rectified-likelihood map.
pub fn rectified_loss(probs: &ProbabilityPair, part: &ErrorPartition, params: &BortParams) -> Result<f64> {
    Ok(rectified_map(probs, part, params)?.sum())
}

/// Components of the combined loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub skeaw: f64,
    pub bort: f64,
    pub total: f64,
}

/// `skeaw + lambda · bort`, with the prediction mask taken as
/// `p1 >= threshold`.
pub fn total_loss(
    probs: &ProbabilityPair,
    wm: &WeightMaps,
    gt: &BinaryMask,
    threshold: f64,
    params: &BortParams,
) -> Result<LossBreakdown> {
    params.validate()?;
    let skeaw = skeaw_loss(probs, wm)?;
    let pred = binarize(probs, threshold);
    let part = partition(gt, &pred)?;
    let bort = rectified_loss(probs, &part, params)?;
    Ok(LossBreakdown {
        skeaw,
        bort,
        total: skeaw + params.lambda * bort,
    })
}
