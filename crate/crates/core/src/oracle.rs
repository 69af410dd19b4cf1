//! Brute-force topological criticality by flipping error regions and
//! recounting objects.
//!
//! Every check relabels the whole image, so cost is
//! `O(components × pixels)`. Meant for validation, not training loops.

use serde::{Deserialize, Serialize};

use crate::bort::partition;
use crate::error::{Error, Result};
use crate::geometry::squared_edt;
use crate::raster::{connected_components, BinaryMask, Connectivity, LabelMap, Target};

/// `pred` with the pixels of `region` inverted.
pub fn flip(pred: &BinaryMask, region: &BinaryMask) -> Result<BinaryMask> {
    pred.xor(region)
}

fn objects(mask: &BinaryMask) -> LabelMap {
    connected_components(mask, Target::Background, Connectivity::Four)
}

/// True when the object partitions differ: a different count, or some
/// object pixel present in both versions changes which objects it shares a
/// component with.
fn structure_changed(before: &LabelMap, after: &LabelMap) -> bool {
    if before.num_labels() != after.num_labels() {
        return true;
    }
    let n = before.num_labels() as usize + 1;
    let mut forward = vec![0u32; n];
    let mut backward = vec![0u32; n];
    for (&a, &b) in before.labels().iter().zip(after.labels()) {
        if a == 0 || b == 0 {
            continue;
        }
        let (fa, bb) = (&mut forward[a as usize], &mut backward[b as usize]);
        if (*fa != 0 && *fa != b) || (*bb != 0 && *bb != a) {
            return true;
        }
        *fa = b;
        *bb = a;
    }
    // an object with no surviving pixel vanished, even if another appeared
    forward[1..].contains(&0) || backward[1..].contains(&0)
}

/// Whether flipping `region` in `pred` changes the object structure.
///
/// An empty region is never critical. All region pixels must share one
/// class in `pred`.
pub fn is_region_critical(pred: &BinaryMask, region: &BinaryMask) -> Result<bool> {
    pred.ensure_same_dims(region.dims())?;
    let set = region.and(pred)?.count_ones();
    let total = region.count_ones();
    if total == 0 {
        return Ok(false);
    }
    if set != 0 && set != total {
        return Err(Error::RegionNotSingleClass);
    }
    Ok(structure_changed(&objects(pred), &objects(&flip(pred, region)?)))
}

/// Oracle verdicts `(tfn, tfp)`: every 8-connected component of `fn` and
/// `fp` flipped on its own toward the ground-truth class.
pub fn enumerate_critical_components(gt: &BinaryMask, pred: &BinaryMask) -> Result<(BinaryMask, BinaryMask)> {
    gt.ensure_same_dims(pred.dims())?;
    let before = objects(pred);
    let mut out = Vec::with_capacity(2);
    for errors in [gt.and_not(pred)?, pred.and_not(gt)?] {
        let mut critical = BinaryMask::new(gt.width(), gt.height())?;
        for region in component_masks(&errors)? {
            if structure_changed(&before, &objects(&flip(pred, &region)?)) {
                critical = critical.or(&region)?;
            }
        }
        out.push(critical);
    }
    let tfp = out.pop().expect("two entries");
    let tfn = out.pop().expect("two entries");
    Ok((tfn, tfp))
}

fn component_masks(errors: &BinaryMask) -> Result<Vec<BinaryMask>> {
    let labels = connected_components(errors, Target::Foreground, Connectivity::Eight);
    let (w, h) = errors.dims();
    let mut masks = vec![BinaryMask::new(w, h)?; labels.num_labels() as usize];
    for (i, &l) in labels.labels().iter().enumerate() {
        if l != 0 {
            masks[l as usize - 1].set_index(i, true);
        }
    }
    Ok(masks)
}

/// Which confusion class an error component belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorClass {
    Fn,
    Fp,
}

/// Detector and oracle verdicts for one error component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub class: ErrorClass,
    /// First pixel in row-major order, as `(x, y)`.
    pub anchor: (usize, usize),
    pub area: usize,
    pub oracle: bool,
    pub detector: bool,
    /// Distance from the component to the nearest correctly predicted
    /// boundary pixel; infinite when there is none.
    pub boundary_distance: f64,
}

impl ComponentVerdict {
    pub fn agrees(&self) -> bool {
        self.oracle == self.detector
    }

    /// A detector-only flag on a component far from every boundary.
    pub fn is_allowed_disagreement(&self, min_distance: f64) -> bool {
        self.detector && !self.oracle && self.boundary_distance > min_distance
    }
}

/// Per-component comparison of the detector against the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub components: Vec<ComponentVerdict>,
}

/// Components farther than this from the boundary may be flagged by the
/// detector alone.
pub const FAR_FROM_BOUNDARY: f64 = 3.0;

impl AgreementReport {
    pub fn total(&self) -> usize {
        self.components.len()
    }

    pub fn agreed(&self) -> usize {
        self.components.iter().filter(|c| c.agrees()).count()
    }

    /// Fraction of agreeing components; 1 when there are none.
    pub fn agreement_rate(&self) -> f64 {
        if self.components.is_empty() {
            1.0
        } else {
            self.agreed() as f64 / self.total() as f64
        }
    }

    /// Disagreements outside the far-from-boundary allowance.
    pub fn disallowed(&self) -> impl Iterator<Item = &ComponentVerdict> {
        self.components
            .iter()
            .filter(|c| !c.agrees() && !c.is_allowed_disagreement(FAR_FROM_BOUNDARY))
    }

    pub fn merge(&mut self, other: AgreementReport) {
        self.components.extend(other.components);
    }
}

/// Runs the skeleton detector and the oracle on one pair.
pub fn compare_with_detector(gt: &BinaryMask, pred: &BinaryMask) -> Result<AgreementReport> {
    let part = partition(gt, pred)?;
    let before = objects(pred);
    let (w, _) = gt.dims();
    let to_boundary = if part.tp.any() { Some(squared_edt(&part.tp)?) } else { None };
    let mut components = Vec::new();
    for (class, errors, detected) in [
        (ErrorClass::Fn, &part.fn_, &part.tfn),
        (ErrorClass::Fp, &part.fp, &part.tfp),
    ] {
        for region in component_masks(errors)? {
            let first = region.iter_ones().next().expect("components are nonempty");
            let boundary_distance = match &to_boundary {
                Some(d) => (region.iter_ones().map(|i| d[i]).min().expect("nonempty") as f64).sqrt(),
                None => f64::INFINITY,
            };
            components.push(ComponentVerdict {
                class,
                anchor: (first % w, first / w),
                area: region.count_ones(),
                oracle: structure_changed(&before, &objects(&flip(pred, &region)?)),
                detector: region.intersects(detected),
                boundary_distance,
            });
        }
    }
    Ok(AgreementReport { components })
}
