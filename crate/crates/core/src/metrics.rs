//! Segmentation metrics on object partitions.
//!
//! [`evaluate`] post-processes both masks (dilate, skeletonize, dilate),
//! labels the 4-connected objects, and compares the resulting partitions.
//! VI and ARI only count pixels that are object pixels in both maps.
//! Entropies are in nats.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::skeletonize;
use crate::raster::{connected_components, dilate, BinaryMask, Connectivity, LabelMap, Target};

/// Metric values for one image or the mean over several.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub vi_split: f64,
    pub vi_merge: f64,
    pub vi: f64,
    pub ari: f64,
    pub map: f64,
    pub betti_error: f64,
    pub dice: f64,
}

impl MetricReport {
    /// Unweighted mean; `None` for an empty slice.
    pub fn mean(reports: &[MetricReport]) -> Option<MetricReport> {
        if reports.is_empty() {
            return None;
        }
        let n = reports.len() as f64;
        let avg = |f: fn(&MetricReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        Some(MetricReport {
            vi_split: avg(|r| r.vi_split),
            vi_merge: avg(|r| r.vi_merge),
            vi: avg(|r| r.vi),
            ari: avg(|r| r.ari),
            map: avg(|r| r.map),
            betti_error: avg(|r| r.betti_error),
            dice: avg(|r| r.dice),
        })
    }
}

/// Dilate by one, skeletonize, dilate by one.
pub fn postprocess(mask: &BinaryMask) -> BinaryMask {
    dilate(&skeletonize(&dilate(mask, 1)), 1)
}

/// 4-connected objects of a boundary mask.
pub fn object_labels(mask: &BinaryMask) -> LabelMap {
    connected_components(mask, Target::Background, Connectivity::Four)
}

fn ensure_same(a: &LabelMap, b: &LabelMap) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            found: b.dims(),
        });
    }
    Ok(())
}

struct Contingency {
    n: u64,
    joint: HashMap<(u32, u32), u64>,
    rows: HashMap<u32, u64>,
    cols: HashMap<u32, u64>,
}

fn contingency(a: &LabelMap, b: &LabelMap) -> Result<Contingency> {
    ensure_same(a, b)?;
    let mut t = Contingency {
        n: 0,
        joint: HashMap::new(),
        rows: HashMap::new(),
        cols: HashMap::new(),
    };
    for (&la, &lb) in a.labels().iter().zip(b.labels()) {
        if la == 0 || lb == 0 {
            continue;
        }
        t.n += 1;
        *t.joint.entry((la, lb)).or_default() += 1;
        *t.rows.entry(la).or_default() += 1;
        *t.cols.entry(lb).or_default() += 1;
    }
    if t.n == 0 {
        return Err(Error::NoSharedBackground);
    }
    Ok(t)
}

/// Variation of information `(split, merge, total)` with
/// `split = H(b | a)` and `merge = H(a | b)`.
pub fn vi(a: &LabelMap, b: &LabelMap) -> Result<(f64, f64, f64)> {
    let t = contingency(a, b)?;
    let n = t.n as f64;
    let mut split = 0.0;
    let mut merge = 0.0;
    for (&(la, lb), &c) in &t.joint {
        let c = c as f64;
        split -= c / n * (c / t.rows[&la] as f64).ln();
        merge -= c / n * (c / t.cols[&lb] as f64).ln();
    }
    // guard against -0.0 from exact cancellations
    let (split, merge) = (split.max(0.0), merge.max(0.0));
    Ok((split, merge, split + merge))
}

fn pairs(c: u64) -> f64 {
    (c as f64) * (c as f64 - 1.0) / 2.0
}

/// Adjusted Rand index; 1 when the chance-corrected denominator vanishes.
pub fn ari(a: &LabelMap, b: &LabelMap) -> Result<f64> {
    let t = contingency(a, b)?;
    let index: f64 = t.joint.values().map(|&c| pairs(c)).sum();
    let sum_a: f64 = t.rows.values().map(|&c| pairs(c)).sum();
    let sum_b: f64 = t.cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(t.n);
    let expected = if total == 0.0 { 0.0 } else { sum_a * sum_b / total };
    let max = (sum_a + sum_b) / 2.0;
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// `|#objects(gt) - #objects(pred)|`.
pub fn betti_error(gt: &LabelMap, pred: &LabelMap) -> Result<usize> {
    ensure_same(gt, pred)?;
    Ok(gt.num_labels().abs_diff(pred.num_labels()) as usize)
}

/// Dice overlap of the boundary class; 1 when both masks are empty.
pub fn dice(gt: &BinaryMask, pred: &BinaryMask) -> Result<f64> {
    let inter = gt.and(pred)?.count_ones();
    let sum = gt.count_ones() + pred.count_ones();
    if sum == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * inter as f64 / sum as f64)
}

/// IoU thresholds used by [`map_instances`].
pub fn map_thresholds() -> impl Iterator<Item = f64> {
    (0..10).map(|k| 0.5 + 0.05 * k as f64)
}

/// Mean over IoU thresholds of `TP / (TP + FP + FN)`, with instances
/// matched greedily by descending IoU. 1 when neither map has objects.
pub fn map_instances(gt: &LabelMap, pred: &LabelMap) -> Result<f64> {
    ensure_same(gt, pred)?;
    let (ng, np) = (gt.num_labels() as usize, pred.num_labels() as usize);
    if ng + np == 0 {
        return Ok(1.0);
    }
    let (area_g, area_p) = (gt.areas(), pred.areas());
    let mut inter: HashMap<(u32, u32), usize> = HashMap::new();
    for (&g, &p) in gt.labels().iter().zip(pred.labels()) {
        if g != 0 && p != 0 {
            *inter.entry((g, p)).or_default() += 1;
        }
    }
    let mut candidates: Vec<(f64, u32, u32)> = inter
        .into_iter()
        .map(|((g, p), i)| {
            let union = area_g[g as usize] + area_p[p as usize] - i;
            (i as f64 / union as f64, g, p)
        })
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut ap_sum = 0.0;
    let mut count = 0;
    for t in map_thresholds() {
        let mut used_g = vec![false; ng + 1];
        let mut used_p = vec![false; np + 1];
        let mut tp = 0usize;
        for &(iou, g, p) in &candidates {
            if iou < t {
                break;
            }
            if !used_g[g as usize] && !used_p[p as usize] {
                used_g[g as usize] = true;
                used_p[p as usize] = true;
                tp += 1;
            }
        }
        let (fp, fn_) = (np - tp, ng - tp);
        ap_sum += tp as f64 / (tp + fp + fn_) as f64;
        count += 1;
    }
    Ok(ap_sum / count as f64)
}

/// Full report for one boundary-mask pair after post-processing both.
pub fn evaluate(gt: &BinaryMask, pred: &BinaryMask) -> Result<MetricReport> {
    gt.ensure_same_dims(pred.dims())?;
    let (gt, pred) = (postprocess(gt), postprocess(pred));
    let (ga, pa) = (object_labels(&gt), object_labels(&pred));
    let (vi_split, vi_merge, vi_total) = vi(&ga, &pa)?;
    Ok(MetricReport {
        vi_split,
        vi_merge,
        vi: vi_total,
        ari: ari(&ga, &pa)?,
        map: map_instances(&ga, &pa)?,
        betti_error: betti_error(&ga, &pa)? as f64,
        dice: dice(&gt, &pred)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::count_components;

    fn labels(w: usize, h: usize, f: impl Fn(usize, usize) -> u32) -> LabelMap {
        LabelMap::from_raw(w, h, (0..w * h).map(|i| f(i % w, i / w)).collect()).unwrap()
    }

    #[test]
    fn equal_split_costs_ln_two() {
        let a = labels(8, 4, |_, _| 1);
        let b = labels(8, 4, |x, _| if x < 4 { 1 } else { 2 });
        let (split, merge, total) = vi(&a, &b).unwrap();
        assert!((total - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((split - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(merge, 0.0);
        let (s2, m2, _) = vi(&b, &a).unwrap();
        assert_eq!((s2, m2), (merge, split));
    }

    #[test]
    fn identity_values() {
        let a = labels(6, 6, |x, y| if x == 3 { 0 } else if x < 3 { 1 } else { 1 + (y / 3) as u32 + 1 });
        assert_eq!(vi(&a, &a).unwrap().2, 0.0);
        assert_eq!(ari(&a, &a).unwrap(), 1.0);
        assert_eq!(map_instances(&a, &a).unwrap(), 1.0);
        assert_eq!(betti_error(&a, &a).unwrap(), 0);
    }

    #[test]
    fn ari_hand_case() {
        // a = [1,1,1,1,1,2,2,2,2,2], b = [1,1,1,2,2,2,2,2,3,3]
        let a_vals = [1, 1, 1, 1, 1, 2, 2, 2, 2, 2];
        let b_vals = [1, 1, 1, 2, 2, 2, 2, 2, 3, 3];
        let a = LabelMap::from_raw(10, 1, a_vals.to_vec()).unwrap();
        let b = LabelMap::from_raw(10, 1, b_vals.to_vec()).unwrap();
        // cells: (1,1)=3 (1,2)=2 (2,2)=3 (2,3)=2 -> index = 3+1+3+1 = 8
        // rows 5,5 -> 20; cols 3,5,2 -> 3+10+1 = 14; total 45
        let expected = 20.0 * 14.0 / 45.0;
        let want = (8.0 - expected) / (17.0 - expected);
        assert!((ari(&a, &b).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn no_shared_background_errors() {
        let a = labels(4, 1, |x, _| if x < 2 { 1 } else { 0 });
        let b = labels(4, 1, |x, _| if x < 2 { 0 } else { 1 });
        assert!(matches!(vi(&a, &b), Err(Error::NoSharedBackground)));
    }

    #[test]
    fn map_missing_object_is_half() {
        let gt = labels(9, 4, |x, _| if x < 4 { 1 } else if x == 4 { 0 } else { 2 });
        let pred = labels(9, 4, |x, _| if x < 4 { 1 } else { 0 });
        assert!((map_instances(&gt, &pred).unwrap() - 0.5).abs() < 1e-12);
        let none = labels(9, 4, |_, _| 0);
        assert_eq!(map_instances(&gt, &none).unwrap(), 0.0);
    }

    #[test]
    fn dice_cases() {
        let a = BinaryMask::from_fn(5, 5, |x, _| x == 1).unwrap();
        let b = BinaryMask::from_fn(5, 5, |x, _| x == 3).unwrap();
        assert_eq!(dice(&a, &a).unwrap(), 1.0);
        assert_eq!(dice(&a, &b).unwrap(), 0.0);
        let e = BinaryMask::new(5, 5).unwrap();
        assert_eq!(dice(&e, &e).unwrap(), 1.0);
    }

    #[test]
    fn postprocess_absorbs_small_holes() {
        let mut m = BinaryMask::from_fn(20, 20, |x, y| x == 0 || y == 0 || x == 19 || y == 19 || (8..13).contains(&x)).unwrap();
        m.set(10, 10, false);
        assert_eq!(count_components(&m, Target::Background, Connectivity::Four), 3);
        let p = postprocess(&m);
        assert_eq!(count_components(&p, Target::Background, Connectivity::Four), 2);
        let e = BinaryMask::new(6, 6).unwrap();
        assert!(!postprocess(&e).any());
    }

    #[test]
    fn evaluate_identity() {
        let m = BinaryMask::from_fn(30, 20, |x, y| x == 0 || y == 0 || x == 29 || y == 19 || x == 14 || y == 9).unwrap();
        let r = evaluate(&m, &m).unwrap();
        assert_eq!((r.vi, r.ari, r.dice, r.betti_error, r.map), (0.0, 1.0, 1.0, 0.0, 1.0));
    }
}
