//! Slow, obviously-correct reference implementations shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use skea_topo::raster::{BinaryMask, LabelMap, ScalarField};
use skea_topo::synth::Rng;

pub const N4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
pub const N8: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Breadth-first labelling of the pixels equal to `value`. Labels follow
/// the row-major order of each component's first pixel.
pub fn flood_fill(mask: &BinaryMask, value: bool, eight: bool) -> (Vec<u32>, u32) {
    let (w, h) = mask.dims();
    let steps: &[(i64, i64)] = if eight { &N8 } else { &N4 };
    let mut labels = vec![0u32; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if mask.get_index(start) != value || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in steps {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if mask.get_index(j) == value && labels[j] == 0 {
                    labels[j] = next;
                    queue.push_back(j);
                }
            }
        }
    }
    (labels, next)
}

/// Boundary components (8-connected) and object components (4-connected).
pub fn betti0(mask: &BinaryMask) -> (u32, u32) {
    (flood_fill(mask, true, true).1, flood_fill(mask, false, false).1)
}

/// Objects of a boundary mask, labelled by flood fill.
pub fn objects(mask: &BinaryMask) -> (Vec<u32>, u32) {
    flood_fill(mask, false, false)
}

/// Whether two label vectors describe the same partition up to renaming,
/// with 0 fixed.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    let mut fwd = HashMap::new();
    let mut bwd = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        if (x == 0) != (y == 0) {
            return false;
        }
        *fwd.entry(x).or_insert(y) == y && *bwd.entry(y).or_insert(x) == x
    })
}

fn sq(ax: usize, ay: usize, bx: usize, by: usize) -> f64 {
    let dx = ax as f64 - bx as f64;
    let dy = ay as f64 - by as f64;
    dx * dx + dy * dy
}

/// All-pairs Euclidean distance to the nearest set pixel.
pub fn brute_edt(mask: &BinaryMask) -> Vec<f64> {
    let (w, h) = mask.dims();
    let features: Vec<usize> = mask.iter_ones().collect();
    (0..w * h)
        .map(|i| {
            features
                .iter()
                .map(|&f| sq(i % w, i / w, f % w, f / w))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// Per boundary pixel, distances to the nearest and second-nearest distinct
/// object; 0 on object pixels.
pub fn brute_two_nearest(labels: &[u32], w: usize) -> (Vec<f64>, Vec<f64>) {
    let k = labels.iter().copied().max().unwrap_or(0) as usize;
    let mut d1 = vec![0.0; labels.len()];
    let mut d2 = vec![0.0; labels.len()];
    for i in 0..labels.len() {
        if labels[i] != 0 {
            continue;
        }
        let mut best = vec![f64::INFINITY; k + 1];
        for (j, &l) in labels.iter().enumerate() {
            if l != 0 {
                let d = sq(i % w, i / w, j % w, j / w);
                if d < best[l as usize] {
                    best[l as usize] = d;
                }
            }
        }
        let mut sorted: Vec<f64> = best[1..].to_vec();
        sorted.sort_by(f64::total_cmp);
        d1[i] = sorted[0].sqrt();
        d2[i] = sorted[1].sqrt();
    }
    (d1, d2)
}

/// First pixel in row-major order among the nearest members of `pool`.
fn nearest_in(pool: &[usize], x: usize, y: usize, w: usize) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for &j in pool {
        let d = sq(x, y, j % w, j / w);
        if d < best.0 {
            best = (d, j);
        }
    }
    best.1
}

/// `(d_nsp, d0_nsp)` per object pixel from explicit nearest-point searches.
pub fn brute_normalized(labels: &[u32], skeleton_labels: &[u32], w: usize) -> (Vec<f64>, Vec<f64>) {
    let boundary: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 0).collect();
    let mut d_nsp = vec![0.0; labels.len()];
    let mut d0_nsp = vec![0.0; labels.len()];
    for i in 0..labels.len() {
        let l = labels[i];
        if l == 0 {
            continue;
        }
        let (x, y) = (i % w, i / w);
        let b = nearest_in(&boundary, x, y, w);
        let own: Vec<usize> = (0..labels.len()).filter(|&j| skeleton_labels[j] == l).collect();
        let s = nearest_in(&own, x, y, w);
        d_nsp[i] = sq(x, y, b % w, b / w).sqrt();
        d0_nsp[i] = sq(b % w, b / w, s % w, s / w).sqrt();
    }
    (d_nsp, d0_nsp)
}

/// Straight-line skeleton-aware weights `(w1s, w0s)` from the brute-force
/// distances. Foreground weights live on `dilate(gt, d_iter)` with distances
/// to that mask's objects; background weights live on the objects of `gt`.
pub fn reference_weights(gt: &BinaryMask, dilated: &BinaryMask, skeleton_labels: &[u32], w0: f64) -> (Vec<f64>, Vec<f64>) {
    let (w, _) = gt.dims();
    let n = gt.len() as f64;
    let fg = gt.count_ones() as f64;
    let (w0_bce, w1_bce) = (fg / n, (n - fg) / n);

    let (frame_labels, _) = objects(dilated);
    let (d1, d2) = brute_two_nearest(&frame_labels, w);
    let d1_max = dilated.iter_ones().map(|i| d1[i]).fold(0.0, f64::max);
    let mut w1s = vec![0.0; gt.len()];
    for i in dilated.iter_ones() {
        let term = if d1_max == 0.0 {
            1.0
        } else {
            1.0 + (2.0 * d1_max - d1[i] - d2[i]) / (2.0 * d1_max)
        };
        w1s[i] = w1_bce + w0 * term.max(0.0);
    }

    let (labels, _) = objects(gt);
    let (d_nsp, d0_nsp) = brute_normalized(&labels, skeleton_labels, w);
    let mut w0s = vec![0.0; gt.len()];
    for i in 0..gt.len() {
        if labels[i] != 0 {
            let ratio = if d0_nsp[i] == 0.0 { 1.0 } else { d_nsp[i] / d0_nsp[i] };
            w0s[i] = w0_bce + w0 * ratio;
        }
    }
    (w1s, w0s)
}

/// Weighted cross-entropy written pixel by pixel.
pub fn reference_skeaw(p0: &[f64], p1: &[f64], w0s: &[f64], w1s: &[f64], dilated: &BinaryMask) -> f64 {
    let mut total = 0.0;
    for i in 0..p1.len() {
        let md = if dilated.get_index(i) { 1.0 } else { 0.0 };
        if w0s[i] < w1s[i] * md {
            total += -w1s[i] * p1[i].max(1e-12).ln();
        } else {
            total += -w0s[i] * p0[i].max(1e-12).ln();
        }
    }
    total
}

/// The rectified penalty from the raw confusion classes of each pixel.
#[allow(clippy::too_many_arguments)]
pub fn reference_rectified(
    p0: &[f64],
    p1: &[f64],
    gt: &BinaryMask,
    pred: &BinaryMask,
    tfp: &BinaryMask,
    tfn: &BinaryMask,
    alpha_tfp: f64,
    alpha_tfn: f64,
    ff: bool,
    tt: bool,
) -> f64 {
    let mut total = 0.0;
    for i in 0..p1.len() {
        let (g, p) = (gt.get_index(i), pred.get_index(i));
        total += match (g, p) {
            (true, true) if tt => p0[i],
            (false, false) if tt => p1[i],
            (true, false) if tfn.get_index(i) => alpha_tfn * p0[i],
            (true, false) if ff => p1[i],
            (false, true) if tfp.get_index(i) => alpha_tfp * p1[i],
            (false, true) if ff => p0[i],
            _ => 0.0,
        };
    }
    total
}

/// Variation of information `(H(b|a), H(a|b))` from a dense contingency
/// table over pixels that are labelled in both maps.
pub fn reference_vi(a: &[u32], b: &[u32]) -> (f64, f64) {
    let ka = a.iter().copied().max().unwrap_or(0) as usize + 1;
    let kb = b.iter().copied().max().unwrap_or(0) as usize + 1;
    let mut table = vec![vec![0f64; kb]; ka];
    let mut n = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            table[x as usize][y as usize] += 1.0;
            n += 1.0;
        }
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let entropy = |v: &[f64]| -> f64 { v.iter().filter(|&&c| c > 0.0).map(|&c| -(c / n) * (c / n).ln()).sum() };
    let joint: Vec<f64> = table.iter().flatten().copied().collect();
    let h_joint = entropy(&joint);
    (h_joint - entropy(&rows), h_joint - entropy(&cols))
}

pub fn label_map(labels: Vec<u32>, w: usize, h: usize) -> LabelMap {
    LabelMap::from_raw(w, h, labels).expect("valid labels")
}

/// Random mask smoothed by majority votes over 3×3 windows.
pub fn smoothed_mask(rng: &mut Rng, w: usize, h: usize, density: f64, rounds: usize) -> BinaryMask {
    let mut m = BinaryMask::from_fn(w, h, |_, _| rng.unit() < density).expect("nonempty dims");
    for _ in 0..rounds {
        let prev = m.clone();
        m = BinaryMask::from_fn(w, h, |x, y| {
            let mut votes = 0;
            let mut total = 0;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                        total += 1;
                        votes += prev.get(nx as usize, ny as usize) as usize;
                    }
                }
            }
            2 * votes > total
        })
        .expect("nonempty dims");
    }
    m
}

/// Probabilities in `[lo, 1 - lo]`.
pub fn random_probabilities(rng: &mut Rng, w: usize, h: usize, lo: f64) -> ScalarField {
    ScalarField::from_fn(w, h, |_, _| lo + (1.0 - 2.0 * lo) * rng.unit()).expect("finite values")
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Renumbers labels in order of first appearance so they are dense.
pub fn dense_labels(raw: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    raw.iter()
        .map(|&l| {
            if l == 0 {
                0
            } else {
                let next = map.len() as u32 + 1;
                *map.entry(l).or_insert(next)
            }
        })
        .collect()
}

/// Arbitrary masks up to `max_w × max_h`.
pub fn any_mask(max_w: usize, max_h: usize) -> impl proptest::strategy::Strategy<Value = BinaryMask> {
    use proptest::prelude::*;
    (1..=max_w, 1..=max_h).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h).prop_map(move |bits| BinaryMask::from_bools(w, h, &bits).expect("matching length"))
    })
}

/// Smoothed random masks, drawn from a seed.
pub fn any_smoothed_mask(min: usize, max: usize) -> impl proptest::strategy::Strategy<Value = BinaryMask> {
    use proptest::prelude::*;
    (any::<u64>(), min..=max, min..=max, 0.25f64..0.75, 1usize..=3)
        .prop_map(|(seed, w, h, density, rounds)| smoothed_mask(&mut skea_topo::synth::Rng::new(seed), w, h, density, rounds))
}
