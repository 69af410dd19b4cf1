//! Exact Euclidean distance transform.
//!
//! Separable lower-envelope method: a column pass computes the vertical
//! distance to the nearest feature, then each row takes the lower envelope
//! of the parabolas `(x - q)^2 + g(q)^2`. Distances are carried as exact
//! integer squared distances.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, ScalarField};

/// Marker for "no feature anywhere".
pub(crate) const UNREACHABLE: u64 = u64::MAX;

const NO_FEATURE: u32 = u32::MAX;

/// Squared distance from every pixel of a `width × height` grid to the
/// nearest pixel for which `is_feature(index)` holds.
pub(crate) fn squared_distances(width: usize, height: usize, is_feature: impl Fn(usize) -> bool) -> Vec<u64> {
    // both vertical sweeps run row by row so memory is read sequentially
    let mut vertical = vec![NO_FEATURE; width * height];
    let mut last = vec![usize::MAX; width];
    for y in 0..height {
        let row = &mut vertical[y * width..(y + 1) * width];
        for (x, slot) in row.iter_mut().enumerate() {
            if is_feature(y * width + x) {
                last[x] = y;
            }
            if last[x] != usize::MAX {
                *slot = (y - last[x]) as u32;
            }
        }
    }
    last.fill(usize::MAX);
    for y in (0..height).rev() {
        let row = &mut vertical[y * width..(y + 1) * width];
        for (x, slot) in row.iter_mut().enumerate() {
            if is_feature(y * width + x) {
                last[x] = y;
            }
            if last[x] != usize::MAX {
                let d = (last[x] - y) as u32;
                if d < *slot {
                    *slot = d;
                }
            }
        }
    }

    let mut out = vec![UNREACHABLE; width * height];
    let mut sites: Vec<usize> = Vec::with_capacity(width);
    let mut bounds: Vec<f64> = Vec::with_capacity(width + 1);
    for y in 0..height {
        let row = &vertical[y * width..(y + 1) * width];
        let cost = |q: usize| -> f64 {
            let g = row[q] as f64;
            g * g + (q * q) as f64
        };
        sites.clear();
        bounds.clear();
        bounds.push(f64::NEG_INFINITY);
        for (q, &g) in row.iter().enumerate() {
            if g == NO_FEATURE {
                continue;
            }
            while let Some(&v) = sites.last() {
                let s = (cost(q) - cost(v)) / (2.0 * (q as f64 - v as f64));
                // the leading -inf bound is never popped
                if s <= *bounds.last().expect("bounds tracks sites") {
                    sites.pop();
                    bounds.pop();
                } else {
                    bounds.push(s);
                    break;
                }
            }
            sites.push(q);
        }
        if sites.is_empty() {
            continue;
        }
        // bounds[k] is where site k starts to dominate
        let mut k = 0;
        for x in 0..width {
            while k + 1 < sites.len() && bounds[k + 1] < x as f64 {
                k += 1;
            }
            let v = sites[k];
            let dx = x.abs_diff(v) as u64;
            let g = row[v] as u64;
            out[y * width + x] = dx * dx + g * g;
        }
    }
    out
}

#[inline]
fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Finds the feature pixel at exactly squared distance `sq` from `(x, y)`,
/// preferring the smallest row-major index among ties.
///
/// Scans only the lattice points on the circle of radius `sqrt(sq)`, so the
/// cost is `O(sqrt(sq))`.
pub(crate) fn nearest_feature(
    x: usize,
    y: usize,
    sq: u64,
    width: usize,
    height: usize,
    is_feature: impl Fn(usize) -> bool,
) -> Option<(usize, usize)> {
    let r = isqrt(sq) as i64;
    let (xi, yi) = (x as i64, y as i64);
    for dy in -r..=r {
        let ny = yi + dy;
        if ny < 0 || ny >= height as i64 {
            continue;
        }
        let rem = sq - (dy * dy) as u64;
        let dx = isqrt(rem);
        if dx * dx != rem {
            continue;
        }
        let dx = dx as i64;
        for nx in [xi - dx, xi + dx] {
            if nx >= 0 && nx < width as i64 && is_feature(ny as usize * width + nx as usize) {
                return Some((nx as usize, ny as usize));
            }
            if dx == 0 {
                break;
            }
        }
    }
    None
}

/// Squared Euclidean distance from each pixel to the nearest set pixel.
pub fn squared_edt(mask: &BinaryMask) -> Result<Vec<u64>> {
    if !mask.any() {
        return Err(Error::NoFeaturePixels);
    }
    Ok(squared_distances(mask.width(), mask.height(), |i| mask.get_index(i)))
}

/// Exact Euclidean distance from each pixel to the nearest set pixel; set
/// pixels map to `0`.
pub fn edt(mask: &BinaryMask) -> Result<ScalarField> {
    let sq = squared_edt(mask)?;
    ScalarField::from_vec(
        mask.width(),
        mask.height(),
        sq.into_iter().map(|d| (d as f64).sqrt()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(mask: &BinaryMask) -> Vec<u64> {
        let (w, h) = mask.dims();
        let ones: Vec<(i64, i64)> = mask.iter_ones().map(|i| ((i % w) as i64, (i / w) as i64)).collect();
        (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as i64, (i / w) as i64);
                ones.iter().map(|&(fx, fy)| ((fx - x).pow(2) + (fy - y).pow(2)) as u64).min().unwrap()
            })
            .collect()
    }

    #[test]
    fn adjacent_and_diagonal_neighbours() {
        let mut m = BinaryMask::new(3, 3).unwrap();
        m.set(1, 1, true);
        let d = edt(&m).unwrap();
        assert_eq!(d.get(1, 1), 0.0);
        assert_eq!(d.get(1, 0), 1.0);
        assert_eq!(d.get(0, 0), std::f64::consts::SQRT_2);
    }

    #[test]
    fn empty_mask_errors() {
        let m = BinaryMask::new(4, 4).unwrap();
        assert!(matches!(edt(&m), Err(Error::NoFeaturePixels)));
    }

    #[test]
    fn matches_brute_force_on_patterns() {
        for seed in 0..40u64 {
            let m = BinaryMask::from_fn(19, 13, |x, y| {
                let h = (x as u64 * 73 + y as u64 * 151 + seed * 977) % 101;
                h < 3 + seed % 5
            })
            .unwrap();
            if !m.any() {
                continue;
            }
            assert_eq!(squared_edt(&m).unwrap(), brute(&m), "seed {seed}");
        }
    }

    #[test]
    fn single_row_and_column() {
        let m = BinaryMask::from_ascii("....#....#.").unwrap();
        assert_eq!(squared_edt(&m).unwrap(), brute(&m));
        let m = BinaryMask::from_fn(1, 9, |_, y| y == 6).unwrap();
        assert_eq!(squared_edt(&m).unwrap(), brute(&m));
    }

    #[test]
    fn nearest_feature_prefers_row_major_minimum() {
        // features at (0,2) and (4,2) and (2,0) are all at distance 2 from (2,2)
        let m = BinaryMask::from_fn(5, 5, |x, y| (x, y) == (0, 2) || (x, y) == (4, 2) || (x, y) == (2, 0)).unwrap();
        let sq = squared_edt(&m).unwrap();
        let hit = nearest_feature(2, 2, sq[12], 5, 5, |i| m.get_index(i)).unwrap();
        assert_eq!(hit, (2, 0));
    }
}
