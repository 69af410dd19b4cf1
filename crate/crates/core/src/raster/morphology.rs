use super::BinaryMask;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskOp {
    And,
    Or,
    AndNot,
    Xor,
}

/// Pixel-wise boolean combination of two equally sized masks.
pub fn mask_ops(a: &BinaryMask, b: &BinaryMask, op: MaskOp) -> Result<BinaryMask> {
    a.ensure_same_dims(b.dims())?;
    let mut out = a.clone();
    for (o, &r) in out.raw_mut().iter_mut().zip(b.raw()) {
        *o = match op {
            MaskOp::And => *o & r,
            MaskOp::Or => *o | r,
            MaskOp::AndNot => *o & !r,
            MaskOp::Xor => *o ^ r,
        };
    }
    Ok(out)
}

/// Dilation by a 3×3 square, applied `iterations` times.
///
/// `k` iterations of the 3×3 square equal one dilation by the
/// `(2k+1)×(2k+1)` square, which is separable into a horizontal and a
/// vertical running-window max. Pixels outside the image are absent.
pub fn dilate(mask: &BinaryMask, iterations: usize) -> BinaryMask {
    if iterations == 0 {
        return mask.clone();
    }
    let (w, h) = mask.dims();
    let r = iterations;

    // horizontal pass over prefix counts
    let mut horiz = vec![false; w * h];
    let mut prefix = vec![0u32; w.max(h) + 1];
    for y in 0..h {
        for x in 0..w {
            prefix[x + 1] = prefix[x] + mask.get_index(y * w + x) as u32;
        }
        for x in 0..w {
            let lo = x.saturating_sub(r);
            let hi = (x + r + 1).min(w);
            horiz[y * w + x] = prefix[hi] > prefix[lo];
        }
    }

    let mut out = BinaryMask::new(w, h).expect("dims already validated");
    for x in 0..w {
        for y in 0..h {
            prefix[y + 1] = prefix[y] + horiz[y * w + x] as u32;
        }
        for y in 0..h {
            let lo = y.saturating_sub(r);
            let hi = (y + r + 1).min(h);
            if prefix[hi] > prefix[lo] {
                out.set_index(y * w + x, true);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_dilate_once(m: &BinaryMask) -> BinaryMask {
        let (w, h) = m.dims();
        BinaryMask::from_fn(w, h, |x, y| {
            (-1i64..=1).any(|dy| {
                (-1i64..=1).any(|dx| {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h && m.get(nx as usize, ny as usize)
                })
            })
        })
        .unwrap()
    }

    #[test]
    fn zero_iterations_is_identity() {
        let m = BinaryMask::from_fn(7, 5, |x, y| (x * y) % 4 == 1).unwrap();
        assert_eq!(dilate(&m, 0), m);
    }

    #[test]
    fn center_pixel_grows_to_block() {
        let mut m = BinaryMask::new(5, 5).unwrap();
        m.set(2, 2, true);
        let d = dilate(&m, 1);
        let expected = BinaryMask::from_fn(5, 5, |x, y| (1..=3).contains(&x) && (1..=3).contains(&y)).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn corner_pixel_is_clamped() {
        let mut m = BinaryMask::new(4, 4).unwrap();
        m.set(0, 0, true);
        let d = dilate(&m, 1);
        assert_eq!(d, brute_dilate_once(&m));
        assert_eq!(d.count_ones(), 4);
        assert!(d.get(0, 0) && d.get(1, 0) && d.get(0, 1) && d.get(1, 1));
    }

    #[test]
    fn repeated_iterations_match_brute_force() {
        let m = BinaryMask::from_fn(17, 11, |x, y| (x * 7 + y * 13) % 29 == 0).unwrap();
        let mut expected = m.clone();
        for k in 1..=4 {
            expected = brute_dilate_once(&expected);
            assert_eq!(dilate(&m, k), expected, "iterations = {k}");
        }
    }

    #[test]
    fn boolean_identities() {
        let a = BinaryMask::from_fn(9, 9, |x, y| (x + 2 * y) % 3 == 0).unwrap();
        assert_eq!(mask_ops(&a, &a, MaskOp::And).unwrap(), a);
        assert!(!mask_ops(&a, &a, MaskOp::AndNot).unwrap().any());
        let checker = BinaryMask::from_fn(9, 9, |x, y| (x + y) % 2 == 0).unwrap();
        let all = mask_ops(&checker, &checker.not(), MaskOp::Xor).unwrap();
        assert_eq!(all.count_ones(), 81);
    }

    #[test]
    fn mismatched_dims_error() {
        let a = BinaryMask::new(3, 3).unwrap();
        let b = BinaryMask::new(3, 4).unwrap();
        assert!(mask_ops(&a, &b, MaskOp::Or).is_err());
    }
}
