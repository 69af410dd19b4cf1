//! Raster containers and the connectivity / morphology primitives that every
//! other module builds on.
//!
//! Pixel convention: a set bit is a *boundary* (foreground, class 1) pixel and
//! a clear bit is an *object* (background, class 0) pixel. Objects are
//! 4-connected and boundaries are 8-connected; the two connectivities are
//! complementary so that a one-pixel-wide 8-connected wall always separates
//! the regions on either side of it. Pixels outside the image never belong to
//! any component.

mod components;
mod morphology;

pub use components::{components_touching, connected_components, count_components, Connectivity, Target};
pub use morphology::{dilate, mask_ops, MaskOp};

use bitvec::prelude::*;

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyRaster(width, height));
    }
    Ok(())
}

fn check_len(len: usize, width: usize, height: usize) -> Result<()> {
    check_dims(width, height)?;
    if len != width * height {
        return Err(Error::BufferLength { len, width, height });
    }
    Ok(())
}

/// Packed row-major binary raster.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: BitVec<u64, Lsb0>,
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.width, self.height)?;
        for y in 0..self.height.min(64) {
            let row: String = (0..self.width.min(128))
                .map(|x| if self.get(x, y) { '#' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl BinaryMask {
    /// All-background mask.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            bits: bitvec![u64, Lsb0; 0; width * height],
        })
    }

    pub fn filled(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        let mut bits = bitvec![u64, Lsb0; 1; width * height];
        bits.set_uninitialized(false);
        Ok(Self { width, height, bits })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut mask = Self::new(width, height)?;
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    mask.bits.set(y * width + x, true);
                }
            }
        }
        Ok(mask)
    }

    pub fn from_bools(width: usize, height: usize, values: &[bool]) -> Result<Self> {
        check_len(values.len(), width, height)?;
        Ok(Self {
            width,
            height,
            bits: values.iter().copied().collect(),
        })
    }

    /// Parses rows of `#`/`1` (set) and `.`/`0` (clear); whitespace is ignored.
    /// Handy for small fixtures.
    pub fn from_ascii(art: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = art
            .lines()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c == '#' || c == '1')
                    .collect()
            })
            .collect();
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Format("ragged ascii mask".into()));
        }
        let flat: Vec<bool> = rows.into_iter().flatten().collect();
        Self::from_bools(width, height, &flat)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Number of pixels.
    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn get_index(&self, idx: usize) -> bool {
        self.bits[idx]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits.set(y * self.width + x, value);
    }

    #[inline]
    pub fn set_index(&mut self, idx: usize, value: bool) {
        self.bits.set(idx, value);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn any(&self) -> bool {
        self.bits.any()
    }

    /// Row-major indices of the set pixels.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.bits.iter().by_vals().collect()
    }

    pub fn not(&self) -> Self {
        let mut bits = !self.bits.clone();
        // raw-word helpers rely on the unused tail bits staying clear
        bits.set_uninitialized(false);
        Self {
            width: self.width,
            height: self.height,
            bits,
        }
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        mask_ops(self, other, MaskOp::And)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        mask_ops(self, other, MaskOp::Or)
    }

    pub fn and_not(&self, other: &Self) -> Result<Self> {
        mask_ops(self, other, MaskOp::AndNot)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        mask_ops(self, other, MaskOp::Xor)
    }

    /// True when every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self
                .bits
                .as_raw_slice()
                .iter()
                .zip(other.bits.as_raw_slice())
                .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self
                .bits
                .as_raw_slice()
                .iter()
                .zip(other.bits.as_raw_slice())
                .any(|(a, b)| a & b != 0)
    }

    pub(crate) fn ensure_same_dims(&self, other: (usize, usize)) -> Result<()> {
        if self.dims() != other {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: other,
            });
        }
        Ok(())
    }

    pub(crate) fn raw(&self) -> &[u64] {
        self.bits.as_raw_slice()
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u64] {
        self.bits.as_raw_mut_slice()
    }
}

/// Row-major object labels. `0` marks boundary (or otherwise non-target)
/// pixels, `1..=num_labels` identify connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    num_labels: u32,
}

impl LabelMap {
    /// Wraps a raw label buffer. Labels must be dense: every value in
    /// `1..=max` has to occur.
    pub fn from_raw(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        check_len(labels.len(), width, height)?;
        let max = labels.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; max as usize + 1];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if let Some(missing) = seen.iter().skip(1).position(|s| !s) {
            return Err(Error::Format(format!("label {} is missing; labels must be dense", missing + 1)));
        }
        Ok(Self {
            width,
            height,
            labels,
            num_labels: max,
        })
    }

    pub(crate) fn from_dense(width: usize, height: usize, labels: Vec<u32>, num_labels: u32) -> Self {
        debug_assert_eq!(labels.len(), width * height);
        Self {
            width,
            height,
            labels,
            num_labels,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    #[inline]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Largest label, which is also the number of components.
    #[inline]
    pub fn num_labels(&self) -> u32 {
        self.num_labels
    }

    /// Mask of all pixels carrying a label ≥ 1.
    pub fn labeled_mask(&self) -> BinaryMask {
        let mut mask = BinaryMask::new(self.width, self.height).expect("valid dims");
        for (i, &l) in self.labels.iter().enumerate() {
            if l != 0 {
                mask.set_index(i, true);
            }
        }
        mask
    }

    /// Pixel count per label, indexed by label (entry 0 counts unlabeled pixels).
    pub fn areas(&self) -> Vec<usize> {
        let mut areas = vec![0usize; self.num_labels as usize + 1];
        for &l in &self.labels {
            areas[l as usize] += 1;
        }
        areas
    }

    /// Inclusive bounding boxes `(x0, y0, x1, y1)` per label, indexed by `label - 1`.
    pub fn bounding_boxes(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut boxes = vec![(usize::MAX, usize::MAX, 0, 0); self.num_labels as usize];
        for y in 0..self.height {
            for x in 0..self.width {
                let l = self.labels[y * self.width + x];
                if l != 0 {
                    let b = &mut boxes[l as usize - 1];
                    b.0 = b.0.min(x);
                    b.1 = b.1.min(y);
                    b.2 = b.2.max(x);
                    b.3 = b.3.max(y);
                }
            }
        }
        boxes
    }
}

/// Row-major raster of finite reals.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            values: vec![0.0; width * height],
        })
    }

    pub fn from_vec(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_len(values.len(), width, height)?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite value {} at ({}, {})",
                values[i],
                i % width,
                i / width
            )));
        }
        Ok(Self { width, height, values })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::from_vec(width, height, values)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.values[y * self.width + x] = value;
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}
