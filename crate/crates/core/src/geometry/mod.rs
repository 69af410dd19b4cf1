//! Distance transforms and skeletons: the geometric machinery behind the
//! skeleton-aware weights and the critical-pixel detector.

mod distances;
mod edt;
mod thinning;

pub use distances::{skeleton_normalized_distances, skeleton_ratio, two_nearest_object_distances};
pub use edt::{edt, squared_edt};
pub use thinning::skeletonize;

pub(crate) use distances::normalized_distances;

use crate::raster::{BinaryMask, LabelMap};
use thinning::ThinGrid;

/// Foreground skeleton, background skeleton and the per-object skeletons
/// the background skeleton is assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonSet {
    pub foreground_skeleton: BinaryMask,
    pub background_skeleton: BinaryMask,
    /// Skeleton pixels carry the label of their object, everything else is 0.
    pub per_object_skeletons: LabelMap,
}

/// Skeletonizes every object of `objects` on its own; their union is the
/// background skeleton. The foreground skeleton is the skeleton of the
/// unlabeled (boundary) pixels.
pub fn object_skeletons(objects: &LabelMap) -> SkeletonSet {
    let per_object_skeletons = per_object_skeletons(objects);
    let background_skeleton = per_object_skeletons.labeled_mask();
    let foreground = objects.labeled_mask().not();
    SkeletonSet {
        foreground_skeleton: skeletonize(&foreground),
        background_skeleton,
        per_object_skeletons,
    }
}

/// Per-object skeletons only (skips the foreground skeleton).
pub(crate) fn per_object_skeletons(objects: &LabelMap) -> LabelMap {
    let (w, h) = objects.dims();
    let mut labels = vec![0u32; w * h];
    for (i, bbox) in objects.bounding_boxes().into_iter().enumerate() {
        let label = i as u32 + 1;
        let mut grid = ThinGrid::window(w, h, bbox, |x, y| objects.get(x, y) == label);
        grid.thin();
        grid.for_each_fg((bbox.0, bbox.1), |x, y| labels[y * w + x] = label);
    }
    LabelMap::from_dense(w, h, labels, objects.num_labels())
}

/// Background skeleton of a mask: the union of the skeletons of its
/// 4-connected objects.
pub fn background_skeleton(mask: &BinaryMask) -> BinaryMask {
    use crate::raster::{connected_components, Connectivity, Target};
    let objects = connected_components(mask, Target::Background, Connectivity::Four);
    per_object_skeletons(&objects).labeled_mask()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{connected_components, count_components, Connectivity, Target};

    #[test]
    fn single_rectangle_object() {
        let gt = BinaryMask::from_fn(12, 9, |x, y| x == 0 || y == 0 || x == 11 || y == 8).unwrap();
        let objects = connected_components(&gt, Target::Background, Connectivity::Four);
        let set = object_skeletons(&objects);
        assert_eq!(set.background_skeleton, skeletonize(&gt.not()));
        assert!(set.background_skeleton.is_subset_of(&gt.not()));
        assert!(set.foreground_skeleton.is_subset_of(&gt));
    }

    #[test]
    fn two_objects_keep_their_labels() {
        let gt = BinaryMask::from_fn(15, 8, |x, _| x == 7).unwrap();
        let objects = connected_components(&gt, Target::Background, Connectivity::Four);
        let set = object_skeletons(&objects);
        assert_eq!(
            count_components(&set.background_skeleton, Target::Foreground, Connectivity::Eight),
            2
        );
        for y in 0..8 {
            for x in 0..15 {
                let l = set.per_object_skeletons.get(x, y);
                if l != 0 {
                    assert_eq!(l, objects.get(x, y));
                }
            }
        }
    }

    #[test]
    fn one_pixel_object_is_its_own_skeleton() {
        let gt = BinaryMask::from_fn(5, 5, |x, y| (x, y) != (2, 2) && (1..4).contains(&x) && (1..4).contains(&y)).unwrap();
        let objects = connected_components(&gt, Target::Background, Connectivity::Four);
        let set = object_skeletons(&objects);
        let centre = objects.get(2, 2);
        assert_eq!(set.per_object_skeletons.get(2, 2), centre);
        assert_eq!(set.per_object_skeletons.areas()[centre as usize], 1);
    }

    #[test]
    fn diagonally_touching_objects_are_thinned_separately() {
        // 8-adjacent objects across a thin diagonal wall must not interact
        let gt = BinaryMask::from_fn(10, 10, |x, y| x + y == 9).unwrap();
        let objects = connected_components(&gt, Target::Background, Connectivity::Four);
        assert_eq!(objects.num_labels(), 2);
        let set = object_skeletons(&objects);
        let areas = set.per_object_skeletons.areas();
        assert!(areas[1] > 0 && areas[2] > 0);
    }
}
