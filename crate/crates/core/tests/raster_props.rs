mod common;

use common::*;
use proptest::prelude::*;
use skea_topo::geometry::{edt, skeletonize, squared_edt};
use skea_topo::io::{decode_fras, decode_mask_png, encode_fras, encode_mask_png};
use skea_topo::raster::{connected_components, dilate, BinaryMask, Connectivity, ScalarField, Target};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn components_match_flood_fill(mask in any_mask(16, 16)) {
        for (target, conn, value, eight) in [
            (Target::Foreground, Connectivity::Eight, true, true),
            (Target::Foreground, Connectivity::Four, true, false),
            (Target::Background, Connectivity::Four, false, false),
            (Target::Background, Connectivity::Eight, false, true),
        ] {
            let labels = connected_components(&mask, target, conn);
            let (reference, count) = flood_fill(&mask, value, eight);
            prop_assert_eq!(labels.num_labels(), count);
            prop_assert!(same_partition(labels.labels(), &reference));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dilation_grows_and_composes(mask in any_mask(20, 20), a in 0usize..3, b in 0usize..3) {
        let once = dilate(&mask, a);
        prop_assert!(mask.is_subset_of(&once));
        prop_assert_eq!(dilate(&once, b), dilate(&mask, a + b));
    }

    #[test]
    fn dilation_by_one_is_the_3x3_max(mask in any_mask(20, 20)) {
        let (w, h) = mask.dims();
        let grown = dilate(&mask, 1);
        for y in 0..h {
            for x in 0..w {
                let expected = (y.saturating_sub(1)..=(y + 1).min(h - 1))
                    .any(|yy| (x.saturating_sub(1)..=(x + 1).min(w - 1)).any(|xx| mask.get(xx, yy)));
                prop_assert_eq!(grown.get(x, y), expected);
            }
        }
    }

    #[test]
    fn edt_matches_brute_force(mask in any_mask(20, 20)) {
        prop_assume!(mask.any());
        let fast = edt(&mask).unwrap();
        let slow = brute_edt(&mask);
        for (i, (&a, &b)) in fast.values().iter().zip(&slow).enumerate() {
            prop_assert_eq!(a, b, "pixel {}", i);
        }
        let sq = squared_edt(&mask).unwrap();
        for (i, &d) in sq.iter().enumerate() {
            prop_assert_eq!(d == 0, mask.get_index(i));
        }
    }

    #[test]
    fn skeleton_is_a_homotopic_subset(mask in any_smoothed_mask(8, 40)) {
        let skel = skeletonize(&mask);
        prop_assert!(skel.is_subset_of(&mask));
        prop_assert_eq!(betti0(&skel), betti0(&mask));
        prop_assert_eq!(skeletonize(&skel), skel);
    }

    #[test]
    fn mask_png_round_trips(mask in any_mask(24, 24)) {
        let bytes = encode_mask_png(&mask).unwrap();
        prop_assert_eq!(decode_mask_png(&bytes).unwrap(), mask);
    }

    #[test]
    fn fras_round_trips(w in 1usize..12, h in 1usize..12, seed in any::<u64>()) {
        let mut rng = skea_topo::synth::Rng::new(seed);
        let a = ScalarField::from_fn(w, h, |_, _| (rng.unit() * 100.0) as f32 as f64).unwrap();
        let b = ScalarField::from_fn(w, h, |x, y| (x * y) as f64).unwrap();
        let bytes = encode_fras(&[&a, &b]).unwrap();
        let back = decode_fras(&bytes).unwrap();
        prop_assert_eq!(&back, &vec![a, b]);
        prop_assert_eq!(encode_fras(&[&back[0], &back[1]]).unwrap(), bytes);
    }
}

#[test]
fn edt_needs_a_feature() {
    let empty = BinaryMask::new(4, 4).unwrap();
    assert!(edt(&empty).is_err());
}

#[test]
fn eight_thin_rings_are_already_skeletons() {
    // square ring with its corners cut, so no pixel is simple
    let ring = BinaryMask::from_fn(12, 12, |x, y| {
        (x == 2 || x == 9) && (3..=8).contains(&y) || (y == 2 || y == 9) && (3..=8).contains(&x)
    })
    .unwrap();
    assert_eq!(skeletonize(&ring), ring);
}
