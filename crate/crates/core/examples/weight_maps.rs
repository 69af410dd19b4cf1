//! Builds skeleton-aware weight maps for a small two-cell image and prints
//! them as text.
//!
//! ```text
//! cargo run --example weight_maps
//! ```

use skea_topo::raster::{BinaryMask, ScalarField};
use skea_topo::skeaw::{build_weight_maps, WeightParams};

fn print_field(name: &str, field: &ScalarField) {
    println!("{name}:");
    for y in 0..field.height() {
        let row: Vec<String> = (0..field.width()).map(|x| format!("{:5.1}", field.get(x, y))).collect();
        println!("  {}", row.join(""));
    }
}

fn main() -> skea_topo::Result<()> {
    let gt = BinaryMask::from_ascii(
        "\
######################
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
#.........#..........#
######################",
    )?;
    let params = WeightParams::default();
    let wm = build_weight_maps(&gt, params.w0, params.d_iter)?;
    let (w0_bce, w1_bce) = wm.class_weights;
    println!("w0 = {}, d_iter = {}, w0_bce = {w0_bce:.3}, w1_bce = {w1_bce:.3}", params.w0, params.d_iter);
    print_field("w1s (boundary, dilated)", &wm.w1s);
    print_field("w0s (objects)", &wm.w0s);

    println!("branch (1 = foreground term):");
    let branch = wm.foreground_branch();
    for y in 0..gt.height() {
        let row: String = (0..gt.width()).map(|x| if branch.get(x, y) { '1' } else { '0' }).collect();
        println!("  {row}");
    }
    Ok(())
}
