//! Splits the errors of a prediction into topologically critical and
//! harmless pixels, and checks each component with the brute-force oracle.
//!
//! ```text
//! cargo run --example critical_pixels
//! ```

use skea_topo::bort::partition;
use skea_topo::oracle::compare_with_detector;
use skea_topo::raster::BinaryMask;

fn show(name: &str, mask: &BinaryMask) {
    println!("{name} ({} px):", mask.count_ones());
    for y in 0..mask.height() {
        let row: String = (0..mask.width()).map(|x| if mask.get(x, y) { '#' } else { '.' }).collect();
        println!("  {row}");
    }
}

fn main() -> skea_topo::Result<()> {
    let gt = BinaryMask::from_ascii(
        "\
################
#......#.......#
#......#.......#
#......#.......#
#......#.......#
#......#.......#
#......#.......#
################",
    )?;
    // a gap in the middle wall merges the two cells, a thicker wall segment
    // on the right changes nothing, and a stray wall splits the left cell
    let pred = BinaryMask::from_ascii(
        "\
################
#......#.......#
#......#.......#
#......#.......#
########.......#
#.............##
#.............##
################",
    )?;
    show("gt", &gt);
    show("pred", &pred);

    let part = partition(&gt, &pred)?;
    show("tfn (critical misses)", &part.tfn);
    show("ffn (harmless misses)", &part.ffn);
    show("tfp (critical extras)", &part.tfp);
    show("ffp (harmless extras)", &part.ffp);

    let report = compare_with_detector(&gt, &pred)?;
    for c in &report.components {
        println!(
            "{:?} component at {:?}, {} px: detector {}, oracle {}",
            c.class, c.anchor, c.area, c.detector, c.oracle
        );
    }
    Ok(())
}
