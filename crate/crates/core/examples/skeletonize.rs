//! Thins a shape to its skeleton, checks that the component counts survive,
//! and shows the distance transform that drives the weights.
//!
//! ```text
//! cargo run --example skeletonize
//! ```

use skea_topo::geometry::{edt, skeletonize};
use skea_topo::raster::{count_components, BinaryMask, Connectivity, Target};

fn betti0(mask: &BinaryMask) -> (usize, usize) {
    (
        count_components(mask, Target::Foreground, Connectivity::Eight),
        count_components(mask, Target::Background, Connectivity::Four),
    )
}

fn main() -> skea_topo::Result<()> {
    // a ring with a thick arm
    let shape = BinaryMask::from_fn(24, 16, |x, y| {
        let (dx, dy) = (x as f64 - 9.5, y as f64 - 7.5);
        let r = (dx * dx + dy * dy).sqrt();
        (3.0..7.0).contains(&r) || ((16..23).contains(&x) && (5..11).contains(&y))
    })?;
    let skel = skeletonize(&shape);
    println!("shape (#) and skeleton (o):");
    for y in 0..shape.height() {
        let row: String = (0..shape.width())
            .map(|x| match (shape.get(x, y), skel.get(x, y)) {
                (_, true) => 'o',
                (true, false) => '#',
                _ => '.',
            })
            .collect();
        println!("  {row}");
    }
    println!("components (fg, bg): shape {:?}, skeleton {:?}", betti0(&shape), betti0(&skel));

    let dist = edt(&shape.not())?;
    println!("distance to the background, row 8:");
    let row: Vec<String> = (0..shape.width()).map(|x| format!("{:.1}", dist.get(x, 8))).collect();
    println!("  {}", row.join(" "));
    Ok(())
}
