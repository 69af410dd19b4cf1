//! Evaluates the combined loss on a noisy probability map and shows how the
//! rectified term reacts to the BoRT options.
//!
//! ```text
//! cargo run --example total_loss
//! ```

use skea_topo::bort::{total_loss, BortParams};
use skea_topo::raster::ScalarField;
use skea_topo::skeaw::{build_weight_maps, skeaw_gradient, ProbabilityPair, WeightParams};
use skea_topo::synth::{generate_case, ErrorRequest, ErrorType, Kind, Rng, SynthSpec};

fn main() -> skea_topo::Result<()> {
    let spec = SynthSpec {
        width: 96,
        height: 96,
        seed: 7,
        kind: Kind::Lattice,
        n_sites: 9,
        boundary_thickness: 3,
        errors: vec![
            ErrorRequest { kind: ErrorType::Fracture, count: 1 },
            ErrorRequest { kind: ErrorType::Thin, count: 1 },
        ],
    };
    let case = generate_case(&spec)?;

    // soft version of the corrupted prediction
    let mut rng = Rng::new(11);
    let p1 = ScalarField::from_fn(spec.width, spec.height, |x, y| {
        let base = if case.pred.get(x, y) { 0.8 } else { 0.2 };
        (base + 0.3 * (rng.unit() - 0.5)).clamp(0.01, 0.99)
    })?;
    let probs = ProbabilityPair::from_foreground(p1)?;

    let defaults = WeightParams::default();
    let wm = build_weight_maps(&case.gt, defaults.w0, defaults.d_iter)?;
    for (name, params) in [
        ("default", BortParams::default()),
        ("no tt/ff terms", BortParams { include_ff: false, include_tt: false, ..BortParams::default() }),
        ("road variant", BortParams::mass_road(2.0)),
        ("lambda = 0", BortParams { lambda: 0.0, ..BortParams::default() }),
    ] {
        let loss = total_loss(&probs, &wm, &case.gt, 0.5, &params)?;
        println!("{name:>15}: skeaw {:.3}  bort {:.3}  total {:.3}", loss.skeaw, loss.bort, loss.total);
    }

    let (g0, g1) = skeaw_gradient(&probs, &wm)?;
    let norm = |f: &ScalarField| f.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    println!("gradient norms: |dL/dp0| {:.3}  |dL/dp1| {:.3}", norm(&g0), norm(&g1));
    Ok(())
}
