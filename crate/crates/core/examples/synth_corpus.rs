//! Generates a small synthetic corpus and writes each pair to disk in the
//! same layout as `skea-topo gen`.
//!
//! ```text
//! cargo run --example synth_corpus -- [out_dir] [pairs]
//! ```

use std::path::PathBuf;

use skea_topo::io::{write_file, write_labels, write_mask};
use skea_topo::synth::{corpus, Manifest};

fn main() -> skea_topo::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synth-corpus".into()));
    let pairs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(8);

    for (n, (spec, case)) in corpus(pairs, 1, false)?.into_iter().enumerate() {
        let dir = out.join(format!("{n:04}"));
        std::fs::create_dir_all(&dir)?;
        write_mask(dir.join("gt.png"), &case.gt)?;
        write_labels(dir.join("objects.png"), &case.objects)?;
        write_mask(dir.join("pred.png"), &case.pred)?;
        let summary: Vec<String> = case
            .injected
            .iter()
            .map(|e| format!("{}{}", e.kind.name(), if e.critical { "*" } else { "" }))
            .collect();
        println!(
            "{} {:?} {}x{} objects {} injected [{}]",
            dir.display(),
            spec.kind,
            spec.width,
            spec.height,
            case.objects.num_labels(),
            summary.join(" ")
        );
        let manifest = Manifest {
            objects: case.objects.num_labels(),
            spec,
            injected: case.injected,
        };
        write_file(dir.join("manifest.json"), &serde_json::to_vec_pretty(&manifest)?)?;
    }
    Ok(())
}
