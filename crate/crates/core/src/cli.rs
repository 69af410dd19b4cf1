//! Command-line front end used by the `skea-topo` binary.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data errors.
//! Diagnostics go to stderr; JSON goes to stdout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bort::{partition, total_loss, BortParams};
use crate::error::{Error, Result};
use crate::io::{
    encode_mask_png, read_file, read_mask, read_probabilities, round_sig, write_file, write_fras, write_labels, write_mask,
};
use crate::metrics::{evaluate, MetricReport};
use crate::oracle::{compare_with_detector, FAR_FROM_BOUNDARY};
use crate::raster::{connected_components, BinaryMask, Connectivity, Target};
use crate::skeaw::{build_weight_maps, skeaw_loss_mean};
use crate::synth::{generate_case, Manifest, SynthSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "skea-topo", version, about = "Skeleton-aware topology losses and metrics for boundary masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Precompute weight maps: writes PREFIX.w1s, PREFIX.w0s and PREFIX.md
    Weights {
        gt: PathBuf,
        out_prefix: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        w0: f64,
        #[arg(long = "d-iter", default_value_t = 2)]
        d_iter: usize,
    },
    /// Split prediction errors into critical and non-critical masks
    Critical {
        gt: PathBuf,
        pred: PathBuf,
        out_prefix: PathBuf,
    },
    /// Print the loss terms for a probability raster
    Loss {
        gt: PathBuf,
        prob: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long = "alpha-tfn", default_value_t = 1.0)]
        alpha_tfn: f64,
        #[arg(long = "alpha-tfp", default_value_t = 1.0)]
        alpha_tfp: f64,
        #[arg(long = "no-ff")]
        no_ff: bool,
        #[arg(long = "no-tt")]
        no_tt: bool,
        #[arg(long, default_value_t = 10.0)]
        w0: f64,
        #[arg(long = "d-iter", default_value_t = 2)]
        d_iter: usize,
    },
    /// Evaluate a prediction mask, or the mean over two directories of masks
    Eval { gt: PathBuf, pred: PathBuf },
    /// Compare the skeleton detector with the brute-force oracle
    Oracle {
        gt: PathBuf,
        pred: PathBuf,
        #[arg(long = "max-pixels", default_value_t = 1 << 20)]
        max_pixels: usize,
    },
    /// Generate a synthetic image, prediction and manifest from a JSON spec
    Gen { spec: PathBuf, out_dir: PathBuf },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::InvalidParameter(_) => EXIT_USAGE,
                _ => EXIT_DATA,
            }
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn rounded(report: &MetricReport) -> MetricReport {
    MetricReport {
        vi_split: round_sig(report.vi_split),
        vi_merge: round_sig(report.vi_merge),
        vi: round_sig(report.vi),
        ari: round_sig(report.ari),
        map: round_sig(report.map),
        betti_error: round_sig(report.betti_error),
        dice: round_sig(report.dice),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Weights {
            gt,
            out_prefix,
            w0,
            d_iter,
        } => {
            let gt = read_mask(gt)?;
            let wm = build_weight_maps(&gt, w0, d_iter)?;
            write_fras(with_suffix(&out_prefix, ".w1s"), &[&wm.w1s])?;
            write_fras(with_suffix(&out_prefix, ".w0s"), &[&wm.w0s])?;
            write_file(with_suffix(&out_prefix, ".md"), &encode_mask_png(&wm.dilation_mask)?)?;
            Ok(())
        }
        Command::Critical { gt, pred, out_prefix } => {
            let (gt, pred) = (read_mask(gt)?, read_mask(pred)?);
            let part = partition(&gt, &pred)?;
            let named = [
                ("tfp", &part.tfp),
                ("tfn", &part.tfn),
                ("ffp", &part.ffp),
                ("ffn", &part.ffn),
            ];
            let mut counts = serde_json::Map::new();
            let mut components = serde_json::Map::new();
            for (name, mask) in named {
                write_mask(with_suffix(&out_prefix, &format!(".{name}.png")), mask)?;
                counts.insert(name.into(), json!(mask.count_ones()));
                components.insert(name.into(), json!(component_areas(mask)));
            }
            let summary = json!({ "counts": counts, "components": components });
            write_file(with_suffix(&out_prefix, ".json"), &serde_json::to_vec_pretty(&summary)?)?;
            print_json(out, &summary)
        }
        Command::Loss {
            gt,
            prob,
            lambda,
            threshold,
            alpha_tfn,
            alpha_tfp,
            no_ff,
            no_tt,
            w0,
            d_iter,
        } => {
            let params = BortParams {
                alpha_tfp,
                alpha_tfn,
                include_ff: !no_ff,
                include_tt: !no_tt,
                lambda,
                ..BortParams::default()
            };
            params.validate()?;
            if !threshold.is_finite() {
                return Err(Error::InvalidParameter(format!("threshold must be finite, got {threshold}")));
            }
            let gt = read_mask(gt)?;
            let probs = read_probabilities(prob)?;
            let wm = build_weight_maps(&gt, w0, d_iter)?;
            let loss = total_loss(&probs, &wm, &gt, threshold, &params)?;
            let summary = json!({
                "skeaw": round_sig(loss.skeaw),
                "bort": round_sig(loss.bort),
                "total": round_sig(loss.total),
                "skeaw_mean": round_sig(skeaw_loss_mean(&probs, &wm)?),
            });
            print_json(out, &summary)
        }
        Command::Eval { gt, pred } => {
            let report = if gt.is_dir() || pred.is_dir() {
                let reports = batch_reports(&gt, &pred)?;
                MetricReport::mean(&reports).ok_or_else(|| Error::Format(format!("no PNG files in {}", gt.display())))?
            } else {
                evaluate(&read_mask(gt)?, &read_mask(pred)?)?
            };
            print_json(out, &rounded(&report))
        }
        Command::Oracle { gt, pred, max_pixels } => {
            let (gt, pred) = (read_mask(gt)?, read_mask(pred)?);
            if gt.len() > max_pixels {
                return Err(Error::InvalidParameter(format!(
                    "image has {} pixels, more than --max-pixels {max_pixels}",
                    gt.len()
                )));
            }
            let report = compare_with_detector(&gt, &pred)?;
            let disagreements: Vec<Value> = report
                .components
                .iter()
                .filter(|c| !c.agrees())
                .map(|c| {
                    json!({
                        "class": c.class,
                        "x": c.anchor.0,
                        "y": c.anchor.1,
                        "area": c.area,
                        "oracle": c.oracle,
                        "detector": c.detector,
                        "boundary_distance": round_sig(c.boundary_distance),
                        "allowed": c.is_allowed_disagreement(FAR_FROM_BOUNDARY),
                    })
                })
                .collect();
            let summary = json!({
                "components": report.total(),
                "agreed": report.agreed(),
                "agreement": round_sig(report.agreement_rate()),
                "disallowed": report.disallowed().count(),
                "disagreements": disagreements,
            });
            print_json(out, &summary)
        }
        Command::Gen { spec, out_dir } => {
            let spec: SynthSpec = serde_json::from_slice(&read_file(spec)?)?;
            let case = generate_case(&spec)?;
            fs::create_dir_all(&out_dir)?;
            write_mask(out_dir.join("gt.png"), &case.gt)?;
            write_labels(out_dir.join("objects.png"), &case.objects)?;
            write_mask(out_dir.join("pred.png"), &case.pred)?;
            let manifest = Manifest {
                objects: case.objects.num_labels(),
                spec,
                injected: case.injected,
            };
            write_file(out_dir.join("manifest.json"), &serde_json::to_vec_pretty(&manifest)?)?;
            Ok(())
        }
    }
}

fn component_areas(mask: &BinaryMask) -> Vec<usize> {
    let labels = connected_components(mask, Target::Foreground, Connectivity::Eight);
    labels.areas().into_iter().skip(1).collect()
}

fn png_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
        .collect();
    files.sort();
    Ok(files)
}

fn batch_reports(gt_dir: &Path, pred_dir: &Path) -> Result<Vec<MetricReport>> {
    if !(gt_dir.is_dir() && pred_dir.is_dir()) {
        return Err(Error::Format("batch evaluation needs two directories".into()));
    }
    png_files(gt_dir)?
        .into_iter()
        .map(|gt_path| {
            let name = gt_path.file_name().expect("listed files have names");
            let pred_path = pred_dir.join(name);
            if !pred_path.is_file() {
                return Err(Error::Format(format!("no prediction for {}", name.to_string_lossy())));
            }
            evaluate(&read_mask(&gt_path)?, &read_mask(&pred_path)?)
        })
        .collect()
}
