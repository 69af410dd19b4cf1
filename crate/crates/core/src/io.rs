//! File formats.
//!
//! * Masks: 8-bit grayscale PNG, any nonzero value reads as boundary, written
//!   as 0 / 255.
//! * Label maps: 16-bit grayscale PNG.
//! * Float rasters: `FRAS` files. The magic bytes `FRAS` are followed by
//!   little-endian `u32` width, height and channel count, then `f32` values
//!   row-major with channels interleaved.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageFormat, Luma};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, LabelMap, ScalarField};
use crate::skeaw::ProbabilityPair;

const MAGIC: &[u8; 4] = b"FRAS";

/// Reads a whole file, naming it in the error.
pub fn read_file(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    let path = path.as_ref();
    fs::read(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a whole file, naming it in the error.
pub fn write_file(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, bytes).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

fn mask_image(mask: &BinaryMask) -> ImageBuffer<Luma<u8>, Vec<u8>> {
    let (w, h) = mask.dims();
    let pixels = (0..w * h).map(|i| if mask.get_index(i) { 255 } else { 0 }).collect();
    ImageBuffer::from_raw(w as u32, h as u32, pixels).expect("buffer matches dims")
}

/// PNG bytes of a mask.
pub fn encode_mask_png(mask: &BinaryMask) -> Result<Vec<u8>> {
    let mut out = Cursor::new(Vec::new());
    mask_image(mask).write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

pub fn write_mask(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<()> {
    write_file(path, &encode_mask_png(mask)?)?;
    Ok(())
}

/// Decodes a mask from PNG bytes; nonzero pixels are boundary.
pub fn decode_mask_png(bytes: &[u8]) -> Result<BinaryMask> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let bits: Vec<bool> = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw().into_iter().map(|v| v != 0).collect(),
        other => other.into_luma16().into_raw().into_iter().map(|v| v != 0).collect(),
    };
    BinaryMask::from_bools(w, h, &bits)
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    decode_mask_png(&read_file(path)?)
}

pub fn write_labels(path: impl AsRef<Path>, labels: &LabelMap) -> Result<()> {
    if labels.num_labels() > u16::MAX as u32 {
        return Err(Error::Format(format!(
            "{} labels do not fit a 16-bit PNG",
            labels.num_labels()
        )));
    }
    let (w, h) = labels.dims();
    let pixels: Vec<u16> = labels.labels().iter().map(|&l| l as u16).collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_raw(w as u32, h as u32, pixels).expect("buffer matches dims");
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)?;
    write_file(path, &out.into_inner())?;
    Ok(())
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<LabelMap> {
    let img = image::load_from_memory_with_format(&read_file(path)?, ImageFormat::Png)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let raw = img.into_luma16().into_raw();
    LabelMap::from_raw(w, h, raw.into_iter().map(u32::from).collect())
}

/// Serializes equally sized fields as one multi-channel raster.
pub fn encode_fras(channels: &[&ScalarField]) -> Result<Vec<u8>> {
    let first = channels
        .first()
        .ok_or_else(|| Error::Format("a float raster needs at least one channel".into()))?;
    let (w, h) = first.dims();
    for c in channels {
        if c.dims() != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (w, h),
                found: c.dims(),
            });
        }
    }
    let mut out = Vec::with_capacity(16 + 4 * w * h * channels.len());
    out.extend_from_slice(MAGIC);
    for v in [w, h, channels.len()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for i in 0..w * h {
        for c in channels {
            out.extend_from_slice(&(c.values()[i] as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn write_fras(path: impl AsRef<Path>, channels: &[&ScalarField]) -> Result<()> {
    write_file(path, &encode_fras(channels)?)?;
    Ok(())
}

/// Parses a float raster into one field per channel.
pub fn decode_fras(bytes: &[u8]) -> Result<Vec<ScalarField>> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(Error::Format("missing FRAS header".into()));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[4 + 4 * k..8 + 4 * k].try_into().expect("4 bytes")) as usize;
    let (w, h, c) = (word(0), word(1), word(2));
    if c == 0 {
        return Err(Error::Format("float raster has zero channels".into()));
    }
    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(c))
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Format("float raster dimensions overflow".into()))?;
    if bytes.len() - 16 != expected {
        return Err(Error::Format(format!(
            "float raster payload is {} bytes, expected {expected} for {w}x{h}x{c}",
            bytes.len() - 16
        )));
    }
    let values: Vec<f64> = bytes[16..]
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")) as f64)
        .collect();
    (0..c)
        .map(|k| {
            let channel = values.iter().skip(k).step_by(c).copied().collect();
            ScalarField::from_vec(w, h, channel).map_err(|e| match e {
                Error::InvalidParameter(m) => Error::Format(m),
                other => other,
            })
        })
        .collect()
}

pub fn read_fras(path: impl AsRef<Path>) -> Result<Vec<ScalarField>> {
    decode_fras(&read_file(path)?)
}

/// Reads probabilities: one channel is `p1`, two channels are `(p0, p1)`.
pub fn read_probabilities(path: impl AsRef<Path>) -> Result<ProbabilityPair> {
    let mut channels = read_fras(path)?;
    match channels.len() {
        1 => ProbabilityPair::from_foreground(channels.pop().expect("one channel")),
        2 => {
            let p1 = channels.pop().expect("two channels");
            let p0 = channels.pop().expect("two channels");
            ProbabilityPair::new(p0, p1)
        }
        n => Err(Error::Format(format!("probability raster must have 1 or 2 channels, got {n}"))),
    }
}

pub fn write_probabilities(path: impl AsRef<Path>, probs: &ProbabilityPair) -> Result<()> {
    write_fras(path, &[probs.p0(), probs.p1()])
}

/// Rounds to 9 significant digits for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}
