//! Seeded generator for reticular test images and controlled prediction
//! errors.
//!
//! Randomness comes from SplitMix64 seeded with the raw 64-bit seed.
//! Integers in `[0, n)` are drawn as `(u128::from(x) * n) >> 64` and reals
//! in `[0, 1)` as `(x >> 11) · 2⁻⁵³`, so a corpus can be reproduced from the
//! same seeds in any language.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::skeletonize;
use crate::oracle::is_region_critical;
use crate::raster::{connected_components, count_components, dilate, BinaryMask, Connectivity, LabelMap, Target};

/// Seeded SplitMix64 stream with fixed integer and float mappings.
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[0, n)`; `n` must be nonzero.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Voronoi,
    Lattice,
    Roads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorType {
    Closure,
    Disappearance,
    Fracture,
    Appearance,
    Thin,
    Thicken,
}

impl ErrorType {
    pub const ALL: [ErrorType; 6] = [
        ErrorType::Closure,
        ErrorType::Disappearance,
        ErrorType::Fracture,
        ErrorType::Appearance,
        ErrorType::Thin,
        ErrorType::Thicken,
    ];

    /// Whether the error is meant to change the object structure.
    pub fn is_critical(self) -> bool {
        !matches!(self, ErrorType::Thin | ErrorType::Thicken)
    }

    /// Whether the error adds boundary pixels (a false positive).
    pub fn adds_boundary(self) -> bool {
        matches!(self, ErrorType::Closure | ErrorType::Disappearance | ErrorType::Thicken)
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorType::Closure => "closure",
            ErrorType::Disappearance => "disappearance",
            ErrorType::Fracture => "fracture",
            ErrorType::Appearance => "appearance",
            ErrorType::Thin => "thin",
            ErrorType::Thicken => "thicken",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRequest {
    #[serde(rename = "type")]
    pub kind: ErrorType,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub kind: Kind,
    pub n_sites: usize,
    pub boundary_thickness: usize,
    #[serde(default)]
    pub errors: Vec<ErrorRequest>,
}

/// One injected error region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectedError {
    #[serde(rename = "type")]
    pub kind: ErrorType,
    pub critical: bool,
    pub pixels: usize,
    /// Inclusive `[x0, y0, x1, y1]`.
    pub bbox: [usize; 4],
    #[serde(skip)]
    pub region: Option<BinaryMask>,
}

fn validate(spec: &SynthSpec) -> Result<()> {
    if spec.width < 16 || spec.height < 16 {
        return Err(Error::Infeasible(format!(
            "dimensions must be at least 16x16, got {}x{}",
            spec.width, spec.height
        )));
    }
    if spec.n_sites < 2 {
        return Err(Error::Infeasible(format!("n_sites must be at least 2, got {}", spec.n_sites)));
    }
    if spec.n_sites > spec.width * spec.height {
        return Err(Error::Infeasible(format!(
            "{} sites exceed {} pixels",
            spec.n_sites,
            spec.width * spec.height
        )));
    }
    if spec.boundary_thickness == 0 {
        return Err(Error::Infeasible("boundary_thickness must be positive".into()));
    }
    Ok(())
}

/// Boundary mask and its objects.
pub fn generate(spec: &SynthSpec) -> Result<(BinaryMask, LabelMap)> {
    validate(spec)?;
    let mut rng = Rng::new(spec.seed);
    let gt = match spec.kind {
        Kind::Voronoi => voronoi(spec, &mut rng)?,
        Kind::Lattice => lattice(spec, &mut rng)?,
        Kind::Roads => roads(spec, &mut rng)?,
    };
    let objects = connected_components(&gt, Target::Background, Connectivity::Four);
    if objects.num_labels() == 0 {
        return Err(Error::Infeasible("boundary covers the whole image".into()));
    }
    Ok((gt, objects))
}

fn voronoi(spec: &SynthSpec, rng: &mut Rng) -> Result<BinaryMask> {
    let (w, h) = (spec.width, spec.height);
    let half = spec.boundary_thickness as f64 / 2.0;
    // rejection sampling keeps sites apart so no cell is swallowed by walls
    let spacing = ((w * h) as f64 / spec.n_sites as f64).sqrt() * 0.5;
    let min_gap = spacing.max(spec.boundary_thickness as f64 + 2.0);
    let mut sites: Vec<(f64, f64)> = Vec::with_capacity(spec.n_sites);
    let mut attempts = 0;
    while sites.len() < spec.n_sites {
        let s = (rng.unit() * w as f64, rng.unit() * h as f64);
        attempts += 1;
        let far = sites.iter().all(|t| (t.0 - s.0).hypot(t.1 - s.1) >= min_gap);
        if far || attempts > 200 * spec.n_sites {
            sites.push(s);
        }
    }

    let mut cell = vec![0usize; w * h];
    let mut mask = BinaryMask::new(w, h)?;
    for y in 0..h {
        for x in 0..w {
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            let (mut a, mut b) = ((f64::INFINITY, 0usize), (f64::INFINITY, 0usize));
            for (k, s) in sites.iter().enumerate() {
                let d = (s.0 - p.0).powi(2) + (s.1 - p.1).powi(2);
                if d < a.0 {
                    b = a;
                    a = (d, k);
                } else if d < b.0 {
                    b = (d, k);
                }
            }
            cell[y * w + x] = a.1;
            let (sa, sb) = (sites[a.1], sites[b.1]);
            let sep = (sa.0 - sb.0).hypot(sa.1 - sb.1);
            if sep > 0.0 && (b.0 - a.0) / (2.0 * sep) <= half {
                mask.set(x, y, true);
            }
        }
    }
    seal_cells(&mut mask, &cell, w, h);
    Ok(mask)
}

/// Marks the lower-id pixel of every 4-adjacent pair in different cells so
/// that no object leaks into a neighbouring cell.
fn seal_cells(mask: &mut BinaryMask, cell: &[usize], w: usize, h: usize) {
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let right = x + 1 < w && cell[i + 1] != cell[i];
            let down = y + 1 < h && cell[i + w] != cell[i];
            if right {
                let j = if cell[i] < cell[i + 1] { i } else { i + 1 };
                mask.set_index(j, true);
            }
            if down {
                let j = if cell[i] < cell[i + w] { i } else { i + w };
                mask.set_index(j, true);
            }
        }
    }
}

fn wall_positions(extent: usize, cells: usize, thickness: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let pitch = extent as f64 / cells as f64;
    if pitch < thickness as f64 + 2.0 {
        return Err(Error::Infeasible(format!(
            "{cells} cells of thickness-{thickness} walls do not fit in {extent} pixels"
        )));
    }
    let jitter = ((pitch - thickness as f64 - 2.0) / 4.0).floor() as usize;
    Ok((1..cells)
        .map(|k| {
            let centre = (k as f64 * pitch).round() as usize;
            let offset = if jitter == 0 { 0 } else { rng.below(2 * jitter + 1) };
            (centre + offset).saturating_sub(jitter + thickness / 2)
        })
        .collect())
}

fn lattice(spec: &SynthSpec, rng: &mut Rng) -> Result<BinaryMask> {
    let cols = (spec.n_sites as f64).sqrt().ceil() as usize;
    let rows = spec.n_sites.div_ceil(cols);
    let t = spec.boundary_thickness;
    let xs = wall_positions(spec.width, cols, t, rng)?;
    let ys = wall_positions(spec.height, rows, t, rng)?;
    BinaryMask::from_fn(spec.width, spec.height, |x, y| {
        xs.iter().any(|&s| (s..s + t).contains(&x)) || ys.iter().any(|&s| (s..s + t).contains(&y))
    })
}

fn border_point(rng: &mut Rng, side: usize, w: f64, h: f64) -> (f64, f64) {
    let u = 0.1 + 0.8 * rng.unit();
    match side {
        0 => (u * w, 0.0),
        1 => (w, u * h),
        2 => (u * w, h),
        _ => (0.0, u * h),
    }
}

fn roads(spec: &SynthSpec, rng: &mut Rng) -> Result<BinaryMask> {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let half = (spec.boundary_thickness as f64 / 2.0).max(0.5);
    let mut lines = Vec::with_capacity(spec.n_sites);
    for _ in 0..spec.n_sites {
        let s0 = rng.below(4);
        let s1 = (s0 + 1 + rng.below(3)) % 4;
        let a = border_point(rng, s0, w, h);
        let b = border_point(rng, s1, w, h);
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        lines.push((a, ((b.1 - a.1) / len, -(b.0 - a.0) / len)));
    }
    BinaryMask::from_fn(spec.width, spec.height, |x, y| {
        let p = (x as f64 + 0.5, y as f64 + 0.5);
        lines
            .iter()
            .any(|&(a, n)| ((p.0 - a.0) * n.0 + (p.1 - a.1) * n.1).abs() <= half)
    })
}

/// Attempts per injected error before giving up.
const MAX_ATTEMPTS: usize = 400;
/// Gap kept between injected regions, in pixels.
const MARGIN: usize = 6;

struct Scene<'a> {
    gt: &'a BinaryMask,
    objects: LabelMap,
    skeleton: BinaryMask,
    /// Plain wall pixels: skeleton pixels away from junctions and ends.
    plain: Vec<usize>,
    /// Edge pixels: boundary pixels 8-adjacent to an object, away from
    /// junctions and from object skeletons.
    edges: Vec<usize>,
    /// Object pixels 4-adjacent to the boundary, away from junctions and
    /// from object skeletons.
    shore: Vec<usize>,
}

impl<'a> Scene<'a> {
    fn new(gt: &'a BinaryMask) -> Result<Self> {
        let (w, h) = gt.dims();
        let skeleton = skeletonize(gt);
        let neighbours = |i: usize| {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            let mut n = 0;
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let (nx, ny) = (x + dx, y + dy);
                    if (dx, dy) != (0, 0)
                        && nx >= 0
                        && ny >= 0
                        && (nx as usize) < w
                        && (ny as usize) < h
                        && skeleton.get(nx as usize, ny as usize)
                    {
                        n += 1;
                    }
                }
            }
            n
        };
        let mut irregular = BinaryMask::new(w, h)?;
        for i in skeleton.iter_ones() {
            if neighbours(i) != 2 {
                irregular.set_index(i, true);
            }
        }
        let junction_zone = dilate(&irregular, 5);
        let objects = connected_components(gt, Target::Background, Connectivity::Four);
        // object skeletons end on walls at acute corners; benign errors stay clear
        let tips = dilate(&crate::geometry::background_skeleton(gt), 2);
        let plain = skeleton.and_not(&junction_zone)?.iter_ones().collect();
        let objects_mask = gt.not();
        let edges = gt
            .and(&dilate(&objects_mask, 1))?
            .and_not(&skeleton)?
            .and_not(&junction_zone)?
            .and_not(&tips)?
            .iter_ones()
            .collect();
        let near_wall = dilate(gt, 1);
        let shore = objects_mask
            .and(&near_wall)?
            .and_not(&dilate(&junction_zone, 1))?
            .and_not(&tips)?
            .iter_ones()
            .filter(|&i| {
                let (x, y) = (i % w, i / w);
                (x > 0 && gt.get(x - 1, y))
                    || (x + 1 < w && gt.get(x + 1, y))
                    || (y > 0 && gt.get(x, y - 1))
                    || (y + 1 < h && gt.get(x, y + 1))
            })
            .collect();
        Ok(Self {
            gt,
            objects,
            skeleton,
            plain,
            edges,
            shore,
        })
    }
}

/// 8-connected component of `candidates` containing `seed`.
fn component_at(candidates: &BinaryMask, seed: usize) -> BinaryMask {
    let (w, h) = candidates.dims();
    let mut out = BinaryMask::new(w, h).expect("dims already validated");
    if !candidates.get_index(seed) {
        return out;
    }
    let mut stack = vec![seed];
    out.set_index(seed, true);
    while let Some(i) = stack.pop() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx as usize >= w || ny as usize >= h {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if candidates.get_index(j) && !out.get_index(j) {
                    out.set_index(j, true);
                    stack.push(j);
                }
            }
        }
    }
    out
}

fn disk(w: usize, h: usize, centre: usize, r2: usize) -> BinaryMask {
    let (cx, cy) = ((centre % w) as isize, (centre / w) as isize);
    BinaryMask::from_fn(w, h, |x, y| {
        let (dx, dy) = (x as isize - cx, y as isize - cy);
        (dx * dx + dy * dy) as usize <= r2
    })
    .expect("dims already validated")
}

fn pick(rng: &mut Rng, pool: &[usize]) -> Option<usize> {
    if pool.is_empty() {
        None
    } else {
        Some(pool[rng.below(pool.len())])
    }
}

fn propose(kind: ErrorType, scene: &Scene, rng: &mut Rng, thickness: usize) -> Option<BinaryMask> {
    let gt = scene.gt;
    let (w, h) = gt.dims();
    match kind {
        ErrorType::Fracture => {
            let s = pick(rng, &scene.plain)?;
            let r = thickness as f64 / 2.0 + 1.5;
            let chunk = gt.and(&disk(w, h, s, (r * r) as usize)).ok()?;
            Some(component_at(&chunk, s))
        }
        ErrorType::Appearance => {
            let s = pick(rng, &scene.plain)?;
            let hr = thickness.saturating_sub(3) / 2;
            let (x, y) = (s % w, s / w);
            let inside = |r: usize| {
                x > r && y > r && x + r + 1 < w && y + r + 1 < h && {
                    (y - r - 1..=y + r + 1).all(|yy| (x - r - 1..=x + r + 1).all(|xx| gt.get(xx, yy)))
                }
            };
            if !inside(hr) {
                return None;
            }
            BinaryMask::from_fn(w, h, |xx, yy| xx.abs_diff(x) <= hr && yy.abs_diff(y) <= hr).ok()
        }
        ErrorType::Thin => {
            let p = pick(rng, &scene.edges)?;
            let side = gt.and(&disk(w, h, p, 4)).ok()?.and_not(&scene.skeleton).ok()?;
            Some(component_at(&side, p))
        }
        ErrorType::Thicken => {
            let p = pick(rng, &scene.shore)?;
            let bump = disk(w, h, p, 2).and_not(gt).ok()?;
            Some(component_at(&bump, p))
        }
        ErrorType::Disappearance => {
            let n = scene.objects.num_labels() as usize;
            let label = rng.below(n) as u32 + 1;
            BinaryMask::from_fn(w, h, |x, y| scene.objects.get(x, y) == label).ok()
        }
        ErrorType::Closure => {
            let n = scene.objects.num_labels() as usize;
            let label = rng.below(n) as u32 + 1;
            let members: Vec<usize> = (0..w * h).filter(|&i| scene.objects.labels()[i] == label).collect();
            let seed = pick(rng, &members)?;
            let theta = rng.unit() * std::f64::consts::PI;
            let (nx, ny) = (theta.cos(), theta.sin());
            let half = thickness as f64 / 2.0;
            let (sx, sy) = ((seed % w) as f64, (seed / w) as f64);
            let band = BinaryMask::from_fn(w, h, |x, y| {
                scene.objects.get(x, y) == label && ((x as f64 - sx) * nx + (y as f64 - sy) * ny).abs() <= half
            })
            .ok()?;
            Some(component_at(&band, seed))
        }
    }
}

/// Applies the requested errors to `gt`. Each region is accepted only if
/// flipping it back in the prediction changes the object structure exactly
/// when the error type is critical, and every earlier region keeps its
/// verdict.
pub fn inject_errors(gt: &BinaryMask, errors: &[ErrorRequest], seed: u64) -> Result<(BinaryMask, Vec<InjectedError>)> {
    let (w, h) = gt.dims();
    let mut rng = Rng::new(seed);
    let scene = Scene::new(gt)?;
    let thickness = estimate_thickness(gt);
    let mut pred = gt.clone();
    let mut used = BinaryMask::new(w, h)?;
    let mut injected: Vec<InjectedError> = Vec::new();

    for request in errors {
        for _ in 0..request.count {
            let kind = request.kind;
            let mut placed = false;
            for _ in 0..MAX_ATTEMPTS {
                let Some(region) = propose(kind, &scene, &mut rng, thickness) else {
                    continue;
                };
                if !region.any() || region.intersects(&used) {
                    continue;
                }
                let candidate = pred.xor(&region)?;
                if is_region_critical(&candidate, &region)? != kind.is_critical() {
                    continue;
                }
                if kind.is_critical() {
                    let before = count_components(&pred, Target::Background, Connectivity::Four);
                    let after = count_components(&candidate, Target::Background, Connectivity::Four);
                    let expected_change = match kind {
                        ErrorType::Appearance | ErrorType::Closure => after == before + 1,
                        _ => after + 1 == before,
                    };
                    if !expected_change {
                        continue;
                    }
                }
                let stable = injected.iter().all(|e| {
                    let r = e.region.as_ref().expect("regions are kept during injection");
                    is_region_critical(&candidate, r).map(|c| c == e.critical).unwrap_or(false)
                });
                if !stable {
                    continue;
                }
                pred = candidate;
                used = used.or(&dilate(&region, MARGIN))?;
                injected.push(InjectedError {
                    kind,
                    critical: kind.is_critical(),
                    pixels: region.count_ones(),
                    bbox: bbox_of(&region),
                    region: Some(region),
                });
                placed = true;
                break;
            }
            if !placed {
                return Err(Error::Placement {
                    kind: kind.name().into(),
                    reason: placement_reason(kind, &scene),
                });
            }
        }
    }
    Ok((pred, injected))
}

fn placement_reason(kind: ErrorType, scene: &Scene) -> String {
    match kind {
        ErrorType::Thin | ErrorType::Appearance if scene.edges.is_empty() || scene.plain.is_empty() => {
            "no wall thick enough".into()
        }
        ErrorType::Thin | ErrorType::Appearance => "no wall thick enough away from junctions".into(),
        _ => format!("no valid location found in {MAX_ATTEMPTS} attempts"),
    }
}

/// Typical wall thickness: twice the largest distance from a skeleton pixel
/// to the nearest object pixel, minus one.
fn estimate_thickness(gt: &BinaryMask) -> usize {
    let objects = gt.not();
    if !objects.any() {
        return 1;
    }
    let d = crate::geometry::squared_edt(&objects).expect("objects are nonempty");
    let skel = skeletonize(gt);
    let mut radii: Vec<u64> = skel.iter_ones().map(|i| d[i]).collect();
    if radii.is_empty() {
        return 1;
    }
    radii.sort_unstable();
    let median = (radii[radii.len() / 2] as f64).sqrt();
    ((2.0 * median - 1.0).round() as usize).max(1)
}

fn bbox_of(region: &BinaryMask) -> [usize; 4] {
    let w = region.width();
    let mut b = [usize::MAX, usize::MAX, 0, 0];
    for i in region.iter_ones() {
        let (x, y) = (i % w, i / w);
        b[0] = b[0].min(x);
        b[1] = b[1].min(y);
        b[2] = b[2].max(x);
        b[3] = b[3].max(y);
    }
    b
}

/// Generated image, prediction and manifest.
#[derive(Clone, Debug)]
pub struct SynthCase {
    pub gt: BinaryMask,
    pub objects: LabelMap,
    pub pred: BinaryMask,
    pub injected: Vec<InjectedError>,
}

/// Seed used for error placement, derived from the image seed.
pub fn injection_seed(seed: u64) -> u64 {
    seed ^ 0xA076_1D64_78BD_642F
}

/// [`generate`] followed by [`inject_errors`].
pub fn generate_case(spec: &SynthSpec) -> Result<SynthCase> {
    let (gt, objects) = generate(spec)?;
    let (pred, injected) = inject_errors(&gt, &spec.errors, injection_seed(spec.seed))?;
    Ok(SynthCase {
        gt,
        objects,
        pred,
        injected,
    })
}

/// Manifest written next to a generated case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: SynthSpec,
    pub objects: u32,
    pub injected: Vec<InjectedError>,
}

/// Spec for one pair of a mixed validation corpus. Sizes cycle through 64,
/// 128, 192 and 256, kinds alternate between lattice and Voronoi, and walls
/// are 3 pixels thick. Every pair gets one closure, disappearance, fracture
/// and appearance. Lattice pairs also get one thin and one thicken error;
/// Voronoi pairs get them only when `benign_on_voronoi` is set.
pub fn corpus_spec(index: usize, seed: u64, benign_on_voronoi: bool) -> SynthSpec {
    let size = 64 * (1 + index % 4);
    let kind = if (index / 4).is_multiple_of(2) { Kind::Lattice } else { Kind::Voronoi };
    let types: &[ErrorType] = if kind == Kind::Lattice || benign_on_voronoi {
        &ErrorType::ALL
    } else {
        &ErrorType::ALL[..4]
    };
    SynthSpec {
        width: size,
        height: size,
        seed,
        kind,
        n_sites: (size * size / 900).max(4),
        boundary_thickness: 3,
        errors: types.iter().map(|&kind| ErrorRequest { kind, count: 1 }).collect(),
    }
}

/// `n` cases built from [`corpus_spec`]. Seeds start at `base_seed` and
/// skip any seed whose errors cannot all be placed.
pub fn corpus(n: usize, base_seed: u64, benign_on_voronoi: bool) -> Result<Vec<(SynthSpec, SynthCase)>> {
    let mut out = Vec::with_capacity(n);
    let mut seed = base_seed;
    let mut failures = 0;
    while out.len() < n {
        let spec = corpus_spec(out.len(), seed, benign_on_voronoi);
        seed = seed.wrapping_add(1);
        match generate_case(&spec) {
            Ok(case) => out.push((spec, case)),
            Err(Error::Placement { .. }) if failures < 10 * n => failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: Kind, n_sites: usize, errors: Vec<ErrorRequest>) -> SynthSpec {
        SynthSpec {
            width: 64,
            height: 64,
            seed: 7,
            kind,
            n_sites,
            boundary_thickness: 3,
            errors,
        }
    }

    #[test]
    fn rng_mappings() {
        let mut a = Rng::new(0);
        // first SplitMix64 output for state 0
        assert_eq!(a.next_u64(), 0xE220_A839_7B1D_CDAF);
        let mut r = Rng::new(99);
        for _ in 0..1000 {
            assert!(r.below(7) < 7);
            let u = r.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn two_site_voronoi_has_two_objects() {
        for seed in 0..20 {
            let s = SynthSpec { seed, ..spec(Kind::Voronoi, 2, vec![]) };
            let (_, objects) = generate(&s).unwrap();
            assert_eq!(objects.num_labels(), 2, "seed {seed}");
        }
    }

    #[test]
    fn lattice_cell_count() {
        let (_, objects) = generate(&spec(Kind::Lattice, 16, vec![])).unwrap();
        assert_eq!(objects.num_labels(), 16);
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [Kind::Voronoi, Kind::Lattice, Kind::Roads] {
            let s = spec(kind, 6, vec![]);
            assert_eq!(generate(&s).unwrap().0, generate(&s).unwrap().0);
        }
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(generate(&spec(Kind::Voronoi, 1, vec![])), Err(Error::Infeasible(_))));
        let tiny = SynthSpec { width: 8, ..spec(Kind::Voronoi, 2, vec![]) };
        assert!(generate(&tiny).is_err());
        let crowded = SynthSpec { n_sites: 5000, ..spec(Kind::Voronoi, 2, vec![]) };
        assert!(generate(&crowded).is_err());
    }

    #[test]
    fn error_types_change_object_counts_as_intended() {
        let s = spec(Kind::Lattice, 4, vec![]);
        let (gt, objects) = generate(&s).unwrap();
        let n = objects.num_labels() as usize;
        for (kind, delta) in [
            (ErrorType::Fracture, -1),
            (ErrorType::Appearance, 1),
            (ErrorType::Thin, 0),
            (ErrorType::Thicken, 0),
            (ErrorType::Closure, 1),
            (ErrorType::Disappearance, -1),
        ] {
            let (pred, manifest) = inject_errors(&gt, &[ErrorRequest { kind, count: 1 }], 3).unwrap();
            let m = count_components(&pred, Target::Background, Connectivity::Four) as isize;
            assert_eq!(m - n as isize, delta, "{kind:?}");
            assert_eq!(manifest.len(), 1);
            assert_eq!(manifest[0].critical, kind.is_critical());
        }
    }

    #[test]
    fn thin_walls_cannot_be_thinned() {
        let s = SynthSpec {
            boundary_thickness: 1,
            ..spec(Kind::Lattice, 4, vec![])
        };
        let (gt, _) = generate(&s).unwrap();
        let err = inject_errors(&gt, &[ErrorRequest { kind: ErrorType::Thin, count: 1 }], 1).unwrap_err();
        assert!(matches!(err, Error::Placement { .. }), "{err}");
    }
}
