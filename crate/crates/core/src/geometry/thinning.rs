//! Homotopy-preserving iterative thinning.
//!
//! Directional border sweeps in the style of Lee, Kashyap & Chu: each sweep
//! collects simple, non-end border points of the current direction and then
//! deletes them one at a time, re-checking simplicity before every deletion.
//! Because each individual deletion removes a simple point, the number of
//! 8-connected foreground components and 4-connected background components
//! never changes.
//!
//! The sweep order mirrors the planar slice of the 3-D algorithm: two
//! "out-of-plane" sweeps in which every pixel counts as a border point,
//! followed by north, south, east and west sweeps.
//!
//! Pixels outside the raster are *absent*: they take part neither in the
//! foreground nor in the background neighbourhood graphs, so a wall that
//! touches the image edge keeps separating the regions on both of its sides.

use std::sync::OnceLock;

use crate::raster::BinaryMask;

const BG: u8 = 0;
const FG: u8 = 1;
const ABSENT: u8 = 2;

// ring order: N, NE, E, SE, S, SW, W, NW
const RING: [(i32, i32); 8] = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

#[derive(Clone, Copy)]
enum Sweep {
    OutOfPlane,
    Ring(usize),
}

const SWEEPS: [Sweep; 6] = [
    Sweep::OutOfPlane,
    Sweep::OutOfPlane,
    Sweep::Ring(0),
    Sweep::Ring(4),
    Sweep::Ring(2),
    Sweep::Ring(6),
];

/// Simple-point test for 8-connected foreground / 4-connected background,
/// with some ring positions possibly absent. `fg` must be a subset of
/// `present`.
fn is_simple_reference(fg: u8, present: u8) -> bool {
    let bit = |m: u8, k: usize| m & (1 << k) != 0;
    let bg = present & !fg;

    let components = |set: u8, adjacent: &dyn Fn(usize, usize) -> bool| -> Vec<u8> {
        let mut seen = 0u8;
        let mut comps = Vec::new();
        for start in 0..8 {
            if !bit(set, start) || bit(seen, start) {
                continue;
            }
            let mut comp = 1u8 << start;
            seen |= comp;
            let mut stack = vec![start];
            while let Some(k) = stack.pop() {
                for j in 0..8 {
                    if bit(set, j) && !bit(seen, j) && adjacent(k, j) {
                        seen |= 1 << j;
                        comp |= 1 << j;
                        stack.push(j);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    };

    let eight = |a: usize, b: usize| {
        let (pa, pb) = (RING[a], RING[b]);
        (pa.0 - pb.0).abs() <= 1 && (pa.1 - pb.1).abs() <= 1
    };
    let four = |a: usize, b: usize| {
        let (pa, pb) = (RING[a], RING[b]);
        (pa.0 - pb.0).abs() + (pa.1 - pb.1).abs() == 1
    };

    if components(fg, &eight).len() != 1 {
        return false;
    }
    let four_neighbours: u8 = (1 << 0) | (1 << 2) | (1 << 4) | (1 << 6);
    let touching = components(bg, &four)
        .into_iter()
        .filter(|c| c & four_neighbours != 0)
        .count();
    touching == 1
}

fn simple_table() -> &'static [bool] {
    static TABLE: OnceLock<Vec<bool>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..1usize << 16)
            .map(|i| {
                let present = (i >> 8) as u8;
                let fg = (i & 0xff) as u8;
                fg & !present == 0 && is_simple_reference(fg, present)
            })
            .collect()
    })
}

/// Padded working raster: one ring of padding around the region of interest.
pub(crate) struct ThinGrid {
    stride: usize,
    rows: usize,
    cells: Vec<u8>,
    offsets: [isize; 8],
}

impl ThinGrid {
    /// Builds a grid over the window `[x0, x1] × [y0, y1]` (inclusive) of a
    /// `width × height` image. Padding cells that fall inside the image are
    /// background, cells outside it are absent.
    pub(crate) fn window(
        width: usize,
        height: usize,
        (x0, y0, x1, y1): (usize, usize, usize, usize),
        mut is_fg: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let stride = x1 - x0 + 3;
        let rows = y1 - y0 + 3;
        let mut cells = vec![ABSENT; stride * rows];
        for gy in 0..rows {
            for gx in 0..stride {
                let (ix, iy) = (x0 as isize + gx as isize - 1, y0 as isize + gy as isize - 1);
                if ix < 0 || iy < 0 || ix >= width as isize || iy >= height as isize {
                    continue;
                }
                let (ix, iy) = (ix as usize, iy as usize);
                let inside = gx >= 1 && gy >= 1 && gx < stride - 1 && gy < rows - 1;
                cells[gy * stride + gx] = if inside && is_fg(ix, iy) { FG } else { BG };
            }
        }
        let s = stride as isize;
        let offsets = RING.map(|(dx, dy)| dy as isize * s + dx as isize);
        Self {
            stride,
            rows,
            cells,
            offsets,
        }
    }

    #[inline]
    fn neighbourhood(&self, idx: usize) -> (u8, u8) {
        let mut fg = 0u8;
        let mut present = 0u8;
        for (k, &off) in self.offsets.iter().enumerate() {
            let c = self.cells[(idx as isize + off) as usize];
            if c != ABSENT {
                present |= 1 << k;
                if c == FG {
                    fg |= 1 << k;
                }
            }
        }
        (fg, present)
    }

    fn is_interior(&self, idx: usize) -> bool {
        let (gx, gy) = (idx % self.stride, idx / self.stride);
        gx >= 1 && gy >= 1 && gx + 1 < self.stride && gy + 1 < self.rows
    }

    pub(crate) fn thin(&mut self) {
        let table = simple_table();
        let four = [self.offsets[0], self.offsets[2], self.offsets[4], self.offsets[6]];

        // only pixels with a background 4-neighbour can ever be simple
        let mut frontier: Vec<usize> = (0..self.cells.len())
            .filter(|&i| self.cells[i] == FG && four.iter().any(|&o| self.cells[(i as isize + o) as usize] == BG))
            .collect();
        let mut candidates = Vec::new();
        // one list per 4-neighbour offset, each sorted because candidates are
        let mut exposed: [Vec<usize>; 4] = Default::default();
        let mut merged = Vec::new();

        loop {
            let mut changed = false;
            for sweep in SWEEPS {
                candidates.clear();
                for &idx in &frontier {
                    let (fg, present) = self.neighbourhood(idx);
                    if let Sweep::Ring(k) = sweep {
                        if fg & (1 << k) != 0 {
                            continue;
                        }
                    }
                    if fg.count_ones() == 1 {
                        continue;
                    }
                    if table[((present as usize) << 8) | fg as usize] {
                        candidates.push(idx);
                    }
                }

                exposed.iter_mut().for_each(Vec::clear);
                for &idx in &candidates {
                    let (fg, present) = self.neighbourhood(idx);
                    if table[((present as usize) << 8) | fg as usize] {
                        self.cells[idx] = BG;
                        changed = true;
                        for (list, &o) in exposed.iter_mut().zip(&four) {
                            let j = (idx as isize + o) as usize;
                            if self.cells[j] == FG {
                                list.push(j);
                            }
                        }
                    }
                }
                if !candidates.is_empty() {
                    frontier.retain(|&i| self.cells[i] == FG);
                    for list in &exposed {
                        merge_sorted(&frontier, list, |j| self.cells[j] == FG, &mut merged);
                        std::mem::swap(&mut frontier, &mut merged);
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Visits the foreground cells as image coordinates, given the window origin.
    pub(crate) fn for_each_fg(&self, (x0, y0): (usize, usize), mut f: impl FnMut(usize, usize)) {
        for idx in 0..self.cells.len() {
            if self.cells[idx] == FG && self.is_interior(idx) {
                let (gx, gy) = (idx % self.stride, idx / self.stride);
                f(x0 + gx - 1, y0 + gy - 1);
            }
        }
    }
}

/// Merges sorted `a` with the elements of sorted `b` that pass `keep`,
/// dropping duplicates, into `out`.
fn merge_sorted(a: &[usize], b: &[usize], keep: impl Fn(usize) -> bool, out: &mut Vec<usize>) {
    out.clear();
    let mut b = b.iter().copied().filter(|&j| keep(j)).peekable();
    for &x in a {
        while let Some(&y) = b.peek() {
            if y > x {
                break;
            }
            if y < x && out.last() != Some(&y) {
                out.push(y);
            }
            b.next();
        }
        out.push(x);
    }
    for y in b {
        if out.last() != Some(&y) {
            out.push(y);
        }
    }
}

/// Thin, homotopy-preserving skeleton of the set pixels.
///
/// The result is a subset of the input with the same number of 8-connected
/// foreground components and 4-connected background components. A skeleton
/// is returned unchanged.
pub fn skeletonize(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = mask.dims();
    let mut out = BinaryMask::new(w, h).expect("dims already validated");
    if !mask.any() {
        return out;
    }
    let mut grid = ThinGrid::window(w, h, (0, 0, w - 1, h - 1), |x, y| mask.get(x, y));
    grid.thin();
    grid.for_each_fg((0, 0), |x, y| out.set(x, y, true));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{count_components, Connectivity, Target};

    fn yokoi_simple(fg: u8) -> bool {
        // 8-connectivity number on a full ring; simple iff it equals 1
        let x = |k: usize| 1 - ((fg >> (k % 8)) & 1) as i32;
        let n: i32 = [0usize, 2, 4, 6].iter().map(|&k| x(k) - x(k) * x(k + 1) * x(k + 2)).sum();
        n == 1
    }

    #[test]
    fn table_matches_yokoi_number_on_full_rings() {
        let table = simple_table();
        for fg in 0..=255u8 {
            assert_eq!(table[0xff00 | fg as usize], yokoi_simple(fg), "fg = {fg:08b}");
        }
    }

    #[test]
    fn edge_endpoint_of_separating_wall_is_not_simple() {
        // p on the left edge with only E set: N and S sides are different regions
        // present ring = N, NE, E, SE, S
        let present = 0b0001_1111;
        let fg = 0b0000_0100;
        assert!(!simple_table()[((present as usize) << 8) | fg]);
    }

    #[test]
    fn straight_line_is_unchanged() {
        let m = BinaryMask::from_fn(12, 5, |x, y| y == 2 && (2..10).contains(&x)).unwrap();
        assert_eq!(skeletonize(&m), m);
        let diag = BinaryMask::from_fn(8, 8, |x, y| x == y).unwrap();
        assert_eq!(skeletonize(&diag), diag);
    }

    #[test]
    fn empty_stays_empty() {
        let m = BinaryMask::new(6, 6).unwrap();
        assert!(!skeletonize(&m).any());
    }

    #[test]
    fn solid_block_shrinks_to_centre() {
        let m = BinaryMask::from_fn(8, 8, |x, y| (2..5).contains(&x) && (2..5).contains(&y)).unwrap();
        let s = skeletonize(&m);
        assert_eq!(s.count_ones(), 1);
        assert!(s.get(3, 3));
    }

    #[test]
    fn ring_keeps_its_hole() {
        let m = BinaryMask::from_fn(12, 12, |x, y| {
            let inside = (2..10).contains(&x) && (2..10).contains(&y);
            let hole = (5..7).contains(&x) && (5..7).contains(&y);
            inside && !hole
        })
        .unwrap();
        let s = skeletonize(&m);
        assert!(s.is_subset_of(&m));
        assert_eq!(count_components(&s, Target::Foreground, Connectivity::Eight), 1);
        assert_eq!(count_components(&s, Target::Background, Connectivity::Four), 2);
    }

    #[test]
    fn wall_touching_image_edges_keeps_separating() {
        let m = BinaryMask::from_fn(20, 9, |_, y| (3..6).contains(&y)).unwrap();
        let s = skeletonize(&m);
        assert_eq!(count_components(&s, Target::Background, Connectivity::Four), 2);
        assert_eq!(s.count_ones(), 20);
        assert!((0..20).all(|x| s.get(x, 4)));
    }

    #[test]
    fn thick_wall_reduces_to_middle_row() {
        let m = BinaryMask::from_fn(24, 11, |x, y| (4..7).contains(&y) && (2..22).contains(&x)).unwrap();
        let s = skeletonize(&m);
        assert!(s.iter_ones().all(|i| i / 24 == 5), "{s:?}");
    }
}
