use super::{BinaryMask, LabelMap};

/// Pixel adjacency used for component labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    /// Default connectivity for a class: objects are 4-connected,
    /// boundaries are 8-connected.
    pub fn for_target(target: Target) -> Self {
        match target {
            Target::Foreground => Connectivity::Eight,
            Target::Background => Connectivity::Four,
        }
    }
}

/// Which class of pixels to label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// Set pixels (boundary).
    Foreground,
    /// Clear pixels (objects).
    Background,
}

impl Target {
    #[inline]
    fn matches(self, bit: bool) -> bool {
        match self {
            Target::Foreground => bit,
            Target::Background => !bit,
        }
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn with_capacity(n: usize) -> Self {
        Self {
            parent: Vec::with_capacity(n),
        }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let ra = self.find(a);
        let rb = self.find(b);
        // keep the smaller id as root; provisional ids are issued in scan order
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

/// Labels the connected components of the `target` class.
///
/// Two-pass union-find. Labels are dense and ordered by the row-major
/// position of each component's first pixel; non-target pixels get `0`.
pub fn connected_components(mask: &BinaryMask, target: Target, connectivity: Connectivity) -> LabelMap {
    let (w, h) = mask.dims();
    const NONE: u32 = u32::MAX;
    let mut provisional = vec![NONE; w * h];
    let mut sets = DisjointSet::with_capacity(64);

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !target.matches(mask.get_index(i)) {
                continue;
            }
            let mut current = NONE;
            let visit = |j: usize, current: &mut u32, sets: &mut DisjointSet| {
                let l = provisional[j];
                if l != NONE {
                    *current = if *current == NONE { l } else { sets.union(*current, l) };
                }
            };
            if x > 0 {
                visit(i - 1, &mut current, &mut sets);
            }
            if y > 0 {
                visit(i - w, &mut current, &mut sets);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        visit(i - w - 1, &mut current, &mut sets);
                    }
                    if x + 1 < w {
                        visit(i - w + 1, &mut current, &mut sets);
                    }
                }
            }
            provisional[i] = if current == NONE { sets.make() } else { current };
        }
    }

    let mut dense = vec![0u32; sets.parent.len()];
    let mut next = 0u32;
    let labels = provisional
        .into_iter()
        .map(|p| {
            if p == NONE {
                return 0;
            }
            let root = sets.find(p) as usize;
            if dense[root] == 0 {
                next += 1;
                dense[root] = next;
            }
            dense[root]
        })
        .collect();
    LabelMap::from_dense(w, h, labels, next)
}

/// Number of components of the `target` class; same semantics as
/// [`connected_components`].
pub fn count_components(mask: &BinaryMask, target: Target, connectivity: Connectivity) -> usize {
    connected_components(mask, target, connectivity).num_labels() as usize
}

/// Union of the `connectivity`-components of `mask`'s set pixels that
/// contain at least one pixel of `markers`.
pub fn components_touching(mask: &BinaryMask, markers: &BinaryMask, connectivity: Connectivity) -> crate::Result<BinaryMask> {
    mask.ensure_same_dims(markers.dims())?;
    let labels = connected_components(mask, Target::Foreground, connectivity);
    let mut hit = vec![false; labels.num_labels() as usize + 1];
    for i in markers.iter_ones() {
        hit[labels.labels()[i] as usize] = true;
    }
    hit[0] = false;
    let (w, h) = mask.dims();
    let l = labels.labels();
    BinaryMask::from_fn(w, h, |x, y| hit[l[y * w + x] as usize])
}
