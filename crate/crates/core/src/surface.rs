//! Grid-tiled translation surfaces: unit cells of size `1/rx × 1/ry`
//! covering the square torus, glued along their sides.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{is_transitive, Perm};

/// A flat surface tiled by axis-aligned cells. Cell `c` sits over the
/// torus grid square `pos[c]`; its right side is glued to the left side of
/// `right[c]` and its top side to the bottom side of `top[c]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridSurface {
    rx: usize,
    ry: usize,
    pos: Vec<(usize, usize)>,
    right: Vec<usize>,
    top: Vec<usize>,
    left: Vec<usize>,
    bottom: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub direction: Direction,
    /// Row by row (or column by column), starting at the bottom boundary.
    pub cells: Vec<usize>,
    pub circumference: usize,
    pub width: usize,
}

/// Zero orders of a translation surface, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumSig {
    alpha: Vec<usize>,
    genus: usize,
}

impl StratumSig {
    pub fn new(mut alpha: Vec<usize>) -> Result<Self> {
        if alpha.contains(&0) {
            return Err(Error::InvalidStratum("zero orders must be positive".into()));
        }
        let sum: usize = alpha.iter().sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::InvalidStratum(format!("sum of zero orders {} is odd", sum)));
        }
        alpha.sort_unstable();
        Ok(StratumSig { alpha, genus: sum / 2 + 1 })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return StratumSig::new(Vec::new());
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad zero order {:?}", p))))
            .collect::<Result<Vec<_>>>()?;
        StratumSig::new(parts)
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn max_order(&self) -> usize {
        self.alpha.last().copied().unwrap_or(0)
    }

    pub fn all_even(&self) -> bool {
        self.alpha.iter().all(|a| a % 2 == 0)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `self` with one more zero of order `order`.
    pub fn with_zero(&self, order: usize) -> Result<Self> {
        let mut a = self.alpha.clone();
        a.push(order);
        StratumSig::new(a)
    }
}

impl fmt::Display for StratumSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alpha.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for StratumSig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.alpha.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StratumSig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        StratumSig::new(Vec::<usize>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A straight run of `len` cell edges. Horizontal slits run along the
/// bottom edges of `cell, right(cell), …`; vertical slits along the left
/// edges of `cell, top(cell), …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slit {
    pub cell: usize,
    pub len: usize,
}

/// Slits of one direction, reglued cyclically in list order: the side
/// below (left of) slit `i` is glued to the side above (right of) slit
/// `i+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlitFamily {
    pub direction: Direction,
    pub slits: Vec<Slit>,
}

impl SlitFamily {
    pub fn horizontal(slits: Vec<Slit>) -> Self {
        SlitFamily { direction: Direction::Horizontal, slits }
    }

    pub fn vertical(slits: Vec<Slit>) -> Self {
        SlitFamily { direction: Direction::Vertical, slits }
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &j in p {
        if j >= p.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

impl GridSurface {
    /// Builds and validates a connected surface.
    pub fn new(rx: usize, ry: usize, pos: Vec<(usize, usize)>, right: Vec<usize>, top: Vec<usize>) -> Result<Self> {
        let s = Self::new_possibly_disconnected(rx, ry, pos, right, top)?;
        if !s.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(s)
    }

    /// Like [`GridSurface::new`] but accepts several components. Used for
    /// the intermediate disjoint unions of slit constructions.
    pub fn new_possibly_disconnected(
        rx: usize,
        ry: usize,
        pos: Vec<(usize, usize)>,
        right: Vec<usize>,
        top: Vec<usize>,
    ) -> Result<Self> {
        let n = pos.len();
        if rx == 0 || ry == 0 {
            return Err(Error::InvalidSurface("grid refinement must be positive".into()));
        }
        if n == 0 {
            return Err(Error::InvalidSurface("no cells".into()));
        }
        if right.len() != n || top.len() != n {
            return Err(Error::InvalidSurface("gluing tables have the wrong length".into()));
        }
        if !is_bijection(&right) || !is_bijection(&top) {
            return Err(Error::InvalidSurface("gluings must be bijections".into()));
        }
        if !n.is_multiple_of(rx * ry) {
            return Err(Error::InvalidSurface(format!("{} cells is not a multiple of the grid size {}x{}", n, rx, ry)));
        }
        for c in 0..n {
            let (a, b) = pos[c];
            if a >= rx || b >= ry {
                return Err(Error::InvalidSurface(format!("cell {} has position out of range", c)));
            }
            if pos[right[c]] != ((a + 1) % rx, b) {
                return Err(Error::InvalidSurface(format!(
                    "right neighbour of cell {} is not over the next grid square",
                    c
                )));
            }
            if pos[top[c]] != (a, (b + 1) % ry) {
                return Err(Error::InvalidSurface(format!(
                    "top neighbour of cell {} is not over the next grid square",
                    c
                )));
            }
        }
        let left = invert(&right);
        let bottom = invert(&top);
        Ok(GridSurface { rx, ry, pos, right, top, left, bottom })
    }

    /// The square-tiled surface of a permutation pair: square `i` has
    /// `h(i)` on its right and `v(i)` above it.
    pub fn from_permutations(h: &Perm, v: &Perm) -> Result<Self> {
        if h.degree() != v.degree() {
            return Err(Error::DegreeMismatch(h.degree(), v.degree()));
        }
        if !is_transitive(h, v) {
            return Err(Error::Disconnected);
        }
        let d = h.degree();
        Self::new(1, 1, vec![(0, 0); d], h.images().to_vec(), v.images().to_vec())
    }

    pub fn torus() -> Self {
        Self::from_permutations(&Perm::identity(1), &Perm::identity(1)).expect("torus")
    }

    pub fn rx(&self) -> usize {
        self.rx
    }

    pub fn ry(&self) -> usize {
        self.ry
    }

    pub fn num_cells(&self) -> usize {
        self.pos.len()
    }

    pub fn degree(&self) -> usize {
        self.num_cells() / (self.rx * self.ry)
    }

    pub fn pos(&self, c: usize) -> (usize, usize) {
        self.pos[c]
    }

    pub fn right(&self, c: usize) -> usize {
        self.right[c]
    }

    pub fn top(&self, c: usize) -> usize {
        self.top[c]
    }

    pub fn left(&self, c: usize) -> usize {
        self.left[c]
    }

    pub fn bottom(&self, c: usize) -> usize {
        self.bottom[c]
    }

    pub fn rights(&self) -> &[usize] {
        &self.right
    }

    pub fn tops(&self) -> &[usize] {
        &self.top
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.pos
    }

    /// Returns the permutation pair when the grid is unrefined.
    pub fn to_permutations(&self) -> Option<(Perm, Perm)> {
        if self.rx != 1 || self.ry != 1 {
            return None;
        }
        Some((Perm::from_images(self.right.clone()).ok()?, Perm::from_images(self.top.clone()).ok()?))
    }

    /// Grid positions (modulo the grid) lying under cone points.
    pub fn branch_positions(&self) -> Vec<(usize, usize)> {
        let mult = self.vertex_multiplicities();
        let vid = self.vertex_ids();
        let mut out: Vec<(usize, usize)> =
            (0..self.num_cells()).filter(|&c| mult[vid[c]] > 1).map(|c| self.pos[c]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The permutation pair of the same cover seen with unit squares, after
    /// translating the base torus so that the branch point is the origin.
    /// `None` when the cone points lie over more than one point.
    pub fn unit_permutations(&self) -> Option<(Perm, Perm)> {
        let branch = self.branch_positions();
        if branch.len() > 1 {
            return None;
        }
        let origin = branch.first().copied().unwrap_or((0, 0));
        let corners: Vec<usize> = (0..self.num_cells()).filter(|&c| self.pos[c] == origin).collect();
        let index = |c: usize| corners.binary_search(&c).ok();
        let mut h = Vec::with_capacity(corners.len());
        let mut v = Vec::with_capacity(corners.len());
        for &c in &corners {
            let r = (0..self.rx).fold(c, |x, _| self.right[x]);
            let t = (0..self.ry).fold(c, |x, _| self.top[x]);
            h.push(index(r)?);
            v.push(index(t)?);
        }
        Some((Perm::from_images(h).ok()?, Perm::from_images(v).ok()?))
    }

    fn components(&self) -> Vec<usize> {
        let n = self.num_cells();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(c) = queue.pop_front() {
                for d in [self.right[c], self.top[c], self.left[c], self.bottom[c]] {
                    if comp[d] == usize::MAX {
                        comp[d] = next;
                        queue.push_back(d);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// The monodromy around the bottom-left corner of a cell: the next cell
    /// counter-clockwise sharing that corner as its own bottom-left corner.
    pub fn corner_successor(&self, c: usize) -> usize {
        self.top[self.right[self.bottom[self.left[c]]]]
    }

    /// Vertices of the cell complex, each as the cycle of cells having it
    /// as bottom-left corner. A cycle of length `L` is a cone point of
    /// angle `2πL`.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        let n = self.num_cells();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                cyc.push(c);
                c = self.corner_successor(c);
            }
            out.push(cyc);
        }
        out
    }

    /// Vertex id of the bottom-left corner of every cell.
    pub fn vertex_ids(&self) -> Vec<usize> {
        let mut id = vec![0; self.num_cells()];
        for (v, cyc) in self.vertices().iter().enumerate() {
            for &c in cyc {
                id[c] = v;
            }
        }
        id
    }

    /// Cone angle of every vertex in units of `2π`.
    pub fn vertex_multiplicities(&self) -> Vec<usize> {
        self.vertices().iter().map(|c| c.len()).collect()
    }

    pub fn genus(&self) -> Result<usize> {
        Ok(self.stratum()?.genus())
    }

    /// Zero orders from cone angles, cross-checked against the Euler
    /// characteristic of the cell complex.
    pub fn stratum(&self) -> Result<StratumSig> {
        let verts = self.vertices();
        let n = self.num_cells() as i64;
        let v = verts.len() as i64;
        let (edges, faces) = (2 * n, n);
        let chi = v - edges + faces;
        if chi % 2 != 0 {
            return Err(Error::Internal(format!("odd Euler characteristic {}", chi)));
        }
        let euler_genus = 1 - chi / 2;
        let alpha: Vec<usize> = verts.iter().filter(|c| c.len() > 1).map(|c| c.len() - 1).collect();
        let total: usize = alpha.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::GenusMismatch { angle_genus: -1, euler_genus });
        }
        let angle_genus = (total / 2 + 1) as i64;
        if angle_genus != euler_genus {
            return Err(Error::GenusMismatch { angle_genus, euler_genus });
        }
        StratumSig::new(alpha)
    }

    /// Cells along `right` starting at `c` (a closed horizontal loop).
    pub fn row(&self, c: usize) -> Vec<usize> {
        orbit(c, &self.right)
    }

    /// Cells along `top` starting at `c`.
    pub fn column(&self, c: usize) -> Vec<usize> {
        orbit(c, &self.top)
    }

    /// Maximal cylinders in the given direction.
    pub fn cylinders(&self, direction: Direction) -> Vec<Cylinder> {
        let (along, across, across_inv) = match direction {
            Direction::Horizontal => (&self.right, &self.top, &self.bottom),
            Direction::Vertical => (&self.top, &self.right, &self.left),
        };
        let n = self.num_cells();
        // Orbits of `along` are the closed loops; `across` shifts a loop onto
        // the next one without a singularity iff it commutes with `along`
        // all the way round.
        let mut loop_id = vec![usize::MAX; n];
        let mut loops: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if loop_id[s] == usize::MAX {
                let o = orbit(s, along);
                for &c in &o {
                    loop_id[c] = loops.len();
                }
                loops.push(o);
            }
        }
        let regular_above = |l: &Vec<usize>| -> bool { l.iter().all(|&c| across[along[c]] == along[across[c]]) };
        let up: Vec<bool> = loops.iter().map(regular_above).collect();
        let mut used = vec![false; loops.len()];
        let mut out = Vec::new();
        for start in 0..loops.len() {
            if used[start] {
                continue;
            }
            // Walk down to the bottom loop of this cylinder. If we come back
            // round, the component is a single cylinder without boundary.
            let mut bottom_loop = start;
            let mut closed = false;
            loop {
                let below = loop_id[across_inv[loops[bottom_loop][0]]];
                if !up[below] {
                    break;
                }
                bottom_loop = below;
                if bottom_loop == start {
                    closed = true;
                    break;
                }
            }
            let first = *loops[if closed { start } else { bottom_loop }].iter().min().expect("nonempty loop");
            let mut cells = Vec::new();
            let mut c = first;
            let mut width = 0;
            loop {
                let l = loop_id[c];
                if used[l] {
                    break;
                }
                used[l] = true;
                cells.extend(orbit(c, along));
                width += 1;
                if !up[l] {
                    break;
                }
                c = across[c];
            }
            let circumference = cells.len() / width;
            out.push(Cylinder { direction, cells, circumference, width });
        }
        out.sort_by_key(|cyl| *cyl.cells.iter().min().expect("nonempty"));
        out
    }

    /// Subdivides every cell into `kx × ky` cells.
    pub fn refine(&self, kx: usize, ky: usize) -> Result<Self> {
        if kx == 0 || ky == 0 {
            return Err(Error::InvalidParameters("refinement factors must be positive".into()));
        }
        let k = kx * ky;
        let id = |c: usize, i: usize, j: usize| c * k + j * kx + i;
        let n = self.num_cells() * k;
        let mut pos = vec![(0, 0); n];
        let mut right = vec![0; n];
        let mut top = vec![0; n];
        for c in 0..self.num_cells() {
            let (a, b) = self.pos[c];
            for j in 0..ky {
                for i in 0..kx {
                    let me = id(c, i, j);
                    pos[me] = (a * kx + i, b * ky + j);
                    right[me] = if i + 1 < kx { id(c, i + 1, j) } else { id(self.right[c], 0, j) };
                    top[me] = if j + 1 < ky { id(c, i, j + 1) } else { id(self.top[c], i, 0) };
                }
            }
        }
        Self::new_possibly_disconnected(self.rx * kx, self.ry * ky, pos, right, top)
    }

    /// Refines so that the grid is at least `rx` by `ry`, keeping the
    /// existing grid lines (requires divisibility).
    pub fn refine_to(&self, rx: usize, ry: usize) -> Result<Self> {
        if !rx.is_multiple_of(self.rx) || !ry.is_multiple_of(self.ry) {
            return Err(Error::InvalidParameters(format!(
                "cannot refine a {}x{} grid to {}x{}",
                self.rx, self.ry, rx, ry
            )));
        }
        self.refine(rx / self.rx, ry / self.ry)
    }

    /// Disjoint union; cells of `other` are numbered after those of `self`.
    pub fn disjoint_union(&self, other: &GridSurface) -> Result<Self> {
        if self.rx != other.rx || self.ry != other.ry {
            return Err(Error::InvalidParameters("grids differ".into()));
        }
        let off = self.num_cells();
        let mut pos = self.pos.clone();
        pos.extend_from_slice(&other.pos);
        let mut right = self.right.clone();
        right.extend(other.right.iter().map(|c| c + off));
        let mut top = self.top.clone();
        top.extend(other.top.iter().map(|c| c + off));
        Self::new_possibly_disconnected(self.rx, self.ry, pos, right, top)
    }

    fn slit_cells(&self, direction: Direction, slit: &Slit) -> Result<Vec<usize>> {
        if slit.cell >= self.num_cells() {
            return Err(Error::InvalidSlits(format!("no cell {}", slit.cell)));
        }
        if slit.len == 0 {
            return Err(Error::InvalidSlits("slit of length zero".into()));
        }
        let step = match direction {
            Direction::Horizontal => &self.right,
            Direction::Vertical => &self.top,
        };
        let mut cells = Vec::with_capacity(slit.len);
        let mut c = slit.cell;
        for _ in 0..slit.len {
            cells.push(c);
            c = step[c];
        }
        Ok(cells)
    }

    /// Cuts along every slit and reglues each family cyclically.
    pub fn cut_and_reglue(&self, families: &[SlitFamily]) -> Result<Self> {
        let mut right = self.right.clone();
        let mut top = self.top.clone();
        let mut used_h: BTreeSet<usize> = BTreeSet::new();
        let mut used_v: BTreeSet<usize> = BTreeSet::new();
        for fam in families {
            if fam.slits.is_empty() {
                continue;
            }
            let len = fam.slits[0].len;
            let p0 = self.pos[fam.slits[0].cell];
            // `upper[i]` are the cells above (right of) slit i, `lower[i]`
            // the cells below (left of) it.
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            for slit in &fam.slits {
                if slit.len != len {
                    return Err(Error::InvalidSlits("slits of one family differ in length".into()));
                }
                if self.pos[slit.cell] != p0 {
                    return Err(Error::InvalidSlits("slits of one family lie over different torus segments".into()));
                }
                let cells = self.slit_cells(fam.direction, slit)?;
                let used = match fam.direction {
                    Direction::Horizontal => &mut used_h,
                    Direction::Vertical => &mut used_v,
                };
                for &c in &cells {
                    if !used.insert(c) {
                        return Err(Error::InvalidSlits(format!("slits overlap at cell {}", c)));
                    }
                }
                let below: Vec<usize> = cells
                    .iter()
                    .map(|&c| match fam.direction {
                        Direction::Horizontal => self.bottom[c],
                        Direction::Vertical => self.left[c],
                    })
                    .collect();
                upper.push(cells);
                lower.push(below);
            }
            let m = upper.len();
            for i in 0..m {
                let next = (i + 1) % m;
                for j in 0..len {
                    match fam.direction {
                        Direction::Horizontal => top[lower[i][j]] = upper[next][j],
                        Direction::Vertical => right[lower[i][j]] = upper[next][j],
                    }
                }
            }
        }
        let out = Self::new_possibly_disconnected(self.rx, self.ry, self.pos.clone(), right, top)?;
        if !out.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(out)
    }

    /// Breadth-first labelling from `start`, positions shifted so that the
    /// start cell sits over the origin. Returns the relabelled surface and
    /// its comparison key.
    fn labelling_from(&self, start: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.num_cells();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for d in [self.right[c], self.top[c], self.left[c], self.bottom[c]] {
                if label[d] == usize::MAX {
                    label[d] = order.len();
                    order.push(d);
                }
            }
        }
        let (sa, sb) = self.pos[start];
        let mut key = Vec::with_capacity(4 * n);
        for &c in &order {
            let (a, b) = self.pos[c];
            key.push((a + self.rx - sa) % self.rx);
            key.push((b + self.ry - sb) % self.ry);
            key.push(label[self.right[c]]);
            key.push(label[self.top[c]]);
        }
        (order, key)
    }

    /// Minimal labelling over all start cells, with the number of start
    /// cells attaining it (the order of the translation automorphism group
    /// when the grid is unrefined).
    pub fn canonical_form_with_symmetry(&self) -> (GridSurface, usize) {
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut count = 0;
        for s in 0..self.num_cells() {
            let (order, key) = self.labelling_from(s);
            match &best {
                Some((_, k)) if key > *k => {}
                Some((_, k)) if key == *k => count += 1,
                _ => {
                    best = Some((order, key));
                    count = 1;
                }
            }
        }
        let (_, key) = best.expect("nonempty surface");
        let n = self.num_cells();
        let mut pos = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        let mut top = Vec::with_capacity(n);
        for i in 0..n {
            pos.push((key[4 * i], key[4 * i + 1]));
            right.push(key[4 * i + 2]);
            top.push(key[4 * i + 3]);
        }
        let s =
            Self::new_possibly_disconnected(self.rx, self.ry, pos, right, top).expect("relabelling preserves validity");
        (s, count)
    }

    pub fn canonical_form(&self) -> GridSurface {
        self.canonical_form_with_symmetry().0
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SurfaceJson::from(self)).expect("serializable")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        if let (Some(h), Some(vv)) = (v.get("h"), v.get("v")) {
            let (h, vv) = (
                h.as_str().ok_or_else(|| Error::Parse("h must be a string".into()))?,
                vv.as_str().ok_or_else(|| Error::Parse("v must be a string".into()))?,
            );
            let d = v.get("degree").and_then(|d| d.as_u64()).map(|d| d as usize);
            let hp = Perm::parse_cycles(h, d)?;
            let vp = Perm::parse_cycles(vv, d)?;
            let deg = hp.degree().max(vp.degree());
            let hp = Perm::parse_cycles(h, Some(deg))?;
            let vp = Perm::parse_cycles(vv, Some(deg))?;
            return Self::from_permutations(&hp, &vp);
        }
        let j: SurfaceJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }
}

fn orbit(s: usize, p: &[usize]) -> Vec<usize> {
    let mut out = vec![s];
    let mut c = p[s];
    while c != s {
        out.push(c);
        c = p[c];
    }
    out
}

impl fmt::Debug for GridSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridSurface({}x{}, {} cells", self.rx, self.ry, self.num_cells())?;
        if let Some((h, v)) = self.to_permutations() {
            write!(f, ", h={}, v={}", h, v)?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    pos: [usize; 2],
    right: usize,
    top: usize,
}

#[derive(Serialize, Deserialize)]
struct SurfaceJson {
    rx: usize,
    ry: usize,
    cells: Vec<CellJson>,
}

impl From<&GridSurface> for SurfaceJson {
    fn from(s: &GridSurface) -> Self {
        SurfaceJson {
            rx: s.rx,
            ry: s.ry,
            cells: (0..s.num_cells())
                .map(|c| CellJson { pos: [s.pos[c].0, s.pos[c].1], right: s.right[c], top: s.top[c] })
                .collect(),
        }
    }
}

impl TryFrom<SurfaceJson> for GridSurface {
    type Error = Error;

    fn try_from(j: SurfaceJson) -> Result<Self> {
        let pos = j.cells.iter().map(|c| (c.pos[0], c.pos[1])).collect();
        let right = j.cells.iter().map(|c| c.right).collect();
        let top = j.cells.iter().map(|c| c.top).collect();
        GridSurface::new(j.rx, j.ry, pos, right, top)
    }
}

impl Serialize for GridSurface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurfaceJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSurface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        GridSurface::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(d: usize, s: &str) -> Perm {
        Perm::parse_cycles(s, Some(d)).unwrap()
    }

    fn h2() -> GridSurface {
        GridSurface::from_permutations(&perm(3, "(1,2)"), &perm(3, "(2,3)")).unwrap()
    }

    #[test]
    fn unit_squares_survive_refinement() {
        let s = h2();
        let (h, v) = s.refine(2, 3).unwrap().unit_permutations().unwrap();
        assert_eq!((h.to_cycle_string(), v.to_cycle_string()), ("(1,2)".into(), "(2,3)".into()));
        assert_eq!(s.branch_positions(), vec![(0, 0)]);
        let two = GridSurface::from_permutations(&perm(4, "(1,2)(3,4)"), &perm(4, "(2,3)")).unwrap();
        assert_eq!(two.unit_permutations().map(|p| p.0.degree()), Some(4));
    }

    fn o_g(g: usize) -> GridSurface {
        let d = 2 * g - 1;
        let h: Vec<usize> = (0..g).map(|i| 2 * i + 1).collect();
        let v: Vec<Vec<usize>> = (0..g - 1).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
        GridSurface::from_permutations(&Perm::from_cycles(d, &[h]).unwrap(), &Perm::from_cycles(d, &v).unwrap())
            .unwrap()
    }

    #[test]
    fn torus_basics() {
        let t = GridSurface::torus();
        let st = t.stratum().unwrap();
        assert!(st.is_empty());
        assert_eq!(st.genus(), 1);
        assert_eq!(t.degree(), 1);
        let r = t.refine(2, 2).unwrap();
        assert_eq!((r.num_cells(), r.degree()), (4, 1));
        let cyl = t.cylinders(Direction::Vertical);
        assert_eq!(cyl.len(), 1);
        assert_eq!(cyl[0].circumference, 1);
    }

    #[test]
    fn small_strata() {
        let s = h2();
        assert_eq!(s.stratum().unwrap().alpha(), &[2]);
        assert_eq!(s.genus().unwrap(), 2);
        assert_eq!(s.refine(1, 1).unwrap(), s);
        assert_eq!(s.refine(2, 1).unwrap().stratum().unwrap(), s.stratum().unwrap());
        assert_eq!(s.refine(3, 2).unwrap().stratum().unwrap(), s.stratum().unwrap());
        let o3 = o_g(3);
        assert_eq!(o3.stratum().unwrap().alpha(), &[4]);
        assert_eq!(o3.genus().unwrap(), 3);
    }

    #[test]
    fn non_transitive_rejected() {
        let err = GridSurface::from_permutations(&perm(3, "(1,2)"), &perm(3, "(1,2)"));
        assert_eq!(err, Err(Error::Disconnected));
    }

    #[test]
    fn cylinders_of_o_g() {
        for g in 3..=6 {
            let s = o_g(g);
            let mut v: Vec<usize> = s.cylinders(Direction::Vertical).iter().map(|c| c.circumference).collect();
            v.sort_unstable();
            let mut want = vec![1];
            want.extend(vec![2; g - 1]);
            assert_eq!(v, want);
            let mut h: Vec<usize> = s.cylinders(Direction::Horizontal).iter().map(|c| c.circumference).collect();
            h.sort_unstable();
            let mut want = vec![1; g - 1];
            want.push(g);
            assert_eq!(h, want);
        }
    }

    #[test]
    fn cylinders_merge_across_regular_rows() {
        // A 2x2 refined torus is one horizontal cylinder of width 2.
        let t = GridSurface::torus().refine(2, 2).unwrap();
        let c = t.cylinders(Direction::Horizontal);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].circumference, c[0].width), (2, 2));
    }

    #[test]
    fn two_slit_tori_give_genus_two() {
        let t = GridSurface::torus().refine(2, 1).unwrap();
        let u = t.disjoint_union(&t).unwrap();
        assert!(!u.is_connected());
        let fam = SlitFamily::horizontal(vec![Slit { cell: 0, len: 1 }, Slit { cell: 2, len: 1 }]);
        let s = u.cut_and_reglue(&[fam]).unwrap();
        assert_eq!(s.stratum().unwrap().alpha(), &[1, 1]);
        assert_eq!(s.degree(), 2);
        assert_eq!(u.cut_and_reglue(&[]).unwrap_err(), Error::Disconnected);
        assert_eq!(h2().cut_and_reglue(&[]).unwrap(), h2());
    }

    #[test]
    fn slit_errors() {
        let t = GridSurface::torus().refine(2, 1).unwrap();
        let u = t.disjoint_union(&t).unwrap();
        let overlap = SlitFamily::horizontal(vec![Slit { cell: 0, len: 1 }, Slit { cell: 0, len: 1 }]);
        assert!(matches!(u.cut_and_reglue(&[overlap]), Err(Error::InvalidSlits(_))));
        let shifted = SlitFamily::horizontal(vec![Slit { cell: 0, len: 1 }, Slit { cell: 3, len: 1 }]);
        assert!(matches!(u.cut_and_reglue(&[shifted]), Err(Error::InvalidSlits(_))));
        let lengths = SlitFamily::horizontal(vec![Slit { cell: 0, len: 1 }, Slit { cell: 2, len: 2 }]);
        assert!(matches!(u.cut_and_reglue(&[lengths]), Err(Error::InvalidSlits(_))));
    }

    #[test]
    fn canonical_forms() {
        let s = h2();
        let c = s.canonical_form();
        assert_eq!(c.canonical_form(), c);
        let r = perm(3, "(1,3,2)");
        let (h, v) = s.to_permutations().unwrap();
        let t = GridSurface::from_permutations(&h.conjugate(&r).unwrap(), &v.conjugate(&r).unwrap()).unwrap();
        assert_eq!(t.canonical_form(), c);
        let h3 = GridSurface::from_permutations(&perm(5, "(1,2)(3,4)"), &perm(5, "(2,3)(4,5)")).unwrap();
        assert_ne!(h3.canonical_form(), o_g(3).canonical_form());
    }

    #[test]
    fn json_round_trip() {
        let s = h2().refine(2, 1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: GridSurface = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let short: GridSurface = serde_json::from_str(r#"{"h":"(1,2)","v":"(2,3)"}"#).unwrap();
        assert_eq!(short, h2());
    }

    #[test]
    fn stratum_text() {
        let s = StratumSig::parse("6,2,4").unwrap();
        assert_eq!(s.alpha(), &[2, 4, 6]);
        assert_eq!(s.genus(), 7);
        assert_eq!(s.to_string(), "(2,4,6)");
        assert!(StratumSig::parse("1,2").is_err());
        assert!(StratumSig::parse("x").is_err());
    }

    fn transitive_pair() -> impl Strategy<Value = (Perm, Perm)> {
        (2usize..7)
            .prop_flat_map(|d| {
                (
                    Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
                    Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
                )
            })
            .prop_map(|(a, b)| (Perm::from_images(a).unwrap(), Perm::from_images(b).unwrap()))
            .prop_filter("transitive", |(h, v)| is_transitive(h, v))
    }

    proptest! {
        #[test]
        fn stratum_matches_commutator((h, v) in transitive_pair()) {
            let s = GridSurface::from_permutations(&h, &v).unwrap();
            let c = crate::perm::commutator(&h, &v).unwrap();
            let mut want: Vec<usize> = c.cycle_type().parts().iter().filter(|&&l| l > 1).map(|l| l - 1).collect();
            want.sort_unstable();
            let st = s.stratum().unwrap();
            prop_assert_eq!(st.alpha(), &want[..]);
        }

        #[test]
        fn cylinders_partition_cells((h, v) in transitive_pair(), kx in 1usize..3, ky in 1usize..3) {
            let s = GridSurface::from_permutations(&h, &v).unwrap().refine(kx, ky).unwrap();
            for dir in [Direction::Horizontal, Direction::Vertical] {
                let cyl = s.cylinders(dir);
                let mut all: Vec<usize> = cyl.iter().flat_map(|c| c.cells.clone()).collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..s.num_cells()).collect::<Vec<_>>());
                for c in &cyl {
                    prop_assert_eq!(c.circumference * c.width, c.cells.len());
                }
            }
            prop_assert_eq!(s.stratum().unwrap(), GridSurface::from_permutations(&h, &v).unwrap().stratum().unwrap());
        }

        #[test]
        fn canonical_form_is_conjugation_invariant((h, v) in transitive_pair(), seed in any::<u64>()) {
            let d = h.degree();
            let mut imgs: Vec<usize> = (0..d).collect();
            let mut x = seed;
            for i in (1..d).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                imgs.swap(i, (x >> 33) as usize % (i + 1));
            }
            let r = Perm::from_images(imgs).unwrap();
            let a = GridSurface::from_permutations(&h, &v).unwrap();
            let b = GridSurface::from_permutations(&h.conjugate(&r).unwrap(), &v.conjugate(&r).unwrap()).unwrap();
            prop_assert_eq!(a.canonical_form(), b.canonical_form());
        }
    }
}
