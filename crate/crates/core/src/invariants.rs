//! Primitivity, spin parity and hyperellipticity, together with the
//! homology machinery they rest on.
//!
//! Curves are closed walks through cell centres: each move crosses the
//! midpoint of one side of the current cell. They never meet a vertex, so
//! the flat structure trivialises their tangent bundle and the turning
//! number is the index of the curve.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{lattice_of, rat, LatticeBasis, Rational};
use crate::surface::GridSurface;
use crate::targeting::{components_of, ComponentLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    R,
    U,
    L,
    D,
}

impl Move {
    fn index(self) -> usize {
        match self {
            Move::R => 0,
            Move::U => 1,
            Move::L => 2,
            Move::D => 3,
        }
    }

    pub fn inverse(self) -> Move {
        match self {
            Move::R => Move::L,
            Move::L => Move::R,
            Move::U => Move::D,
            Move::D => Move::U,
        }
    }

    pub fn step(self, s: &GridSurface, c: usize) -> usize {
        match self {
            Move::R => s.right(c),
            Move::L => s.left(c),
            Move::U => s.top(c),
            Move::D => s.bottom(c),
        }
    }

    fn letter(self) -> char {
        match self {
            Move::R => 'R',
            Move::U => 'U',
            Move::L => 'L',
            Move::D => 'D',
        }
    }

    fn from_letter(ch: char) -> Result<Move> {
        match ch {
            'R' => Ok(Move::R),
            'U' => Ok(Move::U),
            'L' => Ok(Move::L),
            'D' => Ok(Move::D),
            _ => Err(Error::Parse(format!("unknown move {:?}", ch))),
        }
    }
}

/// A walk through cell centres, starting at the centre of `start`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: usize,
    pub moves: Vec<Move>,
}

impl Walk {
    pub fn new(start: usize, moves: Vec<Move>) -> Self {
        Walk { start, moves }
    }

    pub fn parse(start: usize, letters: &str) -> Result<Self> {
        let moves = letters.chars().map(Move::from_letter).collect::<Result<Vec<_>>>()?;
        Ok(Walk { start, moves })
    }

    pub fn letters(&self) -> String {
        self.moves.iter().map(|m| m.letter()).collect()
    }

    /// Cells visited, including the final one.
    pub fn cells(&self, s: &GridSurface) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let mut c = self.start;
        out.push(c);
        for m in &self.moves {
            c = m.step(s, c);
            out.push(c);
        }
        out
    }

    pub fn end(&self, s: &GridSurface) -> usize {
        self.moves.iter().fold(self.start, |c, m| m.step(s, c))
    }

    pub fn is_closed(&self, s: &GridSurface) -> bool {
        self.end(s) == self.start
    }

    pub fn reversed(&self, s: &GridSurface) -> Walk {
        Walk { start: self.end(s), moves: self.moves.iter().rev().map(|m| m.inverse()).collect() }
    }

    /// Free and cyclic reduction: removes every backtrack, moving the base
    /// point if the backtrack straddles it. The result is freely homotopic
    /// to the input.
    pub fn cyclically_reduced(&self, s: &GridSurface) -> Walk {
        let mut stack: Vec<Move> = Vec::with_capacity(self.moves.len());
        for &m in &self.moves {
            if stack.last() == Some(&m.inverse()) {
                stack.pop();
            } else {
                stack.push(m);
            }
        }
        let mut start = self.start;
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[hi - 1] == stack[lo].inverse() {
            start = stack[lo].step(s, start);
            lo += 1;
            hi -= 1;
        }
        Walk { start, moves: stack[lo..hi].to_vec() }
    }

    /// Displacement in units of the unit torus.
    pub fn holonomy(&self, s: &GridSurface) -> [Rational; 2] {
        let (mut dx, mut dy) = (0i64, 0i64);
        for m in &self.moves {
            match m {
                Move::R => dx += 1,
                Move::L => dx -= 1,
                Move::U => dy += 1,
                Move::D => dy -= 1,
            }
        }
        [rat(dx, s.rx() as i64), rat(dy, s.ry() as i64)]
    }
}

impl fmt::Debug for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Walk({}: {})", self.start, self.letters())
    }
}

#[derive(Serialize, Deserialize)]
struct WalkJson {
    start: usize,
    moves: String,
}

impl Serialize for Walk {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WalkJson { start: self.start, moves: self.letters() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Walk {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = WalkJson::deserialize(d)?;
        Walk::parse(j.start, &j.moves).map_err(serde::de::Error::custom)
    }
}

/// Symplectic basis `a_1, b_1, …, a_g, b_g` in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyBasis {
    pub cycles: Vec<Walk>,
    pub pairing: Vec<Vec<i64>>,
}

impl HomologyBasis {
    pub fn genus(&self) -> usize {
        self.cycles.len() / 2
    }

    pub fn a(&self, i: usize) -> &Walk {
        &self.cycles[2 * i]
    }

    pub fn b(&self, i: usize) -> &Walk {
        &self.cycles[2 * i + 1]
    }
}

pub fn standard_symplectic(g: usize) -> Vec<Vec<i64>> {
    let mut j = vec![vec![0i64; 2 * g]; 2 * g];
    for i in 0..g {
        j[2 * i][2 * i + 1] = 1;
        j[2 * i + 1][2 * i] = -1;
    }
    j
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinEvidence {
    pub basis: HomologyBasis,
    /// Turning numbers of the basis curves.
    pub indices: Vec<i64>,
    /// Transverse self-crossings of each basis curve as drawn.
    pub self_crossings: Vec<usize>,
    pub parity: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionWitness {
    pub rho: Vec<usize>,
    pub fixed_cells: usize,
    pub fixed_edges: usize,
    pub fixed_vertices: usize,
    pub fixed_points: usize,
}

/// Where a curve meets a cell side, as a parameter running
/// counter-clockwise round the cell boundary.
#[derive(Debug, Clone, Copy)]
struct Chord {
    curve: usize,
    from: usize,
    to: usize,
}

fn in_arc(x: usize, s: usize, t: usize) -> bool {
    if s < t {
        s < x && x < t
    } else {
        x > s || x < t
    }
}

/// Sign of the crossing of `a` and `b` inside one cell, or 0. Positive
/// when `b` crosses `a` from its right to its left.
fn crossing_sign(a: &Chord, b: &Chord) -> i64 {
    let s = in_arc(b.from, a.from, a.to);
    let t = in_arc(b.to, a.from, a.to);
    if s == t {
        0
    } else if s {
        1
    } else {
        -1
    }
}

/// Realises closed walks in general position and returns the algebraic
/// intersection matrix together with the self-crossing count of each curve.
fn intersections(s: &GridSurface, walks: &[Walk]) -> (Vec<Vec<i64>>, Vec<usize>) {
    // Rank of every traversal along the side it crosses.
    let mut counter: HashMap<(usize, bool), usize> = HashMap::new();
    let mut ranks: Vec<Vec<usize>> = Vec::with_capacity(walks.len());
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(walks.len());
    for w in walks {
        let cs = w.cells(s);
        let mut rk = Vec::with_capacity(w.moves.len());
        for (k, m) in w.moves.iter().enumerate() {
            let c = cs[k];
            let key = match m {
                Move::R => (s.right(c), true),
                Move::L => (c, true),
                Move::U => (s.top(c), false),
                Move::D => (c, false),
            };
            let e = counter.entry(key).or_insert(0);
            rk.push(*e);
            *e += 1;
        }
        ranks.push(rk);
        cells.push(cs);
    }
    let big = counter.values().copied().max().unwrap_or(0) + 2;
    let exit_param = |m: Move, r: usize| match m {
        Move::R => big + r + 1,
        Move::U => 3 * big - (r + 1),
        Move::L => 4 * big - (r + 1),
        Move::D => r + 1,
    };
    let entry_param = |m: Move, r: usize| match m {
        Move::R => 4 * big - (r + 1),
        Move::L => big + r + 1,
        Move::U => r + 1,
        Move::D => 3 * big - (r + 1),
    };
    let mut per_cell: HashMap<usize, Vec<Chord>> = HashMap::new();
    for (i, w) in walks.iter().enumerate() {
        let n = w.moves.len();
        for k in 0..n {
            let prev = (k + n - 1) % n;
            let chord = Chord {
                curve: i,
                from: entry_param(w.moves[prev], ranks[i][prev]),
                to: exit_param(w.moves[k], ranks[i][k]),
            };
            per_cell.entry(cells[i][k]).or_default().push(chord);
        }
    }
    let m = walks.len();
    let mut gram = vec![vec![0i64; m]; m];
    let mut selfx = vec![0usize; m];
    for chords in per_cell.values() {
        for x in 0..chords.len() {
            for y in x + 1..chords.len() {
                let (a, b) = (&chords[x], &chords[y]);
                let sg = crossing_sign(a, b);
                if sg == 0 {
                    continue;
                }
                if a.curve == b.curve {
                    selfx[a.curve] += 1;
                } else {
                    gram[a.curve][b.curve] += sg;
                    gram[b.curve][a.curve] -= sg;
                }
            }
        }
    }
    (gram, selfx)
}

/// Algebraic intersection matrix of closed walks.
pub fn intersection_matrix(s: &GridSurface, walks: &[Walk]) -> Result<Vec<Vec<i64>>> {
    for w in walks {
        if !w.is_closed(s) {
            return Err(Error::InvalidPath(format!("{:?} is not closed", w)));
        }
        if w.moves.is_empty() {
            return Err(Error::InvalidPath("empty walk".into()));
        }
    }
    Ok(intersections(s, walks).0)
}

fn tree_path(parent: &[Option<(usize, Move)>], mut c: usize) -> Vec<Move> {
    let mut rev = Vec::new();
    while let Some((p, m)) = parent[c] {
        rev.push(m);
        c = p;
    }
    rev.reverse();
    rev
}

fn concat(s: &GridSurface, base: usize, parts: &[(i64, &Walk)]) -> Walk {
    let mut moves = Vec::new();
    for &(coef, w) in parts {
        let piece = if coef >= 0 { w.clone() } else { w.reversed(s) };
        for _ in 0..coef.unsigned_abs() {
            moves.extend_from_slice(&piece.moves);
        }
    }
    Walk { start: base, moves }.cyclically_reduced(s)
}

/// Tree–cotree cycle basis based at `root`, reduced to a symplectic basis.
pub fn homology_basis_rooted(s: &GridSurface, root: usize) -> Result<HomologyBasis> {
    if !s.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = s.num_cells();
    if root >= n {
        return Err(Error::InvalidParameters(format!("no cell {}", root)));
    }
    // Dual spanning tree on cells; a dual edge is named by the cell side
    // it crosses: (c, true) is the left side of c, (c, false) its bottom.
    let mut parent: Vec<Option<(usize, Move)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut dual_tree: BTreeSet<(usize, bool)> = BTreeSet::new();
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        for m in [Move::R, Move::U, Move::L, Move::D] {
            let d = m.step(s, c);
            if !seen[d] {
                seen[d] = true;
                parent[d] = Some((c, m));
                dual_tree.insert(match m {
                    Move::R => (d, true),
                    Move::L => (c, true),
                    Move::U => (d, false),
                    Move::D => (c, false),
                });
                queue.push_back(d);
            }
        }
    }
    // Primal spanning forest on vertices from the remaining sides.
    let vid = s.vertex_ids();
    let nv = vid.iter().max().map_or(0, |m| m + 1);
    let mut uf: Vec<usize> = (0..nv).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let next = uf[y];
            uf[y] = r;
            y = next;
        }
        r
    }
    let mut leftover: Vec<(usize, bool)> = Vec::new();
    for c in 0..n {
        for vertical in [true, false] {
            if dual_tree.contains(&(c, vertical)) {
                continue;
            }
            let (p, q) = if vertical { (vid[c], vid[s.top(c)]) } else { (vid[c], vid[s.right(c)]) };
            let (rp, rq) = (find(&mut uf, p), find(&mut uf, q));
            if rp != rq {
                uf[rp] = rq;
            } else {
                leftover.push((c, vertical));
            }
        }
    }
    let expected = s.stratum()?.genus() * 2;
    if leftover.len() != expected {
        return Err(Error::Internal(format!("cotree left {} edges, expected {}", leftover.len(), expected)));
    }
    // Each leftover side gives a loop based at the root crossing only it
    // outside the dual tree.
    let loops: Vec<Walk> = leftover
        .iter()
        .map(|&(c, vertical)| {
            let (from, m) = if vertical { (s.left(c), Move::R) } else { (s.bottom(c), Move::U) };
            let mut moves = tree_path(&parent, from);
            moves.push(m);
            let back = Walk { start: root, moves: tree_path(&parent, c) }.reversed(s);
            moves.extend(back.moves);
            Walk { start: root, moves }
        })
        .collect();
    let gram0 = intersection_matrix(s, &loops)?;
    let coeffs = symplectic_reduction(&gram0)?;
    let cycles: Vec<Walk> = coeffs
        .iter()
        .map(|row| {
            let parts: Vec<(i64, &Walk)> =
                row.iter().zip(&loops).filter(|(k, _)| **k != 0).map(|(k, w)| (*k, w)).collect();
            concat(s, root, &parts)
        })
        .collect();
    let pairing = intersection_matrix(s, &cycles)?;
    let g = cycles.len() / 2;
    if pairing != standard_symplectic(g) {
        return Err(Error::Internal("symplectic reduction did not produce a symplectic basis".into()));
    }
    Ok(HomologyBasis { cycles, pairing })
}

pub fn homology_basis(s: &GridSurface) -> Result<HomologyBasis> {
    homology_basis_rooted(s, 0)
}

fn pair(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut t = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            t += xi * gram[i][j] * yj;
        }
    }
    t
}

/// Integral change of basis taking a unimodular alternating form to the
/// standard one; rows are coefficient vectors of `a_1, b_1, …`.
pub fn symplectic_reduction(gram: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let m = gram.len();
    let mut pool: Vec<Vec<i64>> = (0..m)
        .map(|i| {
            let mut e = vec![0; m];
            e[i] = 1;
            e
        })
        .collect();
    let mut out = Vec::with_capacity(m);
    while !pool.is_empty() {
        let e = pool.remove(0);
        // Euclid on the pairings of e with the rest.
        loop {
            let nonzero: Vec<usize> = (0..pool.len()).filter(|&j| pair(gram, &e, &pool[j]) != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let k = *nonzero.iter().min_by_key(|&&j| pair(gram, &e, &pool[j]).abs()).expect("nonempty");
            let pk = pair(gram, &e, &pool[k]);
            for &j in &nonzero {
                if j == k {
                    continue;
                }
                let q = pair(gram, &e, &pool[j]).div_euclid(pk);
                let fk = pool[k].clone();
                for (x, y) in pool[j].iter_mut().zip(&fk) {
                    *x -= q * y;
                }
            }
        }
        let Some(fi) = (0..pool.len()).find(|&j| pair(gram, &e, &pool[j]) != 0) else {
            return Err(Error::Internal("intersection form is degenerate".into()));
        };
        let mut f = pool.remove(fi);
        match pair(gram, &e, &f) {
            1 => {}
            -1 => f.iter_mut().for_each(|x| *x = -*x),
            p => return Err(Error::Internal(format!("intersection form is not unimodular ({})", p))),
        }
        for w in pool.iter_mut() {
            let wf = pair(gram, w, &f);
            let we = pair(gram, w, &e);
            for i in 0..m {
                w[i] = w[i] - wf * e[i] + we * f[i];
            }
        }
        out.push(e);
        out.push(f);
    }
    Ok(out)
}

fn turning(walk: &Walk) -> Result<i64> {
    let n = walk.moves.len();
    let mut total = 0i64;
    for k in 0..n {
        let a = walk.moves[(k + n - 1) % n].index();
        let b = walk.moves[k].index();
        total += match (b + 4 - a) % 4 {
            0 => 0,
            1 => 1,
            3 => -1,
            _ => return Err(Error::InvalidPath("walk backtracks".into())),
        };
    }
    if total % 4 != 0 {
        return Err(Error::Internal(format!("turning {} of a closed walk", total)));
    }
    Ok(total / 4)
}

/// Turning number of a closed walk after removing backtracks.
pub fn cycle_index(s: &GridSurface, walk: &Walk) -> Result<i64> {
    if !walk.is_closed(s) {
        return Err(Error::InvalidPath(format!("{:?} is not closed", walk)));
    }
    let w = walk.cyclically_reduced(s);
    if w.moves.is_empty() {
        return Err(Error::InvalidPath("walk is null-homotopic in the cell graph".into()));
    }
    turning(&w)
}

/// `ind + self-crossings + 1 (mod 2)` for every curve; for simple curves
/// this is `ind + 1`.
fn quadratic_values(s: &GridSurface, walks: &[Walk]) -> Result<(Vec<i64>, Vec<usize>, Vec<u8>)> {
    let reduced: Vec<Walk> = walks.iter().map(|w| w.cyclically_reduced(s)).collect();
    let mut idx = Vec::with_capacity(walks.len());
    for w in &reduced {
        if !w.is_closed(s) || w.moves.is_empty() {
            return Err(Error::InvalidPath(format!("{:?} is not a closed essential walk", w)));
        }
        idx.push(turning(w)?);
    }
    let mut selfx = Vec::with_capacity(walks.len());
    for w in &reduced {
        selfx.push(intersections(s, std::slice::from_ref(w)).1[0]);
    }
    let q = idx.iter().zip(&selfx).map(|(i, x)| ((i + *x as i64 + 1).rem_euclid(2)) as u8).collect();
    Ok((idx, selfx, q))
}

pub fn spin_parity_of_basis(s: &GridSurface, basis: HomologyBasis) -> Result<SpinEvidence> {
    if !s.stratum()?.all_even() {
        return Err(Error::OddZero);
    }
    let (indices, self_crossings, q) = quadratic_values(s, &basis.cycles)?;
    let mut parity = 0u8;
    for i in 0..basis.genus() {
        parity ^= q[2 * i] & q[2 * i + 1];
    }
    Ok(SpinEvidence { basis, indices, self_crossings, parity })
}

pub fn spin_parity(s: &GridSurface) -> Result<SpinEvidence> {
    if !s.stratum()?.all_even() {
        return Err(Error::OddZero);
    }
    spin_parity_of_basis(s, homology_basis(s)?)
}

/// Re-checks spin evidence against the surface it claims to describe.
pub fn check_spin_evidence(s: &GridSurface, ev: &SpinEvidence) -> Result<bool> {
    let pairing = intersection_matrix(s, &ev.basis.cycles)?;
    if pairing != standard_symplectic(ev.basis.genus()) || ev.basis.genus() != s.stratum()?.genus() {
        return Ok(false);
    }
    let again = spin_parity_of_basis(s, ev.basis.clone())?;
    Ok(again == *ev)
}

/// Whether the basis holonomies generate the whole torus lattice.
pub fn is_primitive(s: &GridSurface) -> Result<(bool, LatticeBasis)> {
    let basis = homology_basis(s)?;
    let vecs: Vec<[Rational; 2]> = basis.cycles.iter().map(|w| w.holonomy(s)).collect();
    let lat = lattice_of(&vecs);
    Ok((lat.is_unit_lattice(), lat))
}

fn propagate_rotation(s: &GridSurface, image0: usize) -> Option<Vec<usize>> {
    let n = s.num_cells();
    let mut rho = vec![usize::MAX; n];
    rho[0] = image0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let r = rho[c];
        for (d, img) in
            [(s.right(c), s.left(r)), (s.left(c), s.right(r)), (s.top(c), s.bottom(r)), (s.bottom(c), s.top(r))]
        {
            if rho[d] == usize::MAX {
                rho[d] = img;
                queue.push_back(d);
            } else if rho[d] != img {
                return None;
            }
        }
    }
    let mut seen = vec![false; n];
    for &r in &rho {
        if seen[r] {
            return None;
        }
        seen[r] = true;
    }
    if (0..n).any(|c| rho[rho[c]] != c) {
        return None;
    }
    Some(rho)
}

fn fixed_point_counts(s: &GridSurface, rho: &[usize]) -> (usize, usize, usize) {
    let n = s.num_cells();
    let cells = (0..n).filter(|&c| rho[c] == c).count();
    let edges = (0..n).filter(|&c| rho[c] == s.right(c)).count() + (0..n).filter(|&c| rho[c] == s.top(c)).count();
    let vid = s.vertex_ids();
    let mut fixed = BTreeSet::new();
    for c in 0..n {
        // The bottom-left corner of c goes to the top-right corner of rho(c).
        if vid[c] == vid[s.top(s.right(rho[c]))] {
            fixed.insert(vid[c]);
        }
    }
    (cells, edges, fixed.len())
}

/// All translation-surface automorphisms with derivative `-I`, given by
/// their action on cells.
pub fn rotations_by_pi(s: &GridSurface) -> Vec<Vec<usize>> {
    (0..s.num_cells()).filter_map(|x| propagate_rotation(s, x)).collect()
}

fn swaps_zeros(s: &GridSurface, rho: &[usize]) -> bool {
    let verts = s.vertices();
    let vid = s.vertex_ids();
    let zeros: Vec<usize> = (0..verts.len()).filter(|&v| verts[v].len() > 1).collect();
    zeros.iter().all(|&z| {
        let c = verts[z][0];
        vid[s.top(s.right(rho[c]))] != z
    })
}

/// First rotation by π with exactly `2g + 2` fixed points. In a stratum
/// with two zeros the rotation must also exchange them.
pub fn hyperelliptic_witness(s: &GridSurface) -> Result<Option<InvolutionWitness>> {
    let st = s.stratum()?;
    let g = st.genus();
    let need_swap = st.len() == 2;
    for rho in rotations_by_pi(s) {
        let (fixed_cells, fixed_edges, fixed_vertices) = fixed_point_counts(s, &rho);
        let total = fixed_cells + fixed_edges + fixed_vertices;
        if total == 2 * g + 2 && (!need_swap || swaps_zeros(s, &rho)) {
            return Ok(Some(InvolutionWitness { rho, fixed_cells, fixed_edges, fixed_vertices, fixed_points: total }));
        }
    }
    Ok(None)
}

pub fn check_involution_witness(s: &GridSurface, w: &InvolutionWitness) -> Result<bool> {
    let n = s.num_cells();
    if w.rho.len() != n || w.rho.iter().any(|&r| r >= n) {
        return Ok(false);
    }
    let rho = &w.rho;
    for c in 0..n {
        if rho[rho[c]] != c || s.right(rho[c]) != rho[s.left(c)] || s.top(rho[c]) != rho[s.bottom(c)] {
            return Ok(false);
        }
    }
    let (a, b, c) = fixed_point_counts(s, rho);
    let st = s.stratum()?;
    Ok((a, b, c) == (w.fixed_cells, w.fixed_edges, w.fixed_vertices)
        && a + b + c == w.fixed_points
        && w.fixed_points == 2 * st.genus() + 2
        && (st.len() != 2 || swaps_zeros(s, rho)))
}

pub fn classify_component(s: &GridSurface) -> Result<ComponentLabel> {
    let st = s.stratum()?;
    let table = components_of(&st)?;
    if table.contains(&ComponentLabel::Hyperelliptic) && hyperelliptic_witness(s)?.is_some() {
        return Ok(ComponentLabel::Hyperelliptic);
    }
    if table.contains(&ComponentLabel::EvenSpin) || table.contains(&ComponentLabel::OddSpin) {
        let ev = spin_parity(s)?;
        return Ok(if ev.parity == 0 { ComponentLabel::EvenSpin } else { ComponentLabel::OddSpin });
    }
    if table.contains(&ComponentLabel::NonHyperelliptic) {
        return Ok(ComponentLabel::NonHyperelliptic);
    }
    if table.len() == 1 {
        return Ok(table[0]);
    }
    Err(Error::Internal(format!("no label fits a surface in {}", st)))
}
