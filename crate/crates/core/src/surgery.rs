//! Degree-preserving surgeries that add zeros to a torus cover: one zero of
//! even order `2k`, or two zeros of odd orders `2k - 1` and `2kp - 1`.
//!
//! A surgery happens inside a vertical column of the grid (a vertical
//! cylinder `C` of the torus). Its preimage splits into vertical cylinders;
//! the surgery needs one of circumference 1 (`C_0`) and `k` of
//! circumference at least 2 (`C_1..C_k`). The segment `σ` is the left
//! boundary line of the column and `τ` the bottom side of one column cell,
//! so both start at the new branch point `P`, which must be regular.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{GridSurface, Slit, SlitFamily, StratumSig};

/// Refinement stops once the grid is this many cells wide.
const MAX_RX: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub k: usize,
    /// Column index of `C` on the grid of the surface examined.
    pub base_cylinder: Option<usize>,
    /// Cells of `C_0`, bottom first.
    pub c0: Option<Vec<usize>>,
    /// Cells of the circumference ≥ 2 components, bottom first; all of them,
    /// so `big.len()` is how many further surgeries of that size could fit.
    pub big: Vec<Vec<usize>>,
}

/// Preimage components of column `j`, each listed from its smallest cell
/// with `pos.1 == 0` upward, sorted by that cell.
fn column_components(s: &GridSurface, j: usize) -> Vec<Vec<usize>> {
    let n = s.num_cells();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for c in 0..n {
        if seen[c] || s.pos(c) != (j, 0) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = c;
        loop {
            seen[x] = true;
            cyc.push(x);
            x = s.top(x);
            if x == c {
                break;
            }
        }
        out.push(cyc);
    }
    out
}

struct Column {
    c0: Vec<Vec<usize>>,
    big: Vec<Vec<usize>>,
}

fn column(s: &GridSurface, j: usize) -> Column {
    let ry = s.ry();
    let comps = column_components(s, j);
    Column {
        c0: comps.iter().filter(|c| c.len() == ry).cloned().collect(),
        big: comps.into_iter().filter(|c| c.len() >= 2 * ry).collect(),
    }
}

pub fn admissibility(s: &GridSurface, k: usize) -> AdmissibilityReport {
    for j in 0..s.rx() {
        let col = column(s, j);
        if !col.c0.is_empty() && col.big.len() >= k {
            return AdmissibilityReport {
                admissible: true,
                k,
                base_cylinder: Some(j),
                c0: Some(col.c0[0].clone()),
                big: col.big,
            };
        }
    }
    AdmissibilityReport { admissible: false, k, base_cylinder: None, c0: None, big: Vec::new() }
}

/// The vertical grid line `x = j / rx` carries no cone point.
fn line_regular(s: &GridSurface, j: usize) -> bool {
    let verts = s.vertices();
    let vid = s.vertex_ids();
    (0..s.num_cells()).all(|c| s.pos(c).0 != j || verts[vid[c]].len() == 1)
}

/// Columns usable for a surgery of size `k`, refining horizontally until at
/// least one has the required regular boundary lines.
fn usable_columns(s: &GridSurface, k: usize, need_right: bool) -> Result<(GridSurface, Vec<Column>)> {
    if !admissibility(s, k).admissible {
        return Err(Error::NotAdmissible(k));
    }
    let mut cur = s.clone();
    loop {
        let rx = cur.rx();
        let cols: Vec<Column> = (0..rx)
            .filter(|&j| line_regular(&cur, j) && (!need_right || line_regular(&cur, (j + 1) % rx)))
            .map(|j| column(&cur, j))
            .filter(|c| !c.c0.is_empty() && c.big.len() >= k)
            .collect();
        if !cols.is_empty() {
            return Ok((cur, cols));
        }
        if rx * 2 > MAX_RX {
            return Err(Error::NotAdmissible(k));
        }
        cur = cur.refine(2, 1)?;
    }
}

fn validated(before: &GridSurface, after: GridSurface, want: &StratumSig) -> Result<GridSurface> {
    if after.degree() != before.degree() || !after.is_connected() {
        return Err(Error::Internal("surgery changed the degree or disconnected the surface".into()));
    }
    let got = after.stratum()?;
    if got != *want || got.genus() != want.genus() {
        return Err(Error::Internal(format!("surgery produced {} instead of {}", got, want)));
    }
    Ok(after)
}

/// Tries each candidate in order and returns the first that validates.
fn first_valid<I>(before: &GridSurface, want: &StratumSig, attempts: I) -> Result<GridSurface>
where
    I: IntoIterator<Item = (GridSurface, Vec<SlitFamily>)>,
{
    let mut last = None;
    for (base, fams) in attempts {
        match base.cut_and_reglue(&fams).and_then(|s| validated(before, s, want)) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Internal("no surgery candidate".into())))
}

/// Adds one zero of order `2k` by cyclically regluing the vertical segments
/// `σ_0, …, σ_k` lying in `C_0, …, C_k`.
pub fn add_even_zero(s: &GridSurface, k: usize) -> Result<GridSurface> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let want = s.stratum()?.with_zero(2 * k)?;
    let (base, cols) = usable_columns(s, k, false)?;
    let ry = base.ry();
    let mut attempts = Vec::new();
    for col in &cols {
        for c0 in &col.c0 {
            for shift in 0..col.big.len() - k + 1 {
                let mut slits = vec![Slit { cell: c0[0], len: ry }];
                slits.extend(col.big[shift..shift + k].iter().map(|c| Slit { cell: c[0], len: ry }));
                attempts.push((base.clone(), vec![SlitFamily::vertical(slits)]));
            }
        }
    }
    first_valid(s, &want, attempts)
}

/// Bottom cells of a component: the cells lying over `y = 0`, ascending.
fn bottoms(s: &GridSurface, comp: &[usize]) -> Vec<usize> {
    let mut b: Vec<usize> = comp.iter().copied().filter(|&c| s.pos(c).1 == 0).collect();
    b.sort_unstable();
    b
}

/// Adds zeros of orders `2k - 1` and `2kp - 1`.
///
/// With `k == kp` the `2k` lifts of `τ` (one in `C_0`, two in each of
/// `C_1..C_{k-1}`, one in `C_k`) are reglued cyclically. Otherwise `2kp`
/// lifts of `τ` are used on `C_0..C_kp` and the vertical segments in `C_0`
/// and `C_{kp+1}..C_k` form a second cyclic family.
pub fn add_odd_pair(s: &GridSurface, k: usize, kp: usize) -> Result<GridSurface> {
    if kp == 0 || kp > k {
        return Err(Error::InvalidParameters(format!("need 1 <= kp <= k, got k={} kp={}", k, kp)));
    }
    let mut alpha = s.stratum()?.alpha().to_vec();
    alpha.extend([2 * k - 1, 2 * kp - 1]);
    let want = StratumSig::new(alpha)?;
    let (base, cols) = usable_columns(s, k, true)?;
    let ry = base.ry();
    let mut attempts = Vec::new();
    for col in &cols {
        for c0 in &col.c0 {
            let b0 = bottoms(&base, c0)[0];
            let big: Vec<Vec<usize>> = col.big[..k].iter().map(|c| bottoms(&base, c)).collect();
            let mut taus = vec![b0];
            for (i, b) in big.iter().enumerate().take(kp) {
                let i = i + 1;
                taus.push(b[0]);
                if i < kp {
                    taus.push(b[1 % b.len()]);
                }
            }
            if taus.len() != 2 * kp || taus[1..].windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut fams = Vec::new();
            let tau =
                |cells: &[usize]| SlitFamily::horizontal(cells.iter().map(|&c| Slit { cell: c, len: 1 }).collect());
            if k > kp {
                let mut sig = vec![Slit { cell: b0, len: ry }];
                sig.extend(big[kp..k].iter().map(|b| Slit { cell: b[0], len: ry }));
                fams.push(SlitFamily::vertical(sig));
            }
            let mut rev = taus.clone();
            rev[1..].reverse();
            let mut with_fwd = fams.clone();
            with_fwd.push(tau(&taus));
            attempts.push((base.clone(), with_fwd));
            fams.push(tau(&rev));
            attempts.push((base.clone(), fams));
        }
    }
    first_valid(s, &want, attempts)
}

/// Change in spin parity caused by adding a zero of order `2k`.
pub fn predicted_parity_change(k: usize) -> u8 {
    (k % 2) as u8
}
