//! Explicit torus covers: the minimal-stratum families `H`, `O`, `E`, the
//! slit-torus chains with two zeros of equal order, and the two-zero base
//! `Z` with both zeros of odd order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{all_permutations, Perm};
use crate::surface::{GridSurface, Slit, SlitFamily, StratumSig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimalKind {
    Hyp,
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Hyp,
    NonHyp,
    NonHypEven,
}

fn check(s: GridSurface, alpha: Vec<usize>, d: usize, what: &str) -> Result<GridSurface> {
    let want = StratumSig::new(alpha)?;
    let got = s.stratum()?;
    if got != want || s.degree() != d {
        return Err(Error::Internal(format!(
            "{} produced stratum {} of degree {}, expected {} of degree {}",
            what,
            got,
            s.degree(),
            want,
            d
        )));
    }
    Ok(s)
}

fn from_cycles(d: usize, h: &[Vec<usize>], v: &[Vec<usize>]) -> Result<GridSurface> {
    GridSurface::from_permutations(&Perm::from_cycles(d, h)?, &Perm::from_cycles(d, v)?)
}

/// `H_g^d`: a staircase of `2g - 1` squares with the top vertical cylinder
/// lengthened to reach degree `d`.
pub fn h_cover(g: usize, d: usize) -> Result<GridSurface> {
    if g < 2 || d < 2 * g - 1 {
        return Err(Error::InvalidParameters(format!("H needs g >= 2 and d >= 2g-1, got g={} d={}", g, d)));
    }
    let h: Vec<Vec<usize>> = (0..g - 1).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
    let mut v: Vec<Vec<usize>> = (0..g - 2).map(|i| vec![2 * i + 2, 2 * i + 3]).collect();
    v.push((2 * g - 2..=d).collect());
    check(from_cycles(d, &h, &v)?, vec![2 * g - 2], d, "H")
}

/// `O_g^d`: the odd squares form one horizontal cylinder of length `g`, and
/// the last vertical cylinder is widened to reach degree `d`. Also used
/// with `g = 2`, where it is a genus two surface in `(2)`.
pub fn o_cover(g: usize, d: usize) -> Result<GridSurface> {
    if g < 2 || d < 2 * g - 1 {
        return Err(Error::InvalidParameters(format!("O needs g >= 2 and d >= 2g-1, got g={} d={}", g, d)));
    }
    let mut h: Vec<usize> = (0..g).map(|i| 2 * i + 1).collect();
    h.extend(2 * g..=d);
    let v: Vec<Vec<usize>> = (0..g - 1).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
    check(from_cycles(d, &[h], &v)?, vec![2 * g - 2], d, "O")
}

/// `E_g^d`: like `O_g^d` but square 4 joins the long horizontal cylinder.
pub fn e_cover(g: usize, d: usize) -> Result<GridSurface> {
    if g < 3 || d < 2 * g - 1 {
        return Err(Error::InvalidParameters(format!("E needs g >= 3 and d >= 2g-1, got g={} d={}", g, d)));
    }
    let mut h: Vec<usize> = (0..g).map(|i| 2 * i + 1).collect();
    h.extend(2 * g..=d);
    h.push(4);
    let v: Vec<Vec<usize>> = (0..g - 1).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
    check(from_cycles(d, &[h], &v)?, vec![2 * g - 2], d, "E")
}

pub fn minimal_cover(kind: MinimalKind, g: usize, d: usize) -> Result<GridSurface> {
    if d < 2 * g - 1 {
        return Err(Error::InvalidParameters(format!("degree {} is below 2g-1 = {}", d, 2 * g - 1)));
    }
    match kind {
        MinimalKind::Hyp => h_cover(g, d),
        MinimalKind::Odd if g < 3 => Err(Error::InvalidParameters("the odd minimal component needs g >= 3".into())),
        MinimalKind::Odd => o_cover(g, d),
        MinimalKind::Even if g < 4 => Err(Error::InvalidParameters("the even minimal component needs g >= 4".into())),
        MinimalKind::Even => e_cover(g, d),
    }
}

/// Disjoint `w × 1` tori on the half-refined grid. Returns the surface and
/// the first cell of each torus; the slit of torus `i` is the bottom side
/// of that cell and the complementary segment the bottom side of the next.
pub fn slit_tori(widths: &[usize]) -> Result<(GridSurface, Vec<usize>)> {
    let mut pos = Vec::new();
    let mut right = Vec::new();
    let mut top = Vec::new();
    let mut firsts = Vec::new();
    for &w in widths {
        if w == 0 {
            return Err(Error::InvalidParameters("torus of width zero".into()));
        }
        let base = pos.len();
        firsts.push(base);
        for j in 0..2 * w {
            pos.push((j % 2, 0));
            right.push(base + (j + 1) % (2 * w));
            top.push(base + j);
        }
    }
    Ok((GridSurface::new_possibly_disconnected(2, 1, pos, right, top)?, firsts))
}

fn slit(cell: usize) -> Slit {
    Slit { cell, len: 1 }
}

fn bumped_widths(g: usize, d: usize) -> Result<Vec<usize>> {
    if d < g {
        return Err(Error::InvalidParameters(format!("degree {} is below g = {}", d, g)));
    }
    let mut w = vec![1; g];
    w[0] = d - g + 1;
    Ok(w)
}

/// A chain of `g` slit tori, consecutive ones swapped alternately along
/// the slit and along its complement. Hyperelliptic, in `(g-1, g-1)`.
pub fn hyp_chain(g: usize, d: usize) -> Result<GridSurface> {
    if g < 2 {
        return Err(Error::InvalidParameters("hyperelliptic chain needs g >= 2".into()));
    }
    let (tori, a) = slit_tori(&bumped_widths(g, d)?)?;
    let families: Vec<SlitFamily> = (0..g - 1)
        .map(|i| {
            // i is 0-based: torus i+1 in 1-based terms.
            let off = if i % 2 == 0 { 0 } else { 1 };
            SlitFamily::horizontal(vec![slit(a[i] + off), slit(a[i + 1] + off)])
        })
        .collect();
    check(tori.cut_and_reglue(&families)?, vec![g - 1, g - 1], d, "hyperelliptic chain")
}

/// `g` slit tori glued cyclically along their slits.
pub fn cyclic_chain(g: usize, d: usize) -> Result<GridSurface> {
    if g < 2 {
        return Err(Error::InvalidParameters("cyclic chain needs g >= 2".into()));
    }
    let (tori, a) = slit_tori(&bumped_widths(g, d)?)?;
    let fam = SlitFamily::horizontal(a.iter().map(|&c| slit(c)).collect());
    check(tori.cut_and_reglue(&[fam])?, vec![g - 1, g - 1], d, "cyclic chain")
}

/// The cyclic chain with tori 2 and `g - 2` reglued along the vertical
/// closed saddle connections through the right endpoints of their slits.
/// Exchanging the horizontal complementary segments instead would split a
/// zero, since both of them join the same two zeros.
pub fn y_cover(g: usize, d: usize) -> Result<GridSurface> {
    if g < 5 || g.is_multiple_of(2) {
        return Err(Error::InvalidParameters("Y needs odd g >= 5".into()));
    }
    let (tori, a) = slit_tori(&bumped_widths(g, d)?)?;
    let fam = SlitFamily::horizontal(a.iter().map(|&c| slit(c)).collect());
    let swap = SlitFamily::vertical(vec![slit(a[1] + 1), slit(a[g - 3] + 1)]);
    check(tori.cut_and_reglue(&[fam, swap])?, vec![g - 1, g - 1], d, "Y")
}

pub fn equal_pair_cover(kind: PairKind, g: usize, d: usize) -> Result<GridSurface> {
    if d < g {
        return Err(Error::InvalidParameters(format!("degree {} is below g = {}", d, g)));
    }
    match kind {
        PairKind::Hyp => hyp_chain(g, d),
        PairKind::NonHyp if g < 3 => Err(Error::InvalidParameters("a non-hyperelliptic component needs g >= 3".into())),
        PairKind::NonHyp => cyclic_chain(g, d),
        PairKind::NonHypEven => y_cover(g, d),
    }
}

/// `Z^d_{m,n}`: zeros of orders `2m - 1` and `2n - 1`, genus `m + n`.
/// Built from `O_m^{d-1}` and a square torus by cutting `2n` lifts of a
/// short horizontal segment at the branch point, taken in the order they
/// occur around the zero, and regluing them cyclically.
pub fn odd_pair_base(m: usize, n: usize, d: usize) -> Result<GridSurface> {
    if m < 2 || n < 1 || n > m || d < 2 * m {
        return Err(Error::InvalidParameters(format!(
            "Z needs m >= n >= 1, m >= 2 and d >= 2m, got m={} n={} d={}",
            m, n, d
        )));
    }
    let o = o_cover(m, d - 1)?.refine(2, 1)?;
    let (t, _) = slit_tori(&[1])?;
    let union = o.disjoint_union(&t)?;
    let torus_cell = o.num_cells();
    let zero = o
        .vertices()
        .into_iter()
        .find(|c| c.len() == 2 * m - 1)
        .ok_or_else(|| Error::Internal("O has no zero of the expected order".into()))?;
    // Rotate so the walk round the zero starts at its smallest cell.
    let start = zero.iter().enumerate().min_by_key(|(_, &c)| c).map(|(i, _)| i).unwrap_or(0);
    let around: Vec<usize> = zero[start..].iter().chain(&zero[..start]).copied().collect();
    let want = vec![2 * n - 1, 2 * m - 1];
    let mut last_err = None;
    for reverse in [false, true] {
        let mut picked: Vec<usize> = if reverse {
            let mut r = around.clone();
            r[1..].reverse();
            r
        } else {
            around.clone()
        };
        picked.truncate(2 * n - 1);
        picked.push(torus_cell);
        let fam = SlitFamily::horizontal(picked.into_iter().map(slit).collect());
        match union.cut_and_reglue(&[fam]).and_then(|s| check(s, want.clone(), d, "Z")) {
            Ok(s) => return Ok(s),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("two attempts"))
}

/// A `(d-1) × 1` torus and a square torus joined along `count / 2` pairs of
/// parallel slits: `count` simple zeros, genus `count / 2 + 1`.
pub fn simple_zero_cover(count: usize, d: usize) -> Result<GridSurface> {
    if count < 2 || !count.is_multiple_of(2) || d < 2 {
        return Err(Error::InvalidParameters(format!(
            "need an even number of simple zeros and d >= 2, got {} and {}",
            count, d
        )));
    }
    let s = count / 2;
    let (tori, a) = slit_tori(&[d - 1, 1])?;
    let tori = tori.refine(s, 1)?;
    // After refining, cell c of the half grid becomes cells s*c .. s*c+s-1.
    let families: Vec<SlitFamily> = (0..s)
        .map(|j| {
            SlitFamily::horizontal(vec![
                slit(a[0] * s + 2 * j % s + (2 * j / s) * s),
                slit(a[1] * s + 2 * j % s + (2 * j / s) * s),
            ])
        })
        .collect();
    check(tori.cut_and_reglue(&families)?, vec![1; count], d, "simple zeros")
}

/// Searches, in a fixed order, the degree `d` covers whose branch points lie
/// among the `rx` points `(j/rx, 0)`, for the first one in stratum `alpha`
/// satisfying `accept`. Column `j` holds cells `j*d..(j+1)*d`; the right
/// neighbours of every column but the last are fixed up to relabelling.
pub fn column_search<F>(alpha: &StratumSig, d: usize, rx: usize, accept: F) -> Result<Option<GridSurface>>
where
    F: Fn(&GridSurface) -> Result<bool>,
{
    if d == 0 || rx == 0 || (1..=d).product::<usize>().pow(rx as u32 + 1) > 50_000_000 {
        return Err(Error::InvalidParameters(format!("column search too large: degree {} with {} columns", d, rx)));
    }
    let perms = all_permutations(d);
    let n = rx * d;
    let pos: Vec<(usize, usize)> = (0..n).map(|c| (c / d, 0)).collect();
    // choice[0] is the wrap-around right map, choice[1..] the tops per column.
    let mut choice = vec![0usize; rx + 1];
    loop {
        let mut right: Vec<usize> = (0..n - d).map(|c| c + d).collect();
        right.extend(perms[choice[0]].iter().copied());
        let mut top = Vec::with_capacity(n);
        for j in 0..rx {
            top.extend(perms[choice[j + 1]].iter().map(|&x| j * d + x));
        }
        let s = GridSurface::new_possibly_disconnected(rx, 1, pos.clone(), right, top)?;
        if s.is_connected() && s.stratum().ok().as_ref() == Some(alpha) && accept(&s)? {
            return Ok(Some(s));
        }
        // Odometer over all choices, last digit fastest.
        let mut i = rx;
        loop {
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{classify_component, hyperelliptic_witness, is_primitive, spin_parity};
    use crate::perm::commutator;
    use crate::targeting::ComponentLabel;

    #[test]
    fn small_h_is_the_l_shape() {
        let s = minimal_cover(MinimalKind::Hyp, 2, 3).unwrap();
        let t = GridSurface::from_permutations(
            &Perm::parse_cycles("(1,2)", Some(3)).unwrap(),
            &Perm::parse_cycles("(2,3)", Some(3)).unwrap(),
        )
        .unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn minimal_families() {
        for g in 2..=5 {
            for d in 2 * g - 1..=2 * g + 1 {
                let mut kinds = vec![MinimalKind::Hyp];
                if g >= 3 {
                    kinds.push(MinimalKind::Odd);
                }
                if g >= 4 {
                    kinds.push(MinimalKind::Even);
                }
                for kind in kinds {
                    let s = minimal_cover(kind, g, d).unwrap();
                    let (h, v) = s.to_permutations().unwrap();
                    let mut ct = vec![2 * g - 1];
                    ct.extend(vec![1; d + 1 - 2 * g]);
                    assert_eq!(commutator(&h, &v).unwrap().cycle_type().parts(), &ct[..]);
                    assert!(is_primitive(&s).unwrap().0);
                    let want = match kind {
                        MinimalKind::Hyp => ComponentLabel::Hyperelliptic,
                        MinimalKind::Odd => ComponentLabel::OddSpin,
                        MinimalKind::Even => ComponentLabel::EvenSpin,
                    };
                    assert_eq!(classify_component(&s).unwrap(), want, "{:?} g={} d={}", kind, g, d);
                }
            }
        }
        assert!(minimal_cover(MinimalKind::Even, 3, 5).is_err());
        assert!(minimal_cover(MinimalKind::Odd, 2, 3).is_err());
        assert!(minimal_cover(MinimalKind::Hyp, 3, 4).is_err());
    }

    #[test]
    fn equal_pairs() {
        for g in 2..=5 {
            for d in g..=g + 2 {
                let s = equal_pair_cover(PairKind::Hyp, g, d).unwrap();
                let w = hyperelliptic_witness(&s).unwrap().expect("chain is hyperelliptic");
                assert_eq!(w.fixed_points, 2 * g + 2);
                assert!(is_primitive(&s).unwrap().0, "hyp chain g={} d={}", g, d);
                if g >= 3 {
                    let x = equal_pair_cover(PairKind::NonHyp, g, d).unwrap();
                    assert!(hyperelliptic_witness(&x).unwrap().is_none(), "X_{} d={}", g, d);
                    assert!(is_primitive(&x).unwrap().0);
                    if g % 2 == 1 {
                        assert_eq!(spin_parity(&x).unwrap().parity, 1);
                    }
                }
            }
        }
        for g in [5, 7] {
            for d in g..=g + 1 {
                let y = equal_pair_cover(PairKind::NonHypEven, g, d).unwrap();
                assert!(hyperelliptic_witness(&y).unwrap().is_none());
                assert_eq!(spin_parity(&y).unwrap().parity, 0, "Y_{} d={}", g, d);
                assert!(is_primitive(&y).unwrap().0);
            }
        }
        assert!(equal_pair_cover(PairKind::NonHypEven, 4, 4).is_err());
        assert!(equal_pair_cover(PairKind::Hyp, 4, 3).is_err());
    }

    #[test]
    fn z_bases() {
        let z = odd_pair_base(3, 2, 6).unwrap();
        assert_eq!(z.stratum().unwrap().alpha(), &[3, 5]);
        assert_eq!(z.genus().unwrap(), 5);
        let z = odd_pair_base(2, 1, 4).unwrap();
        assert_eq!(z.stratum().unwrap().alpha(), &[1, 3]);
        for m in 2..=4 {
            for n in 1..=m {
                for d in 2 * m..=2 * m + 2 {
                    let z = odd_pair_base(m, n, d).unwrap();
                    assert_eq!(z.degree(), d);
                    assert!(is_primitive(&z).unwrap().0, "Z m={} n={} d={}", m, n, d);
                }
            }
        }
        assert!(odd_pair_base(2, 3, 8).is_err());
        assert!(odd_pair_base(3, 1, 5).is_err());
    }

    #[test]
    fn search_finds_the_first_match() {
        let want = StratumSig::new(vec![2, 2]).unwrap();
        let s = column_search(&want, 3, 2, |s| Ok(spin_parity(s)?.parity == 1)).unwrap().unwrap();
        assert_eq!(s.stratum().unwrap(), want);
        assert_eq!(s.degree(), 3);
        let none = column_search(&StratumSig::new(vec![4]).unwrap(), 2, 2, |_| Ok(true)).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn simple_zeros() {
        for count in [2, 4, 6] {
            for d in 2..=4 {
                let s = simple_zero_cover(count, d).unwrap();
                assert_eq!(s.stratum().unwrap().alpha(), &vec![1; count][..]);
                assert!(is_primitive(&s).unwrap().0);
            }
        }
    }
}
