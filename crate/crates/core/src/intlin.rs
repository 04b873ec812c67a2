//! Exact integer and rational linear algebra: Hermite normal form and
//! lattices in the rational plane. No floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameters("ragged matrix".into()));
        }
        Ok(IntMatrix { rows: entries.len(), cols, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::new(entries, cols).expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.entries
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows (an echelon
/// basis of the integer row space with positive pivots and reduced entries
/// above each pivot) together with the rank.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, usize) {
    let mut a = m.entries.clone();
    let (nrows, ncols) = (m.rows, m.cols);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        // Euclid on the column below pivot_row until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..nrows {
                if !a[r][col].is_zero() && best.is_none_or(|b| a[r][col].abs() < a[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..nrows {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                let pivot = a[pivot_row].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
                if !a[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot = a[pivot_row].clone();
        for r in 0..pivot_row {
            let q = a[r][col].div_floor(&pivot[col]);
            if !q.is_zero() {
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    (IntMatrix { rows: pivot_row, cols: ncols, entries: a }, pivot_row)
}

/// A discrete subgroup of the rational plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub rank: usize,
    pub basis: Vec<[Rational; 2]>,
    /// `|det|` of the basis when the rank is 2, else 0.
    pub covolume: Rational,
}

impl LatticeBasis {
    pub fn is_unit_lattice(&self) -> bool {
        self.rank == 2 && self.covolume.is_one() && self.contains_integers()
    }

    fn contains_integers(&self) -> bool {
        self.basis.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == 2
    }
}

/// The subgroup of the plane generated by `vectors`.
pub fn lattice_of(vectors: &[[Rational; 2]]) -> LatticeBasis {
    let mut denom = BigInt::one();
    for v in vectors {
        for x in v {
            denom = denom.lcm(x.denom());
        }
    }
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * Rational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let m = IntMatrix { rows: rows.len(), cols: 2, entries: rows };
    let (h, rank) = hermite_normal_form(&m);
    let scale = Rational::from_integer(denom);
    let basis: Vec<[Rational; 2]> = h
        .entries
        .iter()
        .map(|r| [Rational::from_integer(r[0].clone()) / &scale, Rational::from_integer(r[1].clone()) / &scale])
        .collect();
    let covolume =
        if rank == 2 { (&basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0]).abs() } else { Rational::zero() };
    LatticeBasis { rank, basis, covolume }
}

pub fn rational_to_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |_| Error::Parse(format!("not an exact rational: {:?}", text));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(bad)?;
            let d: BigInt = d.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {:?}", text)));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            if t.contains('.') || t.contains('e') || t.contains('E') {
                return Err(Error::Parse(format!("{:?}: only exact rationals p/q are accepted", text)));
            }
            Ok(Rational::from_integer(t.parse().map_err(bad)?))
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    basis: Vec<[String; 2]>,
    covolume: String,
}

impl Serialize for LatticeBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            rank: self.rank,
            basis: self.basis.iter().map(|[x, y]| [rational_to_string(x), rational_to_string(y)]).collect(),
            covolume: rational_to_string(&self.covolume),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        let conv = |t: &str| parse_rational(t).map_err(serde::de::Error::custom);
        let basis =
            j.basis.iter().map(|[x, y]| Ok([conv(x)?, conv(y)?])).collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(LatticeBasis { rank: j.rank, basis, covolume: conv(&j.covolume)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(a: (i64, i64), b: (i64, i64)) -> [Rational; 2] {
        [rat(a.0, a.1), rat(b.0, b.1)]
    }

    #[test]
    fn hnf_examples() {
        let (h, r) = hermite_normal_form(&IntMatrix::from_i64(&[&[1, 0], &[0, 1]]));
        assert_eq!(r, 2);
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 0], &[0, 1]]));

        let (h, r) = hermite_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 1], &[1, 0]]));
        assert_eq!(r, 2);
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 0], &[0, 1]]));

        let (_, r) = hermite_normal_form(&IntMatrix::zeros(3, 2));
        assert_eq!(r, 0);

        let (h, r) = hermite_normal_form(&IntMatrix::from_i64(&[&[4, 6, 2], &[2, 3, 4]]));
        assert_eq!(r, 2);
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 3, 4], &[0, 0, 6]]));
    }

    #[test]
    fn lattice_examples() {
        let l = lattice_of(&[v((1, 1), (0, 1)), v((0, 1), (1, 1))]);
        assert_eq!((l.rank, l.covolume.clone()), (2, rat(1, 1)));
        assert!(l.is_unit_lattice());

        let l = lattice_of(&[v((1, 1), (0, 1)), v((1, 2), (0, 1))]);
        assert_eq!(l.rank, 1);
        assert_eq!(l.covolume, rat(0, 1));
        assert_eq!(l.basis, vec![v((1, 2), (0, 1))]);

        let l = lattice_of(&[v((2, 1), (0, 1)), v((0, 1), (1, 1))]);
        assert_eq!(l.covolume, rat(2, 1));
        assert!(!l.is_unit_lattice());

        let l = lattice_of(&[v((1, 1), (0, 1)), v((0, 1), (1, 2))]);
        assert_eq!(l.covolume, rat(1, 2));

        assert_eq!(lattice_of(&[]).rank, 0);
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4, 1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(rational_to_string(&rat(6, -4)), "-3/2");
    }

    fn vec_strategy() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
        prop::collection::vec((-6i64..7, -6i64..7, 1i64..4), 1..5)
    }

    fn to_vecs(raw: &[(i64, i64, i64)]) -> Vec<[Rational; 2]> {
        raw.iter().map(|&(a, b, d)| [rat(a, d), rat(b, d)]).collect()
    }

    proptest! {
        #[test]
        fn lattice_invariant_under_permutation_and_combination(raw in vec_strategy(), c in -3i64..4) {
            let vs = to_vecs(&raw);
            let base = lattice_of(&vs);
            let mut rev = vs.clone();
            rev.reverse();
            prop_assert_eq!(&lattice_of(&rev), &base);
            let mut extended = vs.clone();
            let k = Rational::from_integer(BigInt::from(c));
            let first = vs[0].clone();
            let last = vs[vs.len() - 1].clone();
            extended.push([&first[0] + &k * &last[0], &first[1] + &k * &last[1]]);
            prop_assert_eq!(&lattice_of(&extended), &base);
        }

        #[test]
        fn covolume_of_superlattice_divides(raw in vec_strategy(), extra in (-6i64..7, -6i64..7, 1i64..4)) {
            let vs = to_vecs(&raw);
            let base = lattice_of(&vs);
            let mut more = vs.clone();
            more.push([rat(extra.0, extra.2), rat(extra.1, extra.2)]);
            let sup = lattice_of(&more);
            if base.rank == 2 && sup.rank == 2 {
                let q = &base.covolume / &sup.covolume;
                prop_assert!(q.is_integer());
            }
        }
    }
}
