//! Period characters with Gaussian rational values: the area form, the
//! period lattice, and the realizability test for lattice characters.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{lattice_of, parse_rational, rational_to_string, LatticeBasis, Rational};
use crate::invariants::homology_basis;
use crate::surface::{GridSurface, StratumSig};
use crate::targeting::{build, Certificate, ComponentLabel};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn as_vector(&self) -> [Rational; 2] {
        [self.re.clone(), self.im.clone()]
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [rational_to_string(&self.re), rational_to_string(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        let p = |t: &str| parse_rational(t).map_err(serde::de::Error::custom);
        Ok(GaussianRational::new(p(&re)?, p(&im)?))
    }
}

/// Values of a character on a symplectic basis `a_1, b_1, …, a_g, b_g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CharacterJson")]
pub struct Character {
    pub genus: usize,
    pub a: Vec<GaussianRational>,
    pub b: Vec<GaussianRational>,
}

#[derive(Deserialize)]
struct CharacterJson {
    genus: usize,
    a: Vec<GaussianRational>,
    b: Vec<GaussianRational>,
}

impl TryFrom<CharacterJson> for Character {
    type Error = Error;
    fn try_from(j: CharacterJson) -> Result<Self> {
        Character::new(j.genus, j.a, j.b)
    }
}

impl Character {
    pub fn new(genus: usize, a: Vec<GaussianRational>, b: Vec<GaussianRational>) -> Result<Self> {
        if genus == 0 || a.len() != genus || b.len() != genus {
            return Err(Error::InvalidParameters(format!(
                "a character of genus {} needs {} values on each of a and b, got {} and {}",
                genus,
                genus,
                a.len(),
                b.len()
            )));
        }
        Ok(Character { genus, a, b })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("character: {}", e)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("character serializes")
    }
}

/// `Im Σ conj(χ(a_i)) χ(b_i)`.
pub fn area(chi: &Character) -> Rational {
    chi.a.iter().zip(&chi.b).map(|(a, b)| (&a.conj() * b).im).fold(Rational::zero(), |x, y| x + y)
}

pub fn period_lattice(chi: &Character) -> LatticeBasis {
    let vals: Vec<[Rational; 2]> = chi.a.iter().chain(&chi.b).map(|z| z.as_vector()).collect();
    lattice_of(&vals)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Realizable { degree: usize },
    NotRealizable { reason: String },
}

fn not(reason: String) -> Verdict {
    Verdict::NotRealizable { reason }
}

pub fn haupt_verdict(chi: &Character, alpha: &StratumSig) -> Result<Verdict> {
    if alpha.genus() != chi.genus {
        return Err(Error::InvalidStratum(format!(
            "stratum {} has genus {} but the character has genus {}",
            alpha,
            alpha.genus(),
            chi.genus
        )));
    }
    let a = area(chi);
    if !a.is_positive() {
        return Ok(not(format!("the area {} is not positive", rational_to_string(&a))));
    }
    let lat = period_lattice(chi);
    if lat.rank < 2 {
        return Ok(not("the period group is not a lattice".into()));
    }
    let d = &a / &lat.covolume;
    if !d.is_integer() {
        return Ok(not(format!(
            "no branched cover induces this pairing: area/covolume = {} is not an integer",
            rational_to_string(&d)
        )));
    }
    let d: usize = d.to_integer().try_into().map_err(|_| Error::InvalidParameters("degree too large".into()))?;
    if d <= alpha.max_order() {
        return Ok(not(format!("the degree {} does not exceed the largest zero order {}", d, alpha.max_order())));
    }
    Ok(Verdict::Realizable { degree: d })
}

/// Holonomies of a symplectic homology basis.
pub fn character_of(s: &GridSurface) -> Result<Character> {
    let basis = homology_basis(s)?;
    let g = basis.genus();
    let val = |w: &crate::invariants::Walk| {
        let [x, y] = w.holonomy(s);
        GaussianRational::new(x, y)
    };
    Character::new(g, (0..g).map(|i| val(basis.a(i))).collect(), (0..g).map(|i| val(basis.b(i))).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub certificate: Certificate,
    /// Rational matrix taking the period lattice onto `Z ⊕ iZ`, orientation
    /// preserving; rows act on `(re, im)` column vectors.
    pub normalization: [[String; 2]; 2],
    pub note: String,
}

/// A certified cover whose period lattice and area match `chi` after the
/// normalizing change of coordinates.
pub fn realize(chi: &Character, alpha: &StratumSig, component: ComponentLabel) -> Result<Realization> {
    let degree = match haupt_verdict(chi, alpha)? {
        Verdict::Realizable { degree } => degree,
        Verdict::NotRealizable { reason } => return Err(Error::NotRealizable(reason)),
    };
    let lat = period_lattice(chi);
    let (mut v1, mut v2) = (lat.basis[0].clone(), lat.basis[1].clone());
    let mut det = &v1[0] * &v2[1] - &v1[1] * &v2[0];
    if det.is_negative() {
        std::mem::swap(&mut v1, &mut v2);
        det = -det;
    }
    // Inverse of the matrix with columns v1, v2.
    let n = [[&v2[1] / &det, -(&v2[0] / &det)], [-(&v1[1] / &det), &v1[0] / &det]];
    debug_assert!((&n[0][0] * &n[1][1] - &n[0][1] * &n[1][0]) * &det == Rational::one());
    let certificate = build(alpha, component, degree)?;
    Ok(Realization {
        certificate,
        normalization: n.map(|row| row.map(|x| rational_to_string(&x))),
        note: format!(
            "matches the period lattice, the area and hence the degree {}; the character itself is not matched value by value",
            degree
        ),
    })
}
