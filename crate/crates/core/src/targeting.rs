//! Which components a stratum has, and how to build a certified primitive
//! cover in any one of them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constructions::{self, MinimalKind, PairKind};
use crate::error::{Error, Result};
use crate::intlin::LatticeBasis;
use crate::invariants::{
    check_involution_witness, check_spin_evidence, classify_component, hyperelliptic_witness, is_primitive,
    rotations_by_pi, spin_parity, InvolutionWitness, SpinEvidence,
};
use crate::surface::{GridSurface, StratumSig};
use crate::surgery::{add_even_zero, add_odd_pair, admissibility};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentLabel {
    #[serde(rename = "hyp")]
    Hyperelliptic,
    #[serde(rename = "even")]
    EvenSpin,
    #[serde(rename = "odd")]
    OddSpin,
    /// The non-hyperelliptic component of `(g-1, g-1)` for even `g >= 4`,
    /// where zeros of odd order leave the spin parity undefined.
    #[serde(rename = "nonhyp")]
    NonHyperelliptic,
    Unique,
}

impl ComponentLabel {
    pub fn name(self) -> &'static str {
        match self {
            ComponentLabel::Hyperelliptic => "hyp",
            ComponentLabel::EvenSpin => "even",
            ComponentLabel::OddSpin => "odd",
            ComponentLabel::NonHyperelliptic => "nonhyp",
            ComponentLabel::Unique => "unique",
        }
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComponentLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hyp" | "hyperelliptic" => Ok(ComponentLabel::Hyperelliptic),
            "even" | "evenspin" => Ok(ComponentLabel::EvenSpin),
            "odd" | "oddspin" => Ok(ComponentLabel::OddSpin),
            "nonhyp" | "nonhyperelliptic" => Ok(ComponentLabel::NonHyperelliptic),
            "unique" => Ok(ComponentLabel::Unique),
            other => {
                Err(Error::Parse(format!("unknown component {:?} (expected hyp, even, odd, nonhyp or unique)", other)))
            }
        }
    }
}

/// Connected components of a stratum.
pub fn components_of(alpha: &StratumSig) -> Result<Vec<ComponentLabel>> {
    use ComponentLabel::*;
    let a = alpha.alpha();
    let g = alpha.genus();
    let minimal = a.len() == 1;
    let equal_pair = a.len() == 2 && a[0] == a[1];
    Ok(match () {
        _ if a.is_empty() => vec![Unique],
        _ if minimal && g == 2 => vec![Hyperelliptic],
        _ if minimal && g == 3 => vec![Hyperelliptic, OddSpin],
        _ if minimal => vec![Hyperelliptic, EvenSpin, OddSpin],
        _ if equal_pair && g == 2 => vec![Unique],
        _ if equal_pair && g == 3 => vec![Hyperelliptic, OddSpin],
        _ if equal_pair && g.is_multiple_of(2) => vec![Hyperelliptic, NonHyperelliptic],
        _ if equal_pair => vec![Hyperelliptic, EvenSpin, OddSpin],
        _ if alpha.all_even() => vec![EvenSpin, OddSpin],
        _ => vec![Unique],
    })
}

/// Parity of the base surface needed so that the even-zero surgeries land
/// on spin parity `spin`.
pub fn theta(alpha: &StratumSig, spin: u8) -> Result<u8> {
    if !alpha.all_even() {
        return Err(Error::OddZero);
    }
    let a = alpha.alpha();
    let n = a.len();
    let s: usize = a.iter().take(n.saturating_sub(1)).map(|x| x / 2).sum();
    Ok(((spin as usize + s) % 2) as u8)
}

/// One step of a build script. The first step makes a base surface, the
/// rest are surgeries applied in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Torus,
    Minimal {
        kind: MinimalKind,
        genus: usize,
        degree: usize,
    },
    EqualPair {
        kind: PairKind,
        genus: usize,
        degree: usize,
    },
    OddPairBase {
        m: usize,
        n: usize,
        degree: usize,
    },
    SimpleZeros {
        count: usize,
        degree: usize,
    },
    /// First surface found by the column search on `columns` branch points
    /// in `stratum` with the given spin parity, not hyperelliptic, primitive
    /// and (when `admissible_for > 0`) admissible for a surgery of that size.
    Searched {
        stratum: StratumSig,
        parity: u8,
        admissible_for: usize,
        columns: usize,
        degree: usize,
    },
    AddEvenZero {
        k: usize,
    },
    AddOddPair {
        k: usize,
        kp: usize,
    },
}

fn searched_base(stratum: &StratumSig, parity: u8, k: usize, columns: usize, d: usize) -> Result<GridSurface> {
    let has_hyp = components_of(stratum)?.contains(&ComponentLabel::Hyperelliptic);
    let found = constructions::column_search(stratum, d, columns, |s| {
        Ok((k == 0 || admissibility(s, k).admissible)
            && spin_parity(s)?.parity == parity
            && is_primitive(s)?.0
            && !(has_hyp && hyperelliptic_witness(s)?.is_some()))
    })?;
    found.ok_or_else(|| Error::NotRealizable(format!("no {}-column cover in {} of degree {}", columns, stratum, d)))
}

/// Runs a build script from the start.
pub fn replay(script: &[Step]) -> Result<GridSurface> {
    let (first, rest) = script.split_first().ok_or_else(|| Error::InvalidParameters("empty build script".into()))?;
    let mut s = match first {
        Step::Torus => GridSurface::torus(),
        Step::Minimal { kind, genus, degree } => constructions::minimal_cover(*kind, *genus, *degree)?,
        Step::EqualPair { kind, genus, degree } => constructions::equal_pair_cover(*kind, *genus, *degree)?,
        Step::OddPairBase { m, n, degree } => constructions::odd_pair_base(*m, *n, *degree)?,
        Step::SimpleZeros { count, degree } => constructions::simple_zero_cover(*count, *degree)?,
        Step::Searched { stratum, parity, admissible_for, columns, degree } => {
            searched_base(stratum, *parity, *admissible_for, *columns, *degree)?
        }
        other => {
            return Err(Error::InvalidParameters(format!("script must start with a base surface, not {:?}", other)))
        }
    };
    for step in rest {
        s = match step {
            Step::AddEvenZero { k } => add_even_zero(&s, *k)?,
            Step::AddOddPair { k, kp } => add_odd_pair(&s, *k, *kp)?,
            other => return Err(Error::InvalidParameters(format!("base step {:?} in the middle of a script", other))),
        };
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub primitive: LatticeBasis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<SpinEvidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<InvolutionWitness>,
    /// Number of rotations by π examined when claiming there is no
    /// hyperelliptic involution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations_checked: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub surface: GridSurface,
    pub degree: usize,
    pub stratum: StratumSig,
    pub component: ComponentLabel,
    pub evidence: Evidence,
    pub script: Vec<Step>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {}", e)))
    }
}

/// Classifies `s` and gathers the evidence for its component.
pub fn certify(s: GridSurface, script: Vec<Step>) -> Result<Certificate> {
    let stratum = s.stratum()?;
    let table = components_of(&stratum)?;
    let component = classify_component(&s)?;
    let (_, primitive) = is_primitive(&s)?;
    let mut ev = Evidence { primitive, spin: None, involution: None, rotations_checked: None, note: None };
    match component {
        ComponentLabel::Hyperelliptic => ev.involution = hyperelliptic_witness(&s)?,
        ComponentLabel::EvenSpin | ComponentLabel::OddSpin => {
            ev.spin = Some(spin_parity(&s)?);
            if table.contains(&ComponentLabel::Hyperelliptic) {
                ev.rotations_checked = Some(rotations_by_pi(&s).len());
            }
        }
        ComponentLabel::NonHyperelliptic => ev.rotations_checked = Some(rotations_by_pi(&s).len()),
        ComponentLabel::Unique => ev.note = Some(format!("the stratum {} is connected", stratum)),
    }
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        degree: s.degree(),
        surface: s,
        stratum,
        component,
        evidence: ev,
        script,
    })
}

fn minimal_kind(c: ComponentLabel) -> MinimalKind {
    match c {
        ComponentLabel::EvenSpin => MinimalKind::Even,
        ComponentLabel::OddSpin => MinimalKind::Odd,
        _ => MinimalKind::Hyp,
    }
}

/// Spin parity of the hyperelliptic component of `(2g-2)` or `(g-1,g-1)`.
fn hyp_parity(g: usize) -> u8 {
    (g.div_ceil(2) % 2) as u8
}

/// Odd parts paired largest with next largest, as `(k, kp)`.
fn odd_pairs(odd: &[usize]) -> Vec<Step> {
    odd.chunks(2).map(|p| Step::AddOddPair { k: p[0].div_ceil(2), kp: p[1].div_ceil(2) }).collect()
}

fn search_is_small(d: usize, columns: usize) -> bool {
    (1..=d).product::<usize>().checked_pow(columns as u32 + 1).is_some_and(|x| x <= 2_000_000)
}

/// Candidate scripts in order of preference.
fn plans(alpha: &StratumSig, comp: ComponentLabel, d: usize) -> Result<Vec<Vec<Step>>> {
    let a = alpha.alpha();
    let n = a.len();
    if n == 0 {
        return Ok(vec![vec![Step::Torus]]);
    }
    let g = alpha.genus();
    if n == 1 {
        return Ok(vec![vec![Step::Minimal { kind: minimal_kind(comp), genus: g, degree: d }]]);
    }
    if n == 2 && a[0] == a[1] {
        let kind = match comp {
            ComponentLabel::Hyperelliptic | ComponentLabel::Unique => PairKind::Hyp,
            ComponentLabel::EvenSpin => PairKind::NonHypEven,
            _ => PairKind::NonHyp,
        };
        return Ok(vec![vec![Step::EqualPair { kind, genus: g, degree: d }]]);
    }
    let top = a[n - 1];
    let g0 = top / 2 + 1;
    let mut rest: Vec<usize> = a[..n - 1].to_vec();
    rest.reverse();
    let mut out = Vec::new();
    if alpha.all_even() {
        let spin = match comp {
            ComponentLabel::EvenSpin => 0,
            ComponentLabel::OddSpin => 1,
            other => return Err(Error::InvalidComponent { component: other.to_string(), stratum: alpha.to_string() }),
        };
        let th = theta(alpha, spin)?;
        let tail: Vec<Step> = rest.iter().map(|&x| Step::AddEvenZero { k: x / 2 }).collect();
        let mut bases = Vec::new();
        if th == 0 && g0 >= 4 {
            bases.push(Step::Minimal { kind: MinimalKind::Even, genus: g0, degree: d });
        }
        if th == 1 && g0 >= 3 {
            bases.push(Step::Minimal { kind: MinimalKind::Odd, genus: g0, degree: d });
        }
        if hyp_parity(g0) == th {
            bases.push(Step::Minimal { kind: MinimalKind::Hyp, genus: g0, degree: d });
        }
        for b in bases {
            out.push(std::iter::once(b).chain(tail.iter().cloned()).collect());
        }
        // A base with the two largest zeros when they are equal.
        if rest[0] == top {
            let pair = StratumSig::new(vec![top, top])?;
            let pair_th = (th + (top / 2) as u8) % 2;
            let pg = top + 1;
            let tail2: Vec<Step> = tail[1..].to_vec();
            let mut kinds = Vec::new();
            if hyp_parity(pg) == pair_th {
                kinds.push(PairKind::Hyp);
            }
            if pg % 2 == 1 {
                kinds.push(if pair_th == 1 { PairKind::NonHyp } else { PairKind::NonHypEven });
            }
            for kind in kinds {
                if kind == PairKind::NonHypEven && pg < 5 {
                    continue;
                }
                out.push(
                    std::iter::once(Step::EqualPair { kind, genus: pg, degree: d })
                        .chain(tail2.iter().cloned())
                        .collect(),
                );
            }
            if let Some(Step::AddEvenZero { k }) = tail2.first() {
                if search_is_small(d, 2) {
                    out.push(
                        std::iter::once(Step::Searched {
                            stratum: pair,
                            parity: pair_th,
                            admissible_for: *k,
                            columns: 2,
                            degree: d,
                        })
                        .chain(tail2.iter().cloned())
                        .collect(),
                    );
                }
            }
        }
        if search_is_small(d, 2) {
            let base = StratumSig::new(vec![top])?;
            if let Some(Step::AddEvenZero { k }) = tail.first() {
                out.push(
                    std::iter::once(Step::Searched {
                        stratum: base,
                        parity: th,
                        admissible_for: *k,
                        columns: 2,
                        degree: d,
                    })
                    .chain(tail.iter().cloned())
                    .collect(),
                );
            }
        }
        // Last resort: search the target stratum itself, one branch point per zero.
        if search_is_small(d, n) {
            out.push(vec![Step::Searched {
                stratum: alpha.clone(),
                parity: spin,
                admissible_for: 0,
                columns: n,
                degree: d,
            }]);
        }
        return Ok(out);
    }
    if a.iter().all(|&x| x == 1) {
        return Ok(vec![vec![Step::SimpleZeros { count: n, degree: d }]]);
    }
    let mut odd: Vec<usize> = a.iter().copied().filter(|x| x % 2 == 1).collect();
    odd.reverse();
    if top.is_multiple_of(2) {
        let even: Vec<Step> = rest.iter().filter(|x| *x % 2 == 0).map(|&x| Step::AddEvenZero { k: x / 2 }).collect();
        let tail: Vec<Step> = odd_pairs(&odd).into_iter().chain(even).collect();
        let mut bases = vec![Step::Minimal { kind: MinimalKind::Odd, genus: g0, degree: d }];
        if g0 == 2 {
            // O_2 is a genus two surface in (2) but not one of the named components.
            bases = vec![Step::Minimal { kind: MinimalKind::Hyp, genus: 2, degree: d }];
        }
        if g0 >= 4 {
            bases.push(Step::Minimal { kind: MinimalKind::Even, genus: g0, degree: d });
        }
        if g0 >= 3 {
            bases.push(Step::Minimal { kind: MinimalKind::Hyp, genus: g0, degree: d });
        }
        for b in bases {
            out.push(std::iter::once(b).chain(tail.iter().cloned()).collect());
        }
        return Ok(out);
    }
    // The largest zero has odd order: pair it with the next odd zero in the base.
    let m = odd[0].div_ceil(2);
    let nn = odd[1].div_ceil(2);
    let even: Vec<Step> = rest.iter().filter(|x| *x % 2 == 0).map(|&x| Step::AddEvenZero { k: x / 2 }).collect();
    let tail: Vec<Step> = odd_pairs(&odd[2..]).into_iter().chain(even).collect();
    out.push(std::iter::once(Step::OddPairBase { m, n: nn, degree: d }).chain(tail).collect());
    Ok(out)
}

/// A certified primitive degree `d` cover in the given component.
pub fn build(alpha: &StratumSig, component: ComponentLabel, d: usize) -> Result<Certificate> {
    let table = components_of(alpha)?;
    if !table.contains(&component) {
        return Err(Error::InvalidComponent { component: component.to_string(), stratum: alpha.to_string() });
    }
    if d <= alpha.max_order() {
        return Err(Error::DegreeTooSmall { degree: d, max_order: alpha.max_order() });
    }
    if alpha.is_empty() && d != 1 {
        return Err(Error::NotRealizable(format!(
            "an unbranched cover of degree {} is never primitive; only degree 1 works",
            d
        )));
    }
    let mut failures = Vec::new();
    for script in plans(alpha, component, d)? {
        let attempt = replay(&script).and_then(|s| certify(s, script.clone()));
        match attempt {
            Ok(cert) if cert.component == component && cert.stratum == *alpha && cert.degree == d => {
                let report = verify(&cert);
                if report.ok {
                    return Ok(cert);
                }
                failures.push(format!("{:?}: {}", script[0], report.problems.join("; ")));
            }
            Ok(cert) => failures.push(format!("{:?}: landed in {} {}", script[0], cert.stratum, cert.component)),
            Err(e) => failures.push(format!("{:?}: {}", script[0], e)),
        }
    }
    Err(Error::NotRealizable(format!(
        "no construction reached {} {} in degree {}: {}",
        alpha,
        component,
        d,
        failures.join(" | ")
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Rechecks every claim of a certificate from its surface, and replays the
/// script.
pub fn verify(cert: &Certificate) -> VerifyReport {
    let mut problems = Vec::new();
    if let Err(e) = verify_into(cert, &mut problems) {
        problems.push(format!("error while checking: {}", e));
    }
    VerifyReport { ok: problems.is_empty(), problems }
}

fn verify_into(cert: &Certificate, problems: &mut Vec<String>) -> Result<()> {
    let s = &cert.surface;
    if cert.schema_version != SCHEMA_VERSION {
        problems.push(format!("schema version {} (expected {})", cert.schema_version, SCHEMA_VERSION));
    }
    if s.degree() != cert.degree {
        problems.push(format!("degree: claimed {}, surface has {}", cert.degree, s.degree()));
    }
    let st = s.stratum()?;
    if st != cert.stratum {
        problems.push(format!("stratum: claimed {}, surface has {}", cert.stratum, st));
    }
    if st.max_order() >= s.degree() && !st.is_empty() {
        problems.push(format!("zero of order {} in degree {}", st.max_order(), s.degree()));
    }
    let (prim, lat) = is_primitive(s)?;
    if !prim {
        problems.push("the period lattice is not the unit lattice".into());
    }
    if lat != cert.evidence.primitive {
        problems.push("primitivity evidence differs from the recomputed lattice".into());
    }
    let table = components_of(&st)?;
    if !table.contains(&cert.component) {
        problems.push(format!("{} is not a component of {}", cert.component, st));
    }
    let actual = classify_component(s)?;
    if actual != cert.component {
        problems.push(format!("component: claimed {}, surface is {}", cert.component, actual));
    }
    let ev = &cert.evidence;
    match cert.component {
        ComponentLabel::Hyperelliptic => match &ev.involution {
            Some(w) if check_involution_witness(s, w)? => {}
            Some(_) => problems.push("involution witness does not check".into()),
            None => problems.push("missing involution witness".into()),
        },
        ComponentLabel::EvenSpin | ComponentLabel::OddSpin => {
            let want = if cert.component == ComponentLabel::EvenSpin { 0 } else { 1 };
            match &ev.spin {
                Some(sp) if check_spin_evidence(s, sp)? && sp.parity == want => {}
                Some(_) => problems.push("spin evidence does not check".into()),
                None => problems.push("missing spin evidence".into()),
            }
        }
        _ => {}
    }
    if matches!(cert.component, ComponentLabel::EvenSpin | ComponentLabel::OddSpin | ComponentLabel::NonHyperelliptic)
        && table.contains(&ComponentLabel::Hyperelliptic)
    {
        if hyperelliptic_witness(s)?.is_some() {
            problems.push("surface has a hyperelliptic involution".into());
        }
        if ev.rotations_checked != Some(rotations_by_pi(s).len()) {
            problems.push("rotation count in the evidence is wrong".into());
        }
    }
    if !cert.script.is_empty() {
        match replay(&cert.script) {
            Ok(r) if r.canonical_form() == s.canonical_form() => {}
            Ok(_) => problems.push("replaying the script gives a different surface".into()),
            Err(e) => problems.push(format!("script does not replay: {}", e)),
        }
    }
    Ok(())
}
