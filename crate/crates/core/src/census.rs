//! Brute-force census of all origamis of a given degree, used as an oracle
//! for the classification and the constructions.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{classify_component, hyperelliptic_witness, is_primitive, spin_parity};
use crate::perm::{all_permutations, is_transitive, Perm};
use crate::surface::{GridSurface, StratumSig};
use crate::targeting::{components_of, ComponentLabel};

pub const DEFAULT_GUARD: usize = 7;
pub const GUARD_ENV: &str = "ORIGAMI_FORGE_CENSUS_GUARD";

/// The degree guard, from the environment when set.
pub fn guard() -> usize {
    std::env::var(GUARD_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_GUARD)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub degree: usize,
    /// Canonical representative in cycle notation.
    pub h: String,
    pub v: String,
    pub stratum: StratumSig,
    pub genus: usize,
    pub component: ComponentLabel,
    pub primitive: bool,
    /// A rotation by π with `2g + 2` fixed points exists (exchanging the
    /// zeros when there are exactly two).
    pub hyperelliptic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<u8>,
    /// Number of labelled pairs `(h, v)` in the conjugacy class.
    pub class_size: u64,
}

impl CensusEntry {
    pub fn surface(&self) -> Result<GridSurface> {
        GridSurface::from_permutations(
            &Perm::parse_cycles(&self.h, Some(self.degree))?,
            &Perm::parse_cycles(&self.v, Some(self.degree))?,
        )
    }
}

type Key = (Vec<usize>, Vec<usize>);

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Integer partitions of `n`, largest part first.
pub fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One permutation per cycle type, cycles on consecutive points.
fn class_representatives(d: usize) -> Result<Vec<Perm>> {
    partitions(d, d)
        .into_iter()
        .map(|parts| {
            let mut next = 1;
            let cycles: Vec<Vec<usize>> = parts
                .iter()
                .map(|&len| {
                    let c: Vec<usize> = (next..next + len).collect();
                    next += len;
                    c
                })
                .collect();
            Perm::from_cycles(d, &cycles)
        })
        .collect()
}

/// Number of transitive pairs in `S_d × S_d`, by inclusion–exclusion on the
/// orbit of the point 1.
pub fn transitive_pair_count(d: usize) -> u128 {
    let mut t = vec![0u128; d + 1];
    let fact: Vec<u128> = (0..=d)
        .scan(1u128, |f, i| {
            if i > 0 {
                *f *= i as u128;
            }
            Some(*f)
        })
        .collect();
    let binom = |n: usize, k: usize| fact[n] / (fact[k] * fact[n - k]);
    for n in 1..=d {
        let mut x = fact[n] * fact[n];
        for k in 1..n {
            x -= binom(n - 1, k - 1) * t[k] * fact[n - k] * fact[n - k];
        }
        t[n] = x;
    }
    t[d]
}

/// Canonical keys of all transitive pairs of degree `d` with the size of
/// their automorphism group.
fn canonical_classes(d: usize) -> Result<BTreeMap<Key, usize>> {
    let reps = class_representatives(d)?;
    let all: Vec<Perm> = all_permutations(d).into_iter().map(Perm::from_images).collect::<Result<_>>()?;
    let maps: Vec<BTreeMap<Key, usize>> = reps
        .par_iter()
        .map(|h| {
            let mut m = BTreeMap::new();
            for v in &all {
                if !is_transitive(h, v) {
                    continue;
                }
                let s = GridSurface::from_permutations(h, v)?;
                let (canon, aut) = s.canonical_form_with_symmetry();
                let (ch, cv) = canon.to_permutations().expect("unrefined surface");
                m.insert((ch.images().to_vec(), cv.images().to_vec()), aut);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for m in maps {
        out.extend(m);
    }
    Ok(out)
}

fn classify(d: usize, key: &Key, aut: usize) -> Result<CensusEntry> {
    let h = Perm::from_images(key.0.clone())?;
    let v = Perm::from_images(key.1.clone())?;
    let s = GridSurface::from_permutations(&h, &v)?;
    let stratum = s.stratum()?;
    let spin = if stratum.all_even() && !stratum.is_empty() { Some(spin_parity(&s)?.parity) } else { None };
    let hyperelliptic = !stratum.is_empty() && hyperelliptic_witness(&s)?.is_some();
    Ok(CensusEntry {
        degree: d,
        h: h.to_cycle_string(),
        v: v.to_cycle_string(),
        genus: stratum.genus(),
        component: classify_component(&s)?,
        primitive: is_primitive(&s)?.0,
        hyperelliptic,
        spin,
        class_size: factorial(d) / aut as u64,
        stratum,
    })
}

/// Every origami of degree `d` up to relabelling, sorted by canonical key.
pub fn enumerate(d: usize) -> Result<Vec<CensusEntry>> {
    enumerate_resuming(d, guard(), &[])
}

/// Like [`enumerate`], reusing the classification of entries already in
/// `previous` (for example read back from a partial census file).
pub fn enumerate_resuming(d: usize, guard: usize, previous: &[CensusEntry]) -> Result<Vec<CensusEntry>> {
    if d == 0 {
        return Err(Error::InvalidParameters("degree must be positive".into()));
    }
    if d > guard {
        return Err(Error::CensusGuard { degree: d, guard });
    }
    let known: BTreeMap<(String, String), &CensusEntry> =
        previous.iter().filter(|e| e.degree == d).map(|e| ((e.h.clone(), e.v.clone()), e)).collect();
    let classes: Vec<(Key, usize)> = canonical_classes(d)?.into_iter().collect();
    classes
        .par_iter()
        .map(|(key, aut)| {
            let h = Perm::from_images(key.0.clone())?.to_cycle_string();
            let v = Perm::from_images(key.1.clone())?.to_cycle_string();
            match known.get(&(h, v)) {
                Some(e) => Ok((*e).clone()),
                None => classify(d, key, *aut),
            }
        })
        .collect()
}

pub fn write_ndjson<W: Write>(entries: &[CensusEntry], mut w: W) -> Result<()> {
    for e in entries {
        let line = serde_json::to_string(e).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(w, "{}", line).map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(())
}

/// Reads entries back; a truncated last line (an interrupted run) is
/// skipped.
pub fn read_ndjson<R: BufRead>(r: R) -> Result<Vec<CensusEntry>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(e) = serde_json::from_str::<CensusEntry>(&line) {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub degree: usize,
    pub ok: bool,
    pub lines: Vec<CheckLine>,
}

/// Strata whose origamis (one branch point) fit in degree `d`: each zero of
/// order `a` uses `a + 1` squares around the branch point.
pub fn strata_fitting(d: usize) -> Vec<StratumSig> {
    let mut out = Vec::new();
    for total in (2..d).step_by(2) {
        for p in partitions(total, total) {
            if p.iter().map(|a| a + 1).sum::<usize>() <= d {
                out.push(StratumSig::new(p).expect("even total"));
            }
        }
    }
    out
}

/// Component label read off the invariants alone, without the table.
fn empirical_label(e: &CensusEntry) -> &'static str {
    let a = e.stratum.alpha();
    let special = a.len() == 1 || (a.len() == 2 && a[0] == a[1]);
    match e.spin {
        _ if special && e.hyperelliptic => "hyp",
        Some(0) => "even",
        Some(_) => "odd",
        None if a.len() == 2 && a[0] == a[1] => "nonhyp",
        None => "unique",
    }
}

/// Checks the census against degree bounds, existence and the component
/// table.
pub fn cross_validate(d: usize, entries: &[CensusEntry]) -> CrossValidation {
    let mut lines = Vec::new();
    let mut push =
        |check: &str, ok: bool, detail: String| lines.push(CheckLine { check: check.to_string(), ok, detail });

    let total: u128 = entries.iter().map(|e| e.class_size as u128).sum();
    let expected = transitive_pair_count(d);
    push(
        "count",
        total == expected,
        format!("{} classes, {} labelled pairs, {} transitive pairs expected", entries.len(), total, expected),
    );

    let bad: Vec<String> = entries
        .iter()
        .filter(|e| e.primitive && !e.stratum.is_empty() && e.stratum.max_order() >= d)
        .map(|e| format!("{} {}", e.h, e.v))
        .collect();
    push("degree-bound", bad.is_empty(), format!("{} primitive entries with a zero of order >= {}", bad.len(), d));

    let mut realized: BTreeMap<StratumSig, BTreeSet<ComponentLabel>> = BTreeMap::new();
    for e in entries.iter().filter(|e| e.primitive) {
        realized.entry(e.stratum.clone()).or_default().insert(e.component);
    }
    let mut missing = Vec::new();
    let fitting = strata_fitting(d);
    for st in &fitting {
        for c in components_of(st).unwrap_or_default() {
            if !realized.get(st).is_some_and(|r| r.contains(&c)) {
                missing.push(format!("{} {}", st, c));
            }
        }
    }
    push(
        "existence",
        missing.is_empty(),
        if missing.is_empty() {
            format!("every component of the {} strata fitting in degree {} has a primitive entry", fitting.len(), d)
        } else {
            format!("no primitive entry for {}", missing.join(", "))
        },
    );

    let mut by_stratum: BTreeMap<StratumSig, Vec<&CensusEntry>> = BTreeMap::new();
    for e in entries.iter().filter(|e| !e.stratum.is_empty()) {
        by_stratum.entry(e.stratum.clone()).or_default().push(e);
    }
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for (st, es) in &by_stratum {
        let table = components_of(st).unwrap_or_default();
        let names: BTreeSet<&str> = table.iter().map(|c| c.name()).collect();
        let found: BTreeSet<&str> = es.iter().map(|e| empirical_label(e)).collect();
        let complete = fitting.contains(st);
        let ok = if table == [ComponentLabel::Unique] {
            found.len() == 1
        } else {
            found.is_subset(&names) && (!complete || found == names)
        };
        if !ok {
            problems.push(format!("{}: found {:?}, table {:?}", st, found, names));
        }
        for e in es.iter().filter(|e| e.hyperelliptic && empirical_label(e) == "hyp") {
            if let Some(p) = e.spin {
                if p as usize != st.genus().div_ceil(2) % 2 {
                    problems.push(format!("{}: hyperelliptic entry {} {} has parity {}", st, e.h, e.v, p));
                }
            }
        }
        let multi = table.len() > 1;
        let special = st.len() == 1 || (st.len() == 2 && st.alpha()[0] == st.alpha()[1]);
        if multi && !special && es.iter().any(|e| e.hyperelliptic) {
            problems.push(format!("{}: hyperelliptic entry outside the minimal and equal-pair strata", st));
        }
        summary.push(format!("{} {:?}", st, found));
    }
    push("partition", problems.is_empty(), if problems.is_empty() { summary.join("; ") } else { problems.join("; ") });

    let ok = lines.iter().all(|l| l.ok);
    CrossValidation { degree: d, ok, lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_counts() {
        // Independent count by brute force for small degrees.
        for d in 1..=4 {
            let all: Vec<Perm> = all_permutations(d).into_iter().map(|p| Perm::from_images(p).unwrap()).collect();
            let brute =
                all.iter().flat_map(|h| all.iter().map(move |v| (h, v))).filter(|(h, v)| is_transitive(h, v)).count();
            assert_eq!(transitive_pair_count(d), brute as u128, "d={}", d);
        }
        assert_eq!(transitive_pair_count(1), 1);
        assert_eq!(transitive_pair_count(2), 3);
    }

    #[test]
    fn small_degrees() {
        let e1 = enumerate(1).unwrap();
        assert_eq!(e1.len(), 1);
        assert_eq!(e1[0].genus, 1);
        assert!(enumerate(2).unwrap().iter().all(|e| e.genus == 1));
        let e3 = enumerate(3).unwrap();
        let h2: Vec<_> = e3.iter().filter(|e| e.stratum.alpha() == [2]).collect();
        assert_eq!(h2.len(), 3);
        assert!(h2.iter().all(|e| e.primitive && e.hyperelliptic && e.class_size == 6));
        for d in 1..=4 {
            let es = enumerate(d).unwrap();
            let r = cross_validate(d, &es);
            assert!(r.ok, "{:?}", r);
        }
    }

    #[test]
    fn unbranched_covers_counted_by_sublattices() {
        // Transitive commuting pairs correspond to index-d sublattices of Z^2
        // with a labelling: (d-1)! * sigma(d) of them.
        for d in 1..=5usize {
            let sigma: u64 = (1..=d as u64).filter(|k| (d as u64).is_multiple_of(*k)).sum();
            let got: u64 = enumerate(d).unwrap().iter().filter(|e| e.genus == 1).map(|e| e.class_size).sum();
            assert_eq!(got, factorial(d - 1) * sigma, "d={}", d);
        }
    }

    #[test]
    fn guard_and_resume() {
        assert_eq!(enumerate_resuming(9, 7, &[]).unwrap_err(), Error::CensusGuard { degree: 9, guard: 7 });
        let es = enumerate(4).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&es[..5], &mut buf).unwrap();
        buf.extend_from_slice(b"{\"degree\":4,\"h\":");
        let partial = read_ndjson(&buf[..]).unwrap();
        assert_eq!(partial.len(), 5);
        assert_eq!(enumerate_resuming(4, 7, &partial).unwrap(), es);
    }

    #[test]
    fn fitting_strata() {
        let s: Vec<String> = strata_fitting(5).iter().map(|s| s.to_string()).collect();
        assert_eq!(s, vec!["(2)", "(1,1)", "(4)"]);
    }
}
