//! Covers produced by the explicit constructions (and by `build`) are found
//! in the brute-force census with the same classification.

use std::collections::BTreeMap;

use origami_forge::census::{self, CensusEntry, DEFAULT_GUARD};
use origami_forge::constructions::{
    equal_pair_cover, minimal_cover, odd_pair_base, simple_zero_cover, MinimalKind, PairKind,
};
use origami_forge::invariants::{classify_component, hyperelliptic_witness, is_primitive};
use origami_forge::perm::Perm;
use origami_forge::surface::GridSurface;
use origami_forge::targeting::{build, components_of};

type Census = BTreeMap<usize, BTreeMap<(String, String), CensusEntry>>;

fn census_upto(d: usize) -> Census {
    (1..=d)
        .map(|n| {
            let entries = census::enumerate_resuming(n, d, &[]).unwrap();
            (n, entries.into_iter().map(|e| ((e.h.clone(), e.v.clone()), e)).collect())
        })
        .collect()
}

fn find<'a>(census: &'a Census, h: &Perm, v: &Perm) -> Option<&'a CensusEntry> {
    let canon = GridSurface::from_permutations(h, v).unwrap().canonical_form();
    let (ch, cv) = canon.to_permutations().unwrap();
    let found = census.get(&h.degree())?.get(&(ch.to_cycle_string(), cv.to_cycle_string()));
    Some(found.unwrap_or_else(|| panic!("{} {} missing from the census", ch, cv)))
}

enum Seen<'a> {
    /// The cover itself is a one-point origami of the same degree.
    Unit(&'a CensusEntry),
    /// Its zeros lie over several grid vertices; the entry is the same flat
    /// surface seen as a cover of the torus of one grid cell, whose degree
    /// is the number of cells.
    Fine(&'a CensusEntry),
    TooBig,
}

fn lookup<'a>(census: &'a Census, s: &GridSurface) -> Seen<'a> {
    if let Some((h, v)) = s.unit_permutations() {
        return find(census, &h, &v).map_or(Seen::TooBig, Seen::Unit);
    }
    let h = Perm::from_images(s.rights().to_vec()).unwrap();
    let v = Perm::from_images(s.tops().to_vec()).unwrap();
    find(census, &h, &v).map_or(Seen::TooBig, Seen::Fine)
}

/// Stratum, component and hyperellipticity do not change when the surface
/// is rescaled; primitivity is compared only for one-point covers.
fn assert_same(what: &str, s: &GridSurface, seen: &Seen) -> bool {
    let (e, unit) = match seen {
        Seen::Unit(e) => (e, true),
        Seen::Fine(e) => (e, false),
        Seen::TooBig => return false,
    };
    assert_eq!(e.stratum, s.stratum().unwrap(), "{}", what);
    assert_eq!(e.component, classify_component(s).unwrap(), "{}", what);
    assert_eq!(e.hyperelliptic, hyperelliptic_witness(s).unwrap().is_some(), "{}", what);
    if unit {
        assert_eq!(e.primitive, is_primitive(s).unwrap().0, "{}", what);
    }
    true
}

fn construction_outputs(max_d: usize) -> Vec<(String, GridSurface)> {
    let mut out = Vec::new();
    for g in 2..=max_d {
        for d in 1..=max_d {
            for kind in [MinimalKind::Hyp, MinimalKind::Odd, MinimalKind::Even] {
                if let Ok(s) = minimal_cover(kind, g, d) {
                    out.push((format!("minimal {:?} g={} d={}", kind, g, d), s));
                }
            }
            for kind in [PairKind::Hyp, PairKind::NonHyp, PairKind::NonHypEven] {
                if let Ok(s) = equal_pair_cover(kind, g, d) {
                    out.push((format!("pair {:?} g={} d={}", kind, g, d), s));
                }
            }
        }
    }
    for m in 2..=max_d {
        for n in 1..=m {
            for d in 1..=max_d {
                if let Ok(s) = odd_pair_base(m, n, d) {
                    out.push((format!("odd pair base {} {} d={}", m, n, d), s));
                }
            }
        }
    }
    for count in (2..=2 * max_d).step_by(2) {
        for d in 1..=max_d {
            if let Ok(s) = simple_zero_cover(count, d) {
                out.push((format!("simple zeros {} d={}", count, d), s));
            }
        }
    }
    out
}

#[test]
fn constructions_appear_in_the_census() {
    let census = census_upto(DEFAULT_GUARD);
    let outputs = construction_outputs(DEFAULT_GUARD);
    let (mut matched, mut unit) = (0, 0);
    for (what, s) in &outputs {
        assert!(s.degree() <= DEFAULT_GUARD);
        let seen = lookup(&census, s);
        unit += matches!(seen, Seen::Unit(_)) as usize;
        matched += assert_same(what, s, &seen) as usize;
    }
    eprintln!("{} of {} outputs found in the census, {} at their own degree", matched, outputs.len(), unit);
    assert!(outputs.len() >= 40, "only {} outputs", outputs.len());
    assert!(unit >= 14 && matched >= 20, "{} unit and {} total matches", unit, matched);
}

#[test]
fn built_covers_appear_in_the_census() {
    let census = census_upto(6);
    let mut matched = 0;
    for st in census::strata_fitting(6) {
        for comp in components_of(&st).unwrap() {
            for d in st.max_order() + 1..=6 {
                let cert = build(&st, comp, d).unwrap();
                let what = format!("{} {} d={}", st, comp, d);
                if assert_same(&what, &cert.surface, &lookup(&census, &cert.surface)) {
                    assert_eq!(classify_component(&cert.surface).unwrap(), cert.component, "{}", what);
                    matched += 1;
                }
            }
        }
    }
    assert!(matched > 0);
}

#[test]
fn hyperelliptic_entries_only_in_special_strata() {
    for d in 2..=6 {
        for e in census::enumerate_resuming(d, d, &[]).unwrap() {
            if !e.hyperelliptic {
                continue;
            }
            let a = e.stratum.alpha();
            let special = a.len() == 1 || (a.len() == 2 && a[0] == a[1]);
            let several = components_of(&e.stratum).unwrap().len() > 1;
            assert!(special || !several, "{} {} in {}", e.h, e.v, e.stratum);
        }
    }
}
