//! Permutations of `{1..d}` and the commutator/zero-order correspondence.
//!
//! Points are stored 0-indexed; every text format (cycle notation, JSON image
//! arrays) is 1-indexed.
//!
//! Composition is apply-right-first: `p.compose(&q)` maps `i` to `p(q(i))`.
//! The commutator is `[h, v] = h v h⁻¹ v⁻¹` under the same convention.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

/// Multiset of cycle lengths, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Zero orders encoded by the nontrivial cycles: each cycle of length
    /// `l > 1` contributes `l - 1`. Sorted ascending.
    pub fn zero_orders(&self) -> Vec<usize> {
        let mut alpha: Vec<usize> = self.0.iter().filter(|&&l| l > 1).map(|l| l - 1).collect();
        alpha.sort_unstable();
        alpha
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree).collect() }
    }

    /// Build from 0-indexed images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::InvalidPerm("degree must be positive".into()));
        }
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::InvalidPerm(format!("{:?} is not a bijection", images)));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Build from 1-indexed images, the JSON array format.
    pub fn from_one_indexed(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPerm("points are 1-indexed".into()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    /// Build from disjoint cycles given with 1-indexed points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::InvalidPerm(format!("point {} out of range 1..={}", p, degree)));
                }
                if used[p - 1] {
                    return Err(Error::InvalidPerm(format!("point {} repeated", p)));
                }
                used[p - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = next - 1;
            }
        }
        Ok(Perm { images })
    }

    /// Parse cycle notation such as `"(1,2)(3,4)"` or `"(1 3 5)"`. Fixed
    /// points may be omitted; the degree is `degree` if given, else the
    /// largest point mentioned.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {:?}", text)))?;
            let close = open.find(')').ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {:?}", text)))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{:?}: {}", t, e))))
                .collect::<Result<Vec<_>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = open[close + 1..].trim_start();
        }
        let max_point = cycles.iter().flatten().copied().max().unwrap_or(0);
        let d = match degree {
            Some(d) if d < max_point => return Err(Error::Parse(format!("point {} exceeds degree {}", max_point, d))),
            Some(d) => d,
            None => max_point.max(1),
        };
        Self::from_cycles(d, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-indexed image of a 0-indexed point.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_indexed(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm { images: other.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Perm { images: inv }
    }

    /// `r ∘ self ∘ r⁻¹`.
    pub fn conjugate(&self, r: &Perm) -> Result<Perm> {
        r.compose(self)?.compose(&r.inverse())
    }

    /// Disjoint cycles, 0-indexed, each starting at its smallest point,
    /// ordered by that point. Fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(Vec::len).collect())
    }

    /// Cycle notation with 1-indexed points; fixed points omitted, `()` for
    /// the identity.
    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                format!("({})", pts.join(","))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_indexed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_one_indexed(&images).map_err(serde::de::Error::custom)
    }
}

/// `h v h⁻¹ v⁻¹`.
/// All permutations of `0..n` as image vectors, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("a larger entry follows");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

pub fn commutator(h: &Perm, v: &Perm) -> Result<Perm> {
    h.compose(v)?.compose(&h.inverse())?.compose(&v.inverse())
}

/// Whether `⟨h, v⟩` acts transitively on the points.
pub fn is_transitive(h: &Perm, v: &Perm) -> bool {
    if h.degree() != v.degree() {
        return false;
    }
    let d = h.degree();
    let (hi, vi) = (h.inverse(), v.inverse());
    let mut seen = vec![false; d];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for j in [h.apply(i), v.apply(i), hi.apply(i), vi.apply(i)] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, d: usize) -> Perm {
        Perm::parse_cycles(text, Some(d)).unwrap()
    }

    #[test]
    fn enumerates_all_permutations() {
        let all = all_permutations(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], vec![0, 1, 2, 3]);
        assert_eq!(all[23], vec![3, 2, 1, 0]);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
        assert_eq!(all_permutations(0).len(), 1);
    }

    #[test]
    fn compose_convention() {
        // apply (2 3) first, then (1 2)
        assert_eq!(p("(1,2)", 3).compose(&p("(2,3)", 3)).unwrap(), p("(1,2,3)", 3));
        let q = p("(1,3,2)(4,5)", 5);
        assert_eq!(Perm::identity(5).compose(&q).unwrap(), q);
        assert!(q.compose(&q.inverse()).unwrap().is_identity());
        assert_eq!(p("(1,2)", 2).compose(&p("(1,2)", 3)), Err(Error::DegreeMismatch(2, 3)));
    }

    #[test]
    fn commutator_examples() {
        let c = commutator(&p("(1,2)", 3), &p("(2,3)", 3)).unwrap();
        assert_eq!(c.cycle_type(), CycleType::new(vec![3]));
        let c = commutator(&p("(1,3,5)", 5), &p("(1,2)(3,4)", 5)).unwrap();
        assert_eq!(c.cycle_type(), CycleType::new(vec![5]));
        let h = p("(1,2,3)(4,5)", 5);
        assert!(commutator(&h, &h).unwrap().is_identity());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(p("(1,2,3)(4,5)", 5).cycle_type().parts(), &[3, 2]);
        assert_eq!(p("(1,2,3)(4,5)", 7).cycle_type().zero_orders(), vec![1, 2]);
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&p("(1,2)", 2), &Perm::identity(2)));
        assert!(!is_transitive(&p("(1,2)", 3), &p("(1,2)", 3)));
        assert!(is_transitive(&p("(1,2)(3,4)", 5), &p("(2,3)(4,5)", 5)));
    }

    #[test]
    fn text_formats() {
        let q = p("(1, 3,5)(2 4)", 6);
        assert_eq!(q.to_cycle_string(), "(1,3,5)(2,4)");
        assert_eq!(q.one_indexed(), vec![3, 4, 5, 2, 1, 6]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[3,4,5,2,1,6]");
        let back: Perm = serde_json::from_str("[3,4,5,2,1,6]").unwrap();
        assert_eq!(back, q);
        assert_eq!(Perm::identity(3).to_cycle_string(), "()");
        assert_eq!(Perm::parse_cycles("()", Some(3)).unwrap(), Perm::identity(3));
        assert!(Perm::parse_cycles("(1,2)(2,3)", None).is_err());
        assert!(Perm::parse_cycles("(1,2", None).is_err());
        assert!(Perm::parse_cycles("(1,5)", Some(3)).is_err());
        assert!(serde_json::from_str::<Perm>("[1,1]").is_err());
    }

    fn perm_strategy(d: usize) -> impl Strategy<Value = Perm> {
        Just((0..d).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn conjugation_preserves_cycle_type(
            (a, r) in (1usize..9).prop_flat_map(|d| (perm_strategy(d), perm_strategy(d)))
        ) {
            prop_assert_eq!(a.conjugate(&r).unwrap().cycle_type(), a.cycle_type());
        }

        #[test]
        fn transitive_pairs_have_even_divisor_sum(
            (h, v) in (1usize..8).prop_flat_map(|d| (perm_strategy(d), perm_strategy(d)))
        ) {
            if is_transitive(&h, &v) {
                let total: usize = commutator(&h, &v).unwrap().cycle_type().zero_orders().iter().sum();
                prop_assert_eq!(total % 2, 0);
            }
        }

        #[test]
        fn cycle_string_round_trips(a in (1usize..10).prop_flat_map(perm_strategy)) {
            let back = Perm::parse_cycles(&a.to_cycle_string(), Some(a.degree())).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
