//! Accommodating families of vertex sets and their restricted algebras.
//!
//! Range-closure and weak left resolution are checked one letter at a
//! time. Both reduce to the single-letter case by induction on the word:
//! `r(A, bw) = r(r(A, b), w)` and `r(A, b)` stays inside the family.

use std::collections::{HashMap, HashSet};
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, Letter, Word};
use crate::vertex_set::VertexSet;

/// Power sets beyond this many vertices are refused.
pub const MAX_POWERSET_VERTICES: usize = 20;

/// A concrete reason one of the validation flags is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    SetOutsideGraph(VertexSet),
    MissingRange(Letter),
    UnionMissing(VertexSet, VertexSet),
    IntersectionMissing(VertexSet, VertexSet),
    RelativeRangeMissing(VertexSet, Letter),
    /// `r(A ∩ B, b) ≠ r(A, b) ∩ r(B, b)`.
    IntersectionNotPreserved(VertexSet, VertexSet, Letter),
    /// `A ∖ B` is not a member.
    ComplementMissing(VertexSet, VertexSet),
}

impl Witness {
    pub fn describe(&self, g: &LabelledGraph) -> String {
        let s = |x: &VertexSet| g.format_set(x);
        match self {
            Witness::SetOutsideGraph(a) => format!("set {} is not a set of vertices", s(a)),
            Witness::MissingRange(b) => format!("r({}) is missing", g.letter_name(*b)),
            Witness::UnionMissing(a, b) => format!("union of {} and {} is missing", s(a), s(b)),
            Witness::IntersectionMissing(a, b) => {
                format!("intersection of {} and {} is missing", s(a), s(b))
            }
            Witness::RelativeRangeMissing(a, b) => {
                format!("r({}, {}) is missing", s(a), g.letter_name(*b))
            }
            Witness::IntersectionNotPreserved(a, b, l) => format!(
                "r(A∩B, {l}) != r(A, {l}) ∩ r(B, {l}) for A={} B={}",
                s(a),
                s(b),
                l = g.letter_name(*l)
            ),
            Witness::ComplementMissing(a, b) => {
                format!("{} \\ {} is missing", s(a), s(b))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub accommodating: bool,
    pub weakly_left_resolving: bool,
    pub complement_closed: bool,
    pub accommodating_witness: Option<Witness>,
    pub wlr_witness: Option<Witness>,
    pub complement_witness: Option<Witness>,
}

impl ValidationReport {
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.accommodating_witness
            .iter()
            .chain(&self.wlr_witness)
            .chain(&self.complement_witness)
    }
}

fn normalize(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.push(VertexSet::new());
    sets.sort();
    sets.dedup();
    sets
}

/// Checks the accommodating, weak-left-resolution and relative-complement
/// conditions on an explicit collection (∅ is always added). Never fails;
/// each false flag comes with the first witness in canonical order.
pub fn validate(g: &LabelledGraph, sets: &[VertexSet]) -> ValidationReport {
    let sets = normalize(sets.to_vec());
    let members: HashMap<&VertexSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let all = g.all_vertices();
    let letters: Vec<Letter> = g.alphabet().collect();

    let ranges: Vec<Vec<VertexSet>> = sets
        .iter()
        .map(|a| letters.iter().map(|&b| g.relative_range_letter(a, b)).collect())
        .collect();

    let mut accommodating_witness = sets
        .iter()
        .find(|a| !a.is_subset(&all))
        .map(|a| Witness::SetOutsideGraph(a.clone()));
    if accommodating_witness.is_none() {
        accommodating_witness = letters
            .iter()
            .find(|&&b| !members.contains_key(&g.range(&[b])))
            .map(|&b| Witness::MissingRange(b));
    }
    if accommodating_witness.is_none() {
        'outer: for (i, a) in sets.iter().enumerate() {
            for (k, &b) in letters.iter().enumerate() {
                if !members.contains_key(&ranges[i][k]) {
                    accommodating_witness = Some(Witness::RelativeRangeMissing(a.clone(), b));
                    break 'outer;
                }
            }
            for c in &sets[i..] {
                if !members.contains_key(&a.union(c)) {
                    accommodating_witness = Some(Witness::UnionMissing(a.clone(), c.clone()));
                    break 'outer;
                }
                if !members.contains_key(&a.intersection(c)) {
                    accommodating_witness = Some(Witness::IntersectionMissing(a.clone(), c.clone()));
                    break 'outer;
                }
            }
        }
    }

    let mut wlr_witness = None;
    'wlr: for (i, a) in sets.iter().enumerate() {
        for (j, c) in sets.iter().enumerate().skip(i + 1) {
            let meet = a.intersection(c);
            for (k, &b) in letters.iter().enumerate() {
                let lhs = match members.get(&meet) {
                    Some(&m) => ranges[m][k].clone(),
                    None => g.relative_range_letter(&meet, b),
                };
                if lhs != ranges[i][k].intersection(&ranges[j][k]) {
                    wlr_witness = Some(Witness::IntersectionNotPreserved(a.clone(), c.clone(), b));
                    break 'wlr;
                }
            }
        }
    }

    let mut complement_witness = None;
    'cc: for a in &sets {
        for c in &sets {
            if !members.contains_key(&a.difference(c)) {
                complement_witness = Some(Witness::ComplementMissing(a.clone(), c.clone()));
                break 'cc;
            }
        }
    }

    ValidationReport {
        accommodating: accommodating_witness.is_none(),
        weakly_left_resolving: wlr_witness.is_none(),
        complement_closed: complement_witness.is_none(),
        accommodating_witness,
        wlr_witness,
        complement_witness,
    }
}

/// A graph together with an accommodating family of vertex sets, stored
/// as an explicit sorted list that always contains ∅.
#[derive(Debug, Clone)]
pub struct AccommodatingFamily {
    graph: LabelledGraph,
    sets: Vec<VertexSet>,
    members: HashSet<VertexSet>,
    report: ValidationReport,
}

impl AccommodatingFamily {
    /// Validates `sets` and refuses collections that are not accommodating.
    pub fn new(graph: LabelledGraph, sets: Vec<VertexSet>) -> Result<Self> {
        let sets = normalize(sets);
        let report = validate(&graph, &sets);
        if let Some(w) = &report.accommodating_witness {
            return Err(Error::NotAccommodating(w.describe(&graph)));
        }
        let members = sets.iter().cloned().collect();
        Ok(Self {
            graph,
            sets,
            members,
            report,
        })
    }

    /// Smallest family containing the seeds and every `r(b)` that is closed
    /// under union, intersection, relative complement and relative ranges.
    pub fn closure(graph: LabelledGraph, seeds: &[VertexSet]) -> Result<Self> {
        let all = graph.all_vertices();
        if let Some(bad) = seeds.iter().find(|s| !s.is_subset(&all)) {
            return Err(Error::NotAccommodating(
                Witness::SetOutsideGraph(bad.clone()).describe(&graph),
            ));
        }
        let letters: Vec<Letter> = graph.alphabet().collect();
        let mut sets: Vec<VertexSet> = Vec::new();
        let mut members: HashSet<VertexSet> = HashSet::new();
        let mut queue: Vec<VertexSet> = vec![VertexSet::new()];
        queue.extend(seeds.iter().cloned());
        queue.extend(letters.iter().map(|&b| graph.range(&[b])));
        while let Some(x) = queue.pop() {
            if !members.insert(x.clone()) {
                continue;
            }
            for y in &sets {
                for z in [x.union(y), x.intersection(y), x.difference(y), y.difference(&x)] {
                    if !members.contains(&z) {
                        queue.push(z);
                    }
                }
            }
            for &b in &letters {
                let z = graph.relative_range_letter(&x, b);
                if !members.contains(&z) {
                    queue.push(z);
                }
            }
            sets.push(x);
        }
        Self::new(graph, sets)
    }

    pub fn powerset(graph: LabelledGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n > MAX_POWERSET_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let sets = (0u64..1 << n)
            .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
            .collect();
        Self::new(graph, sets)
    }

    /// All subsets `A` with `p ∈ A ⇒ q ∈ A` for every pair `(p, q)`.
    pub fn from_implications(graph: LabelledGraph, rules: &[(usize, usize)]) -> Result<Self> {
        let n = graph.vertex_count();
        if n > MAX_POWERSET_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let sets = (0u64..1 << n)
            .filter(|mask| rules.iter().all(|&(p, q)| mask & (1 << p) == 0 || mask & (1 << q) != 0))
            .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
            .collect();
        Self::new(graph, sets)
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.members.contains(set)
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_weakly_left_resolving(&self) -> bool {
        self.report.weakly_left_resolving
    }

    pub fn is_complement_closed(&self) -> bool {
        self.report.complement_closed
    }

    pub fn is_powerset(&self) -> bool {
        let n = self.graph.vertex_count();
        n < 64 && self.sets.len() as u64 == 1u64 << n
    }

    /// Members contained in `top`, in canonical order.
    pub fn sets_within<'a>(&'a self, top: &'a VertexSet) -> impl Iterator<Item = &'a VertexSet> + 'a {
        self.sets.iter().filter(move |s| s.is_subset(top))
    }

    /// Minimal nonempty members contained in `top`.
    pub fn atoms_within(&self, top: &VertexSet) -> Vec<VertexSet> {
        let nonzero: Vec<&VertexSet> = self.sets_within(top).filter(|s| !s.is_empty()).collect();
        nonzero
            .iter()
            .filter(|a| !nonzero.iter().any(|b| b != *a && b.is_subset(a)))
            .map(|a| (*a).clone())
            .collect()
    }

    /// `ℬ_α = ℬ ∩ P(r(α))`.
    pub fn restricted_algebra(&self, word: &Word) -> Result<RestrictedAlgebra> {
        if !self.graph.is_labelled_path(word) {
            return Err(Error::NotLabelledPath(self.graph.format_word(word)));
        }
        let range = self.graph.range(word);
        let top = if word.is_empty() && !self.contains(&range) {
            None
        } else {
            Some(range.clone())
        };
        Ok(RestrictedAlgebra {
            word: word.clone(),
            top,
            elements: self.sets_within(&range).cloned().collect(),
            atoms: self.atoms_within(&range),
        })
    }
}

/// `ℬ_α` for a labelled path `α`. For the empty word the algebra is the
/// whole family, which has a top only when `E⁰` is a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedAlgebra {
    pub word: Word,
    pub top: Option<VertexSet>,
    pub elements: Vec<VertexSet>,
    pub atoms: Vec<VertexSet>,
}

/// An accommodating family known to be weakly left resolving, the
/// setting in which the inverse semigroup and its filters are defined.
#[derive(Debug, Clone)]
pub struct LabelledSpace {
    family: AccommodatingFamily,
}

impl LabelledSpace {
    pub fn new(family: AccommodatingFamily) -> Result<Self> {
        if let Some(w) = &family.report.wlr_witness {
            return Err(Error::NotWeaklyLeftResolving(w.describe(&family.graph)));
        }
        Ok(Self { family })
    }

    pub fn family(&self) -> &AccommodatingFamily {
        &self.family
    }

    pub(crate) fn require_complement_closed(&self) -> Result<()> {
        match &self.family.report.complement_witness {
            Some(w) => Err(Error::NotComplementClosed(w.describe(&self.family.graph))),
            None => Ok(()),
        }
    }
}

impl Deref for LabelledSpace {
    type Target = AccommodatingFamily;
    fn deref(&self) -> &AccommodatingFamily {
        &self.family
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sets(g: &LabelledGraph, list: &[&str]) -> Vec<VertexSet> {
        list.iter().map(|s| g.parse_set(s).unwrap()).collect()
    }

    #[test]
    fn closure_from_single_seed() {
        let g = fixtures::loops4_graph();
        let seed = sets(&g, &["{1}"]);
        let fam = AccommodatingFamily::closure(g.clone(), &seed).unwrap();
        assert_eq!(fam.sets(), sets(&g, &["{}", "{1}", "{2 3 4}", "{1 2 3 4}"]).as_slice());
    }

    #[test]
    fn closure_without_seeds_is_generated_by_letter_ranges() {
        let g = fixtures::chain_graph(10);
        let fam = AccommodatingFamily::closure(g.clone(), &[]).unwrap();
        for b in g.alphabet() {
            assert!(fam.contains(&g.range(&[b])));
        }
        let r = fam.report();
        assert!(r.accommodating && r.complement_closed);
    }

    #[test]
    fn closure_of_loops4_family_is_itself() {
        let fam = fixtures::loops4_family();
        let again = AccommodatingFamily::closure(fam.graph().clone(), fam.sets()).unwrap();
        assert_eq!(again.sets(), fam.sets());
        assert_eq!(fam.sets().len(), 8);
    }

    #[test]
    fn validate_loops4() {
        let fam = fixtures::loops4_family();
        let r = fam.report();
        assert!(r.accommodating && r.weakly_left_resolving && r.complement_closed);
    }

    #[test]
    fn validate_chain7() {
        let fam = fixtures::chain_family(10);
        let g = fam.graph();
        let r = fam.report();
        assert!(r.accommodating);
        assert!(r.weakly_left_resolving);
        assert!(!r.complement_closed);
        let expected = sets(g, &["{v2 v4}", "{v2}"]);
        assert_eq!(
            r.complement_witness,
            Some(Witness::ComplementMissing(expected[0].clone(), expected[1].clone()))
        );
    }

    #[test]
    fn validate_missing_range() {
        let g = fixtures::loops4_graph();
        let r = validate(&g, &sets(&g, &["{1}"]));
        assert!(!r.accommodating);
        assert_eq!(
            r.accommodating_witness,
            Some(Witness::MissingRange(g.letter("a").unwrap()))
        );
        assert!(AccommodatingFamily::new(g, vec![]).is_err());
    }

    #[test]
    fn non_wlr_is_refused_by_space() {
        // Two a-edges into one vertex from different sources.
        let g = fixtures::merge_graph();
        let fam = AccommodatingFamily::powerset(g).unwrap();
        assert!(!fam.is_weakly_left_resolving());
        assert!(matches!(LabelledSpace::new(fam), Err(Error::NotWeaklyLeftResolving(_))));
    }

    #[test]
    fn restricted_algebra_examples() {
        let fam = fixtures::chain_family(10);
        let g = fam.graph();
        let alg = fam.restricted_algebra(&g.parse_word("a1").unwrap()).unwrap();
        assert_eq!(alg.elements, sets(g, &["{}", "{v2}", "{v2 v4}"]));
        assert_eq!(alg.atoms, sets(g, &["{v2}"]));
        let alg = fam.restricted_algebra(&g.parse_word("a1.a2").unwrap()).unwrap();
        assert_eq!(alg.elements, sets(g, &["{}", "{v3}", "{v3 v5}"]));
        assert!(fam.restricted_algebra(&g.parse_word("a2.a1").unwrap()).is_err());

        let fam = fixtures::loops4_family();
        let g = fam.graph();
        let alg = fam.restricted_algebra(&g.parse_word("a").unwrap()).unwrap();
        assert_eq!(alg.elements, fam.sets());
        assert_eq!(alg.atoms, sets(g, &["{1}", "{3}", "{2 4}"]));
        assert_eq!(alg.top, Some(g.all_vertices()));
    }

    #[test]
    fn empty_word_algebra_without_top() {
        let fam = fixtures::chain_family(10);
        let alg = fam.restricted_algebra(&Word::empty()).unwrap();
        assert_eq!(alg.elements.len(), fam.sets().len());
        assert!(alg.top.is_some());
        let g = fixtures::loops4_graph();
        let fam = AccommodatingFamily::new(g.clone(), sets(&g, &["{1}", "{2 3 4}", "{1 2 3 4}"])).unwrap();
        assert!(fam.restricted_algebra(&Word::empty()).unwrap().top.is_some());
        // Identity-labelled line with only the letter ranges: E⁰ is absent.
        let line = LabelledGraph::from_triples(&["x", "y", "z"], &[("x", "e", "y")]).unwrap();
        let fam = AccommodatingFamily::closure(line, &[]).unwrap();
        assert_eq!(fam.restricted_algebra(&Word::empty()).unwrap().top, None);
    }
}
