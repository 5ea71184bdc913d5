//! Tight filters, boundary paths of the underlying graph, the map between
//! them for left-resolving graphs, isolated points, and union covers.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::family::LabelledSpace;
use crate::filter::{FilterFamily, PrincipalFilter, Step, Tail};
use crate::graph::{LabelledGraph, Letter, Word};
use crate::lasso::Lasso;
use crate::semigroup::SElement;
use crate::vertex_set::VertexSet;

/// A tight filter, stored as its complete family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TightFilterDescriptor {
    FiniteType(FilterFamily),
    InfiniteType(FilterFamily),
}

impl TightFilterDescriptor {
    pub fn family(&self) -> &FilterFamily {
        match self {
            TightFilterDescriptor::FiniteType(f) | TightFilterDescriptor::InfiniteType(f) => f,
        }
    }

    fn from_family(f: FilterFamily) -> Self {
        if f.is_finite() {
            TightFilterDescriptor::FiniteType(f)
        } else {
            TightFilterDescriptor::InfiniteType(f)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSpectrum {
    pub finite: Vec<FilterFamily>,
    pub infinite: Vec<FilterFamily>,
    /// Some cycle of the transition graph branches, so infinitely many
    /// infinite-type points are not eventually periodic.
    pub branching: bool,
    /// The lasso list is every infinite-type point, not a bounded sample.
    pub exhaustive: bool,
}

impl TightSpectrum {
    pub fn descriptors(&self) -> Vec<TightFilterDescriptor> {
        self.finite
            .iter()
            .chain(&self.infinite)
            .cloned()
            .map(TightFilterDescriptor::from_family)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryPath {
    /// Edge indices; `base` is the source vertex, kept for length 0.
    Finite {
        base: usize,
        edges: Vec<usize>,
    },
    Infinite(Lasso<usize>),
}

impl BoundaryPath {
    pub fn source(&self, g: &LabelledGraph) -> usize {
        match self {
            BoundaryPath::Finite { base, .. } => *base,
            BoundaryPath::Infinite(l) => g.edges()[*l.at(0)].source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryListing {
    pub paths: Vec<BoundaryPath>,
    pub branching: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    pub boundary_count: usize,
    pub spectrum_count: usize,
    pub injective: bool,
    /// Boundary paths whose image is missing from the bounded spectrum.
    pub images_outside: Vec<BoundaryPath>,
    /// Spectrum points with no preimage in the bounded boundary listing.
    pub preimages_outside: Vec<TightFilterDescriptor>,
}

impl PhiReport {
    pub fn is_bijection(&self) -> bool {
        self.injective
            && self.images_outside.is_empty()
            && self.preimages_outside.is_empty()
            && self.boundary_count == self.spectrum_count
    }
}

/// `{(α, D_i, α)}` covers `x = (α, A, α)` because `∪ D_i = A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub x: SElement,
    pub parts: Vec<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverRejection {
    Invalid(String),
    /// Part of `A` no part reaches.
    Residue(VertexSet),
}

/// An element of the filter and a union cover of it that misses the filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub level: usize,
    pub certificate: CoverCertificate,
}

/// Combinations tried per part count before falling back to greedy.
const COVER_SEARCH_BUDGET: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|ℒ(AE¹)| = ∞`, which never holds on a finite graph.
fn has_infinitely_many_labels(g: &LabelledGraph, a: &VertexSet) -> bool {
    g.label_edge_set(a).len() == usize::MAX
}

fn sort_families(v: &mut [FilterFamily]) {
    v.sort_by_key(family_key);
}

fn family_key(f: &FilterFamily) -> (usize, usize, Tail, Option<VertexSet>) {
    match f.tail() {
        Tail::Finite(s) => (s.len(), 0, f.tail().clone(), f.zero().cloned()),
        Tail::Lasso(l) => {
            let (p, c) = pair_shape(l);
            (p, c, f.tail().clone(), f.zero().cloned())
        }
    }
}

/// Prefix and cycle lengths of the (letter, generator) sequence.
pub fn pair_shape(l: &Lasso<Step>) -> (usize, usize) {
    let pairs = l.map(|s| (s.letter, s.generator.clone()));
    (pairs.prefix().len(), pairs.cycle().len())
}

impl LabelledSpace {
    /// Ultrafilters of `ℬ_α` in which every letter has a member with empty
    /// range. By principality only the generator needs checking.
    pub fn x_sink(&self, word: &Word) -> Result<Vec<PrincipalFilter>> {
        let g = self.graph();
        Ok(self
            .ultrafilters_at(word)?
            .into_iter()
            .filter(|f| {
                g.alphabet()
                    .all(|b| g.relative_range_letter(&f.generator, b).is_empty())
            })
            .collect())
    }

    /// The filter of `ℬ_α` is an ultrafilter and each of its members either
    /// emits infinitely many labels or contains a nonempty member of `ℬ_α`
    /// made of sinks. Members contain the generator, so checking it suffices.
    pub fn is_tight_finite_type(&self, word: &Word, f: &PrincipalFilter) -> Result<bool> {
        let g = self.graph();
        let alg = self.restricted_algebra(word)?;
        if f.word != *word || !alg.atoms.contains(&f.generator) {
            return Ok(false);
        }
        let a = &f.generator;
        let sinks = a.intersection(&g.sinks());
        Ok(has_infinitely_many_labels(g, a) || alg.elements.iter().any(|b| !b.is_empty() && b.is_subset(&sinks)))
    }

    /// Tightness of the filter given by a complete family.
    pub fn is_tight(&self, fam: &FilterFamily) -> Result<bool> {
        self.require_complement_closed()?;
        match fam.word() {
            Some(word) => {
                if !self.is_complete(fam) {
                    return Err(Error::NotComplete("tightness needs a complete family".into()));
                }
                let top = PrincipalFilter {
                    word: word.clone(),
                    generator: fam.top().expect("top level").clone(),
                };
                self.is_tight_finite_type(&word, &top)
            }
            None => self.is_ultrafilter_es(fam),
        }
    }

    /// Infinite-type ultrafilters whose sequence of (letter, generator)
    /// pairs is a lasso with prefix at most `max_prefix` and cycle at most
    /// `max_cycle`. Ranges are left out of the size because the word
    /// determines them.
    fn infinite_type_lassos(&self, max_prefix: usize, max_cycle: usize) -> Result<Vec<FilterFamily>> {
        let tg = self.transition_graph()?;
        let g = self.graph();
        let all = g.all_vertices();
        let index: HashMap<(&VertexSet, &VertexSet), usize> = tg
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| ((&n.range, &n.atom), i))
            .collect();
        let step = |letter, node: usize| Step {
            letter,
            range: tg.nodes[node].range.clone(),
            generator: tg.nodes[node].atom.clone(),
        };
        // Follows the pair cycle from the end of `walk` until the state
        // (cycle phase, node) repeats; `None` if some pair has no edge.
        let close = |walk: &[(Letter, usize)], p: usize| -> Option<Lasso<Step>> {
            let c = walk.len() - p;
            let mut nodes: Vec<(Letter, usize)> = walk.to_vec();
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            loop {
                let i = nodes.len();
                let phase = (i - p) % c;
                let (_, cur) = nodes[i - 1];
                if let Some(&first) = seen.get(&(phase, cur)) {
                    let steps: Vec<Step> = nodes[..i].iter().map(|&(b, v)| step(b, v)).collect();
                    let mut prefix = steps;
                    let cycle = prefix.split_off(first);
                    return Lasso::new(prefix, cycle);
                }
                seen.insert((phase, cur), i);
                let (b, want) = walk[p + phase];
                let range = g.relative_range_letter(&tg.nodes[cur].range, b);
                let target = *index.get(&(&range, &tg.nodes[want].atom))?;
                if !tg.successors(cur).any(|(x, t)| x == b && t == target) {
                    return None;
                }
                nodes.push((b, target));
            }
        };
        let mut found: BTreeSet<Lasso<Step>> = BTreeSet::new();
        let mut stack: Vec<Vec<(Letter, usize)>> = tg.entries.iter().map(|&e| vec![e]).collect();
        while let Some(walk) = stack.pop() {
            let len = walk.len();
            for p in len.saturating_sub(max_cycle)..len.min(max_prefix + 1) {
                if let Some(l) = close(&walk, p) {
                    let (pp, cc) = pair_shape(&l);
                    if pp <= max_prefix && cc <= max_cycle {
                        found.insert(l);
                    }
                }
            }
            if len < max_prefix + max_cycle {
                let (_, last) = walk[len - 1];
                for next in tg.successors(last) {
                    let mut w = walk.clone();
                    w.push(next);
                    stack.push(w);
                }
            }
        }
        let mut out: Vec<FilterFamily> = found
            .into_iter()
            .map(|l| {
                let first = l.at(0);
                let zero = self.pull_back(&all, &[first.letter], &first.generator);
                FilterFamily::from_parts(zero, Tail::Lasso(l))
            })
            .collect();
        sort_families(&mut out);
        Ok(out)
    }

    /// Finite-type tight filters with `|α| ≤ max_word`, and infinite-type
    /// ones whose (letter, generator) lasso has prefix `≤ max_word` and
    /// cycle `≤ max_cycle`.
    pub fn tight_spectrum(&self, max_word: usize, max_cycle: usize) -> Result<TightSpectrum> {
        self.require_complement_closed()?;
        let g = self.graph();
        let mut finite = Vec::new();
        for word in g.labelled_paths_up_to(max_word) {
            for f in self.ultrafilters_at(&word)? {
                if self.is_tight_finite_type(&word, &f)? {
                    finite.push(self.finite_type(&word, f.generator)?);
                }
            }
        }
        sort_families(&mut finite);
        let infinite = self.infinite_type_lassos(max_word, max_cycle)?;
        let tg = self.transition_graph()?;
        let branching = tg.is_branching();
        let exhaustive = !branching && {
            let n = tg.nodes.len().max(1);
            self.infinite_type_lassos(n, n)?.len() == infinite.len()
        };
        Ok(TightSpectrum {
            finite,
            infinite,
            branching,
            exhaustive,
        })
    }

    /// First element `(α_{1,n}, A, α_{1,n})` of the filter, `n ≤ depth`,
    /// with a union cover by elements outside the filter. Levels are tried
    /// in order and, within a level, larger sets first. `None` does not
    /// prove tightness.
    pub fn refute_tight(&self, fam: &FilterFamily, depth: usize) -> Result<Option<Refutation>> {
        if !self.is_admissible(fam) {
            return Err(Error::NotAdmissible(
                "refuter needs the filter of an admissible family".into(),
            ));
        }
        let top_level = fam.depth().map_or(depth, |d| d.min(depth));
        for n in 0..=top_level {
            let word = fam.word_prefix(n);
            let alg = self.restricted_algebra(&word)?;
            let idem = |s: &VertexSet| self.idempotent(word.clone(), s.clone());
            let mut members = Vec::new();
            let mut outside = Vec::new();
            for s in alg.elements.iter().filter(|s| !s.is_empty()) {
                if self.es_member(fam, &idem(s)?)? {
                    members.push(s.clone());
                } else {
                    outside.push(s.clone());
                }
            }
            for a in members.iter().rev() {
                let parts: Vec<VertexSet> = outside.iter().filter(|d| d.is_subset(a)).cloned().collect();
                let union = parts.iter().fold(VertexSet::new(), |acc, d| acc.union(d));
                if union != *a {
                    continue;
                }
                let chosen = best_cover(a, &parts);
                let x = idem(a)?;
                let certificate = self
                    .union_cover(&x, &chosen)
                    .map_err(|e| Error::InvalidElement(format!("internal cover check failed: {e:?}")))?;
                return Ok(Some(Refutation { level: n, certificate }));
            }
        }
        Ok(None)
    }

    /// Certifies that `{(α, D_i, α)}` covers `x = (α, A, α)` by checking
    /// `∪ D_i = A`.
    pub fn union_cover(
        &self,
        x: &SElement,
        parts: &[VertexSet],
    ) -> std::result::Result<CoverCertificate, CoverRejection> {
        let g = self.graph();
        let t = match x.as_triple() {
            Some(t) if x.is_idempotent() => t,
            _ => {
                return Err(CoverRejection::Invalid(format!(
                    "{} is not a nonzero idempotent",
                    self.format_element(x)
                )))
            }
        };
        let range = g.range(t.alpha());
        for d in parts {
            if !self.contains(d) || !d.is_subset(&range) {
                return Err(CoverRejection::Invalid(format!(
                    "{} is not in the algebra of {}",
                    g.format_set(d),
                    g.format_word(t.alpha())
                )));
            }
            if !d.is_subset(t.set()) {
                return Err(CoverRejection::Invalid(format!(
                    "{} is not contained in {}",
                    g.format_set(d),
                    g.format_set(t.set())
                )));
            }
        }
        let union = parts.iter().fold(VertexSet::new(), |acc, d| acc.union(d));
        let residue = t.set().difference(&union);
        if !residue.is_empty() {
            return Err(CoverRejection::Residue(residue));
        }
        Ok(CoverCertificate {
            x: x.clone(),
            parts: parts.to_vec(),
        })
    }

    fn require_phi_hypotheses(&self) -> Result<()> {
        if !self.graph().is_left_resolving() {
            return Err(Error::NotLeftResolving);
        }
        if !self.is_powerset() {
            return Err(Error::NotPowerset);
        }
        Ok(())
    }

    /// The tight filter whose level `n` is `↑{r(λ_{1,n})}` (level 0 `↑{s(λ)}`).
    pub fn phi_map(&self, path: &BoundaryPath) -> Result<TightFilterDescriptor> {
        self.require_phi_hypotheses()?;
        let g = self.graph();
        let edges = g.edges();
        let base = path.source(g);
        let fam = match path {
            BoundaryPath::Finite { edges: es, .. } => {
                let word: Word = es.iter().map(|&e| edges[e].label).collect();
                let mut gens = vec![Some(VertexSet::singleton(base))];
                gens.extend(es.iter().map(|&e| Some(VertexSet::singleton(edges[e].range))));
                self.finite_family(&word, gens)?
            }
            BoundaryPath::Infinite(l) => {
                let (p, c) = (l.prefix().len(), l.cycle().len());
                let seq = l.unroll(p + c);
                let prefix: Word = seq[..p].iter().map(|&e| edges[e].label).collect();
                let cycle: Word = seq[p..].iter().map(|&e| edges[e].label).collect();
                let mut gens = vec![Some(VertexSet::singleton(base))];
                gens.extend(seq.iter().map(|&e| Some(VertexSet::singleton(edges[e].range))));
                self.lasso_family(&prefix, &cycle, gens)?
            }
        };
        Ok(TightFilterDescriptor::from_family(fam))
    }

    /// Rebuilds the boundary path of a tight filter whose levels are
    /// singletons, using that at most one edge with a given label enters
    /// each vertex.
    pub fn phi_inverse(&self, t: &TightFilterDescriptor) -> Result<BoundaryPath> {
        self.require_phi_hypotheses()?;
        let g = self.graph();
        let fam = t.family();
        let by_range_label: HashMap<(usize, crate::graph::Letter), usize> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.range, e.label), i))
            .collect();
        let single = |s: Option<&VertexSet>| -> Result<usize> {
            match s {
                Some(s) if s.len() == 1 => Ok(s.iter().next().expect("one member")),
                _ => Err(Error::NotBoundaryPath("levels are not singletons".into())),
            }
        };
        let base = single(fam.zero())?;
        let edge_at = |n: usize| -> Result<usize> {
            let step = fam.step(n).expect("level in range");
            let v = single(Some(&step.generator))?;
            by_range_label.get(&(v, step.letter)).copied().ok_or_else(|| {
                Error::NotBoundaryPath(format!(
                    "no edge {} into {}",
                    g.letter_name(step.letter),
                    g.vertex_name(v)
                ))
            })
        };
        let positions = match fam.tail() {
            Tail::Finite(s) => s.len(),
            Tail::Lasso(l) => l.prefix().len() + l.cycle().len() + 1,
        };
        let mut prev = base;
        let mut seq = Vec::with_capacity(positions);
        for n in 1..=positions {
            let e = edge_at(n)?;
            if g.edges()[e].source != prev {
                return Err(Error::NotBoundaryPath(format!(
                    "edge {} does not continue the path",
                    g.edges()[e].id
                )));
            }
            prev = g.edges()[e].range;
            seq.push(e);
        }
        Ok(match fam.tail() {
            Tail::Finite(_) => BoundaryPath::Finite { base, edges: seq },
            Tail::Lasso(l) => {
                let p = l.prefix().len();
                let cycle = seq[p..p + l.cycle().len()].to_vec();
                seq.truncate(p);
                BoundaryPath::Infinite(Lasso::new(seq, cycle).expect("nonempty cycle"))
            }
        })
    }

    /// Compares the bounded boundary listing with the bounded spectrum
    /// through the map above and its inverse.
    pub fn check_phi_bijection(&self, max_len: usize, max_cycle: usize) -> Result<PhiReport> {
        self.require_phi_hypotheses()?;
        let boundary = boundary_paths(self.graph(), max_len, max_cycle).paths;
        let spectrum: BTreeSet<TightFilterDescriptor> = self
            .tight_spectrum(max_len, max_cycle)?
            .descriptors()
            .into_iter()
            .collect();
        let mut images = BTreeSet::new();
        let mut images_outside = Vec::new();
        for b in &boundary {
            let t = self.phi_map(b)?;
            if !spectrum.contains(&t) {
                images_outside.push(b.clone());
            }
            images.insert(t);
        }
        let listed: BTreeSet<&BoundaryPath> = boundary.iter().collect();
        let mut preimages_outside = Vec::new();
        for t in &spectrum {
            match self.phi_inverse(t) {
                Ok(b) if listed.contains(&b) => {}
                _ => preimages_outside.push(t.clone()),
            }
        }
        Ok(PhiReport {
            boundary_count: boundary.len(),
            spectrum_count: spectrum.len(),
            injective: images.len() == boundary.len(),
            images_outside,
            preimages_outside,
        })
    }
}

/// Fewest parts, then smallest largest part, then canonical order.
fn best_cover(a: &VertexSet, parts: &[VertexSet]) -> Vec<VertexSet> {
    let key = |c: &Vec<VertexSet>| (c.len(), c.iter().map(VertexSet::len).max().unwrap_or(0), c.clone());
    for k in 1..=3.min(parts.len()) {
        if binomial(parts.len(), k) > COVER_SEARCH_BUDGET {
            break;
        }
        let mut best: Option<Vec<VertexSet>> = None;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let union = idx.iter().fold(VertexSet::new(), |acc, &i| acc.union(&parts[i]));
            if union == *a {
                let mut c: Vec<VertexSet> = idx.iter().map(|&i| parts[i].clone()).collect();
                c.sort();
                if best.as_ref().is_none_or(|b| key(&c) < key(b)) {
                    best = Some(c);
                }
            }
            // Next k-combination in lexicographic order.
            let mut i = k;
            while i > 0 && idx[i - 1] == parts.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
        if let Some(b) = best {
            return b;
        }
    }
    greedy_cover(a, parts)
}

fn greedy_cover(a: &VertexSet, parts: &[VertexSet]) -> Vec<VertexSet> {
    let mut chosen: Vec<VertexSet> = Vec::new();
    let mut left = a.clone();
    while !left.is_empty() {
        let best = parts
            .iter()
            .max_by(|x, y| {
                let (gx, gy) = (x.intersection(&left).len(), y.intersection(&left).len());
                gx.cmp(&gy).then_with(|| y.len().cmp(&x.len())).then_with(|| y.cmp(x))
            })
            .expect("parts cover a");
        left = left.difference(best);
        chosen.push(best.clone());
    }
    let mut i = 0;
    while i < chosen.len() {
        let rest = chosen
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(VertexSet::new(), |acc, (_, d)| acc.union(d));
        if rest == *a {
            chosen.remove(i);
        } else {
            i += 1;
        }
    }
    chosen.sort();
    chosen
}

/// Vertices from which an infinite path starts.
fn live_vertices(g: &LabelledGraph) -> Vec<bool> {
    let mut live = vec![true; g.vertex_count()];
    loop {
        let mut changed = false;
        for v in 0..g.vertex_count() {
            if live[v] && !g.out_edges(v).iter().any(|&e| live[g.edges()[e].range]) {
                live[v] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

fn on_cycle(g: &LabelledGraph, v: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = g.out_edges(v).iter().map(|&e| g.edges()[e].range).collect();
    while let Some(u) = stack.pop() {
        if u == v {
            return true;
        }
        if !std::mem::replace(&mut seen[u], true) {
            stack.extend(g.out_edges(u).iter().map(|&e| g.edges()[e].range));
        }
    }
    false
}

/// Infinite edge lassos with prefix `≤ max_prefix` and cycle `≤ max_cycle`
/// whose cycle satisfies `keep`.
fn edge_lassos(
    g: &LabelledGraph,
    max_prefix: usize,
    max_cycle: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Vec<Lasso<usize>> {
    let edges = g.edges();
    let live = live_vertices(g);
    let mut found: BTreeSet<Lasso<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = (0..edges.len())
        .filter(|&e| live[edges[e].source] && live[edges[e].range])
        .map(|e| vec![e])
        .collect();
    while let Some(walk) = stack.pop() {
        let len = walk.len();
        let end = edges[walk[len - 1]].range;
        for p in len.saturating_sub(max_cycle)..len.min(max_prefix + 1) {
            if edges[walk[p]].source == end && keep(&walk[p..]) {
                let mut prefix = walk.clone();
                let cycle = prefix.split_off(p);
                let l = Lasso::new(prefix, cycle).expect("nonempty cycle");
                if l.prefix().len() <= max_prefix && l.cycle().len() <= max_cycle {
                    found.insert(l);
                }
            }
        }
        if len < max_prefix + max_cycle {
            for &e in g.out_edges(end) {
                if live[edges[e].range] {
                    let mut w = walk.clone();
                    w.push(e);
                    stack.push(w);
                }
            }
        }
    }
    let mut out: Vec<Lasso<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| (a.prefix().len(), a.cycle().len(), a).cmp(&(b.prefix().len(), b.cycle().len(), b)));
    out
}

/// Finite paths of length `≤ max_len` ending at a singular vertex.
fn finite_boundary(g: &LabelledGraph, max_len: usize) -> Vec<BoundaryPath> {
    let singular = g.singular_vertices();
    let edges = g.edges();
    let mut out = Vec::new();
    let mut frontier: Vec<(usize, Vec<usize>, usize)> = (0..g.vertex_count()).map(|v| (v, vec![], v)).collect();
    for len in 0..=max_len {
        for (base, path, end) in &frontier {
            if singular.contains(*end) {
                out.push(BoundaryPath::Finite {
                    base: *base,
                    edges: path.clone(),
                });
            }
        }
        if len == max_len {
            break;
        }
        frontier = frontier
            .iter()
            .flat_map(|(base, path, end)| {
                g.out_edges(*end).iter().map(move |&e| {
                    let mut p = path.clone();
                    p.push(e);
                    (*base, p, edges[e].range)
                })
            })
            .collect();
    }
    out.sort_by(|a, b| match (a, b) {
        (BoundaryPath::Finite { base: x, edges: p }, BoundaryPath::Finite { base: y, edges: q }) => {
            (p.len(), x, p).cmp(&(q.len(), y, q))
        }
        _ => a.cmp(b),
    });
    out
}

/// Boundary paths of the underlying graph: finite ones of length at most
/// `max_len` ending at a singular vertex, then eventually periodic infinite
/// ones with prefix at most `max_len` and cycle at most `max_cycle`.
pub fn boundary_paths(g: &LabelledGraph, max_len: usize, max_cycle: usize) -> BoundaryListing {
    let mut paths = finite_boundary(g, max_len);
    paths.extend(
        edge_lassos(g, max_len, max_cycle, |_| true)
            .into_iter()
            .map(BoundaryPath::Infinite),
    );
    let live = live_vertices(g);
    let reachable_branch = (0..g.vertex_count())
        .any(|v| on_cycle(g, v) && g.out_edges(v).iter().filter(|&&e| live[g.edges()[e].range]).count() >= 2);
    BoundaryListing {
        paths,
        branching: reachable_branch,
    }
}

/// Isolated points of the boundary path space: finite paths ending at a
/// sink (length `≤ max_len`), and infinite paths that eventually enter a
/// cycle of out-degree-one vertices (prefix `≤ max_len`). Past such a
/// prefix the path is forced, so its cylinder is a single point.
pub fn isolated_points(g: &LabelledGraph, max_len: usize) -> Vec<BoundaryPath> {
    let sinks = g.sinks();
    let mut out: Vec<BoundaryPath> = finite_boundary(g, max_len)
        .into_iter()
        .filter(|p| match p {
            BoundaryPath::Finite { base, edges } => {
                let end = edges.last().map_or(*base, |&e| g.edges()[e].range);
                sinks.contains(end)
            }
            BoundaryPath::Infinite(_) => false,
        })
        .collect();
    let forced = |cycle: &[usize]| cycle.iter().all(|&e| g.out_edges(g.edges()[e].source).len() == 1);
    out.extend(
        edge_lassos(g, max_len, g.vertex_count(), forced)
            .into_iter()
            .map(BoundaryPath::Infinite),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::AccommodatingFamily;
    use crate::fixtures::{self, set};

    fn loops4() -> LabelledSpace {
        LabelledSpace::new(fixtures::loops4_family()).unwrap()
    }

    fn w(s: &LabelledSpace, text: &str) -> Word {
        s.graph().parse_word(text).unwrap()
    }

    fn pf(s: &LabelledSpace, word: &str, gen: &str) -> PrincipalFilter {
        PrincipalFilter {
            word: w(s, word),
            generator: set(s.graph(), gen),
        }
    }

    fn powerset(g: LabelledGraph) -> LabelledSpace {
        LabelledSpace::new(AccommodatingFamily::powerset(g).unwrap()).unwrap()
    }

    #[test]
    fn x_sink_examples() {
        let s = loops4();
        assert_eq!(s.x_sink(&w(&s, "a")).unwrap(), vec![pf(&s, "a", "{3}")]);
        let c = LabelledSpace::new(fixtures::chain_family(10)).unwrap();
        assert!(c.x_sink(&c.graph().parse_word("a1").unwrap()).unwrap().is_empty());
        let star = LabelledGraph::from_triples(&["x", "y", "z"], &[("x", "b", "y"), ("x", "b", "z")]).unwrap();
        let st = powerset(star);
        let b = st.graph().parse_word("b").unwrap();
        assert_eq!(st.x_sink(&b).unwrap(), st.ultrafilters_at(&b).unwrap());
    }

    #[test]
    fn tight_finite_type_examples() {
        let s = loops4();
        let a = w(&s, "a");
        assert!(s.is_tight_finite_type(&a, &pf(&s, "a", "{3}")).unwrap());
        assert!(!s.is_tight_finite_type(&a, &pf(&s, "a", "{1}")).unwrap());
        assert!(!s.is_tight_finite_type(&a, &pf(&s, "a", "{1 3}")).unwrap());
    }

    #[test]
    fn loops4_spectrum() {
        let s = loops4();
        let t = s.tight_spectrum(3, 2).unwrap();
        assert_eq!(t.finite.len(), 4);
        for (n, f) in t.finite.iter().enumerate() {
            assert_eq!(f.depth(), Some(n));
            assert_eq!(f.top(), Some(&set(s.graph(), "{3}")));
        }
        assert_eq!(t.infinite.len(), 2);
        for f in &t.infinite {
            let Tail::Lasso(l) = f.tail() else { panic!() };
            assert!(l.prefix().is_empty());
            let atoms: BTreeSet<String> = l.cycle().iter().map(|st| s.graph().format_set(&st.generator)).collect();
            assert_eq!(atoms, ["{1}".to_string(), "{2 4}".to_string()].into());
            assert!(s.is_complete(f));
        }
        assert!(!t.branching);
        assert!(t.exhaustive);
    }

    #[test]
    fn single_loop_spectrum() {
        let s = powerset(fixtures::single_loop_graph());
        let t = s.tight_spectrum(2, 1).unwrap();
        assert!(t.finite.is_empty());
        assert_eq!(t.infinite.len(), 1);
    }

    #[test]
    fn powerset_finite_count_matches_boundary() {
        let s = fixtures::loops4_powerset();
        let s = LabelledSpace::new(s).unwrap();
        let t = s.tight_spectrum(2, 2).unwrap();
        let finite_boundary = boundary_paths(s.graph(), 2, 2)
            .paths
            .iter()
            .filter(|p| matches!(p, BoundaryPath::Finite { .. }))
            .count();
        assert_eq!(t.finite.len(), finite_boundary);
    }

    #[test]
    fn boundary_examples() {
        let g = fixtures::loops4_graph();
        let b = boundary_paths(&g, 1, 0).paths;
        let v = |n: &str| g.vertex(n).unwrap();
        let e = |s: &str, r: &str| {
            g.edges()
                .iter()
                .position(|e| e.source == v(s) && e.range == v(r))
                .unwrap()
        };
        assert_eq!(
            b,
            vec![
                BoundaryPath::Finite {
                    base: v("3"),
                    edges: vec![]
                },
                BoundaryPath::Finite {
                    base: v("4"),
                    edges: vec![]
                },
                BoundaryPath::Finite {
                    base: v("1"),
                    edges: vec![e("1", "3")]
                },
                BoundaryPath::Finite {
                    base: v("1"),
                    edges: vec![e("1", "4")]
                },
            ]
        );
        let l = boundary_paths(&fixtures::single_loop_graph(), 3, 2).paths;
        assert_eq!(l.len(), 1);
        assert!(matches!(&l[0], BoundaryPath::Infinite(x) if x.prefix().is_empty() && x.cycle().len() == 1));
        let t = fixtures::twins2_graph();
        let v3 = t.vertex("v3").unwrap();
        let paths = boundary_paths(&t, 2, 2).paths;
        assert!(paths.iter().any(|p| matches!(p, BoundaryPath::Infinite(x)
            if x.prefix().is_empty() && x.cycle().len() == 1 && t.edges()[x.cycle()[0]].source == v3)));
    }

    #[test]
    fn phi_examples() {
        let s = LabelledSpace::new(fixtures::loops4_powerset()).unwrap();
        let g = s.graph();
        let v = |n: &str| g.vertex(n).unwrap();
        let e = |a: &str, b: &str| {
            g.edges()
                .iter()
                .position(|e| e.source == v(a) && e.range == v(b))
                .unwrap()
        };
        let t = s
            .phi_map(&BoundaryPath::Finite {
                base: v("1"),
                edges: vec![e("1", "3")],
            })
            .unwrap();
        assert_eq!(t.family().word(), Some(w(&s, "a")));
        assert_eq!(t.family().top(), Some(&set(g, "{3}")));
        let t = s
            .phi_map(&BoundaryPath::Finite {
                base: v("4"),
                edges: vec![],
            })
            .unwrap();
        assert_eq!(t.family().word(), Some(Word::empty()));
        assert_eq!(t.family().top(), Some(&set(g, "{4}")));
        let cyc = BoundaryPath::Infinite(Lasso::new(vec![], vec![e("1", "2"), e("2", "1")]).unwrap());
        let t = s.phi_map(&cyc).unwrap();
        assert!(matches!(t, TightFilterDescriptor::InfiniteType(_)));
        assert!(s.is_complete(t.family()));
        assert_eq!(s.phi_inverse(&t).unwrap(), cyc);
    }

    #[test]
    fn phi_bijection_small() {
        let s = LabelledSpace::new(fixtures::loops4_powerset()).unwrap();
        let r = s.check_phi_bijection(4, 2).unwrap();
        assert!(r.is_bijection(), "{r:?}");
        assert_eq!(r.boundary_count, 12);
        let l = powerset(fixtures::single_loop_graph());
        let r = l.check_phi_bijection(2, 1).unwrap();
        assert!(r.is_bijection());
        assert_eq!((r.boundary_count, r.spectrum_count), (1, 1));
        assert!(matches!(loops4().check_phi_bijection(2, 1), Err(Error::NotPowerset)));
        let parallel = LabelledGraph::from_triples(&["x", "y"], &[("x", "a", "y"), ("y", "a", "y")]).unwrap();
        // The powerset of a graph that is not left-resolving is not weakly left
        // resolving either, so such a space cannot be built in the first place.
        let fam = AccommodatingFamily::powerset(parallel).unwrap();
        assert!(LabelledSpace::new(fam).is_err());
    }

    #[test]
    fn isolated_examples() {
        let t1 = fixtures::twins1_graph();
        assert!(isolated_points(&t1, 4).is_empty());
        let t2 = fixtures::twins2_graph();
        let v3 = t2.vertex("v3").unwrap();
        let iso = isolated_points(&t2, 4);
        assert!(!iso.is_empty());
        for p in &iso {
            let BoundaryPath::Infinite(l) = p else {
                panic!("twins2 has no sinks")
            };
            assert_eq!(l.cycle().len(), 1);
            assert_eq!(t2.edges()[l.cycle()[0]].source, v3);
        }
        assert!(iso
            .iter()
            .any(|p| matches!(p, BoundaryPath::Infinite(l) if l.prefix().is_empty())));
        let g = fixtures::loops4_graph();
        let iso = isolated_points(&g, 4);
        assert_eq!(iso.len(), 10);
        assert!(iso.iter().all(|p| matches!(p, BoundaryPath::Finite { .. })));
    }

    #[test]
    fn union_cover_examples() {
        let s = loops4();
        let g = s.graph();
        let x = s.parse_element("(@,{1 2 3 4},@)").unwrap();
        let parts = vec![set(g, "{1 3}"), set(g, "{2 4}")];
        assert!(s.union_cover(&x, &parts).is_ok());
        assert!(s.union_cover(&x, &[set(g, "{1 2 3 4}")]).is_ok());
        assert_eq!(
            s.union_cover(&x, &[set(g, "{1 3}")]),
            Err(CoverRejection::Residue(set(g, "{2 4}")))
        );
    }

    #[test]
    fn refuter_examples() {
        let s = loops4();
        let g = s.graph();
        let fam = s
            .lasso_family(
                &Word::empty(),
                &w(&s, "a"),
                vec![Some(set(g, "{1 2 4}")), Some(set(g, "{1 2 4}"))],
            )
            .unwrap();
        let r = s.refute_tight(&fam, 4).unwrap().unwrap();
        assert_eq!(r.level, 0);
        assert_eq!(r.certificate.x, s.parse_element("(@,{1 2 3 4},@)").unwrap());
        assert_eq!(r.certificate.parts, vec![set(g, "{1 3}"), set(g, "{2 4}")]);
        let tight = s.finite_type(&w(&s, "a"), set(g, "{3}")).unwrap();
        assert_eq!(s.refute_tight(&tight, 4).unwrap(), None);
        for f in s.tight_spectrum(3, 2).unwrap().infinite {
            assert_eq!(s.refute_tight(&f, 4).unwrap(), None);
        }
    }
}
