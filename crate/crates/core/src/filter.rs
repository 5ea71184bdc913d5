//! Filters in the restricted algebras, the pull-back maps between them,
//! families of level filters, and filters in the idempotent semilattice.
//!
//! Every algebra here is finite, so a filter is `↑g` for a unique nonempty
//! generator `g` (the meet of all its members) and the ultrafilters are the
//! `↑a` for atoms `a`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::family::{LabelledSpace, RestrictedAlgebra};
use crate::graph::{Letter, Word};
use crate::lasso::Lasso;
use crate::semigroup::SElement;
use crate::vertex_set::VertexSet;

/// `↑generator ∩ ℬ_word`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalFilter {
    pub word: Word,
    pub generator: VertexSet,
}

impl PrincipalFilter {
    pub fn contains(&self, set: &VertexSet) -> bool {
        self.generator.is_subset(set)
    }
}

/// Level `n ≥ 1` of a family: the letter `α_n`, the range `r(α_{1,n})` and
/// the generator of `F_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub letter: Letter,
    pub range: VertexSet,
    pub generator: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    Finite(Vec<Step>),
    /// Infinite word; the range sequence is periodic along with the rest.
    Lasso(Lasso<Step>),
}

/// A family `{F_n}` of level filters along a finite or eventually
/// periodic word. `F_0` may be empty for nonempty words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FilterFamily {
    zero: Option<VertexSet>,
    tail: Tail,
}

impl FilterFamily {
    pub(crate) fn from_parts(zero: Option<VertexSet>, tail: Tail) -> Self {
        Self { zero, tail }
    }

    pub fn zero(&self) -> Option<&VertexSet> {
        self.zero.as_ref()
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.tail, Tail::Finite(_))
    }

    /// `|α|` for finite words.
    pub fn depth(&self) -> Option<usize> {
        match &self.tail {
            Tail::Finite(s) => Some(s.len()),
            Tail::Lasso(_) => None,
        }
    }

    /// Level `n ≥ 1`, or `None` past the end of a finite word.
    pub fn step(&self, n: usize) -> Option<&Step> {
        assert!(n >= 1, "levels start at 1");
        match &self.tail {
            Tail::Finite(s) => s.get(n - 1),
            Tail::Lasso(l) => Some(l.at(n - 1)),
        }
    }

    /// Generator of `F_n`; `None` for an empty `F_0` or past the end.
    pub fn generator(&self, n: usize) -> Option<&VertexSet> {
        if n == 0 {
            self.zero.as_ref()
        } else {
            self.step(n).map(|s| &s.generator)
        }
    }

    /// `α_{1,n}`.
    pub fn word_prefix(&self, n: usize) -> Word {
        (1..=n).map(|k| self.step(k).expect("level in range").letter).collect()
    }

    /// The whole word, for finite families.
    pub fn word(&self) -> Option<Word> {
        self.depth().map(|d| self.word_prefix(d))
    }

    /// Generator of the top filter `F_{|α|}` of a finite family.
    pub fn top(&self) -> Option<&VertexSet> {
        self.depth().and_then(|d| self.generator(d))
    }

    /// Levels `0..checked_levels()` together with their successors cover
    /// every constraint between consecutive levels.
    fn checked_levels(&self) -> usize {
        match &self.tail {
            Tail::Finite(s) => s.len(),
            Tail::Lasso(l) => l.prefix().len() + l.cycle().len() + 1,
        }
    }

    /// Replaces the generators at levels `0..=checked_levels()`.
    fn with_generators(&self, gens: &[Option<VertexSet>]) -> FilterFamily {
        let set_gen = |steps: &[Step], offset: usize| -> Vec<Step> {
            steps
                .iter()
                .enumerate()
                .map(|(i, s)| Step {
                    generator: gens[offset + i + 1].clone().expect("levels above 0 are nonempty"),
                    ..s.clone()
                })
                .collect()
        };
        let tail = match &self.tail {
            Tail::Finite(s) => Tail::Finite(set_gen(s, 0)),
            Tail::Lasso(l) => {
                let p = l.prefix().len();
                Tail::Lasso(Lasso::new(set_gen(l.prefix(), 0), set_gen(l.cycle(), p)).expect("nonempty cycle"))
            }
        };
        FilterFamily {
            zero: gens[0].clone(),
            tail,
        }
    }

    fn generators(&self) -> Vec<Option<VertexSet>> {
        let n = match &self.tail {
            Tail::Finite(s) => s.len(),
            Tail::Lasso(l) => l.prefix().len() + l.cycle().len(),
        };
        (0..=n).map(|k| self.generator(k).cloned()).collect()
    }

    /// Range `r(α_{1,n})`, with `r(ω) = E⁰` passed in.
    fn range<'a>(&'a self, n: usize, all: &'a VertexSet) -> &'a VertexSet {
        if n == 0 {
            all
        } else {
            &self.step(n).expect("level in range").range
        }
    }
}

/// A vertex of the ultrafilter transition graph: a range `R` and an atom of
/// `ℬ ∩ P(R)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionNode {
    pub range: VertexSet,
    pub atom: VertexSet,
}

/// Edges run from level `n` to level `n + 1`: `(R, F) -b-> (R', F')` when
/// `R' = r(R, b)` and `f_b(F') = F`. Entry edges leave an implicit root and
/// carry the first letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub nodes: Vec<TransitionNode>,
    pub edges: Vec<(usize, Letter, usize)>,
    pub entries: Vec<(Letter, usize)>,
}

impl TransitionGraph {
    pub fn successors(&self, node: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        self.edges
            .iter()
            .filter(move |(s, _, _)| *s == node)
            .map(|&(_, b, t)| (b, t))
    }

    /// Nodes from which an infinite path starts.
    pub fn live_nodes(&self) -> Vec<bool> {
        let mut live = vec![true; self.nodes.len()];
        loop {
            let mut changed = false;
            for v in 0..self.nodes.len() {
                if live[v] && !self.successors(v).any(|(_, t)| live[t]) {
                    live[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return live;
            }
        }
    }

    /// Nodes reachable from the root.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = self.entries.iter().map(|&(_, t)| t).collect();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(self.successors(v).map(|(_, t)| t));
            }
        }
        seen
    }

    /// Nodes lying on some directed cycle.
    pub fn on_cycle(&self) -> Vec<bool> {
        (0..self.nodes.len())
            .map(|v| {
                let mut seen = vec![false; self.nodes.len()];
                let mut stack: Vec<usize> = self.successors(v).map(|(_, t)| t).collect();
                while let Some(u) = stack.pop() {
                    if u == v {
                        return true;
                    }
                    if !std::mem::replace(&mut seen[u], true) {
                        stack.extend(self.successors(u).map(|(_, t)| t));
                    }
                }
                false
            })
            .collect()
    }

    /// Some reachable node on a cycle has two live continuations, so the
    /// infinite paths are uncountable and lassos list only some of them.
    pub fn is_branching(&self) -> bool {
        let live = self.live_nodes();
        let reach = self.reachable();
        let cyc = self.on_cycle();
        (0..self.nodes.len()).any(|v| reach[v] && cyc[v] && self.successors(v).filter(|&(_, t)| live[t]).count() >= 2)
    }
}

impl LabelledSpace {
    /// One ultrafilter `↑a` per atom, in canonical order.
    pub fn ultrafilters(&self, alg: &RestrictedAlgebra) -> Vec<PrincipalFilter> {
        alg.atoms
            .iter()
            .map(|a| PrincipalFilter {
                word: alg.word.clone(),
                generator: a.clone(),
            })
            .collect()
    }

    pub fn ultrafilters_at(&self, word: &Word) -> Result<Vec<PrincipalFilter>> {
        Ok(self.ultrafilters(&self.restricted_algebra(word)?))
    }

    /// Every filter of `ℬ_word`, one per nonempty member.
    pub fn filters_at(&self, word: &Word) -> Result<Vec<PrincipalFilter>> {
        let alg = self.restricted_algebra(word)?;
        Ok(alg
            .elements
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|generator| PrincipalFilter {
                word: word.clone(),
                generator,
            })
            .collect())
    }

    /// Generator of `{A ∈ ℬ ∩ P(range) : gen ⊆ r(A, word)}`, or `None` when
    /// that set is empty.
    pub(crate) fn pull_back(&self, range: &VertexSet, word: &[Letter], gen: &VertexSet) -> Option<VertexSet> {
        let g = self.graph();
        self.sets_within(range)
            .filter(|a| gen.is_subset(&g.relative_range(a, word)))
            .fold(None, |acc: Option<VertexSet>, a| {
                Some(match acc {
                    None => a.clone(),
                    Some(m) => m.intersection(a),
                })
            })
    }

    fn check_filter(&self, word: &Word, gen: &VertexSet) -> Result<()> {
        let g = self.graph();
        if gen.is_empty() || !self.contains(gen) || !gen.is_subset(&g.range(word)) {
            return Err(Error::InvalidFilter(format!(
                "{} does not generate a filter in the algebra of {}",
                g.format_set(gen),
                g.format_word(word)
            )));
        }
        Ok(())
    }

    /// `f_{α[β]}(F) = {A ∈ ℬ_α : r(A, β) ∈ F}`; `None` is the empty set,
    /// which only happens for `α = ω`.
    pub fn f_map(&self, alpha: &Word, beta: &Word, f: &PrincipalFilter) -> Result<Option<PrincipalFilter>> {
        let g = self.graph();
        let ab = alpha.concat(beta);
        if !g.is_labelled_path(&ab) {
            return Err(Error::NotLabelledPath(g.format_word(&ab)));
        }
        if f.word != ab {
            return Err(Error::InvalidFilter(format!(
                "filter lives over {}, expected {}",
                g.format_word(&f.word),
                g.format_word(&ab)
            )));
        }
        self.check_filter(&ab, &f.generator)?;
        Ok(self
            .pull_back(&g.range(alpha), beta, &f.generator)
            .map(|generator| PrincipalFilter {
                word: alpha.clone(),
                generator,
            }))
    }

    /// A finite family from explicit generators for levels `0..=|α|`.
    pub fn finite_family(&self, word: &Word, gens: Vec<Option<VertexSet>>) -> Result<FilterFamily> {
        let g = self.graph();
        if !g.is_labelled_path(word) {
            return Err(Error::NotLabelledPath(g.format_word(word)));
        }
        if gens.len() != word.len() + 1 {
            return Err(Error::InvalidFilter(format!(
                "expected {} level generators, got {}",
                word.len() + 1,
                gens.len()
            )));
        }
        let mut steps = Vec::with_capacity(word.len());
        for (n, gen) in gens.iter().enumerate() {
            let prefix = word.prefix(n);
            match gen {
                None if n == 0 && !word.is_empty() => {}
                None => {
                    return Err(Error::InvalidFilter(format!(
                        "level {n} of {} cannot be empty",
                        g.format_word(word)
                    )))
                }
                Some(s) => self.check_filter(&prefix, s)?,
            }
            if n > 0 {
                steps.push(Step {
                    letter: word[n - 1],
                    range: g.range(&prefix),
                    generator: gen.clone().expect("checked above"),
                });
            }
        }
        Ok(FilterFamily {
            zero: gens[0].clone(),
            tail: Tail::Finite(steps),
        })
    }

    /// The complete family of the finite-type filter given by `(α, ↑top)`.
    pub fn finite_type(&self, word: &Word, top: VertexSet) -> Result<FilterFamily> {
        let g = self.graph();
        // Ranges are valid placeholders for the lower levels, which are
        // then recomputed from the top.
        let mut gens: Vec<Option<VertexSet>> = (0..word.len()).map(|n| Some(g.range(&word.prefix(n)))).collect();
        gens.push(Some(top));
        let fam = self.finite_family(word, gens)?;
        Ok(fam.with_generators(&self.derive_lower_levels(&fam)))
    }

    fn derive_lower_levels(&self, fam: &FilterFamily) -> Vec<Option<VertexSet>> {
        let all = self.graph().all_vertices();
        let mut gens = fam.generators();
        let d = fam.depth().expect("finite family");
        for n in (0..d).rev() {
            let next = fam.step(n + 1).expect("level in range");
            let up = gens[n + 1].clone().expect("levels above 0 are nonempty");
            gens[n] = self.pull_back(fam.range(n, &all), &[next.letter], &up);
        }
        gens
    }

    /// A family along `prefix · cycle^∞` from explicit generators for
    /// levels `0..=|prefix|+|cycle|`, repeated with the cycle of the word.
    pub fn lasso_family(&self, prefix: &Word, cycle: &Word, gens: Vec<Option<VertexSet>>) -> Result<FilterFamily> {
        let g = self.graph();
        if cycle.is_empty() {
            return Err(Error::InvalidFilter("cycle of an infinite word cannot be empty".into()));
        }
        let (p, c) = (prefix.len(), cycle.len());
        if gens.len() != p + c + 1 {
            return Err(Error::InvalidFilter(format!(
                "expected {} level generators, got {}",
                p + c + 1,
                gens.len()
            )));
        }
        if let Some(s) = &gens[0] {
            self.check_filter(&Word::empty(), s)?;
        }
        let mut steps: Vec<Step> = Vec::new();
        let mut seen: BTreeMap<(usize, VertexSet), usize> = BTreeMap::new();
        let mut range = g.all_vertices();
        let mut n = 1;
        loop {
            let (letter, idx) = if n <= p {
                (prefix[n - 1], n)
            } else {
                let phase = (n - p - 1) % c;
                (cycle[phase], p + 1 + phase)
            };
            range = g.relative_range_letter(&range, letter);
            if n > p {
                if let Some(&start) = seen.get(&(idx, range.clone())) {
                    let cyc = steps.split_off(start - 1);
                    let tail = Lasso::new(steps, cyc).expect("nonempty cycle");
                    return Ok(FilterFamily {
                        zero: gens[0].clone(),
                        tail: Tail::Lasso(tail),
                    });
                }
                seen.insert((idx, range.clone()), n);
            }
            if range.is_empty() {
                let word: Word = steps.iter().map(|s| s.letter).chain([letter]).collect();
                return Err(Error::NotLabelledPath(g.format_word(&word)));
            }
            let gen = gens[idx]
                .clone()
                .ok_or_else(|| Error::InvalidFilter(format!("level {n} cannot be empty")))?;
            if gen.is_empty() || !self.contains(&gen) || !gen.is_subset(&range) {
                return Err(Error::InvalidFilter(format!(
                    "{} does not generate a filter at level {n}",
                    g.format_set(&gen)
                )));
            }
            steps.push(Step {
                letter,
                range: range.clone(),
                generator: gen,
            });
            n += 1;
        }
    }

    /// `F_n ⊆ {A ∈ ℬ_{α_{1,n}} : r(A, α_{n+1}) ∈ F_{n+1}}` for every `n`.
    pub fn is_admissible(&self, fam: &FilterFamily) -> bool {
        self.first_inadmissible(fam).is_none()
    }

    fn first_inadmissible(&self, fam: &FilterFamily) -> Option<usize> {
        let g = self.graph();
        (0..fam.checked_levels()).find(|&n| {
            let next = fam.step(n + 1).expect("level in range");
            match fam.generator(n) {
                None => false,
                Some(gen) => !next.generator.is_subset(&g.relative_range_letter(gen, next.letter)),
            }
        })
    }

    /// `F_n = {A ∈ ℬ_{α_{1,n}} : r(A, α_{n+1}) ∈ F_{n+1}}` for every `n`.
    pub fn is_complete(&self, fam: &FilterFamily) -> bool {
        let all = self.graph().all_vertices();
        (0..fam.checked_levels()).all(|n| {
            let next = fam.step(n + 1).expect("level in range");
            self.pull_back(fam.range(n, &all), &[next.letter], &next.generator)
                .as_ref()
                == fam.generator(n)
        })
    }

    /// The completion of an admissible family, computed by pulling each
    /// level back from the next until nothing changes.
    pub fn complete_family(&self, fam: &FilterFamily) -> Result<FilterFamily> {
        if let Some(n) = self.first_inadmissible(fam) {
            return Err(Error::NotAdmissible(format!("fails between levels {n} and {}", n + 1)));
        }
        let all = self.graph().all_vertices();
        let mut gens = fam.generators();
        let pull = |gens: &[Option<VertexSet>], n: usize, next_idx: usize| {
            let next = fam.step(n + 1).expect("level in range");
            let up = gens[next_idx].as_ref().expect("levels above 0 are nonempty");
            self.pull_back(fam.range(n, &all), &[next.letter], up)
        };
        let p = match &fam.tail {
            Tail::Finite(s) => s.len(),
            Tail::Lasso(l) => {
                let (p, c) = (l.prefix().len(), l.cycle().len());
                loop {
                    let mut changed = false;
                    for n in (p + 1..=p + c).rev() {
                        let next_idx = if n == p + c { p + 1 } else { n + 1 };
                        let new = pull(&gens, n, next_idx);
                        if new != gens[n] {
                            gens[n] = new;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                p + 1
            }
        };
        for n in (0..p).rev() {
            gens[n] = pull(&gens, n, n + 1);
        }
        Ok(fam.with_generators(&gens))
    }

    /// Whether `r(set, α_{n+1,m}) ∈ F_m` for some `m ≥ n`.
    fn reaches(&self, fam: &FilterFamily, n: usize, set: &VertexSet) -> bool {
        let g = self.graph();
        let mut cur = set.clone();
        let mut m = n;
        let mut seen: HashSet<(usize, VertexSet)> = HashSet::new();
        loop {
            if let Some(gen) = fam.generator(m) {
                if gen.is_subset(&cur) {
                    return true;
                }
            }
            if cur.is_empty() {
                return false;
            }
            match &fam.tail {
                Tail::Finite(s) if m >= s.len() => return false,
                Tail::Lasso(l) if m > l.prefix().len() => {
                    let phase = (m - l.prefix().len() - 1) % l.cycle().len();
                    if !seen.insert((phase, cur.clone())) {
                        return false;
                    }
                }
                _ => {}
            }
            m += 1;
            cur = g.relative_range_letter(&cur, fam.step(m).expect("level in range").letter);
        }
    }

    /// The completion computed member by member from its defining formula
    /// `{A : r(A, α_{n+1,m}) ∈ F_m for some m ≥ n}`.
    pub fn completion_by_search(&self, fam: &FilterFamily) -> Result<FilterFamily> {
        if let Some(n) = self.first_inadmissible(fam) {
            return Err(Error::NotAdmissible(format!("fails between levels {n} and {}", n + 1)));
        }
        let all = self.graph().all_vertices();
        let levels = fam.generators().len();
        let gens: Vec<Option<VertexSet>> = (0..levels)
            .map(|n| {
                self.sets_within(fam.range(n, &all))
                    .filter(|a| !a.is_empty() && self.reaches(fam, n, a))
                    .fold(None, |acc: Option<VertexSet>, a| {
                        Some(acc.map_or_else(|| a.clone(), |m| m.intersection(a)))
                    })
            })
            .collect();
        Ok(fam.with_generators(&gens))
    }

    /// Membership of `p` in the filter of `E(S)` generated by an admissible
    /// family: `p = (α_{1,i}, B, α_{1,i})` with `r(B, α_{i+1,m}) ∈ F_m` for
    /// some `m ≥ i`.
    pub fn es_member(&self, fam: &FilterFamily, p: &SElement) -> Result<bool> {
        if !p.is_idempotent() {
            return Err(Error::NotIdempotent(self.format_element(p)));
        }
        let Some(t) = p.as_triple() else {
            return Ok(false);
        };
        let i = t.alpha().len();
        if fam.depth().is_some_and(|d| i > d) {
            return Ok(false);
        }
        if fam.word_prefix(i) != *t.alpha() {
            return Ok(false);
        }
        Ok(self.reaches(fam, i, t.set()))
    }

    /// Membership read directly off a complete family: `B ∈ F_i`.
    pub fn es_member_complete(&self, fam: &FilterFamily, p: &SElement) -> Result<bool> {
        if !self.is_complete(fam) {
            return Err(Error::NotComplete("membership by level needs a complete family".into()));
        }
        if !p.is_idempotent() {
            return Err(Error::NotIdempotent(self.format_element(p)));
        }
        let Some(t) = p.as_triple() else {
            return Ok(false);
        };
        let i = t.alpha().len();
        if fam.depth().is_some_and(|d| i > d) || fam.word_prefix(i) != *t.alpha() {
            return Ok(false);
        }
        Ok(fam.generator(i).is_some_and(|gen| gen.is_subset(t.set())))
    }

    /// Closure of `{r(b)}` under single-letter ranges, without `∅`.
    pub fn reachable_ranges(&self) -> Vec<VertexSet> {
        let g = self.graph();
        let mut out: BTreeSet<VertexSet> = BTreeSet::new();
        let mut stack: Vec<VertexSet> = g.alphabet().map(|b| g.range(&[b])).collect();
        while let Some(r) = stack.pop() {
            if r.is_empty() || !out.insert(r.clone()) {
                continue;
            }
            stack.extend(g.alphabet().map(|b| g.relative_range_letter(&r, b)));
        }
        out.into_iter().collect()
    }

    pub fn transition_graph(&self) -> Result<TransitionGraph> {
        self.require_complement_closed()?;
        let g = self.graph();
        let mut nodes = Vec::new();
        for range in self.reachable_ranges() {
            for atom in self.atoms_within(&range) {
                nodes.push(TransitionNode {
                    range: range.clone(),
                    atom,
                });
            }
        }
        nodes.sort();
        let index: BTreeMap<&TransitionNode, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut edges = Vec::new();
        for (i, node) in nodes.iter().enumerate() {
            for b in g.alphabet() {
                let next = g.relative_range_letter(&node.range, b);
                if next.is_empty() {
                    continue;
                }
                for atom in self.atoms_within(&next) {
                    if self.pull_back(&node.range, &[b], &atom).as_ref() == Some(&node.atom) {
                        let j = index[&TransitionNode {
                            range: next.clone(),
                            atom,
                        }];
                        edges.push((i, b, j));
                    }
                }
            }
        }
        let mut entries = Vec::new();
        for b in g.alphabet() {
            let r = g.range(&[b]);
            for atom in self.atoms_within(&r) {
                entries.push((b, index[&TransitionNode { range: r.clone(), atom }]));
            }
        }
        Ok(TransitionGraph { nodes, edges, entries })
    }

    /// Whether a complete family is an ultrafilter of `E(S)`. Finite words:
    /// the top filter is an atom filter and every letter has some member
    /// with empty range. Infinite words (complement-closed families only):
    /// every level above 0 is an atom filter and level 0 is empty or one.
    pub fn is_ultrafilter_es(&self, fam: &FilterFamily) -> Result<bool> {
        if !self.is_complete(fam) {
            return Err(Error::NotComplete("ultrafilter test needs a complete family".into()));
        }
        let g = self.graph();
        let all = g.all_vertices();
        let is_atom = |n: usize, gen: &VertexSet| self.atoms_within(fam.range(n, &all)).contains(gen);
        match fam.depth() {
            Some(d) => {
                let top = fam.generator(d).expect("top level is nonempty");
                Ok(is_atom(d, top) && g.alphabet().all(|b| g.relative_range_letter(top, b).is_empty()))
            }
            None => {
                self.require_complement_closed()?;
                let zero_ok = fam.zero().is_none_or(|z| is_atom(0, z));
                Ok(zero_ok && (1..fam.checked_levels()).all(|n| is_atom(n, fam.generator(n).expect("level"))))
            }
        }
    }

    /// Every family along the first `word.len()` letters whose consecutive
    /// levels satisfy the completeness recurrence, found by trying every
    /// filter at every level (pruned as soon as a recurrence fails).
    pub fn complete_families_to_depth(&self, word: &Word) -> Result<Vec<FilterFamily>> {
        let g = self.graph();
        if !g.is_labelled_path(word) {
            return Err(Error::NotLabelledPath(g.format_word(word)));
        }
        let d = word.len();
        let options: Vec<Vec<Option<VertexSet>>> = (0..=d)
            .map(|n| {
                let range = g.range(&word.prefix(n));
                let mut v: Vec<Option<VertexSet>> = self
                    .sets_within(&range)
                    .filter(|s| !s.is_empty())
                    .cloned()
                    .map(Some)
                    .collect();
                if n == 0 && d > 0 {
                    v.insert(0, None);
                }
                v
            })
            .collect();
        let mut out = Vec::new();
        let mut chosen: Vec<Option<VertexSet>> = vec![None; d + 1];
        self.search_levels(word, &options, d, &mut chosen, &mut out);
        let mut fams = Vec::new();
        for gens in out {
            fams.push(self.finite_family(word, gens)?);
        }
        fams.sort();
        Ok(fams)
    }

    fn search_levels(
        &self,
        word: &Word,
        options: &[Vec<Option<VertexSet>>],
        n: usize,
        chosen: &mut Vec<Option<VertexSet>>,
        out: &mut Vec<Vec<Option<VertexSet>>>,
    ) {
        let g = self.graph();
        for opt in &options[n] {
            if n < word.len() {
                let up = chosen[n + 1].as_ref().expect("levels above 0 are nonempty");
                let members: Vec<&VertexSet> = options[n]
                    .iter()
                    .flatten()
                    .filter(|a| up.is_subset(&g.relative_range_letter(a, word[n])))
                    .collect();
                let ok = match opt {
                    None => members.is_empty(),
                    Some(gen) => {
                        let filter: Vec<&VertexSet> =
                            options[n].iter().flatten().filter(|a| gen.is_subset(a)).collect();
                        filter == members
                    }
                };
                if !ok {
                    continue;
                }
            }
            chosen[n] = opt.clone();
            if n == 0 {
                out.push(chosen.clone());
            } else {
                self.search_levels(word, options, n - 1, chosen, out);
            }
        }
    }
}
