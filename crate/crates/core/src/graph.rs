//! Finite labelled graphs, words and relative ranges.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed set `{0}`")]
    MalformedSet(String),
    #[error("malformed word `{0}`")]
    MalformedWord(String),
}

/// Compares identifiers so that embedded digit runs order numerically
/// (`v2 < v10`), falling back to plain string order on ties.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    if a.is_empty() || b.is_empty() {
        return a.cmp(b);
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = match (da, db) {
            (true, true) => {
                let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
                ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
            }
            _ => sa.cmp(sb),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Index of a letter in the graph's (canonically ordered) alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

/// A finite word over the alphabet; the empty word is `Word::empty()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, b: Letter) {
        self.0.push(b);
    }

    pub fn pushed(&self, b: Letter) -> Word {
        let mut w = self.clone();
        w.push(b);
        w
    }

    /// If `self = prefix · rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|r| Word(r.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Letters `i+1 ..= j` (1-based, inclusive), empty when `j <= i`.
    pub fn segment(&self, i: usize, j: usize) -> Word {
        if j <= i {
            Word::empty()
        } else {
            Word(self.0[i..j].to_vec())
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Order used for listings: shorter words first, then lexicographic.
    pub fn canonical_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub label: Letter,
    pub range: usize,
}

/// Edge as supplied by a caller, with vertex and letter names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: Option<String>,
    pub source: String,
    pub label: String,
    pub range: String,
}

impl EdgeSpec {
    pub fn new(source: &str, label: &str, range: &str) -> Self {
        Self {
            id: None,
            source: source.into(),
            label: label.into(),
            range: range.into(),
        }
    }
}

/// A finite directed graph whose edges carry letters.
///
/// Vertices and letters are stored in natural order, and their indices are
/// the canonical order used by every listing. Edges keep the order they
/// were supplied in.
#[derive(Debug, Clone)]
pub struct LabelledGraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    alphabet: Vec<String>,
    letter_index: HashMap<String, Letter>,
    edges: Vec<Edge>,
    by_label: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl LabelledGraph {
    /// Builds a graph. Edges without an id get `e<n>` (1-based file
    /// position). The alphabet is the set of letters used on edges.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: Vec<EdgeSpec>) -> Result<Self, GraphError> {
        let mut names: Vec<String> = Vec::with_capacity(vertices.len());
        let mut seen = BTreeSet::new();
        for v in vertices {
            let v = v.as_ref();
            if !seen.insert(v.to_string()) {
                return Err(GraphError::DuplicateVertex(v.into()));
            }
            names.push(v.into());
        }
        names.sort_by(|a, b| natural_cmp(a, b));
        let vertex_index: HashMap<String, usize> = names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();

        let mut letters: Vec<String> = edges
            .iter()
            .map(|e| e.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        letters.sort_by(|a, b| natural_cmp(a, b));
        let letter_index: HashMap<String, Letter> = letters
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), Letter(i as u32)))
            .collect();

        let mut ids = BTreeSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (k, e) in edges.into_iter().enumerate() {
            let id = e.id.unwrap_or_else(|| format!("e{}", k + 1));
            if !ids.insert(id.clone()) {
                return Err(GraphError::DuplicateEdgeId(id));
            }
            let lookup = |name: &str| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex(name.into()))
            };
            built.push(Edge {
                id,
                source: lookup(&e.source)?,
                label: letter_index[&e.label],
                range: lookup(&e.range)?,
            });
        }

        let mut by_label = vec![Vec::new(); letters.len()];
        let mut out_edges = vec![Vec::new(); names.len()];
        for (i, e) in built.iter().enumerate() {
            by_label[e.label.0 as usize].push(i);
            out_edges[e.source].push(i);
        }
        Ok(Self {
            vertices: names,
            vertex_index,
            alphabet: letters,
            letter_index,
            edges: built,
            by_label,
            out_edges,
        })
    }

    /// Shorthand for tests and fixtures: edges as `(source, label, range)`.
    pub fn from_triples(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        Self::new(vertices, edges.iter().map(|(s, l, r)| EdgeSpec::new(s, l, r)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.into()))
    }

    pub fn alphabet(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.alphabet.len() as u32).map(Letter)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn letter_name(&self, b: Letter) -> &str {
        &self.alphabet[b.0 as usize]
    }

    pub fn letter(&self, name: &str) -> Result<Letter, GraphError> {
        self.letter_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownLetter(name.into()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// `E⁰` as a set.
    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    /// `r(A, b)` for a single letter.
    pub fn relative_range_letter(&self, set: &VertexSet, b: Letter) -> VertexSet {
        self.by_label[b.0 as usize]
            .iter()
            .map(|&i| &self.edges[i])
            .filter(|e| set.contains(e.source))
            .map(|e| e.range)
            .collect()
    }

    /// `r(A, α)`, computed one letter at a time; `r(A, ω) = A`.
    pub fn relative_range(&self, set: &VertexSet, word: &[Letter]) -> VertexSet {
        let mut current = set.clone();
        for &b in word {
            if current.is_empty() {
                break;
            }
            current = self.relative_range_letter(&current, b);
        }
        current
    }

    /// `r(α) = r(E⁰, α)`.
    pub fn range(&self, word: &[Letter]) -> VertexSet {
        self.relative_range(&self.all_vertices(), word)
    }

    pub fn is_labelled_path(&self, word: &[Letter]) -> bool {
        word.is_empty() || !self.range(word).is_empty()
    }

    /// `ℒ(AE¹)`: labels of edges leaving `A`.
    pub fn label_edge_set(&self, set: &VertexSet) -> BTreeSet<Letter> {
        self.edges
            .iter()
            .filter(|e| set.contains(e.source))
            .map(|e| e.label)
            .collect()
    }

    pub fn sinks(&self) -> VertexSet {
        (0..self.vertices.len())
            .filter(|&v| self.out_edges[v].is_empty())
            .collect()
    }

    /// Always empty: a finite graph has no infinite emitters.
    pub fn infinite_emitters(&self) -> VertexSet {
        VertexSet::new()
    }

    pub fn singular_vertices(&self) -> VertexSet {
        self.sinks().union(&self.infinite_emitters())
    }

    /// Edges entering any fixed vertex carry pairwise distinct labels.
    pub fn is_left_resolving(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| seen.insert((e.range, e.label)))
    }

    /// Every labelled path of length at most `max_len`, in canonical order.
    pub fn labelled_paths_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![(Word::empty(), self.all_vertices())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, r) in &frontier {
                for b in self.alphabet() {
                    let r2 = self.relative_range_letter(r, b);
                    if !r2.is_empty() {
                        next.push((w.pushed(b), r2));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            frontier = next;
        }
        out
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, GraphError> {
        let text = text.trim();
        if text == "@" || text.is_empty() {
            return Ok(Word::empty());
        }
        text.split('.')
            .map(|part| {
                if part.is_empty() {
                    Err(GraphError::MalformedWord(text.into()))
                } else {
                    self.letter(part)
                }
            })
            .collect()
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "@".into();
        }
        word.iter().map(|&b| self.letter_name(b)).collect::<Vec<_>>().join(".")
    }

    /// Parses `{v1 v2}`; `{}` is the empty set.
    pub fn parse_set(&self, text: &str) -> Result<VertexSet, GraphError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| GraphError::MalformedSet(text.into()))?;
        if inner.contains(['{', '}']) {
            return Err(GraphError::MalformedSet(text.into()));
        }
        inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|name| self.vertex(name))
            .collect()
    }

    pub fn format_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(" "))
    }
}

/// Display helper for words.
pub struct WordDisplay<'a>(pub &'a LabelledGraph, pub &'a [Letter]);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_word(self.1))
    }
}
