//! The inverse semigroup of a labelled space: triples `(α, A, β)` with
//! `A ∈ ℬ_α ∩ ℬ_β` nonempty, plus a zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::family::LabelledSpace;
use crate::graph::{LabelledGraph, Word};
use crate::vertex_set::VertexSet;

/// A nonzero element. Fields are private so every value has passed
/// [`LabelledSpace::element`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    alpha: Word,
    set: VertexSet,
    beta: Word,
}

impl Triple {
    pub fn alpha(&self) -> &Word {
        &self.alpha
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    pub fn beta(&self) -> &Word {
        &self.beta
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SElement {
    Zero,
    Triple(Triple),
}

impl SElement {
    pub fn is_zero(&self) -> bool {
        matches!(self, SElement::Zero)
    }

    pub fn as_triple(&self) -> Option<&Triple> {
        match self {
            SElement::Zero => None,
            SElement::Triple(t) => Some(t),
        }
    }

    pub fn inverse(&self) -> SElement {
        match self {
            SElement::Zero => SElement::Zero,
            SElement::Triple(t) => SElement::Triple(Triple {
                alpha: t.beta.clone(),
                set: t.set.clone(),
                beta: t.alpha.clone(),
            }),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        match self {
            SElement::Zero => true,
            SElement::Triple(t) => t.alpha == t.beta,
        }
    }

    pub fn display<'a>(&'a self, g: &'a LabelledGraph) -> ElementDisplay<'a> {
        ElementDisplay(g, self)
    }
}

pub struct ElementDisplay<'a>(&'a LabelledGraph, &'a SElement);

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0;
        match self.1 {
            SElement::Zero => f.write_str("0"),
            SElement::Triple(t) => write!(
                f,
                "({},{},{})",
                g.format_word(&t.alpha),
                g.format_set(&t.set),
                g.format_word(&t.beta)
            ),
        }
    }
}

impl LabelledSpace {
    /// Builds `(α, A, β)`, collapsing `A = ∅` to zero and rejecting
    /// anything outside `ℬ_α ∩ ℬ_β`.
    pub fn element(&self, alpha: Word, set: VertexSet, beta: Word) -> Result<SElement> {
        let g = self.graph();
        for w in [&alpha, &beta] {
            if !g.is_labelled_path(w) {
                return Err(Error::NotLabelledPath(g.format_word(w)));
            }
        }
        if !self.contains(&set) {
            return Err(Error::InvalidElement(format!(
                "{} is not in the family",
                g.format_set(&set)
            )));
        }
        if !set.is_subset(&g.range(&alpha).intersection(&g.range(&beta))) {
            return Err(Error::InvalidElement(format!(
                "{} is not contained in r({}) ∩ r({})",
                g.format_set(&set),
                g.format_word(&alpha),
                g.format_word(&beta)
            )));
        }
        Ok(self.element_unchecked(alpha, set, beta))
    }

    fn element_unchecked(&self, alpha: Word, set: VertexSet, beta: Word) -> SElement {
        if set.is_empty() {
            SElement::Zero
        } else {
            SElement::Triple(Triple { alpha, set, beta })
        }
    }

    /// `(α, A, α)`.
    pub fn idempotent(&self, word: Word, set: VertexSet) -> Result<SElement> {
        self.element(word.clone(), set, word)
    }

    pub fn multiply(&self, s: &SElement, t: &SElement) -> SElement {
        let (SElement::Triple(s), SElement::Triple(t)) = (s, t) else {
            return SElement::Zero;
        };
        let g = self.graph();
        if let Some(gamma1) = t.alpha.strip_prefix(&s.beta) {
            let set = g.relative_range(&s.set, &gamma1).intersection(&t.set);
            self.element_unchecked(s.alpha.concat(&gamma1), set, t.beta.clone())
        } else if let Some(beta1) = s.beta.strip_prefix(&t.alpha) {
            let set = s.set.intersection(&g.relative_range(&t.set, &beta1));
            self.element_unchecked(s.alpha.clone(), set, t.beta.concat(&beta1))
        } else {
            SElement::Zero
        }
    }

    /// `p ≤ q` for idempotents: `α_p = α_q α'` and `A_p ⊆ r(A_q, α')`.
    pub fn leq(&self, p: &SElement, q: &SElement) -> Result<bool> {
        for e in [p, q] {
            if !e.is_idempotent() {
                return Err(Error::NotIdempotent(e.display(self.graph()).to_string()));
            }
        }
        Ok(match (p, q) {
            (SElement::Zero, _) => true,
            (_, SElement::Zero) => false,
            (SElement::Triple(p), SElement::Triple(q)) => match p.alpha.strip_prefix(&q.alpha) {
                Some(rest) => p.set.is_subset(&self.graph().relative_range(&q.set, &rest)),
                None => false,
            },
        })
    }

    pub fn meet(&self, p: &SElement, q: &SElement) -> Result<SElement> {
        for e in [p, q] {
            if !e.is_idempotent() {
                return Err(Error::NotIdempotent(e.display(self.graph()).to_string()));
            }
        }
        Ok(self.multiply(p, q))
    }

    /// Zero and every triple whose words have length at most `max_len`,
    /// in a fixed order.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<SElement> {
        let g = self.graph();
        let words = g.labelled_paths_up_to(max_len);
        let ranges: Vec<VertexSet> = words.iter().map(|w| g.range(w)).collect();
        let mut out = vec![SElement::Zero];
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                let top = ranges[i].intersection(&ranges[j]);
                for set in self.sets_within(&top).filter(|s| !s.is_empty()) {
                    out.push(self.element_unchecked(a.clone(), set.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Idempotents among [`Self::elements_up_to`].
    pub fn idempotents_up_to(&self, max_len: usize) -> Vec<SElement> {
        let g = self.graph();
        let mut out = vec![SElement::Zero];
        for w in g.labelled_paths_up_to(max_len) {
            let top = g.range(&w);
            for set in self.sets_within(&top).filter(|s| !s.is_empty()) {
                out.push(self.element_unchecked(w.clone(), set.clone(), w.clone()));
            }
        }
        out
    }

    /// Parses `0` or `(word,{v ...},word)`.
    pub fn parse_element(&self, text: &str) -> Result<SElement> {
        let text = text.trim();
        if text == "0" {
            return Ok(SElement::Zero);
        }
        let malformed = || Error::Syntax(format!("cannot parse element `{text}`"));
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(malformed)?;
        let open = inner.find('{').ok_or_else(malformed)?;
        let close = inner.rfind('}').ok_or_else(malformed)?;
        if close < open {
            return Err(malformed());
        }
        let alpha = inner[..open].trim().strip_suffix(',').ok_or_else(malformed)?;
        let beta = inner[close + 1..].trim().strip_prefix(',').ok_or_else(malformed)?;
        let g = self.graph();
        let alpha = g.parse_word(alpha)?;
        let beta = g.parse_word(beta)?;
        let set = g.parse_set(&inner[open..=close])?;
        self.element(alpha, set, beta)
    }

    pub fn format_element(&self, s: &SElement) -> String {
        s.display(self.graph()).to_string()
    }
}
