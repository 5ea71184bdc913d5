//! The `.lgr` text format and the text forms of filters and listings.
//!
//! ```text
//! # comment
//! vertices 1 2 3 4
//! edge 2 a 1
//! edge loop: 1 a 2
//! family explicit {} {1} {2 4}
//! ```
//!
//! The family line is one of `powerset`, `explicit {..}{..}`,
//! `closure {..}{..}` or `implies p=>q ...` (all sets closed under the
//! implications).

use crate::error::{Error, Result};
use crate::family::{validate, AccommodatingFamily, LabelledSpace, ValidationReport};
use crate::filter::{FilterFamily, Tail, TransitionGraph, TransitionNode};
use crate::graph::{EdgeSpec, LabelledGraph, Word};
use crate::spectra::BoundaryPath;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Powerset,
    Explicit(Vec<VertexSet>),
    Closure(Vec<VertexSet>),
    Implies(Vec<(usize, usize)>),
}

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: LabelledGraph,
    pub family: FamilySpec,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn check_name(line: usize, kind: &str, name: &str) -> Result<()> {
    let bad =
        name.is_empty() || name == "@" || name.contains(|c: char| "{}()[],;:#=.".contains(c) || c.is_whitespace());
    if bad {
        return Err(parse_err(line, format!("invalid {kind} name `{name}`")));
    }
    Ok(())
}

/// Splits `{a b}{c} {}` into set bodies.
fn set_list(g: &LabelledGraph, line: usize, text: &str) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        if !rest.starts_with('{') {
            return Err(parse_err(line, format!("expected `{{` at `{rest}`")));
        }
        let end = rest.find('}').ok_or_else(|| parse_err(line, "unterminated set"))?;
        out.push(g.parse_set(&rest[..=end]).map_err(|e| parse_err(line, e.to_string()))?);
        rest = rest[end + 1..].trim_start();
    }
    Ok(out)
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Option<(usize, Vec<String>)> = None;
        let mut edges: Vec<EdgeSpec> = Vec::new();
        let mut family: Option<(usize, String)> = None;
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last = line;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            match keyword {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(parse_err(line, "second `vertices` line"));
                    }
                    let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                    for (k, n) in names.iter().enumerate() {
                        check_name(line, "vertex", n)?;
                        if names[..k].contains(n) {
                            return Err(parse_err(line, format!("duplicate vertex `{n}`")));
                        }
                    }
                    vertices = Some((line, names));
                }
                "edge" => {
                    let Some((_, names)) = &vertices else {
                        return Err(parse_err(line, "`edge` before `vertices`"));
                    };
                    let (id, body) = match rest.split_once(':') {
                        Some((id, body)) => {
                            let id = id.trim();
                            check_name(line, "edge id", id)?;
                            (Some(id.to_string()), body)
                        }
                        None => (None, rest),
                    };
                    let parts: Vec<&str> = body.split_whitespace().collect();
                    let [src, label, dst] = parts[..] else {
                        return Err(parse_err(line, "expected `edge [ID:] SRC LABEL DST`"));
                    };
                    check_name(line, "letter", label)?;
                    for v in [src, dst] {
                        if !names.iter().any(|n| n == v) {
                            return Err(parse_err(line, format!("unknown vertex `{v}`")));
                        }
                    }
                    let auto = format!("e{}", edges.len() + 1);
                    let this_id = id.clone().unwrap_or(auto);
                    let clash = edges
                        .iter()
                        .enumerate()
                        .any(|(k, e)| e.id.clone().unwrap_or_else(|| format!("e{}", k + 1)) == this_id);
                    if clash {
                        return Err(parse_err(line, format!("duplicate edge id `{this_id}`")));
                    }
                    let mut spec = EdgeSpec::new(src, label, dst);
                    spec.id = id;
                    edges.push(spec);
                }
                "family" => {
                    if family.is_some() {
                        return Err(parse_err(line, "second `family` line"));
                    }
                    family = Some((line, rest.to_string()));
                }
                other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            }
        }
        let (vline, names) = vertices.ok_or_else(|| parse_err(last.max(1), "missing `vertices` line"))?;
        let graph = LabelledGraph::new(&names, edges).map_err(|e| parse_err(vline, e.to_string()))?;
        let (fline, ftext) = family.ok_or_else(|| parse_err(last.max(1), "missing `family` line"))?;
        let (kind, body) = ftext.split_once(char::is_whitespace).unwrap_or((&ftext, ""));
        let family = match kind {
            "powerset" if body.trim().is_empty() => FamilySpec::Powerset,
            "explicit" => FamilySpec::Explicit(set_list(&graph, fline, body)?),
            "closure" => FamilySpec::Closure(set_list(&graph, fline, body)?),
            "implies" => FamilySpec::Implies(
                body.split_whitespace()
                    .map(|rule| {
                        let (p, q) = rule
                            .split_once("=>")
                            .ok_or_else(|| parse_err(fline, format!("expected `p=>q`, got `{rule}`")))?;
                        let v = |n: &str| graph.vertex(n).map_err(|e| parse_err(fline, e.to_string()));
                        Ok((v(p)?, v(q)?))
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(parse_err(fline, format!("unknown family `{ftext}`"))),
        };
        Ok(Self { graph, family })
    }

    /// Canonical text: comments dropped, vertices in natural order, edges
    /// in file order, family sets sorted.
    pub fn to_canonical(&self) -> String {
        let g = &self.graph;
        let mut out = format!("vertices {}\n", g.vertex_names().join(" "));
        for (k, e) in g.edges().iter().enumerate() {
            let body = format!(
                "{} {} {}",
                g.vertex_name(e.source),
                g.letter_name(e.label),
                g.vertex_name(e.range)
            );
            if e.id == format!("e{}", k + 1) {
                out += &format!("edge {body}\n");
            } else {
                out += &format!("edge {}: {body}\n", e.id);
            }
        }
        let sets = |v: &[VertexSet]| {
            let mut v = v.to_vec();
            v.sort();
            v.dedup();
            v.iter().map(|s| g.format_set(s)).collect::<Vec<_>>().join(" ")
        };
        out += &match &self.family {
            FamilySpec::Powerset => "family powerset\n".to_string(),
            FamilySpec::Explicit(v) => format!("family explicit {}\n", sets(v)),
            FamilySpec::Closure(v) => format!("family closure {}\n", sets(v)),
            FamilySpec::Implies(rules) => {
                let mut rules = rules.clone();
                rules.sort();
                rules.dedup();
                let r: Vec<String> = rules
                    .iter()
                    .map(|&(p, q)| format!("{}=>{}", g.vertex_name(p), g.vertex_name(q)))
                    .collect();
                format!("family implies {}\n", r.join(" "))
            }
        };
        out
    }

    pub fn build(&self) -> Result<AccommodatingFamily> {
        let g = self.graph.clone();
        match &self.family {
            FamilySpec::Powerset => AccommodatingFamily::powerset(g),
            FamilySpec::Explicit(v) => AccommodatingFamily::new(g, v.clone()),
            FamilySpec::Closure(v) => AccommodatingFamily::closure(g, v),
            FamilySpec::Implies(r) => AccommodatingFamily::from_implications(g, r),
        }
    }

    /// Validation flags of the family; explicit families are checked as
    /// given, even when they are not accommodating.
    pub fn report(&self) -> Result<ValidationReport> {
        match &self.family {
            FamilySpec::Explicit(v) => Ok(validate(&self.graph, v)),
            _ => Ok(self.build()?.report().clone()),
        }
    }

    pub fn space(&self) -> Result<LabelledSpace> {
        LabelledSpace::new(self.build()?)
    }
}

fn level(g: &LabelledGraph, s: Option<&VertexSet>) -> String {
    s.map_or_else(|| "-".to_string(), |s| g.format_set(s))
}

/// `word ; gens=[g0 g1 ...]` or `prefix(cycle)^inf ; gens=[...]`, where
/// level 0 is `-` when empty. The cycle is the period of the whole family,
/// which may be a multiple of the period of the word.
pub fn format_family(g: &LabelledGraph, fam: &FilterFamily) -> String {
    let mut gens = vec![level(g, fam.zero())];
    match fam.tail() {
        Tail::Finite(steps) => {
            gens.extend(steps.iter().map(|s| g.format_set(&s.generator)));
            let word: Vec<_> = steps.iter().map(|s| s.letter).collect();
            format!("{} ; gens=[{}]", g.format_word(&word), gens.join(" "))
        }
        Tail::Lasso(l) => {
            gens.extend(l.prefix().iter().chain(l.cycle()).map(|s| g.format_set(&s.generator)));
            let p: Vec<_> = l.prefix().iter().map(|s| s.letter).collect();
            let c: Vec<_> = l.cycle().iter().map(|s| s.letter).collect();
            let prefix = if p.is_empty() { String::new() } else { g.format_word(&p) };
            format!("{prefix}({})^inf ; gens=[{}]", g.format_word(&c), gens.join(" "))
        }
    }
}

/// `word ; gen={..}`: a finite-type filter by its top level.
pub fn format_finite_type(g: &LabelledGraph, fam: &FilterFamily) -> String {
    let word = fam.word().expect("finite family");
    format!("{} ; gen={}", g.format_word(&word), level(g, fam.top()))
}

fn parse_gens(g: &LabelledGraph, text: &str) -> Result<Vec<Option<VertexSet>>> {
    let bad = || Error::Syntax(format!("expected `[{{..}} ...]`, got `{text}`"));
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let mut out = Vec::new();
    let mut rest = inner.trim_start();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('-') {
            out.push(None);
            rest = r.trim_start();
            continue;
        }
        let end = rest.find('}').ok_or_else(bad)?;
        let s = g.parse_set(&rest[..=end])?;
        out.push(if s.is_empty() && out.is_empty() { None } else { Some(s) });
        rest = rest[end + 1..].trim_start();
    }
    Ok(out)
}

/// Parses the forms printed by [`format_family`] and
/// [`format_finite_type`]. `word ; gen={..}` builds the complete family of
/// that finite-type filter.
pub fn parse_family(space: &LabelledSpace, text: &str) -> Result<FilterFamily> {
    let g = space.graph();
    let (word_part, gen_part) = text
        .split_once(';')
        .ok_or_else(|| Error::Syntax(format!("expected `WORD ; gen=..` or `WORD ; gens=[..]`, got `{text}`")))?;
    let word_part = word_part.trim();
    let gen_part = gen_part.trim();
    if let Some(open) = word_part.find('(') {
        let body = word_part[open + 1..]
            .strip_suffix(")^inf")
            .ok_or_else(|| Error::Syntax(format!("expected `prefix(cycle)^inf`, got `{word_part}`")))?;
        let prefix = g.parse_word(&word_part[..open])?;
        let cycle = g.parse_word(body)?;
        let gens = gen_part
            .strip_prefix("gens=")
            .ok_or_else(|| Error::Syntax("infinite words need `gens=[..]`".into()))?;
        return space.lasso_family(&prefix, &cycle, parse_gens(g, gens)?);
    }
    let word: Word = g.parse_word(word_part)?;
    if let Some(top) = gen_part.strip_prefix("gen=") {
        space.finite_type(&word, g.parse_set(top)?)
    } else if let Some(gens) = gen_part.strip_prefix("gens=") {
        space.finite_family(&word, parse_gens(g, gens)?)
    } else {
        Err(Error::Syntax(format!("expected `gen=` or `gens=`, got `{gen_part}`")))
    }
}

fn node(g: &LabelledGraph, n: &TransitionNode) -> String {
    format!("({} ; {})", g.format_set(&n.range), g.format_set(&n.atom))
}

/// One line per edge, `(R ; gen) -b-> (R' ; gen')`, entry edges from
/// `root`. An edge means level `n+1` may follow level `n`.
pub fn format_transition_graph(g: &LabelledGraph, tg: &TransitionGraph) -> String {
    let mut out = String::new();
    for (i, n) in tg.nodes.iter().enumerate() {
        out += &format!("node {i} {}\n", node(g, n));
    }
    for &(b, t) in &tg.entries {
        out += &format!("root -{}-> {}\n", g.letter_name(b), node(g, &tg.nodes[t]));
    }
    for &(s, b, t) in &tg.edges {
        out += &format!(
            "{} -{}-> {}\n",
            node(g, &tg.nodes[s]),
            g.letter_name(b),
            node(g, &tg.nodes[t])
        );
    }
    out
}

pub fn format_boundary_path(g: &LabelledGraph, p: &BoundaryPath) -> String {
    let ids = |es: &[usize]| {
        es.iter()
            .map(|&e| g.edges()[e].id.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let word = |es: &[usize]| g.format_word(&es.iter().map(|&e| g.edges()[e].label).collect::<Vec<_>>());
    let base = g.vertex_name(p.source(g));
    match p {
        BoundaryPath::Finite { edges, .. } => {
            format!("finite base={base} edges=[{}] word={}", ids(edges), word(edges))
        }
        BoundaryPath::Infinite(l) => {
            let pre = |s: String| if l.prefix().is_empty() { String::new() } else { s };
            format!(
                "infinite base={base} edges=[{}]({})^inf word={}({})^inf",
                ids(l.prefix()),
                ids(l.cycle()),
                pre(word(l.prefix())),
                word(l.cycle())
            )
        }
    }
}
