//! Small labelled spaces used by tests, the acceptance suite and the
//! shipped `.lgr` files.

use crate::family::AccommodatingFamily;
use crate::graph::LabelledGraph;
use crate::vertex_set::VertexSet;

/// Four vertices, one letter: `2→1`, `1→2`, `1→3`, `1→4`, all labelled `a`.
pub fn loops4_graph() -> LabelledGraph {
    LabelledGraph::from_triples(
        &["1", "2", "3", "4"],
        &[("2", "a", "1"), ("1", "a", "2"), ("1", "a", "3"), ("1", "a", "4")],
    )
    .expect("fixture graph")
}

/// The eight-set family on [`loops4_graph`] generated by `{1}` and `{3}`.
pub fn loops4_family() -> AccommodatingFamily {
    let g = loops4_graph();
    let sets = ["{}", "{1}", "{3}", "{1 3}", "{2 4}", "{1 2 4}", "{2 3 4}", "{1 2 3 4}"]
        .iter()
        .map(|s| g.parse_set(s).expect("fixture set"))
        .collect();
    AccommodatingFamily::new(g, sets).expect("fixture family")
}

pub fn loops4_powerset() -> AccommodatingFamily {
    AccommodatingFamily::powerset(loops4_graph()).expect("fixture family")
}

/// `v1 -a1-> v2 -a2-> v3`, `v1 -a1-> v4 -a2-> {v3, v5}`, then the tail
/// `v5 -a3-> v6 -a4-> ... -> v{n}`.
pub fn chain_graph(n: usize) -> LabelledGraph {
    assert!(n >= 5, "chain needs at least five vertices");
    let names: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let mut triples: Vec<(String, String, String)> = vec![
        ("v1".into(), "a1".into(), "v2".into()),
        ("v2".into(), "a2".into(), "v3".into()),
        ("v1".into(), "a1".into(), "v4".into()),
        ("v4".into(), "a2".into(), "v3".into()),
        ("v4".into(), "a2".into(), "v5".into()),
    ];
    for k in 5..n {
        triples.push((format!("v{k}"), format!("a{}", k - 2), format!("v{}", k + 1)));
    }
    let edges = triples
        .iter()
        .map(|(s, l, r)| crate::graph::EdgeSpec::new(s, l, r))
        .collect();
    LabelledGraph::new(&names, edges).expect("fixture graph")
}

/// Sets `A` with `v4 ∈ A ⇒ v2 ∈ A` and `v5 ∈ A ⇒ v3 ∈ A`.
pub fn chain_family(n: usize) -> AccommodatingFamily {
    let g = chain_graph(n);
    let v = |name: &str| g.vertex(name).expect("fixture vertex");
    let rules = [(v("v4"), v("v2")), (v("v5"), v("v3"))];
    AccommodatingFamily::from_implications(g, &rules).expect("fixture family")
}

/// Two vertices: a `1`-loop at `v1` and a `0`-cycle `v1 ⇄ v2`.
pub fn twins1_graph() -> LabelledGraph {
    LabelledGraph::from_triples(
        &["v1", "v2"],
        &[("v1", "1", "v1"), ("v1", "0", "v2"), ("v2", "0", "v1")],
    )
    .expect("fixture graph")
}

/// Three vertices: as [`twins1_graph`] plus `v1 -1-> v3` and a `0`-loop at `v3`.
pub fn twins2_graph() -> LabelledGraph {
    LabelledGraph::from_triples(
        &["v1", "v2", "v3"],
        &[
            ("v1", "1", "v1"),
            ("v1", "1", "v3"),
            ("v3", "0", "v3"),
            ("v2", "0", "v1"),
            ("v1", "0", "v2"),
        ],
    )
    .expect("fixture graph")
}

pub fn single_loop_graph() -> LabelledGraph {
    LabelledGraph::from_triples(&["v"], &[("v", "a", "v")]).expect("fixture graph")
}

/// Two `a`-edges into one vertex from different sources; not weakly left
/// resolving with the power set.
pub fn merge_graph() -> LabelledGraph {
    LabelledGraph::from_triples(&["x", "y", "z"], &[("x", "a", "z"), ("y", "a", "z")]).expect("fixture graph")
}

pub fn set(g: &LabelledGraph, text: &str) -> VertexSet {
    g.parse_set(text).expect("fixture set")
}
