use std::collections::BTreeSet;

use lspace::fixtures;
use lspace::{AccommodatingFamily, FilterFamily, LabelledSpace, PrincipalFilter, VertexSet, Word};

fn spaces() -> Vec<(&'static str, LabelledSpace)> {
    let ps = |g| LabelledSpace::new(AccommodatingFamily::powerset(g).unwrap()).unwrap();
    vec![
        ("loops4", LabelledSpace::new(fixtures::loops4_family()).unwrap()),
        (
            "loops4-powerset",
            LabelledSpace::new(fixtures::loops4_powerset()).unwrap(),
        ),
        ("chain7", LabelledSpace::new(fixtures::chain_family(7)).unwrap()),
        ("twins1", ps(fixtures::twins1_graph())),
        ("twins2", ps(fixtures::twins2_graph())),
    ]
}

type SetFamily = BTreeSet<VertexSet>;

/// Every filter of the finite meet-semilattice `elements` (which contains
/// `∅` as its least element), by trying every subset.
fn brute_force_filters(elements: &[VertexSet]) -> Vec<SetFamily> {
    let nonzero: Vec<&VertexSet> = elements.iter().filter(|s| !s.is_empty()).collect();
    assert!(nonzero.len() <= 16, "subset enumeration too large");
    let mut out = Vec::new();
    for mask in 1u32..(1 << nonzero.len()) {
        let x: SetFamily = (0..nonzero.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| nonzero[i].clone())
            .collect();
        let upward = x
            .iter()
            .all(|a| nonzero.iter().all(|b| !a.is_subset(b) || x.contains(*b)));
        let meets = x.iter().all(|a| x.iter().all(|b| x.contains(&a.intersection(b))));
        if upward && meets {
            out.push(x);
        }
    }
    out
}

fn up(elements: &[VertexSet], gen: &VertexSet) -> SetFamily {
    elements.iter().filter(|a| gen.is_subset(a)).cloned().collect()
}

fn small_words(s: &LabelledSpace, max: usize) -> Vec<Word> {
    s.graph()
        .labelled_paths_up_to(max)
        .into_iter()
        .filter(|w| s.restricted_algebra(w).unwrap().elements.len() <= 17)
        .collect()
}

#[test]
fn principal_filters_are_all_filters() {
    for (name, s) in spaces() {
        for w in small_words(&s, 3) {
            let alg = s.restricted_algebra(&w).unwrap();
            let mut brute: Vec<SetFamily> = brute_force_filters(&alg.elements);
            let mut principal: Vec<SetFamily> = s
                .filters_at(&w)
                .unwrap()
                .iter()
                .map(|f| up(&alg.elements, &f.generator))
                .collect();
            brute.sort();
            principal.sort();
            assert_eq!(brute, principal, "{name} at {}", s.graph().format_word(&w));

            let maximal: Vec<&SetFamily> = brute
                .iter()
                .filter(|x| !brute.iter().any(|y| y != *x && x.is_subset(y)))
                .collect();
            let mut ultra: Vec<SetFamily> = s
                .ultrafilters_at(&w)
                .unwrap()
                .iter()
                .map(|f| up(&alg.elements, &f.generator))
                .collect();
            ultra.sort();
            assert_eq!(maximal.into_iter().cloned().collect::<Vec<_>>(), ultra, "{name}");
        }
    }
}

#[test]
fn ultrafilter_meet_criterion() {
    // A filter is maximal iff everything meeting all of its members is in it.
    for (name, s) in spaces() {
        for w in small_words(&s, 3) {
            let alg = s.restricted_algebra(&w).unwrap();
            let ultra: Vec<SetFamily> = s
                .ultrafilters_at(&w)
                .unwrap()
                .iter()
                .map(|f| up(&alg.elements, &f.generator))
                .collect();
            for f in s.filters_at(&w).unwrap() {
                let x = up(&alg.elements, &f.generator);
                let meeting = alg
                    .elements
                    .iter()
                    .filter(|y| x.iter().all(|a| !a.intersection(y).is_empty()))
                    .all(|y| x.contains(y));
                assert_eq!(meeting, ultra.contains(&x), "{name}");
            }
        }
    }
}

#[test]
fn boolean_ultrafilters_decide_every_element() {
    for (name, s) in spaces() {
        if !s.is_complement_closed() {
            continue;
        }
        for w in small_words(&s, 3) {
            let alg = s.restricted_algebra(&w).unwrap();
            let Some(top) = &alg.top else { continue };
            let ultra: Vec<SetFamily> = s
                .ultrafilters_at(&w)
                .unwrap()
                .iter()
                .map(|f| up(&alg.elements, &f.generator))
                .collect();
            for f in s.filters_at(&w).unwrap() {
                let x = up(&alg.elements, &f.generator);
                let decides = alg
                    .elements
                    .iter()
                    .all(|a| x.contains(a) != x.contains(&top.difference(a)));
                assert_eq!(decides, ultra.contains(&x), "{name}");
            }
        }
    }
}

#[test]
fn ultrafilters_are_atom_filters() {
    for (_, s) in spaces() {
        for w in small_words(&s, 3) {
            let alg = s.restricted_algebra(&w).unwrap();
            let gens: Vec<VertexSet> = s
                .ultrafilters_at(&w)
                .unwrap()
                .into_iter()
                .map(|f| f.generator)
                .collect();
            let mut atoms = alg.atoms.clone();
            atoms.sort();
            let mut sorted = gens.clone();
            sorted.sort();
            assert_eq!(sorted, atoms);
            for a in &atoms {
                assert!(alg.elements.iter().all(|b| b.is_empty() || !b.is_subset(a) || b == a));
            }
        }
    }
}

#[test]
fn f_map_is_the_pull_back_formula() {
    for (name, s) in spaces() {
        let g = s.graph();
        for ab in small_words(&s, 3) {
            for split in 0..=ab.len() {
                let alpha = ab.prefix(split);
                let beta = ab.segment(split, ab.len());
                let alg = s.restricted_algebra(&alpha).unwrap();
                let alg_ab = s.restricted_algebra(&ab).unwrap();
                for f in s.filters_at(&ab).unwrap() {
                    let target = up(&alg_ab.elements, &f.generator);
                    let oracle: SetFamily = alg
                        .elements
                        .iter()
                        .filter(|a| target.contains(&g.relative_range(a, &beta)))
                        .cloned()
                        .collect();
                    let got = s.f_map(&alpha, &beta, &f).unwrap();
                    match got {
                        None => assert!(oracle.is_empty(), "{name}"),
                        Some(p) => {
                            assert_eq!(p.word, alpha);
                            assert_eq!(up(&alg.elements, &p.generator), oracle, "{name}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn f_map_composition() {
    for (name, s) in spaces() {
        for abc in small_words(&s, 3) {
            for i in 0..=abc.len() {
                for j in i..=abc.len() {
                    let alpha = abc.prefix(i);
                    let ab = abc.prefix(j);
                    let beta = abc.segment(i, j);
                    let gamma = abc.segment(j, abc.len());
                    let bg = abc.segment(i, abc.len());
                    for f in s.filters_at(&abc).unwrap() {
                        let direct = s.f_map(&alpha, &bg, &f).unwrap();
                        let inner: Option<PrincipalFilter> = s.f_map(&ab, &gamma, &f).unwrap();
                        match inner {
                            Some(mid) => assert_eq!(s.f_map(&alpha, &beta, &mid).unwrap(), direct, "{name}"),
                            None => assert_eq!(direct, None, "{name}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn f_map_monotone_and_identity() {
    for (_, s) in spaces() {
        for w in small_words(&s, 2) {
            let filters = s.filters_at(&w).unwrap();
            for f in &filters {
                assert_eq!(s.f_map(&w, &Word::empty(), f).unwrap().as_ref(), Some(f));
            }
            for split in 0..=w.len() {
                let (a, b) = (w.prefix(split), w.segment(split, w.len()));
                for f in &filters {
                    for h in &filters {
                        // ↑f ⊆ ↑h when h's generator contains f's.
                        if f.generator.is_subset(&h.generator) {
                            let (x, y) = (s.f_map(&a, &b, f).unwrap(), s.f_map(&a, &b, h).unwrap());
                            if let Some(x) = x {
                                let y = y.expect("larger filter pulls back to something");
                                assert!(x.generator.is_subset(&y.generator));
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Every lasso family on loops4 with prefix ≤ 1 and cycle ≤ 2, and every
/// finite family with word length ≤ 3, that is admissible.
fn loops4_admissible() -> (LabelledSpace, Vec<FilterFamily>) {
    let s = LabelledSpace::new(fixtures::loops4_family()).unwrap();
    let g = s.graph();
    let nonempty: Vec<VertexSet> = s.sets().iter().filter(|x| !x.is_empty()).cloned().collect();
    let mut level0: Vec<Option<VertexSet>> = vec![None];
    level0.extend(nonempty.iter().cloned().map(Some));
    let a = g.parse_word("a").unwrap();
    let mut out = Vec::new();
    let product = |len: usize| -> Vec<Vec<Option<VertexSet>>> {
        let mut acc: Vec<Vec<Option<VertexSet>>> = level0.iter().map(|z| vec![z.clone()]).collect();
        for _ in 0..len {
            acc = acc
                .iter()
                .flat_map(|v| {
                    nonempty
                        .iter()
                        .map(move |x| [v.clone(), vec![Some(x.clone())]].concat())
                })
                .collect();
        }
        acc
    };
    for (p, c) in [(0, 1), (0, 2), (1, 1), (1, 2)] {
        let prefix: Word = (0..p).map(|_| a[0]).collect();
        let cycle: Word = (0..c).map(|_| a[0]).collect();
        for gens in product(p + c) {
            let fam = s.lasso_family(&prefix, &cycle, gens).unwrap();
            if s.is_admissible(&fam) {
                out.push(fam);
            }
        }
    }
    for d in 1..=3 {
        let word: Word = (0..d).map(|_| a[0]).collect();
        for gens in product(d) {
            let fam = s.finite_family(&word, gens).unwrap();
            if s.is_admissible(&fam) {
                out.push(fam);
            }
        }
    }
    out.sort();
    out.dedup();
    (s, out)
}

/// Membership in the filter generated by an admissible family, unrolled
/// for a fixed number of levels instead of detecting repetition.
fn member_oracle(s: &LabelledSpace, fam: &FilterFamily, word: &Word, set: &VertexSet) -> bool {
    let g = s.graph();
    let i = word.len();
    if fam.depth().is_some_and(|d| i > d) || fam.word_prefix(i) != *word {
        return false;
    }
    let last = fam.depth().unwrap_or(i + 40);
    let mut cur = set.clone();
    for m in i..=last {
        if m > i {
            cur = g.relative_range_letter(&cur, fam.step(m).unwrap().letter);
        }
        if fam.generator(m).is_some_and(|gen| gen.is_subset(&cur)) {
            return true;
        }
    }
    false
}

#[test]
fn completion_laws() {
    let (s, fams) = loops4_admissible();
    assert!(fams.len() > 100);
    let idem = s.idempotents_up_to(4);
    for fam in &fams {
        let done = s.complete_family(fam).unwrap();
        assert_eq!(s.completion_by_search(fam).unwrap(), done);
        assert!(s.is_complete(&done));
        assert_eq!(s.complete_family(&done).unwrap(), done);
        let levels = fam.depth().unwrap_or(8);
        for n in 0..=levels {
            match (fam.generator(n), done.generator(n)) {
                (Some(x), Some(y)) => assert!(y.is_subset(x)),
                (Some(_), None) => panic!("completion lost a level"),
                _ => {}
            }
        }
        for p in &idem {
            let Some(t) = p.as_triple() else { continue };
            let oracle = member_oracle(&s, fam, t.alpha(), t.set());
            assert_eq!(s.es_member(fam, p).unwrap(), oracle);
            assert_eq!(s.es_member(&done, p).unwrap(), oracle);
            assert_eq!(s.es_member_complete(&done, p).unwrap(), oracle);
        }
    }
}

#[test]
fn complete_families_are_fixed_by_their_recurrence() {
    // Completeness at one step implies the multi-step recurrence.
    let (s, fams) = loops4_admissible();
    let g = s.graph();
    for fam in fams.iter().filter(|f| s.is_complete(f)) {
        let top = fam.depth().unwrap_or(6);
        for n in 0..top {
            for m in n + 1..=top {
                let seg: Word = (n + 1..=m).map(|k| fam.step(k).unwrap().letter).collect();
                let alg = s.restricted_algebra(&fam.word_prefix(n)).unwrap();
                let gen_m = fam.generator(m).unwrap();
                let pulled: SetFamily = alg
                    .elements
                    .iter()
                    .filter(|a| gen_m.is_subset(&g.relative_range(a, &seg)))
                    .cloned()
                    .collect();
                let level: SetFamily = fam.generator(n).map_or_else(SetFamily::new, |x| up(&alg.elements, x));
                assert_eq!(level, pulled);
            }
        }
    }
}
