//! Modular decomposition: every non-empty graph is a singleton, a disjoint
//! union, a join, or a composition of non-empty modules via a prime
//! quotient. The tree below records that structure with maximal
//! flattening of unions and joins.

use crate::canon::canonical_form;
use crate::graph::{Atom, LabeledGraph, VertexId, VertexSet};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MDTree {
    Leaf(VertexId, Atom),
    Par(Vec<MDTree>),
    Tensor(Vec<MDTree>),
    Prime { quotient: LabeledGraph, children: Vec<MDTree> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    EmptyGraph,
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeError::EmptyGraph => write!(f, "cannot decompose the empty graph"),
        }
    }
}

impl std::error::Error for DecomposeError {}

/// Marker label for quotient and connector vertices, whose identity does
/// not matter.
pub(crate) fn slot_atom() -> Atom {
    Atom::pos("_")
}

/// Smallest module of `g` containing `seed`.
pub fn module_closure(g: &LabeledGraph, seed: &VertexSet) -> VertexSet {
    let mut s = seed.clone();
    loop {
        let mut grew = false;
        let inner: Vec<VertexId> = s.iter().copied().collect();
        if inner.len() <= 1 {
            return s;
        }
        for v in g.vertices() {
            if s.contains(&v) {
                continue;
            }
            let first = g.has_edge(v, inner[0]);
            if inner[1..].iter().any(|&x| g.has_edge(v, x) != first) {
                s.insert(v);
                grew = true;
            }
        }
        if !grew {
            return s;
        }
    }
}

/// Maximal proper modules in the case where both the graph and its
/// complement are connected; these partition the vertex set.
fn maximal_modules_prime_case(g: &LabeledGraph) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    let full = g.vertex_set();
    for v in g.vertices() {
        if out.iter().any(|m| m.contains(&v)) {
            continue;
        }
        let mut m: VertexSet = [v].into_iter().collect();
        loop {
            let mut grew = false;
            for w in g.vertices() {
                if m.contains(&w) {
                    continue;
                }
                let mut seed = m.clone();
                seed.insert(w);
                let c = module_closure(g, &seed);
                if c.len() < full.len() {
                    m = c;
                    grew = true;
                    break;
                }
            }
            if !grew {
                break;
            }
        }
        out.push(m);
    }
    out.sort_by_key(|m| *m.iter().next().unwrap());
    out
}

pub fn decompose(g: &LabeledGraph) -> Result<MDTree, DecomposeError> {
    if g.is_empty() {
        return Err(DecomposeError::EmptyGraph);
    }
    Ok(decompose_nonempty(g))
}

fn decompose_nonempty(g: &LabeledGraph) -> MDTree {
    if g.vertex_count() == 1 {
        let v = g.vertices().next().unwrap();
        return MDTree::Leaf(v, g.label(v).clone());
    }
    let comps = g.components();
    if comps.len() > 1 {
        return MDTree::Par(comps.iter().map(|c| decompose_nonempty(&g.induced(c))).collect());
    }
    let cocomps = g.co_components();
    if cocomps.len() > 1 {
        return MDTree::Tensor(cocomps.iter().map(|c| decompose_nonempty(&g.induced(c))).collect());
    }
    let slots = maximal_modules_prime_case(g);
    let children: Vec<MDTree> = slots.iter().map(|m| decompose_nonempty(&g.induced(m))).collect();
    let mut quotient = LabeledGraph::empty();
    for i in 0..slots.len() {
        quotient.add_vertex(VertexId(i as u32), slot_atom());
    }
    for (i, a) in slots.iter().enumerate() {
        for (j, b) in slots.iter().enumerate().skip(i + 1) {
            let va = *a.iter().next().unwrap();
            let vb = *b.iter().next().unwrap();
            if g.has_edge(va, vb) {
                quotient.add_edge(VertexId(i as u32), VertexId(j as u32));
            }
        }
    }
    MDTree::Prime { quotient, children }
}

pub fn recompose(t: &MDTree) -> LabeledGraph {
    match t {
        MDTree::Leaf(_, atom) => LabeledGraph::single(atom.clone()),
        MDTree::Par(children) => children
            .iter()
            .map(recompose)
            .fold(LabeledGraph::empty(), |acc, g| acc.par(&g)),
        MDTree::Tensor(children) => children
            .iter()
            .map(recompose)
            .fold(LabeledGraph::empty(), |acc, g| acc.tensor(&g)),
        MDTree::Prime { quotient, children } => {
            let parts: Vec<LabeledGraph> = children.iter().map(recompose).collect();
            quotient.compose_via(&parts).expect("quotient arity matches children")
        }
    }
}

/// True iff the graph has at least 2 vertices and only trivial modules.
pub fn is_prime(g: &LabeledGraph) -> bool {
    let n = g.vertex_count();
    if n < 2 {
        return false;
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    for (i, &v) in verts.iter().enumerate() {
        for &w in &verts[i + 1..] {
            let seed: VertexSet = [v, w].into_iter().collect();
            if module_closure(g, &seed).len() < n {
                return false;
            }
        }
    }
    true
}

/// Cographs are exactly the graphs whose decomposition has no prime node.
pub fn is_p4_free(g: &LabeledGraph) -> bool {
    fn prime_free(t: &MDTree) -> bool {
        match t {
            MDTree::Leaf(..) => true,
            MDTree::Par(cs) | MDTree::Tensor(cs) => cs.iter().all(prime_free),
            MDTree::Prime { .. } => false,
        }
    }
    g.is_empty() || prime_free(&decompose(g).expect("non-empty"))
}

pub(crate) fn par_pattern() -> LabeledGraph {
    LabeledGraph::from_parts(
        [(VertexId(0), slot_atom()), (VertexId(1), slot_atom())],
        [],
    )
}

pub(crate) fn tensor_pattern() -> LabeledGraph {
    LabeledGraph::from_parts(
        [(VertexId(0), slot_atom()), (VertexId(1), slot_atom())],
        [(VertexId(0), VertexId(1))],
    )
}

/// Multiset of connective occurrences in the tree: one prime quotient per
/// prime node, and k-1 binary par/tensor shapes for a k-ary union/join.
pub fn connectors(t: &MDTree) -> Vec<LabeledGraph> {
    let mut out = Vec::new();
    fn walk(t: &MDTree, out: &mut Vec<LabeledGraph>) {
        match t {
            MDTree::Leaf(..) => {}
            MDTree::Par(cs) => {
                for _ in 1..cs.len() {
                    out.push(par_pattern());
                }
                cs.iter().for_each(|c| walk(c, out));
            }
            MDTree::Tensor(cs) => {
                for _ in 1..cs.len() {
                    out.push(tensor_pattern());
                }
                cs.iter().for_each(|c| walk(c, out));
            }
            MDTree::Prime { quotient, children } => {
                out.push(quotient.clone());
                children.iter().for_each(|c| walk(c, out));
            }
        }
    }
    walk(t, &mut out);
    out
}

/// Prime graphs (up to isomorphism) that occur as induced subgraphs of
/// some connector of `g`. Returned sorted by canonical form.
pub fn subconnectors(g: &LabeledGraph) -> Vec<LabeledGraph> {
    if g.is_empty() {
        return Vec::new();
    }
    let tree = decompose(g).expect("non-empty");
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out: Vec<(Vec<u8>, LabeledGraph)> = Vec::new();
    for conn in connectors(&tree) {
        let verts: Vec<VertexId> = conn.vertices().collect();
        let n = verts.len();
        for mask in 1u64..(1 << n) {
            let keep: VertexSet = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let sub = conn.induced(&keep);
            if !is_prime(&sub) {
                continue;
            }
            let c = canonical_form(&sub, 64).expect("connector-sized graph");
            if seen.insert(c.clone()) {
                out.push((c, sub));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// Canonical forms of `subconnectors`, for fast membership tests.
pub fn subconnector_keys(g: &LabeledGraph) -> BTreeSet<Vec<u8>> {
    subconnectors(g)
        .iter()
        .map(|s| canonical_form(s, 64).expect("small"))
        .collect()
}

/// Canonical forms of the connectors of `g` (shapes, not occurrences).
pub fn connector_keys(g: &LabeledGraph) -> BTreeSet<Vec<u8>> {
    if g.is_empty() {
        return BTreeSet::new();
    }
    connectors(&decompose(g).expect("non-empty"))
        .iter()
        .map(|c| canonical_form(c, 64).expect("small"))
        .collect()
}

impl MDTree {
    /// Formula-style rendering, e.g. `P4<f|g, P4<a,b,c,d>, ~f*~g, ...>`.
    pub fn format(&self) -> String {
        self.format_prec(0)
    }

    // precedence: 0 par, 1 tensor, 2 atom-like
    fn format_prec(&self, prec: u8) -> String {
        match self {
            MDTree::Leaf(_, atom) => atom.to_string(),
            MDTree::Par(cs) => {
                let body = cs.iter().map(|c| c.format_prec(1)).collect::<Vec<_>>().join("|");
                if prec > 0 {
                    format!("({body})")
                } else {
                    body
                }
            }
            MDTree::Tensor(cs) => {
                let body = cs.iter().map(|c| c.format_prec(2)).collect::<Vec<_>>().join("*");
                if prec > 1 {
                    format!("({body})")
                } else {
                    body
                }
            }
            MDTree::Prime { quotient, children } => {
                // leaf-only compositions print compactly: P4<a,b,c,d>
                let sep = if children.iter().all(|c| matches!(c, MDTree::Leaf(..))) {
                    ","
                } else {
                    ", "
                };
                let body = children
                    .iter()
                    .map(|c| c.format_prec(0))
                    .collect::<Vec<_>>()
                    .join(sep);
                format!("P{}<{}>", quotient.vertex_count(), body)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            MDTree::Leaf(..) => 1,
            MDTree::Par(cs) | MDTree::Tensor(cs) => cs.iter().map(|c| c.leaf_count()).sum(),
            MDTree::Prime { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }
}


#[cfg(test)]
mod correspondence_tests {
    use super::*;
    use crate::canon::isomorphic;
    use crate::formula::from_cograph;
    use crate::io::parse_graph;
    use crate::testutil::*;

    #[test]
    fn composition_rebuilds_the_nested_example() {
        // compose the four slot graphs via the 4-slot prime and compare
        // with the bundled file
        let p4 = p4_pattern();
        let parts = vec![
            graph_of("f|g"),
            path_graph(&["a", "b", "c", "d"]),
            graph_of("~f*~g"),
            path_graph_labels(&[
                Atom::neg("a"),
                Atom::neg("b"),
                Atom::neg("c"),
                Atom::neg("d"),
            ]),
        ];
        let composed = p4.compose_via(&parts).unwrap();
        let bundled = parse_graph(
            crate::suite::CORPUS
                .iter()
                .find(|(n, _)| *n == "eq3_3.graph")
                .unwrap()
                .1,
        )
        .unwrap();
        assert!(isomorphic(&composed, &bundled));
    }

    #[test]
    fn cograph_characterizations_agree_to_five_vertices() {
        for g in all_graphs_upto(5, &["a"]) {
            let via_tree = is_p4_free(&g);
            let via_scan = !has_induced_p4(&g);
            let via_formula = g.is_empty() || from_cograph(&g).is_some();
            assert_eq!(via_tree, via_scan);
            assert_eq!(via_tree, via_formula);
        }
    }
}
