//! Labelled simple graphs and the algebra used by the proof system:
//! duality, par, tensor, composition via a quotient, modules and contexts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A signed propositional atom. `~a` is the dual of `a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub polarity: Polarity,
}

impl Atom {
    pub fn pos(name: &str) -> Atom {
        Atom { name: name.to_string(), polarity: Polarity::Positive }
    }

    pub fn neg(name: &str) -> Atom {
        Atom { name: name.to_string(), polarity: Polarity::Negative }
    }

    pub fn dual(&self) -> Atom {
        Atom {
            name: self.name.clone(),
            polarity: match self.polarity {
                Polarity::Positive => Polarity::Negative,
                Polarity::Negative => Polarity::Positive,
            },
        }
    }

    pub fn is_dual_of(&self, other: &Atom) -> bool {
        self.name == other.name && self.polarity != other.polarity
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "{}", self.name),
            Polarity::Negative => write!(f, "~{}", self.name),
        }
    }
}

/// Vertex ids are opaque and local to a graph; operations that combine
/// graphs renumber them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// Finite simple undirected graph with atom-labelled vertices.
/// Edges are stored as ordered pairs `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LabeledGraph {
    verts: BTreeMap<VertexId, Atom>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

fn ordered(v: VertexId, w: VertexId) -> (VertexId, VertexId) {
    if v < w {
        (v, w)
    } else {
        (w, v)
    }
}

/// Lexicographic size measure `(vertex count, edges of the dual)`.
/// It strictly decreases bottom-up along every rule except the identity
/// up rules, which bounds proof length by n^2 + n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeMeasure {
    pub vertex_count: usize,
    pub dual_edge_count: usize,
}

impl LabeledGraph {
    pub fn empty() -> LabeledGraph {
        LabeledGraph::default()
    }

    pub fn single(atom: Atom) -> LabeledGraph {
        let mut g = LabeledGraph::default();
        g.verts.insert(VertexId(0), atom);
        g
    }

    pub fn from_parts(
        verts: impl IntoIterator<Item = (VertexId, Atom)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> LabeledGraph {
        let mut g = LabeledGraph::default();
        for (v, a) in verts {
            g.verts.insert(v, a);
        }
        for (v, w) in edges {
            g.add_edge(v, w);
        }
        g
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.verts.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.verts.keys().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn label(&self, v: VertexId) -> &Atom {
        &self.verts[&v]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.verts.contains_key(&v)
    }

    pub fn add_vertex(&mut self, v: VertexId, atom: Atom) {
        debug_assert!(!self.verts.contains_key(&v));
        self.verts.insert(v, atom);
    }

    pub fn add_edge(&mut self, v: VertexId, w: VertexId) {
        assert!(v != w, "self-loops are not allowed");
        assert!(self.verts.contains_key(&v) && self.verts.contains_key(&w));
        self.edges.insert(ordered(v, w));
    }

    pub fn remove_edge(&mut self, v: VertexId, w: VertexId) {
        self.edges.remove(&ordered(v, w));
    }

    pub fn has_edge(&self, v: VertexId, w: VertexId) -> bool {
        v != w && self.edges.contains(&ordered(v, w))
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.verts
            .keys()
            .copied()
            .filter(|&w| self.has_edge(v, w))
            .collect()
    }

    /// Edge-complement with every label negated; the involutive negation.
    pub fn dual(&self) -> LabeledGraph {
        let verts: BTreeMap<_, _> = self
            .verts
            .iter()
            .map(|(&v, a)| (v, a.dual()))
            .collect();
        let mut edges = BTreeSet::new();
        let ids: Vec<VertexId> = self.verts.keys().copied().collect();
        for (i, &v) in ids.iter().enumerate() {
            for &w in &ids[i + 1..] {
                if !self.has_edge(v, w) {
                    edges.insert(ordered(v, w));
                }
            }
        }
        LabeledGraph { verts, edges }
    }

    /// Renumber vertices with fresh consecutive ids starting at `base`.
    /// Returns the new graph and the id translation map.
    pub fn renumbered_from(&self, base: u32) -> (LabeledGraph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<VertexId, VertexId> = self
            .verts
            .keys()
            .enumerate()
            .map(|(i, &v)| (v, VertexId(base + i as u32)))
            .collect();
        (self.relabel(&map), map)
    }

    /// Apply a vertex id translation to every vertex and edge.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> LabeledGraph {
        let verts = self
            .verts
            .iter()
            .map(|(v, a)| (map[v], a.clone()))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&(v, w)| ordered(map[&v], map[&w]))
            .collect();
        LabeledGraph { verts, edges }
    }

    fn next_free_id(&self) -> u32 {
        self.verts.keys().next_back().map_or(0, |v| v.0 + 1)
    }

    /// Disjoint union. The right operand is renumbered to keep ids disjoint.
    pub fn par(&self, other: &LabeledGraph) -> LabeledGraph {
        let mut g = self.clone();
        let (h, _) = other.renumbered_from(g.next_free_id());
        g.verts.extend(h.verts);
        g.edges.extend(h.edges);
        g
    }

    /// Join: disjoint union plus all cross edges.
    pub fn tensor(&self, other: &LabeledGraph) -> LabeledGraph {
        let left: Vec<VertexId> = self.verts.keys().copied().collect();
        let mut g = self.clone();
        let (h, _) = other.renumbered_from(g.next_free_id());
        let right: Vec<VertexId> = h.verts.keys().copied().collect();
        g.verts.extend(h.verts);
        g.edges.extend(h.edges);
        for &v in &left {
            for &w in &right {
                g.edges.insert(ordered(v, w));
            }
        }
        g
    }

    /// Replace vertex `i` of `self` by `parts[i]`, drawing all cross edges
    /// where `self` has an edge. Vertex order follows ascending ids.
    pub fn compose_via(&self, parts: &[LabeledGraph]) -> Result<LabeledGraph, ArityMismatch> {
        if parts.len() != self.vertex_count() {
            return Err(ArityMismatch { expected: self.vertex_count(), got: parts.len() });
        }
        let slots: Vec<VertexId> = self.verts.keys().copied().collect();
        let mut out = LabeledGraph::default();
        let mut slot_verts: Vec<Vec<VertexId>> = Vec::with_capacity(parts.len());
        let mut base = 0u32;
        for part in parts {
            let (p, _) = part.renumbered_from(base);
            base += p.vertex_count() as u32;
            slot_verts.push(p.verts.keys().copied().collect());
            out.verts.extend(p.verts);
            out.edges.extend(p.edges);
        }
        for (i, &si) in slots.iter().enumerate() {
            for (j, &sj) in slots.iter().enumerate().skip(i + 1) {
                if self.has_edge(si, sj) {
                    for &v in &slot_verts[i] {
                        for &w in &slot_verts[j] {
                            out.edges.insert(ordered(v, w));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Induced subgraph on `keep`.
    pub fn induced(&self, keep: &VertexSet) -> LabeledGraph {
        let verts = self
            .verts
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, a)| (v, a.clone()))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|(v, w)| keep.contains(v) && keep.contains(w))
            .copied()
            .collect();
        LabeledGraph { verts, edges }
    }

    /// Graph with the vertices of `drop` (and incident edges) removed.
    pub fn without(&self, drop: &VertexSet) -> LabeledGraph {
        let keep: VertexSet = self
            .verts
            .keys()
            .copied()
            .filter(|v| !drop.contains(v))
            .collect();
        self.induced(&keep)
    }

    /// True iff every vertex outside `s` sees all of `s` or none of it.
    pub fn is_module(&self, s: &VertexSet) -> bool {
        debug_assert!(s.iter().all(|v| self.contains_vertex(*v)));
        if s.len() <= 1 {
            return true;
        }
        let inner: Vec<VertexId> = s.iter().copied().collect();
        for &v in self.verts.keys() {
            if s.contains(&v) {
                continue;
            }
            let first = self.has_edge(v, inner[0]);
            if inner[1..].iter().any(|&x| self.has_edge(v, x) != first) {
                return false;
            }
        }
        true
    }

    /// All modules of the graph, the empty set included, in ascending
    /// bitmask order over sorted vertex ids. Limited to small graphs.
    pub fn enumerate_modules(&self, limit: usize) -> Result<Vec<VertexSet>, SizeLimitExceeded> {
        let n = self.vertex_count();
        if n > limit {
            return Err(SizeLimitExceeded { size: n, limit });
        }
        let dense = self.dense();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            if dense.is_module_mask(mask) {
                out.push(dense.mask_to_set(mask));
            }
        }
        Ok(out)
    }

    pub fn size_measure(&self) -> SizeMeasure {
        let n = self.vertex_count();
        SizeMeasure {
            vertex_count: n,
            dual_edge_count: n * n.saturating_sub(1) / 2 - self.edge_count(),
        }
    }

    /// Neighborhood of a set: vertices outside `s` adjacent to some member.
    pub fn outside_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for &v in self.verts.keys() {
            if s.contains(&v) {
                continue;
            }
            if s.iter().any(|&x| self.has_edge(v, x)) {
                out.insert(v);
            }
        }
        out
    }

    /// Connected components as vertex sets, ordered by minimum vertex id.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut comps = Vec::new();
        for &start in self.verts.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                seen.insert(v);
                for &w in self.verts.keys() {
                    if self.has_edge(v, w) && !comp.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Components of the edge-complement (labels are irrelevant here).
    pub fn co_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut comps = Vec::new();
        for &start in self.verts.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                seen.insert(v);
                for &w in self.verts.keys() {
                    if v != w && !self.has_edge(v, w) && !comp.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Multiset of labels, used by the prover's matched-atoms filter.
    pub fn label_multiset(&self) -> BTreeMap<Atom, usize> {
        let mut m = BTreeMap::new();
        for a in self.verts.values() {
            *m.entry(a.clone()).or_insert(0) += 1;
        }
        m
    }

    pub(crate) fn dense(&self) -> Dense {
        Dense::new(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityMismatch {
    pub expected: usize,
    pub got: usize,
}

impl fmt::Display for ArityMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "composition arity mismatch: quotient has {} vertices, got {} parts", self.expected, self.got)
    }
}

impl std::error::Error for ArityMismatch {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeLimitExceeded {
    pub size: usize,
    pub limit: usize,
}

impl fmt::Display for SizeLimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph has {} vertices, limit is {}", self.size, self.limit)
    }
}

impl std::error::Error for SizeLimitExceeded {}

/// A graph with a hole: the host graph plus the set R of host vertices the
/// plugged module will connect to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphContext {
    pub host: LabeledGraph,
    pub hole_neighbors: VertexSet,
}

impl GraphContext {
    pub fn new(host: LabeledGraph, hole_neighbors: VertexSet) -> GraphContext {
        assert!(
            hole_neighbors.iter().all(|v| host.contains_vertex(*v)),
            "hole neighbors must be host vertices"
        );
        GraphContext { host, hole_neighbors }
    }

    pub fn empty() -> GraphContext {
        GraphContext { host: LabeledGraph::empty(), hole_neighbors: VertexSet::new() }
    }

    /// Insert `module` into the hole. The result contains `module` as a
    /// module whose outside neighborhood is exactly R.
    pub fn plug(&self, module: &LabeledGraph) -> LabeledGraph {
        let mut g = self.host.clone();
        let (m, _) = module.renumbered_from(g.next_free_id());
        let mod_verts: Vec<VertexId> = m.verts.keys().copied().collect();
        g.verts.extend(m.verts);
        g.edges.extend(m.edges);
        for &v in &mod_verts {
            for &r in &self.hole_neighbors {
                g.edges.insert(ordered(v, r));
            }
        }
        g
    }

    /// Context obtained from `g` by removing the module `m`; R is m's
    /// outside neighborhood.
    pub fn of_module(g: &LabeledGraph, m: &VertexSet) -> GraphContext {
        debug_assert!(g.is_module(m));
        GraphContext {
            host: g.without(m),
            hole_neighbors: g.outside_neighbors(m),
        }
    }
}

/// Dense bitmask view over the sorted vertex list; only valid for graphs
/// with at most 64 vertices (we stay far below that).
pub(crate) struct Dense {
    pub ids: Vec<VertexId>,
    pub adj: Vec<u64>,
    pub labels: Vec<usize>,
    pub label_table: Vec<Atom>,
}

impl Dense {
    fn new(g: &LabeledGraph) -> Dense {
        let ids: Vec<VertexId> = g.verts.keys().copied().collect();
        assert!(ids.len() <= 64);
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u64; ids.len()];
        for &(v, w) in &g.edges {
            let (i, j) = (index[&v], index[&w]);
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        let mut label_table: Vec<Atom> = g.verts.values().cloned().collect();
        label_table.sort();
        label_table.dedup();
        let labels = ids
            .iter()
            .map(|v| label_table.binary_search(g.label(*v)).unwrap())
            .collect();
        Dense { ids, adj, labels, label_table }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn is_module_mask(&self, mask: u64) -> bool {
        if mask.count_ones() <= 1 {
            return true;
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << first);
        for v in 0..self.n() {
            if mask & (1 << v) != 0 {
                continue;
            }
            let sees_first = self.adj[v] & (1 << first) != 0;
            let mut m = rest;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                if (self.adj[v] & (1 << x) != 0) != sees_first {
                    return false;
                }
            }
        }
        true
    }

    pub fn mask_to_set(&self, mask: u64) -> VertexSet {
        let mut s = VertexSet::new();
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            s.insert(self.ids[i]);
        }
        s
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn dual_is_involutive() {
        let g = parse_graph_str(
            "vertex 1 a\nvertex 2 a\nvertex 3 c\nvertex 4 b\nvertex 5 ~a\n\
             edge 1 2\nedge 1 3\nedge 3 5\nedge 4 3\nedge 4 5\n",
        );
        assert_eq!(g.dual().dual(), g);
    }

    #[test]
    fn empty_graph_is_self_dual() {
        assert_eq!(LabeledGraph::empty().dual(), LabeledGraph::empty());
    }

    #[test]
    fn par_and_tensor_units() {
        let g = graph_of("a*(b|~c)");
        assert!(iso(&LabeledGraph::empty().par(&g), &g));
        assert!(iso(&LabeledGraph::empty().tensor(&g), &g));
        assert!(iso(&g.par(&LabeledGraph::empty()), &g));
    }

    #[test]
    fn tensor_of_atoms_is_an_edge() {
        let g = LabeledGraph::single(Atom::pos("a")).tensor(&LabeledGraph::single(Atom::pos("b")));
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn compose_via_p4_gives_path() {
        let p4 = p4_pattern();
        let parts: Vec<LabeledGraph> = ["a", "b", "c", "d"]
            .iter()
            .map(|s| LabeledGraph::single(Atom::pos(s)))
            .collect();
        let g = p4.compose_via(&parts).unwrap();
        assert_eq!(g.edge_count(), 3);
        // path a-b-c-d: ends have degree 1
        let degs: Vec<usize> = g.vertices().map(|v| g.neighbors(v).len()).collect();
        let mut sorted = degs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 2, 2]);
    }

    #[test]
    fn compose_via_identity_decomposition() {
        let g = graph_of("(a*b)|(c*d)");
        let parts: Vec<LabeledGraph> = g
            .vertices()
            .map(|v| LabeledGraph::single(g.label(v).clone()))
            .collect();
        let h = g.compose_via(&parts).unwrap();
        assert!(iso(&g, &h));
    }

    #[test]
    fn compose_arity_mismatch() {
        let p4 = p4_pattern();
        assert!(p4.compose_via(&[LabeledGraph::empty()]).is_err());
    }

    #[test]
    fn path_has_only_trivial_modules() {
        // eq-style path a-b-c-d: {b,c} is not a module.
        let g = path_graph(&["a", "b", "c", "d"]);
        let ids: Vec<VertexId> = g.vertices().collect();
        let s: VertexSet = [ids[1], ids[2]].into_iter().collect();
        assert!(!g.is_module(&s));
        let mods = g.enumerate_modules(16).unwrap();
        // empty, four singletons, full set
        assert_eq!(mods.len(), 6);
    }

    #[test]
    fn modules_of_two_isolated_vertices() {
        let g = graph_of("a|b");
        assert_eq!(g.enumerate_modules(16).unwrap().len(), 4);
    }

    #[test]
    fn modules_of_empty_graph() {
        let mods = LabeledGraph::empty().enumerate_modules(16).unwrap();
        assert_eq!(mods, vec![VertexSet::new()]);
    }

    #[test]
    fn enumerate_modules_matches_definition_exhaustively() {
        for g in all_graphs_upto(4, &["a"]) {
            let dense = g.dense();
            let n = g.vertex_count();
            let brute: Vec<VertexSet> = (0u64..(1 << n))
                .map(|m| dense.mask_to_set(m))
                .filter(|s| g.is_module(s))
                .collect();
            let mut got = g.enumerate_modules(16).unwrap();
            let mut want = brute;
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn plug_yields_module() {
        let host = graph_of("(a*b)|c");
        let ids: Vec<VertexId> = host.vertices().collect();
        let ctx = GraphContext::new(host.clone(), [ids[0], ids[2]].into_iter().collect());
        let m = graph_of("x|~x");
        let plugged = ctx.plug(&m);
        let module: VertexSet = plugged
            .vertices()
            .filter(|v| !host.contains_vertex(*v) || !ids.contains(v))
            .filter(|v| plugged.label(*v).name == "x")
            .collect();
        assert_eq!(module.len(), 2);
        assert!(plugged.is_module(&module));
        assert_eq!(plugged.outside_neighbors(&module).len(), 2);
    }

    #[test]
    fn size_measure_examples() {
        assert_eq!(
            LabeledGraph::empty().size_measure(),
            SizeMeasure { vertex_count: 0, dual_edge_count: 0 }
        );
        let a = LabeledGraph::single(Atom::pos("a"));
        let na = LabeledGraph::single(Atom::neg("a"));
        assert_eq!(
            a.tensor(&na).size_measure(),
            SizeMeasure { vertex_count: 2, dual_edge_count: 0 }
        );
        assert_eq!(
            a.par(&na).size_measure(),
            SizeMeasure { vertex_count: 2, dual_edge_count: 1 }
        );
    }

    #[test]
    fn module_algebra_intersection_union_difference() {
        // Random-ish small sweep over all graphs on 4 vertices and module
        // pairs M, N: intersection is a module; union is a module when the
        // intersection is non-empty; difference when N does not contain M.
        for g in all_graphs_upto(4, &["a", "b"]).into_iter().step_by(7) {
            let mods = g.enumerate_modules(16).unwrap();
            for m in &mods {
                for n in &mods {
                    let inter: VertexSet = m.intersection(n).copied().collect();
                    assert!(g.is_module(&inter));
                    if !inter.is_empty() {
                        let uni: VertexSet = m.union(n).copied().collect();
                        assert!(g.is_module(&uni));
                    }
                    if !n.is_subset(m) {
                        let diff: VertexSet = m.difference(n).copied().collect();
                        assert!(g.is_module(&diff));
                    }
                }
            }
        }
    }
}
