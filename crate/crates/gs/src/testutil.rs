//! Shared helpers for unit and property tests, including brute-force
//! oracles kept independent of the production code paths they check.

use crate::formula::{parse_formula, to_graph};
use crate::graph::{Atom, LabeledGraph, VertexId};
use crate::io::parse_graph;

pub fn parse_graph_str(text: &str) -> LabeledGraph {
    parse_graph(text).expect("test graph parses")
}

pub fn graph_of(formula: &str) -> LabeledGraph {
    to_graph(&parse_formula(formula).expect("test formula parses"))
}

/// Path on equal-labelled vertices; the shape used as the 4-vertex prime.
pub fn p4_pattern() -> LabeledGraph {
    let mut g = LabeledGraph::empty();
    for i in 0..4 {
        g.add_vertex(VertexId(i), Atom::pos("_"));
    }
    for i in 0..3 {
        g.add_edge(VertexId(i), VertexId(i + 1));
    }
    g
}

pub fn path_graph(names: &[&str]) -> LabeledGraph {
    path_graph_labels(&names.iter().map(|n| Atom::pos(n)).collect::<Vec<_>>())
}

pub fn path_graph_labels(atoms: &[Atom]) -> LabeledGraph {
    let mut g = LabeledGraph::empty();
    for (i, a) in atoms.iter().enumerate() {
        g.add_vertex(VertexId(i as u32), a.clone());
    }
    for i in 1..atoms.len() {
        g.add_edge(VertexId(i as u32 - 1), VertexId(i as u32));
    }
    g
}

/// The 10-vertex running example: a prime quotient over a par pair, two
/// labelled paths, and a tensor pair.
pub fn nested_prime_example() -> LabeledGraph {
    let mut g = LabeledGraph::empty();
    let names = ["f", "g", "a", "b", "c", "d", "nf", "ng", "na", "nb", "nc", "nd"];
    let mut ids = std::collections::BTreeMap::new();
    let mut next = 0u32;
    for n in names {
        let atom = match n.strip_prefix('n') {
            Some(base) => Atom::neg(base),
            None => Atom::pos(n),
        };
        g.add_vertex(VertexId(next), atom);
        ids.insert(n, VertexId(next));
        next += 1;
    }
    let e = |g: &mut LabeledGraph, x: &str, y: &str| {
        let (v, w) = (ids[x], ids[y]);
        g.add_edge(v, w);
    };
    // slot contents
    e(&mut g, "nf", "ng");
    e(&mut g, "a", "b");
    e(&mut g, "b", "c");
    e(&mut g, "c", "d");
    e(&mut g, "na", "nb");
    e(&mut g, "nb", "nc");
    e(&mut g, "nc", "nd");
    // quotient path {f,g} - {a,b,c,d} - {nf,ng} - {na,nb,nc,nd}
    for x in ["f", "g"] {
        for y in ["a", "b", "c", "d"] {
            e(&mut g, x, y);
        }
    }
    for x in ["a", "b", "c", "d"] {
        for y in ["nf", "ng"] {
            e(&mut g, x, y);
        }
    }
    for x in ["nf", "ng"] {
        for y in ["na", "nb", "nc", "nd"] {
            e(&mut g, x, y);
        }
    }
    g
}

fn label_alphabet(names: &[&str]) -> Vec<Atom> {
    let mut out = Vec::new();
    for n in names {
        out.push(Atom::pos(n));
        out.push(Atom::neg(n));
    }
    out
}

/// All labelled graphs on exactly `n` vertices over the signed alphabet.
pub fn all_graphs_exact(n: usize, names: &[&str]) -> Vec<LabeledGraph> {
    let labels = label_alphabet(names);
    let mut out = Vec::new();
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|i| ((i + 1)..n as u32).map(move |j| (i, j)))
        .collect();
    let mut label_vec = vec![0usize; n];
    loop {
        for edge_mask in 0u64..(1 << pairs.len()) {
            let mut g = LabeledGraph::empty();
            for (i, &l) in label_vec.iter().enumerate() {
                g.add_vertex(VertexId(i as u32), labels[l].clone());
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if edge_mask & (1 << b) != 0 {
                    g.add_edge(VertexId(i), VertexId(j));
                }
            }
            out.push(g);
        }
        // odometer over label vectors
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            label_vec[k] += 1;
            if label_vec[k] < labels.len() {
                break;
            }
            label_vec[k] = 0;
            k += 1;
        }
        if n == 0 {
            return out;
        }
    }
}

pub fn all_graphs_upto(n: usize, names: &[&str]) -> Vec<LabeledGraph> {
    (0..=n).flat_map(|k| all_graphs_exact(k, names)).collect()
}

/// Brute-force isomorphism oracle: tries every bijection. Independent of
/// the canonical-labelling implementation.
pub fn iso(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let gv: Vec<VertexId> = g.vertices().collect();
    let hv: Vec<VertexId> = h.vertices().collect();
    fn rec(
        g: &LabeledGraph,
        h: &LabeledGraph,
        gv: &[VertexId],
        hv: &[VertexId],
        assign: &mut Vec<usize>,
    ) -> bool {
        let k = assign.len();
        if k == gv.len() {
            return true;
        }
        for (j, &w) in hv.iter().enumerate() {
            if assign.contains(&j) || g.label(gv[k]) != h.label(w) {
                continue;
            }
            if (0..k).all(|i| g.has_edge(gv[i], gv[k]) == h.has_edge(hv[assign[i]], w)) {
                assign.push(j);
                if rec(g, h, gv, hv, assign) {
                    return true;
                }
                assign.pop();
            }
        }
        false
    }
    rec(g, h, &gv, &hv, &mut Vec::new())
}

/// Induced 4-vertex path scan, the textbook cograph criterion.
pub fn has_induced_p4(g: &LabeledGraph) -> bool {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    if n < 4 {
        return false;
    }
    let idx: Vec<usize> = (0..n).collect();
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                for &d in &idx {
                    let quad = [a, b, c, d];
                    let mut uniq = quad.to_vec();
                    uniq.sort();
                    uniq.dedup();
                    if uniq.len() != 4 {
                        continue;
                    }
                    let (va, vb, vc, vd) = (vs[a], vs[b], vs[c], vs[d]);
                    if g.has_edge(va, vb)
                        && g.has_edge(vb, vc)
                        && g.has_edge(vc, vd)
                        && !g.has_edge(va, vc)
                        && !g.has_edge(va, vd)
                        && !g.has_edge(vb, vd)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// All formulas with at most `max_literals` literals over the alphabet.
pub fn all_formulas_upto(max_literals: usize, names: &[&str]) -> Vec<crate::formula::Formula> {
    crate::gen::enumerate_formulas(max_literals, names)
}

/// Deterministic xorshift generator for randomized suites.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

/// Random labelled graph over the signed alphabet.
pub fn random_graph(rng: &mut TestRng, n: usize, names: &[&str], edge_den: u32) -> LabeledGraph {
    let labels = label_alphabet(names);
    let mut g = LabeledGraph::empty();
    for i in 0..n {
        let l = rng.below(labels.len());
        g.add_vertex(VertexId(i as u32), labels[l].clone());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.chance(1, edge_den.max(1)) {
                g.add_edge(VertexId(i as u32), VertexId(j as u32));
            }
        }
    }
    g
}
