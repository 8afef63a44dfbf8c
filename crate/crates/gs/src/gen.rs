//! Deterministic generators for enumeration and randomized suites.

use crate::formula::Formula;
use crate::graph::{Atom, LabeledGraph, VertexId};

pub fn signed_alphabet(names: &[&str]) -> Vec<Atom> {
    let mut out = Vec::new();
    for n in names {
        out.push(Atom::pos(n));
        out.push(Atom::neg(n));
    }
    out
}

/// All formulas with at most `max_literals` literals over the signed
/// alphabet; no unit. A formula with k literals has k-1 connectives.
pub fn enumerate_formulas(max_literals: usize, names: &[&str]) -> Vec<Formula> {
    let leaves: Vec<Formula> = signed_alphabet(names).into_iter().map(Formula::Literal).collect();
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_literals + 1];
    if max_literals >= 1 {
        by_size[1] = leaves;
    }
    for size in 2..=max_literals {
        let mut acc = Vec::new();
        for left in 1..size {
            let right = size - left;
            for l in by_size[left].clone() {
                for r in by_size[right].clone() {
                    acc.push(Formula::par(l.clone(), r.clone()));
                    acc.push(Formula::tensor(l.clone(), r.clone()));
                }
            }
        }
        by_size[size] = acc;
    }
    by_size.into_iter().flatten().collect()
}

/// Xorshift generator; fixed seeds keep the randomized suites
/// reproducible.
pub struct Rng(pub u64);

impl Rng {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0.max(1);
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n.max(1) as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den.max(1) as u64) < num as u64
    }
}

pub fn random_graph(rng: &mut Rng, n: usize, names: &[&str], edge_den: u32) -> LabeledGraph {
    let labels = signed_alphabet(names);
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
