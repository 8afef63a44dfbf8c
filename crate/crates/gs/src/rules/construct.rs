//! Constructive derivations: the identity-to-composition derivation that
//! turns a multi-tensor of slot-wise pars into a composed graph next to
//! its dual, and the identity proof built from it. Everything returned
//! here passes the checker; no search is involved.

use super::{step_ai_down, step_p_down, step_ss_down, Derivation};
use crate::graph::{LabeledGraph, VertexId, VertexSet};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GDownError {
    ArityMismatch { expected: usize, got: usize },
    /// A slot has an empty first component but a non-empty second one.
    HypothesisViolated { slot: usize },
}

impl fmt::Display for GDownError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GDownError::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} parts, got {got}")
            }
            GDownError::HypothesisViolated { slot } => {
                write!(f, "slot {slot} has an empty left part but a non-empty right part")
            }
        }
    }
}

impl std::error::Error for GDownError {}

#[derive(Debug, Clone)]
pub struct GDownResult {
    /// From the multi-tensor of slot-wise pars to `G<Ms> | dual(G)<Ns>`.
    pub derivation: Derivation,
    /// Conclusion-side vertex sets of the composed graph's slots.
    pub m_slots: Vec<VertexSet>,
    /// Conclusion-side vertex sets of the dual composition's slots.
    pub n_slots: Vec<VertexSet>,
}

struct Builder {
    quotient: LabeledGraph,
    slot_ids: Vec<VertexId>,
    m_sets: Vec<VertexSet>,
    n_sets: Vec<VertexSet>,
    premise: LabeledGraph,
    conclusion: LabeledGraph,
}

impl Builder {
    fn slot_index(&self, id: VertexId) -> usize {
        self.slot_ids.iter().position(|&s| s == id).unwrap()
    }

    fn verts_of(&self, slots: &[VertexId]) -> VertexSet {
        slots
            .iter()
            .flat_map(|&s| {
                let i = self.slot_index(s);
                self.m_sets[i].iter().chain(self.n_sets[i].iter()).copied()
            })
            .collect()
    }

    fn m_verts_of(&self, slots: &[VertexId]) -> VertexSet {
        slots
            .iter()
            .flat_map(|&s| self.m_sets[self.slot_index(s)].iter().copied())
            .collect()
    }

    fn n_verts_of(&self, slots: &[VertexId]) -> VertexSet {
        slots
            .iter()
            .flat_map(|&s| self.n_sets[self.slot_index(s)].iter().copied())
            .collect()
    }

    /// Derivation from the premise fragment to the conclusion fragment on
    /// the given (active) slots; fragments are induced subgraphs of the
    /// global endpoints.
    fn build(&self, slots: &[VertexId]) -> Derivation {
        let active: Vec<VertexId> = slots
            .iter()
            .copied()
            .filter(|&s| {
                let i = self.slot_index(s);
                !(self.m_sets[i].is_empty() && self.n_sets[i].is_empty())
            })
            .collect();
        let verts = self.verts_of(&active);
        let fragment_premise = self.premise.induced(&verts);
        let fragment_conclusion = self.conclusion.induced(&verts);
        if active.len() <= 1 {
            debug_assert_eq!(fragment_premise, fragment_conclusion);
            return Derivation::identity(fragment_premise);
        }
        let q_sub = self.quotient.induced(&active.iter().copied().collect());
        let cocomps = q_sub.co_components();
        if cocomps.len() > 1 {
            return self.tensor_case(&active, &cocomps, fragment_conclusion);
        }
        let comps = q_sub.components();
        if comps.len() > 1 {
            return self.par_case(&active, &comps, fragment_conclusion);
        }
        self.prime_case(&active, &q_sub, fragment_conclusion)
    }

    /// Lift the group derivations into the surrounding multi-tensor, one
    /// group at a time, yielding `(X1|Y1) * ... * (Xk|Yk)`.
    fn lift_groups(&self, groups: &[Vec<VertexId>]) -> Derivation {
        let all: Vec<VertexId> = groups.iter().flatten().copied().collect();
        let mut acc = Derivation::identity(self.premise.induced(&self.verts_of(&all)));
        for group in groups {
            let inner = self.build(group);
            let group_verts = self.verts_of(group);
            let host = acc.conclusion.without(&group_verts);
            let r: VertexSet = host.vertices().collect();
            let lifted = inner.embed_preserving(&host, &r);
            acc = acc.compose(lifted);
        }
        acc
    }

    fn tensor_case(
        &self,
        active: &[VertexId],
        cocomps: &[VertexSet],
        target: LabeledGraph,
    ) -> Derivation {
        let c1: Vec<VertexId> = active.iter().copied().filter(|v| cocomps[0].contains(v)).collect();
        let c2: Vec<VertexId> = active.iter().copied().filter(|v| !cocomps[0].contains(v)).collect();
        let mut acc = self.lift_groups(&[c1.clone(), c2.clone()]);
        // (X1|Y1) * (X2|Y2)  ->  ((X1|Y1)*X2) | Y2  ->  (X1*X2) | Y1 | Y2
        let (x1, y1) = (self.m_verts_of(&c1), self.n_verts_of(&c1));
        let (x2, y2) = (self.m_verts_of(&c2), self.n_verts_of(&c2));
        if !y2.is_empty() {
            let mut mid = acc.conclusion.clone();
            for &a in &y2 {
                for &b in x1.iter().chain(&y1) {
                    mid.remove_edge(a, b);
                }
            }
            let b: VertexSet = x1.union(&y1).copied().chain(x2.iter().copied()).collect();
            let s: VertexSet = x1.union(&y1).copied().collect();
            let step = step_ss_down(&mid, &y2, &b, &s);
            debug_assert_eq!(step.premise, acc.conclusion);
            acc = acc.compose(Derivation {
                premise: step.premise.clone(),
                conclusion: mid,
                steps: vec![step],
            });
        }
        if !y1.is_empty() {
            let b: VertexSet = x1.union(&x2).copied().collect();
            let step = step_ss_down(&target, &y1, &b, &x2);
            debug_assert_eq!(step.premise, acc.conclusion);
            acc = acc.compose(Derivation {
                premise: step.premise.clone(),
                conclusion: target.clone(),
                steps: vec![step],
            });
        }
        debug_assert_eq!(acc.conclusion, target);
        acc
    }

    fn par_case(
        &self,
        active: &[VertexId],
        comps: &[VertexSet],
        target: LabeledGraph,
    ) -> Derivation {
        let c1: Vec<VertexId> = active.iter().copied().filter(|v| comps[0].contains(v)).collect();
        let c2: Vec<VertexId> = active.iter().copied().filter(|v| !comps[0].contains(v)).collect();
        let mut acc = self.lift_groups(&[c1.clone(), c2.clone()]);
        // (X1|Y1) * (X2|Y2)  ->  X1 | (Y1*(X2|Y2))  ->  X1 | X2 | (Y1*Y2)
        let (x1, y1) = (self.m_verts_of(&c1), self.n_verts_of(&c1));
        let (x2, y2) = (self.m_verts_of(&c2), self.n_verts_of(&c2));
        {
            let mut mid = acc.conclusion.clone();
            for &a in &x1 {
                for &b in x2.iter().chain(&y2) {
                    mid.remove_edge(a, b);
                }
            }
            let b: VertexSet = y1.union(&x2).copied().chain(y2.iter().copied()).collect();
            let s: VertexSet = x2.union(&y2).copied().collect();
            let step = step_ss_down(&mid, &x1, &b, &s);
            debug_assert_eq!(step.premise, acc.conclusion);
            acc = acc.compose(Derivation {
                premise: step.premise.clone(),
                conclusion: mid,
                steps: vec![step],
            });
        }
        if !y1.is_empty() {
            let b: VertexSet = y1.union(&y2).copied().collect();
            let step = step_ss_down(&target, &x2, &b, &y1);
            debug_assert_eq!(step.premise, acc.conclusion);
            acc = acc.compose(Derivation {
                premise: step.premise.clone(),
                conclusion: target.clone(),
                steps: vec![step],
            });
        }
        debug_assert_eq!(acc.conclusion, target);
        acc
    }

    fn prime_case(&self, _active: &[VertexId], q_sub: &LabeledGraph, target: LabeledGraph) -> Derivation {
        let groups: Vec<Vec<VertexId>> = match crate::mdtree::decompose(q_sub) {
            Ok(crate::mdtree::MDTree::Prime { children, .. }) => {
                children.iter().map(slot_ids_of_tree).collect()
            }
            other => unreachable!("connected co-connected quotient must be prime: {other:?}"),
        };
        let mut acc = self.lift_groups(&groups);
        let m_slots: Vec<VertexSet> = groups.iter().map(|grp| self.m_verts_of(grp)).collect();
        let n_slots: Vec<VertexSet> = groups.iter().map(|grp| self.n_verts_of(grp)).collect();
        let step = step_p_down(&target, m_slots, n_slots);
        debug_assert_eq!(step.premise, acc.conclusion);
        acc = acc.compose(Derivation {
            premise: step.premise.clone(),
            conclusion: target.clone(),
            steps: vec![step],
        });
        acc
    }
}

fn slot_ids_of_tree(t: &crate::mdtree::MDTree) -> Vec<VertexId> {
    match t {
        crate::mdtree::MDTree::Leaf(v, _) => vec![*v],
        crate::mdtree::MDTree::Par(cs) | crate::mdtree::MDTree::Tensor(cs) => {
            cs.iter().flat_map(slot_ids_of_tree).collect()
        }
        crate::mdtree::MDTree::Prime { children, .. } => {
            children.iter().flat_map(slot_ids_of_tree).collect()
        }
    }
}

impl Derivation {
    /// Lift into a host without renumbering; the derivation's vertex ids
    /// must already be disjoint from the host's. Every intermediate graph
    /// gains the host plus edges from its vertices to `r`.
    pub fn embed_preserving(&self, host: &LabeledGraph, r: &VertexSet) -> Derivation {
        let plug = |g: &LabeledGraph| -> LabeledGraph {
            let mut out = host.clone();
            for v in g.vertices() {
                out.add_vertex(v, g.label(v).clone());
            }
            for (v, w) in g.edges() {
                out.add_edge(v, w);
            }
            for v in g.vertices() {
                for &x in r {
                    out.add_edge(v, x);
                }
            }
            out
        };
        Derivation {
            premise: plug(&self.premise),
            conclusion: plug(&self.conclusion),
            steps: self
                .steps
                .iter()
                .map(|s| super::ProofStep {
                    rule: s.rule,
                    premise: plug(&s.premise),
                    conclusion: plug(&s.conclusion),
                    position: s.position.clone(),
                    params: s.params.clone(),
                })
                .collect(),
        }
    }
}

/// Build the derivation from `(M1|N1) * ... * (Mn|Nn)` to
/// `G<M1..Mn> | dual(G)<N1..Nn>`, where `G` is the quotient shape.
/// Requires `Mi` empty to imply `Ni` empty.
pub fn derive_g_down(
    quotient: &LabeledGraph,
    ms: &[LabeledGraph],
    ns: &[LabeledGraph],
) -> Result<GDownResult, GDownError> {
    let n = quotient.vertex_count();
    if ms.len() != n || ns.len() != n {
        return Err(GDownError::ArityMismatch { expected: n, got: ms.len().min(ns.len()) });
    }
    for (i, (m, nn)) in ms.iter().zip(ns).enumerate() {
        if m.is_empty() && !nn.is_empty() {
            return Err(GDownError::HypothesisViolated { slot: i });
        }
    }
    // allocate conclusion-side vertex ids slot by slot
    let slot_ids: Vec<VertexId> = quotient.vertices().collect();
    let mut conclusion = LabeledGraph::empty();
    let mut m_sets: Vec<VertexSet> = Vec::with_capacity(n);
    let mut n_sets: Vec<VertexSet> = Vec::with_capacity(n);
    let mut base = 0u32;
    for part in ms {
        let (g, _) = part.renumbered_from(base);
        base += g.vertex_count() as u32;
        m_sets.push(g.vertex_set());
        for v in g.vertices() {
            conclusion.add_vertex(v, g.label(v).clone());
        }
        for (v, w) in g.edges() {
            conclusion.add_edge(v, w);
        }
    }
    for part in ns {
        let (g, _) = part.renumbered_from(base);
        base += g.vertex_count() as u32;
        n_sets.push(g.vertex_set());
        for v in g.vertices() {
            conclusion.add_vertex(v, g.label(v).clone());
        }
        for (v, w) in g.edges() {
            conclusion.add_edge(v, w);
        }
    }
    // conclusion cross edges: quotient pattern on the left side, its
    // complement on the right, nothing in between
    for i in 0..n {
        for j in (i + 1)..n {
            let q_edge = quotient.has_edge(slot_ids[i], slot_ids[j]);
            if q_edge {
                for &v in &m_sets[i] {
                    for &w in &m_sets[j] {
                        conclusion.add_edge(v, w);
                    }
                }
            } else {
                for &v in &n_sets[i] {
                    for &w in &n_sets[j] {
                        conclusion.add_edge(v, w);
                    }
                }
            }
        }
    }
    // premise: slot-wise pars joined by a full multi-tensor
    let mut premise = conclusion.clone();
    let slots_flat: Vec<(usize, VertexId)> = (0..n)
        .flat_map(|i| {
            m_sets[i]
                .iter()
                .chain(n_sets[i].iter())
                .map(move |&v| (i, v))
                .collect::<Vec<_>>()
        })
        .collect();
    for (a, &(si, v)) in slots_flat.iter().enumerate() {
        for &(sj, w) in &slots_flat[a + 1..] {
            if si != sj {
                premise.add_edge(v, w);
            } else {
                let same_side = (m_sets[si].contains(&v) && m_sets[si].contains(&w))
                    || (n_sets[si].contains(&v) && n_sets[si].contains(&w));
                if !same_side {
                    premise.remove_edge(v, w);
                } else if !conclusion.has_edge(v, w) {
                    premise.remove_edge(v, w);
                }
            }
        }
    }
    let builder = Builder {
        quotient: quotient.clone(),
        slot_ids: slot_ids.clone(),
        m_sets: m_sets.clone(),
        n_sets: n_sets.clone(),
        premise,
        conclusion,
    };
    let derivation = builder.build(&slot_ids);
    Ok(GDownResult { derivation, m_slots: m_sets, n_slots: n_sets })
}

/// Proof of `dual(g) | g` built by structural recursion on the modular
/// decomposition: atomic identities for the vertices, then the
/// composition derivation.
pub fn derive_identity(g: &LabeledGraph) -> Derivation {
    let target = g.dual().par(g);
    if g.is_empty() {
        return Derivation::identity(target);
    }
    let shape = g.dual();
    let ms: Vec<LabeledGraph> = shape
        .vertices()
        .map(|v| LabeledGraph::single(shape.label(v).clone()))
        .collect();
    let ns: Vec<LabeledGraph> = shape
        .vertices()
        .map(|v| LabeledGraph::single(shape.label(v).dual()))
        .collect();
    let gdr = derive_g_down(&shape, &ms, &ns).expect("singleton slots satisfy the hypothesis");
    // prefix: introduce the pairs one by one, each joined to the ones
    // already present
    let premise = &gdr.derivation.premise;
    let mut steps = Vec::new();
    let mut have = VertexSet::new();
    for i in 0..ms.len() {
        let v = *gdr.m_slots[i].iter().next().unwrap();
        let w = *gdr.n_slots[i].iter().next().unwrap();
        have.insert(v);
        have.insert(w);
        let conclusion_i = premise.induced(&have);
        steps.push(step_ai_down(&conclusion_i, v, w));
    }
    let prefix = Derivation {
        premise: LabeledGraph::empty(),
        conclusion: premise.clone(),
        steps,
    };
    let proof = prefix.compose(gdr.derivation.clone());
    // rename onto the caller-facing `dual(g) | g` graph
    let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let left_ids: Vec<VertexId> = g.vertices().collect();
    let offset = left_ids.last().map_or(0, |v| v.0 + 1);
    for (k, _) in shape.vertices().enumerate() {
        let mv = *gdr.m_slots[k].iter().next().unwrap();
        let nv = *gdr.n_slots[k].iter().next().unwrap();
        map.insert(mv, left_ids[k]);
        map.insert(nv, VertexId(offset + k as u32));
    }
    let renamed = proof.relabel(&map);
    debug_assert_eq!(renamed.conclusion, target);
    renamed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Atom;
    use crate::prover::RuleSet;
    use crate::rules::{check_derivation, RuleId};
    use crate::testutil::*;

    #[test]
    fn identity_of_single_atom_is_one_step() {
        let g = LabeledGraph::single(Atom::pos("a"));
        let d = derive_identity(&g);
        assert!(d.is_proof());
        assert_eq!(d.inference_len(), 1);
        assert_eq!(d.steps[0].rule, RuleId::AiDown);
        assert!(check_derivation(&d, &RuleSet::gs()).is_ok());
    }

    #[test]
    fn identity_of_p4_has_length_five() {
        let g = path_graph(&["a", "b", "c", "d"]);
        let d = derive_identity(&g);
        assert!(d.is_proof());
        assert_eq!(d.inference_len(), 5);
        assert!(d.steps.iter().any(|s| s.rule == RuleId::PDown));
        assert!(check_derivation(&d, &RuleSet::gs()).is_ok());
    }

    #[test]
    fn identity_of_cograph_checks() {
        let g = graph_of("(a*b)|(c*d)");
        let d = derive_identity(&g);
        assert!(d.is_proof());
        assert!(check_derivation(&d, &RuleSet::gs()).is_ok());
    }

    #[test]
    fn identity_exhaustive_small() {
        for g in all_graphs_upto(4, &["a", "b"]).into_iter().step_by(5) {
            let d = derive_identity(&g);
            assert!(d.is_proof());
            assert!(
                check_derivation(&d, &RuleSet::gs()).is_ok(),
                "identity proof fails for {g:?}: {:?}",
                check_derivation(&d, &RuleSet::gs())
            );
        }
    }

    #[test]
    fn g_down_tensor_case_ends_in_switches() {
        // quotient = join of two slots, all parts single atoms
        let q = graph_of("x*y");
        let ms = vec![
            LabeledGraph::single(Atom::pos("a")),
            LabeledGraph::single(Atom::pos("b")),
        ];
        let ns = vec![
            LabeledGraph::single(Atom::neg("a")),
            LabeledGraph::single(Atom::neg("b")),
        ];
        let r = derive_g_down(&q, &ms, &ns).unwrap();
        assert!(check_derivation(&r.derivation, &RuleSet::gs()).is_ok());
        let ss = r
            .derivation
            .steps
            .iter()
            .filter(|s| s.rule == RuleId::SsDown)
            .count();
        assert_eq!(ss, 2);
    }

    #[test]
    fn g_down_respects_hypothesis() {
        let q = graph_of("x*y");
        let ms = vec![LabeledGraph::empty(), LabeledGraph::single(Atom::pos("b"))];
        let ns = vec![
            LabeledGraph::single(Atom::neg("a")),
            LabeledGraph::single(Atom::neg("b")),
        ];
        assert_eq!(
            derive_g_down(&q, &ms, &ns).unwrap_err(),
            GDownError::HypothesisViolated { slot: 0 }
        );
    }

    #[test]
    fn g_down_with_empty_right_side_derives_composition_from_tensor() {
        // all Ns empty: from M1 * ... * Mn to G<M1..Mn>
        let q = path_graph(&["w", "x", "y", "z"]);
        let ms: Vec<LabeledGraph> = ["a", "b", "c", "d"]
            .iter()
            .map(|s| LabeledGraph::single(Atom::pos(s)))
            .collect();
        let ns = vec![LabeledGraph::empty(); 4];
        let r = derive_g_down(&q, &ms, &ns).unwrap();
        assert!(check_derivation(&r.derivation, &RuleSet::gs()).is_ok());
        // premise is the 4-clique, conclusion the path
        assert_eq!(r.derivation.premise.edge_count(), 6);
        assert_eq!(r.derivation.conclusion.edge_count(), 3);
    }
}
