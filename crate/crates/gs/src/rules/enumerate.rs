//! Bottom-up premise enumeration for the down rules and redex enumeration
//! for the up rules. Order is deterministic: modules in ascending bitmask
//! order over sorted vertex ids, splits and attachment sets likewise.

use super::{quotient_down_premise, step_ai_down, step_ss_down, ProofStep, RuleId, StepParams};
use crate::graph::{LabeledGraph, SizeLimitExceeded, VertexId, VertexSet};
use crate::mdtree::{decompose, slot_atom, MDTree};

/// One result per dual-labelled edgeless pair that forms a module.
pub fn ai_down_premises(g: &LabeledGraph) -> Vec<ProofStep> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        for &w in &verts[i + 1..] {
            if !g.label(v).is_dual_of(g.label(w)) || g.has_edge(v, w) {
                continue;
            }
            let pair: VertexSet = [v, w].into_iter().collect();
            if g.is_module(&pair) {
                out.push(step_ai_down(g, v, w));
            }
        }
    }
    out
}

fn modules_of(g: &LabeledGraph, limit: usize) -> Result<Vec<VertexSet>, SizeLimitExceeded> {
    Ok(g.enumerate_modules(limit)?
        .into_iter()
        .filter(|m| m.len() >= 2)
        .collect())
}

/// Unions of connected components of `g` restricted to `within`, excluding
/// the empty and full unions unless requested.
fn component_unions(parts: &[VertexSet], allow_empty: bool, allow_full: bool) -> Vec<VertexSet> {
    let k = parts.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << k) {
        let picked = mask.count_ones() as usize;
        if (!allow_empty && picked == 0) || (!allow_full && picked == k) {
            continue;
        }
        let mut s = VertexSet::new();
        for (i, p) in parts.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.extend(p.iter().copied());
            }
        }
        out.push(s);
    }
    out
}

fn subsets(elems: &[VertexId], allow_empty: bool) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << elems.len()) {
        if !allow_empty && mask == 0 {
            continue;
        }
        out.push(
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    out
}

/// Super switch down read bottom-up: for every module `N = B | A`, the
/// premise re-attaches A to every non-empty S inside B.
pub fn ss_down_premises(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let mut out = Vec::new();
    for module in modules_of(g, limit)? {
        let comps = g.induced(&module).components();
        if comps.len() < 2 {
            continue;
        }
        for a in component_unions(&comps, false, false) {
            let b: VertexSet = module.difference(&a).copied().collect();
            let b_elems: Vec<VertexId> = b.iter().copied().collect();
            for s in subsets(&b_elems, false) {
                out.push(step_ss_down(g, &a, &b, &s));
            }
        }
    }
    Ok(out)
}

/// All ways to read a module of `g` as `not-P<Ms> | P<Ns>` with P prime of
/// arity at least 4 and the M side all non-empty; the premise is the
/// multi-tensor of the slot-wise pars.
pub fn p_down_premises(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for module in modules_of(g, limit)? {
        let comps = g.induced(&module).components();
        for x in component_unions(&comps, false, true) {
            let y: VertexSet = module.difference(&x).copied().collect();
            let sub = g.induced(&x);
            let Ok(MDTree::Prime { quotient, children }) = decompose(&sub) else {
                continue;
            };
            let m_slots: Vec<VertexSet> = children.iter().map(slot_vertices).collect();
            let pattern = complement_pattern(&quotient);
            for n_slots in slot_assignments(g, &y, &pattern) {
                let premise = quotient_down_premise(g, &m_slots, &n_slots);
                if premise == *g {
                    continue;
                }
                if !seen.insert(crate::canon::canonical_form(&premise, 64)?) {
                    continue;
                }
                out.push(ProofStep {
                    rule: RuleId::PDown,
                    premise,
                    conclusion: g.clone(),
                    position: module.clone(),
                    params: StepParams::Quotient {
                        m_slots: m_slots.clone(),
                        n_slots,
                    },
                });
            }
        }
    }
    Ok(out)
}

fn slot_vertices(t: &MDTree) -> VertexSet {
    match t {
        MDTree::Leaf(v, _) => [*v].into_iter().collect(),
        MDTree::Par(cs) | MDTree::Tensor(cs) => cs.iter().flat_map(slot_vertices).collect(),
        MDTree::Prime { children, .. } => children.iter().flat_map(slot_vertices).collect(),
    }
}

fn complement_pattern(quotient: &LabeledGraph) -> LabeledGraph {
    // same slot ids, complemented edges, marker labels
    let mut out = LabeledGraph::empty();
    let ids: Vec<VertexId> = quotient.vertices().collect();
    for &v in &ids {
        out.add_vertex(v, slot_atom());
    }
    for (i, &v) in ids.iter().enumerate() {
        for &w in &ids[i + 1..] {
            if !quotient.has_edge(v, w) {
                out.add_edge(v, w);
            }
        }
    }
    out
}

/// All assignments of the vertices of `y` to the slots of `pattern` such
/// that cross-slot adjacency in `g` matches the pattern exactly.
/// Within-slot edges are unconstrained. Slots may stay empty.
fn slot_assignments(g: &LabeledGraph, y: &VertexSet, pattern: &LabeledGraph) -> Vec<Vec<VertexSet>> {
    let slots: Vec<VertexId> = pattern.vertices().collect();
    let n = slots.len();
    let ys: Vec<VertexId> = y.iter().copied().collect();
    let mut out = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(ys.len());
    fn rec(
        g: &LabeledGraph,
        pattern: &LabeledGraph,
        slots: &[VertexId],
        ys: &[VertexId],
        assign: &mut Vec<usize>,
        out: &mut Vec<Vec<VertexSet>>,
        n: usize,
    ) {
        let k = assign.len();
        if k == ys.len() {
            let mut groups = vec![VertexSet::new(); n];
            for (i, &slot) in assign.iter().enumerate() {
                groups[slot].insert(ys[i]);
            }
            out.push(groups);
            return;
        }
        for cand in 0..n {
            let ok = (0..k).all(|j| {
                if assign[j] == cand {
                    true // within-slot edges are free
                } else {
                    g.has_edge(ys[j], ys[k])
                        == pattern.has_edge(slots[assign[j]], slots[cand])
                }
            });
            if ok {
                assign.push(cand);
                rec(g, pattern, slots, ys, assign, out, n);
                assign.pop();
            }
        }
    }
    rec(g, pattern, &slots, &ys, &mut assign, &mut out, n);
    out
}

/// Super switch up read bottom-up (for searching in the extended system):
/// the conclusion shows `B<A>S`; the premise joins A to all of B.
pub fn ss_up_premises(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let all = g.enumerate_modules(limit)?;
    let mut out = Vec::new();
    for module in &all {
        if module.len() < 2 {
            continue;
        }
        for a in &all {
            if a.is_empty() || !a.is_subset(module) || a == module {
                continue;
            }
            // A must be a module of the induced subgraph on the position;
            // being a module of g inside the module, it is.
            let b: VertexSet = module.difference(a).copied().collect();
            let s: VertexSet = b
                .iter()
                .copied()
                .filter(|&y| a.iter().any(|&x| g.has_edge(x, y)))
                .collect();
            // S is A's attachment inside B; the rule needs S != B, and the
            // attachment must be uniform (A is a module of g).
            if s == b {
                continue;
            }
            let mut premise = g.clone();
            for &x in a {
                for &y in &b {
                    premise.add_edge(x, y);
                }
            }
            out.push(ProofStep {
                rule: RuleId::SsUp,
                premise,
                conclusion: g.clone(),
                position: module.clone(),
                params: StepParams::Ss { a: a.clone(), b: b.clone(), s },
            });
        }
    }
    Ok(out)
}

/// General quotient rule read bottom-up: both sides may have empty slots.
/// Slot partitions must have all-or-none adjacency between parts.
pub fn g_down_premises(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let mut out = Vec::new();
    for module in g.enumerate_modules(limit)? {
        if module.is_empty() {
            continue;
        }
        let comps = g.induced(&module).components();
        for x in component_unions(&comps, true, true) {
            let y: VertexSet = module.difference(&x).copied().collect();
            let x_parts = modular_partitions(g, &x);
            let y_parts = modular_partitions(g, &y);
            for xp in &x_parts {
                for yp in &y_parts {
                    for (m_slots, n_slots) in slot_matchings(g, xp, yp) {
                        let premise = quotient_down_premise(g, &m_slots, &n_slots);
                        if premise == *g {
                            continue;
                        }
                        out.push(ProofStep {
                            rule: RuleId::GDown,
                            premise,
                            conclusion: g.clone(),
                            position: module.clone(),
                            params: StepParams::Quotient { m_slots, n_slots },
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Set partitions of `s` whose parts have all-or-none adjacency pairwise
/// (each part is a module of the induced subgraph).
fn modular_partitions(g: &LabeledGraph, s: &VertexSet) -> Vec<Vec<VertexSet>> {
    let elems: Vec<VertexId> = s.iter().copied().collect();
    let mut out = Vec::new();
    let mut parts: Vec<VertexSet> = Vec::new();
    fn uniform(g: &LabeledGraph, part: &VertexSet, other: &VertexSet) -> bool {
        let mut any = false;
        let mut all = true;
        for &x in part {
            for &y in other {
                if g.has_edge(x, y) {
                    any = true;
                } else {
                    all = false;
                }
            }
        }
        !any || all
    }
    fn rec(
        g: &LabeledGraph,
        elems: &[VertexId],
        idx: usize,
        parts: &mut Vec<VertexSet>,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        if idx == elems.len() {
            out.push(parts.clone());
            return;
        }
        let v = elems[idx];
        for i in 0..parts.len() {
            parts[i].insert(v);
            let ok = (0..parts.len())
                .filter(|&j| j != i)
                .all(|j| uniform(g, &parts[i], &parts[j]));
            if ok {
                rec(g, elems, idx + 1, parts, out);
            }
            parts[i].remove(&v);
        }
        parts.push([v].into_iter().collect());
        let ok = (0..parts.len() - 1).all(|j| uniform(g, parts.last().unwrap(), &parts[j]));
        if ok {
            rec(g, elems, idx + 1, parts, out);
        }
        parts.pop();
    }
    if elems.is_empty() {
        out.push(Vec::new());
        return out;
    }
    rec(g, &elems, 0, &mut parts, &mut out);
    out
}

/// Pair an X-partition with a Y-partition into common slots: any partial
/// matching; unmatched parts become one-sided slots. The complementarity
/// constraint between doubly-occupied slot pairs is enforced.
fn slot_matchings(
    g: &LabeledGraph,
    xp: &[VertexSet],
    yp: &[VertexSet],
) -> Vec<(Vec<VertexSet>, Vec<VertexSet>)> {
    let mut out = Vec::new();
    let mut pairing: Vec<Option<usize>> = vec![None; xp.len()];
    fn rec(
        g: &LabeledGraph,
        xp: &[VertexSet],
        yp: &[VertexSet],
        i: usize,
        pairing: &mut Vec<Option<usize>>,
        out: &mut Vec<(Vec<VertexSet>, Vec<VertexSet>)>,
    ) {
        if i == xp.len() {
            let used: Vec<usize> = pairing.iter().flatten().copied().collect();
            let mut m_slots: Vec<VertexSet> = Vec::new();
            let mut n_slots: Vec<VertexSet> = Vec::new();
            for (xi, p) in pairing.iter().enumerate() {
                m_slots.push(xp[xi].clone());
                n_slots.push(match p {
                    Some(yi) => yp[*yi].clone(),
                    None => VertexSet::new(),
                });
            }
            for (yi, part) in yp.iter().enumerate() {
                if !used.contains(&yi) {
                    m_slots.push(VertexSet::new());
                    n_slots.push(part.clone());
                }
            }
            if consistent(g, &m_slots, &n_slots) {
                out.push((m_slots, n_slots));
            }
            return;
        }
        rec(g, xp, yp, i + 1, pairing, out);
        for yi in 0..yp.len() {
            if pairing[..i].contains(&Some(yi)) {
                continue;
            }
            pairing[i] = Some(yi);
            rec(g, xp, yp, i + 1, pairing, out);
            pairing[i] = None;
        }
    }
    fn consistent(g: &LabeledGraph, m_slots: &[VertexSet], n_slots: &[VertexSet]) -> bool {
        let n = m_slots.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (mi, mj) = (&m_slots[i], &m_slots[j]);
                let (ni, nj) = (&n_slots[i], &n_slots[j]);
                if !mi.is_empty() && !mj.is_empty() && !ni.is_empty() && !nj.is_empty() {
                    let m_edge = g.has_edge(*mi.iter().next().unwrap(), *mj.iter().next().unwrap());
                    let n_edge = g.has_edge(*ni.iter().next().unwrap(), *nj.iter().next().unwrap());
                    if m_edge == n_edge {
                        return false;
                    }
                }
            }
        }
        true
    }
    rec(g, xp, yp, 0, &mut pairing, &mut out);
    out
}

/// Applicable atomic cut redexes: the graph is the premise.
pub fn ai_up_instances(g: &LabeledGraph) -> Vec<ProofStep> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        for &w in &verts[i + 1..] {
            if !g.label(v).is_dual_of(g.label(w)) || !g.has_edge(v, w) {
                continue;
            }
            let pair: VertexSet = [v, w].into_iter().collect();
            if g.is_module(&pair) {
                out.push(ProofStep {
                    rule: RuleId::AiUp,
                    premise: g.clone(),
                    conclusion: g.without(&pair),
                    position: pair,
                    params: StepParams::Ai { v, w },
                });
            }
        }
    }
    out
}

/// Applicable super switch up redexes: modules `B * A` in the premise,
/// every proper attachment set S.
pub fn ss_up_instances(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let mut out = Vec::new();
    for module in modules_of(g, limit)? {
        let cocomps = g.induced(&module).co_components();
        if cocomps.len() < 2 {
            continue;
        }
        for a in component_unions(&cocomps, false, false) {
            let b: VertexSet = module.difference(&a).copied().collect();
            let b_elems: Vec<VertexId> = b.iter().copied().collect();
            for s in subsets(&b_elems, true) {
                if s == b {
                    continue;
                }
                let mut conclusion = g.clone();
                for &x in &a {
                    for &y in &b {
                        if !s.contains(&y) {
                            conclusion.remove_edge(x, y);
                        }
                    }
                }
                out.push(ProofStep {
                    rule: RuleId::SsUp,
                    premise: g.clone(),
                    conclusion,
                    position: module.clone(),
                    params: StepParams::Ss { a: a.clone(), b: b.clone(), s },
                });
            }
        }
    }
    Ok(out)
}

/// Applicable prime up redexes: modules `P<Ms> * not-P<Ns>` in the premise.
pub fn p_up_instances(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<ProofStep>, SizeLimitExceeded> {
    let mut out = Vec::new();
    for module in modules_of(g, limit)? {
        let cocomps = g.induced(&module).co_components();
        for x in component_unions(&cocomps, false, true) {
            let y: VertexSet = module.difference(&x).copied().collect();
            let sub = g.induced(&x);
            let Ok(MDTree::Prime { quotient, children }) = decompose(&sub) else {
                continue;
            };
            let m_slots: Vec<VertexSet> = children.iter().map(slot_vertices).collect();
            let pattern = complement_pattern(&quotient);
            for n_slots in slot_assignments(g, &y, &pattern) {
                let mut conclusion = g.clone();
                let inside: Vec<VertexId> = module.iter().copied().collect();
                for (i, &p) in inside.iter().enumerate() {
                    for &q in &inside[i + 1..] {
                        conclusion.remove_edge(p, q);
                    }
                }
                let slot_of = |v: VertexId| -> usize {
                    m_slots
                        .iter()
                        .zip(&n_slots)
                        .position(|(m, n)| m.contains(&v) || n.contains(&v))
                        .unwrap()
                };
                for (i, &p) in inside.iter().enumerate() {
                    for &q in &inside[i + 1..] {
                        let (si, sj) = (slot_of(p), slot_of(q));
                        if si == sj {
                            let same_side = (m_slots[si].contains(&p)
                                && m_slots[si].contains(&q))
                                || (n_slots[si].contains(&p) && n_slots[si].contains(&q));
                            if (same_side && g.has_edge(p, q)) || !same_side {
                                conclusion.add_edge(p, q);
                            }
                        }
                    }
                }
                if conclusion == *g {
                    continue;
                }
                out.push(ProofStep {
                    rule: RuleId::PUp,
                    premise: g.clone(),
                    conclusion,
                    position: module.clone(),
                    params: StepParams::Quotient {
                        m_slots: m_slots.clone(),
                        n_slots,
                    },
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Atom;
    use crate::prover::RuleSet;
    use crate::rules::{check_derivation, Derivation};
    use crate::testutil::*;

    fn assert_steps_check(steps: &[ProofStep], rules: &RuleSet) {
        for s in steps {
            let d = Derivation::single(s.clone());
            check_derivation(&d, rules)
                .unwrap_or_else(|e| panic!("emitted {} instance rejected: {e}", s.rule));
        }
    }

    #[test]
    fn ai_down_examples() {
        let axiom = graph_of("a|~a");
        let steps = ai_down_premises(&axiom);
        assert_eq!(steps.len(), 1);
        assert!(steps[0].premise.is_empty());
        assert!(ai_down_premises(&graph_of("a*~a")).is_empty());
        // a pair that is dual and edgeless but not a module is skipped
        let skewed = parse_graph_str(
            "vertex 0 a\nvertex 1 ~a\nvertex 2 b\nedge 0 2\n",
        );
        assert!(ai_down_premises(&skewed).is_empty());
    }

    #[test]
    fn ai_down_on_the_worked_eight_vertex_graph() {
        // the middle graph of the three-step diamond proof: removing the
        // d pair yields the six-vertex stage
        let g2 = parse_graph_str(
            "vertex 0 ~a\nvertex 1 ~b\nvertex 2 ~c\nvertex 3 ~d\nvertex 4 a\nvertex 5 b\n\
             vertex 6 c\nvertex 7 d\nedge 0 1\nedge 1 2\nedge 4 6\nedge 3 4\nedge 3 5\n\
             edge 7 4\nedge 7 5\n",
        );
        let steps = ai_down_premises(&g2);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].premise.vertex_count(), 6);
    }

    #[test]
    fn ss_down_examples() {
        // on a | b the premise with S = all of B is the join
        let g = graph_of("a|b");
        let steps = ss_down_premises(&g, 16).unwrap();
        assert!(steps.iter().any(|s| s.premise.edge_count() == 1));
        assert_steps_check(&steps, &RuleSet::gs());
    }

    #[test]
    fn p_down_decomposes_prime_against_its_dual() {
        let p4 = path_graph(&["a", "b", "c", "d"]);
        let goal = p4.dual().par(&p4);
        let steps = p_down_premises(&goal, 16).unwrap();
        // some premise is the four-fold tensor of dual pairs
        let target = {
            let pair = |n: &str| {
                LabeledGraph::single(Atom::pos(n)).par(&LabeledGraph::single(Atom::neg(n)))
            };
            pair("a").tensor(&pair("b")).tensor(&pair("c")).tensor(&pair("d"))
        };
        assert!(
            steps
                .iter()
                .any(|s| crate::canon::isomorphic(&s.premise, &target)),
            "expected the slot-wise premise among {} candidates",
            steps.len()
        );
        assert_steps_check(&steps, &RuleSet::gs());
        assert!(p_down_premises(&graph_of("a|~a"), 16).unwrap().is_empty());
    }

    #[test]
    fn enumerators_are_sound_and_shrink_the_measure() {
        for g in all_graphs_upto(4, &["a"]) {
            let mut steps = ai_down_premises(&g);
            steps.extend(ss_down_premises(&g, 16).unwrap());
            steps.extend(p_down_premises(&g, 16).unwrap());
            steps.extend(ss_up_premises(&g, 16).unwrap());
            steps.extend(g_down_premises(&g, 16).unwrap());
            for s in &steps {
                assert!(s.premise.size_measure() < s.conclusion.size_measure());
            }
            assert_steps_check(&steps, &RuleSet::all());
        }
    }

    #[test]
    fn down_instances_dualize_to_up_instances() {
        for g in all_graphs_upto(4, &["a", "b"]).into_iter().step_by(11) {
            for s in ai_down_premises(&g) {
                let dual = ProofStep {
                    rule: RuleId::AiUp,
                    premise: s.conclusion.dual(),
                    conclusion: s.premise.dual(),
                    position: s.position.clone(),
                    params: s.params.clone(),
                };
                assert_steps_check(&[dual], &RuleSet::all());
            }
            for s in ss_down_premises(&g, 16).unwrap() {
                let StepParams::Ss { a, b, s: attach } = &s.params else { unreachable!() };
                let dual = ProofStep {
                    rule: RuleId::SsUp,
                    premise: s.conclusion.dual(),
                    conclusion: s.premise.dual(),
                    position: s.position.clone(),
                    params: StepParams::Ss {
                        a: a.clone(),
                        b: b.clone(),
                        s: b.difference(attach).copied().collect(),
                    },
                };
                assert_steps_check(&[dual], &RuleSet::all());
            }
            for s in p_down_premises(&g, 16).unwrap() {
                let dual = ProofStep {
                    rule: RuleId::PUp,
                    premise: s.conclusion.dual(),
                    conclusion: s.premise.dual(),
                    position: s.position.clone(),
                    params: s.params.clone(),
                };
                assert_steps_check(&[dual], &RuleSet::all());
            }
        }
    }

    #[test]
    fn switch_instances_are_super_switches() {
        // every switch conclusion (A | (B*C) in context) also appears as
        // an emitted super switch with S = V(B)
        let combos = [("a", "b", "c"), ("a|x", "b", "c*d"), ("a", "b|y", "c")];
        for (fa, fb, fc) in combos {
            let a = graph_of(fa);
            let b = graph_of(fb);
            let c = graph_of(fc);
            let conclusion = a.par(&b.tensor(&c));
            let premise_edges = {
                // (A|B)*C: join A and B each to C
                let ab = a.par(&b);
                ab.tensor(&c)
            };
            let steps = ss_down_premises(&conclusion, 16).unwrap();
            assert!(
                steps
                    .iter()
                    .any(|s| crate::canon::isomorphic(&s.premise, &premise_edges)),
                "switch premise missing for ({fa},{fb},{fc})"
            );
        }
    }

    #[test]
    fn ai_up_examples() {
        let cut = graph_of("a*~a");
        let steps = ai_up_instances(&cut);
        assert_eq!(steps.len(), 1);
        assert!(steps[0].conclusion.is_empty());
        assert!(ai_up_instances(&graph_of("a|~a")).is_empty());
    }

    #[test]
    fn ss_up_moves_a_module() {
        // the worked example: d joined to a,b,c keeps only its edges to a
        // and b after the super switch up
        let premise = parse_graph_str(
            "vertex 0 ~a\nvertex 1 ~b\nvertex 2 ~c\nvertex 3 ~d\nvertex 4 a\nvertex 5 b\n\
             vertex 6 c\nvertex 7 d\nedge 4 6\nedge 5 7\nedge 4 7\nedge 0 1\nedge 1 2\nedge 6 7\n",
        );
        let steps = ss_up_instances(&premise, 16).unwrap();
        let expected = parse_graph_str(
            "vertex 0 ~a\nvertex 1 ~b\nvertex 2 ~c\nvertex 3 ~d\nvertex 4 a\nvertex 5 b\n\
             vertex 6 c\nvertex 7 d\nedge 4 6\nedge 5 7\nedge 4 7\nedge 0 1\nedge 1 2\n",
        );
        assert!(steps.iter().any(|s| s.conclusion == expected));
        assert_steps_check(&steps, &RuleSet::all());
    }

    #[test]
    fn p_up_unzips_a_prime_pair() {
        let p4 = path_graph(&["a", "b", "c", "d"]);
        let premise = p4.tensor(&p4.dual());
        let steps = p_up_instances(&premise, 16).unwrap();
        let target = {
            let pair = |n: &str| {
                LabeledGraph::single(Atom::pos(n)).tensor(&LabeledGraph::single(Atom::neg(n)))
            };
            pair("a").par(&pair("b")).par(&pair("c")).par(&pair("d"))
        };
        assert!(steps
            .iter()
            .any(|s| crate::canon::isomorphic(&s.conclusion, &target)));
        assert_steps_check(&steps, &RuleSet::all());
    }

    #[test]
    fn g_down_covers_the_mix_shape() {
        // the quotient rule with an all-empty side turns a union into a
        // join bottom-up
        let g = graph_of("a|b");
        let steps = g_down_premises(&g, 16).unwrap();
        assert!(steps
            .iter()
            .any(|s| crate::canon::isomorphic(&s.premise, &graph_of("a*b"))));
        assert_steps_check(&steps, &RuleSet::all());
    }
}

/// Apply an up rule top-down with explicit parameters. Validates the
/// redex through the checker and returns the rewritten graph.
pub fn apply_up_rule(
    g: &LabeledGraph,
    rule: RuleId,
    params: StepParams,
) -> Result<LabeledGraph, String> {
    let step = match (rule, &params) {
        (RuleId::AiUp, StepParams::Ai { v, w }) => {
            let pair: crate::graph::VertexSet = [*v, *w].into_iter().collect();
            if !g.contains_vertex(*v) || !g.contains_vertex(*w) {
                return Err("redex vertices missing".to_string());
            }
            ProofStep {
                rule,
                premise: g.clone(),
                conclusion: g.without(&pair),
                position: pair,
                params,
            }
        }
        (RuleId::SsUp, StepParams::Ss { a, b, s }) => {
            let mut conclusion = g.clone();
            for &x in a {
                for &y in b {
                    if !s.contains(&y) {
                        conclusion.remove_edge(x, y);
                    }
                }
            }
            ProofStep {
                rule,
                premise: g.clone(),
                conclusion,
                position: a.union(b).copied().collect(),
                params,
            }
        }
        (RuleId::PUp, StepParams::Quotient { m_slots, n_slots }) => {
            let position: crate::graph::VertexSet = m_slots
                .iter()
                .chain(n_slots)
                .flat_map(|s| s.iter().copied())
                .collect();
            let inside: Vec<VertexId> = position.iter().copied().collect();
            let mut conclusion = g.clone();
            for (i, &p) in inside.iter().enumerate() {
                for &q in &inside[i + 1..] {
                    conclusion.remove_edge(p, q);
                }
            }
            let slot_of = |v: VertexId| -> Option<usize> {
                m_slots
                    .iter()
                    .zip(n_slots)
                    .position(|(m, n)| m.contains(&v) || n.contains(&v))
            };
            for (i, &p) in inside.iter().enumerate() {
                for &q in &inside[i + 1..] {
                    let (si, sj) = match (slot_of(p), slot_of(q)) {
                        (Some(a), Some(b)) => (a, b),
                        _ => return Err("redex vertex outside the slots".to_string()),
                    };
                    if si == sj {
                        let same_side = (m_slots[si].contains(&p) && m_slots[si].contains(&q))
                            || (n_slots[si].contains(&p) && n_slots[si].contains(&q));
                        if (same_side && g.has_edge(p, q)) || !same_side {
                            conclusion.add_edge(p, q);
                        }
                    }
                }
            }
            ProofStep { rule, premise: g.clone(), conclusion, position, params }
        }
        _ => return Err("rule/parameter combination is not an up rule".to_string()),
    };
    let d = crate::rules::Derivation::single(step.clone());
    crate::rules::check_derivation(&d, &crate::prover::RuleSet::all())
        .map_err(|e| format!("invalid redex: {e}"))?;
    Ok(step.conclusion)
}
