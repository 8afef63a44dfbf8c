//! Polynomial-time verification of derivations. Every side condition is
//! re-checked from the explicit step parameters; nothing is searched.

use super::{Derivation, ProofStep, RuleId, StepParams};
use crate::canon::check_isomorphism;
use crate::graph::{LabeledGraph, VertexId, VertexSet};
use crate::mdtree::{is_prime, slot_atom};
use crate::prover::RuleSet;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckError {
    /// Index of the offending step, or `usize::MAX` for derivation-level
    /// failures.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step == usize::MAX {
            write!(f, "derivation: {}", self.reason)
        } else {
            write!(f, "step {}: {}", self.step + 1, self.reason)
        }
    }
}

impl std::error::Error for CheckError {}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError { step, reason: reason.into() })
}

pub fn check_derivation(d: &Derivation, rules: &RuleSet) -> Result<(), CheckError> {
    if let Some(first) = d.steps.first() {
        if first.premise != d.premise {
            return fail(usize::MAX, "first step premise differs from derivation premise");
        }
        if d.steps.last().unwrap().conclusion != d.conclusion {
            return fail(usize::MAX, "last step conclusion differs from derivation conclusion");
        }
    } else if d.premise != d.conclusion {
        return fail(usize::MAX, "empty derivation with distinct endpoint graphs");
    }
    for (i, pair) in d.steps.windows(2).enumerate() {
        if pair[0].conclusion != pair[1].premise {
            return fail(i + 1, "premise does not match previous conclusion");
        }
    }
    for (i, step) in d.steps.iter().enumerate() {
        if !rules.contains(step.rule) {
            return fail(i, format!("rule {} not in the active rule set", step.rule));
        }
        check_step(step).map_err(|reason| CheckError { step: i, reason })?;
    }
    Ok(())
}

fn check_step(step: &ProofStep) -> Result<(), String> {
    match (step.rule, &step.params) {
        (RuleId::AiDown, StepParams::Ai { v, w }) => ai_down(step, *v, *w),
        (RuleId::AiUp, StepParams::Ai { v, w }) => ai_up(step, *v, *w),
        (RuleId::SsDown, StepParams::Ss { a, b, s }) => ss_down(step, a, b, s),
        (RuleId::SsUp, StepParams::Ss { a, b, s }) => ss_up(step, a, b, s),
        (RuleId::Switch, StepParams::Sw { a, b, c }) => switch(step, a, b, c),
        (RuleId::PDown, StepParams::Quotient { m_slots, n_slots }) => {
            quotient_down(step, m_slots, n_slots, true)
        }
        (RuleId::GDown, StepParams::Quotient { m_slots, n_slots }) => {
            quotient_down(step, m_slots, n_slots, false)
        }
        (RuleId::PUp, StepParams::Quotient { m_slots, n_slots }) => {
            quotient_up(step, m_slots, n_slots, true)
        }
        (RuleId::GUp, StepParams::Quotient { m_slots, n_slots }) => {
            quotient_up(step, m_slots, n_slots, false)
        }
        (RuleId::IdDown, StepParams::Id { left, right, pairing }) => {
            id_down(step, left, right, pairing)
        }
        (RuleId::IdUp, StepParams::Id { left, right, pairing }) => {
            id_up(step, left, right, pairing)
        }
        (RuleId::Iso, StepParams::Iso { map }) => iso(step, map),
        _ => Err("parameter shape does not fit the rule".to_string()),
    }
}

fn check_pair_module(g: &LabeledGraph, v: VertexId, w: VertexId) -> Result<VertexSet, String> {
    if !g.contains_vertex(v) || !g.contains_vertex(w) || v == w {
        return Err("pair vertices missing".to_string());
    }
    if !g.label(v).is_dual_of(g.label(w)) {
        return Err("pair labels are not dual".to_string());
    }
    let pair: VertexSet = [v, w].into_iter().collect();
    if !g.is_module(&pair) {
        return Err("pair is not a module".to_string());
    }
    Ok(pair)
}

fn ai_down(step: &ProofStep, v: VertexId, w: VertexId) -> Result<(), String> {
    let g = &step.conclusion;
    let pair = check_pair_module(g, v, w)?;
    if g.has_edge(v, w) {
        return Err("identity pair must not share an edge".to_string());
    }
    if step.position != pair {
        return Err("position differs from the pair".to_string());
    }
    if step.premise != g.without(&pair) {
        return Err("premise is not the conclusion minus the pair".to_string());
    }
    Ok(())
}

fn ai_up(step: &ProofStep, v: VertexId, w: VertexId) -> Result<(), String> {
    let g = &step.premise;
    let pair = check_pair_module(g, v, w)?;
    if !g.has_edge(v, w) {
        return Err("cut pair must share an edge".to_string());
    }
    if step.position != pair {
        return Err("position differs from the pair".to_string());
    }
    if step.conclusion != g.without(&pair) {
        return Err("conclusion is not the premise minus the pair".to_string());
    }
    Ok(())
}

fn disjoint(a: &VertexSet, b: &VertexSet) -> bool {
    a.intersection(b).next().is_none()
}

fn ss_down(step: &ProofStep, a: &VertexSet, b: &VertexSet, s: &VertexSet) -> Result<(), String> {
    let g = &step.conclusion;
    if a.is_empty() {
        return Err("side condition A != empty violated".to_string());
    }
    if s.is_empty() {
        return Err("side condition S != empty violated".to_string());
    }
    if !s.is_subset(b) {
        return Err("S must be a subset of B".to_string());
    }
    if !disjoint(a, b) {
        return Err("A and B overlap".to_string());
    }
    let module: VertexSet = a.union(b).copied().collect();
    if step.position != module {
        return Err("position differs from A union B".to_string());
    }
    if module.iter().any(|v| !g.contains_vertex(*v)) {
        return Err("rewritten module has vertices outside the graph".to_string());
    }
    if !g.is_module(&module) {
        return Err("A union B is not a module of the conclusion".to_string());
    }
    for &x in a {
        for &y in b {
            if g.has_edge(x, y) {
                return Err("conclusion has an edge between A and B".to_string());
            }
        }
    }
    let mut premise = g.clone();
    for &x in a {
        for &y in s {
            premise.add_edge(x, y);
        }
    }
    if step.premise != premise {
        return Err("premise is not the conclusion plus A x S".to_string());
    }
    Ok(())
}

fn ss_up(step: &ProofStep, a: &VertexSet, b: &VertexSet, s: &VertexSet) -> Result<(), String> {
    let g = &step.premise;
    if a.is_empty() {
        return Err("side condition A != empty violated".to_string());
    }
    if !s.is_subset(b) || s == b {
        return Err("side condition S proper subset of B violated".to_string());
    }
    if !disjoint(a, b) || b.is_empty() {
        return Err("A and B must be disjoint and B non-empty".to_string());
    }
    let module: VertexSet = a.union(b).copied().collect();
    if step.position != module {
        return Err("position differs from A union B".to_string());
    }
    if module.iter().any(|v| !g.contains_vertex(*v)) {
        return Err("rewritten module has vertices outside the graph".to_string());
    }
    if !g.is_module(&module) {
        return Err("A union B is not a module of the premise".to_string());
    }
    for &x in a {
        for &y in b {
            if !g.has_edge(x, y) {
                return Err("premise is missing an edge of B tensor A".to_string());
            }
        }
    }
    let mut conclusion = g.clone();
    for &x in a {
        for &y in b {
            if !s.contains(&y) {
                conclusion.remove_edge(x, y);
            }
        }
    }
    if step.conclusion != conclusion {
        return Err("conclusion is not the premise minus A x (B\\S)".to_string());
    }
    Ok(())
}

fn switch(step: &ProofStep, a: &VertexSet, b: &VertexSet, c: &VertexSet) -> Result<(), String> {
    let g = &step.conclusion;
    if a.is_empty() || c.is_empty() {
        return Err("switch needs non-empty A and C".to_string());
    }
    if !disjoint(a, b) || !disjoint(a, c) || !disjoint(b, c) {
        return Err("A, B, C must be pairwise disjoint".to_string());
    }
    let module: VertexSet = a.union(b).copied().chain(c.iter().copied()).collect();
    if step.position != module {
        return Err("position differs from A union B union C".to_string());
    }
    if !g.is_module(&module) {
        return Err("A union B union C is not a module of the conclusion".to_string());
    }
    // conclusion inside the module is a | (b * c)
    for &x in a {
        for &y in b.iter().chain(c) {
            if g.has_edge(x, y) {
                return Err("conclusion connects A to B or C".to_string());
            }
        }
    }
    for &x in b {
        for &y in c {
            if !g.has_edge(x, y) {
                return Err("conclusion is missing a B-C edge".to_string());
            }
        }
    }
    let mut premise = g.clone();
    for &x in a {
        for &y in c {
            premise.add_edge(x, y);
        }
    }
    if step.premise != premise {
        return Err("premise is not (A|B) tensor C".to_string());
    }
    Ok(())
}

struct SlotCheck<'a> {
    m_slots: &'a [VertexSet],
    n_slots: &'a [VertexSet],
}

impl<'a> SlotCheck<'a> {
    /// Common structural constraints shared by the quotient rules, checked
    /// against the par-shaped side (`g` = conclusion for down rules).
    fn check_par_side(&self, g: &LabeledGraph, position: &VertexSet) -> Result<LabeledGraph, String> {
        let n = self.m_slots.len();
        if n != self.n_slots.len() {
            return Err("slot vectors have different lengths".to_string());
        }
        let mut seen = VertexSet::new();
        for s in self.m_slots.iter().chain(self.n_slots) {
            for v in s {
                if !seen.insert(*v) {
                    return Err("slots overlap".to_string());
                }
                if !g.contains_vertex(*v) {
                    return Err("slot vertex missing from the graph".to_string());
                }
            }
        }
        if &seen != position {
            return Err("position differs from the slot union".to_string());
        }
        if !g.is_module(position) {
            return Err("slot union is not a module".to_string());
        }
        // the two sides are disjoint unions: no m-n edges at all
        for m in self.m_slots {
            for nset in self.n_slots {
                for &x in m {
                    for &y in nset {
                        if g.has_edge(x, y) {
                            return Err("edge between the par'd sides".to_string());
                        }
                    }
                }
            }
        }
        // quotient edges: all-or-none between slot pairs, complementary
        // across the two sides
        let mut quotient = LabeledGraph::empty();
        for i in 0..n {
            quotient.add_vertex(VertexId(i as u32), slot_atom());
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let m_rel = all_or_none(g, &self.m_slots[i], &self.m_slots[j])?;
                let n_rel = all_or_none(g, &self.n_slots[i], &self.n_slots[j])?;
                let edge = match (m_rel, n_rel) {
                    (Some(me), Some(ne)) => {
                        if me == ne {
                            return Err(format!(
                                "slots {i},{j} are not complementary across the two sides"
                            ));
                        }
                        me
                    }
                    (Some(me), None) => me,
                    (None, Some(ne)) => !ne,
                    (None, None) => false,
                };
                if edge {
                    quotient.add_edge(VertexId(i as u32), VertexId(j as u32));
                }
            }
        }
        Ok(quotient)
    }
}

/// Some(true) if all edges between the sets are present, Some(false) if
/// none are, None if a side is empty; mixed adjacency is an error.
fn all_or_none(g: &LabeledGraph, a: &VertexSet, b: &VertexSet) -> Result<Option<bool>, String> {
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    let mut any = false;
    let mut all = true;
    for &x in a {
        for &y in b {
            if g.has_edge(x, y) {
                any = true;
            } else {
                all = false;
            }
        }
    }
    match (any, all) {
        (false, _) => Ok(Some(false)),
        (true, true) => Ok(Some(true)),
        (true, false) => Err("mixed adjacency between slots".to_string()),
    }
}

fn quotient_down(
    step: &ProofStep,
    m_slots: &[VertexSet],
    n_slots: &[VertexSet],
    prime_rule: bool,
) -> Result<(), String> {
    if prime_rule {
        if m_slots.len() < 4 {
            return Err("prime rule needs a quotient with at least 4 vertices".to_string());
        }
        if m_slots.iter().any(|s| s.is_empty()) {
            return Err("side condition: designated slots must be non-empty".to_string());
        }
    } else if m_slots
        .iter()
        .zip(n_slots)
        .any(|(m, n)| m.is_empty() && n.is_empty())
    {
        return Err("slot with both sides empty".to_string());
    }
    let check = SlotCheck { m_slots, n_slots };
    let quotient = check.check_par_side(&step.conclusion, &step.position)?;
    if prime_rule && !is_prime(&quotient) {
        return Err("quotient is not prime".to_string());
    }
    let premise = super::quotient_down_premise(&step.conclusion, m_slots, n_slots);
    if step.premise != premise {
        return Err("premise is not the multi-tensor of slot-wise pars".to_string());
    }
    if step.premise == step.conclusion {
        return Err("vacuous quotient step".to_string());
    }
    Ok(())
}

fn quotient_up(
    step: &ProofStep,
    m_slots: &[VertexSet],
    n_slots: &[VertexSet],
    prime_rule: bool,
) -> Result<(), String> {
    if prime_rule {
        if m_slots.len() < 4 {
            return Err("prime rule needs a quotient with at least 4 vertices".to_string());
        }
        if m_slots.iter().any(|s| s.is_empty()) {
            return Err("side condition: designated slots must be non-empty".to_string());
        }
    } else if m_slots
        .iter()
        .zip(n_slots)
        .any(|(m, n)| m.is_empty() && n.is_empty())
    {
        return Err("slot with both sides empty".to_string());
    }
    // premise holds the tensor of the two compositions
    let g = &step.premise;
    let n = m_slots.len();
    if n != n_slots.len() {
        return Err("slot vectors have different lengths".to_string());
    }
    let mut seen = VertexSet::new();
    for s in m_slots.iter().chain(n_slots) {
        for v in s {
            if !seen.insert(*v) || !g.contains_vertex(*v) {
                return Err("bad slot vertex".to_string());
            }
        }
    }
    if seen != step.position {
        return Err("position differs from the slot union".to_string());
    }
    if !g.is_module(&step.position) {
        return Err("slot union is not a module of the premise".to_string());
    }
    let m_all: VertexSet = m_slots.iter().flatten().copied().collect();
    let n_all: VertexSet = n_slots.iter().flatten().copied().collect();
    for &x in &m_all {
        for &y in &n_all {
            if !g.has_edge(x, y) {
                return Err("premise is missing a tensor edge between the sides".to_string());
            }
        }
    }
    let mut quotient = LabeledGraph::empty();
    for i in 0..n {
        quotient.add_vertex(VertexId(i as u32), slot_atom());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let m_rel = all_or_none(g, &m_slots[i], &m_slots[j])?;
            let n_rel = all_or_none(g, &n_slots[i], &n_slots[j])?;
            let edge = match (m_rel, n_rel) {
                (Some(me), Some(ne)) => {
                    if me == ne {
                        return Err(format!(
                            "slots {i},{j} are not complementary across the two sides"
                        ));
                    }
                    me
                }
                (Some(me), None) => me,
                (None, Some(ne)) => !ne,
                (None, None) => false,
            };
            if edge {
                quotient.add_edge(VertexId(i as u32), VertexId(j as u32));
            }
        }
    }
    if prime_rule && !is_prime(&quotient) {
        return Err("quotient is not prime".to_string());
    }
    // conclusion: slot-wise tensors, disjoint across slots
    let mut conclusion = g.clone();
    let inside: Vec<VertexId> = step.position.iter().copied().collect();
    for (i, &x) in inside.iter().enumerate() {
        for &y in &inside[i + 1..] {
            conclusion.remove_edge(x, y);
        }
    }
    let slot_of = |v: VertexId| -> usize {
        m_slots
            .iter()
            .zip(n_slots)
            .position(|(m, nn)| m.contains(&v) || nn.contains(&v))
            .unwrap()
    };
    for (i, &x) in inside.iter().enumerate() {
        for &y in &inside[i + 1..] {
            let (si, sj) = (slot_of(x), slot_of(y));
            if si == sj {
                let same_side = (m_slots[si].contains(&x) && m_slots[si].contains(&y))
                    || (n_slots[si].contains(&x) && n_slots[si].contains(&y));
                if (same_side && g.has_edge(x, y)) || !same_side {
                    conclusion.add_edge(x, y);
                }
            }
        }
    }
    if step.conclusion != conclusion {
        return Err("conclusion is not the par of slot-wise tensors".to_string());
    }
    if step.conclusion == step.premise {
        return Err("vacuous quotient step".to_string());
    }
    Ok(())
}

fn check_dual_halves(
    g: &LabeledGraph,
    left: &VertexSet,
    right: &VertexSet,
    pairing: &[(VertexId, VertexId)],
) -> Result<(), String> {
    if !disjoint(left, right) {
        return Err("halves overlap".to_string());
    }
    if pairing.len() != left.len() || left.len() != right.len() {
        return Err("pairing is not a bijection between the halves".to_string());
    }
    let map: BTreeMap<VertexId, VertexId> = pairing.iter().copied().collect();
    if map.len() != pairing.len() {
        return Err("pairing repeats a vertex".to_string());
    }
    let image: VertexSet = map.values().copied().collect();
    if map.keys().any(|v| !left.contains(v)) || image != *right {
        return Err("pairing does not map the left half onto the right".to_string());
    }
    for (&x, &y) in &map {
        if !g.label(x).is_dual_of(g.label(y)) {
            return Err("paired labels are not dual".to_string());
        }
    }
    let lefts: Vec<VertexId> = left.iter().copied().collect();
    for (i, &x) in lefts.iter().enumerate() {
        for &y in &lefts[i + 1..] {
            if g.has_edge(x, y) == g.has_edge(map[&x], map[&y]) {
                return Err("halves are not edge-complementary".to_string());
            }
        }
    }
    Ok(())
}

fn id_down(
    step: &ProofStep,
    left: &VertexSet,
    right: &VertexSet,
    pairing: &[(VertexId, VertexId)],
) -> Result<(), String> {
    let g = &step.conclusion;
    let module: VertexSet = left.union(right).copied().collect();
    if step.position != module {
        return Err("position differs from the identity module".to_string());
    }
    if module.iter().any(|v| !g.contains_vertex(*v)) {
        return Err("identity module has vertices outside the graph".to_string());
    }
    if !g.is_module(&module) {
        return Err("identity pair is not inserted as a module".to_string());
    }
    for &x in left {
        for &y in right {
            if g.has_edge(x, y) {
                return Err("identity halves must be disjoint (par)".to_string());
            }
        }
    }
    check_dual_halves(g, left, right, pairing)?;
    if step.premise != g.without(&module) {
        return Err("premise is not the conclusion minus the identity module".to_string());
    }
    Ok(())
}

fn id_up(
    step: &ProofStep,
    left: &VertexSet,
    right: &VertexSet,
    pairing: &[(VertexId, VertexId)],
) -> Result<(), String> {
    let g = &step.premise;
    let module: VertexSet = left.union(right).copied().collect();
    if step.position != module {
        return Err("position differs from the cut module".to_string());
    }
    if module.iter().any(|v| !g.contains_vertex(*v)) {
        return Err("cut module has vertices outside the graph".to_string());
    }
    if !g.is_module(&module) {
        return Err("cut pair is not a module".to_string());
    }
    for &x in left {
        for &y in right {
            if !g.has_edge(x, y) {
                return Err("cut halves must be joined (tensor)".to_string());
            }
        }
    }
    check_dual_halves(g, left, right, pairing)?;
    if step.conclusion != g.without(&module) {
        return Err("conclusion is not the premise minus the cut module".to_string());
    }
    Ok(())
}

fn iso(step: &ProofStep, map: &[(VertexId, VertexId)]) -> Result<(), String> {
    let f: BTreeMap<VertexId, VertexId> = map.iter().copied().collect();
    if f.len() != map.len() {
        return Err("isomorphism repeats a vertex".to_string());
    }
    if check_isomorphism(&step.premise, &step.conclusion, &f) {
        Ok(())
    } else {
        Err("recorded map is not an isomorphism".to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::RuleSet;
    use crate::rules::{parse_derivation, step_ss_down, Derivation, StepParams};
    use crate::testutil::*;

    const GOLDEN: &str = include_str!("../../corpus/eq4_10.proof");

    #[test]
    fn golden_proof_checks_and_has_three_steps() {
        let d = parse_derivation(GOLDEN).unwrap();
        assert_eq!(d.inference_len(), 3);
        assert!(check_derivation(&d, &RuleSet::all()).is_ok());
        // the general identity step is not a gs primitive
        assert!(check_derivation(&d, &RuleSet::gs()).is_err());
    }

    #[test]
    fn emptied_attachment_set_is_rejected() {
        let mut d = parse_derivation(GOLDEN).unwrap();
        let last = d.steps.last_mut().unwrap();
        if let StepParams::Ss { s, .. } = &mut last.params {
            s.clear();
        }
        let err = check_derivation(&d, &RuleSet::all()).unwrap_err();
        assert_eq!(err.step, 2);
        assert!(err.reason.contains("S != empty"));
    }

    #[test]
    fn broken_chaining_is_reported() {
        let mut d = parse_derivation(GOLDEN).unwrap();
        d.steps.remove(1);
        assert!(check_derivation(&d, &RuleSet::all()).is_err());
    }

    #[test]
    fn switch_steps_check() {
        // (a|b)*c over a|(b*c)
        let a = graph_of("a");
        let b = graph_of("b");
        let c = graph_of("c");
        let conclusion = a.par(&b.tensor(&c));
        let ids: Vec<crate::graph::VertexId> = conclusion.vertices().collect();
        let mut premise = conclusion.clone();
        premise.add_edge(ids[0], ids[2]);
        let step = crate::rules::ProofStep {
            rule: RuleId::Switch,
            premise,
            conclusion,
            position: ids.iter().copied().collect(),
            params: StepParams::Sw {
                a: [ids[0]].into_iter().collect(),
                b: [ids[1]].into_iter().collect(),
                c: [ids[2]].into_iter().collect(),
            },
        };
        assert!(check_derivation(&Derivation::single(step), &RuleSet::all()).is_ok());
    }

    #[test]
    fn identity_up_steps_check() {
        // a * ~a as a cut module over the empty graph
        let g = graph_of("a*~a");
        let ids: Vec<crate::graph::VertexId> = g.vertices().collect();
        let step = crate::rules::ProofStep {
            rule: RuleId::IdUp,
            premise: g.clone(),
            conclusion: crate::graph::LabeledGraph::empty(),
            position: ids.iter().copied().collect(),
            params: StepParams::Id {
                left: [ids[0]].into_iter().collect(),
                right: [ids[1]].into_iter().collect(),
                pairing: vec![(ids[0], ids[1])],
            },
        };
        assert!(check_derivation(&Derivation::single(step), &RuleSet::all()).is_ok());
        // and it is rejected when the halves are not joined
        let bad = graph_of("a|~a");
        let step = crate::rules::ProofStep {
            rule: RuleId::IdUp,
            premise: bad.clone(),
            conclusion: crate::graph::LabeledGraph::empty(),
            position: bad.vertex_set(),
            params: StepParams::Id {
                left: [ids[0]].into_iter().collect(),
                right: [ids[1]].into_iter().collect(),
                pairing: vec![(ids[0], ids[1])],
            },
        };
        assert!(check_derivation(&Derivation::single(step), &RuleSet::all()).is_err());
    }

    #[test]
    fn wrong_premise_graph_is_rejected() {
        let g = graph_of("a|b");
        let ids: Vec<crate::graph::VertexId> = g.vertices().collect();
        let mut step = step_ss_down(
            &g,
            &[ids[0]].into_iter().collect(),
            &[ids[1]].into_iter().collect(),
            &[ids[1]].into_iter().collect(),
        );
        step.premise.remove_edge(ids[0], ids[1]);
        let err = check_derivation(&Derivation::single(step), &RuleSet::all()).unwrap_err();
        assert!(err.reason.contains("premise"));
    }
}
