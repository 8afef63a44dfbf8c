//! Inference rules as checkable proof steps. Every step stores its full
//! premise and conclusion graphs plus explicit parameters, so checking is
//! polynomial and never searches; isomorphisms are recorded, not found.

mod checker;
mod construct;
mod enumerate;
mod serial;

pub use checker::{check_derivation, CheckError};
pub use construct::{derive_g_down, derive_identity, GDownError, GDownResult};
pub use enumerate::{
    ai_down_premises, ai_up_instances, apply_up_rule, g_down_premises, p_down_premises,
    p_up_instances, ss_down_premises, ss_up_instances, ss_up_premises,
};
pub use serial::{parse_derivation, serialize_derivation, ProofParseError};

use crate::graph::{GraphContext, LabeledGraph, VertexId, VertexSet};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    AiDown,
    SsDown,
    PDown,
    AiUp,
    SsUp,
    PUp,
    IdDown,
    IdUp,
    Switch,
    GDown,
    GUp,
    Iso,
}

impl RuleId {
    pub fn token(self) -> &'static str {
        match self {
            RuleId::AiDown => "ai-down",
            RuleId::SsDown => "ss-down",
            RuleId::PDown => "p-down",
            RuleId::AiUp => "ai-up",
            RuleId::SsUp => "ss-up",
            RuleId::PUp => "p-up",
            RuleId::IdDown => "i-down",
            RuleId::IdUp => "i-up",
            RuleId::Switch => "sw",
            RuleId::GDown => "g-down",
            RuleId::GUp => "g-up",
            RuleId::Iso => "iso",
        }
    }

    pub fn from_token(s: &str) -> Option<RuleId> {
        Some(match s {
            "ai-down" => RuleId::AiDown,
            "ss-down" => RuleId::SsDown,
            "p-down" => RuleId::PDown,
            "ai-up" => RuleId::AiUp,
            "ss-up" => RuleId::SsUp,
            "p-up" => RuleId::PUp,
            "i-down" => RuleId::IdDown,
            "i-up" => RuleId::IdUp,
            "sw" => RuleId::Switch,
            "g-down" => RuleId::GDown,
            "g-up" => RuleId::GUp,
            "iso" => RuleId::Iso,
            _ => return None,
        })
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepParams {
    /// Atomic identity: the dual pair involved.
    Ai { v: VertexId, w: VertexId },
    /// Super switch: module split `a`/`b` and the attachment set `s`.
    Ss { a: VertexSet, b: VertexSet, s: VertexSet },
    /// Switch: `(a|b)*c` over `a|(b*c)`.
    Sw { a: VertexSet, b: VertexSet, c: VertexSet },
    /// Prime and general quotient rules: slot contents on both sides;
    /// `m_slots` is the side required to be all non-empty for p rules.
    Quotient { m_slots: Vec<VertexSet>, n_slots: Vec<VertexSet> },
    /// General identity: the two halves and their dualizing bijection.
    Id { left: VertexSet, right: VertexSet, pairing: Vec<(VertexId, VertexId)> },
    /// Explicit isomorphism from premise to conclusion.
    Iso { map: Vec<(VertexId, VertexId)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: RuleId,
    pub premise: LabeledGraph,
    pub conclusion: LabeledGraph,
    /// The rewritten module: of the conclusion for down rules, of the
    /// premise for up rules.
    pub position: VertexSet,
    pub params: StepParams,
}

/// A derivation in sequential form: steps chained premise-to-conclusion.
/// A proof is a derivation whose premise is the empty graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub premise: LabeledGraph,
    pub conclusion: LabeledGraph,
    pub steps: Vec<ProofStep>,
}

impl Derivation {
    pub fn identity(g: LabeledGraph) -> Derivation {
        Derivation { premise: g.clone(), conclusion: g, steps: Vec::new() }
    }

    pub fn single(step: ProofStep) -> Derivation {
        Derivation {
            premise: step.premise.clone(),
            conclusion: step.conclusion.clone(),
            steps: vec![step],
        }
    }

    pub fn is_proof(&self) -> bool {
        self.premise.is_empty()
    }

    /// Number of inference steps, isomorphism steps not counted.
    pub fn inference_len(&self) -> usize {
        self.steps.iter().filter(|s| s.rule != RuleId::Iso).count()
    }

    /// Extend at the conclusion end: `self` then `step`.
    pub fn then(mut self, step: ProofStep) -> Derivation {
        debug_assert_eq!(self.conclusion, step.premise);
        self.conclusion = step.conclusion.clone();
        self.steps.push(step);
        self
    }

    /// Chain two derivations; `self.conclusion` must equal `next.premise`
    /// exactly, vertex ids included.
    pub fn compose(mut self, next: Derivation) -> Derivation {
        debug_assert_eq!(self.conclusion, next.premise);
        self.steps.extend(next.steps);
        self.conclusion = next.conclusion;
        self
    }

    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Derivation {
        let relabel_set = |s: &VertexSet| s.iter().map(|v| map[v]).collect::<VertexSet>();
        let relabel_params = |p: &StepParams| match p {
            StepParams::Ai { v, w } => StepParams::Ai { v: map[v], w: map[w] },
            StepParams::Ss { a, b, s } => StepParams::Ss {
                a: relabel_set(a),
                b: relabel_set(b),
                s: relabel_set(s),
            },
            StepParams::Sw { a, b, c } => StepParams::Sw {
                a: relabel_set(a),
                b: relabel_set(b),
                c: relabel_set(c),
            },
            StepParams::Quotient { m_slots, n_slots } => StepParams::Quotient {
                m_slots: m_slots.iter().map(&relabel_set).collect(),
                n_slots: n_slots.iter().map(&relabel_set).collect(),
            },
            StepParams::Id { left, right, pairing } => StepParams::Id {
                left: relabel_set(left),
                right: relabel_set(right),
                pairing: pairing.iter().map(|(x, y)| (map[x], map[y])).collect(),
            },
            StepParams::Iso { map: m } => StepParams::Iso {
                map: m.iter().map(|(x, y)| (map[x], map[y])).collect(),
            },
        };
        Derivation {
            premise: self.premise.relabel(map),
            conclusion: self.conclusion.relabel(map),
            steps: self
                .steps
                .iter()
                .map(|s| ProofStep {
                    rule: s.rule,
                    premise: s.premise.relabel(map),
                    conclusion: s.conclusion.relabel(map),
                    position: relabel_set(&s.position),
                    params: relabel_params(&s.params),
                })
                .collect(),
        }
    }

    /// Lift the whole derivation into a context: every intermediate graph
    /// is plugged into the hole. Module rewrites stay valid because the
    /// plugged graph is a module of the result.
    pub fn embed_in(&self, ctx: &GraphContext) -> Derivation {
        let delta = ctx.host.vertices().next_back().map_or(0, |v| v.0 + 1);
        let map_all: BTreeMap<VertexId, VertexId> = self
            .all_ids()
            .into_iter()
            .map(|v| (v, VertexId(v.0 + delta)))
            .collect();
        let shifted = self.relabel(&map_all);
        Derivation {
            premise: plug_shifted(ctx, &shifted.premise),
            conclusion: plug_shifted(ctx, &shifted.conclusion),
            steps: shifted
                .steps
                .into_iter()
                .map(|s| ProofStep {
                    premise: plug_shifted(ctx, &s.premise),
                    conclusion: plug_shifted(ctx, &s.conclusion),
                    ..s
                })
                .collect(),
        }
    }

    fn all_ids(&self) -> VertexSet {
        let mut ids: VertexSet = self.premise.vertices().collect();
        ids.extend(self.conclusion.vertices());
        for s in &self.steps {
            ids.extend(s.premise.vertices());
            ids.extend(s.conclusion.vertices());
        }
        ids
    }
}

/// Union of a host and an already-shifted module graph, wired to R.
fn plug_shifted(ctx: &GraphContext, shifted: &LabeledGraph) -> LabeledGraph {
    let mut out = ctx.host.clone();
    for v in shifted.vertices() {
        out.add_vertex(v, shifted.label(v).clone());
    }
    for (v, w) in shifted.edges() {
        out.add_edge(v, w);
    }
    for v in shifted.vertices() {
        for &r in &ctx.hole_neighbors {
            out.add_edge(v, r);
        }
    }
    out
}

/// Build the atomic identity step with the given conclusion.
pub fn step_ai_down(conclusion: &LabeledGraph, v: VertexId, w: VertexId) -> ProofStep {
    let pair: VertexSet = [v, w].into_iter().collect();
    ProofStep {
        rule: RuleId::AiDown,
        premise: conclusion.without(&pair),
        conclusion: conclusion.clone(),
        position: pair,
        params: StepParams::Ai { v, w },
    }
}

/// Build a super switch down step: the premise re-attaches `a` to `s`.
pub fn step_ss_down(
    conclusion: &LabeledGraph,
    a: &VertexSet,
    b: &VertexSet,
    s: &VertexSet,
) -> ProofStep {
    let mut premise = conclusion.clone();
    for &x in a {
        for &y in s {
            premise.add_edge(x, y);
        }
    }
    ProofStep {
        rule: RuleId::SsDown,
        premise,
        conclusion: conclusion.clone(),
        position: a.union(b).copied().collect(),
        params: StepParams::Ss { a: a.clone(), b: b.clone(), s: s.clone() },
    }
}

/// Rewrite the module covered by the slots into the multi-tensor of
/// slot-wise pars; shared by the p and g down rules.
pub fn quotient_down_premise(
    conclusion: &LabeledGraph,
    m_slots: &[VertexSet],
    n_slots: &[VertexSet],
) -> LabeledGraph {
    let position: VertexSet = m_slots
        .iter()
        .chain(n_slots)
        .flat_map(|s| s.iter().copied())
        .collect();
    let mut premise = conclusion.clone();
    let inside: Vec<VertexId> = position.iter().copied().collect();
    for (i, &x) in inside.iter().enumerate() {
        for &y in &inside[i + 1..] {
            premise.remove_edge(x, y);
        }
    }
    let slot_of = |v: VertexId| -> usize {
        m_slots
            .iter()
            .zip(n_slots)
            .position(|(m, n)| m.contains(&v) || n.contains(&v))
            .expect("vertex belongs to a slot")
    };
    for (i, &x) in inside.iter().enumerate() {
        for &y in &inside[i + 1..] {
            let (si, sj) = (slot_of(x), slot_of(y));
            if si != sj {
                premise.add_edge(x, y);
            } else {
                let same_side = (m_slots[si].contains(&x) && m_slots[si].contains(&y))
                    || (n_slots[si].contains(&x) && n_slots[si].contains(&y));
                if same_side && conclusion.has_edge(x, y) {
                    premise.add_edge(x, y);
                }
            }
        }
    }
    premise
}

pub fn step_p_down(
    conclusion: &LabeledGraph,
    m_slots: Vec<VertexSet>,
    n_slots: Vec<VertexSet>,
) -> ProofStep {
    let premise = quotient_down_premise(conclusion, &m_slots, &n_slots);
    let position = m_slots
        .iter()
        .chain(&n_slots)
        .flat_map(|s| s.iter().copied())
        .collect();
    ProofStep {
        rule: RuleId::PDown,
        premise,
        conclusion: conclusion.clone(),
        position,
        params: StepParams::Quotient { m_slots, n_slots },
    }
}

/// General identity step: conclusion contains `left | right` as a module
/// dual along `pairing`; the premise drops both halves.
pub fn step_id_down(
    conclusion: &LabeledGraph,
    left: VertexSet,
    right: VertexSet,
    pairing: Vec<(VertexId, VertexId)>,
) -> ProofStep {
    let module: VertexSet = left.union(&right).copied().collect();
    ProofStep {
        rule: RuleId::IdDown,
        premise: conclusion.without(&module),
        conclusion: conclusion.clone(),
        position: module,
        params: StepParams::Id { left, right, pairing },
    }
}
