//! Bounded witness searches for the splitting and context-reduction
//! metatheorems. The statements promise, for every provable graph of the
//! right shape, a provable context and provable pieces tied together by a
//! derivation; here we find such witnesses by scanning the finite upward
//! closure of the rest graph, and re-verify every component with the
//! checker. Absence within bounds is reported as a distinct failure,
//! never as "no witness".

use crate::canon::canonical_form_with_order;
use crate::graph::{Atom, GraphContext, LabeledGraph, VertexId, VertexSet};
use crate::prover::{Outcome, Prover, RuleSet};
use crate::rules::{
    ai_down_premises, p_down_premises, ss_down_premises, step_ss_down, Derivation, ProofStep,
    RuleId, StepParams,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone)]
pub enum WitnessError {
    /// The caller's provability precondition does not hold.
    Precondition(String),
    /// Exhausted the closure without a witness: a bound is too tight or
    /// something is wrong, and the caller should treat it as a failure.
    NotFoundWithinLimits,
    Limit(String),
}

impl fmt::Display for WitnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessError::Precondition(m) => write!(f, "precondition failed: {m}"),
            WitnessError::NotFoundWithinLimits => write!(f, "no witness within the search bounds"),
            WitnessError::Limit(m) => write!(f, "limit exceeded: {m}"),
        }
    }
}

impl std::error::Error for WitnessError {}

#[derive(Debug, Clone)]
pub struct ClosureEntry {
    pub graph: LabeledGraph,
    /// Derivation from `graph` down to the closure's root.
    pub to_goal: Derivation,
}

/// Breadth-first stream over the graphs from which the root is
/// derivable, produced on demand so witness scans can stop at the first
/// hit. Entry 0 is the root itself.
pub struct ClosureStream {
    rules: RuleSet,
    vertex_limit: usize,
    max_entries: usize,
    seen: BTreeSet<Vec<u8>>,
    entries: Vec<ClosureEntry>,
    cursor: usize,
}

impl ClosureStream {
    pub fn new(
        root: &LabeledGraph,
        rules: &RuleSet,
        vertex_limit: usize,
        max_entries: usize,
    ) -> Result<ClosureStream, WitnessError> {
        if root.vertex_count() > vertex_limit {
            return Err(WitnessError::Limit(format!(
                "closure root has {} vertices, limit {vertex_limit}",
                root.vertex_count()
            )));
        }
        let mut seen = BTreeSet::new();
        seen.insert(closure_key(root)?);
        Ok(ClosureStream {
            rules: rules.clone(),
            vertex_limit,
            max_entries,
            seen,
            entries: vec![ClosureEntry {
                graph: root.clone(),
                to_goal: Derivation::identity(root.clone()),
            }],
            cursor: 0,
        })
    }

    /// Next unvisited entry in breadth-first order, expanding it into its
    /// premises as a side effect; `Ok(None)` once the closure is
    /// exhausted.
    pub fn advance(&mut self) -> Result<Option<ClosureEntry>, WitnessError> {
        if self.cursor >= self.entries.len() {
            return Ok(None);
        }
        let entry = self.entries[self.cursor].clone();
        self.cursor += 1;
        let mut steps: Vec<ProofStep> = Vec::new();
        if self.rules.contains(RuleId::AiDown) {
            steps.extend(ai_down_premises(&entry.graph));
        }
        if self.rules.contains(RuleId::SsDown) {
            steps.extend(
                ss_down_premises(&entry.graph, self.vertex_limit.max(16))
                    .map_err(|e| WitnessError::Limit(e.to_string()))?,
            );
        }
        if self.rules.contains(RuleId::PDown) {
            steps.extend(
                p_down_premises(&entry.graph, self.vertex_limit.max(16))
                    .map_err(|e| WitnessError::Limit(e.to_string()))?,
            );
        }
        let mut keyed: Vec<(Vec<u8>, ProofStep)> = Vec::new();
        for s in steps {
            keyed.push((closure_key(&s.premise)?, s));
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        for (k, step) in keyed {
            if !self.seen.insert(k) {
                continue;
            }
            if self.entries.len() >= self.max_entries {
                return Err(WitnessError::Limit(format!(
                    "upward closure exceeded {} entries",
                    self.max_entries
                )));
            }
            let to_goal = Derivation::single(step.clone()).compose(entry.to_goal.clone());
            self.entries.push(ClosureEntry { graph: step.premise, to_goal });
        }
        Ok(Some(entry))
    }
}

fn closure_key(g: &LabeledGraph) -> Result<Vec<u8>, WitnessError> {
    canonical_form_with_order(g, 64)
        .map(|(k, _)| k)
        .map_err(|e| WitnessError::Limit(e.to_string()))
}

/// The fully materialized closure; prefer `ClosureStream` for scans that
/// can stop early.
pub fn upward_closure(
    root: &LabeledGraph,
    rules: &RuleSet,
    vertex_limit: usize,
    max_entries: usize,
) -> Result<Vec<ClosureEntry>, WitnessError> {
    let mut stream = ClosureStream::new(root, rules, vertex_limit, max_entries)?;
    let mut out = Vec::new();
    while let Some(entry) = stream.advance()? {
        out.push(entry);
    }
    Ok(out)
}

/// Union keeping both id spaces; the caller guarantees disjointness.
pub fn disjoint_union(g: &LabeledGraph, h: &LabeledGraph) -> LabeledGraph {
    let mut out = g.clone();
    for v in h.vertices() {
        out.add_vertex(v, h.label(v).clone());
    }
    for (v, w) in h.edges() {
        out.add_edge(v, w);
    }
    out
}

pub fn shifted(g: &LabeledGraph, base: u32) -> LabeledGraph {
    g.renumbered_from(base).0
}

fn next_free(g: &LabeledGraph) -> u32 {
    g.vertices().next_back().map_or(0, |v| v.0 + 1)
}

fn require_proof(out: Outcome, what: &str) -> Result<Option<Derivation>, WitnessError> {
    match out {
        Outcome::Proved(d) => Ok(Some(*d)),
        Outcome::Refuted => Ok(None),
        Outcome::LimitExceeded(m) => Err(WitnessError::Limit(format!("{what}: {m}"))),
    }
}

#[derive(Debug, Clone)]
pub struct TensorSplit {
    /// The closure graph of shape `C<K_A | K_B>R`.
    pub shape: LabeledGraph,
    pub k_a: VertexSet,
    pub k_b: VertexSet,
    pub context: GraphContext,
    pub context_proof: Derivation,
    pub a_proof: Derivation,
    pub b_proof: Derivation,
    /// From the shape down to the rest graph G.
    pub rest_derivation: Derivation,
}

/// Witness for: if `G | (A * B)` is provable then some provable context
/// holds `K_A | K_B` with `K_A | A` and `K_B | B` provable and the plug
/// derives G.
pub fn splitting_tensor_witness(
    prover: &Prover,
    g: &LabeledGraph,
    a: &LabeledGraph,
    b: &LabeledGraph,
) -> Result<TensorSplit, WitnessError> {
    let goal = g.par(&a.tensor(b));
    match prover.prove(&goal) {
        Outcome::Proved(_) => {}
        Outcome::Refuted => {
            return Err(WitnessError::Precondition("G | (A*B) is not provable".to_string()))
        }
        Outcome::LimitExceeded(m) => return Err(WitnessError::Limit(m)),
    }
    let mut stream = ClosureStream::new(g, &RuleSet::gs(), 8.max(g.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let entry = &entry;
        let x = &entry.graph;
        let modules = x
            .enumerate_modules(16)
            .map_err(|e| WitnessError::Limit(e.to_string()))?;
        for module in &modules {
            let context = GraphContext::of_module(x, module);
            let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? else {
                continue;
            };
            let comps = x.induced(module).components();
            for mask in 0u64..(1 << comps.len()) {
                let mut ka = VertexSet::new();
                let mut kb = VertexSet::new();
                for (i, c) in comps.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        ka.extend(c.iter().copied());
                    } else {
                        kb.extend(c.iter().copied());
                    }
                }
                let base = next_free(x).max(next_free(g));
                let ka_probe = disjoint_union(&x.induced(&ka), &shifted(a, base));
                let Some(a_proof) = require_proof(prover.prove(&ka_probe), "K_A | A")? else {
                    continue;
                };
                let kb_probe = disjoint_union(&x.induced(&kb), &shifted(b, base));
                let Some(b_proof) = require_proof(prover.prove(&kb_probe), "K_B | B")? else {
                    continue;
                };
                return Ok(TensorSplit {
                    shape: x.clone(),
                    k_a: ka,
                    k_b: kb,
                    context,
                    context_proof,
                    a_proof,
                    b_proof,
                    rest_derivation: entry.to_goal.clone(),
                });
            }
        }
    }
    Err(WitnessError::NotFoundWithinLimits)
}

/// Rebuild a full proof of `G | (A * B)` from a tensor splitting witness.
/// The conclusion is the rest graph G (original ids) next to fresh copies
/// of A and B.
pub fn reassemble_tensor_split(w: &TensorSplit, a: &LabeledGraph, b: &LabeledGraph) -> Derivation {
    let g_ids = next_free(&w.rest_derivation.conclusion).max(next_free(&w.shape));
    let a_graph = shifted(a, g_ids);
    let b_graph = shifted(b, g_ids + a.vertex_count() as u32);
    let ka_graph = w.shape.induced(&w.k_a);
    let kb_graph = w.shape.induced(&w.k_b);

    // align the stored piece proofs onto our concrete graphs
    let pa = align_proof(&w.a_proof, &disjoint_union(&ka_graph, &a_graph));
    let pb = align_proof(&w.b_proof, &disjoint_union(&kb_graph, &b_graph));

    // (K_A | A), then tensor with (K_B | B)
    let mut d = pa;
    let host = d.conclusion.clone();
    let r: VertexSet = host.vertices().collect();
    d = d.compose(pb.embed_preserving(&host, &r));

    // extract K_A, then K_B, leaving K_A | K_B | (A*B)
    let a_set: VertexSet = a_graph.vertices().collect();
    let b_set: VertexSet = b_graph.vertices().collect();
    if !w.k_a.is_empty() {
        let mut mid = d.conclusion.clone();
        for &x in &w.k_a {
            for y in kb_graph.vertices().chain(b_graph.vertices()) {
                mid.remove_edge(x, y);
            }
        }
        let bb: VertexSet = d
            .conclusion
            .vertices()
            .filter(|v| !w.k_a.contains(v))
            .collect();
        let s: VertexSet = kb_graph.vertices().chain(b_graph.vertices()).collect();
        let step = step_ss_down(&mid, &w.k_a, &bb, &s);
        debug_assert_eq!(step.premise, d.conclusion);
        d = d.then(step);
    }
    if !w.k_b.is_empty() {
        let mut mid = d.conclusion.clone();
        for &x in &w.k_b {
            for &y in &a_set {
                mid.remove_edge(x, y);
            }
        }
        let bb: VertexSet = a_set.union(&b_set).copied().collect();
        let step = step_ss_down(&mid, &w.k_b, &bb, &a_set);
        debug_assert_eq!(step.premise, d.conclusion);
        let _ = mid;
        d = d.then(step);
    }

    // wrap in the provable context
    let ctx = &w.context;
    let mut full = w.context_proof.clone();
    full = full.compose(d.embed_preserving(&ctx.host, &ctx.hole_neighbors));

    // detach A*B from the hole neighborhood
    if !ctx.hole_neighbors.is_empty() {
        let ab: VertexSet = a_set.union(&b_set).copied().collect();
        let mut mid = full.conclusion.clone();
        for &x in &ab {
            for &y in &ctx.hole_neighbors {
                mid.remove_edge(x, y);
            }
        }
        let bb: VertexSet = full.conclusion.vertices().filter(|v| !ab.contains(v)).collect();
        let step = step_ss_down(&mid, &ab, &bb, &ctx.hole_neighbors);
        debug_assert_eq!(step.premise, full.conclusion);
        full = full.then(step);
    }

    // now the A*B part sits beside the shape; run the recorded derivation
    let ab_part = full
        .conclusion
        .induced(&a_set.union(&b_set).copied().collect());
    debug_assert_eq!(
        full.conclusion,
        disjoint_union(&w.shape, &ab_part),
        "context plug should reproduce the closure shape"
    );
    full.compose(w.rest_derivation.embed_preserving(&ab_part, &VertexSet::new()))
}

/// Relabel a proof so its conclusion becomes exactly `target`; panics if
/// the stored conclusion is not identical up to vertex ids in the same
/// sorted order (which is how the witnesses build their goals).
fn align_proof(proof: &Derivation, target: &LabeledGraph) -> Derivation {
    let from: Vec<VertexId> = proof.conclusion.vertices().collect();
    let to: Vec<VertexId> = target.vertices().collect();
    assert_eq!(from.len(), to.len());
    let map: BTreeMap<VertexId, VertexId> = from.into_iter().zip(to).collect();
    let out = proof.relabel(&map);
    assert_eq!(&out.conclusion, target, "proof does not align with target");
    out
}

#[derive(Debug, Clone)]
pub enum PrimeSplitCase {
    /// Case A: the module reads as `not-P<K_1..K_n>` and every
    /// `K_i | M_i` is provable.
    SlotPieces {
        slots: Vec<VertexSet>,
        piece_proofs: Vec<Derivation>,
    },
    /// Case B: the module splits as `K_X | K_Y` with `K_X | M_i` and
    /// `K_Y | P<..empty at i..>` provable for some slot i.
    TwoPieces {
        slot: usize,
        k_x: VertexSet,
        k_y: VertexSet,
        x_proof: Derivation,
        y_proof: Derivation,
    },
}

#[derive(Debug, Clone)]
pub struct PrimeSplit {
    pub shape: LabeledGraph,
    pub context: GraphContext,
    pub context_proof: Derivation,
    pub rest_derivation: Derivation,
    pub case: PrimeSplitCase,
}

/// Witness for splitting against a prime principal graph `P<M_1..M_n>`
/// (P not the 2-vertex union). `p` must be prime; `ms` are the non-empty
/// slot contents in the order of p's vertices.
pub fn splitting_prime_witness(
    prover: &Prover,
    g: &LabeledGraph,
    p: &LabeledGraph,
    ms: &[LabeledGraph],
) -> Result<PrimeSplit, WitnessError> {
    if !crate::mdtree::is_prime(p) {
        return Err(WitnessError::Precondition("quotient is not prime".to_string()));
    }
    if p.vertex_count() == 2 && p.edge_count() == 0 {
        return Err(WitnessError::Precondition("the 2-vertex union is excluded".to_string()));
    }
    if ms.iter().any(|m| m.is_empty()) {
        return Err(WitnessError::Precondition("slot contents must be non-empty".to_string()));
    }
    let principal = p
        .compose_via(ms)
        .map_err(|e| WitnessError::Precondition(e.to_string()))?;
    let goal = g.par(&principal);
    match prover.prove(&goal) {
        Outcome::Proved(_) => {}
        Outcome::Refuted => {
            return Err(WitnessError::Precondition("G | P<Ms> is not provable".to_string()))
        }
        Outcome::LimitExceeded(m) => return Err(WitnessError::Limit(m)),
    }
    let n = p.vertex_count();
    let p_ids: Vec<VertexId> = p.vertices().collect();
    // scan for the slot-pieces case across the whole closure first, so
    // the stronger decomposition wins when both cases apply
    let mut stream = ClosureStream::new(g, &RuleSet::gs(), 8.max(g.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let x = &entry.graph;
        let modules = x
            .enumerate_modules(16)
            .map_err(|e| WitnessError::Limit(e.to_string()))?;
        for module in &modules {
            if module.len() < n {
                continue;
            }
            let assignments = module_as_complement_composition(x, module, p, &p_ids);
            if assignments.is_empty() {
                continue;
            }
            let context = GraphContext::of_module(x, module);
            let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? else {
                continue;
            };
            for slots in assignments {
                let mut proofs = Vec::new();
                let mut ok = true;
                for (i, slot) in slots.iter().enumerate() {
                    let base = next_free(x).max(next_free(g));
                    let probe = disjoint_union(&x.induced(slot), &shifted(&ms[i], base));
                    match require_proof(prover.prove(&probe), "K_i | M_i")? {
                        Some(d) => proofs.push(d),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Ok(PrimeSplit {
                        shape: x.clone(),
                        context,
                        context_proof,
                        rest_derivation: entry.to_goal.clone(),
                        case: PrimeSplitCase::SlotPieces { slots, piece_proofs: proofs },
                    });
                }
            }
        }
    }
    // fall back to the two-pieces case
    let mut stream = ClosureStream::new(g, &RuleSet::gs(), 8.max(g.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let x = &entry.graph;
        let modules = x
            .enumerate_modules(16)
            .map_err(|e| WitnessError::Limit(e.to_string()))?;
        for module in &modules {
            let context = GraphContext::of_module(x, module);
            let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? else {
                continue;
            };
            let comps = x.induced(module).components();
            for mask in 0u64..(1 << comps.len()) {
                let mut kx = VertexSet::new();
                let mut ky = VertexSet::new();
                for (i, c) in comps.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        kx.extend(c.iter().copied());
                    } else {
                        ky.extend(c.iter().copied());
                    }
                }
                for i in 0..n {
                    let base = next_free(x).max(next_free(g));
                    let x_probe = disjoint_union(&x.induced(&kx), &shifted(&ms[i], base));
                    let Some(x_proof) = require_proof(prover.prove(&x_probe), "K_X | M_i")? else {
                        continue;
                    };
                    let mut reduced = ms.to_vec();
                    reduced[i] = LabeledGraph::empty();
                    let rest_principal = p.compose_via(&reduced).expect("arity unchanged");
                    let y_probe =
                        disjoint_union(&x.induced(&ky), &shifted(&rest_principal, base));
                    let Some(y_proof) = require_proof(prover.prove(&y_probe), "K_Y | P<..>")?
                    else {
                        continue;
                    };
                    return Ok(PrimeSplit {
                        shape: x.clone(),
                        context,
                        context_proof,
                        rest_derivation: entry.to_goal.clone(),
                        case: PrimeSplitCase::TwoPieces {
                            slot: i,
                            k_x: kx.clone(),
                            k_y: ky.clone(),
                            x_proof,
                            y_proof,
                        },
                    });
                }
            }
        }
    }
    Err(WitnessError::NotFoundWithinLimits)
}

/// Ways to read the module as a composition via the complement of `p`,
/// slot-paired with p's vertices: returns the slot contents (all
/// non-empty, covering the module) in p-vertex order.
fn module_as_complement_composition(
    x: &LabeledGraph,
    module: &VertexSet,
    p: &LabeledGraph,
    p_ids: &[VertexId],
) -> Vec<Vec<VertexSet>> {
    let n = p_ids.len();
    if module.len() < n {
        return Vec::new();
    }
    let elems: Vec<VertexId> = module.iter().copied().collect();
    let mut out = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(elems.len());
    fn rec(
        x: &LabeledGraph,
        p: &LabeledGraph,
        p_ids: &[VertexId],
        elems: &[VertexId],
        assign: &mut Vec<usize>,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        let k = assign.len();
        if k == elems.len() {
            let n = p_ids.len();
            let mut slots = vec![VertexSet::new(); n];
            for (i, &s) in assign.iter().enumerate() {
                slots[s].insert(elems[i]);
            }
            if slots.iter().all(|s| !s.is_empty()) {
                out.push(slots);
            }
            return;
        }
        for cand in 0..p_ids.len() {
            let ok = (0..k).all(|j| {
                if assign[j] == cand {
                    true
                } else {
                    // complement composition: adjacency iff p has no edge
                    x.has_edge(elems[j], elems[k]) != p.has_edge(p_ids[assign[j]], p_ids[cand])
                }
            });
            if ok {
                assign.push(cand);
                rec(x, p, p_ids, elems, assign, out);
                assign.pop();
            }
        }
    }
    rec(x, p, p_ids, &elems, &mut assign, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct AtomicSplit {
    pub shape: LabeledGraph,
    /// The vertex carrying the dual atom.
    pub partner: VertexId,
    pub context: GraphContext,
    pub context_proof: Derivation,
    pub rest_derivation: Derivation,
}

/// Witness for: if `G | a` is provable, some provable context holds the
/// dual atom and derives G.
pub fn atomic_splitting_witness(
    prover: &Prover,
    g: &LabeledGraph,
    atom: &Atom,
) -> Result<AtomicSplit, WitnessError> {
    let goal = g.par(&LabeledGraph::single(atom.clone()));
    match prover.prove(&goal) {
        Outcome::Proved(_) => {}
        Outcome::Refuted => {
            return Err(WitnessError::Precondition("G | a is not provable".to_string()))
        }
        Outcome::LimitExceeded(m) => return Err(WitnessError::Limit(m)),
    }
    let dual = atom.dual();
    let mut stream = ClosureStream::new(g, &RuleSet::gs(), 8.max(g.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let entry = &entry;
        let x = &entry.graph;
        for v in x.vertices() {
            if x.label(v) != &dual {
                continue;
            }
            let module: VertexSet = [v].into_iter().collect();
            let context = GraphContext::of_module(x, &module);
            if let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? {
                return Ok(AtomicSplit {
                    shape: x.clone(),
                    partner: v,
                    context,
                    context_proof,
                    rest_derivation: entry.to_goal.clone(),
                });
            }
        }
    }
    Err(WitnessError::NotFoundWithinLimits)
}

#[derive(Debug, Clone)]
pub struct MultiTensorSplit {
    pub shape: LabeledGraph,
    pub pieces: Vec<VertexSet>,
    pub piece_proofs: Vec<Derivation>,
    pub context: GraphContext,
    pub context_proof: Derivation,
    pub rest_derivation: Derivation,
}

/// Iterated tensor splitting: one piece per factor.
pub fn multi_tensor_splitting_witness(
    prover: &Prover,
    g: &LabeledGraph,
    factors: &[LabeledGraph],
) -> Result<MultiTensorSplit, WitnessError> {
    if factors.is_empty() || factors.iter().any(|f| f.is_empty()) {
        return Err(WitnessError::Precondition("factors must be non-empty".to_string()));
    }
    let principal = factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.tensor(f));
    let goal = g.par(&principal);
    match prover.prove(&goal) {
        Outcome::Proved(_) => {}
        Outcome::Refuted => {
            return Err(WitnessError::Precondition(
                "G | (A_1 * ... * A_n) is not provable".to_string(),
            ))
        }
        Outcome::LimitExceeded(m) => return Err(WitnessError::Limit(m)),
    }
    let n = factors.len();
    let mut stream = ClosureStream::new(g, &RuleSet::gs(), 8.max(g.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let entry = &entry;
        let x = &entry.graph;
        let modules = x
            .enumerate_modules(16)
            .map_err(|e| WitnessError::Limit(e.to_string()))?;
        for module in &modules {
            let context = GraphContext::of_module(x, module);
            let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? else {
                continue;
            };
            let comps = x.induced(module).components();
            let mut assign = vec![0usize; comps.len()];
            'outer: loop {
                let mut groups = vec![VertexSet::new(); n];
                for (ci, &fi) in assign.iter().enumerate() {
                    groups[fi].extend(comps[ci].iter().copied());
                }
                let mut proofs = Vec::new();
                let mut ok = true;
                for (i, group) in groups.iter().enumerate() {
                    let base = next_free(x).max(next_free(g));
                    let probe = disjoint_union(&x.induced(group), &shifted(&factors[i], base));
                    match require_proof(prover.prove(&probe), "K_i | A_i")? {
                        Some(d) => proofs.push(d),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Ok(MultiTensorSplit {
                        shape: x.clone(),
                        pieces: groups,
                        piece_proofs: proofs,
                        context,
                        context_proof,
                        rest_derivation: entry.to_goal.clone(),
                    });
                }
                let mut k = 0;
                loop {
                    if k == assign.len() {
                        break 'outer;
                    }
                    assign[k] += 1;
                    if assign[k] < n {
                        break;
                    }
                    assign[k] = 0;
                    k += 1;
                }
                if assign.is_empty() {
                    break;
                }
            }
        }
    }
    Err(WitnessError::NotFoundWithinLimits)
}

#[derive(Debug, Clone)]
pub struct ContextReduction {
    /// Closure graph over the marker vertex: `C<K | hole>R`.
    pub shape: LabeledGraph,
    pub hole: VertexId,
    pub k_piece: VertexSet,
    pub k_proof: Derivation,
    pub context: GraphContext,
    pub context_proof: Derivation,
    /// Derivation (over the marker) from `C<K | hole>R` to `G<hole>S`.
    pub hole_derivation: Derivation,
    /// Probe graphs with their validated instantiations.
    pub probes: Vec<(LabeledGraph, Derivation)>,
}

pub(crate) fn hole_atom() -> Atom {
    Atom::pos("_hole_")
}

/// Witness for context reduction: plugging any graph into the hole of
/// `gctx` can be rewritten to a shallow context `K | <.>` inside a
/// provable context, uniformly in the plugged graph. Uniformity is
/// checked on the probe set: the empty graph, a fresh atom, and `a`.
pub fn context_reduction_witness(
    prover: &Prover,
    gctx: &GraphContext,
    a: &LabeledGraph,
) -> Result<ContextReduction, WitnessError> {
    match prover.prove(&gctx.plug(a)) {
        Outcome::Proved(_) => {}
        Outcome::Refuted => {
            return Err(WitnessError::Precondition("G<a>S is not provable".to_string()))
        }
        Outcome::LimitExceeded(m) => return Err(WitnessError::Limit(m)),
    }
    let marker = LabeledGraph::single(hole_atom());
    let rooted = gctx.plug(&marker);
    let hole_root = rooted
        .vertices()
        .find(|v| rooted.label(*v) == &hole_atom())
        .expect("marker present");
    let probes: Vec<LabeledGraph> = vec![
        LabeledGraph::empty(),
        LabeledGraph::single(Atom::pos("_probe_")),
        a.clone(),
    ];
    let mut stream =
        ClosureStream::new(&rooted, &RuleSet::gs(), 9.max(rooted.vertex_count()), 200_000)?;
    while let Some(entry) = stream.advance()? {
        let entry = &entry;
        let x = &entry.graph;
        let hole = match x.vertices().find(|v| x.label(*v) == &hole_atom()) {
            Some(h) => h,
            None => continue,
        };
        let modules = x
            .enumerate_modules(16)
            .map_err(|e| WitnessError::Limit(e.to_string()))?;
        for module in &modules {
            if !module.contains(&hole) {
                continue;
            }
            // the hole must be disconnected inside the module: K | <.>
            if module.iter().any(|&v| v != hole && x.has_edge(v, hole)) {
                continue;
            }
            let k_piece: VertexSet = module.iter().copied().filter(|&v| v != hole).collect();
            let context = GraphContext::of_module(x, module);
            let Some(context_proof) = require_proof(prover.prove(&context.host), "context")? else {
                continue;
            };
            let base = next_free(x).max(next_free(&rooted));
            let k_probe = disjoint_union(&x.induced(&k_piece), &shifted(a, base));
            let Some(k_proof) = require_proof(prover.prove(&k_probe), "K | a")? else {
                continue;
            };
            // uniformity: the same step list must validate for each probe
            let mut validated = Vec::new();
            let mut all_ok = true;
            for probe in &probes {
                match substitute_hole(&entry.to_goal, hole_root, probe) {
                    Some(inst)
                        if crate::rules::check_derivation(&inst, &RuleSet::gs()).is_ok() =>
                    {
                        validated.push((probe.clone(), inst));
                    }
                    _ => {
                        all_ok = false;
                        break;
                    }
                }
            }
            if !all_ok {
                continue;
            }
            return Ok(ContextReduction {
                shape: x.clone(),
                hole,
                k_piece,
                k_proof,
                context,
                context_proof,
                hole_derivation: entry.to_goal.clone(),
                probes: validated,
            });
        }
    }
    Err(WitnessError::NotFoundWithinLimits)
}

/// Replace the marker vertex by a probe graph throughout a derivation.
/// Fails if the marker is consumed by a rule that names it atomically.
fn substitute_hole(d: &Derivation, hole: VertexId, probe: &LabeledGraph) -> Option<Derivation> {
    let base = all_ids(d).into_iter().next_back().map_or(0, |v| v.0 + 1);
    let probe_shifted = shifted(probe, base);
    let probe_set: VertexSet = probe_shifted.vertices().collect();
    let subst_graph = |g: &LabeledGraph| -> LabeledGraph {
        if !g.contains_vertex(hole) {
            return g.clone();
        }
        let nbrs = g.neighbors(hole);
        let mut out = g.without(&[hole].into_iter().collect());
        for v in probe_shifted.vertices() {
            out.add_vertex(v, probe_shifted.label(v).clone());
        }
        for (v, w) in probe_shifted.edges() {
            out.add_edge(v, w);
        }
        for v in probe_shifted.vertices() {
            for &r in &nbrs {
                out.add_edge(v, r);
            }
        }
        out
    };
    let subst_set = |s: &VertexSet| -> VertexSet {
        let mut out: VertexSet = s.iter().copied().filter(|&v| v != hole).collect();
        if s.contains(&hole) {
            out.extend(probe_set.iter().copied());
        }
        out
    };
    let mut steps = Vec::new();
    for s in &d.steps {
        let params = match &s.params {
            StepParams::Ai { v, w } => {
                if *v == hole || *w == hole {
                    return None;
                }
                StepParams::Ai { v: *v, w: *w }
            }
            StepParams::Ss { a, b, s: ss } => StepParams::Ss {
                a: subst_set(a),
                b: subst_set(b),
                s: subst_set(ss),
            },
            StepParams::Sw { a, b, c } => StepParams::Sw {
                a: subst_set(a),
                b: subst_set(b),
                c: subst_set(c),
            },
            StepParams::Quotient { m_slots, n_slots } => StepParams::Quotient {
                m_slots: m_slots.iter().map(&subst_set).collect(),
                n_slots: n_slots.iter().map(&subst_set).collect(),
            },
            StepParams::Id { left, right, pairing } => {
                if pairing.iter().any(|(x, y)| *x == hole || *y == hole) {
                    return None;
                }
                StepParams::Id {
                    left: left.clone(),
                    right: right.clone(),
                    pairing: pairing.clone(),
                }
            }
            StepParams::Iso { .. } => return None,
        };
        steps.push(ProofStep {
            rule: s.rule,
            premise: subst_graph(&s.premise),
            conclusion: subst_graph(&s.conclusion),
            position: subst_set(&s.position),
            params,
        });
    }
    Some(Derivation {
        premise: subst_graph(&d.premise),
        conclusion: subst_graph(&d.conclusion),
        steps,
    })
}

fn all_ids(d: &Derivation) -> VertexSet {
    let mut ids: VertexSet = d.premise.vertices().collect();
    ids.extend(d.conclusion.vertices());
    for s in &d.steps {
        ids.extend(s.premise.vertices());
        ids.extend(s.conclusion.vertices());
    }
    ids
}


impl TensorSplit {
    /// Structured text report: the context, its attachment set, each
    /// piece, and the serialized component derivations.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "context C: {} vertices, R = {:?}\n",
            self.context.host.vertex_count(),
            self.context.hole_neighbors
        ));
        out.push_str(&crate::io::print_graph(&self.context.host));
        out.push_str(&format!("piece K_A = {:?}\n", self.k_a));
        out.push_str(&format!("piece K_B = {:?}\n", self.k_b));
        out.push_str("derivation C<K_A|K_B>R -> G:\n");
        out.push_str(&crate::rules::serialize_derivation(&self.rest_derivation));
        out.push_str("proof of C:\n");
        out.push_str(&crate::rules::serialize_derivation(&self.context_proof));
        out.push_str("proof of K_A | A:\n");
        out.push_str(&crate::rules::serialize_derivation(&self.a_proof));
        out.push_str("proof of K_B | B:\n");
        out.push_str(&crate::rules::serialize_derivation(&self.b_proof));
        out
    }
}

impl ContextReduction {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "context C: {} vertices, R = {:?}\n",
            self.context.host.vertex_count(),
            self.context.hole_neighbors
        ));
        out.push_str(&crate::io::print_graph(&self.context.host));
        out.push_str(&format!("piece K = {:?}\n", self.k_piece));
        out.push_str("proof of K | a:\n");
        out.push_str(&crate::rules::serialize_derivation(&self.k_proof));
        out.push_str(&format!("hole-uniform derivation ({} probes validated):\n", self.probes.len()));
        out.push_str(&crate::rules::serialize_derivation(&self.hole_derivation));
        out
    }
}


#[cfg(test)]
mod prime_split_tests {
    use super::*;
    use crate::prover::ProverConfig;
    use crate::rules::check_derivation;
    use crate::testutil::*;

    fn gs_prover() -> Prover {
        Prover::new(ProverConfig::default())
    }

    #[test]
    fn prime_witness_case_a_on_the_diamond_conclusion() {
        // rest = the dual path-with-isolated-vertex; principal = the
        // 4-slot prime over c,a,d,b; the witness pairs each slot with
        // its dual atom after one attachment step
        let p = gs_prover();
        let rest = parse_graph_str(
            "vertex 0 ~a\nvertex 1 ~b\nvertex 2 ~c\nvertex 3 ~d\nedge 0 1\nedge 1 2\n",
        );
        let quotient = p4_pattern();
        let ms: Vec<LabeledGraph> = ["c", "a", "d", "b"]
            .iter()
            .map(|n| LabeledGraph::single(Atom::pos(n)))
            .collect();
        let w = splitting_prime_witness(&p, &rest, &quotient, &ms).unwrap();
        assert!(w.context.host.is_empty());
        match &w.case {
            PrimeSplitCase::SlotPieces { slots, piece_proofs } => {
                assert_eq!(slots.len(), 4);
                for (i, slot) in slots.iter().enumerate() {
                    assert_eq!(slot.len(), 1);
                    let v = *slot.iter().next().unwrap();
                    let shape = &w.shape;
                    assert!(shape.label(v).is_dual_of(ms[i].label(ms[i].vertices().next().unwrap())));
                }
                for d in piece_proofs {
                    assert!(check_derivation(d, &crate::prover::RuleSet::gs()).is_ok());
                }
            }
            other => panic!("expected the slot-pieces case, got {other:?}"),
        }
        assert!(check_derivation(&w.rest_derivation, &crate::prover::RuleSet::gs()).is_ok());
    }

    #[test]
    fn prime_witness_case_b_needs_an_atom_first() {
        // rest = a | b; principal = the prime over c, ~a, ~b, ~c: no slot
        // pairing exists, so one module must be consumed first
        let p = gs_prover();
        let rest = graph_of("a|b");
        let quotient = p4_pattern();
        let ms: Vec<LabeledGraph> = vec![
            LabeledGraph::single(Atom::pos("c")),
            LabeledGraph::single(Atom::neg("a")),
            LabeledGraph::single(Atom::neg("b")),
            LabeledGraph::single(Atom::neg("c")),
        ];
        let w = splitting_prime_witness(&p, &rest, &quotient, &ms).unwrap();
        match &w.case {
            PrimeSplitCase::TwoPieces { slot, k_x, k_y, x_proof, y_proof } => {
                assert_eq!(*slot, 1, "the dual of a sits in the second slot");
                let kx_label = w.shape.label(*k_x.iter().next().unwrap()).clone();
                let ky_label = w.shape.label(*k_y.iter().next().unwrap()).clone();
                assert_eq!(kx_label, Atom::pos("a"));
                assert_eq!(ky_label, Atom::pos("b"));
                assert!(check_derivation(x_proof, &crate::prover::RuleSet::gs()).is_ok());
                assert!(check_derivation(y_proof, &crate::prover::RuleSet::gs()).is_ok());
            }
            other => panic!("expected the two-pieces case, got {other:?}"),
        }
    }

    #[test]
    fn multi_tensor_trivial_pieces() {
        // empty rest against the four dual-pair factors: every piece is
        // empty and the context is empty
        let p = gs_prover();
        let factors: Vec<LabeledGraph> = ["a", "b", "c", "d"]
            .iter()
            .map(|n| graph_of(&format!("{n}|~{n}")))
            .collect();
        let w =
            multi_tensor_splitting_witness(&p, &LabeledGraph::empty(), &factors).unwrap();
        assert!(w.context.host.is_empty());
        assert!(w.pieces.iter().all(|k| k.is_empty()));
        assert_eq!(w.piece_proofs.len(), 4);
    }
}
