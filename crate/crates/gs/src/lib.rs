//! A proof system that operates on labelled graphs instead of formulas.
//!
//! Vertices carry signed atoms, negation is the labelled edge-complement,
//! par is disjoint union and tensor is join. Inference happens deep inside
//! a graph by rewriting modules, with three down rules: atomic identity,
//! super switch, and a prime rule that decomposes prime quotients. The
//! crate bundles the graph algebra, modular decomposition, an exhaustive
//! bottom-up prover, a polynomial-time proof checker, bounded witness
//! searches for the splitting and context-reduction metatheorems, a small
//! sequent prover used for conservativity cross-checks, and the toolkit
//! for connectives described by partition sets.
//!
//! Start with the `examples/` directory; each file exercises one of those
//! capabilities end to end.

pub mod canon;
pub mod connectives;
pub mod formula;
pub mod gen;
pub mod graph;
pub mod io;
pub mod mdtree;
pub mod meta;
pub mod mll;
pub mod prover;
pub mod rules;
pub mod suite;

#[cfg(test)]
pub(crate) mod testutil;

pub use canon::{canonical_form, check_isomorphism, find_isomorphism, isomorphic};
pub use graph::{Atom, GraphContext, LabeledGraph, Polarity, SizeMeasure, VertexId, VertexSet};
pub use mdtree::{decompose, is_p4_free, is_prime, recompose, MDTree};
pub use prover::{prove_analytic, Outcome, Prover, ProverConfig, RuleSet};
pub use rules::{check_derivation, Derivation, ProofStep, RuleId};
