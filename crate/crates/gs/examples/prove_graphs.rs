//! Prove and refute small graphs, inspect the found derivations, and
//! re-check them with the proof checker.

use gs::formula::{parse_formula, to_graph};
use gs::graph::LabeledGraph;
use gs::io::parse_graph;
use gs::prover::{Outcome, Prover, ProverConfig, RuleSet};
use gs::rules::check_derivation;

fn graph_of(src: &str) -> LabeledGraph {
    to_graph(&parse_formula(src).unwrap())
}

fn main() {
    let prover = Prover::new(ProverConfig::default());

    // cograph cases first: these mirror multiplicative provability
    for src in ["(~a|a)*(b|~b)", "(~a*b)|(a*~b)", "(a*b)|~a|~b"] {
        let g = graph_of(src);
        match prover.prove(&g) {
            Outcome::Proved(d) => {
                check_derivation(&d, &RuleSet::gs()).unwrap();
                println!("{src:>18}  provable in {} steps", d.inference_len());
            }
            Outcome::Refuted => println!("{src:>18}  unprovable"),
            Outcome::LimitExceeded(m) => println!("{src:>18}  limit: {m}"),
        }
    }

    // a goal beyond formulas: the path implies the path minus its first
    // edge, but not the one with the middle edge removed
    let chain = parse_graph(
        "vertex 0 a\nvertex 1 b\nvertex 2 c\nvertex 3 d\nedge 0 1\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    let weaker = parse_graph(
        "vertex 0 a\nvertex 1 b\nvertex 2 c\nvertex 3 d\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    let split = parse_graph(
        "vertex 0 a\nvertex 1 b\nvertex 2 c\nvertex 3 d\nedge 0 1\nedge 2 3\n",
    )
    .unwrap();
    println!(
        "chain -> chain minus first edge: {}",
        prover.prove_implication(&chain, &weaker).verdict()
    );
    println!(
        "chain -> two disjoint edges:     {}",
        prover.prove_implication(&chain, &split).verdict()
    );

    // every graph implies itself; the prover finds it, and the
    // constructive derivation does the same without search
    let d = gs::rules::derive_identity(&chain);
    check_derivation(&d, &RuleSet::gs()).unwrap();
    println!(
        "identity derivation for the 4-chain: {} steps, checker approved",
        d.inference_len()
    );
}
