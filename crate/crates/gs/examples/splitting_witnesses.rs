//! The splitting and context-reduction metatheorems, instantiated on
//! concrete provable graphs by bounded witness search.

use gs::graph::{Atom, GraphContext, LabeledGraph, VertexSet};
use gs::io::parse_graph;
use gs::meta::{
    atomic_splitting_witness, context_reduction_witness, reassemble_tensor_split,
    splitting_tensor_witness,
};
use gs::prover::{Prover, ProverConfig, RuleSet};
use gs::rules::check_derivation;

fn main() {
    let prover = Prover::new(ProverConfig::default());

    // deep splitting: the tensor a*b can only be split after carving a
    // provable context out of the way
    let g = parse_graph(
        "vertex 0 ~g\nvertex 1 ~f\nvertex 2 ~a\nvertex 3 ~b\nvertex 4 f\nvertex 5 g\n\
         edge 4 5\nedge 1 2\nedge 1 3\nedge 2 4\nedge 3 4\nedge 2 5\nedge 3 5\n",
    )
    .unwrap();
    let a = LabeledGraph::single(Atom::pos("a"));
    let b = LabeledGraph::single(Atom::pos("b"));
    let w = splitting_tensor_witness(&prover, &g, &a, &b).unwrap();
    println!(
        "tensor split: context has {} vertices, K_A = {:?}, K_B = {:?}",
        w.context.host.vertex_count(),
        w.k_a,
        w.k_b
    );
    let full = reassemble_tensor_split(&w, &a, &b);
    check_derivation(&full, &RuleSet::gs()).unwrap();
    println!("reassembled proof: {} steps, checker approved", full.inference_len());

    // atomic splitting picks the dual occurrence that actually interacts
    let g2 = parse_graph(
        "vertex 0 ~b\nvertex 1 b\nvertex 2 ~a\nedge 1 2\n",
    )
    .unwrap();
    let w2 = atomic_splitting_witness(&prover, &g2, &Atom::pos("a")).unwrap();
    println!(
        "atomic split: partner {}, context on {:?}",
        w2.partner, w2.context.hole_neighbors
    );

    // context reduction: rewrite a deep context to a shallow K | <.>
    let host = parse_graph(
        "vertex 0 a\nvertex 1 ~b\nvertex 2 ~c\nvertex 3 c\nvertex 4 b\nedge 3 4\n",
    )
    .unwrap();
    let hole_neighbors: VertexSet =
        [1u32, 2, 3].into_iter().map(gs::graph::VertexId).collect();
    let ctx = GraphContext::new(host, hole_neighbors);
    let plug = LabeledGraph::single(Atom::neg("a"));
    let w3 = context_reduction_witness(&prover, &ctx, &plug).unwrap();
    println!(
        "context reduction: K = {:?}, provable context on {} vertices, {} probes validated",
        w3.k_piece,
        w3.context.host.vertex_count(),
        w3.probes.len()
    );
}
