//! Connectives as partition sets: orthogonality, duals by complement,
//! symmetry groups, and the comparison with the 4-vertex prime graph.

use gs::canon::automorphism_group;
use gs::connectives::{
    cycle_string, decomposable_sets, g4_set, orthogonal, orthogonal_complement, stabilizer_group,
    Partition,
};
use gs::io::parse_graph;

fn main() {
    let p = Partition::parse("{{1,3},{2}}").unwrap();
    for q in ["{{1},{2},{3}}", "{{1},{2,3}}", "{{1,2,3}}"] {
        let q = Partition::parse(q).unwrap();
        println!("{p} vs {q}: {}", if orthogonal(&p, &q).unwrap() { "orthogonal" } else { "not orthogonal" });
    }

    let g4 = g4_set();
    println!("\nconnective {g4}");
    let dual = orthogonal_complement(&g4).unwrap();
    println!("computed dual {dual}");

    let stab = stabilizer_group(&g4).unwrap();
    println!("stabilizer of order {}:", stab.len());
    for s in &stab {
        print!("  {}", cycle_string(s));
    }
    println!("\n24/{} = {} instances as a connective", stab.len(), 24 / stab.len());

    // the prime graph on 4 vertices has a smaller symmetry group
    let p4 = parse_graph(
        "vertex 0 x\nvertex 1 x\nvertex 2 x\nvertex 3 x\nedge 0 1\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    let auts = automorphism_group(&p4, 8).unwrap();
    println!("4-path symmetries: {}, so 24/{} = {} instances", auts.len(), auts.len(), 24 / auts.len());

    println!("decomposable 4-ary partition sets: {}", decomposable_sets(4).len());
    println!("G4 decomposable: {}", decomposable_sets(4).contains(&g4));
}
