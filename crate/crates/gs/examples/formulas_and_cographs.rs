//! Formulas denote exactly the P4-free graphs; equivalence of formulas
//! is isomorphism of their graphs.

use gs::formula::{from_cograph, parse_formula, struct_equiv, to_graph};
use gs::io::parse_graph;

fn main() {
    let phi = parse_formula("(a|c)*(b|d)").unwrap();
    let g = to_graph(&phi);
    println!("{phi} denotes {} vertices / {} edges", g.vertex_count(), g.edge_count());
    println!("unicode: {}", phi.unicode());

    // read a formula back from its graph
    let back = from_cograph(&g).unwrap();
    println!("back from the graph: {back}");
    assert!(struct_equiv(&phi, &back));

    // associativity, commutativity, units hold by construction
    for (a, b) in [("a|(b|c)", "(a|b)|c"), ("a*1", "a"), ("a|b", "b|a")] {
        let equal = struct_equiv(&parse_formula(a).unwrap(), &parse_formula(b).unwrap());
        println!("{a} == {b}: {equal}");
    }

    // the path has no formula
    let path = parse_graph(
        "vertex 0 a\nvertex 1 b\nvertex 2 c\nvertex 3 d\nedge 0 1\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    println!("4-path has a formula: {}", from_cograph(&path).is_some());
}
