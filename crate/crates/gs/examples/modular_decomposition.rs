//! Modular decomposition: union/join/prime tree, recomposition, and the
//! connector census behind the analyticity notion.

use gs::canon::isomorphic;
use gs::formula::{parse_formula, to_graph};
use gs::io::parse_graph;
use gs::mdtree::{connectors, decompose, is_p4_free, is_prime, recompose, subconnectors};

fn main() {
    // a cograph decomposes into unions and joins only
    let p = to_graph(&parse_formula("(a*b)|(c*d)").unwrap());
    println!("(a*b)|(c*d)  ->  {}", decompose(&p).unwrap().format());
    println!("cograph: {}", is_p4_free(&p));

    // the 4-path is prime: its tree is a single prime quotient
    let path = parse_graph(
        "vertex 0 a\nvertex 1 b\nvertex 2 c\nvertex 3 d\nedge 0 1\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    println!("4-path       ->  {}", decompose(&path).unwrap().format());
    println!("prime: {}", is_prime(&path));

    // nested quotients: the bundled 12-vertex example
    let big = parse_graph(&std::fs::read_to_string("crates/gs/corpus/eq3_3.graph").unwrap_or_else(
        |_| std::fs::read_to_string("corpus/eq3_3.graph").expect("run from the repo root"),
    ))
    .unwrap();
    let tree = decompose(&big).unwrap();
    println!("nested       ->  {}", tree.format());
    assert!(isomorphic(&recompose(&tree), &big));
    println!("recompose round-trips: true");

    let conns = connectors(&tree);
    println!("connector occurrences: {}", conns.len());
    for sub in subconnectors(&big) {
        println!(
            "subconnector on {} vertices with {} edges",
            sub.vertex_count(),
            sub.edge_count()
        );
    }
}
