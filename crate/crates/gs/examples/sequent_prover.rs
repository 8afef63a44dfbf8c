//! The sequent prover for the multiplicative fragment with mix, its
//! generalised 4-ary connective, and the conservativity cross-check
//! against the graph prover.

use gs::formula::parse_formula;
use gs::mll::{conservativity_check, parse_sequent, SequentProver};
use gs::prover::{Prover, ProverConfig};

fn main() {
    let sequents = SequentProver::new();
    for s in ["a, ~a", "(~a|a)*(b|~b)", "(~a*b)|(a*~b)", "G4(a,b,c,d), (~a*~b)|(~c*~d)"] {
        let seq = parse_sequent(s).unwrap();
        match sequents.prove(&seq) {
            Some(tree) => {
                println!("|- {s}\n{}", tree.render());
            }
            None => println!("|- {s}\n  unprovable\n"),
        }
    }

    // the packaging problem: the dual pair has no sequent proof
    let packaged = parse_sequent("G4(a,b,c,d), ~G4(~a,~b,~c,~d)").unwrap();
    println!("dual pair packaged: {}", sequents.prove(&packaged).is_some());

    // conservativity: graph provability and sequent provability agree on
    // unit-free formulas
    let prover = Prover::new(ProverConfig::default());
    for s in ["(~a|a)*(b|~b)", "~a|a|(b*~b)", "((a|b)*~b)|~a"] {
        let phi = parse_formula(s).unwrap();
        let report = conservativity_check(&prover, &phi).unwrap();
        println!(
            "{s:>18}  sequents: {:<10} graphs: {:<10} agree: {}",
            report.sequent_provable, report.graph_provable, report.agree()
        );
    }
}
