//! Derivations are explicit objects: every step carries its graphs and
//! parameters, serializes to text, and re-checks in polynomial time.

use gs::formula::{parse_formula, to_graph};
use gs::prover::RuleSet;
use gs::rules::{check_derivation, derive_identity, parse_derivation, serialize_derivation};

fn main() {
    let g = to_graph(&parse_formula("(a*b)|c").unwrap());
    let d = derive_identity(&g);
    println!("identity proof with {} steps:", d.inference_len());
    let text = serialize_derivation(&d);
    print!("{text}");

    // round-trip through the text format, then check
    let back = parse_derivation(&text).unwrap();
    assert_eq!(back, d);
    check_derivation(&back, &RuleSet::gs()).unwrap();
    println!("round-tripped and checked under gs");

    // tamper with a step and watch the checker object
    let mut bad = d.clone();
    if let Some(step) = bad.steps.last_mut() {
        if let gs::rules::StepParams::Ss { s, .. } = &mut step.params {
            s.clear(); // violates S != empty
        }
    }
    match check_derivation(&bad, &RuleSet::gs()) {
        Err(e) => println!("tampered proof rejected: {e}"),
        Ok(()) => unreachable!("the checker must catch the empty S"),
    }
}
