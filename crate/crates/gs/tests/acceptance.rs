//! End-to-end acceptance suite: one test per criterion, each printing a
//! single pass/fail line. Run with `cargo test --test acceptance -- --nocapture`.

use gs::canon::{canonical_form, isomorphic};
use gs::connectives::{g4_set, orthogonal_complement, stabilizer_group, PartitionSet};
use gs::formula::{parse_formula, to_graph};
use gs::gen::{enumerate_formulas, random_graph, Rng};
use gs::graph::{Atom, GraphContext, LabeledGraph, VertexId, VertexSet};
use gs::io::parse_graph;
use gs::mdtree::is_p4_free;
use gs::meta::{
    atomic_splitting_witness, context_reduction_witness, reassemble_tensor_split,
    splitting_tensor_witness,
};
use gs::mll::conservativity_check;
use gs::prover::{
    all_labelled_graphs, atoms_matched, enumerate_provable, Outcome, Prover, ProverConfig,
    RuleSet,
};
use gs::rules::{
    ai_up_instances, check_derivation, derive_identity, p_up_instances, ss_up_instances,
};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

fn gs_prover() -> Prover {
    Prover::new(ProverConfig { vertex_limit: 16, ..ProverConfig::default() })
}

fn verdict(out: &Outcome) -> &'static str {
    out.verdict()
}

fn report(n: u32, name: &str, started: Instant) {
    println!(
        "acceptance {n} ({name}): PASS in {:.1}s",
        started.elapsed().as_secs_f64()
    );
}

/// One representative per isomorphism class.
fn classes(graphs: impl IntoIterator<Item = LabeledGraph>) -> Vec<LabeledGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in graphs {
        if seen.insert(canonical_form(&g, 64).unwrap()) {
            out.push(g);
        }
    }
    out
}

#[test]
fn acceptance_1_verdict_corpus() {
    let started = Instant::now();
    let report1 = gs::suite::run_embedded(None).expect("suite runs");
    for case in &report1.cases {
        assert!(
            case.pass(),
            "case {} [{}]: expected {}, got {}",
            case.id,
            case.kind,
            case.expected,
            case.actual
        );
    }
    assert!(
        started.elapsed().as_secs() < 120,
        "verdict corpus exceeded the 120 s budget"
    );
    report(1, "worked example corpus", started);
}

#[test]
fn acceptance_2_conservativity() {
    let started = Instant::now();
    let prover = gs_prover();
    // every unit-free formula with at most 3 binary connectives over the
    // atoms a, b and their duals
    let formulas = enumerate_formulas(4, &["a", "b"]);
    assert!(formulas.len() > 10_000, "expected the full formula census");
    let mut disagreements = 0;
    for phi in &formulas {
        let rep = conservativity_check(&prover, phi).expect("within limits");
        if !rep.agree() {
            disagreements += 1;
            eprintln!("disagreement on {phi}");
        }
    }
    assert_eq!(disagreements, 0);
    assert!(started.elapsed().as_secs() < 300, "conservativity exceeded 5 min");
    report(2, "sequent/graph agreement", started);
}

#[test]
fn acceptance_3_generalised_connectives() {
    let started = Instant::now();
    let section8 = gs::suite::run_embedded(Some(8)).expect("suite runs");
    for case in &section8.cases {
        assert!(case.pass(), "case {}: expected {}, got {}", case.id, case.expected, case.actual);
    }
    // exact numbers, re-checked against the library directly
    let stab = stabilizer_group(&g4_set()).unwrap();
    assert_eq!(stab.len(), 8);
    assert_eq!(24 / stab.len(), 3);
    let p4 = parse_graph(
        "vertex 0 x\nvertex 1 x\nvertex 2 x\nvertex 3 x\nedge 0 1\nedge 1 2\nedge 2 3\n",
    )
    .unwrap();
    let auts = gs::canon::automorphism_group(&p4, 8).unwrap();
    assert_eq!(auts.len(), 2);
    assert_eq!(24 / auts.len(), 12);
    let complement = orthogonal_complement(&g4_set()).unwrap();
    let expected = PartitionSet::parse("{{{1,3},{2},{4}},{{2,4},{1},{3}}}").unwrap();
    assert_eq!(complement, expected, "computed dual differs from the expected partitions");
    assert!(started.elapsed().as_secs() < 120);
    report(3, "separation and symmetry counts", started);
}

#[test]
fn acceptance_4_identity_and_transitivity() {
    let started = Instant::now();
    // identity: all labelled graphs with <= 4 vertices over two atoms
    let mut identity_checked = 0usize;
    for n in 0..=4 {
        for g in all_labelled_graphs(n, &["a", "b"]) {
            let d = derive_identity(&g);
            assert!(d.is_proof());
            check_derivation(&d, &RuleSet::gs())
                .unwrap_or_else(|e| panic!("identity proof rejected for {g:?}: {e}"));
            assert!(isomorphic(&d.conclusion, &g.dual().par(&g)));
            identity_checked += 1;
        }
    }
    assert!(identity_checked > 16_000);
    // the searching prover agrees on a sample
    let prover = gs_prover();
    for (i, g) in all_labelled_graphs(4, &["a", "b"]).into_iter().enumerate() {
        if i % 211 == 0 {
            assert!(prover.prove_implication(&g, &g).is_proved());
        }
    }
    // transitivity over every triple of graph classes with <= 3 vertices
    let small = classes((0..=3).flat_map(|n| all_labelled_graphs(n, &["a", "b"])));
    let k = small.len();
    let mut implies = vec![vec![false; k]; k];
    for (i, g) in small.iter().enumerate() {
        for (j, h) in small.iter().enumerate() {
            implies[i][j] = prover.prove_implication(g, h).is_proved();
        }
    }
    for i in 0..k {
        for j in 0..k {
            if !implies[i][j] {
                continue;
            }
            for l in 0..k {
                if implies[j][l] {
                    assert!(
                        implies[i][l],
                        "transitivity failed: {:?} -> {:?} -> {:?}",
                        small[i], small[j], small[l]
                    );
                }
            }
        }
    }
    assert!(started.elapsed().as_secs() < 600, "identity suite exceeded 10 min");
    report(4, "identity and transitivity", started);
}

#[test]
fn acceptance_5_consistency_and_tensor_laws() {
    let started = Instant::now();
    let prover = gs_prover();
    for n in 0..=4 {
        for g in enumerate_provable(&prover, n, &["a", "b"]).unwrap() {
            if !g.is_empty() {
                assert!(
                    prover.prove(&g.dual()).is_refuted(),
                    "a graph and its dual both proved: {g:?}"
                );
            }
        }
    }
    // tensor law checked against a prover with the structural shortcuts
    // off, so the factorization is not assumed by the search under test
    let plain = Prover::new(ProverConfig {
        structural_shortcuts: false,
        ..ProverConfig::default()
    });
    let parts = classes((0..=3).flat_map(|n| all_labelled_graphs(n, &["a"])));
    let mut pairs = 0;
    for a in &parts {
        for b in &parts {
            if a.is_empty() && b.is_empty() {
                continue;
            }
            let joint = plain.prove(&a.tensor(b)).is_proved();
            let separate = plain.prove(a).is_proved() && plain.prove(b).is_proved();
            assert_eq!(joint, separate, "tensor law failed on {a:?} * {b:?}");
            pairs += 1;
        }
    }
    assert!(pairs > 100);
    report(5, "consistency and tensor laws", started);
}

#[test]
fn acceptance_6_up_rule_admissibility() {
    let started = Instant::now();
    let prover = gs_prover();
    // provable graphs with <= 6 vertices: the full 4-vertex census plus
    // random 6-vertex samples
    let mut provables: Vec<LabeledGraph> = Vec::new();
    for n in [0usize, 2, 4] {
        provables.extend(enumerate_provable(&prover, n, &["a", "b"]).unwrap());
    }
    let mut rng = Rng(0x9e3779b97f4a7c15);
    let mut seen: BTreeSet<Vec<u8>> = provables
        .iter()
        .map(|g| canonical_form(g, 64).unwrap())
        .collect();
    let mut attempts = 0;
    while provables.len() < 220 && attempts < 400_000 {
        attempts += 1;
        let g = random_graph(&mut rng, 6, &["a", "b"], 2);
        if !atoms_matched(&g) {
            continue;
        }
        let key = canonical_form(&g, 64).unwrap();
        if seen.contains(&key) {
            continue;
        }
        if prover.prove(&g).is_proved() {
            seen.insert(key);
            provables.push(g);
        }
    }
    assert!(provables.len() >= 200, "only found {} provable cases", provables.len());
    let mut instances = 0usize;
    for g in &provables {
        let mut ups = ai_up_instances(g);
        ups.extend(ss_up_instances(g, 16).unwrap());
        ups.extend(p_up_instances(g, 16).unwrap());
        for inst in ups {
            assert!(
                prover.prove(&inst.conclusion).is_proved(),
                "{} instance broke provability on {:?}",
                inst.rule,
                g
            );
            instances += 1;
        }
    }
    assert!(instances > 500, "too few up-rule instances exercised: {instances}");
    report(6, "up-rule admissibility", started);
}

#[test]
fn acceptance_7_splitting_oracles() {
    let started = Instant::now();
    let prover = gs_prover();
    // generated provable G | (A * B) with <= 6 vertices in total
    let mut rng = Rng(0x51af3c2b);
    let mut cases: Vec<(LabeledGraph, LabeledGraph, LabeledGraph)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while cases.len() < 100 && attempts < 400_000 {
        attempts += 1;
        let gn = 2 + rng.below(3);
        let an = 1 + rng.below(2);
        let g = random_graph(&mut rng, gn, &["a", "b"], 2);
        let a = random_graph(&mut rng, an, &["a", "b"], 2);
        let b = random_graph(&mut rng, 1, &["a", "b"], 2);
        if g.vertex_count() + a.vertex_count() + b.vertex_count() > 6 {
            continue;
        }
        let goal = g.par(&a.tensor(&b));
        if !atoms_matched(&goal) || !prover.prove(&goal).is_proved() {
            continue;
        }
        if !seen.insert(canonical_form(&goal, 64).unwrap()) {
            continue;
        }
        cases.push((g, a, b));
    }
    assert!(cases.len() >= 100, "only generated {} provable splitting cases", cases.len());
    for (g, a, b) in &cases {
        let w = splitting_tensor_witness(&prover, g, a, b)
            .unwrap_or_else(|e| panic!("no witness for {g:?} | ({a:?} * {b:?}): {e}"));
        check_derivation(&w.context_proof, &RuleSet::gs()).unwrap();
        check_derivation(&w.a_proof, &RuleSet::gs()).unwrap();
        check_derivation(&w.b_proof, &RuleSet::gs()).unwrap();
        check_derivation(&w.rest_derivation, &RuleSet::gs()).unwrap();
        let full = reassemble_tensor_split(&w, a, b);
        check_derivation(&full, &RuleSet::gs()).unwrap();
        assert!(isomorphic(&full.conclusion, &g.par(&a.tensor(b))));
    }
    // the deep worked example: the witness context is ~g | ~f | (g*f)
    let deep = parse_graph(
        "vertex 0 ~g\nvertex 1 ~f\nvertex 2 ~a\nvertex 3 ~b\nvertex 4 f\nvertex 5 g\n\
         edge 4 5\nedge 1 2\nedge 1 3\nedge 2 4\nedge 3 4\nedge 2 5\nedge 3 5\n",
    )
    .unwrap();
    let a = LabeledGraph::single(Atom::pos("a"));
    let b = LabeledGraph::single(Atom::pos("b"));
    let w = splitting_tensor_witness(&prover, &deep, &a, &b).unwrap();
    assert!(isomorphic(
        &w.context.host,
        &to_graph(&parse_formula("~g|~f|(g*f)").unwrap())
    ));

    // atomic splitting: random provable G | a cases plus the worked one
    let mut atomic_cases = 0;
    let mut rng = Rng(0xfeedbeef);
    while atomic_cases < 40 {
        let gn = 1 + rng.below(5);
        let g = random_graph(&mut rng, gn, &["a", "b"], 2);
        let atom = Atom::pos("a");
        let goal = g.par(&LabeledGraph::single(atom.clone()));
        if !atoms_matched(&goal) || !prover.prove(&goal).is_proved() {
            continue;
        }
        let w = atomic_splitting_witness(&prover, &g, &atom).unwrap();
        check_derivation(&w.context_proof, &RuleSet::gs()).unwrap();
        check_derivation(&w.rest_derivation, &RuleSet::gs()).unwrap();
        atomic_cases += 1;
    }

    // context reduction: the worked 6-vertex example and probes
    let eq6_8 = parse_graph(
        "vertex 0 ~a\nvertex 1 a\nvertex 2 ~b\nvertex 3 ~c\nvertex 4 c\nvertex 5 b\n\
         edge 0 2\nedge 0 3\nedge 0 4\nedge 4 5\n",
    )
    .unwrap();
    let hole: VertexSet = [VertexId(0)].into_iter().collect();
    let ctx = GraphContext::of_module(&eq6_8, &hole);
    let w = context_reduction_witness(&prover, &ctx, &LabeledGraph::single(Atom::neg("a")))
        .unwrap();
    let expected_context = to_graph(&parse_formula("~b|~c|(b*c)").unwrap());
    assert!(isomorphic(&w.context.host, &expected_context));
    assert_eq!(w.probes.len(), 3);
    for (_, instance) in &w.probes {
        check_derivation(instance, &RuleSet::gs()).unwrap();
    }
    // a few random context-reduction cases
    let mut reduced = 0;
    let mut rng = Rng(0xabcdef12345);
    while reduced < 20 {
        let hn = 1 + rng.below(4);
        let host = random_graph(&mut rng, hn, &["a", "b"], 2);
        let r: VertexSet = host.vertices().filter(|_| rng.chance(1, 2)).collect();
        let gctx = GraphContext::new(host, r);
        let a = LabeledGraph::single(Atom::pos("a"));
        if !atoms_matched(&gctx.plug(&a)) || !prover.prove(&gctx.plug(&a)).is_proved() {
            continue;
        }
        let w = context_reduction_witness(&prover, &gctx, &a).unwrap();
        assert_eq!(w.probes.len(), 3);
        reduced += 1;
    }
    assert!(started.elapsed().as_secs() < 900, "splitting oracles exceeded 15 min");
    report(7, "splitting and context reduction", started);
}

#[test]
fn acceptance_8_analyticity() {
    let started = Instant::now();
    // pruned and unpruned search agree on every graph class with <= 5
    // vertices over two atoms
    let goals = classes((0..=5).flat_map(|n| all_labelled_graphs(n, &["a", "b"])));
    let unpruned = Prover::new(ProverConfig {
        rules: RuleSet::gs_ssup(),
        ..ProverConfig::default()
    });
    let pruned = Prover::new(ProverConfig {
        rules: RuleSet::gs_ssup(),
        analytic_pruning: true,
        ..ProverConfig::default()
    });
    let mut checked = 0usize;
    let mut cograph_proofs = 0usize;
    for g in &goals {
        let a = unpruned.prove(g);
        let b = pruned.prove(g);
        assert_eq!(
            verdict(&a),
            verdict(&b),
            "analytic pruning changed the verdict on {g:?}"
        );
        checked += 1;
        if let (true, Outcome::Proved(d)) = (is_p4_free(g), &b) {
            for step in &d.steps {
                assert!(is_p4_free(&step.premise), "non-cograph in a cograph proof");
                assert!(is_p4_free(&step.conclusion));
            }
            cograph_proofs += 1;
        }
    }
    assert!(checked > 3000, "expected the full 5-vertex census, got {checked}");
    assert!(cograph_proofs >= 25);
    report(8, "analytic pruning completeness", started);
}

#[test]
fn acceptance_9_structural_kernel() {
    let started = Instant::now();
    // brute-force isomorphism oracle, independent of canonical labelling
    fn brute_iso(g: &LabeledGraph, h: &LabeledGraph) -> bool {
        if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
            return false;
        }
        let gv: Vec<VertexId> = g.vertices().collect();
        let hv: Vec<VertexId> = h.vertices().collect();
        fn rec(
            g: &LabeledGraph,
            h: &LabeledGraph,
            gv: &[VertexId],
            hv: &[VertexId],
            assign: &mut Vec<usize>,
        ) -> bool {
            let k = assign.len();
            if k == gv.len() {
                return true;
            }
            for (j, &w) in hv.iter().enumerate() {
                if assign.contains(&j) || g.label(gv[k]) != h.label(w) {
                    continue;
                }
                if (0..k).all(|i| g.has_edge(gv[i], gv[k]) == h.has_edge(hv[assign[i]], w)) {
                    assign.push(j);
                    if rec(g, h, gv, hv, assign) {
                        return true;
                    }
                    assign.pop();
                }
            }
            false
        }
        rec(g, h, &gv, &hv, &mut Vec::new())
    }

    // exhaustive over <= 4 vertices and two atoms: members of the same
    // canonical class are pairwise isomorphic, representatives of
    // distinct classes are not
    let mut by_class: BTreeMap<Vec<u8>, Vec<LabeledGraph>> = BTreeMap::new();
    for n in 0..=4 {
        for g in all_labelled_graphs(n, &["a", "b"]) {
            assert_eq!(g.dual().dual(), g);
            by_class.entry(canonical_form(&g, 64).unwrap()).or_default().push(g);
        }
    }
    for members in by_class.values() {
        for m in &members[1..] {
            assert!(brute_iso(&members[0], m), "canonical class holds non-isomorphic graphs");
        }
    }
    let reps: Vec<&LabeledGraph> = by_class.values().map(|v| &v[0]).collect();
    for (i, g) in reps.iter().enumerate() {
        for h in &reps[i + 1..] {
            assert!(!brute_iso(g, h), "distinct canonical classes hold isomorphic graphs");
        }
    }

    // De Morgan and decomposition round trips on the 5-vertex census
    // over one atom
    for g in all_labelled_graphs(5, &["a"]) {
        let h = g.dual();
        assert!(isomorphic(&g.par(&h).dual(), &g.dual().tensor(&h.dual())));
        if !g.is_empty() {
            let t = gs::mdtree::decompose(&g).unwrap();
            assert!(isomorphic(&gs::mdtree::recompose(&t), &g));
        }
    }

    // every found proof shrinks the measure at every step and fits the
    // quadratic length bound
    let prover = gs_prover();
    let mut proofs = 0usize;
    for n in [2usize, 4] {
        for g in enumerate_provable(&prover, n, &["a", "b"]).unwrap() {
            let Outcome::Proved(d) = prover.prove(&g) else { unreachable!() };
            let bound = n * n + n;
            assert!(d.inference_len() <= bound, "proof longer than n^2+n on {g:?}");
            for step in &d.steps {
                assert!(step.premise.size_measure() < step.conclusion.size_measure());
            }
            proofs += 1;
        }
    }
    assert!(proofs >= 26);
    report(9, "structural kernel against brute force", started);
}
