//! Thin command-line front end over the library. Exit codes: 0 for
//! success/provable/valid, 1 for refuted/invalid/not-found, 2 for
//! malformed input or exceeded limits.

use gs::connectives::{
    cycle_string, orthogonal, orthogonal_complement, stabilizer_group, Partition, PartitionSet,
};
use gs::formula::{from_cograph, parse_formula, to_graph};
use gs::graph::LabeledGraph;
use gs::io::{parse_graph, print_graph, to_dot};
use gs::mdtree::decompose;
use gs::mll::{parse_sequent, GenFormula, SequentProver};
use gs::prover::{Outcome, Prover, ProverConfig, RuleSet};
use gs::rules::{check_derivation, parse_derivation, serialize_derivation};
use gs::suite::SuiteRunner;
use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const USAGE: &str = "usage: gs <command> [args]

commands:
  prove <file> [--rules gs|gs+ssup|gs+gdown] [--analytic] [--limit N] [--emit FILE]
  implies <fileA> <fileB> [--rules ...] [--limit N] [--emit FILE]
  check <proof-file> [--rules gs|gs+ssup|gs+gdown|sgs|all]
  decompose <graph-file>
  dual <graph-file>
  iso <fileA> <fileB>
  to-graph <formula>
  to-formula <graph-file>
  export-dot <graph-file>
  mll-prove <sequent> [--g4]
  connectives [--orthogonal P Q] [--stabilizer SET] [--complement SET]
  paper-suite [--section N] [--corpus DIR] [--artifacts DIR]

files holding `vertex`/`edge` lines are graphs; anything else is parsed
as a formula.";

fn run(args: &[String]) -> Result<ExitCode, String> {
    let Some(cmd) = args.first() else {
        eprintln!("{USAGE}");
        return Ok(ExitCode::from(2));
    };
    let rest = &args[1..];
    match cmd.as_str() {
        "prove" => prove_cmd(rest, false),
        "implies" => prove_cmd(rest, true),
        "check" => check_cmd(rest),
        "decompose" => {
            let g = load_graph(positional(rest, 0)?)?;
            if g.is_empty() {
                println!("1");
            } else {
                println!("{}", decompose(&g).map_err(|e| e.to_string())?.format());
            }
            Ok(ExitCode::SUCCESS)
        }
        "dual" => {
            let g = load_graph(positional(rest, 0)?)?;
            print!("{}", print_graph(&g.dual()));
            Ok(ExitCode::SUCCESS)
        }
        "iso" => {
            let a = load_graph(positional(rest, 0)?)?;
            let b = load_graph(positional(rest, 1)?)?;
            match gs::canon::find_isomorphism(&a, &b) {
                Some(map) => {
                    for (v, w) in map {
                        println!("{v} -> {w}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not isomorphic");
                    Ok(ExitCode::from(1))
                }
            }
        }
        "to-graph" => {
            let phi = parse_formula(positional(rest, 0)?).map_err(|e| e.to_string())?;
            print!("{}", print_graph(&to_graph(&phi)));
            Ok(ExitCode::SUCCESS)
        }
        "to-formula" => {
            let g = load_graph(positional(rest, 0)?)?;
            match from_cograph(&g) {
                Some(phi) => {
                    println!("{phi}");
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not a cograph");
                    Ok(ExitCode::from(1))
                }
            }
        }
        "export-dot" => {
            let g = load_graph(positional(rest, 0)?)?;
            print!("{}", to_dot(&g));
            Ok(ExitCode::SUCCESS)
        }
        "mll-prove" => mll_cmd(rest),
        "connectives" => connectives_cmd(rest),
        "paper-suite" => suite_cmd(rest),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

fn positional(args: &[String], idx: usize) -> Result<&String, String> {
    args.iter()
        .filter(|a| !a.starts_with("--"))
        .nth(idx)
        .ok_or_else(|| format!("missing argument {}", idx + 1))
}

fn flag_value<'a>(args: &'a [String], name: &str) -> Result<Option<&'a String>, String> {
    for (i, a) in args.iter().enumerate() {
        if a == name {
            return args
                .get(i + 1)
                .map(Some)
                .ok_or_else(|| format!("{name} needs a value"));
        }
    }
    Ok(None)
}

fn has_flag(args: &[String], name: &str) -> bool {
    args.iter().any(|a| a == name)
}

/// Graph files hold `vertex`/`edge` statements; anything else is read as
/// a formula.
fn load_graph(path: &str) -> Result<LabeledGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let looks_like_graph = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .map(|l| l.starts_with("vertex") || l.starts_with("edge"))
        .unwrap_or(true);
    if looks_like_graph {
        parse_graph(&text).map_err(|e| format!("{path}: {e}"))
    } else {
        let phi = parse_formula(text.trim()).map_err(|e| format!("{path}: {e}"))?;
        Ok(to_graph(&phi))
    }
}

fn prover_from_flags(args: &[String]) -> Result<Prover, String> {
    let rules = match flag_value(args, "--rules")? {
        Some(s) => RuleSet::parse(s).ok_or_else(|| format!("unknown rule set `{s}`"))?,
        None => RuleSet::gs(),
    };
    let searchable = [RuleSet::gs(), RuleSet::gs_ssup(), RuleSet::gs_gdown()];
    if !searchable.contains(&rules) {
        return Err(format!(
            "`{rules}` is a checking rule set; search supports gs, gs+ssup, gs+gdown"
        ));
    }
    let vertex_limit = match flag_value(args, "--limit")? {
        Some(s) => s.parse::<usize>().map_err(|_| "bad --limit")?,
        None => 16,
    };
    let analytic = has_flag(args, "--analytic");
    if analytic && rules != RuleSet::gs_ssup() {
        return Err("--analytic needs --rules gs+ssup".to_string());
    }
    Ok(Prover::new(ProverConfig {
        rules,
        vertex_limit,
        analytic_pruning: analytic,
        ..ProverConfig::default()
    }))
}

fn prove_cmd(args: &[String], implication: bool) -> Result<ExitCode, String> {
    let prover = prover_from_flags(args)?;
    let outcome = if implication {
        let a = load_graph(positional(args, 0)?)?;
        let b = load_graph(positional(args, 1)?)?;
        prover.prove_implication(&a, &b)
    } else {
        let g = load_graph(positional(args, 0)?)?;
        prover.prove(&g)
    };
    match outcome {
        Outcome::Proved(d) => {
            println!("provable ({} steps)", d.inference_len());
            if let Some(path) = flag_value(args, "--emit")? {
                std::fs::write(path, serialize_derivation(&d)).map_err(|e| e.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Refuted => {
            println!("unprovable");
            Ok(ExitCode::from(1))
        }
        Outcome::LimitExceeded(m) => Err(format!("limit exceeded: {m}")),
    }
}

fn check_cmd(args: &[String]) -> Result<ExitCode, String> {
    let path = positional(args, 0)?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let d = parse_derivation(&text).map_err(|e| format!("{path}: {e}"))?;
    let rules = match flag_value(args, "--rules")? {
        Some(s) => RuleSet::parse(s).ok_or_else(|| format!("unknown rule set `{s}`"))?,
        None => RuleSet::all(),
    };
    match check_derivation(&d, &rules) {
        Ok(()) => {
            println!(
                "valid: {} steps from {} to {} vertices",
                d.inference_len(),
                d.premise.vertex_count(),
                d.conclusion.vertex_count()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn mll_cmd(args: &[String]) -> Result<ExitCode, String> {
    let seq = parse_sequent(positional(args, 0)?).map_err(|e| e.to_string())?;
    if !has_flag(args, "--g4") {
        fn has_gen(f: &GenFormula) -> bool {
            match f {
                GenFormula::Lit(_) => false,
                GenFormula::Par(l, r) | GenFormula::Tensor(l, r) => has_gen(l) || has_gen(r),
                GenFormula::G4(_) | GenFormula::NotG4(_) => true,
            }
        }
        if seq.formulas().iter().any(has_gen) {
            return Err("generalised connectives need --g4".to_string());
        }
    }
    match SequentProver::new().prove(&seq) {
        Some(tree) => {
            print!("{}", tree.render());
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("unprovable");
            Ok(ExitCode::from(1))
        }
    }
}

fn connectives_cmd(args: &[String]) -> Result<ExitCode, String> {
    if let Some(i) = args.iter().position(|a| a == "--orthogonal") {
        let p = Partition::parse(args.get(i + 1).ok_or("--orthogonal needs P Q")?)
            .map_err(|e| e.to_string())?;
        let q = Partition::parse(args.get(i + 2).ok_or("--orthogonal needs P Q")?)
            .map_err(|e| e.to_string())?;
        let ortho = orthogonal(&p, &q).map_err(|e| e.to_string())?;
        println!("{}", if ortho { "orthogonal" } else { "not orthogonal" });
        return Ok(if ortho { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    if let Some(v) = flag_value(args, "--stabilizer")? {
        let set = PartitionSet::parse(v).map_err(|e| e.to_string())?;
        let stab = stabilizer_group(&set).map_err(|e| e.to_string())?;
        println!("order {}", stab.len());
        for p in &stab {
            println!("{}", cycle_string(p));
        }
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(v) = flag_value(args, "--complement")? {
        let set = PartitionSet::parse(v).map_err(|e| e.to_string())?;
        let comp = orthogonal_complement(&set).map_err(|e| e.to_string())?;
        println!("{comp}");
        return Ok(ExitCode::SUCCESS);
    }
    Err("connectives needs --orthogonal, --stabilizer, or --complement".to_string())
}

fn suite_cmd(args: &[String]) -> Result<ExitCode, String> {
    let section = match flag_value(args, "--section")? {
        Some(s) => Some(s.parse::<u32>().map_err(|_| "bad --section")?),
        None => None,
    };
    let dir = flag_value(args, "--corpus")?.map(PathBuf::from);
    let artifacts = flag_value(args, "--artifacts")?.map(PathBuf::from);
    if let Some(a) = &artifacts {
        std::fs::create_dir_all(a).map_err(|e| e.to_string())?;
    }
    let started = std::time::Instant::now();
    let runner = SuiteRunner::new(dir.as_deref());
    let report = runner.run(section)?;
    print!("{report}");
    if let Some(dir) = &artifacts {
        let written = runner.write_artifacts(dir, &report)?;
        eprintln!("wrote {written} proof artifacts to {}", dir.display());
    }
    eprintln!("suite finished in {:?}", started.elapsed());
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
