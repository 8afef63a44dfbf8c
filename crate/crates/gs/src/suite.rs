//! The bundled example suite: every worked provability verdict,
//! golden proof, sequent separation, and symmetry count from the corpus,
//! driven by a manifest so the expected outcomes double as
//! documentation. The corpus is embedded in the binary and also shipped
//! as plain files.

use crate::canon::isomorphic;
use crate::connectives::{orthogonal_complement, stabilizer_group, PartitionSet};
use crate::formula::{parse_formula, to_graph};
use crate::graph::LabeledGraph;
use crate::io::parse_graph;
use crate::mdtree::{decompose, is_p4_free};
use crate::mll::{parse_sequent, SequentProver};
use crate::prover::{Outcome, Prover, ProverConfig, RuleSet};
use crate::rules::{check_derivation, parse_derivation};
use std::fmt;
use std::path::Path;
use std::time::Instant;

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $name)))),*]
    };
}

pub const CORPUS: &[(&str, &str)] = corpus_files![
    "manifest.txt",
    "eq1_1_P.graph",
    "eq1_1_Q.graph",
    "eq1_2.graph",
    "eq1_4_two_edges.graph",
    "eq1_4_last_two.graph",
    "eq3_3.graph",
    "eq4_6.graph",
    "eq4_6_dual.graph",
    "eq4_9_lhs.graph",
    "eq4_9_rhs.graph",
    "eq4_10.proof",
    "eq5_1_A1.graph",
    "eq5_1_A2.graph",
    "eq5_1_A3.graph",
    "eq5_3_A4.graph",
    "eq6_3.graph",
    "eq6_5.graph",
    "eq6_8.graph",
    "eq6_22.graph",
    "eq6_22_gdown.proof",
    "fig3.graph",
    "eq9_1.graph",
    "eq9_2a_lhs.graph",
    "eq9_2a_rhs.graph",
    "eq9_2b_lhs.graph",
    "eq9_2b_rhs.graph",
    "p4_abcd.graph",
    "p4_bacd.graph",
    "p4_badc.graph",
    "p4_abdc.graph",
    "p4_cadb.graph",
    "p4_cabd.graph",
    "p4_acbd.graph",
    "p4_acdb.graph",
    "p4_cbad.graph",
    "p4_bcad.graph",
    "p4_adcb.graph",
    "p4_adbc.graph",
    "p4_pattern.graph",
];

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub id: String,
    pub section: u32,
    pub kind: String,
    pub args: Vec<String>,
    pub expected: String,
    pub actual: String,
    pub millis: u128,
}

impl CaseResult {
    pub fn pass(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub cases: Vec<CaseResult>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass())
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass()).count()
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(
                f,
                "{} case {} [{}] expected={} actual={}",
                if c.pass() { "ok  " } else { "FAIL" },
                c.id,
                c.kind,
                c.expected,
                c.actual
            )?;
        }
        writeln!(f, "{} cases, {} failures", self.cases.len(), self.failures())
    }
}

pub struct SuiteRunner<'a> {
    corpus_dir: Option<&'a Path>,
    prover: Prover,
    sequents: SequentProver,
}

fn suite_prover() -> Prover {
    Prover::new(ProverConfig {
        vertex_limit: 16,
        ..ProverConfig::default()
    })
}

impl<'a> SuiteRunner<'a> {
    pub fn new(corpus_dir: Option<&'a Path>) -> SuiteRunner<'a> {
        SuiteRunner { corpus_dir, prover: suite_prover(), sequents: SequentProver::new() }
    }

    fn file(&self, name: &str) -> Result<String, String> {
        match self.corpus_dir {
            Some(dir) => std::fs::read_to_string(dir.join(name))
                .map_err(|e| format!("{name}: {e}")),
            None => CORPUS
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, body)| body.to_string())
                .ok_or_else(|| format!("{name}: not in the embedded corpus")),
        }
    }

    fn graph(&self, name: &str) -> Result<LabeledGraph, String> {
        parse_graph(&self.file(name)?).map_err(|e| format!("{name}: {e}"))
    }

    fn verdict(&self, out: Outcome) -> String {
        out.verdict().to_string()
    }

    pub fn run(&self, section: Option<u32>) -> Result<ExperimentReport, String> {
        let manifest = self.file("manifest.txt")?;
        let mut report = ExperimentReport::default();
        for (lineno, raw) in manifest.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens = tokenize(line).map_err(|e| format!("manifest line {}: {e}", lineno + 1))?;
            if tokens.len() < 4 {
                return Err(format!("manifest line {}: too few fields", lineno + 1));
            }
            let sec: u32 = tokens[0]
                .parse()
                .map_err(|_| format!("manifest line {}: bad section", lineno + 1))?;
            if let Some(s) = section {
                if s != sec {
                    continue;
                }
            }
            let kind = tokens[1].clone();
            let id = tokens.last().unwrap().clone();
            let expected = tokens[tokens.len() - 2].clone();
            let args = &tokens[2..tokens.len() - 2];
            let start = Instant::now();
            let actual = self
                .run_case(&kind, args)
                .unwrap_or_else(|e| format!("error: {e}"));
            report.cases.push(CaseResult {
                id,
                section: sec,
                kind,
                args: args.to_vec(),
                expected,
                actual,
                millis: start.elapsed().as_millis(),
            });
        }
        Ok(report)
    }

    fn run_case(&self, kind: &str, args: &[String]) -> Result<String, String> {
        match kind {
            "prove" => {
                let g = self.graph(&args[0])?;
                Ok(self.verdict(self.prover.prove(&g)))
            }
            "implies" => {
                let a = self.graph(&args[0])?;
                let b = self.graph(&args[1])?;
                Ok(self.verdict(self.prover.prove_implication(&a, &b)))
            }
            "implies-fg" => {
                let phi = parse_formula(&args[0]).map_err(|e| e.to_string())?;
                let g = self.graph(&args[1])?;
                Ok(self.verdict(self.prover.prove_implication(&to_graph(&phi), &g)))
            }
            "par-fg" => {
                let g = self.graph(&args[0])?;
                let phi = parse_formula(&args[1]).map_err(|e| e.to_string())?;
                Ok(self.verdict(self.prover.prove(&g.par(&to_graph(&phi)))))
            }
            "check" | "check-len" => {
                let d = parse_derivation(&self.file(&args[0])?).map_err(|e| e.to_string())?;
                let rules = RuleSet::parse(&args[1]).ok_or("unknown rule set")?;
                let valid = check_derivation(&d, &rules).is_ok();
                if kind == "check-len" {
                    let max: usize = args[2].parse().map_err(|_| "bad length bound")?;
                    Ok(if valid && d.inference_len() <= max { "valid" } else { "invalid" }
                        .to_string())
                } else {
                    Ok(if valid { "valid" } else { "invalid" }.to_string())
                }
            }
            "mll" => {
                let seq = parse_sequent(&args[0]).map_err(|e| e.to_string())?;
                Ok(if self.sequents.prove(&seq).is_some() {
                    "provable"
                } else {
                    "unprovable"
                }
                .to_string())
            }
            "formula-agree" => {
                let phi = parse_formula(&args[0]).map_err(|e| e.to_string())?;
                let report = crate::mll::conservativity_check(&self.prover, &phi)?;
                if !report.agree() {
                    return Ok("disagreement".to_string());
                }
                Ok(if report.graph_provable { "provable" } else { "unprovable" }.to_string())
            }
            "cograph" => {
                let g = self.graph(&args[0])?;
                Ok(if is_p4_free(&g) { "yes" } else { "no" }.to_string())
            }
            "self-dual" => {
                let g = self.graph(&args[0])?;
                Ok(if isomorphic(&g, &g.dual()) { "yes" } else { "no" }.to_string())
            }
            "dual-is" => {
                let g = self.graph(&args[0])?;
                let h = self.graph(&args[1])?;
                Ok(if g.dual() == h { "yes" } else { "no" }.to_string())
            }
            "prime-tree" => {
                let g = self.graph(&args[0])?;
                let tree = decompose(&g).map_err(|e| e.to_string())?;
                Ok(tree.format())
            }
            "stab" => {
                let set = PartitionSet::parse(&args[0]).map_err(|e| e.to_string())?;
                let stab = stabilizer_group(&set).map_err(|e| e.to_string())?;
                Ok(format!("{} {}", stab.len(), 24 / stab.len()))
            }
            "complement" => {
                let set = PartitionSet::parse(&args[0]).map_err(|e| e.to_string())?;
                Ok(orthogonal_complement(&set).map_err(|e| e.to_string())?.to_string())
            }
            "aut-order" => {
                let g = self.graph(&args[0])?;
                let auts =
                    crate::canon::automorphism_group(&g, 8).map_err(|e| e.to_string())?;
                Ok(format!("{} {}", auts.len(), 24 / auts.len()))
            }
            other => Err(format!("unknown case kind `{other}`")),
        }
    }
}

impl<'a> SuiteRunner<'a> {
    /// Persist proofs for the provable prove/implies cases; the prover's
    /// memo makes the re-runs cheap.
    pub fn write_artifacts(
        &self,
        dir: &Path,
        report: &ExperimentReport,
    ) -> Result<usize, String> {
        let mut written = 0usize;
        for case in &report.cases {
            if case.actual != "provable" {
                continue;
            }
            let proof = match case.kind.as_str() {
                "prove" => self.prover.prove(&self.graph(&case.args[0])?),
                "implies" => self
                    .prover
                    .prove_implication(&self.graph(&case.args[0])?, &self.graph(&case.args[1])?),
                "implies-fg" => {
                    let phi = parse_formula(&case.args[0]).map_err(|e| e.to_string())?;
                    self.prover
                        .prove_implication(&to_graph(&phi), &self.graph(&case.args[1])?)
                }
                "par-fg" => {
                    let phi = parse_formula(&case.args[1]).map_err(|e| e.to_string())?;
                    let g = self.graph(&case.args[0])?;
                    self.prover.prove(&g.par(&to_graph(&phi)))
                }
                _ => continue,
            };
            if let Outcome::Proved(d) = proof {
                let path = dir.join(format!("{}.proof", case.id));
                std::fs::write(&path, crate::rules::serialize_derivation(&d))
                    .map_err(|e| e.to_string())?;
                written += 1;
            }
        }
        Ok(written)
    }
}

fn tokenize(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for c in line.chars() {
        match c {
            '"' => {
                if in_quotes {
                    out.push(std::mem::take(&mut cur));
                }
                in_quotes = !in_quotes;
            }
            c if c.is_whitespace() && !in_quotes => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if in_quotes {
        return Err("unterminated quote".to_string());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Run the bundled suite against the embedded corpus.
pub fn run_embedded(section: Option<u32>) -> Result<ExperimentReport, String> {
    SuiteRunner::new(None).run(section)
}
