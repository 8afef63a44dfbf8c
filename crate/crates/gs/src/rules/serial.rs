//! Line-oriented derivation files. Graphs are named blocks in the graph
//! text format; steps reference them by name:
//!
//! ```text
//! derivation premise=g0 conclusion=g2
//! graph g0
//! vertex 1 a
//! end
//! step 1 ai-down premise=g0 conclusion=g1 pos=2,3 params=v=2,w=3
//! ```
//!
//! Vertex lists inside params are `+`-separated; slot lists are
//! `/`-separated; pair lists use `:`.

use super::{Derivation, ProofStep, RuleId, StepParams};
use crate::graph::{LabeledGraph, VertexId, VertexSet};
use crate::io::{parse_graph, print_graph};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ProofParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ProofParseError {}

fn err(line: usize, message: impl Into<String>) -> ProofParseError {
    ProofParseError { line, message: message.into() }
}

fn set_str(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("+")
}

fn pos_str(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn slots_str(slots: &[VertexSet]) -> String {
    slots.iter().map(set_str).collect::<Vec<_>>().join("/")
}

fn pairs_str(pairs: &[(VertexId, VertexId)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a}:{b}"))
        .collect::<Vec<_>>()
        .join("+")
}

fn params_str(p: &StepParams) -> String {
    match p {
        StepParams::Ai { v, w } => format!("v={v},w={w}"),
        StepParams::Ss { a, b, s } => {
            format!("a={},b={},s={}", set_str(a), set_str(b), set_str(s))
        }
        StepParams::Sw { a, b, c } => {
            format!("a={},b={},c={}", set_str(a), set_str(b), set_str(c))
        }
        StepParams::Quotient { m_slots, n_slots } => {
            format!("m={},n={}", slots_str(m_slots), slots_str(n_slots))
        }
        StepParams::Id { left, right, pairing } => format!(
            "left={},right={},map={}",
            set_str(left),
            set_str(right),
            pairs_str(pairing)
        ),
        StepParams::Iso { map } => format!("map={}", pairs_str(map)),
    }
}

pub fn serialize_derivation(d: &Derivation) -> String {
    let mut names: Vec<(LabeledGraph, String)> = Vec::new();
    let name_of = |g: &LabeledGraph, names: &mut Vec<(LabeledGraph, String)>| -> String {
        if let Some((_, n)) = names.iter().find(|(h, _)| h == g) {
            return n.clone();
        }
        let n = format!("g{}", names.len());
        names.push((g.clone(), n.clone()));
        n
    };
    let mut step_lines = Vec::new();
    let premise_name = name_of(&d.premise, &mut names);
    let conclusion_name = name_of(&d.conclusion, &mut names);
    for (i, s) in d.steps.iter().enumerate() {
        let p = name_of(&s.premise, &mut names);
        let c = name_of(&s.conclusion, &mut names);
        step_lines.push(format!(
            "step {} {} premise={} conclusion={} pos={} params={}",
            i + 1,
            s.rule.token(),
            p,
            c,
            pos_str(&s.position),
            params_str(&s.params),
        ));
    }
    let mut out = format!("derivation premise={premise_name} conclusion={conclusion_name}\n");
    for (g, n) in &names {
        out.push_str(&format!("graph {n}\n"));
        out.push_str(&print_graph(g));
        out.push_str("end\n");
    }
    for l in step_lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn parse_vertex(tok: &str, line: usize) -> Result<VertexId, ProofParseError> {
    tok.parse::<u32>()
        .map(VertexId)
        .map_err(|_| err(line, format!("bad vertex id `{tok}`")))
}

fn parse_set(tok: &str, line: usize) -> Result<VertexSet, ProofParseError> {
    if tok.is_empty() {
        return Ok(VertexSet::new());
    }
    tok.split('+').map(|t| parse_vertex(t, line)).collect()
}

fn parse_slots(tok: &str, line: usize) -> Result<Vec<VertexSet>, ProofParseError> {
    if tok.is_empty() {
        return Ok(Vec::new());
    }
    tok.split('/').map(|t| parse_set(t, line)).collect()
}

fn parse_pairs(tok: &str, line: usize) -> Result<Vec<(VertexId, VertexId)>, ProofParseError> {
    if tok.is_empty() {
        return Ok(Vec::new());
    }
    tok.split('+')
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| err(line, format!("bad pair `{t}`")))?;
            Ok((parse_vertex(a, line)?, parse_vertex(b, line)?))
        })
        .collect()
}

fn parse_params(rule: RuleId, tok: &str, line: usize) -> Result<StepParams, ProofParseError> {
    let mut kv = BTreeMap::new();
    if !tok.is_empty() {
        for item in tok.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| err(line, format!("bad param `{item}`")))?;
            kv.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| -> Result<String, ProofParseError> {
        kv.get(k)
            .cloned()
            .ok_or_else(|| err(line, format!("missing param `{k}`")))
    };
    Ok(match rule {
        RuleId::AiDown | RuleId::AiUp => StepParams::Ai {
            v: parse_vertex(&get("v")?, line)?,
            w: parse_vertex(&get("w")?, line)?,
        },
        RuleId::SsDown | RuleId::SsUp => StepParams::Ss {
            a: parse_set(&get("a")?, line)?,
            b: parse_set(&get("b")?, line)?,
            s: parse_set(&get("s")?, line)?,
        },
        RuleId::Switch => StepParams::Sw {
            a: parse_set(&get("a")?, line)?,
            b: parse_set(&get("b")?, line)?,
            c: parse_set(&get("c")?, line)?,
        },
        RuleId::PDown | RuleId::PUp | RuleId::GDown | RuleId::GUp => StepParams::Quotient {
            m_slots: parse_slots(&get("m")?, line)?,
            n_slots: parse_slots(&get("n")?, line)?,
        },
        RuleId::IdDown | RuleId::IdUp => StepParams::Id {
            left: parse_set(&get("left")?, line)?,
            right: parse_set(&get("right")?, line)?,
            pairing: parse_pairs(&get("map")?, line)?,
        },
        RuleId::Iso => StepParams::Iso { map: parse_pairs(&get("map")?, line)? },
    })
}

/// Parse a derivation file. The checker is a separate pass; this only
/// builds the object.
pub fn parse_derivation(text: &str) -> Result<Derivation, ProofParseError> {
    let mut graphs: BTreeMap<String, LabeledGraph> = BTreeMap::new();
    let mut steps: Vec<ProofStep> = Vec::new();
    let mut premise_name = None;
    let mut conclusion_name = None;
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, raw)) = lines.next() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "derivation" => {
                for w in &words[1..] {
                    if let Some(n) = w.strip_prefix("premise=") {
                        premise_name = Some(n.to_string());
                    } else if let Some(n) = w.strip_prefix("conclusion=") {
                        conclusion_name = Some(n.to_string());
                    } else {
                        return Err(err(lineno, format!("unexpected token `{w}`")));
                    }
                }
            }
            "graph" => {
                let name = words
                    .get(1)
                    .ok_or_else(|| err(lineno, "graph needs a name"))?
                    .to_string();
                let mut body = String::new();
                let mut closed = false;
                for (j, raw2) in lines.by_ref() {
                    let l2 = raw2.split('#').next().unwrap_or("").trim();
                    if l2 == "end" {
                        closed = true;
                        break;
                    }
                    body.push_str(raw2);
                    body.push('\n');
                    let _ = j;
                }
                if !closed {
                    return Err(err(lineno, "graph block without `end`"));
                }
                let g = parse_graph(&body)
                    .map_err(|e| err(lineno + e.line, e.message))?;
                if graphs.insert(name.clone(), g).is_some() {
                    return Err(err(lineno, format!("duplicate graph `{name}`")));
                }
            }
            "step" => {
                if words.len() < 3 {
                    return Err(err(lineno, "step needs an index and a rule"));
                }
                let rule = RuleId::from_token(words[2])
                    .ok_or_else(|| err(lineno, format!("unknown rule `{}`", words[2])))?;
                let mut premise = None;
                let mut conclusion = None;
                let mut pos = None;
                let mut params = None;
                for w in &words[3..] {
                    if let Some(n) = w.strip_prefix("premise=") {
                        premise = Some(
                            graphs
                                .get(n)
                                .cloned()
                                .ok_or_else(|| err(lineno, format!("unknown graph `{n}`")))?,
                        );
                    } else if let Some(n) = w.strip_prefix("conclusion=") {
                        conclusion = Some(
                            graphs
                                .get(n)
                                .cloned()
                                .ok_or_else(|| err(lineno, format!("unknown graph `{n}`")))?,
                        );
                    } else if let Some(n) = w.strip_prefix("pos=") {
                        pos = Some(if n.is_empty() {
                            VertexSet::new()
                        } else {
                            n.split(',')
                                .map(|t| parse_vertex(t, lineno))
                                .collect::<Result<VertexSet, _>>()?
                        });
                    } else if let Some(n) = w.strip_prefix("params=") {
                        params = Some(parse_params(rule, n, lineno)?);
                    } else {
                        return Err(err(lineno, format!("unexpected token `{w}`")));
                    }
                }
                steps.push(ProofStep {
                    rule,
                    premise: premise.ok_or_else(|| err(lineno, "step needs premise="))?,
                    conclusion: conclusion.ok_or_else(|| err(lineno, "step needs conclusion="))?,
                    position: pos.ok_or_else(|| err(lineno, "step needs pos="))?,
                    params: params.ok_or_else(|| err(lineno, "step needs params="))?,
                });
            }
            other => return Err(err(lineno, format!("unknown statement `{other}`"))),
        }
    }
    let premise = match (&premise_name, steps.first()) {
        (Some(n), _) => graphs
            .get(n)
            .cloned()
            .ok_or_else(|| err(0, format!("unknown premise graph `{n}`")))?,
        (None, Some(s)) => s.premise.clone(),
        (None, None) => return Err(err(0, "empty derivation file")),
    };
    let conclusion = match (&conclusion_name, steps.last()) {
        (Some(n), _) => graphs
            .get(n)
            .cloned()
            .ok_or_else(|| err(0, format!("unknown conclusion graph `{n}`")))?,
        (None, Some(s)) => s.conclusion.clone(),
        (None, None) => unreachable!(),
    };
    Ok(Derivation { premise, conclusion, steps })
}
