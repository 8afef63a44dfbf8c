//! One-sided sequent prover for unit-free multiplicative linear logic
//! with mix, extended with the 4-ary partition connective G4 and its
//! computed dual. The dual's rules are generated mechanically from the
//! orthogonal complement of G4's partition set, never transcribed by
//! hand. Used for conservativity cross-checks against the graph prover.

use crate::connectives::{g4_set, orthogonal_complement, Partition};
use crate::formula::Formula;
use crate::graph::Atom;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenFormula {
    Lit(Atom),
    Par(Box<GenFormula>, Box<GenFormula>),
    Tensor(Box<GenFormula>, Box<GenFormula>),
    /// The generalised connective with rules {1,2|3,4} and {1,4|2,3}.
    G4([Box<GenFormula>; 4]),
    /// Its dual, with rules from the computed orthogonal partitions.
    NotG4([Box<GenFormula>; 4]),
}

impl GenFormula {
    pub fn lit(atom: Atom) -> GenFormula {
        GenFormula::Lit(atom)
    }

    pub fn par(a: GenFormula, b: GenFormula) -> GenFormula {
        GenFormula::Par(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: GenFormula, b: GenFormula) -> GenFormula {
        GenFormula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn g4(args: [GenFormula; 4]) -> GenFormula {
        GenFormula::G4(args.map(Box::new))
    }

    pub fn not_g4(args: [GenFormula; 4]) -> GenFormula {
        GenFormula::NotG4(args.map(Box::new))
    }

    pub fn negate(&self) -> GenFormula {
        match self {
            GenFormula::Lit(a) => GenFormula::Lit(a.dual()),
            GenFormula::Par(l, r) => GenFormula::tensor(l.negate(), r.negate()),
            GenFormula::Tensor(l, r) => GenFormula::par(l.negate(), r.negate()),
            GenFormula::G4(args) => {
                GenFormula::NotG4(args.clone().map(|a| Box::new(a.negate())))
            }
            GenFormula::NotG4(args) => {
                GenFormula::G4(args.clone().map(|a| Box::new(a.negate())))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GenFormula::Lit(_) => 1,
            GenFormula::Par(l, r) | GenFormula::Tensor(l, r) => 1 + l.size() + r.size(),
            GenFormula::G4(args) | GenFormula::NotG4(args) => {
                1 + args.iter().map(|a| a.size()).sum::<usize>()
            }
        }
    }

    pub fn from_formula(phi: &Formula) -> Result<GenFormula, UnitError> {
        match phi {
            Formula::Unit => Err(UnitError),
            Formula::Literal(a) => Ok(GenFormula::Lit(a.clone())),
            Formula::Par(l, r) => Ok(GenFormula::par(
                GenFormula::from_formula(l)?,
                GenFormula::from_formula(r)?,
            )),
            Formula::Tensor(l, r) => Ok(GenFormula::tensor(
                GenFormula::from_formula(l)?,
                GenFormula::from_formula(r)?,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitError;

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the sequent system is unit-free")
    }
}

impl std::error::Error for UnitError {}

impl fmt::Display for GenFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(x: &GenFormula, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match x {
                GenFormula::Lit(a) => write!(f, "{a}"),
                GenFormula::Par(l, r) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(l, 1, f)?;
                    write!(f, "|")?;
                    go(r, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                GenFormula::Tensor(l, r) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(l, 2, f)?;
                    write!(f, "*")?;
                    go(r, 1, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                GenFormula::G4(args) => {
                    write!(f, "G4(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        go(a, 0, f)?;
                    }
                    write!(f, ")")
                }
                GenFormula::NotG4(args) => {
                    write!(f, "~G4(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        go(&a.negate(), 0, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        go(self, 0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SeqParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SeqParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail(&self, m: impl Into<String>) -> SeqParseError {
        SeqParseError { position: self.pos, message: m.into() }
    }

    fn expr(&mut self) -> Result<GenFormula, SeqParseError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            acc = GenFormula::par(acc, self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GenFormula, SeqParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = GenFormula::tensor(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GenFormula, SeqParseError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(self.factor()?.negate())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.fail("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "G4" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = Vec::with_capacity(4);
                    loop {
                        args.push(self.expr()?);
                        match self.peek() {
                            Some(b',') => self.pos += 1,
                            Some(b')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.fail("expected `,` or `)`")),
                        }
                    }
                    let args: [GenFormula; 4] = args
                        .try_into()
                        .map_err(|_| self.fail("G4 takes exactly 4 arguments"))?;
                    Ok(GenFormula::g4(args))
                } else {
                    Ok(GenFormula::Lit(Atom::pos(name)))
                }
            }
            _ => Err(self.fail("expected a formula")),
        }
    }
}

pub fn parse_gen_formula(text: &str) -> Result<GenFormula, SeqParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.fail("unexpected trailing input"));
    }
    Ok(out)
}

/// Comma-separated formulas.
pub fn parse_sequent(text: &str) -> Result<Sequent, SeqParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut formulas = vec![p.expr()?];
    while p.peek() == Some(b',') {
        p.pos += 1;
        formulas.push(p.expr()?);
    }
    if p.peek().is_some() {
        return Err(p.fail("unexpected trailing input"));
    }
    Ok(Sequent::new(formulas))
}

/// Multiset of formulas; kept sorted so equal multisets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent(Vec<GenFormula>);

impl Sequent {
    pub fn new(mut formulas: Vec<GenFormula>) -> Sequent {
        formulas.sort();
        Sequent(formulas)
    }

    pub fn formulas(&self) -> &[GenFormula] {
        &self.0
    }

    fn without_plus(&self, idx: usize, add: Vec<GenFormula>) -> Sequent {
        let mut fs: Vec<GenFormula> = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, f)| f.clone())
            .collect();
        fs.extend(add);
        Sequent::new(fs)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ProofTree {
    pub rule: String,
    pub sequent: Sequent,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn render(&self) -> String {
        let mut out = String::new();
        fn go(t: &ProofTree, depth: usize, out: &mut String) {
            for p in &t.premises {
                go(p, depth + 1, out);
            }
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!("[{}] |- {}\n", t.rule, t.sequent));
        }
        go(self, 0, &mut out);
        out
    }
}

fn g4_partitions() -> &'static Vec<Partition> {
    static CELL: OnceLock<Vec<Partition>> = OnceLock::new();
    CELL.get_or_init(|| g4_set().parts.into_iter().collect())
}

fn not_g4_partitions() -> &'static Vec<Partition> {
    static CELL: OnceLock<Vec<Partition>> = OnceLock::new();
    CELL.get_or_init(|| {
        orthogonal_complement(&g4_set())
            .expect("n = 4")
            .parts
            .into_iter()
            .collect()
    })
}

/// Exhaustive backward proof search with memoization on the sequent.
pub struct SequentProver {
    memo: std::sync::Mutex<HashMap<Sequent, Option<ProofTree>>>,
}

impl Default for SequentProver {
    fn default() -> Self {
        SequentProver { memo: std::sync::Mutex::new(HashMap::new()) }
    }
}

impl SequentProver {
    pub fn new() -> SequentProver {
        SequentProver::default()
    }

    pub fn prove(&self, seq: &Sequent) -> Option<ProofTree> {
        if let Some(hit) = self.memo.lock().unwrap().get(seq) {
            return hit.clone();
        }
        let result = self.prove_uncached(seq);
        self.memo.lock().unwrap().insert(seq.clone(), result.clone());
        result
    }

    fn prove_uncached(&self, seq: &Sequent) -> Option<ProofTree> {
        let fs = seq.formulas();
        // axiom
        if fs.len() == 2 {
            if let (GenFormula::Lit(a), GenFormula::Lit(b)) = (&fs[0], &fs[1]) {
                if a.is_dual_of(b) {
                    return Some(ProofTree {
                        rule: "ax".to_string(),
                        sequent: seq.clone(),
                        premises: Vec::new(),
                    });
                }
            }
        }
        // par is invertible: apply the first one eagerly
        for (i, f) in fs.iter().enumerate() {
            if let GenFormula::Par(l, r) = f {
                let premise = seq.without_plus(i, vec![(**l).clone(), (**r).clone()]);
                return self.prove(&premise).map(|p| ProofTree {
                    rule: "par".to_string(),
                    sequent: seq.clone(),
                    premises: vec![p],
                });
            }
        }
        // tensor: split the context every possible way
        for (i, f) in fs.iter().enumerate() {
            if let GenFormula::Tensor(l, r) = f {
                let context: Vec<GenFormula> = fs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                let k = context.len();
                for mask in 0u64..(1 << k) {
                    let mut left = vec![(**l).clone()];
                    let mut right = vec![(**r).clone()];
                    for (j, g) in context.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            left.push(g.clone());
                        } else {
                            right.push(g.clone());
                        }
                    }
                    if let (Some(pl), Some(pr)) = (
                        self.prove(&Sequent::new(left)),
                        self.prove(&Sequent::new(right)),
                    ) {
                        return Some(ProofTree {
                            rule: "tensor".to_string(),
                            sequent: seq.clone(),
                            premises: vec![pl, pr],
                        });
                    }
                }
            }
        }
        // generalised connectives: one rule per partition, contexts
        // distributed over the premises every possible way
        for (i, f) in fs.iter().enumerate() {
            let (args, partitions, tag) = match f {
                GenFormula::G4(args) => (args, g4_partitions(), "G4"),
                GenFormula::NotG4(args) => (args, not_g4_partitions(), "~G4"),
                _ => continue,
            };
            let context: Vec<GenFormula> = fs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            for partition in partitions {
                let blocks = partition.blocks();
                let nb = blocks.len();
                let mut assign = vec![0usize; context.len()];
                'assignments: loop {
                    let mut premise_formulas: Vec<Vec<GenFormula>> = blocks
                        .iter()
                        .map(|block| {
                            block
                                .iter()
                                .map(|&x| (*args[x - 1]).clone())
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    for (j, g) in context.iter().enumerate() {
                        premise_formulas[assign[j]].push(g.clone());
                    }
                    let proofs: Option<Vec<ProofTree>> = premise_formulas
                        .into_iter()
                        .map(|fs| self.prove(&Sequent::new(fs)))
                        .collect();
                    if let Some(premises) = proofs {
                        return Some(ProofTree {
                            rule: format!("{tag}{partition}"),
                            sequent: seq.clone(),
                            premises,
                        });
                    }
                    let mut k = 0;
                    loop {
                        if k == assign.len() {
                            break 'assignments;
                        }
                        assign[k] += 1;
                        if assign[k] < nb {
                            break;
                        }
                        assign[k] = 0;
                        k += 1;
                    }
                    if assign.is_empty() {
                        break;
                    }
                }
            }
        }
        // mix: split into two non-empty halves; fix the first formula on
        // the left to halve the symmetry
        if fs.len() >= 2 {
            let k = fs.len() - 1;
            for mask in 0u64..(1 << k) {
                let mut left = vec![fs[0].clone()];
                let mut right = Vec::new();
                for j in 0..k {
                    if mask & (1 << j) != 0 {
                        left.push(fs[j + 1].clone());
                    } else {
                        right.push(fs[j + 1].clone());
                    }
                }
                if right.is_empty() {
                    continue;
                }
                if let (Some(pl), Some(pr)) = (
                    self.prove(&Sequent::new(left)),
                    self.prove(&Sequent::new(right)),
                ) {
                    return Some(ProofTree {
                        rule: "mix".to_string(),
                        sequent: seq.clone(),
                        premises: vec![pl, pr],
                    });
                }
            }
        }
        None
    }
}

/// Prove a plain multiplicative sequent.
pub fn prove_mll(seq: &Sequent) -> Option<ProofTree> {
    SequentProver::new().prove(seq)
}

/// Prove a sequent that may use the generalised connective and its
/// computed dual; the same exhaustive engine with the partition rules
/// enabled.
pub fn prove_mll_g4(seq: &Sequent) -> Option<ProofTree> {
    SequentProver::new().prove(seq)
}

#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub formula: Formula,
    pub sequent_provable: bool,
    pub graph_provable: bool,
}

impl AgreementReport {
    pub fn agree(&self) -> bool {
        self.sequent_provable == self.graph_provable
    }
}

/// Compare the sequent prover and the graph prover on a unit-free
/// formula; conservativity says they always agree.
pub fn conservativity_check(
    prover: &crate::prover::Prover,
    phi: &Formula,
) -> Result<AgreementReport, String> {
    let gen = GenFormula::from_formula(phi).map_err(|e| e.to_string())?;
    let sequent_provable = prove_mll(&Sequent::new(vec![gen])).is_some();
    let graph = crate::formula::to_graph(phi);
    let graph_provable = match prover.prove(&graph) {
        crate::prover::Outcome::Proved(_) => true,
        crate::prover::Outcome::Refuted => false,
        crate::prover::Outcome::LimitExceeded(m) => return Err(m),
    };
    Ok(AgreementReport { formula: phi.clone(), sequent_provable, graph_provable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::prover::{Prover, ProverConfig};

    fn provable(s: &str) -> bool {
        prove_mll(&parse_sequent(s).unwrap()).is_some()
    }

    #[test]
    fn axioms_and_small_sequents() {
        assert!(provable("a, ~a"));
        assert!(!provable("a, a"));
        assert!(!provable("a"));
        assert!(provable("(~a|a)*(b|~b)"));
        assert!(!provable("(~a*b)|(a*~b)"));
    }

    #[test]
    fn mix_makes_tensor_imply_par() {
        // whenever phi * psi is provable, so is phi | psi
        for (t, p) in [("(a|~a)*(b|~b)", "(a|~a)|(b|~b)")] {
            assert!(provable(t));
            assert!(provable(p));
        }
        // and mix proves disjoint unions
        assert!(provable("a|~a, b|~b"));
    }

    #[test]
    fn g4_provable_against_dual_block_formulas() {
        // pairing G4 with the dualised formula of one of its own
        // partitions closes by construction
        assert!(provable("G4(a,b,c,d), (~a*~b)|(~c*~d)"));
        assert!(provable("G4(a,b,c,d), (~a*~d)|(~b*~c)"));
        // the computed dual rules fire
        assert!(provable("~G4(~a,~b,~c,~d), (~a*~c)|~b|~d"));
    }

    #[test]
    fn g4_identity_fails_packaging() {
        // the dual pair cannot be packaged in the sequent calculus
        assert!(!provable("G4(a,b,c,d), ~G4(~a,~b,~c,~d)"));
    }

    #[test]
    fn g4_separation_sequents_fail() {
        let rows = [
            "G4(a,b,c,d), ~c|(~d*(~a|~b))",
            "G4(a,b,c,d), ~d|(~c*(~a|~b))",
            "G4(a,b,c,d), ~a|(~c*(~b|~d))",
            "G4(a,b,c,d), ~c|(~a*(~b|~d))",
            "G4(a,b,c,d), ~a|(~d*(~b|~c))",
            "G4(a,b,c,d), ~d|(~a*(~b|~c))",
        ];
        for row in rows {
            assert!(!provable(row), "{row} should be unprovable");
        }
    }

    #[test]
    fn negation_round_trip() {
        let f = parse_gen_formula("G4(a,~b,c*d,~(e|f))").unwrap();
        assert_eq!(f.negate().negate(), f);
        let printed = f.to_string();
        assert_eq!(parse_gen_formula(&printed).unwrap(), f);
    }

    #[test]
    fn conservativity_on_named_formulas() {
        let prover = Prover::new(ProverConfig::default());
        for (s, expected) in [("(~a|a)*(b|~b)", true), ("(~a*b)|(a*~b)", false)] {
            let phi = parse_formula(s).unwrap();
            let report = conservativity_check(&prover, &phi).unwrap();
            assert!(report.agree());
            assert_eq!(report.graph_provable, expected);
        }
    }

    #[test]
    fn unit_rejected() {
        let phi = parse_formula("a*1").unwrap();
        let prover = Prover::new(ProverConfig::default());
        assert!(conservativity_check(&prover, &phi).is_err());
    }
}
