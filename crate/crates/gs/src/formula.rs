//! Formulas over par and tensor with a self-dual unit, their ASCII and
//! Unicode syntax, and the correspondence with cographs.

use crate::canon::canonical_form;
use crate::graph::{Atom, LabeledGraph};
use crate::mdtree::{decompose, MDTree};
use std::fmt;

/// Negation normal form is enforced by construction: negation appears
/// only on atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Unit,
    Literal(Atom),
    Par(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn pos(name: &str) -> Formula {
        Formula::Literal(Atom::pos(name))
    }

    pub fn neg(name: &str) -> Formula {
        Formula::Literal(Atom::neg(name))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    /// De Morgan negation; the unit is self-dual.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Unit => Formula::Unit,
            Formula::Literal(a) => Formula::Literal(a.dual()),
            Formula::Par(l, r) => Formula::tensor(l.negate(), r.negate()),
            Formula::Tensor(l, r) => Formula::par(l.negate(), r.negate()),
        }
    }

    pub fn is_unit_free(&self) -> bool {
        match self {
            Formula::Unit => false,
            Formula::Literal(_) => true,
            Formula::Par(l, r) | Formula::Tensor(l, r) => l.is_unit_free() && r.is_unit_free(),
        }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            Formula::Unit => 0,
            Formula::Literal(_) => 1,
            Formula::Par(l, r) | Formula::Tensor(l, r) => l.literal_count() + r.literal_count(),
        }
    }

    /// Pretty-printer mirroring the usual connective glyphs.
    pub fn unicode(&self) -> String {
        match self {
            Formula::Unit => "∘".to_string(),
            Formula::Literal(a) => match a.polarity {
                crate::graph::Polarity::Positive => a.name.clone(),
                crate::graph::Polarity::Negative => format!("¬{}", a.name),
            },
            Formula::Par(l, r) => format!("({} ⅋ {})", l.unicode(), r.unicode()),
            Formula::Tensor(l, r) => format!("({} ⊗ {})", l.unicode(), r.unicode()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: | lowest, * above it, literals/unit atomic
        fn go(phi: &Formula, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match phi {
                Formula::Unit => write!(f, "1"),
                Formula::Literal(a) => write!(f, "{a}"),
                Formula::Par(l, r) => {
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
                Formula::Tensor(l, r) => {
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
            }
        }
        go(self, 0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for FormulaParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for FormulaParseError {}

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

    fn fail(&self, message: impl Into<String>) -> FormulaParseError {
        FormulaParseError { position: self.pos, message: message.into() }
    }

    // expr := term ('|' term)*
    fn expr(&mut self) -> Result<Formula, FormulaParseError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            acc = Formula::par(acc, self.term()?);
        }
        Ok(acc)
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Formula, FormulaParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Formula::tensor(acc, self.factor()?);
        }
        Ok(acc)
    }

    // factor := '~' factor | '1' | ident | '(' expr ')'
    fn factor(&mut self) -> Result<Formula, FormulaParseError> {
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
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::Unit)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Formula::pos(name))
            }
            _ => Err(self.fail("expected a formula")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let phi = p.expr()?;
    if p.peek().is_some() {
        return Err(p.fail("unexpected trailing input"));
    }
    Ok(phi)
}

/// The graph denoted by a formula: the unit is the empty graph, literals
/// are single vertices, par is union, tensor is join.
pub fn to_graph(phi: &Formula) -> LabeledGraph {
    match phi {
        Formula::Unit => LabeledGraph::empty(),
        Formula::Literal(a) => LabeledGraph::single(a.clone()),
        Formula::Par(l, r) => to_graph(l).par(&to_graph(r)),
        Formula::Tensor(l, r) => to_graph(l).tensor(&to_graph(r)),
    }
}

/// Inverse direction: succeeds exactly on cographs.
pub fn from_cograph(g: &LabeledGraph) -> Option<Formula> {
    if g.is_empty() {
        return Some(Formula::Unit);
    }
    fn of_tree(t: &MDTree) -> Option<Formula> {
        match t {
            MDTree::Leaf(_, atom) => Some(Formula::Literal(atom.clone())),
            MDTree::Par(cs) => {
                let mut parts = cs.iter().map(of_tree);
                let first = parts.next().unwrap()?;
                parts.try_fold(first, |acc, p| Some(Formula::par(acc, p?)))
            }
            MDTree::Tensor(cs) => {
                let mut parts = cs.iter().map(of_tree);
                let first = parts.next().unwrap()?;
                parts.try_fold(first, |acc, p| Some(Formula::tensor(acc, p?)))
            }
            MDTree::Prime { .. } => None,
        }
    }
    of_tree(&decompose(g).expect("non-empty"))
}

/// Structural equivalence, decided on the graph side: two formulas are
/// equivalent iff their graphs are isomorphic.
pub fn struct_equiv(phi: &Formula, psi: &Formula) -> bool {
    let a = canonical_form(&to_graph(phi), 64).expect("formula-sized graph");
    let b = canonical_form(&to_graph(psi), 64).expect("formula-sized graph");
    a == b
}
