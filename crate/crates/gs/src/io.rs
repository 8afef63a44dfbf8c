//! Text formats: the line-oriented graph format and DOT export.
//!
//! Graph format, one statement per line:
//! ```text
//! vertex <id> <atom>     # atom is `name` or `~name`
//! edge <id> <id>
//! ```
//! Blank lines and `#` comments are ignored.

use crate::graph::{Atom, LabeledGraph, VertexId};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_atom_token(tok: &str, line: usize) -> Result<Atom, ParseError> {
    let (neg, name) = match tok.strip_prefix('~') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(err(line, format!("bad atom `{tok}`")));
    }
    Ok(if neg { Atom::neg(name) } else { Atom::pos(name) })
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut g = LabeledGraph::empty();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("vertex") => {
                let id = words
                    .next()
                    .ok_or_else(|| err(lineno, "vertex needs an id"))?
                    .parse::<u32>()
                    .map_err(|_| err(lineno, "vertex id must be a number"))?;
                let atom_tok = words.next().ok_or_else(|| err(lineno, "vertex needs an atom"))?;
                let atom = parse_atom_token(atom_tok, lineno)?;
                if g.contains_vertex(VertexId(id)) {
                    return Err(err(lineno, format!("duplicate vertex {id}")));
                }
                g.add_vertex(VertexId(id), atom);
            }
            Some("edge") => {
                let a = words
                    .next()
                    .ok_or_else(|| err(lineno, "edge needs two ids"))?
                    .parse::<u32>()
                    .map_err(|_| err(lineno, "edge id must be a number"))?;
                let b = words
                    .next()
                    .ok_or_else(|| err(lineno, "edge needs two ids"))?
                    .parse::<u32>()
                    .map_err(|_| err(lineno, "edge id must be a number"))?;
                if a == b {
                    return Err(err(lineno, "self-loops are not allowed"));
                }
                let (v, w) = (VertexId(a), VertexId(b));
                if !g.contains_vertex(v) || !g.contains_vertex(w) {
                    return Err(err(lineno, format!("edge {a} {b} references unknown vertex")));
                }
                g.add_edge(v, w);
            }
            Some(other) => return Err(err(lineno, format!("unknown statement `{other}`"))),
            None => {}
        }
        if words.next().is_some() {
            return Err(err(lineno, "trailing tokens"));
        }
    }
    Ok(g)
}

pub fn print_graph(g: &LabeledGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", v, g.label(v)));
    }
    for (v, w) in g.edges() {
        out.push_str(&format!("edge {} {}\n", v, w));
    }
    out
}

/// DOT export; negative atoms are rendered with a `¬` prefix.
pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        let a = g.label(v);
        let label = match a.polarity {
            crate::graph::Polarity::Positive => a.name.clone(),
            crate::graph::Polarity::Negative => format!("¬{}", a.name),
        };
        out.push_str(&format!("  v{} [label=\"{}\"];\n", v, label));
    }
    for (v, w) in g.edges() {
        out.push_str(&format!("  v{} -- v{};\n", v, w));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "vertex 0 a\nvertex 1 ~b\nedge 0 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(print_graph(&g), text);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_graph("# a graph\n\nvertex 3 x # trailing\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_graph("vertex 0 a\nedge 0 5\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_graph("vertex 0 a\nvertex 0 b\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_graph("frob 1\n").is_err());
    }

    #[test]
    fn dot_output_shape() {
        let g = parse_graph("vertex 0 a\nvertex 1 ~a\nedge 0 1\n").unwrap();
        let dot = to_dot(&g);
        assert!(dot.contains("v0 [label=\"a\"]"));
        assert!(dot.contains("v1 [label=\"¬a\"]"));
        assert!(dot.contains("v0 -- v1;"));
    }
}
