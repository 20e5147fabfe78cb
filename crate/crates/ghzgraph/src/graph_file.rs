//! Plain-text graph files.
//!
//! ```text
//! # comment
//! p 2 X 1 Y 5 L 4
//! 0 1 1
//! ```
//!
//! The header gives the modulus and the sizes of the input, output and
//! syndrome blocks. Each further line is an undirected edge `u v w` between
//! global vertex indices (inputs first, then outputs, then syndromes) with
//! weight `1 <= w < p`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use ghzgraph_core::{CodeGraph, FpMatrix, Prime};
use thiserror::Error;

pub const FIVE_QUBIT: &str = include_str!("../data/five_qubit.graph");
pub const FIVE_QUBIT_DECODING: &str = include_str!("../data/five_qubit_decoding.graph");

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line `p <p> X <k> Y <n> L <m>`")]
    MissingHeader,
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] ghzgraph_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> GraphFileError {
    GraphFileError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn read_graph(path: &Path) -> Result<CodeGraph, GraphFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<CodeGraph, GraphFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(GraphFileError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [kp, p, kx, x, ky, y, kl, l] = fields[..] else {
        return Err(syntax(hline, "header must read `p <p> X <k> Y <n> L <m>`"));
    };
    if (kp, kx, ky, kl) != ("p", "X", "Y", "L") {
        return Err(syntax(hline, "header must read `p <p> X <k> Y <n> L <m>`"));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| syntax(hline, format!("`{s}` is not a count")))
    };
    let p = Prime::new(num(p)? as u32).map_err(|e| syntax(hline, e.to_string()))?;
    let (x, y, l) = (num(x)?, num(y)?, num(l)?);
    let n = x + y + l;

    let mut a = FpMatrix::zeros(p, n, n);
    for (line, body) in lines {
        let f: Vec<&str> = body.split_whitespace().collect();
        let [u, v, w] = f[..] else {
            return Err(syntax(line, "edge lines have the form `u v w`"));
        };
        let idx = |s: &str| -> Result<usize, GraphFileError> {
            let i = s
                .parse::<usize>()
                .map_err(|_| syntax(line, format!("`{s}` is not a vertex index")))?;
            if i >= n {
                return Err(syntax(
                    line,
                    format!("vertex {i} out of range (graph has {n} vertices)"),
                ));
            }
            Ok(i)
        };
        let (u, v) = (idx(u)?, idx(v)?);
        let w: u32 = w
            .parse()
            .map_err(|_| syntax(line, format!("`{w}` is not a weight")))?;
        if w == 0 || w >= p.get() {
            return Err(syntax(line, format!("weight {w} outside 1..{}", p.get())));
        }
        if u == v {
            return Err(syntax(line, format!("self-loop at vertex {u}")));
        }
        match a.raw(u, v) {
            0 => {}
            old if old == w => return Err(syntax(line, format!("duplicate edge {u}-{v}"))),
            old => {
                return Err(syntax(
                    line,
                    format!("asymmetric edge {u}-{v}: weight {w} conflicts with {old}"),
                ))
            }
        }
        a.set(u, v, w)?;
        a.set(v, u, w)?;
    }
    Ok(CodeGraph::new(a, x, y, l)?)
}

/// Serializes a graph; edges are listed once each with `u < v`.
pub fn write_graph(g: &CodeGraph) -> String {
    let a = g.adjacency();
    let mut out = format!(
        "p {} X {} Y {} L {}\n",
        g.modulus(),
        g.input_count(),
        g.output_count(),
        g.syndrome_count()
    );
    for u in 0..a.rows() {
        for v in u + 1..a.cols() {
            if a.raw(u, v) != 0 {
                let _ = writeln!(out, "{u} {v} {}", a.raw(u, v));
            }
        }
    }
    out
}

/// Human-readable vertex name: `x0`, `y3`, `l1`.
pub fn vertex_name(g: &CodeGraph, v: usize) -> String {
    if g.inputs().contains(&v) {
        format!("x{v}")
    } else if g.outputs().contains(&v) {
        format!("y{}", v - g.input_count())
    } else {
        format!("l{}", v - g.input_count() - g.output_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_graphs_match_builtin() {
        assert_eq!(
            parse_graph(FIVE_QUBIT).unwrap(),
            CodeGraph::five_qubit_code()
        );
        assert_eq!(
            parse_graph(FIVE_QUBIT_DECODING).unwrap(),
            CodeGraph::five_qubit_decoding_graph()
        );
    }

    #[test]
    fn round_trip() {
        let g = CodeGraph::five_qubit_decoding_graph();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            ("p 2 X 1 Y 1 L 0\n0 0 1\n", 2, "self-loop"),
            ("p 2 X 1 Y 1 L 0\n0 1 1\n1 0 1\n", 3, "duplicate"),
            ("p 3 X 1 Y 1 L 0\n0 1 1\n1 0 2\n", 3, "asymmetric"),
            ("p 2 X 1 Y 1 L 0\n0 2 1\n", 2, "out of range"),
            ("p 2 X 1 Y 1 L 0\n0 1 2\n", 2, "weight"),
            ("\n# c\np 4 X 1 Y 1 L 0\n", 3, "not prime"),
            ("p 2 X 1 Y 1\n", 1, "header"),
        ];
        for (text, line, needle) in cases {
            match parse_graph(text) {
                Err(GraphFileError::Syntax { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_graph("# nothing\n"),
            Err(GraphFileError::MissingHeader)
        ));
    }
}
