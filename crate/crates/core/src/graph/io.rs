//! Plain-text graph and family files.
//!
//! A graph file is a header line `n m` followed by `m` lines `u v` with
//! `u < v < n`. Writers emit edges in lexicographic order, so writing the
//! same graph twice yields identical bytes. A family file is a sequence of
//! records, each a line `graph NAME n m` followed by `m` edge lines.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: edge ({u}, {v}) out of range for {n} vertices")]
    OutOfRange { line: usize, u: usize, v: usize, n: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("line {line}: duplicate graph name {name:?}")]
    DuplicateName { line: usize, name: String },
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.edge_count());
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(ParseError::Malformed {
            line: 1,
            message: "missing header".into(),
        })?;
    let (n, m) = parse_pair(header, line_no)?;
    let g = read_edges(&mut lines, n, m)?;
    if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(ParseError::Malformed {
            line,
            message: "trailing content after the last edge".into(),
        });
    }
    Ok(g)
}

pub fn write_family(family: &[(String, Graph)]) -> String {
    let mut out = String::new();
    for (name, g) in family {
        write!(out, "graph {name} ").unwrap();
        out.push_str(&write_graph(g));
    }
    out
}

pub fn parse_family(text: &str) -> Result<Vec<(String, Graph)>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut out = Vec::new();
    let mut names = HashSet::new();
    loop {
        let Some((line_no, header)) = lines.by_ref().find(|(_, l)| !l.trim().is_empty()) else {
            break;
        };
        let mut parts = header.split_whitespace();
        if parts.next() != Some("graph") {
            return Err(ParseError::Malformed {
                line: line_no,
                message: "expected `graph NAME n m`".into(),
            });
        }
        let name = parts.next().ok_or(ParseError::Malformed {
            line: line_no,
            message: "missing graph name".into(),
        })?;
        if !is_identifier(name) {
            return Err(ParseError::Malformed {
                line: line_no,
                message: format!("invalid graph name {name:?}"),
            });
        }
        let rest: Vec<&str> = parts.collect();
        if rest.len() != 2 {
            return Err(ParseError::Malformed {
                line: line_no,
                message: "expected `graph NAME n m`".into(),
            });
        }
        let (n, m) = parse_pair(&rest.join(" "), line_no)?;
        if !names.insert(name.to_string()) {
            return Err(ParseError::DuplicateName {
                line: line_no,
                name: name.to_string(),
            });
        }
        let g = read_edges(&mut lines, n, m)?;
        out.push((name.to_string(), g));
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<usize, ParseError> {
        let tok = tok.ok_or(ParseError::Malformed {
            line: line_no,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| ParseError::Malformed {
            line: line_no,
            message: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(ParseError::Malformed {
            line: line_no,
            message: "expected exactly two integers".into(),
        });
    }
    Ok((a, b))
}

fn read_edges<'a, I>(lines: &mut I, n: usize, m: usize) -> Result<Graph, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut b = GraphBuilder::new(n);
    let mut seen = HashSet::with_capacity(m);
    for found in 0..m {
        let Some((line, text)) = lines.next() else {
            return Err(ParseError::EdgeCountMismatch { expected: m, found });
        };
        if text.trim().is_empty() || text.trim_start().starts_with("graph") {
            return Err(ParseError::EdgeCountMismatch { expected: m, found });
        }
        let (u, v) = parse_pair(text, line)?;
        if u >= v || v >= n {
            return Err(ParseError::OutOfRange { line, u, v, n });
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
        b.add_edge_unchecked(u, v);
    }
    Ok(b.build())
}
