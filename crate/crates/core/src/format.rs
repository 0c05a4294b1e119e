//! Plain-text graph format.
//!
//! ```text
//! # comment
//! n m
//! u v w [F]
//! ```
//!
//! The header gives the vertex and edge counts, followed by exactly `m` edge
//! lines with 0-based endpoints, an integer weight, and an optional literal
//! `F` marking a forced edge. Parallel edges and self-loops are allowed.
//! Everything after a `#` is ignored.

use std::fmt::Write as _;

use crate::error::GraphError;
use crate::graph::{EdgeSpec, GraphSpec};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

pub fn parse_graph(text: &str) -> Result<GraphSpec, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n m` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad vertex count `{}`", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad edge count `{}`", fields[1])))?;

    let mut spec = GraphSpec::new(n);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if spec.edges.len() == m {
            return Err(parse_err(lineno, format!("more than {m} edge lines")));
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 3 || f.len() > 4 {
            return Err(parse_err(lineno, "edge line must be `u v w [F]`"));
        }
        let endpoint = |s: &str| -> Result<usize, GraphError> {
            let x: usize = s.parse().map_err(|_| parse_err(lineno, format!("bad vertex `{s}`")))?;
            if x >= n {
                return Err(parse_err(lineno, format!("vertex {x} out of range (n = {n})")));
            }
            Ok(x)
        };
        let u = endpoint(f[0])?;
        let v = endpoint(f[1])?;
        let weight = f[2]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad weight `{}`", f[2])))?;
        let forced = match f.get(3) {
            None => false,
            Some(&"F") => true,
            Some(other) => return Err(parse_err(lineno, format!("unexpected token `{other}`"))),
        };
        spec.edges.push(EdgeSpec { u, v, weight, forced });
    }
    if spec.edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("expected {m} edge lines, found {}", spec.edges.len()),
        ));
    }
    Ok(spec)
}

pub fn write_graph(spec: &GraphSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", spec.vertex_count, spec.edges.len());
    for e in &spec.edges {
        let _ = write!(out, "{} {} {}", e.u, e.v, e.weight);
        if e.forced {
            out.push_str(" F");
        }
        out.push('\n');
    }
    out
}
