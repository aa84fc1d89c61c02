//! Edge-list text format.
//!
//! ```text
//! n m
//! u v      (m lines, u < v, decimal, LF line endings)
//! ```
//!
//! Writing emits edges in lexicographic order, so `write(read(f)) == f` for
//! files already in that order. Reading accepts `u > v` and any edge order,
//! and tolerates a trailing newline.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = text.split_ascii_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| parse_err(line, format!("missing {what}")))?;
        tok.parse::<usize>().map_err(|_| parse_err(line, format!("bad integer {tok:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(parse_err(line, "trailing fields"));
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input: missing header"))?;
    let (n, m) = parse_pair(header, hl).map_err(|e| match e {
        Error::Parse { line, msg } => parse_err(line, format!("malformed header: {msg}")),
        other => other,
    })?;
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for (ln, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let (u, v) = parse_pair(raw, ln)?;
        if u == v {
            return Err(parse_err(ln, format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex id >= n={n}")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(parse_err(ln, format!("duplicate edge {} {}", key.0, key.1)));
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(parse_err(1, format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    std::fs::write(path, format_edge_list(g))?;
    Ok(())
}
