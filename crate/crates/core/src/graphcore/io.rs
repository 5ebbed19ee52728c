//! Text graph format:
//!
//! ```text
//! c optional comment lines
//! p <n> <m>
//! e <u> <v>      (exactly m lines, 0 <= u < v < n)
//! ```
//!
//! Tokens are ASCII decimal separated by single spaces; lines end in LF.

use super::Graph;
use crate::error::{Error, Result};
use std::fmt::Write as _;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("expected a decimal number, got {tok:?}")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, format!("number {tok} out of range")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let body = text.strip_suffix('\n').unwrap_or(text);
    for (idx, raw) in body.split('\n').enumerate() {
        let line = idx + 1;
        if raw.contains('\r') {
            return Err(parse_err(line, "CR line ending"));
        }
        if raw.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = raw.split(' ').collect();
        match toks.as_slice() {
            ["p", n, m] => {
                if header.is_some() {
                    return Err(parse_err(line, "second header line"));
                }
                header = Some((number(n, line)?, number(m, line)?));
            }
            ["e", u, v] => {
                let Some((n, _)) = header else {
                    return Err(parse_err(line, "edge before header"));
                };
                let (u, v) = (number(u, line)?, number(v, line)?);
                if u >= v {
                    return Err(parse_err(line, format!("edge {u} {v} must have u < v")));
                }
                if v >= n {
                    return Err(parse_err(line, format!("vertex {v} out of range for n = {n}")));
                }
                edges.push((u, v));
            }
            _ => return Err(parse_err(line, format!("unrecognised line {raw:?}"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(parse_err(1, "missing header line"));
    };
    if edges.len() != m {
        return Err(parse_err(
            body.split('\n').count(),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges).map_err(|e| parse_err(0, e.to_string()))
}

/// Canonical serialisation: header then edges in lexicographic order.
pub fn write_graph(g: &Graph) -> String {
    let mut s = String::with_capacity(16 + 12 * g.m());
    let _ = writeln!(s, "p {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "e {u} {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = Graph::petersen();
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn comments_and_strictness() {
        let g = parse_graph("c hello\np 3 2\ne 0 1\nc mid\ne 1 2\n").unwrap();
        assert_eq!(g.m(), 2);
        assert!(parse_graph("p 3 1\ne 1 0\n").is_err());
        assert!(parse_graph("p 3 2\ne 0 1\n").is_err());
        assert!(parse_graph("p 3 2\ne 0 1\ne 0 1\n").is_err());
        assert!(parse_graph("p 3 1\ne  0 1\n").is_err());
        assert!(parse_graph("p 3 1\r\ne 0 1\n").is_err());
        assert!(parse_graph("e 0 1\n").is_err());
        assert!(parse_graph("p 2 1\ne 0 2\n").is_err());
    }
}
