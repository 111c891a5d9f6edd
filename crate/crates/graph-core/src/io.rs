//! Flat text formats.
//!
//! A graph file starts with `n m` and is followed by `m` lines `u v w`. An
//! update file holds one record per line: `D u v`, `I u v w` or `W u v w`.
//! Blank lines and lines starting with `#` are ignored by the parsers.

use crate::{GraphError, Update, VertexId, Weight};
use std::fmt::Write as _;

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn fields(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, GraphError> {
    s.parse().map_err(|_| parse_err(line, format!("not a number: {s:?}")))
}

pub type EdgeList = Vec<(VertexId, VertexId, Weight)>;

pub fn parse_graph(text: &str) -> Result<(usize, EdgeList), GraphError> {
    let mut rows = fields(text);
    let (line, header) = rows.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.len() != 2 {
        return Err(parse_err(line, "header must be `n m`"));
    }
    let n: usize = num(line, header[0])?;
    let m: usize = num(line, header[1])?;
    let mut edges = Vec::with_capacity(m);
    for (line, f) in rows {
        if f.len() != 3 {
            return Err(parse_err(line, "edge line must be `u v w`"));
        }
        let (u, v, w): (VertexId, VertexId, Weight) = (num(line, f[0])?, num(line, f[1])?, num(line, f[2])?);
        if u >= n || v >= n {
            return Err(parse_err(line, format!("endpoint out of range for n = {n}")));
        }
        if w == 0 {
            return Err(parse_err(line, "weights must be positive"));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header promises {m} edges, found {}", edges.len())));
    }
    Ok((n, edges))
}

pub fn write_graph(n: usize, edges: &[(VertexId, VertexId, Weight)]) -> String {
    let mut s = format!("{n} {}\n", edges.len());
    for &(u, v, w) in edges {
        let _ = writeln!(s, "{u} {v} {w}");
    }
    s
}

pub fn parse_updates(text: &str) -> Result<Vec<Update>, GraphError> {
    fields(text)
        .map(|(line, f)| match (f.first().copied(), f.len()) {
            (Some("D"), 3) => Ok(Update::Delete {
                u: num(line, f[1])?,
                v: num(line, f[2])?,
            }),
            (Some("I"), 4) => Ok(Update::Insert {
                u: num(line, f[1])?,
                v: num(line, f[2])?,
                w: num(line, f[3])?,
            }),
            (Some("W"), 4) => Ok(Update::IncreaseWeight {
                u: num(line, f[1])?,
                v: num(line, f[2])?,
                w: num(line, f[3])?,
            }),
            _ => Err(parse_err(line, "expected `D u v`, `I u v w` or `W u v w`")),
        })
        .collect()
}

pub fn write_updates(updates: &[Update]) -> String {
    let mut s = String::new();
    for u in updates {
        let _ = match *u {
            Update::Delete { u, v } => writeln!(s, "D {u} {v}"),
            Update::Insert { u, v, w } => writeln!(s, "I {u} {v} {w}"),
            Update::IncreaseWeight { u, v, w } => writeln!(s, "W {u} {v} {w}"),
        };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let edges = vec![(0, 1, 1), (1, 2, 7), (2, 0, 3)];
        let text = write_graph(3, &edges);
        assert_eq!(text, "3 3\n0 1 1\n1 2 7\n2 0 3\n");
        assert_eq!(parse_graph(&text).unwrap(), (3, edges));
    }

    #[test]
    fn update_round_trip() {
        let ups = vec![
            Update::Delete { u: 0, v: 1 },
            Update::Insert { u: 2, v: 3, w: 4 },
            Update::IncreaseWeight { u: 1, v: 2, w: 9 },
        ];
        let text = write_updates(&ups);
        assert_eq!(parse_updates(&text).unwrap(), ups);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("2 1\n0 5 1\n").is_err());
        assert!(parse_graph("2 2\n0 1 1\n").is_err());
        assert!(parse_graph("2 1\n0 1 0\n").is_err());
        assert!(parse_updates("X 1 2\n").is_err());
        assert!(parse_updates("D 1\n").is_err());
    }
}
