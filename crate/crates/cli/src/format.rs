//! Line-oriented instance format.
//!
//! ```text
//! c optional comment
//! p fvs <n> <m>
//! <u> <v>        (m lines, 1-based; `v v` is a self-loop)
//! ```
//!
//! Comments may appear anywhere. Blank lines are ignored. Repeated lines are
//! parallel edges.

use std::fmt::Write as _;

use fvs_kernel::{MultiGraph, VertexId};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected header `p fvs <n> <m>`")]
    BadHeader { line: usize },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: edge before header")]
    EdgeBeforeHeader { line: usize },
    #[error("line {line}: expected two vertex ids")]
    BadEdge { line: usize },
    #[error("line {line}: vertex {value} outside 1..={n}")]
    OutOfRange { line: usize, value: u64, n: usize },
    #[error("line {line}: more than {expected} edge lines")]
    TooManyEdges { line: usize, expected: usize },
    #[error("expected {expected} edge lines, found {found}")]
    TooFewEdges { expected: usize, found: usize },
    #[error("missing header")]
    MissingHeader,
}

/// A parsed instance. Vertex `i` of the file is `VertexId(i - 1)`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: MultiGraph,
    pub comments: Vec<String>,
}

pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut graph: Option<(MultiGraph, usize)> = None;
    let mut comments = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            comments.push(trimmed[1..].trim().to_string());
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        if trimmed.starts_with('p') {
            if graph.is_some() {
                return Err(ParseError::DuplicateHeader { line });
            }
            let bad = ParseError::BadHeader { line };
            if tokens.next() != Some("p") || tokens.next() != Some("fvs") {
                return Err(bad);
            }
            let n: usize = parse_num(tokens.next()).ok_or(bad.clone())?;
            let m: usize = parse_num(tokens.next()).ok_or(bad.clone())?;
            if tokens.next().is_some() || n > u32::MAX as usize {
                return Err(bad);
            }
            graph = Some((MultiGraph::with_vertices(n), m));
            continue;
        }
        let Some((g, m)) = graph.as_mut() else {
            return Err(ParseError::EdgeBeforeHeader { line });
        };
        let (Some(u), Some(v), None) = (
            parse_num::<u64>(tokens.next()),
            parse_num::<u64>(tokens.next()),
            tokens.next(),
        ) else {
            return Err(ParseError::BadEdge { line });
        };
        if g.edge_count() == *m {
            return Err(ParseError::TooManyEdges { line, expected: *m });
        }
        let n = g.vertex_count();
        let id = |value: u64| {
            if value == 0 || value > n as u64 {
                Err(ParseError::OutOfRange { line, value, n })
            } else {
                Ok(VertexId(value as u32 - 1))
            }
        };
        g.add_edge(id(u)?, id(v)?).expect("endpoints checked");
    }
    let (graph, m) = graph.ok_or(ParseError::MissingHeader)?;
    if graph.edge_count() != m {
        return Err(ParseError::TooFewEdges {
            expected: m,
            found: graph.edge_count(),
        });
    }
    Ok(Instance { graph, comments })
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>) -> Option<T> {
    tok?.parse().ok()
}

/// Writes `g` with vertices renumbered densely in ascending id order, edges in
/// ascending id order. Returns the text and, for each written vertex `i`
/// (1-based), the graph vertex it came from at index `i - 1`.
pub fn emit(g: &MultiGraph, comments: &[String]) -> (String, Vec<VertexId>) {
    let (dense, old_of_new) = g.compacted();
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p fvs {} {}", dense.vertex_count(), dense.edge_count()).unwrap();
    for (_, a, b) in dense.edges() {
        writeln!(out, "{} {}", a.0 + 1, b.0 + 1).unwrap();
    }
    (out, old_of_new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(g: &MultiGraph) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = g
            .edges()
            .map(|(_, a, b)| (a.0.min(b.0), a.0.max(b.0)))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn triangle() {
        let inst = parse("p fvs 3 3\n1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(pairs(&inst.graph), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn double_edge_and_loop() {
        let g = parse("p fvs 2 2\n1 2\n1 2\n").unwrap().graph;
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 2);
        let g = parse("c hi\np fvs 1 1\n\n1 1\n").unwrap().graph;
        assert!(g.has_self_loop(VertexId(0)));
        assert_eq!(g.degree(VertexId(0)), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse("p fvs 2 1\n1 3\n").unwrap_err(),
            ParseError::OutOfRange {
                line: 2,
                value: 3,
                n: 2
            }
        );
        assert_eq!(
            parse("p fvs 2 1\n0 1\n").unwrap_err(),
            ParseError::OutOfRange {
                line: 2,
                value: 0,
                n: 2
            }
        );
        assert_eq!(
            parse("p fvs 2 x\n").unwrap_err(),
            ParseError::BadHeader { line: 1 }
        );
        assert_eq!(
            parse("p edge 2 1\n").unwrap_err(),
            ParseError::BadHeader { line: 1 }
        );
        assert_eq!(
            parse("1 2\n").unwrap_err(),
            ParseError::EdgeBeforeHeader { line: 1 }
        );
        assert_eq!(
            parse("p fvs 2 1\n1\n").unwrap_err(),
            ParseError::BadEdge { line: 2 }
        );
        assert_eq!(
            parse("p fvs 2 1\n1 2 3\n").unwrap_err(),
            ParseError::BadEdge { line: 2 }
        );
        assert_eq!(
            parse("p fvs 2 1\n1 2\n2 1\n").unwrap_err(),
            ParseError::TooManyEdges {
                line: 3,
                expected: 1
            }
        );
        assert_eq!(
            parse("p fvs 2 2\n1 2\n").unwrap_err(),
            ParseError::TooFewEdges {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(parse("c only\n").unwrap_err(), ParseError::MissingHeader);
        assert_eq!(
            parse("p fvs 1 0\np fvs 1 0\n").unwrap_err(),
            ParseError::DuplicateHeader { line: 2 }
        );
    }

    #[test]
    fn emit_skips_removed_vertices() {
        let mut g = MultiGraph::with_vertices(4);
        g.add_edge(VertexId(1), VertexId(3)).unwrap();
        g.add_edge(VertexId(3), VertexId(3)).unwrap();
        g.remove_vertex(VertexId(2)).unwrap();
        let (text, map) = emit(&g, &["x 1".into()]);
        assert_eq!(text, "c x 1\np fvs 3 2\n2 3\n3 3\n");
        assert_eq!(map, vec![VertexId(0), VertexId(1), VertexId(3)]);
    }
}
