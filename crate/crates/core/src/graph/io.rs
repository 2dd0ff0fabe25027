use thiserror::Error;

use super::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: vertex {vertex} out of declared range 0..{n}")]
    OutOfRange { line: usize, vertex: usize, n: usize },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
}

fn malformed(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn parse_fields<const N: usize>(line: usize, fields: &[&str]) -> Result<[usize; N], ParseError> {
    if fields.len() != N {
        return Err(malformed(
            line,
            format!("expected {N} integers, found {}", fields.len()),
        ));
    }
    let mut out = [0; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| malformed(line, format!("`{field}` is not a non-negative integer")))?;
    }
    Ok(out)
}

/// Parses the edge-list format: a `p <n> <m>` header followed by `e <u> <v>`
/// lines with 0-based endpoints. `#` starts a comment. The declared edge count
/// is informational; repeated edges collapse to one.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "p" => {
                if n.is_some() {
                    return Err(malformed(line, "duplicate header"));
                }
                let [count, _m] = parse_fields::<2>(line, &rest)?;
                n = Some(count);
            }
            "e" => {
                let n = n.ok_or_else(|| malformed(line, "edge before `p` header"))?;
                let [u, v] = parse_fields::<2>(line, &rest)?;
                for vertex in [u, v] {
                    if vertex >= n {
                        return Err(ParseError::OutOfRange { line, vertex, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line, vertex: u });
                }
                edges.push((u, v));
            }
            other => return Err(malformed(line, format!("unknown line tag `{other}`"))),
        }
    }
    let n = n.ok_or(ParseError::MissingHeader)?;
    Ok(Graph::from_edges(n, edges).expect("edges validated while parsing"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_c4() {
        let g = parse_graph("p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.max_degree(), 2);
        assert!(g.has_edge(3, 0));
    }

    #[test]
    fn parses_k2() {
        let g = parse_graph("p 2 1\ne 0 1").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_graph("# dup\np 3 2\ne 0 1\ne 0 1 # again\n\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_graph("p 3 1\ne 1 1"),
            Err(ParseError::SelfLoop { line: 2, vertex: 1 })
        );
        assert_eq!(
            parse_graph("p 3 1\n\ne 0 3"),
            Err(ParseError::OutOfRange { line: 3, vertex: 3, n: 3 })
        );
        assert!(matches!(
            parse_graph("p 3 1\ne 0 x"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("e 0 1"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("p 3 1\nq 0 1"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert_eq!(parse_graph("# nothing"), Err(ParseError::MissingHeader));
    }

    #[test]
    fn round_trips_through_text() {
        let g = Graph::from_edges(5, [(0, 4), (1, 2), (2, 4)]).unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }
}
