//! Text formats: DIMACS edge graphs (with an optional `c U` line naming a
//! vertex set), DIMACS cnf formulas and a plain hypergraph format. Vertex
//! ids are 1-based in DIMACS files and 0-based everywhere else.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::Formula;
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq)]
pub struct Dimacs {
    pub graph: Graph,
    /// The set from a `c U ...` line, if the file has one.
    pub marked: Option<VertexSet>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn vertex_id(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let id: usize = number(tok, line, "vertex id")?;
    if id == 0 || id > n {
        return Err(parse_err(line, format!("vertex id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

fn end_of_line<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(extra) => Err(parse_err(line, format!("trailing token `{extra}`"))),
        None => Ok(()),
    }
}

/// Reads a DIMACS edge file. Repeated edges are merged; the number of `e`
/// lines must match the header.
pub fn parse_dimacs(text: &str) -> Result<Dimacs> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut marked_ids: Option<(usize, Vec<&str>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None => {}
            Some("c") => {
                if toks.next() == Some("U") {
                    if marked_ids.is_some() {
                        return Err(parse_err(line, "second `c U` line"));
                    }
                    marked_ids = Some((line, toks.collect()));
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(line, "second problem line"));
                }
                if toks.next() != Some("edge") {
                    return Err(parse_err(line, "expected `p edge <n> <m>`"));
                }
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                end_of_line(toks, line)?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) =
                    header.ok_or_else(|| parse_err(line, "edge before the problem line"))?;
                let u = vertex_id(toks.next(), line, n)?;
                let v = vertex_id(toks.next(), line, n)?;
                end_of_line(toks, line)?;
                if u == v {
                    return Err(parse_err(line, format!("self-loop on vertex {}", u + 1)));
                }
                edges.push((u, v));
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let marked = match marked_ids {
        None => None,
        Some((line, ids)) => Some(
            ids.into_iter()
                .map(|t| vertex_id(Some(t), line, n))
                .collect::<Result<VertexSet>>()?,
        ),
    };
    Ok(Dimacs {
        graph: Graph::new(n, edges)?,
        marked,
    })
}

/// Writes `g` in DIMACS edge format, preceded by a `c U` line when `marked`
/// is given.
pub fn write_dimacs(g: &Graph, marked: Option<&VertexSet>) -> String {
    let mut out = String::new();
    if let Some(u) = marked {
        out.push_str("c U");
        for v in u.iter() {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "p edge {} {}", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Reads a DIMACS cnf file with clauses of at most three literals. Shorter
/// clauses are padded by repeating their last literal.
pub fn parse_cnf(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        let mut toks = trimmed.split_whitespace();
        if trimmed.starts_with('p') {
            toks.next();
            if header.is_some() || toks.next() != Some("cnf") {
                return Err(parse_err(
                    line,
                    "expected a single `p cnf <vars> <clauses>`",
                ));
            }
            header = Some((
                number(toks.next(), line, "variable count")?,
                number(toks.next(), line, "clause count")?,
            ));
            continue;
        }
        let (nvars, _) = header.ok_or_else(|| parse_err(line, "clause before the problem line"))?;
        for tok in toks {
            let lit: i32 = number(Some(tok), line, "literal")?;
            if lit == 0 {
                let Some(&last) = current.last() else {
                    return Err(parse_err(line, "empty clause"));
                };
                if current.len() > 3 {
                    return Err(parse_err(
                        line,
                        format!("clause with {} literals", current.len()),
                    ));
                }
                current.resize(3, last);
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                if lit.unsigned_abs() as usize > nvars {
                    return Err(parse_err(
                        line,
                        format!("literal {lit} outside 1..={nvars}"),
                    ));
                }
                current.push(lit);
            }
        }
    }
    let (nvars, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if !current.is_empty() {
        return Err(parse_err(0, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} clauses, found {}", clauses.len()),
        ));
    }
    Formula::new(nvars, clauses)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub ground: usize,
    pub sets: Vec<VertexSet>,
}

/// Reads `h <ground> <m>` followed by `m` lines of 0-based element ids.
/// Blank lines and lines starting with `c` are skipped.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let Some((ground, _)) = header else {
            if toks.next() != Some("h") {
                return Err(parse_err(line, "expected `h <ground> <m>`"));
            }
            header = Some((
                number(toks.next(), line, "ground size")?,
                number(toks.next(), line, "set count")?,
            ));
            continue;
        };
        let mut set = VertexSet::new();
        for tok in toks {
            let x: usize = number(Some(tok), line, "element")?;
            if x >= ground {
                return Err(parse_err(line, format!("element {x} outside 0..{ground}")));
            }
            set.insert(x);
        }
        sets.push(set);
    }
    let (ground, m) = header.ok_or_else(|| parse_err(0, "missing `h` line"))?;
    if sets.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} sets, found {}", sets.len()),
        ));
    }
    Ok(Hypergraph { ground, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn dimacs_round_trip() {
        let g = cycle(5);
        let text = write_dimacs(&g, Some(&vs(&[0, 3])));
        assert!(text.starts_with("c U 1 4\np edge 5 5\n"));
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.marked, Some(vs(&[0, 3])));
        assert_eq!(parse_dimacs(&write_dimacs(&g, None)).unwrap().marked, None);
    }

    #[test]
    fn dimacs_details() {
        let d = parse_dimacs("c a path\np edge 3 3\ne 1 2\ne 2 3\ne 2 1\n").unwrap();
        assert_eq!(d.graph.edge_count(), 2);
        assert!(d.graph.has_edge(0, 1) && d.graph.has_edge(1, 2));
    }

    #[test]
    fn dimacs_errors() {
        let line_of = |text: &str| match parse_dimacs(text).unwrap_err() {
            Error::Parse { line, .. } => line,
            e => panic!("unexpected {e}"),
        };
        assert_eq!(line_of("p edge 2 1\ne 1 3\n"), 2);
        assert_eq!(line_of("p edge 2 1\ne 1 1\n"), 2);
        assert_eq!(line_of("e 1 2\n"), 1);
        assert_eq!(line_of("p edge 2 2\ne 1 2\n"), 0);
        assert_eq!(line_of("p edge 2 x\n"), 1);
        assert_eq!(line_of("p edge 2 1\ne 1 2 3\n"), 2);
        assert_eq!(line_of("c U 3\np edge 2 1\ne 1 2\n"), 1);
        assert_eq!(line_of("p col 2 1\n"), 1);
    }

    #[test]
    fn cnf() {
        let f = parse_cnf("c tiny\np cnf 3 2\n1 -2 3 0\n-1\n 0\n").unwrap();
        assert_eq!(f.nvars, 3);
        assert_eq!(f.clauses, vec![[1, -2, 3], [-1, -1, -1]]);
        let f = parse_cnf("p cnf 2 1\n1 2 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses, vec![[1, 2, 2]]);
        assert!(parse_cnf("p cnf 4 1\n1 2 3 4 0\n").is_err());
        assert!(parse_cnf("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_cnf("p cnf 2 1\n0\n").is_err());
        assert!(parse_cnf("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_cnf("p cnf 2 1\n1 2\n").is_err());
    }

    #[test]
    fn hypergraph() {
        let h = parse_hypergraph("h 3 2\n0 1\nc note\n2 1\n").unwrap();
        assert_eq!(h.ground, 3);
        assert_eq!(h.sets, vec![vs(&[0, 1]), vs(&[1, 2])]);
        assert!(parse_hypergraph("h 3 1\n0 3\n").is_err());
        assert!(parse_hypergraph("h 3 2\n0\n").is_err());
        assert!(parse_hypergraph("0 1\n").is_err());
    }
}
