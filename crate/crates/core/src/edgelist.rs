//! Plain-text edge lists.
//!
//! ```text
//! # n=<n> seed=<seed> graphon=<descriptor>
//! 0 5
//! 0 17
//! ...
//! ```
//!
//! One `i j` pair per line with `i < j`, ascending, 0-indexed, LF-terminated.
//! The reader also accepts files without a header (n is then inferred from
//! the largest index) and pairs in any order or orientation.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::sampler::SampledGraph;

pub fn write_edge_list<W: Write>(g: &SampledGraph, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "# n={} seed={} graphon={}",
        g.n(),
        g.seed,
        g.descriptor
    )?;
    for &(i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &SampledGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub graph: SimpleGraph,
    pub seed: Option<u64>,
    pub descriptor: Option<String>,
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<EdgeListFile> {
    let mut n: Option<usize> = None;
    let mut seed = None;
    let mut descriptor = None;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Format {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('#') {
            if lineno == 1 {
                for field in header.split_whitespace() {
                    let bad = || Error::Format {
                        line: lineno,
                        message: format!("bad header field '{field}'"),
                    };
                    match field.split_once('=') {
                        Some(("n", v)) => n = Some(v.parse().map_err(|_| bad())?),
                        Some(("seed", v)) => seed = Some(v.parse().map_err(|_| bad())?),
                        Some(("graphon", v)) => descriptor = Some(v.to_string()),
                        _ => {}
                    }
                }
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format {
                    line: lineno,
                    message: format!("expected two node indices, got '{trimmed}'"),
                })
        };
        let a = parse(tokens.next())?;
        let b = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(Error::Format {
                line: lineno,
                message: format!("expected two node indices, got '{trimmed}'"),
            });
        }
        if a == b {
            return Err(Error::Format {
                line: lineno,
                message: format!("self-loop at node {a}"),
            });
        }
        if let Some(limit) = n {
            if a.max(b) >= limit {
                return Err(Error::Format {
                    line: lineno,
                    message: format!("node index {} out of range for n={limit}", a.max(b)),
                });
            }
        }
        let key = (a.min(b), a.max(b));
        if let Some(prev) = first_seen.insert(key, lineno) {
            return Err(Error::Format {
                line: lineno,
                message: format!("duplicate edge {} {} (first on line {prev})", key.0, key.1),
            });
        }
        pairs.push(key);
    }

    let n = n.unwrap_or_else(|| pairs.iter().map(|&(_, b)| b + 1).max().unwrap_or(0));
    let graph = SimpleGraph::from_edges(n, pairs)?;
    Ok(EdgeListFile {
        graph,
        seed,
        descriptor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::Graphon;
    use crate::sampler::sample;

    #[test]
    fn header_and_lines() {
        let graphon: Graphon = "pi:density".parse().unwrap();
        let g = sample(&graphon, 3, 7);
        assert_eq!(
            edge_list_string(&g),
            "# n=3 seed=7 graphon=pi:density\n0 1\n0 2\n1 2\n"
        );
    }

    #[test]
    fn round_trip() {
        let graphon: Graphon = "gumbel:3".parse().unwrap();
        let g = sample(&graphon, 80, 1);
        let text = edge_list_string(&g);
        let back = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(back.graph, g.graph);
        assert_eq!(back.seed, Some(1));
        assert_eq!(back.descriptor.as_deref(), Some("gumbel:3:cdf"));
    }

    #[test]
    fn isolated_nodes_survive_via_header() {
        let back = read_edge_list("# n=10 seed=0 graphon=pi:cdf\n0 1\n".as_bytes()).unwrap();
        assert_eq!(back.graph.n(), 10);
        let inferred = read_edge_list("3 1\n".as_bytes()).unwrap();
        assert_eq!(inferred.graph.n(), 4);
        assert_eq!(inferred.graph.edges(), &[(1, 3)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = read_edge_list("# n=4\n0 1\n1 x\n".as_bytes()).unwrap_err();
        assert_eq!(
            err,
            Error::Format {
                line: 3,
                message: "expected two node indices, got '1 x'".into()
            }
        );
        let err = read_edge_list("0 1\n1 2\n2 1\n".as_bytes()).unwrap_err();
        assert!(
            matches!(err, Error::Format { line: 3, ref message } if message.contains("duplicate edge 1 2"))
        );
        assert!(read_edge_list("0 0\n".as_bytes()).is_err());
        assert!(read_edge_list("# n=2\n0 5\n".as_bytes()).is_err());
        assert!(read_edge_list("0 1 2\n".as_bytes()).is_err());
    }
}
