//! Edge-list TSV: one `u\tv\tw` line per edge, `#` comments, and an optional
//! `# n=<count>` header fixing the vertex count.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::WeightedGraph;
use crate::error::{Error, Result};

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut declared_n: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("n=") {
                let n = value.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad vertex count {value:?}"),
                })?;
                declared_n = Some((n, line_no));
            }
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 fields (u v w), found {}",
                fields.len()
            )));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("bad vertex id {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("bad vertex id {:?}", fields[1])))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("bad weight {:?}", fields[2])))?;
        if u == v {
            return Err(parse_err(format!("self-loop at vertex {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(parse_err(format!("weight must be positive, got {w}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(format!("duplicate edge ({u}, {v})")));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, w));
    }

    let n = match (declared_n, max_id) {
        (Some((n, line)), Some(max)) if n <= max => {
            return Err(Error::Parse {
                line,
                message: format!("header declares n={n} but vertex {max} appears"),
            })
        }
        (Some((n, _)), _) => n,
        (None, Some(max)) => max + 1,
        (None, None) => {
            return Err(Error::Parse {
                line: 0,
                message: "no edges and no `# n=` header".into(),
            })
        }
    };
    WeightedGraph::new(n, edges)
}

/// Writes the canonical form: header, then edges sorted by `(u, v)` with
/// shortest round-trip weights.
pub fn write_edge_list<W: Write>(g: &WeightedGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# n={}", g.n())?;
    for e in g.edges() {
        writeln!(out, "{}\t{}\t{:?}", e.u, e.v, e.w)?;
    }
    out.flush()
}

pub fn save_edge_list(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(g, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
