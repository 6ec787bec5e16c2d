use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Graph, GraphSet};
use crate::error::{Error, Result};

/// Parses the `.edges` text format.
///
/// One `u v` pair per line, `#` starts a comment, and an optional
/// `n <count>` line fixes the vertex count (so isolated vertices survive).
/// Without a header the vertex count is one more than the largest id.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("expected a non-negative integer, found `{s}`"),
            })
        };
        match fields.as_slice() {
            ["n", count] => {
                if declared_n.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duplicate `n` header".into(),
                    });
                }
                declared_n = Some(parse(count)?);
            }
            [a, b] => {
                let (u, v) = (parse(a)?, parse(b)?);
                if u == v {
                    return Err(Error::SelfLoop {
                        line: line_no,
                        vertex: u,
                    });
                }
                max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found `{line}`"),
                })
            }
        }
    }

    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match declared_n {
        Some(n) if n < inferred => {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares n = {n} but vertex {} appears", inferred - 1),
            })
        }
        Some(n) => n,
        None => inferred,
    };
    Graph::new(n, edges)
}

/// Renders a graph in the `.edges` format, always including the `n` header.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_json_path(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("json") | Some("jsonl")
    )
}

fn parse_jsonl(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let g: Graph = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        graphs.push(g);
    }
    Ok(graphs)
}

/// Reads a single graph from an `.edges` file, or the first record of a
/// JSON-lines file.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    if is_json_path(path) {
        parse_jsonl(&text)?
            .into_iter()
            .next()
            .ok_or(Error::Empty("graph file"))
    } else {
        load_edge_list(&text)
    }
}

/// Loads a graph set from a directory of `.edges` files (sorted by file
/// name, labels are the file stems), a JSON-lines file, or a single
/// `.edges` file.
pub fn load_graph_set(path: &Path) -> Result<GraphSet> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let set = if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(io_err)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("edges"))
            .collect();
        files.sort();
        let mut graphs = Vec::with_capacity(files.len());
        let mut labels = Vec::with_capacity(files.len());
        for (i, f) in files.iter().enumerate() {
            graphs.push(read_graph_file(f).map_err(Error::at_graph(i))?);
            labels.push(
                f.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
            );
        }
        GraphSet::with_labels(graphs, labels)?
    } else if is_json_path(path) {
        GraphSet::new(parse_jsonl(&read(path)?)?)
    } else {
        GraphSet::new(vec![load_edge_list(&read(path)?)?])
    };
    set.ensure_non_empty()?;
    Ok(set)
}

/// Writes graphs as JSON lines, one `{"n":…,"edges":[…]}` object per line.
pub fn write_jsonl(graphs: &[Graph]) -> String {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&serde_json::to_string(g).expect("graph serialisation is infallible"));
        out.push('\n');
    }
    out
}
