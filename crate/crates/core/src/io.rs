//! Plain-text formats for instances, list assignments, and colorings.
//!
//! Instance files start with a `khg <k> <n1> … <nk> <m>` header followed by
//! one edge per line, each edge written as k `part:index` tokens. `#` starts
//! a comment and blank lines are ignored. Writers emit edges in canonical
//! sorted order with LF line endings and a trailing newline, so writing,
//! parsing, and writing again reproduces the bytes exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{InstanceData, KPartiteHypergraph, VertexId};
use crate::lists::{ColorList, ListAssignment};
use crate::solver::FullColoring;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Strips comments and pairs each remaining non-blank line with its 1-based
/// line number.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let body = body.trim();
        if body.is_empty() {
            None
        } else {
            Some((i + 1, body))
        }
    })
}

fn parse_u32(tok: &str, line: usize, what: &str) -> Result<u32> {
    tok.parse::<u32>()
        .map_err(|_| parse_err(line, format!("invalid {what}: {tok:?}")))
}

fn parse_vertex(tok: &str, line: usize) -> Result<VertexId> {
    let (p, i) = tok
        .split_once(':')
        .ok_or_else(|| parse_err(line, format!("expected part:index, got {tok:?}")))?;
    Ok(VertexId::new(
        parse_u32(p, line, "part number")?,
        parse_u32(i, line, "vertex index")?,
    ))
}

pub fn parse_instance(text: &str) -> Result<KPartiteHypergraph> {
    let mut lines = significant_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty instance file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"khg") {
        return Err(parse_err(header_line, "expected 'khg' header"));
    }
    if toks.len() < 2 {
        return Err(parse_err(header_line, "header is missing the part count"));
    }
    let k = parse_u32(toks[1], header_line, "part count")?;
    if toks.len() != k as usize + 3 {
        return Err(parse_err(
            header_line,
            format!(
                "header needs {} fields for k = {k} (khg, k, {k} part sizes, edge count)",
                k as usize + 3
            ),
        ));
    }
    let part_sizes: Vec<u32> = toks[2..2 + k as usize]
        .iter()
        .map(|t| parse_u32(t, header_line, "part size"))
        .collect::<Result<_>>()?;
    let m = parse_u32(toks[2 + k as usize], header_line, "edge count")? as usize;

    let mut edges: Vec<Vec<VertexId>> = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(parse_err(
                line,
                format!("edge count mismatch: expected {m} edges, found more"),
            ));
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != k as usize {
            return Err(parse_err(
                line,
                format!("expected {k} vertices on an edge line, got {}", toks.len()),
            ));
        }
        let mut members = Vec::with_capacity(k as usize);
        let mut parts_seen = vec![false; k as usize];
        for t in toks {
            let v = parse_vertex(t, line)?;
            if v.part == 0 || v.part > k {
                return Err(parse_err(
                    line,
                    format!("part out of range: {} (instance has {k} parts)", v.part),
                ));
            }
            if v.index >= part_sizes[v.part as usize - 1] {
                return Err(parse_err(
                    line,
                    format!(
                        "vertex index out of range: {v} (part {} has {} vertices)",
                        v.part,
                        part_sizes[v.part as usize - 1]
                    ),
                ));
            }
            if std::mem::replace(&mut parts_seen[v.part as usize - 1], true) {
                return Err(parse_err(line, format!("two vertices in part {}", v.part)));
            }
            members.push(v);
        }
        edges.push(members);
    }
    if edges.len() != m {
        let eof = text.lines().count() + 1;
        return Err(parse_err(
            eof,
            format!("edge count mismatch: expected {m} edges, found {}", edges.len()),
        ));
    }
    KPartiteHypergraph::from_data(&InstanceData { k, part_sizes, edges })
}

pub fn write_instance(h: &KPartiteHypergraph) -> String {
    let mut out = String::new();
    write!(out, "khg {}", h.k()).unwrap();
    for &n in h.part_sizes() {
        write!(out, " {n}").unwrap();
    }
    writeln!(out, " {}", h.edge_count()).unwrap();
    for e in h.edges() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

/// Parses a list assignment. The file is either a single `uniform <q>`
/// directive or one `part:index c1 c2 …` line per vertex, covering every
/// vertex exactly once.
pub fn parse_lists(text: &str, h: &KPartiteHypergraph) -> Result<ListAssignment> {
    let mut lists: Vec<Option<ColorList>> = vec![None; h.vertex_count()];
    let mut saw_entry = false;
    for (line, body) in significant_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] == "uniform" {
            if saw_entry {
                return Err(parse_err(line, "'uniform' cannot follow per-vertex lists"));
            }
            if toks.len() != 2 {
                return Err(parse_err(line, "usage: uniform <q>"));
            }
            let q = parse_u32(toks[1], line, "list size")?;
            return Ok(ListAssignment::uniform(h, q));
        }
        saw_entry = true;
        let v = parse_vertex(toks[0], line)?;
        if !h.contains(v) {
            return Err(parse_err(line, format!("unknown vertex {v}")));
        }
        if toks.len() < 2 {
            return Err(parse_err(line, format!("empty color list for {v}")));
        }
        let colors: Vec<u32> = toks[1..]
            .iter()
            .map(|t| parse_u32(t, line, "color"))
            .collect::<Result<_>>()?;
        let list = ColorList::from_unsorted(colors)
            .map_err(|e| parse_err(line, e.to_string()))?;
        let g = h.global_index(v)?;
        if lists[g].replace(list).is_some() {
            return Err(parse_err(line, format!("duplicate list for {v}")));
        }
    }
    let eof = text.lines().count() + 1;
    let mut out = Vec::with_capacity(lists.len());
    for (g, slot) in lists.into_iter().enumerate() {
        match slot {
            Some(l) => out.push(l),
            None => {
                return Err(parse_err(
                    eof,
                    format!("missing list for vertex {}", h.vertex_at(g)),
                ))
            }
        }
    }
    ListAssignment::from_lists(h, out)
}

pub fn write_lists(lists: &ListAssignment, h: &KPartiteHypergraph) -> String {
    let mut out = String::new();
    for (g, list) in lists.lists().iter().enumerate() {
        write!(out, "{}", h.vertex_at(g)).unwrap();
        for c in list.iter() {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses a total coloring: one `part:index color` line per vertex.
pub fn parse_coloring(text: &str, h: &KPartiteHypergraph) -> Result<FullColoring> {
    let mut colors: Vec<Option<u32>> = vec![None; h.vertex_count()];
    for (line, body) in significant_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(line, "expected 'part:index color'"));
        }
        let v = parse_vertex(toks[0], line)?;
        if !h.contains(v) {
            return Err(parse_err(line, format!("unknown vertex {v}")));
        }
        let c = parse_u32(toks[1], line, "color")?;
        let g = h.global_index(v)?;
        if colors[g].replace(c).is_some() {
            return Err(parse_err(line, format!("duplicate color for {v}")));
        }
    }
    let eof = text.lines().count() + 1;
    let mut out = Vec::with_capacity(colors.len());
    for (g, slot) in colors.into_iter().enumerate() {
        match slot {
            Some(c) => out.push(c),
            None => {
                return Err(parse_err(
                    eof,
                    format!("missing color for vertex {}", h.vertex_at(g)),
                ))
            }
        }
    }
    Ok(FullColoring { colors: out })
}

pub fn write_coloring(coloring: &FullColoring, h: &KPartiteHypergraph) -> String {
    let mut out = String::new();
    for (g, c) in coloring.colors.iter().enumerate() {
        writeln!(out, "{} {c}", h.vertex_at(g)).unwrap();
    }
    out
}
