//! Graph file formats.
//!
//! Edge-list text:
//!
//! ```text
//! # nodes=4
//! 0 1
//! 0 2
//! 0 3
//! ```
//!
//! Lines starting with `#` are comments; exactly one of them must be the
//! `# nodes=N` header, and it must precede the first edge. Each edge line is
//! `u v` with `u < v`; the writer emits edges in ascending order, the reader
//! accepts any order. Blank lines are ignored.
//!
//! GraphML is undirected with node ids `n0`, `n1`, .... The reader accepts
//! arbitrary ids and numbers nodes in order of appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use qwgrow_core::Graph;

use crate::{Error, ParseError, Result};

/// Supported graph serializations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// `# nodes=N` header plus `u v` lines.
    EdgeList,
    /// GraphML XML.
    GraphMl,
}

impl GraphFormat {
    /// Guesses the format from a file extension; anything but `.graphml`
    /// and `.xml` is treated as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("graphml") || e.eq_ignore_ascii_case("xml") => {
                GraphFormat::GraphMl
            }
            _ => GraphFormat::EdgeList,
        }
    }
}

/// Serializes `g` in `format`.
pub fn serialize(g: &Graph, format: GraphFormat) -> Vec<u8> {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::GraphMl => write_graphml(g),
    }
    .into_bytes()
}

/// Parses bytes written by [`serialize`] or by another tool.
pub fn deserialize(bytes: &[u8], format: GraphFormat) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let before = &bytes[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        ParseError::new(line, 0, "input is not valid UTF-8")
    })?;
    match format {
        GraphFormat::EdgeList => read_edge_list(text),
        GraphFormat::GraphMl => read_graphml(text),
    }
}

/// Reads a graph file, picking the format from its extension.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    deserialize(&bytes, GraphFormat::from_path(path))
}

/// Edge-list text of `g`.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes={}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses edge-list text.
pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut nodes: Option<usize> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("nodes=") {
                if nodes.is_some() {
                    return Err(ParseError::new(line_no, 1, "duplicate nodes header").into());
                }
                if !edges.is_empty() {
                    return Err(ParseError::new(line_no, 1, "nodes header after first edge").into());
                }
                let n: usize = value.trim().parse().map_err(|_| {
                    ParseError::new(line_no, 1, format!("invalid node count {:?}", value.trim()))
                })?;
                if n == 0 {
                    return Err(ParseError::new(line_no, 1, "node count must be positive").into());
                }
                nodes = Some(n);
            }
            continue;
        }
        let Some(n) = nodes else {
            return Err(ParseError::new(line_no, 1, "edge before \"# nodes=N\" header").into());
        };
        let mut fields = Vec::with_capacity(2);
        for (col, tok) in tokens(raw) {
            let id: usize = tok
                .parse()
                .map_err(|_| ParseError::new(line_no, col, format!("invalid node id {tok:?}")))?;
            if id >= n {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("node {id} out of range for nodes={n}"),
                )
                .into());
            }
            fields.push(id);
        }
        match fields[..] {
            [u, v] if u == v => {
                return Err(ParseError::new(line_no, 1, format!("self-loop on node {u}")).into())
            }
            [u, v] => edges.push((u, v)),
            _ => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("expected two node ids, found {}", fields.len()),
                )
                .into())
            }
        }
    }
    let n = nodes
        .ok_or_else(|| ParseError::new(last_line.max(1), 0, "missing \"# nodes=N\" header"))?;
    Ok(Graph::new(n, &edges)?)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let len = rest[start..].find(char::is_whitespace).unwrap_or(rest.len() - start);
        let col = offset + start + 1;
        let tok = &rest[start..start + len];
        offset += start + len;
        rest = &rest[start + len..];
        Some((col, tok))
    })
}

/// GraphML document of `g`.
pub fn write_graphml(g: &Graph) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <graph id=\"G\" edgedefault=\"undirected\">\n",
    );
    for v in 0..g.node_count() {
        let _ = writeln!(out, "    <node id=\"n{v}\"/>");
    }
    for (i, (u, v)) in g.edges().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{i}\" source=\"n{u}\" target=\"n{v}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Parses the first `<graph>` of a GraphML document.
pub fn read_graphml(text: &str) -> Result<Graph> {
    let mut reader = Reader::from_str(text);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<(String, String, usize)> = Vec::new();
    let mut seen_graph = false;
    loop {
        let pos = reader.buffer_position() as usize;
        let event = reader.read_event().map_err(|e| {
            let at = reader.error_position() as usize;
            xml_error(text, at, e.to_string())
        })?;
        match event {
            Event::Start(e) | Event::Empty(e) => match e.local_name().as_ref() {
                b"graph" => {
                    if seen_graph {
                        return Err(xml_error(text, pos, "multiple <graph> elements").into());
                    }
                    seen_graph = true;
                    if attr(&e, b"edgedefault", text, pos)?.as_deref() == Some("directed") {
                        return Err(xml_error(text, pos, "directed graphs are not supported").into());
                    }
                }
                b"node" => {
                    let id = attr(&e, b"id", text, pos)?
                        .ok_or_else(|| xml_error(text, pos, "<node> without id"))?;
                    let next = ids.len();
                    if ids.insert(id.clone(), next).is_some() {
                        return Err(xml_error(text, pos, format!("duplicate node id {id:?}")).into());
                    }
                }
                b"edge" => {
                    let s = attr(&e, b"source", text, pos)?
                        .ok_or_else(|| xml_error(text, pos, "<edge> without source"))?;
                    let t = attr(&e, b"target", text, pos)?
                        .ok_or_else(|| xml_error(text, pos, "<edge> without target"))?;
                    pending.push((s, t, pos));
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if !seen_graph {
        return Err(xml_error(text, text.len(), "no <graph> element").into());
    }
    let mut edges = Vec::with_capacity(pending.len());
    for (s, t, pos) in pending {
        let lookup = |id: &str| {
            ids.get(id).copied().ok_or_else(|| xml_error(text, pos, format!("unknown node {id:?}")))
        };
        let (u, v) = (lookup(&s)?, lookup(&t)?);
        if u == v {
            return Err(xml_error(text, pos, format!("self-loop on node {s:?}")).into());
        }
        edges.push((u, v));
    }
    Ok(Graph::new(ids.len(), &edges)?)
}

fn attr(e: &BytesStart<'_>, key: &[u8], text: &str, pos: usize) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(|err| xml_error(text, pos, err.to_string()))?;
        if a.key.local_name().as_ref() == key {
            let v = a.unescape_value().map_err(|err| xml_error(text, pos, err.to_string()))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn xml_error(text: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    ParseError::new(line, column, message)
}
