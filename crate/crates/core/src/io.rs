//! Instance text format, its JSON mirror, and witness output lines.
//!
//! ```text
//! # comment
//! p tgraph <n> <m>
//! v <id> <label>          (optional label declarations)
//! e <u> <v> <t1> <t2> ...
//! s <v>                   (source vertex, MinReachDelete)
//! param k <int>
//! param h <int>
//! ```
//!
//! Vertex tokens are dense ids when every token is a decimal integer and no
//! `v` lines are present. Otherwise they are labels: declared ones resolve
//! through the `v` table, undeclared ones are numbered by first appearance.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exploration::Visit;
use crate::graph::{Edge, GraphError, StaticGraph, TemporalGraph, TemporalWalk, Time, TimeEdge, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("edge has no times")]
    EmptyTimes,
    #[error("non-positive time {0}")]
    NonPositiveTime(i64),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: String, n: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o error: {0}")]
    Io(String),
}

/// A parse failure; `line` is 1-based, or 0 when no line applies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            0 => write!(f, "{}", self.kind),
            line => write!(f, "line {line}: {}", self.kind),
        }
    }
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// A parsed instance: the graph plus the optional MinReachDelete data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: TemporalGraph,
    pub sources: Vec<VertexId>,
    pub k: Option<u64>,
    pub h: Option<u64>,
}

impl Instance {
    pub fn new(graph: TemporalGraph) -> Self {
        Instance { graph, sources: Vec::new(), k: None, h: None }
    }
}

struct RawEdge {
    line: usize,
    u: String,
    v: String,
    times: Vec<Time>,
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::at(line, ParseErrorKind::Malformed(msg.into()))
}

fn parse_usize(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| malformed(line, format!("expected a non-negative integer, found {tok:?}")))
}

fn parse_time(line: usize, tok: &str) -> Result<Time, ParseError> {
    let t: i64 = tok.parse().map_err(|_| malformed(line, format!("expected an integer time, found {tok:?}")))?;
    if t <= 0 {
        return Err(ParseError::at(line, ParseErrorKind::NonPositiveTime(t)));
    }
    Ok(t as Time)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

/// Resolves vertex tokens to dense ids, following the rules in the module docs.
struct VertexTable {
    ids: HashMap<String, VertexId>,
    labels: Vec<String>,
    numeric: bool,
}

impl VertexTable {
    fn build(declared: Vec<(usize, usize, String)>, tokens: &[(usize, &str)]) -> Result<Self, ParseError> {
        let numeric = declared.is_empty() && tokens.iter().all(|(_, t)| t.parse::<usize>().is_ok());
        let mut table = VertexTable { ids: HashMap::new(), labels: Vec::new(), numeric };
        if numeric {
            return Ok(table);
        }
        let mut decl = declared;
        decl.sort_by_key(|(_, id, _)| *id);
        for (pos, (line, id, label)) in decl.into_iter().enumerate() {
            if id != pos {
                return Err(malformed(line, "label declarations must use ids 0, 1, 2, ... in order"));
            }
            if table.ids.insert(label.clone(), id).is_some() {
                return Err(malformed(line, format!("label {label:?} declared twice")));
            }
            table.labels.push(label);
        }
        for &(_, tok) in tokens {
            if !table.ids.contains_key(tok) {
                table.ids.insert(tok.to_string(), table.labels.len());
                table.labels.push(tok.to_string());
            }
        }
        Ok(table)
    }

    fn resolve(&self, line: usize, tok: &str) -> Result<VertexId, ParseError> {
        if self.numeric {
            parse_usize(line, tok)
        } else {
            Ok(self.ids[tok])
        }
    }
}

/// Parses the line-oriented instance format.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut raw_edges = Vec::new();
    let mut raw_sources: Vec<(usize, String)> = Vec::new();
    let mut declared = Vec::new();
    let mut k = None;
    let mut h = None;

    for (line, toks) in content_lines(text) {
        match toks[0] {
            "p" => {
                if toks.len() != 4 || toks[1] != "tgraph" {
                    return Err(malformed(line, "expected `p tgraph <n> <m>`"));
                }
                if header.is_some() {
                    return Err(malformed(line, "second header line"));
                }
                header = Some((line, parse_usize(line, toks[2])?, parse_usize(line, toks[3])?));
            }
            "e" => {
                if toks.len() < 3 {
                    return Err(malformed(line, "expected `e <u> <v> <times...>`"));
                }
                let mut times = toks[3..].iter().map(|t| parse_time(line, t)).collect::<Result<Vec<_>, _>>()?;
                if times.is_empty() {
                    return Err(ParseError::at(line, ParseErrorKind::EmptyTimes));
                }
                times.sort_unstable();
                times.dedup();
                raw_edges.push(RawEdge { line, u: toks[1].to_string(), v: toks[2].to_string(), times });
            }
            "s" => {
                if toks.len() != 2 {
                    return Err(malformed(line, "expected `s <v>`"));
                }
                raw_sources.push((line, toks[1].to_string()));
            }
            "v" => {
                if toks.len() != 3 {
                    return Err(malformed(line, "expected `v <id> <label>`"));
                }
                declared.push((line, parse_usize(line, toks[1])?, toks[2].to_string()));
            }
            "param" => {
                if toks.len() != 3 {
                    return Err(malformed(line, "expected `param <name> <int>`"));
                }
                let value = toks[2]
                    .parse::<u64>()
                    .map_err(|_| malformed(line, format!("expected a non-negative integer, found {:?}", toks[2])))?;
                match toks[1] {
                    "k" => k = Some(value),
                    "h" => h = Some(value),
                    other => return Err(malformed(line, format!("unknown parameter {other:?}"))),
                }
            }
            other => return Err(malformed(line, format!("unknown line type {other:?}"))),
        }
    }

    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for e in &raw_edges {
        tokens.push((e.line, &e.u));
        tokens.push((e.line, &e.v));
    }
    for (line, s) in &raw_sources {
        tokens.push((*line, s));
    }
    let table = VertexTable::build(declared, &tokens)?;

    let mut edges = Vec::with_capacity(raw_edges.len());
    let mut seen: HashMap<(VertexId, VertexId), ()> = HashMap::new();
    let mut max_id = None::<usize>;
    for e in &raw_edges {
        let u = table.resolve(e.line, &e.u)?;
        let v = table.resolve(e.line, &e.v)?;
        if u == v {
            return Err(ParseError::at(e.line, ParseErrorKind::SelfLoop(e.u.clone())));
        }
        if seen.insert((u.min(v), u.max(v)), ()).is_some() {
            return Err(ParseError::at(e.line, ParseErrorKind::DuplicateEdge(e.u.clone(), e.v.clone())));
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((e.line, Edge::new(u, v, e.times.clone())));
    }
    let mut sources = Vec::with_capacity(raw_sources.len());
    for (line, s) in &raw_sources {
        let v = table.resolve(*line, s)?;
        max_id = max_id.max(Some(v));
        sources.push((*line, v));
    }

    let inferred = if table.numeric { max_id.map_or(0, |m| m + 1) } else { table.labels.len() };
    let n = match header {
        Some((line, n, m)) => {
            if m != edges.len() {
                return Err(ParseError::at(
                    line,
                    ParseErrorKind::EdgeCountMismatch { declared: m, found: edges.len() },
                ));
            }
            n
        }
        None => inferred,
    };
    for (line, e) in &edges {
        for x in [e.u, e.v] {
            if x >= n {
                let vertex = if table.numeric { x.to_string() } else { table.labels[x].clone() };
                return Err(ParseError::at(*line, ParseErrorKind::VertexOutOfRange { vertex, n }));
            }
        }
    }
    for (line, v) in &sources {
        if *v >= n {
            return Err(ParseError::at(*line, ParseErrorKind::VertexOutOfRange { vertex: v.to_string(), n }));
        }
    }

    let graph =
        TemporalGraph::new(n, edges.into_iter().map(|(_, e)| e).collect()).map_err(|e| ParseError::at(0, e.into()))?;
    let graph = if table.numeric {
        graph
    } else {
        let mut labels = table.labels;
        let mut next = 0usize;
        while labels.len() < n {
            let candidate = format!("v{next}");
            next += 1;
            if !labels.contains(&candidate) {
                labels.push(candidate);
            }
        }
        graph.with_labels(labels).map_err(|e| ParseError::at(0, e.into()))?
    };
    let mut sources: Vec<VertexId> = sources.into_iter().map(|(_, v)| v).collect();
    sources.sort_unstable();
    sources.dedup();
    Ok(Instance { graph, sources, k, h })
}

/// Serializes an instance; `parse_instance(&write_instance(x)) == x`.
pub fn write_instance(inst: &Instance) -> String {
    use std::fmt::Write;
    let g = &inst.graph;
    let mut out = String::new();
    writeln!(out, "p tgraph {} {}", g.n(), g.m()).unwrap();
    if let Some(labels) = g.labels() {
        for (id, l) in labels.iter().enumerate() {
            writeln!(out, "v {id} {l}").unwrap();
        }
    }
    for e in g.edges() {
        write!(out, "e {} {}", g.label(e.u), g.label(e.v)).unwrap();
        for t in &e.times {
            write!(out, " {t}").unwrap();
        }
        out.push('\n');
    }
    for &s in &inst.sources {
        writeln!(out, "s {}", g.label(s)).unwrap();
    }
    if let Some(k) = inst.k {
        writeln!(out, "param k {k}").unwrap();
    }
    if let Some(h) = inst.h {
        writeln!(out, "param h {h}").unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    u: VertexId,
    v: VertexId,
    times: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    n: usize,
    edges: Vec<JsonEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sources: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<u64>,
}

/// Parses the JSON mirror of the text format.
pub fn parse_instance_json(text: &str) -> Result<Instance, ParseError> {
    let raw: JsonInstance =
        serde_json::from_str(text).map_err(|e| ParseError::at(e.line(), ParseErrorKind::Json(e.to_string())))?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for je in raw.edges {
        let mut times = Vec::with_capacity(je.times.len());
        for t in je.times {
            if t <= 0 {
                return Err(ParseError::at(0, ParseErrorKind::NonPositiveTime(t)));
            }
            times.push(t as Time);
        }
        times.sort_unstable();
        times.dedup();
        edges.push(Edge::new(je.u, je.v, times));
    }
    let graph = TemporalGraph::new(raw.n, edges).map_err(|e| ParseError::at(0, e.into()))?;
    let graph = match raw.labels {
        Some(l) => graph.with_labels(l).map_err(|e| ParseError::at(0, e.into()))?,
        None => graph,
    };
    let mut sources = raw.sources;
    if let Some(&bad) = sources.iter().find(|&&s| s >= raw.n) {
        return Err(ParseError::at(0, ParseErrorKind::VertexOutOfRange { vertex: bad.to_string(), n: raw.n }));
    }
    sources.sort_unstable();
    sources.dedup();
    Ok(Instance { graph, sources, k: raw.k, h: raw.h })
}

pub fn write_instance_json(inst: &Instance) -> String {
    let g = &inst.graph;
    let raw = JsonInstance {
        n: g.n(),
        edges: g
            .edges()
            .iter()
            .map(|e| JsonEdge { u: e.u, v: e.v, times: e.times.iter().map(|&t| t as i64).collect() })
            .collect(),
        labels: g.labels().map(<[String]>::to_vec),
        sources: inst.sources.clone(),
        k: inst.k,
        h: inst.h,
    };
    serde_json::to_string_pretty(&raw).expect("instance serializes")
}

/// Reads an instance file, choosing the JSON mirror for `.json` paths.
pub fn read_instance(path: &Path) -> Result<Instance, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::at(0, ParseErrorKind::Io(e.to_string())))?;
    if path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("json")) {
        parse_instance_json(&text)
    } else {
        parse_instance(&text)
    }
}

/// Parses `p graph <n> <m>` plus `e <u> <v>` lines.
pub fn parse_static_graph(text: &str) -> Result<StaticGraph, ParseError> {
    let mut header = None;
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "p" => {
                if toks.len() != 4 || toks[1] != "graph" {
                    return Err(malformed(line, "expected `p graph <n> <m>`"));
                }
                header = Some((line, parse_usize(line, toks[2])?, parse_usize(line, toks[3])?));
            }
            "e" => {
                if toks.len() != 3 {
                    return Err(malformed(line, "expected `e <u> <v>`"));
                }
                edges.push((line, parse_usize(line, toks[1])?, parse_usize(line, toks[2])?));
            }
            other => return Err(malformed(line, format!("unknown line type {other:?}"))),
        }
    }
    let n = match header {
        Some((line, n, m)) => {
            if m != edges.len() {
                return Err(ParseError::at(
                    line,
                    ParseErrorKind::EdgeCountMismatch { declared: m, found: edges.len() },
                ));
            }
            n
        }
        None => edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    let mut seen = HashMap::new();
    for &(line, u, v) in &edges {
        if u == v {
            return Err(ParseError::at(line, ParseErrorKind::SelfLoop(u.to_string())));
        }
        if u.max(v) >= n {
            return Err(ParseError::at(line, ParseErrorKind::VertexOutOfRange { vertex: u.max(v).to_string(), n }));
        }
        if seen.insert((u.min(v), u.max(v)), ()).is_some() {
            return Err(ParseError::at(line, ParseErrorKind::DuplicateEdge(u.to_string(), v.to_string())));
        }
    }
    StaticGraph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)).collect()).map_err(|e| ParseError::at(0, e.into()))
}

pub fn write_static_graph(g: &StaticGraph) -> String {
    let mut out = format!("p graph {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// One `(<u>-<v>, t)` line per step, oriented in the direction of travel.
pub fn format_circuit(g: &TemporalGraph, walk: &TemporalWalk) -> String {
    let verts = walk.vertices(g);
    walk.steps
        .iter()
        .enumerate()
        .map(|(i, te)| {
            let (a, b) = match (verts.get(i), verts.get(i + 1)) {
                (Some(&a), Some(&b)) => (a, b),
                _ => (g.edge(te.edge).u, g.edge(te.edge).v),
            };
            format!("({}-{}, {})\n", g.label(a), g.label(b), te.time)
        })
        .collect()
}

/// One `visit <center>-<leaf> <enter> <exit>` line per visit.
pub fn format_exploration(g: &TemporalGraph, visits: &[Visit]) -> String {
    visits
        .iter()
        .map(|v| {
            let e = g.edge(v.edge);
            let (c, leaf) = if e.u == crate::exploration::CENTER { (e.u, e.v) } else { (e.v, e.u) };
            format!("visit {}-{} {} {}\n", g.label(c), g.label(leaf), v.enter, v.exit)
        })
        .collect()
}

/// One `delete <u>-<v> <t>` line per deleted time-edge.
pub fn format_deletions(g: &TemporalGraph, deletions: &[TimeEdge]) -> String {
    deletions
        .iter()
        .map(|te| {
            let e = g.edge(te.edge);
            format!("delete {}-{} {}\n", g.label(e.u), g.label(e.v), te.time)
        })
        .collect()
}
