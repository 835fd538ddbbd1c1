//! Serialized forms: JSON graph and covering documents, DOT and CSV export.
//!
//! Weights are written as decimal strings using the shortest representation
//! that parses back to the same double, so documents round-trip bit-exactly.
//! A complex weight with nonzero imaginary part is written `"re;im"`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covering::{CoverWindow, CoveringMap};
use crate::graph::{EdgeWeight, Multigraph, WeightedGraph};
use crate::schreier::SchreierGraph;
use crate::spectra::SpectrumReport;
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Convention flags embedded in every JSON artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    /// `"one"`: a loop is one element of `E_v` and adds one to the degree.
    pub loop_degree: String,
    pub upsilon_middle_exception: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            loop_degree: "one".into(),
            upsilon_middle_exception: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub conventions: Conventions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub wu: String,
    /// Omitted for loops.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<char>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    pub metadata: Metadata,
}

pub fn format_weight(w: Complex64) -> String {
    if w.im == 0.0 && w.im.is_sign_positive() {
        format!("{}", w.re)
    } else {
        format!("{};{}", w.re, w.im)
    }
}

pub fn parse_weight(text: &str, location: &str) -> Result<Complex64> {
    let number = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::format(location, format!("bad weight {text:?}")))
    };
    match text.split_once(';') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(text)?, 0.0)),
    }
}

/// A decoded graph document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub ids: Vec<String>,
    pub graph: WeightedGraph,
    pub metadata: Metadata,
}

impl ParsedGraph {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

impl GraphDocument {
    pub fn new(g: &WeightedGraph, ids: Option<Vec<String>>, metadata: Metadata) -> Result<Self> {
        let n = g.graph.vertex_count();
        let vertices = ids.unwrap_or_else(|| (0..n).map(|v| v.to_string()).collect());
        if vertices.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: vertices.len(),
            });
        }
        let edges = g
            .graph
            .edges()
            .iter()
            .zip(&g.weights)
            .map(|(e, w)| EdgeRecord {
                u: vertices[e.u].clone(),
                v: vertices[e.v].clone(),
                wu: format_weight(w.at_u),
                wv: (!e.is_loop()).then(|| format_weight(w.at_v)),
                label: e.label,
            })
            .collect();
        Ok(GraphDocument {
            format_version: FORMAT_VERSION,
            vertices,
            edges,
            metadata,
        })
    }

    /// `Γ_n` with Markov weights, vertices named by their binary words.
    pub fn from_schreier(g: &SchreierGraph) -> Result<Self> {
        let weighted = WeightedGraph::markov(g.graph())?;
        let ids = (0..g.graph().vertex_count())
            .map(|v| g.vertex_name(v))
            .collect();
        let metadata = Metadata {
            omega: Some(g.omega().to_string()),
            level: Some(g.level()),
            conventions: Conventions::default(),
        };
        Self::new(&weighted, Some(ids), metadata)
    }

    pub fn decode(&self) -> Result<ParsedGraph> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::format(
                "format_version",
                format!("unsupported version {}", self.format_version),
            ));
        }
        let index = id_index(&self.vertices, "vertices")?;
        let lookup = |id: &str, loc: String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::format(loc, format!("unknown vertex id {id:?}")))
        };
        let mut graph = Multigraph::new(self.vertices.len());
        let mut weights = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let u = lookup(&e.u, format!("edges[{i}].u"))?;
            let v = lookup(&e.v, format!("edges[{i}].v"))?;
            let wu = parse_weight(&e.wu, &format!("edges[{i}].wu"))?;
            let wv = match (&e.wv, u == v) {
                (None, true) => wu,
                (Some(_), true) => {
                    return Err(Error::format(
                        format!("edges[{i}].wv"),
                        "loops carry a single weight",
                    ))
                }
                (Some(text), false) => parse_weight(text, &format!("edges[{i}].wv"))?,
                (None, false) => {
                    return Err(Error::format(format!("edges[{i}].wv"), "missing weight"))
                }
            };
            graph.add_edge(u, v, e.label);
            weights.push(EdgeWeight { at_u: wu, at_v: wv });
        }
        Ok(ParsedGraph {
            ids: self.vertices.clone(),
            graph: WeightedGraph::new(graph, weights)?,
            metadata: self.metadata.clone(),
        })
    }
}

fn id_index(ids: &[String], field: &str) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::format(
                format!("{field}[{i}]"),
                format!("duplicate vertex id {id:?}"),
            ));
        }
    }
    Ok(index)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::format(
        format!("line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

pub fn parse_graph(bytes: &[u8]) -> Result<ParsedGraph> {
    let doc: GraphDocument = serde_json::from_slice(bytes).map_err(json_error)?;
    doc.decode()
}

pub fn serialize_document(doc: &GraphDocument) -> String {
    to_json(doc)
}

pub fn serialize_graph(
    g: &WeightedGraph,
    ids: Option<Vec<String>>,
    metadata: Metadata,
) -> Result<String> {
    Ok(to_json(&GraphDocument::new(g, ids, metadata)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowRecord {
    pub root: usize,
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringDocument {
    pub format_version: u32,
    pub source: GraphDocument,
    pub target: GraphDocument,
    /// `(source id, target id)` for every source vertex, in source order.
    pub vertex_map: Vec<(String, String)>,
    /// `(source edge index, target edge index)` for every source edge.
    pub edge_map: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowRecord>,
}

impl CoveringDocument {
    pub fn new(
        c: &CoveringMap,
        source_ids: Option<Vec<String>>,
        target_ids: Option<Vec<String>>,
        metadata: Metadata,
    ) -> Result<Self> {
        let source = GraphDocument::new(&c.weighted_source()?, source_ids, metadata.clone())?;
        let target = GraphDocument::new(&c.weighted_target()?, target_ids, metadata)?;
        let vertex_map = c
            .vertex_map
            .iter()
            .enumerate()
            .map(|(v, &w)| {
                let image = target
                    .vertices
                    .get(w)
                    .cloned()
                    .unwrap_or_else(|| w.to_string());
                (source.vertices[v].clone(), image)
            })
            .collect();
        Ok(CoveringDocument {
            format_version: FORMAT_VERSION,
            source,
            target,
            vertex_map,
            edge_map: c.edge_map.iter().copied().enumerate().collect(),
            window: c.window.as_ref().map(|w| WindowRecord {
                root: w.root,
                radius: w.radius,
            }),
        })
    }

    /// Rebuilds the covering. Map entries are read positionally; an id that
    /// does not name a vertex is a format error, while a well-formed map
    /// that fails the covering axioms is left for the verifier.
    pub fn decode(&self) -> Result<CoveringMap> {
        let source = self.source.decode()?;
        let target = self.target.decode()?;
        let n = source.ids.len();
        if self.vertex_map.len() != n {
            return Err(Error::format(
                "vertex_map",
                format!("expected {n} entries, found {}", self.vertex_map.len()),
            ));
        }
        let source_index = id_index(&source.ids, "source.vertices")?;
        let target_index = id_index(&target.ids, "target.vertices")?;
        let mut vertex_map = vec![usize::MAX; n];
        for (i, (a, b)) in self.vertex_map.iter().enumerate() {
            let loc = format!("vertex_map[{i}]");
            let v = *source_index
                .get(a)
                .ok_or_else(|| Error::format(&loc, format!("unknown source id {a:?}")))?;
            let w = *target_index
                .get(b)
                .ok_or_else(|| Error::format(&loc, format!("unknown target id {b:?}")))?;
            if vertex_map[v] != usize::MAX {
                return Err(Error::format(loc, format!("source id {a:?} mapped twice")));
            }
            vertex_map[v] = w;
        }
        let m = source.graph.graph.edge_count();
        if self.edge_map.len() != m {
            return Err(Error::format(
                "edge_map",
                format!("expected {m} entries, found {}", self.edge_map.len()),
            ));
        }
        let mut edge_map = vec![usize::MAX; m];
        for (i, &(e, f)) in self.edge_map.iter().enumerate() {
            if e >= m || edge_map[e] != usize::MAX {
                return Err(Error::format(
                    format!("edge_map[{i}]"),
                    format!("bad source edge index {e}"),
                ));
            }
            edge_map[e] = f;
        }
        let mut c = CoveringMap::new(
            source.graph.graph.clone(),
            target.graph.graph.clone(),
            vertex_map,
            edge_map,
        )
        .with_weights(Some(source.graph.weights), Some(target.graph.weights));
        if let Some(w) = self.window {
            if w.root >= n {
                return Err(Error::format(
                    "window.root",
                    format!("vertex {} out of range", w.root),
                ));
            }
            let distance = c.source.distances_from(w.root);
            c = c.with_window(CoverWindow {
                root: w.root,
                radius: w.radius,
                distance,
            });
        }
        Ok(c)
    }
}

pub fn parse_covering(bytes: &[u8]) -> Result<CoveringMap> {
    let doc: CoveringDocument = serde_json::from_slice(bytes).map_err(json_error)?;
    doc.decode()
}

pub fn serialize_covering(doc: &CoveringDocument) -> String {
    to_json(doc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotOptions {
    pub name: String,
    pub labels: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            name: "G".into(),
            labels: true,
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One statement per edge, so parallel edges and loops keep their
/// multiplicity. Labels become `label` attributes.
pub fn export_dot(g: &Multigraph, ids: Option<&[String]>, options: &DotOptions) -> String {
    let name = |v: usize| ids.map_or_else(|| v.to_string(), |ids| ids[v].clone());
    let mut out = format!("graph {} {{\n", quote(&options.name));
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "  {};", quote(&name(v)));
    }
    for e in g.edges() {
        let _ = write!(out, "  {} -- {}", quote(&name(e.u)), quote(&name(e.v)));
        if let (true, Some(l)) = (options.labels, e.label) {
            let _ = write!(out, " [label=\"{l}\"]");
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

pub const CSV_HEADER: &str = "level,index,value,in_target";

/// One row per eigenvalue. `in_target` is empty when no target was given.
pub fn export_csv<'a>(reports: impl IntoIterator<Item = (u32, &'a SpectrumReport)>) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for (level, report) in reports {
        for (i, value) in report.values().iter().enumerate() {
            let flag = report
                .in_target
                .get(i)
                .map_or(String::new(), |b| b.to_string());
            let _ = writeln!(out, "{level},{i},{value},{flag}");
        }
    }
    out
}
