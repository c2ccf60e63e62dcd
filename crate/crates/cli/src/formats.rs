//! JSON file formats read and written by the command line tool.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use assur_core::{LinkageSchema, Multigraph, PinnedGraph, VertexKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Inner,
    Pinned,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<[f64; 2]>,
}

/// A pinned graph: vertices with their kind, edges as pairs of vertex ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[String; 2]>,
}

impl GraphFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing graph file {}", path.display()))
    }

    /// Builds the pinned graph. Edges joining two pins carry no information
    /// and are skipped with a warning.
    pub fn to_graph(&self) -> Result<PinnedGraph> {
        let mut g = PinnedGraph::new();
        for v in &self.vertices {
            let kind = match v.kind {
                Kind::Inner => VertexKind::Inner,
                Kind::Pinned => VertexKind::Pinned,
            };
            g.add_vertex(v.id.as_str(), kind)?;
        }
        for [a, b] in &self.edges {
            let u = lookup(&g, a)?;
            let w = lookup(&g, b)?;
            if g.is_pin(u) && g.is_pin(w) {
                log::warn!("dropping edge {a}-{b}: both ends are pinned");
                continue;
            }
            g.add_edge(u, w).with_context(|| format!("edge {a}-{b}"))?;
        }
        Ok(g)
    }

    /// Positions given in the file, by vertex id.
    pub fn positions(&self) -> BTreeMap<String, [f64; 2]> {
        self.vertices
            .iter()
            .filter_map(|v| v.pos.map(|p| (v.id.clone(), p)))
            .collect()
    }

    pub fn from_graph(g: &PinnedGraph) -> Self {
        GraphFile {
            vertices: (0..g.vertex_count())
                .map(|v| VertexEntry {
                    id: g.label(v).to_string(),
                    kind: if g.is_pin(v) { Kind::Pinned } else { Kind::Inner },
                    pos: None,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = e.ends();
                    [g.label(a).to_string(), g.label(b).to_string()]
                })
                .collect(),
        }
    }

    /// A plain graph written with every vertex inner.
    pub fn from_multigraph(m: &Multigraph) -> Self {
        GraphFile {
            vertices: (0..m.vertex_count())
                .map(|v| VertexEntry {
                    id: m.label(v).to_string(),
                    kind: Kind::Inner,
                    pos: None,
                })
                .collect(),
            edges: m
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = e.ends();
                    [m.label(a).to_string(), m.label(b).to_string()]
                })
                .collect(),
        }
    }
}

pub fn lookup(g: &PinnedGraph, id: &str) -> Result<usize> {
    match g.find(id) {
        Some(v) => Ok(v),
        None => bail!("unknown vertex {id:?}"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub id: String,
    #[serde(default)]
    pub driver: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointEntry {
    pub incident: Vec<String>,
}

/// A linkage: links (some marked as drivers), the ground link, and joints
/// listing the links they pin together.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkageFile {
    pub links: Vec<LinkEntry>,
    pub ground: String,
    pub joints: Vec<JointEntry>,
}

impl LinkageFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing linkage file {}", path.display()))
    }

    pub fn to_schema(&self) -> Result<LinkageSchema> {
        let links: Vec<&str> = self.links.iter().map(|l| l.id.as_str()).collect();
        let joints: Vec<Vec<&str>> = self
            .joints
            .iter()
            .map(|j| j.incident.iter().map(String::as_str).collect())
            .collect();
        let drivers: Vec<&str> = self.links.iter().filter(|l| l.driver).map(|l| l.id.as_str()).collect();
        Ok(LinkageSchema::new(&links, &self.ground, &joints, &drivers)?)
    }
}

/// Vertex positions for a motion analysis, keyed by vertex id.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, [f64; 2]>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing configuration {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}
