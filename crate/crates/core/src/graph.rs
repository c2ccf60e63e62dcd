//! Graph types shared by every analysis: unpinned multigraphs, pinned graphs
//! `G(I, P; E)`, pin contraction and splitting, and linkage composition.
//!
//! Vertices are dense indices wrapped in [`VertexId`]; each vertex also carries
//! a human-readable label that survives contraction, composition and
//! decomposition so results can be reported in the caller's vocabulary.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v)
    }
}

/// Whether a vertex of a pinned graph is free to move or fixed to the ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Inner,
    Pinned,
}

/// An undirected edge; endpoint order is the insertion order and carries no meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge(VertexId(u), VertexId(v))
    }

    pub fn ends(self) -> (usize, usize) {
        (self.0 .0, self.1 .0)
    }

    pub fn touches(self, v: usize) -> bool {
        self.0 .0 == v || self.1 .0 == v
    }

    /// The endpoint opposite `v`, assuming `v` is an endpoint.
    pub fn other(self, v: usize) -> usize {
        if self.0 .0 == v {
            self.1 .0
        } else {
            self.0 .0
        }
    }

    fn key(self) -> (usize, usize) {
        let (a, b) = self.ends();
        (a.min(b), a.max(b))
    }
}

pub(crate) fn fresh_label(taken: &HashSet<String>, base: &str) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}~{k}"))
        .find(|l| !taken.contains(l))
        .unwrap()
}

/// Loop-free graph allowing parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

impl Multigraph {
    /// `n` vertices labelled `0..n` and no edges.
    pub fn new(n: usize) -> Self {
        Multigraph {
            labels: (0..n).map(|i| i.to_string()).collect(),
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.edges.push(Edge::new(u, v));
            }
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.labels.push(label.into());
        VertexId(self.labels.len() - 1)
    }

    /// Adds an edge and returns its index.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        let n = self.vertex_count();
        if u >= n {
            return Err(Error::UnknownVertex(u));
        }
        if v >= n {
            return Err(Error::UnknownVertex(v));
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        self.edges.push(Edge::new(u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = label.into();
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Indices of edges incident to `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].touches(v))
            .collect()
    }

    /// Neighbours of `v` with multiplicity, in edge order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect()
    }

    /// Number of edges joining `u` and `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.iter().filter(|e| e.key() == key).count()
    }

    /// First edge joining `u` and `v`.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|e| e.key() == key)
    }

    pub fn has_isolated_vertex(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        for e in &self.edges {
            let (a, b) = e.ends();
            seen[a] = true;
            seen[b] = true;
        }
        seen.iter().any(|s| !s)
    }

    /// Copy without edge `i`.
    pub fn without_edge(&self, i: usize) -> Multigraph {
        let mut g = self.clone();
        g.edges.remove(i);
        g
    }

    /// Copy without vertex `v` and its edges; later vertices shift down by one.
    pub fn without_vertex(&self, v: usize) -> Multigraph {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let mut labels = self.labels.clone();
        labels.remove(v);
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.touches(v))
            .map(|e| {
                let (a, b) = e.ends();
                Edge::new(shift(a), shift(b))
            })
            .collect();
        Multigraph { labels, edges }
    }

    /// Subgraph induced on `keep` (in that order) with vertices renumbered.
    pub fn induced(&self, keep: &[usize]) -> Multigraph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = e.ends();
                (pos[a] != usize::MAX && pos[b] != usize::MAX).then(|| Edge::new(pos[a], pos[b]))
            })
            .collect();
        Multigraph {
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            edges,
        }
    }

    /// Same edges listed in a different order; `order` is a permutation of edge indices.
    pub fn with_edge_order(&self, order: &[usize]) -> Multigraph {
        Multigraph {
            labels: self.labels.clone(),
            edges: order.iter().map(|&i| self.edges[i]).collect(),
        }
    }
}

/// A pinned graph `G(I, P; E)`: inner vertices `I`, pins `P`, and simple edges
/// each touching at least one inner vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinnedGraph {
    labels: Vec<String>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
}

impl Default for PinnedGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl PinnedGraph {
    pub fn new() -> Self {
        PinnedGraph {
            labels: Vec::new(),
            kinds: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(label, kind)` vertices and index pairs.
    pub fn from_parts(
        vertices: &[(&str, VertexKind)],
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let mut g = PinnedGraph::new();
        for &(label, kind) in vertices {
            g.add_vertex(label, kind)?;
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, kind: VertexKind) -> Result<VertexId> {
        let label = label.into();
        if self.labels.contains(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        self.labels.push(label);
        self.kinds.push(kind);
        Ok(VertexId(self.labels.len() - 1))
    }

    pub fn add_inner(&mut self, label: impl Into<String>) -> Result<VertexId> {
        self.add_vertex(label, VertexKind::Inner)
    }

    pub fn add_pin(&mut self, label: impl Into<String>) -> Result<VertexId> {
        self.add_vertex(label, VertexKind::Pinned)
    }

    /// Adds an edge, rejecting loops, pin–pin edges and duplicates.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        let n = self.vertex_count();
        if u >= n {
            return Err(Error::UnknownVertex(u));
        }
        if v >= n {
            return Err(Error::UnknownVertex(v));
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.is_pin(u) && self.is_pin(v) {
            return Err(Error::PinPinEdge(u, v));
        }
        let e = Edge::new(u, v);
        if self.edges.iter().any(|f| f.key() == e.key()) {
            return Err(Error::ParallelEdge(u, v));
        }
        self.edges.push(e);
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn is_pin(&self, v: usize) -> bool {
        self.kinds[v] == VertexKind::Pinned
    }

    pub fn is_inner(&self, v: usize) -> bool {
        self.kinds[v] == VertexKind::Inner
    }

    pub fn inner(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_inner(v)).collect()
    }

    pub fn pins(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_pin(v)).collect()
    }

    pub fn inner_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == VertexKind::Inner).count()
    }

    pub fn pin_count(&self) -> usize {
        self.vertex_count() - self.inner_count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].touches(v))
            .collect()
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|e| e.key() == key)
    }

    /// The same vertices and edges viewed as an unpinned multigraph.
    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph {
            labels: self.labels.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn without_edge(&self, i: usize) -> PinnedGraph {
        let mut g = self.clone();
        g.edges.remove(i);
        g
    }

    /// Copy without vertex `v` and its edges; later vertices shift down by one.
    pub fn without_vertex(&self, v: usize) -> PinnedGraph {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let mut labels = self.labels.clone();
        labels.remove(v);
        let mut kinds = self.kinds.clone();
        kinds.remove(v);
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.touches(v))
            .map(|e| {
                let (a, b) = e.ends();
                Edge::new(shift(a), shift(b))
            })
            .collect();
        PinnedGraph {
            labels,
            kinds,
            edges,
        }
    }

    /// Drops pins without edges; they take no part in any analysis.
    pub fn without_isolated_pins(&self) -> PinnedGraph {
        let mut g = self.clone();
        for v in (0..g.vertex_count()).rev() {
            if g.is_pin(v) && g.degree(v) == 0 {
                g = g.without_vertex(v);
            }
        }
        g
    }

    /// Same graph with edges listed in `order` (a permutation of edge indices).
    pub fn with_edge_order(&self, order: &[usize]) -> PinnedGraph {
        PinnedGraph {
            labels: self.labels.clone(),
            kinds: self.kinds.clone(),
            edges: order.iter().map(|&i| self.edges[i]).collect(),
        }
    }
}

/// Identifies all pins of `g` to a single vertex `p*`.
///
/// Layout of the result: inner vertices keep their relative order at indices
/// `0..|I|`, `p*` is the last vertex, and edge `i` of the result is the image
/// of edge `i` of `g`. Parallel edges are kept.
pub fn contract_pins(g: &PinnedGraph) -> Multigraph {
    let inner = g.inner();
    let pstar = inner.len();
    let mut pos = vec![pstar; g.vertex_count()];
    for (i, &v) in inner.iter().enumerate() {
        pos[v] = i;
    }
    let mut labels: Vec<String> = inner.iter().map(|&v| g.label(v).to_string()).collect();
    let taken: HashSet<String> = labels.iter().cloned().collect();
    labels.push(fresh_label(&taken, "p*"));
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.ends();
            Edge::new(pos[a], pos[b])
        })
        .collect();
    Multigraph { labels, edges }
}

/// Index of `p*` in [`contract_pins`] output.
pub fn contracted_pin_vertex(g: &PinnedGraph) -> usize {
    g.inner_count()
}

/// Splits vertex `v` of `m` into pins.
///
/// `assignment[k]` is the pin label of the `k`-th edge incident to `v`
/// (in edge order). Labels must be exactly `0..k` for some `k >= 2`. The other
/// vertices of `m` become inner vertices in their original order, followed by
/// the pins in label order. Edge order is preserved.
pub fn split_contracted_vertex(m: &Multigraph, v: usize, assignment: &[usize]) -> Result<PinnedGraph> {
    if v >= m.vertex_count() {
        return Err(Error::UnknownVertex(v));
    }
    let incident = m.incident_edges(v);
    if incident.len() != assignment.len() {
        return Err(Error::AssignmentLength {
            expected: incident.len(),
            actual: assignment.len(),
        });
    }
    let pin_total = assignment.iter().max().map_or(0, |&l| l + 1);
    if pin_total < 2 {
        return Err(Error::TooFewPins(pin_total));
    }
    let used: BTreeSet<usize> = assignment.iter().copied().collect();
    if let Some(missing) = (0..pin_total).find(|l| !used.contains(l)) {
        return Err(Error::EmptyPin(missing));
    }

    let mut g = PinnedGraph::new();
    let mut pos = vec![usize::MAX; m.vertex_count()];
    for u in (0..m.vertex_count()).filter(|&u| u != v) {
        pos[u] = g.add_inner(m.label(u))?.0;
    }
    let mut taken: HashSet<String> = g.labels().iter().cloned().collect();
    let mut pin_ids = Vec::with_capacity(pin_total);
    for l in 0..pin_total {
        let label = fresh_label(&taken, &format!("p{l}"));
        taken.insert(label.clone());
        pin_ids.push(g.add_pin(label)?.0);
    }
    let mut next = 0;
    for e in m.edges() {
        let (a, b) = e.ends();
        if a == v || b == v {
            let pin = pin_ids[assignment[next]];
            next += 1;
            g.add_edge(pos[e.other(v)], pin)?;
        } else {
            g.add_edge(pos[a], pos[b])?;
        }
    }
    Ok(g)
}

/// Injective map from the pins of `H` to vertices of `G` used by [`compose`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionMap {
    targets: BTreeMap<usize, usize>,
}

impl CompositionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        CompositionMap {
            targets: pairs.iter().copied().collect(),
        }
    }

    pub fn insert(&mut self, pin: usize, target: usize) {
        self.targets.insert(pin, target);
    }

    pub fn get(&self, pin: usize) -> Option<usize> {
        self.targets.get(&pin).copied()
    }
}

/// Linkage composition `C(H, G)`: identifies each pin of `h` with its image in `g`.
///
/// The result contains `g` unchanged (same indices) followed by the inner
/// vertices of `h`. Inner labels of `h` that clash with labels of `g` get a
/// `~k` suffix.
pub fn compose(h: &PinnedGraph, g: &PinnedGraph, map: &CompositionMap) -> Result<PinnedGraph> {
    let mut seen = HashSet::new();
    for q in h.pins() {
        let target = map.get(q).ok_or(Error::UnmappedPin(q))?;
        if target >= g.vertex_count() {
            return Err(Error::UnknownVertex(target));
        }
        if !seen.insert(target) {
            return Err(Error::NonInjective(target));
        }
    }
    for &q in map.targets.keys() {
        if q >= h.vertex_count() || !h.is_pin(q) {
            return Err(Error::NotAPin(q));
        }
    }

    let mut out = g.clone();
    let mut taken: HashSet<String> = out.labels().iter().cloned().collect();
    let mut pos = vec![usize::MAX; h.vertex_count()];
    for w in h.inner() {
        let label = fresh_label(&taken, h.label(w));
        taken.insert(label.clone());
        pos[w] = out.add_inner(label)?.0;
    }
    for q in h.pins() {
        pos[q] = map.get(q).unwrap();
    }
    for e in h.edges() {
        let (a, b) = e.ends();
        out.add_edge(pos[a], pos[b])?;
    }
    Ok(out)
}

/// Small named graphs used throughout tests, examples and enumeration.
pub mod catalog {
    use super::*;

    /// One inner vertex on two pins.
    pub fn dyad() -> PinnedGraph {
        PinnedGraph::from_parts(
            &[("v", VertexKind::Inner), ("p1", VertexKind::Pinned), ("p2", VertexKind::Pinned)],
            &[(0, 1), (0, 2)],
        )
        .unwrap()
    }

    /// Inner triangle `a b c`, each vertex on its own pin.
    pub fn triad() -> PinnedGraph {
        PinnedGraph::from_parts(
            &[
                ("a", VertexKind::Inner),
                ("b", VertexKind::Inner),
                ("c", VertexKind::Inner),
                ("p1", VertexKind::Pinned),
                ("p2", VertexKind::Pinned),
                ("p3", VertexKind::Pinned),
            ],
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    /// Dyad `a` on `p1, p2`, then dyad `b` on `a` and `p1`.
    pub fn stacked_dyads() -> PinnedGraph {
        PinnedGraph::from_parts(
            &[
                ("a", VertexKind::Inner),
                ("b", VertexKind::Inner),
                ("p1", VertexKind::Pinned),
                ("p2", VertexKind::Pinned),
            ],
            &[(0, 2), (0, 3), (1, 0), (1, 2)],
        )
        .unwrap()
    }

    /// Dyad `a` on `p1, p2`, then dyad `b` on `a` and a third pin `p3`.
    pub fn two_dyad_chain() -> PinnedGraph {
        PinnedGraph::from_parts(
            &[
                ("a", VertexKind::Inner),
                ("b", VertexKind::Inner),
                ("p1", VertexKind::Pinned),
                ("p2", VertexKind::Pinned),
                ("p3", VertexKind::Pinned),
            ],
            &[(0, 2), (0, 3), (1, 0), (1, 4)],
        )
        .unwrap()
    }

    /// The basic Assur graph on five vertices: `K4` with one vertex split 2+1 into two pins.
    pub fn k4_two_pin() -> PinnedGraph {
        let k4 = Multigraph::complete(4);
        split_contracted_vertex(&k4, 3, &[0, 0, 1]).unwrap()
    }

    /// The wheel with `rim` rim vertices; the hub is the last vertex.
    pub fn wheel(rim: usize) -> Multigraph {
        let mut g = Multigraph::new(rim + 1);
        for i in 0..rim {
            g.add_edge(i, (i + 1) % rim).unwrap();
            g.add_edge(i, rim).unwrap();
        }
        g
    }

    /// Two vertices joined by a doubled edge: the smallest rigidity circuit.
    pub fn doubled_edge() -> Multigraph {
        Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap()
    }
}
