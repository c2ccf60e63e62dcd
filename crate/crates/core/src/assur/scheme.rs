use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{compose, contract_pins, CompositionMap, PinnedGraph, VertexKind};
use crate::pebble::{all_circuits, pebble_rank, pinned_isostatic};

/// One Assur component of a decomposition.
///
/// The component graph reuses the labels of the decomposed graph, so each
/// pin names the vertex it is identified with: a ground pin or an inner
/// vertex of a lower component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssurComponent {
    pub graph: PinnedGraph,
    /// Iteration of the decomposition that extracted it, starting at 1.
    pub level: usize,
    /// Labels of its inner vertices.
    pub inner: Vec<String>,
    /// Labels of the vertices its pins are identified with.
    pub pins: Vec<String>,
}

/// Decomposition of a pinned isostatic graph into Assur components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssurScheme {
    /// Pins of the decomposed graph.
    pub ground: Vec<String>,
    /// Components sorted by level, then by inner labels.
    pub components: Vec<AssurComponent>,
    /// `(a, b)`: component `b` has a pin on an inner vertex of component `a`.
    pub covers: Vec<(usize, usize)>,
    /// Transitive closure of `covers`: `(a, b)` means `a < b`.
    pub order: Vec<(usize, usize)>,
}

impl AssurScheme {
    pub fn levels(&self) -> usize {
        self.components.iter().map(|c| c.level).max().unwrap_or(0)
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.order.binary_search(&(a, b)).is_ok()
    }

    /// Index of the component owning the inner vertex `label`.
    pub fn owner(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.inner.iter().any(|l| l == label))
    }
}

/// Splits a pinned isostatic graph into its Assur components.
///
/// Each round contracts the current ground (original pins plus every vertex
/// already extracted) to one vertex and runs the pebble game; the
/// fundamental circuits of the rejected edges, re-split onto the ground
/// vertices they touch, are the components of that round. Their inner
/// vertices then join the ground.
pub fn decompose(g: &PinnedGraph) -> Result<AssurScheme> {
    let g = g.without_isolated_pins();
    if !pinned_isostatic(&g)? {
        return Err(Error::NotPinnedIsostatic);
    }
    let n = g.vertex_count();
    let mut grounded: Vec<bool> = (0..n).map(|v| g.is_pin(v)).collect();
    let mut components = Vec::new();
    let mut level = 0;
    while grounded.iter().any(|&x| !x) {
        level += 1;
        // remaining vertices are inner, ground vertices are pins, and only
        // edges with a remaining endpoint are kept
        let mut h = PinnedGraph::new();
        for v in 0..n {
            let kind = if grounded[v] { VertexKind::Pinned } else { VertexKind::Inner };
            h.add_vertex(g.label(v), kind)?;
        }
        let mut edge_of = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (a, b) = e.ends();
            if !grounded[a] || !grounded[b] {
                h.add_edge(a, b)?;
                edge_of.push(i);
            }
        }
        let m = contract_pins(&h);
        let circuits = all_circuits(&m, &pebble_rank(&m, None));
        if circuits.is_empty() {
            return Err(Error::NotPinnedIsostatic);
        }
        let mut extracted = Vec::new();
        for c in circuits {
            let edges: Vec<usize> = c.iter().map(|&i| edge_of[i]).collect();
            let comp = component(&g, &edges, &grounded, level)?;
            extracted.extend(comp.inner.iter().map(|l| g.find(l).unwrap()));
            components.push(comp);
        }
        for v in extracted {
            grounded[v] = true;
        }
    }
    components.sort_by(|a, b| (a.level, &a.inner).cmp(&(b.level, &b.inner)));

    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (k, c) in components.iter().enumerate() {
        for l in &c.inner {
            owner.insert(l.as_str(), k);
        }
    }
    let mut covers = BTreeSet::new();
    for (b, c) in components.iter().enumerate() {
        for p in &c.pins {
            if let Some(&a) = owner.get(p.as_str()) {
                covers.insert((a, b));
            }
        }
    }
    let covers: Vec<(usize, usize)> = covers.into_iter().collect();
    let order = transitive_closure(components.len(), &covers);
    Ok(AssurScheme {
        ground: g.pins().into_iter().map(|p| g.label(p).to_string()).collect(),
        components,
        covers,
        order,
    })
}

fn component(g: &PinnedGraph, edges: &[usize], grounded: &[bool], level: usize) -> Result<AssurComponent> {
    let mut inner = BTreeSet::new();
    let mut pins = BTreeSet::new();
    for &i in edges {
        let (a, b) = g.edge(i).ends();
        for v in [a, b] {
            if grounded[v] {
                pins.insert(v);
            } else {
                inner.insert(v);
            }
        }
    }
    let mut c = PinnedGraph::new();
    let mut pos = BTreeMap::new();
    for &v in &inner {
        pos.insert(v, c.add_inner(g.label(v))?.0);
    }
    for &v in &pins {
        pos.insert(v, c.add_pin(g.label(v))?.0);
    }
    for &i in edges {
        let (a, b) = g.edge(i).ends();
        c.add_edge(pos[&a], pos[&b])?;
    }
    Ok(AssurComponent {
        graph: c,
        level,
        inner: inner.iter().map(|&v| g.label(v).to_string()).collect(),
        pins: pins.iter().map(|&v| g.label(v).to_string()).collect(),
    })
}

fn transitive_closure(n: usize, covers: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut above = vec![BTreeSet::new(); n];
    for &(a, b) in covers {
        above[a].insert(b);
    }
    // components are sorted by level and covers point upward, so a reverse
    // sweep sees every successor's closure first
    for a in (0..n).rev() {
        let direct: Vec<usize> = above[a].iter().copied().collect();
        for b in direct {
            let far: Vec<usize> = above[b].iter().copied().collect();
            above[a].extend(far);
        }
    }
    let mut out: Vec<(usize, usize)> = (0..n).flat_map(|a| above[a].iter().map(move |&b| (a, b))).collect();
    out.sort_unstable();
    out
}

/// Rebuilds a pinned graph from a scheme by composing components level by
/// level onto the ground.
pub fn recompose(s: &AssurScheme) -> Result<PinnedGraph> {
    let mut g = PinnedGraph::new();
    for l in &s.ground {
        g.add_pin(l.as_str())?;
    }
    let mut comps: Vec<&AssurComponent> = s.components.iter().collect();
    comps.sort_by_key(|c| c.level);
    for c in comps {
        let h = &c.graph;
        let mut map = CompositionMap::new();
        for q in h.pins() {
            let label = h.label(q);
            let target = g.find(label).ok_or_else(|| Error::DanglingPin(label.to_string()))?;
            map.insert(q, target);
        }
        g = compose(h, &g, &map)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assur::{is_assur, AssurOptions};
    use crate::canon::canonical_code;
    use crate::graph::catalog::*;

    #[test]
    fn dyad_is_one_component() {
        let s = decompose(&dyad()).unwrap();
        assert_eq!(s.components.len(), 1);
        assert!(s.order.is_empty());
        assert_eq!(canonical_code(&recompose(&s).unwrap()), canonical_code(&dyad()));
    }

    #[test]
    fn stacked_dyads_chain() {
        let g = stacked_dyads();
        let s = decompose(&g).unwrap();
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.components[0].inner, vec!["a"]);
        assert_eq!(s.components[1].inner, vec!["b"]);
        assert_eq!(s.components[1].level, 2);
        assert_eq!(s.covers, vec![(0, 1)]);
        assert!(s.precedes(0, 1) && !s.precedes(1, 0));
        for c in &s.components {
            assert_eq!(canonical_code(&c.graph), canonical_code(&dyad()));
        }
        assert_eq!(canonical_code(&recompose(&s).unwrap()), canonical_code(&g));
    }

    #[test]
    fn triad_on_triad_two_levels() {
        let map = CompositionMap::from_pairs(&[(3, 0), (4, 1), (5, 2)]);
        let g = compose(&triad(), &triad(), &map).unwrap();
        let s = decompose(&g).unwrap();
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.levels(), 2);
        for c in &s.components {
            assert!(is_assur(&c.graph, &AssurOptions::default()).unwrap().overall);
        }
        let back = recompose(&s).unwrap();
        assert_eq!(canonical_code(&back), canonical_code(&g));
    }

    #[test]
    fn chain_of_three_has_transitive_order() {
        // dyads a on (p1,p2), b on (a,p1), c on (b,p2)
        let mut g = stacked_dyads();
        let c = g.add_inner("c").unwrap().0;
        g.add_edge(c, 1).unwrap();
        g.add_edge(c, 3).unwrap();
        let s = decompose(&g).unwrap();
        assert_eq!(s.components.len(), 3);
        assert_eq!(s.covers, vec![(0, 1), (1, 2)]);
        assert_eq!(s.order, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn non_isostatic_rejected() {
        assert_eq!(decompose(&dyad().without_edge(0).without_isolated_pins()).unwrap_err(), Error::TooFewPins(1));
        assert_eq!(decompose(&triad().without_edge(0)).unwrap_err(), Error::NotPinnedIsostatic);
    }

    #[test]
    fn dangling_pin_reported() {
        let mut s = decompose(&stacked_dyads()).unwrap();
        s.components.remove(0);
        assert!(matches!(recompose(&s), Err(Error::DanglingPin(_))));
    }
}
