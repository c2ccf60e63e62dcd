//! Canonical codes for pinned graphs and multigraphs.
//!
//! Codes come from an individualization–refinement search: the vertex
//! partition (inner vertices before pins) is refined by neighbour counts, the
//! first non-singleton cell is branched on, and the lexicographically largest
//! adjacency string over all discrete leaves is kept. Children that lie in the
//! same orbit of an automorphism already discovered are skipped.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, PinnedGraph};

/// Default vertex bound for [`canonical_code`].
pub const DEFAULT_CANON_LIMIT: usize = 12;

const TAG_MULTIGRAPH: u8 = 0x4d;
const TAG_PINNED: u8 = 0x50;

/// Isomorphism-invariant byte string. Pinned graphs keep inner vertices and
/// pins apart, multigraphs keep edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if !s.len().is_multiple_of(2) {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalCode)
    }

    /// Number of vertices of the encoded graph.
    pub fn vertex_count(&self) -> usize {
        self.0.get(1).copied().unwrap_or(0) as usize
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).ok_or_else(|| serde::de::Error::custom("invalid hex code"))
    }
}

/// Graphs that can be canonically encoded.
pub trait Canonize {
    /// `(tag, colour per vertex, edge list)`.
    fn colored_edges(&self) -> (u8, Vec<u8>, Vec<(usize, usize)>);

    fn canonical_code(&self) -> Result<CanonicalCode> {
        canonical_code_with_limit(self, DEFAULT_CANON_LIMIT)
    }
}

impl Canonize for Multigraph {
    fn colored_edges(&self) -> (u8, Vec<u8>, Vec<(usize, usize)>) {
        (
            TAG_MULTIGRAPH,
            vec![0; self.vertex_count()],
            self.edges().iter().map(|e| e.ends()).collect(),
        )
    }
}

impl Canonize for PinnedGraph {
    fn colored_edges(&self) -> (u8, Vec<u8>, Vec<(usize, usize)>) {
        (
            TAG_PINNED,
            (0..self.vertex_count()).map(|v| self.is_pin(v) as u8).collect(),
            self.edges().iter().map(|e| e.ends()).collect(),
        )
    }
}

/// Canonical code with the default bound of [`DEFAULT_CANON_LIMIT`] vertices.
pub fn canonical_code<G: Canonize + ?Sized>(g: &G) -> Result<CanonicalCode> {
    canonical_code_with_limit(g, DEFAULT_CANON_LIMIT)
}

pub fn canonical_code_with_limit<G: Canonize + ?Sized>(g: &G, limit: usize) -> Result<CanonicalCode> {
    Ok(canonical_form_with_limit(g, limit)?.0)
}

/// Canonical code together with the labelling that produced it:
/// `order[k]` is the vertex placed at canonical position `k`.
pub fn canonical_form_with_limit<G: Canonize + ?Sized>(
    g: &G,
    limit: usize,
) -> Result<(CanonicalCode, Vec<usize>)> {
    let (tag, colors, edges) = g.colored_edges();
    let n = colors.len();
    if n > limit || n > u8::MAX as usize {
        return Err(Error::SizeLimit { actual: n, limit });
    }
    let mut adj = vec![vec![0u8; n]; n];
    for (a, b) in edges {
        adj[a][b] = adj[a][b].saturating_add(1);
        adj[b][a] = adj[b][a].saturating_add(1);
    }
    let mut header = vec![tag, n as u8];
    let max_color = colors.iter().copied().max().unwrap_or(0);
    for c in 0..=max_color.max(1) {
        header.push(colors.iter().filter(|&&x| x == c).count() as u8);
    }

    let mut initial: Vec<Vec<usize>> = Vec::new();
    for c in 0..=max_color {
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == c).collect();
        if !cell.is_empty() {
            initial.push(cell);
        }
    }
    let mut search = Search {
        adj: &adj,
        best: None,
        automorphisms: Vec::new(),
    };
    let root = refine(&adj, initial);
    search.visit(root, &mut Vec::new());
    let (body, order) = search.best.unwrap_or_default();
    header.extend(body);
    Ok((CanonicalCode(header), order))
}

/// Equitable refinement: split cells by neighbour counts into every cell until stable.
fn refine(adj: &[Vec<u8>], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = adj.len();
    loop {
        let mut cell_of = vec![0usize; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let signature = |v: usize| -> Vec<u32> {
            let mut s = vec![0u32; cells.len()];
            for (u, &m) in adj[v].iter().enumerate() {
                s[cell_of[u]] += m as u32;
            }
            s
        };
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

struct Search<'a> {
    adj: &'a [Vec<u8>],
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf_code(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut code = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                code.push(self.adj[order[i]][order[j]]);
            }
        }
        code
    }

    fn visit(&mut self, cells: Vec<Vec<usize>>, path: &mut Vec<usize>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = self.leaf_code(&order);
            match &self.best {
                Some((best, best_order)) if *best == code => {
                    let mut sigma = vec![0; order.len()];
                    for (k, &v) in best_order.iter().enumerate() {
                        sigma[v] = order[k];
                    }
                    self.automorphisms.push(sigma);
                }
                Some((best, _)) if *best > code => {}
                _ => self.best = Some((code, order)),
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !tried.is_empty() && self.same_orbit(v, &tried, path) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            let refined = refine(self.adj, child);
            self.visit(refined, path);
            path.pop();
            tried.push(v);
        }
    }

    /// Whether `v` shares an orbit with a tried vertex under the known
    /// automorphisms fixing `path` pointwise.
    fn same_orbit(&self, v: usize, tried: &[usize], path: &[usize]) -> bool {
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for sigma in &self.automorphisms {
            if path.iter().any(|&p| sigma[p] != p) {
                continue;
            }
            any = true;
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, sigma[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::*;
    use crate::graph::split_contracted_vertex;

    #[test]
    fn relabelled_dyad_has_same_code() {
        let a = dyad();
        let b = PinnedGraph::from_parts(
            &[
                ("q", crate::graph::VertexKind::Pinned),
                ("x", crate::graph::VertexKind::Inner),
                ("r", crate::graph::VertexKind::Pinned),
            ],
            &[(1, 2), (0, 1)],
        )
        .unwrap();
        assert_eq!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
    }

    #[test]
    fn dyad_differs_from_doubled_edge() {
        assert_ne!(
            canonical_code(&dyad()).unwrap(),
            canonical_code(&doubled_edge()).unwrap()
        );
    }

    #[test]
    fn triad_differs_from_two_pin_split() {
        assert_ne!(
            canonical_code(&triad()).unwrap(),
            canonical_code(&k4_two_pin()).unwrap()
        );
    }

    #[test]
    fn splits_of_k4_into_two_pins_are_one_class() {
        let k4 = Multigraph::complete(4);
        let codes: Vec<_> = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [0, 1, 1]]
            .iter()
            .map(|a| canonical_code(&split_contracted_vertex(&k4, 2, a).unwrap()).unwrap())
            .collect();
        assert!(codes.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn size_limit_enforced() {
        let g = Multigraph::new(13);
        assert_eq!(
            canonical_code(&g),
            Err(Error::SizeLimit { actual: 13, limit: 12 })
        );
        assert!(canonical_code_with_limit(&g, 13).is_ok());
    }

    #[test]
    fn hex_round_trip() {
        let c = canonical_code(&triad()).unwrap();
        assert_eq!(CanonicalCode::from_hex(&c.to_hex()), Some(c));
    }

    #[test]
    fn symmetric_graphs_finish_quickly() {
        // many identical dyads on the same two pins: factorial without orbit pruning
        let mut g = PinnedGraph::new();
        let p = g.add_pin("p").unwrap().0;
        let q = g.add_pin("q").unwrap().0;
        for i in 0..14 {
            let v = g.add_inner(format!("v{i}")).unwrap().0;
            g.add_edge(v, p).unwrap();
            g.add_edge(v, q).unwrap();
        }
        assert!(canonical_code_with_limit(&g, 32).is_ok());
        assert!(canonical_code_with_limit(&Multigraph::complete(9), 32).is_ok());
    }
}
