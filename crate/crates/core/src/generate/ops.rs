//! Construction moves on multigraphs and pinned graphs.
//!
//! New vertices are always appended; edges that survive a move keep their
//! relative order and new edges go at the end.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{contract_pins, contracted_pin_vertex, split_contracted_vertex, Multigraph, PinnedGraph};
use crate::pebble::is_circuit;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidOperation(msg.into())
}

fn fresh(labels: &[String], stem: &str) -> String {
    let taken: HashSet<&str> = labels.iter().map(String::as_str).collect();
    (labels.len()..)
        .map(|k| format!("{stem}{k}"))
        .find(|l| !taken.contains(l.as_str()))
        .unwrap()
}

fn check_vertex(n: usize, v: usize) -> Result<()> {
    if v >= n {
        return Err(Error::UnknownVertex(v));
    }
    Ok(())
}

/// Adds a vertex joined to `u` and `w`.
pub fn vertex_addition(g: &Multigraph, u: usize, w: usize) -> Result<Multigraph> {
    check_vertex(g.vertex_count(), u)?;
    check_vertex(g.vertex_count(), w)?;
    if u == w {
        return Err(invalid("vertex addition needs two distinct vertices"));
    }
    let mut out = g.clone();
    let v = out.add_vertex(fresh(g.labels(), "v")).0;
    out.add_edge(v, u)?;
    out.add_edge(v, w)?;
    Ok(out)
}

/// Replaces edge `e = uw` by a new vertex joined to `u`, `w` and `x`.
pub fn edge_split(g: &Multigraph, e: usize, x: usize) -> Result<Multigraph> {
    if e >= g.edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    check_vertex(g.vertex_count(), x)?;
    let (u, w) = g.edge(e).ends();
    if x == u || x == w {
        return Err(invalid("edge split: third neighbour is an endpoint of the split edge"));
    }
    let mut out = g.without_edge(e);
    let v = out.add_vertex(fresh(g.labels(), "v")).0;
    out.add_edge(v, u)?;
    out.add_edge(v, w)?;
    out.add_edge(v, x)?;
    Ok(out)
}

/// Glues `c2` onto `c1` along `e1` and `e2` and deletes the glued edge.
///
/// With `flip == false` the first endpoint of `e2` is identified with the
/// first endpoint of `e1`. The vertices of `c1` keep their indices; those of
/// `c2` except the glued pair follow. Inputs that are not rigidity circuits
/// are accepted with a logged warning.
pub fn two_sum(c1: &Multigraph, c2: &Multigraph, e1: usize, e2: usize, flip: bool) -> Result<Multigraph> {
    if e1 >= c1.edge_count() {
        return Err(Error::UnknownEdge(e1));
    }
    if e2 >= c2.edge_count() {
        return Err(Error::UnknownEdge(e2));
    }
    for (name, c) in [("first", c1), ("second", c2)] {
        if !is_circuit(c) {
            log::warn!("two_sum: {name} operand is not a rigidity circuit");
        }
    }
    let (a1, b1) = c1.edge(e1).ends();
    let (mut a2, mut b2) = c2.edge(e2).ends();
    if flip {
        std::mem::swap(&mut a2, &mut b2);
    }
    let mut out = c1.without_edge(e1);
    let mut pos = vec![usize::MAX; c2.vertex_count()];
    pos[a2] = a1;
    pos[b2] = b1;
    for v in 0..c2.vertex_count() {
        if v != a2 && v != b2 {
            let label = fresh(out.labels(), "v");
            pos[v] = out.add_vertex(label).0;
        }
    }
    for (i, e) in c2.edges().iter().enumerate() {
        if i != e2 {
            let (a, b) = e.ends();
            out.add_edge(pos[a], pos[b])?;
        }
    }
    Ok(out)
}

/// Splits `v` into `v` and a new vertex `v'` joined by an edge.
///
/// The edges in `moved` (all incident to `v`) are re-attached to `v'`, and
/// `v'` also gets a copy of `shared`, an incident edge of `v` that stays. Both
/// vertices must end with degree at least three.
pub fn vertex_split(c: &Multigraph, v: usize, shared: usize, moved: &[usize]) -> Result<Multigraph> {
    check_vertex(c.vertex_count(), v)?;
    let incident = c.incident_edges(v);
    validate_split(&incident, shared, moved)?;
    let u = c.edge(shared).other(v);
    let mut out = Multigraph::new(0);
    for l in c.labels() {
        out.add_vertex(l.as_str());
    }
    let v2 = c.vertex_count();
    out.add_vertex(fresh(c.labels(), "v"));
    for (i, e) in c.edges().iter().enumerate() {
        let (a, b) = e.ends();
        if moved.contains(&i) {
            out.add_edge(e.other(v), v2)?;
        } else {
            out.add_edge(a, b)?;
        }
    }
    out.add_edge(v, v2)?;
    out.add_edge(v2, u)?;
    Ok(out)
}

fn validate_split(incident: &[usize], shared: usize, moved: &[usize]) -> Result<()> {
    if !incident.contains(&shared) {
        return Err(Error::UnknownEdge(shared));
    }
    let distinct: HashSet<usize> = moved.iter().copied().collect();
    if distinct.len() != moved.len() || moved.iter().any(|e| !incident.contains(e)) || distinct.contains(&shared) {
        return Err(invalid("vertex split: moved edges must be distinct incident edges other than the shared one"));
    }
    // degrees after the split: |moved| + 2 and deg - |moved| + 1
    if moved.is_empty() || incident.len() - moved.len() < 2 {
        return Err(invalid("vertex split: both new vertices need degree at least three"));
    }
    Ok(())
}

/// Edge split inside a pinned graph; the new vertex is inner.
///
/// At most one neighbour of the new vertex may be a pin, so the pin
/// contraction undergoes an ordinary edge split.
pub fn pinned_edge_split(g: &PinnedGraph, e: usize, x: usize) -> Result<PinnedGraph> {
    if e >= g.edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    check_vertex(g.vertex_count(), x)?;
    let (u, w) = g.edge(e).ends();
    if x == u || x == w {
        return Err(invalid("edge split: third neighbour is an endpoint of the split edge"));
    }
    if [u, w, x].iter().filter(|&&t| g.is_pin(t)).count() > 1 {
        return Err(invalid("edge split: new vertex would be attached to two pins"));
    }
    let mut out = g.without_edge(e);
    let v = out.add_inner(fresh(g.labels(), "v"))?.0;
    out.add_edge(v, u)?;
    out.add_edge(v, w)?;
    out.add_edge(v, x)?;
    Ok(out)
}

/// Vertex split of an inner vertex of a pinned graph; see [`vertex_split`].
pub fn pinned_vertex_split(g: &PinnedGraph, v: usize, shared: usize, moved: &[usize]) -> Result<PinnedGraph> {
    check_vertex(g.vertex_count(), v)?;
    if !g.is_inner(v) {
        return Err(invalid("vertex split: only inner vertices can be split"));
    }
    validate_split(&g.incident_edges(v), shared, moved)?;
    let u = g.edge(shared).other(v);
    let pins_on_new = moved.iter().filter(|&&i| g.is_pin(g.edge(i).other(v))).count() + g.is_pin(u) as usize;
    if pins_on_new > 1 {
        return Err(invalid("vertex split: new vertex would be attached to two pins"));
    }
    let mut out = PinnedGraph::new();
    for w in 0..g.vertex_count() {
        out.add_vertex(g.label(w), g.kind(w))?;
    }
    let v2 = out.add_inner(fresh(g.labels(), "v"))?.0;
    for (i, e) in g.edges().iter().enumerate() {
        let (a, b) = e.ends();
        if moved.contains(&i) {
            out.add_edge(e.other(v), v2)?;
        } else {
            out.add_edge(a, b)?;
        }
    }
    out.add_edge(v, v2)?;
    out.add_edge(v2, u)?;
    Ok(out)
}

/// Redistributes the pin-incident edges over a new pin set.
///
/// `assignment[k]` is the new pin (labels `0..k`, at least two, none empty)
/// of the `k`-th pin-incident edge in edge order. The pin contraction is
/// unchanged.
pub fn pin_rearrangement(g: &PinnedGraph, assignment: &[usize]) -> Result<PinnedGraph> {
    let g = g.without_isolated_pins();
    let m = contract_pins(&g);
    split_contracted_vertex(&m, contracted_pin_vertex(&g), assignment)
}

/// 2-sum of two pinned graphs through one pin edge each.
///
/// `e1 = (a1, q1)` and `e2 = (a2, q2)` must each join an inner vertex to a
/// pin. The inner vertices `a1, a2` are identified, the pins `q1, q2` are
/// identified, both glued edges are deleted, and the merged pin is dropped if
/// it is left without edges. On pin contractions this is the 2-sum along the
/// two edges into the contracted pin.
pub fn two_sum_pinned(g1: &PinnedGraph, e1: usize, g2: &PinnedGraph, e2: usize) -> Result<PinnedGraph> {
    let ends = |g: &PinnedGraph, e: usize| -> Result<(usize, usize)> {
        if e >= g.edge_count() {
            return Err(Error::UnknownEdge(e));
        }
        let (a, b) = g.edge(e).ends();
        match (g.is_inner(a), g.is_inner(b)) {
            (true, false) => Ok((a, b)),
            (false, true) => Ok((b, a)),
            _ => Err(invalid("pinned 2-sum: glue edges must join an inner vertex to a pin")),
        }
    };
    let (a1, q1) = ends(g1, e1)?;
    let (a2, q2) = ends(g2, e2)?;
    let mut out = g1.without_edge(e1);
    let mut pos = vec![usize::MAX; g2.vertex_count()];
    pos[a2] = a1;
    pos[q2] = q1;
    for v in 0..g2.vertex_count() {
        if v != a2 && v != q2 {
            let stem = if g2.is_pin(v) { "p" } else { "v" };
            let label = if out.find(g2.label(v)).is_none() {
                g2.label(v).to_string()
            } else {
                fresh(out.labels(), stem)
            };
            pos[v] = out.add_vertex(label, g2.kind(v))?.0;
        }
    }
    for (i, e) in g2.edges().iter().enumerate() {
        if i != e2 {
            let (a, b) = e.ends();
            out.add_edge(pos[a], pos[b])?;
        }
    }
    Ok(out.without_isolated_pins())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assur::{is_assur, AssurOptions};
    use crate::canon::canonical_code;
    use crate::counting::{circuit_oracle, laman_independent_oracle};
    use crate::graph::catalog::*;
    use crate::pebble::is_isostatic;

    fn assur(g: &PinnedGraph) -> bool {
        let v = is_assur(g, &AssurOptions::default()).unwrap();
        assert!(!v.disagreement, "{v:?}");
        v.overall
    }

    #[test]
    fn vertex_additions_stay_independent() {
        let mut g = Multigraph::from_edges(2, &[(0, 1)]).unwrap();
        for k in 0..5 {
            g = vertex_addition(&g, k, k + 1).unwrap();
            assert!(laman_independent_oracle(&g).unwrap());
        }
        let tri = vertex_addition(&Multigraph::from_edges(2, &[(0, 1)]).unwrap(), 0, 1).unwrap();
        assert_eq!(canonical_code(&tri), canonical_code(&Multigraph::complete(3)));
        assert!(is_isostatic(&vertex_addition(&tri, 0, 2).unwrap()));
        assert!(vertex_addition(&tri, 1, 1).is_err());
    }

    #[test]
    fn edge_split_of_k4_is_the_wheel() {
        let g = edge_split(&Multigraph::complete(4), 0, 2).unwrap();
        assert!(circuit_oracle(&g).unwrap());
        assert_eq!(canonical_code(&g), canonical_code(&wheel(4)));
        assert!(edge_split(&Multigraph::complete(4), 0, 1).is_err());
        let tri = Multigraph::complete(3);
        assert!(is_isostatic(&edge_split(&tri, 0, 2).unwrap()));
    }

    #[test]
    fn two_sums() {
        let k4 = Multigraph::complete(4);
        let g = two_sum(&k4, &k4, 0, 0, false).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 10));
        assert!(circuit_oracle(&g).unwrap());
        let h = two_sum(&doubled_edge(), &k4, 0, 3, true).unwrap();
        assert_eq!(canonical_code(&h), canonical_code(&k4));
    }

    #[test]
    fn vertex_splits() {
        let k4 = Multigraph::complete(4);
        let inc = k4.incident_edges(0);
        let g = vertex_split(&k4, 0, inc[0], &[inc[1]]).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&wheel(4)));
        let w = wheel(5);
        let hub = w.incident_edges(5);
        let h = vertex_split(&w, 5, hub[0], &[hub[1], hub[2]]).unwrap();
        assert_eq!(h.vertex_count(), 7);
        assert!(circuit_oracle(&h).unwrap());
        assert!(vertex_split(&k4, 0, inc[0], &[]).is_err());
        assert!(vertex_split(&k4, 0, inc[0], &[inc[1], inc[2]]).is_err());
    }

    #[test]
    fn pinned_moves_keep_assur() {
        let t = triad();
        // edge 0 is a-b, both inner
        let g = pinned_edge_split(&t, 0, 5).unwrap();
        assert_eq!(g.inner_count(), 4);
        assert!(assur(&g));
        assert!(pinned_edge_split(&t, 3, 4).is_err());
        let inc = t.incident_edges(0);
        // a: edges a-b, a-c, a-p1; move a-c, keep a-b shared
        let s = pinned_vertex_split(&t, 0, inc[0], &[inc[1]]).unwrap();
        assert!(assur(&s));
    }

    #[test]
    fn pin_rearrangements() {
        let merged = pin_rearrangement(&triad(), &[0, 0, 1]).unwrap();
        assert_eq!(merged.pin_count(), 2);
        assert!(assur(&merged));
        assert_eq!(canonical_code(&contract_pins(&merged)), canonical_code(&contract_pins(&triad())));
        let swapped = pin_rearrangement(&dyad(), &[1, 0]).unwrap();
        assert_eq!(canonical_code(&swapped), canonical_code(&dyad()));
        assert_eq!(pin_rearrangement(&dyad(), &[0, 0]), Err(Error::TooFewPins(1)));
        assert_eq!(pin_rearrangement(&triad(), &[0, 2, 2]), Err(Error::EmptyPin(1)));
    }

    #[test]
    fn pinned_two_sum_is_assur_with_one_pin_removed() {
        let t = triad();
        // edges 3..6 are pin edges a-p1, b-p2, c-p3
        let g = two_sum_pinned(&t, 3, &t, 3).unwrap();
        assert_eq!(g.inner_count(), 5);
        assert_eq!(g.pin_count(), 4);
        assert!(assur(&g));
        let m = two_sum(&contract_pins(&t), &contract_pins(&t), 3, 3, false).unwrap();
        assert_eq!(canonical_code(&contract_pins(&g)), canonical_code(&m));
        assert!(two_sum_pinned(&t, 0, &t, 3).is_err());
    }
}
