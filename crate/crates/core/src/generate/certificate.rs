//! Construction certificates: a base graph plus a sequence of moves that
//! rebuilds a given graph. Replaying is cheap; finding one is a search.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::ops::{
    edge_split, pin_rearrangement, pinned_edge_split, pinned_vertex_split, two_sum, vertex_addition,
    vertex_split,
};
use crate::assur::check_circuit_condition;
use crate::canon::{canonical_code_with_limit, canonical_form_with_limit, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::{catalog, contract_pins, contracted_pin_vertex, split_contracted_vertex, Multigraph, PinnedGraph};
use crate::pebble::is_circuit;

/// Default time budget of [`certify`].
pub const DEFAULT_CERTIFY_BUDGET: Duration = Duration::from_secs(10);

/// Canonical-code bound for certificates.
const LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Base {
    Dyad,
    K4,
    SingleEdge,
}

/// One move of a certificate. Indices refer to the graph built so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructionStep {
    VertexAddition {
        u: usize,
        w: usize,
    },
    EdgeSplit {
        edge: usize,
        vertex: usize,
    },
    /// Glue the circuit built by `with` onto the current one.
    TwoSum {
        with: Box<Certificate>,
        edge: usize,
        other_edge: usize,
        flip: bool,
    },
    VertexSplit {
        vertex: usize,
        shared_edge: usize,
        moved: Vec<usize>,
    },
    /// Split a vertex of the current circuit into pins.
    PinSplit {
        vertex: usize,
        assignment: Vec<usize>,
    },
    PinRearrange {
        assignment: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub base: Base,
    pub steps: Vec<ConstructionStep>,
    pub claimed: CanonicalCode,
}

/// Graph produced by replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replayed {
    Unpinned(Multigraph),
    Pinned(PinnedGraph),
}

impl Replayed {
    pub fn code(&self) -> Result<CanonicalCode> {
        match self {
            Replayed::Unpinned(m) => canonical_code_with_limit(m, LIMIT),
            Replayed::Pinned(g) => canonical_code_with_limit(g, LIMIT),
        }
    }
}

fn mismatch(msg: &str) -> Error {
    Error::InvalidOperation(format!("certificate: {msg}"))
}

/// Applies the steps in order. Circuit bases (dyad, `K4`) admit only moves
/// that keep circuits and Assur graphs; the single-edge base admits vertex
/// additions and edge splits, which keep independence.
pub fn replay(c: &Certificate) -> Result<Replayed> {
    let mut state = match c.base {
        Base::Dyad => Replayed::Pinned(catalog::dyad()),
        Base::K4 => Replayed::Unpinned(Multigraph::complete(4)),
        Base::SingleEdge => Replayed::Unpinned(Multigraph::from_edges(2, &[(0, 1)])?),
    };
    let circuit_base = c.base != Base::SingleEdge;
    for step in &c.steps {
        state = match (step, state) {
            (ConstructionStep::VertexAddition { u, w }, Replayed::Unpinned(m)) if !circuit_base => {
                Replayed::Unpinned(vertex_addition(&m, *u, *w)?)
            }
            (ConstructionStep::EdgeSplit { edge, vertex }, Replayed::Unpinned(m)) => {
                Replayed::Unpinned(edge_split(&m, *edge, *vertex)?)
            }
            (ConstructionStep::EdgeSplit { edge, vertex }, Replayed::Pinned(g)) => {
                Replayed::Pinned(pinned_edge_split(&g, *edge, *vertex)?)
            }
            (ConstructionStep::TwoSum { with, edge, other_edge, flip }, Replayed::Unpinned(m)) if circuit_base => {
                if with.base == Base::SingleEdge {
                    return Err(mismatch("2-sum operand must be built from a circuit"));
                }
                let Replayed::Unpinned(other) = replay(with)? else {
                    return Err(mismatch("2-sum operand is pinned"));
                };
                if canonical_code_with_limit(&other, LIMIT)? != with.claimed {
                    return Err(mismatch("2-sum operand does not match its claim"));
                }
                Replayed::Unpinned(two_sum(&m, &other, *edge, *other_edge, *flip)?)
            }
            (ConstructionStep::VertexSplit { vertex, shared_edge, moved }, Replayed::Unpinned(m)) if circuit_base => {
                Replayed::Unpinned(vertex_split(&m, *vertex, *shared_edge, moved)?)
            }
            (ConstructionStep::VertexSplit { vertex, shared_edge, moved }, Replayed::Pinned(g)) => {
                Replayed::Pinned(pinned_vertex_split(&g, *vertex, *shared_edge, moved)?)
            }
            (ConstructionStep::PinSplit { vertex, assignment }, Replayed::Unpinned(m)) if circuit_base => {
                Replayed::Pinned(split_contracted_vertex(&m, *vertex, assignment)?)
            }
            (ConstructionStep::PinRearrange { assignment }, Replayed::Pinned(g)) => {
                Replayed::Pinned(pin_rearrangement(&g, assignment)?)
            }
            _ => return Err(mismatch("step does not apply to the graph built so far")),
        };
    }
    Ok(state)
}

/// Replays `c` and compares the result with the claimed code.
pub fn verify_certificate(c: &Certificate) -> bool {
    match replay(c).and_then(|r| r.code()) {
        Ok(code) => code == c.claimed,
        Err(_) => false,
    }
}

/// Vertex map `a -> b` between isomorphic graphs.
fn isomorphism(a: &Multigraph, b: &Multigraph) -> Result<Vec<usize>> {
    let (ca, oa) = canonical_form_with_limit(a, LIMIT)?;
    let (cb, ob) = canonical_form_with_limit(b, LIMIT)?;
    if ca != cb {
        return Err(mismatch("rebuilt graph is not isomorphic to the target"));
    }
    let mut map = vec![0; a.vertex_count()];
    for (k, &v) in oa.iter().enumerate() {
        map[v] = ob[k];
    }
    Ok(map)
}

struct Search {
    deadline: Instant,
    k4: CanonicalCode,
    failed: HashSet<CanonicalCode>,
    timed_out: bool,
}

impl Search {
    /// Steps from `K4` building a graph isomorphic to the circuit `m`,
    /// together with that graph.
    fn reduce(&mut self, m: &Multigraph) -> Result<Option<(Vec<ConstructionStep>, Multigraph)>> {
        if Instant::now() > self.deadline {
            self.timed_out = true;
            return Ok(None);
        }
        let code = canonical_code_with_limit(m, LIMIT)?;
        if code == self.k4 {
            return Ok(Some((Vec::new(), Multigraph::complete(4))));
        }
        if self.failed.contains(&code) || m.vertex_count() <= 4 {
            return Ok(None);
        }
        if let Some(found) = self.reverse_edge_split(m)? {
            return Ok(Some(found));
        }
        if let Some(found) = self.reverse_two_sum(m)? {
            return Ok(Some(found));
        }
        if !self.timed_out {
            self.failed.insert(code);
        }
        Ok(None)
    }

    fn reverse_edge_split(&mut self, m: &Multigraph) -> Result<Option<(Vec<ConstructionStep>, Multigraph)>> {
        for v in 0..m.vertex_count() {
            let nb = m.neighbors(v);
            if m.degree(v) != 3 || nb.len() != 3 {
                continue;
            }
            for (a, b, c) in [(nb[0], nb[1], nb[2]), (nb[0], nb[2], nb[1]), (nb[1], nb[2], nb[0])] {
                if m.multiplicity(a, b) > 0 {
                    continue;
                }
                let shift = |x: usize| if x > v { x - 1 } else { x };
                let mut smaller = m.without_vertex(v);
                smaller.add_edge(shift(a), shift(b))?;
                if !is_circuit(&smaller) {
                    continue;
                }
                let Some((mut steps, built)) = self.reduce(&smaller)? else {
                    continue;
                };
                let phi = isomorphism(&smaller, &built)?;
                let edge = built.find_edge(phi[shift(a)], phi[shift(b)]).unwrap();
                let vertex = phi[shift(c)];
                let next = edge_split(&built, edge, vertex)?;
                steps.push(ConstructionStep::EdgeSplit { edge, vertex });
                return Ok(Some((steps, next)));
            }
        }
        Ok(None)
    }

    fn reverse_two_sum(&mut self, m: &Multigraph) -> Result<Option<(Vec<ConstructionStep>, Multigraph)>> {
        let n = m.vertex_count();
        for x in 0..n {
            for y in x + 1..n {
                if m.multiplicity(x, y) > 0 {
                    continue;
                }
                let parts = components_without(m, x, y);
                if parts.len() < 2 {
                    continue;
                }
                let side1: Vec<usize> = [x, y].into_iter().chain(parts[0].iter().copied()).collect();
                let side2: Vec<usize> = [x, y].into_iter().chain(parts[1..].iter().flatten().copied()).collect();
                let halves: Vec<Multigraph> = [side1, side2]
                    .iter()
                    .map(|side| {
                        let mut h = m.induced(side);
                        h.add_edge(0, 1).map(|_| h)
                    })
                    .collect::<Result<_>>()?;
                if !halves.iter().all(is_circuit) {
                    continue;
                }
                let Some((mut steps1, built1)) = self.reduce(&halves[0])? else {
                    continue;
                };
                let Some((steps2, built2)) = self.reduce(&halves[1])? else {
                    continue;
                };
                // in both halves x is vertex 0 and y is vertex 1
                let phi1 = isomorphism(&halves[0], &built1)?;
                let phi2 = isomorphism(&halves[1], &built2)?;
                let edge = built1.find_edge(phi1[0], phi1[1]).unwrap();
                let other_edge = built2.find_edge(phi2[0], phi2[1]).unwrap();
                let first_is_x = built1.edge(edge).ends().0 == phi1[0];
                let other_first_is_x = built2.edge(other_edge).ends().0 == phi2[0];
                let flip = first_is_x != other_first_is_x;
                let next = two_sum(&built1, &built2, edge, other_edge, flip)?;
                steps1.push(ConstructionStep::TwoSum {
                    with: Box::new(Certificate {
                        base: Base::K4,
                        steps: steps2,
                        claimed: canonical_code_with_limit(&built2, LIMIT)?,
                    }),
                    edge,
                    other_edge,
                    flip,
                });
                return Ok(Some((steps1, next)));
            }
        }
        Ok(None)
    }
}

/// Connected components of `m` with `x` and `y` removed, each sorted.
fn components_without(m: &Multigraph, x: usize, y: usize) -> Vec<Vec<usize>> {
    let n = m.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if s == x || s == y || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for w in m.neighbors(u) {
                if w != x && w != y && comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Searches for a certificate of an Assur graph within [`DEFAULT_CERTIFY_BUDGET`].
pub fn certify(g: &PinnedGraph) -> Result<Certificate> {
    certify_within(g, DEFAULT_CERTIFY_BUDGET)
}

/// Searches for a certificate: reverse edge splits first, then reverse
/// 2-sums at 2-separations, down to `K4`, followed by one pin split.
/// [`Error::SearchExhausted`] only means no sequence was found in time.
pub fn certify_within(g: &PinnedGraph, budget: Duration) -> Result<Certificate> {
    let g = g.without_isolated_pins();
    if !check_circuit_condition(&g)? {
        return Err(Error::NotAssur);
    }
    let claimed = canonical_code_with_limit(&g, LIMIT)?;
    if claimed == canonical_code_with_limit(&catalog::dyad(), LIMIT)? {
        return Ok(Certificate {
            base: Base::Dyad,
            steps: Vec::new(),
            claimed,
        });
    }
    let m = contract_pins(&g);
    let pstar = contracted_pin_vertex(&g);
    let mut search = Search {
        deadline: Instant::now() + budget,
        k4: canonical_code_with_limit(&Multigraph::complete(4), LIMIT)?,
        failed: HashSet::new(),
        timed_out: false,
    };
    let Some((mut steps, built)) = search.reduce(&m)? else {
        return Err(Error::SearchExhausted);
    };
    let phi = isomorphism(&m, &built)?;
    let mut inverse = vec![0; phi.len()];
    for (a, &b) in phi.iter().enumerate() {
        inverse[b] = a;
    }
    let pins = g.pins();
    let inner = g.inner();
    let vertex = phi[pstar];
    let assignment = built
        .incident_edges(vertex)
        .into_iter()
        .map(|i| {
            // the contraction is simple, so the matching edge of g is unique
            let w = inner[inverse[built.edge(i).other(vertex)]];
            let pin = g
                .incident_edges(w)
                .into_iter()
                .map(|j| g.edge(j).other(w))
                .find(|&p| g.is_pin(p))
                .unwrap();
            pins.iter().position(|&p| p == pin).unwrap()
        })
        .collect();
    steps.push(ConstructionStep::PinSplit { vertex, assignment });
    let cert = Certificate {
        base: Base::K4,
        steps,
        claimed,
    };
    debug_assert!(verify_certificate(&cert));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use crate::graph::catalog::*;

    #[test]
    fn dyad_certificate_is_empty() {
        let c = certify(&dyad()).unwrap();
        assert_eq!(c.base, Base::Dyad);
        assert!(c.steps.is_empty());
        assert!(verify_certificate(&c));
    }

    #[test]
    fn triad_is_one_pin_split_from_k4() {
        let c = certify(&triad()).unwrap();
        assert_eq!(c.base, Base::K4);
        assert_eq!(c.steps.len(), 1);
        assert!(matches!(c.steps[0], ConstructionStep::PinSplit { .. }));
        assert!(verify_certificate(&c));
    }

    #[test]
    fn two_sum_built_graph_needs_a_two_sum_step() {
        let k4 = Multigraph::complete(4);
        let banana = two_sum(&k4, &k4, 0, 0, false).unwrap();
        // split a degree-3 vertex onto two pins
        let v = (0..banana.vertex_count()).find(|&v| banana.degree(v) == 3).unwrap();
        let g = split_contracted_vertex(&banana, v, &[0, 0, 1]).unwrap();
        let c = certify(&g).unwrap();
        assert!(c.steps.iter().any(|s| matches!(s, ConstructionStep::TwoSum { .. })));
        assert!(verify_certificate(&c));
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert!(verify_certificate(&back));
    }

    #[test]
    fn tampering_is_rejected() {
        let c = certify(&pinned_from_wheel()).unwrap();
        assert!(verify_certificate(&c));
        for k in 0..c.steps.len() {
            let mut t = c.clone();
            t.steps.remove(k);
            assert!(!verify_certificate(&t), "dropped step {k}");
            let mut t = c.clone();
            t.steps.insert(k, c.steps[k].clone());
            assert!(!verify_certificate(&t), "duplicated step {k}");
        }
        let mut t = c.clone();
        t.claimed = canonical_code(&triad()).unwrap();
        assert!(!verify_certificate(&t));
        let mut t = c.clone();
        t.base = Base::SingleEdge;
        assert!(!verify_certificate(&t));
    }

    fn pinned_from_wheel() -> PinnedGraph {
        let w = wheel(5);
        split_contracted_vertex(&w, 0, &[0, 1, 1]).unwrap()
    }

    #[test]
    fn non_assur_is_refused() {
        assert_eq!(certify(&stacked_dyads()), Err(Error::NotAssur));
    }

    #[test]
    fn single_edge_base_builds_isostatic_graphs() {
        let c = Certificate {
            base: Base::SingleEdge,
            steps: vec![
                ConstructionStep::VertexAddition { u: 0, w: 1 },
                ConstructionStep::EdgeSplit { edge: 0, vertex: 2 },
            ],
            claimed: canonical_code(&Multigraph::from_edges(4, &[(0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap())
                .unwrap(),
        };
        assert!(verify_certificate(&c));
        let mut bad = c.clone();
        bad.steps.push(ConstructionStep::PinSplit {
            vertex: 0,
            assignment: vec![0, 1],
        });
        assert!(!verify_certificate(&bad));
    }
}
