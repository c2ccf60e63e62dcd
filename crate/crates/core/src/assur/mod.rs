//! Assur graphs: the four equivalent tests, a combined verdict with
//! witnesses, and the decomposition of pinned isostatic graphs into Assur
//! components.

mod scheme;

pub use scheme::{decompose, recompose, AssurComponent, AssurScheme};

use serde::{Deserialize, Serialize};

use crate::counting::{circuit_oracle, ORACLE_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::graph::{contract_pins, PinnedGraph};
use crate::numeric::{all_inner_move, motion_support};
use crate::pebble::{all_circuits, is_circuit, pebble_rank, pinned_isostatic};

/// Trials used by the motion-based checks unless told otherwise.
pub const DEFAULT_TRIALS: usize = 8;

/// One of the four equivalent Assur tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssurMethod {
    /// No proper subgraph is pinned isostatic.
    Minimality,
    /// Contracting the pins gives a rigidity circuit.
    Circuit,
    /// Deleting any vertex lets every remaining inner vertex move.
    VertexDeletion,
    /// Deleting any edge lets every inner vertex move.
    EdgeDeletion,
}

impl AssurMethod {
    pub const ALL: [AssurMethod; 4] = [
        AssurMethod::Minimality,
        AssurMethod::Circuit,
        AssurMethod::VertexDeletion,
        AssurMethod::EdgeDeletion,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssurOptions {
    pub methods: Vec<AssurMethod>,
    pub seed: u64,
    pub trials: usize,
    /// Whether the vertex-deletion test also deletes pins.
    pub delete_pins: bool,
}

impl Default for AssurOptions {
    fn default() -> Self {
        AssurOptions {
            methods: AssurMethod::ALL.to_vec(),
            seed: 0,
            trials: DEFAULT_TRIALS,
            delete_pins: true,
        }
    }
}

/// Results of the selected tests. `None` means the test was not run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssurVerdict {
    pub minimality: Option<bool>,
    pub circuit: Option<bool>,
    pub vertex_deletion: Option<bool>,
    pub edge_deletion: Option<bool>,
    /// The circuit test's answer, which is exact; false for graphs that are
    /// not pinned isostatic.
    pub overall: bool,
    /// Set when the tests that ran do not all agree with `overall`.
    pub disagreement: bool,
    pub reason: Option<String>,
}

impl AssurVerdict {
    pub fn get(&self, m: AssurMethod) -> Option<bool> {
        match m {
            AssurMethod::Minimality => self.minimality,
            AssurMethod::Circuit => self.circuit,
            AssurMethod::VertexDeletion => self.vertex_deletion,
            AssurMethod::EdgeDeletion => self.edge_deletion,
        }
    }
}

fn require_isostatic(g: &PinnedGraph) -> Result<PinnedGraph> {
    let g = g.without_isolated_pins();
    if !pinned_isostatic(&g)? {
        return Err(Error::NotPinnedIsostatic);
    }
    Ok(g)
}

/// Inner vertices of a proper pinned isostatic subgraph, if one exists.
///
/// Exhaustive when the graph has at most [`ORACLE_MAX_VERTICES`] vertices;
/// above that the subgraph is read off the decomposition.
pub fn minimality_witness(g: &PinnedGraph) -> Result<Option<Vec<usize>>> {
    let g = require_isostatic(g)?;
    let inner = g.inner();
    if g.vertex_count() > ORACLE_MAX_VERTICES {
        let scheme = decompose(&g)?;
        if scheme.components.len() == 1 {
            return Ok(None);
        }
        let first = &scheme.components[0];
        return Ok(Some(first.inner.iter().map(|l| g.find(l).unwrap()).collect()));
    }
    // with all pins present a subset of inner vertices induces the most edges
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (k, &v) in inner.iter().enumerate() {
        pos[v] = k;
    }
    let masks: Vec<u32> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.ends();
            [a, b]
                .iter()
                .filter(|&&x| g.is_inner(x))
                .fold(0u32, |m, &x| m | 1 << pos[x])
        })
        .collect();
    let full = (1u32 << inner.len()) - 1;
    for subset in 1..full {
        let edges = masks.iter().filter(|&&m| m & !subset == 0).count();
        if edges >= 2 * subset.count_ones() as usize {
            let members = (0..inner.len()).filter(|k| subset >> k & 1 == 1).map(|k| inner[k]).collect();
            return Ok(Some(members));
        }
    }
    Ok(None)
}

pub fn check_minimality(g: &PinnedGraph) -> Result<bool> {
    Ok(minimality_witness(g)?.is_none())
}

/// Rigidity circuits of the pin contraction, as edge indices of `g` (after
/// isolated pins are dropped, which keeps edge indices).
pub fn contraction_circuits(g: &PinnedGraph) -> Vec<Vec<usize>> {
    let m = contract_pins(&g.without_isolated_pins());
    all_circuits(&m, &pebble_rank(&m, None))
}

pub fn check_circuit_condition(g: &PinnedGraph) -> Result<bool> {
    let g = require_isostatic(g)?;
    let m = contract_pins(&g);
    if m.vertex_count() <= ORACLE_MAX_VERTICES {
        circuit_oracle(&m)
    } else {
        Ok(is_circuit(&m))
    }
}

fn is_dyad(g: &PinnedGraph) -> bool {
    g.inner_count() == 1 && g.edge_count() == 2
}

/// Deletions that leave some inner vertex generically fixed: the deleted
/// vertex and the fixed vertices. Empty when every deletion frees everything.
pub fn vertex_deletion_witnesses(
    g: &PinnedGraph,
    seed: u64,
    trials: usize,
    delete_pins: bool,
) -> Result<Vec<(usize, Vec<usize>)>> {
    let g = require_isostatic(g)?;
    if is_dyad(&g) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if g.is_pin(v) && !delete_pins {
            continue;
        }
        let h = g.without_vertex(v);
        let moving = motion_support(&h, seed.wrapping_add(v as u64), trials);
        let fixed: Vec<usize> = h
            .inner()
            .into_iter()
            .filter(|&u| !moving[u])
            .map(|u| if u >= v { u + 1 } else { u })
            .collect();
        if !fixed.is_empty() {
            out.push((v, fixed));
        }
    }
    Ok(out)
}

pub fn check_vertex_deletion(g: &PinnedGraph, seed: u64, trials: usize, delete_pins: bool) -> Result<bool> {
    let g = require_isostatic(g)?;
    if is_dyad(&g) {
        return Ok(true);
    }
    Ok((0..g.vertex_count())
        .filter(|&v| delete_pins || g.is_inner(v))
        .all(|v| all_inner_move(&g.without_vertex(v), seed.wrapping_add(v as u64), trials)))
}

/// Edge deletions that leave some inner vertex generically fixed.
pub fn edge_deletion_witnesses(g: &PinnedGraph, seed: u64, trials: usize) -> Result<Vec<(usize, Vec<usize>)>> {
    let g = require_isostatic(g)?;
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        let moving = motion_support(&g.without_edge(e), seed.wrapping_add(e as u64), trials);
        let fixed: Vec<usize> = g.inner().into_iter().filter(|&u| !moving[u]).collect();
        if !fixed.is_empty() {
            out.push((e, fixed));
        }
    }
    Ok(out)
}

pub fn check_edge_deletion(g: &PinnedGraph, seed: u64, trials: usize) -> Result<bool> {
    let g = require_isostatic(g)?;
    Ok((0..g.edge_count())
        .all(|e| all_inner_move(&g.without_edge(e), seed.wrapping_add(e as u64), trials)))
}

/// Runs the selected tests. Graphs that are not pinned isostatic get
/// `overall = false` and a reason rather than an error.
pub fn is_assur(g: &PinnedGraph, opts: &AssurOptions) -> Result<AssurVerdict> {
    let g = g.without_isolated_pins();
    let mut verdict = AssurVerdict {
        minimality: None,
        circuit: None,
        vertex_deletion: None,
        edge_deletion: None,
        overall: false,
        disagreement: false,
        reason: None,
    };
    if !pinned_isostatic(&g)? {
        verdict.reason = Some("not pinned isostatic".into());
        return Ok(verdict);
    }
    let overall = check_circuit_condition(&g)?;
    for &m in &opts.methods {
        let r = match m {
            AssurMethod::Minimality => check_minimality(&g)?,
            AssurMethod::Circuit => overall,
            AssurMethod::VertexDeletion => check_vertex_deletion(&g, opts.seed, opts.trials, opts.delete_pins)?,
            AssurMethod::EdgeDeletion => check_edge_deletion(&g, opts.seed, opts.trials)?,
        };
        match m {
            AssurMethod::Minimality => verdict.minimality = Some(r),
            AssurMethod::Circuit => verdict.circuit = Some(r),
            AssurMethod::VertexDeletion => verdict.vertex_deletion = Some(r),
            AssurMethod::EdgeDeletion => verdict.edge_deletion = Some(r),
        }
        verdict.disagreement |= r != overall;
    }
    verdict.overall = overall;
    if !overall {
        verdict.reason = Some("pin contraction is not a rigidity circuit".into());
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::*;
    use crate::graph::{compose, split_contracted_vertex, CompositionMap};

    fn all(g: &PinnedGraph) -> AssurVerdict {
        is_assur(g, &AssurOptions { seed: 9, ..Default::default() }).unwrap()
    }

    #[test]
    fn dyad_is_assur() {
        let v = all(&dyad());
        assert!(v.overall && !v.disagreement);
        assert_eq!(v.minimality, Some(true));
        assert_eq!(v.vertex_deletion, Some(true));
    }

    #[test]
    fn triad_and_k4_split_are_assur() {
        for g in [triad(), k4_two_pin()] {
            let v = all(&g);
            assert!(v.overall && !v.disagreement, "{v:?}");
        }
    }

    #[test]
    fn stacked_dyads_fail_every_test() {
        let g = stacked_dyads();
        let v = all(&g);
        assert!(!v.overall && !v.disagreement, "{v:?}");
        assert_eq!(v.edge_deletion, Some(false));
        assert_eq!(minimality_witness(&g).unwrap(), Some(vec![0]));
        // deleting the top inner vertex leaves the bottom one fixed
        let w = vertex_deletion_witnesses(&g, 1, 8, true).unwrap();
        assert!(w.iter().any(|(v, fixed)| *v == 1 && fixed == &vec![0]));
        assert!(!edge_deletion_witnesses(&g, 1, 8).unwrap().is_empty());
        assert_eq!(contraction_circuits(&g).len(), 1);
    }

    #[test]
    fn non_isostatic_gets_reason() {
        let four_bar = triad().without_edge(0);
        let v = all(&four_bar);
        assert!(!v.overall && v.reason.is_some() && v.circuit.is_none());
        assert_eq!(check_circuit_condition(&four_bar), Err(Error::NotPinnedIsostatic));
        let pendulum = dyad().without_edge(0);
        assert_eq!(check_minimality(&pendulum), Err(Error::TooFewPins(1)));
        assert!(is_assur(&pendulum, &AssurOptions::default()).is_err());
    }

    #[test]
    fn triad_on_triad_is_not_assur() {
        let base = triad();
        let top = triad();
        let map = CompositionMap::from_pairs(&[(3, 0), (4, 1), (5, 2)]);
        let g = compose(&top, &base, &map).unwrap();
        assert_eq!((g.inner_count(), g.pin_count(), g.edge_count()), (6, 3, 12));
        let v = all(&g);
        assert!(!v.overall && !v.disagreement, "{v:?}");
    }

    #[test]
    fn large_graph_uses_pebble_circuit_test() {
        // wheel with 12 rim vertices, hub split onto two pins
        let w = wheel(12);
        let assignment: Vec<usize> = (0..12).map(|k| k % 2).collect();
        let g = split_contracted_vertex(&w, 12, &assignment).unwrap();
        assert!(g.vertex_count() > ORACLE_MAX_VERTICES);
        assert!(check_circuit_condition(&g).unwrap());
        assert!(check_minimality(&g).unwrap());
    }
}
