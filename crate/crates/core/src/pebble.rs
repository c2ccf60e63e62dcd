//! The (2,3)-pebble game: generic rigidity rank, independence, isostatic and
//! pinned-isostatic tests, and fundamental circuits of rejected edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, PinnedGraph};

/// Outcome of running the pebble game over a multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    /// Generic rigidity rank.
    pub rank: usize,
    /// Edge insertion order used.
    pub order: Vec<usize>,
    /// Accepted edges in insertion order; a basis of the input's span.
    pub independent: Vec<usize>,
    /// Rejected edges in insertion order.
    pub rejected: Vec<usize>,
    /// For each rejected edge, the vertices reachable from its endpoints
    /// when the pebble search failed.
    closures: Vec<Vec<usize>>,
    /// For each rejected edge, how many edges had been accepted before it.
    accepted_before: Vec<usize>,
}

impl RankReport {
    pub fn is_independent(&self) -> bool {
        self.rejected.is_empty()
    }
}

/// Orientation of accepted edges plus free pebbles per vertex, maintaining
/// `pebbles(v) + outdegree(v) = 2`.
#[derive(Debug, Clone)]
pub struct PebbleState {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl PebbleState {
    pub fn new(n: usize) -> Self {
        PebbleState {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
        }
    }

    pub fn free_pebbles(&self) -> usize {
        self.pebbles.iter().map(|&p| p as usize).sum()
    }

    pub fn pebbles(&self, v: usize) -> u8 {
        self.pebbles[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// Moves one free pebble to `start` from somewhere reachable, never taking
    /// pebbles from `start` itself or from `blocked`.
    fn fetch_pebble(&mut self, start: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[start] = true;
        seen[blocked] = true;
        let mut stack = vec![start];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            // deterministic: lower vertex ids first
            let mut next: Vec<usize> = self.out[x].clone();
            next.sort_unstable();
            next.dedup();
            for &y in next.iter().rev() {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(mut w) = found else {
            return false;
        };
        self.pebbles[w] -= 1;
        while w != start {
            let x = parent[w];
            // reverse x -> w into w -> x
            let at = self.out[x].iter().position(|&t| t == w).unwrap();
            self.out[x].swap_remove(at);
            self.out[w].push(x);
            w = x;
        }
        self.pebbles[start] += 1;
        true
    }

    fn reach(&self, from: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack: Vec<usize> = from.to_vec();
        for &v in from {
            seen[v] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Tries to insert edge `u v`; returns `Err(closure)` when it is dependent.
    pub fn insert(&mut self, u: usize, v: usize) -> std::result::Result<(), Vec<usize>> {
        while self.pebbles[u] < 2 && self.fetch_pebble(u, v) {}
        while self.pebbles[v] < 2 && self.fetch_pebble(v, u) {}
        if self.pebbles[u] + self.pebbles[v] == 4 {
            self.pebbles[u] -= 1;
            self.out[u].push(v);
            Ok(())
        } else {
            Err(self.reach(&[u, v]))
        }
    }
}

/// Runs the pebble game over `g`, inserting edges in `order` (default: edge order).
pub fn pebble_rank(g: &Multigraph, order: Option<&[usize]>) -> RankReport {
    let order: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => (0..g.edge_count()).collect(),
    };
    let mut state = PebbleState::new(g.vertex_count());
    let mut report = RankReport {
        rank: 0,
        order: order.clone(),
        independent: Vec::new(),
        rejected: Vec::new(),
        closures: Vec::new(),
        accepted_before: Vec::new(),
    };
    for &i in &order {
        let (u, v) = g.edge(i).ends();
        match state.insert(u, v) {
            Ok(()) => report.independent.push(i),
            Err(closure) => {
                report.rejected.push(i);
                report.closures.push(closure);
                report.accepted_before.push(report.independent.len());
            }
        }
    }
    report.rank = report.independent.len();
    report
}

fn edges_independent(g: &Multigraph, edges: &[usize]) -> bool {
    let mut state = PebbleState::new(g.vertex_count());
    edges.iter().all(|&i| {
        let (u, v) = g.edge(i).ends();
        state.insert(u, v).is_ok()
    })
}

/// The unique circuit inside `accepted ∪ {e}` for a rejected edge `e`, as
/// sorted edge indices.
pub fn fundamental_circuit(g: &Multigraph, report: &RankReport, e: usize) -> Result<Vec<usize>> {
    let k = report
        .rejected
        .iter()
        .position(|&r| r == e)
        .ok_or(Error::NotRejected(e))?;
    let closure = &report.closures[k];
    let mut inside = vec![false; g.vertex_count()];
    for &v in closure {
        inside[v] = true;
    }
    // accepted edges spanned by the closure form a tight set whose union with e
    // holds the circuit; an edge belongs to it iff swapping it for e stays independent
    let span: Vec<usize> = report.independent[..report.accepted_before[k]]
        .iter()
        .copied()
        .filter(|&i| {
            let (a, b) = g.edge(i).ends();
            inside[a] && inside[b]
        })
        .collect();
    let mut circuit = vec![e];
    for (j, &f) in span.iter().enumerate() {
        let mut trial: Vec<usize> = span.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &x)| x).collect();
        trial.push(e);
        if edges_independent(g, &trial) {
            circuit.push(f);
        }
    }
    circuit.sort_unstable();
    debug_assert!(circuit_debug_check(g, &circuit));
    Ok(circuit)
}

#[cfg(debug_assertions)]
fn circuit_debug_check(g: &Multigraph, circuit: &[usize]) -> bool {
    let mut sub = Multigraph::new(g.vertex_count());
    for &i in circuit {
        let (a, b) = g.edge(i).ends();
        sub.add_edge(a, b).unwrap();
    }
    let touched: Vec<usize> = (0..g.vertex_count()).filter(|&v| sub.degree(v) > 0).collect();
    let sub = sub.induced(&touched);
    if sub.vertex_count() > crate::counting::ORACLE_MAX_VERTICES {
        return true;
    }
    crate::counting::circuit_oracle(&sub).unwrap_or(true)
}

#[cfg(not(debug_assertions))]
fn circuit_debug_check(_: &Multigraph, _: &[usize]) -> bool {
    true
}

/// Fundamental circuits of every rejected edge, in rejection order.
pub fn all_circuits(g: &Multigraph, report: &RankReport) -> Vec<Vec<usize>> {
    report
        .rejected
        .iter()
        .map(|&e| fundamental_circuit(g, report, e).expect("rejected edge"))
        .collect()
}

/// Minimally rigid: `|E| = 2|V| - 3` and every edge independent.
pub fn is_isostatic(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    n >= 2 && g.edge_count() == 2 * n - 3 && pebble_rank(g, None).is_independent()
}

/// Rigidity circuit test via the pebble game.
pub fn is_circuit(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    if n < 2 || g.has_isolated_vertex() || g.edge_count() != 2 * n - 2 {
        return false;
    }
    let report = pebble_rank(g, None);
    if report.rejected.len() != 1 {
        return false;
    }
    fundamental_circuit(g, &report, report.rejected[0]).map(|c| c.len()) == Ok(g.edge_count())
}

/// `2|V| - 3 - rank`, the generic number of internal degrees of freedom.
pub fn generic_dof(g: &Multigraph) -> i64 {
    let n = g.vertex_count();
    if n < 2 {
        return 0;
    }
    2 * n as i64 - 3 - pebble_rank(g, None).rank as i64
}

/// `G` plus a rigid scaffold on its pins: the path `p1 ... pk` and an apex
/// `p0` (the last vertex) joined to every pin. Scaffold edges come first.
pub fn pinned_augmentation(g: &PinnedGraph) -> (Multigraph, usize) {
    let pins = g.pins();
    let mut m = Multigraph::new(g.vertex_count() + 1);
    for v in 0..g.vertex_count() {
        m.set_label(v, g.label(v));
    }
    let apex = g.vertex_count();
    m.set_label(apex, "apex");
    for w in pins.windows(2) {
        m.add_edge(w[0], w[1]).unwrap();
    }
    for &p in &pins {
        m.add_edge(apex, p).unwrap();
    }
    let scaffold = m.edge_count();
    for e in g.edges() {
        let (a, b) = e.ends();
        m.add_edge(a, b).unwrap();
    }
    (m, scaffold)
}

/// Pinned isostatic: `|E| = 2|I|` and the pin-augmented graph is rigid.
pub fn pinned_isostatic(g: &PinnedGraph) -> Result<bool> {
    let k = g.pin_count();
    if k < 2 {
        return Err(Error::TooFewPins(k));
    }
    if g.edge_count() != 2 * g.inner_count() {
        return Ok(false);
    }
    let (m, _) = pinned_augmentation(g);
    Ok(pebble_rank(&m, None).rank == 2 * m.vertex_count() - 3)
}

/// Internal degrees of freedom of a pinned graph: `2|I|` minus the rank the
/// edges add on top of the scaffold.
pub fn pinned_dof(g: &PinnedGraph) -> i64 {
    let (m, scaffold) = pinned_augmentation(g);
    let rank = pebble_rank(&m, None).rank;
    2 * g.inner_count() as i64 - (rank - scaffold) as i64
}

/// Edges of `g` that are dependent on the pinned scaffold, each with its
/// fundamental circuit restricted to edges of `g`.
pub fn pinned_overbraced(g: &PinnedGraph) -> Vec<(usize, Vec<usize>)> {
    let (m, scaffold) = pinned_augmentation(g);
    let report = pebble_rank(&m, None);
    report
        .rejected
        .iter()
        .map(|&e| {
            let circuit = fundamental_circuit(&m, &report, e)
                .unwrap()
                .into_iter()
                .filter(|&i| i >= scaffold)
                .map(|i| i - scaffold)
                .collect();
            (e - scaffold, circuit)
        })
        .collect()
}
