//! Mobility counts for linkages and exhaustive oracles for Laman independence,
//! rigidity circuits and the pinned framework conditions.
//!
//! The oracles enumerate vertex subsets and are exponential; they exist to
//! cross-check the pebble game and the numeric rank.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, PinnedGraph};

/// Vertex bound for the exhaustive oracles.
pub const ORACLE_MAX_VERTICES: usize = 12;

/// Link bound for the overbraced sub-collection scan in [`grubler_dof`].
pub const OVERBRACE_MAX_LINKS: usize = 18;

/// Links, joints and driving links of a planar linkage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSchema {
    links: Vec<String>,
    ground: usize,
    joints: Vec<Vec<usize>>,
    drivers: BTreeSet<usize>,
}

impl LinkageSchema {
    /// Builds a schema from link names. Each joint lists the links it pins together.
    pub fn new<S: AsRef<str>>(
        links: &[S],
        ground: &str,
        joints: &[Vec<S>],
        drivers: &[S],
    ) -> Result<Self> {
        let links: Vec<String> = links.iter().map(|l| l.as_ref().to_string()).collect();
        let lookup = |name: &str| {
            links
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::UnknownLink(name.to_string()))
        };
        let ground = lookup(ground)?;
        let mut js = Vec::with_capacity(joints.len());
        for joint in joints {
            let mut ids = Vec::with_capacity(joint.len());
            for name in joint {
                let id = lookup(name.as_ref())?;
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
            js.push(ids);
        }
        let drivers = drivers
            .iter()
            .map(|d| lookup(d.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(LinkageSchema {
            links,
            ground,
            joints: js,
            drivers,
        })
    }

    /// Bar-and-joint encoding of a graph: one link per edge (edge 0 plays the
    /// ground), one joint per vertex of degree at least two.
    pub fn from_bar_graph(g: &Multigraph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(Error::InvalidOperation("bar encoding needs at least one edge".into()));
        }
        if g.has_isolated_vertex() {
            return Err(Error::InvalidOperation("bar encoding needs every vertex on a bar".into()));
        }
        let links = (0..g.edge_count()).map(|i| format!("e{i}")).collect();
        let joints = (0..g.vertex_count())
            .map(|v| g.incident_edges(v))
            .filter(|inc| inc.len() >= 2)
            .collect();
        Ok(LinkageSchema {
            links,
            ground: 0,
            joints,
            drivers: BTreeSet::new(),
        })
    }

    pub fn links(&self) -> &[String] {
        &self.links
    }

    pub fn ground(&self) -> &str {
        &self.links[self.ground]
    }

    pub fn joints(&self) -> &[Vec<usize>] {
        &self.joints
    }

    pub fn drivers(&self) -> impl Iterator<Item = &str> {
        self.drivers.iter().map(|&d| self.links[d].as_str())
    }

    pub fn driver_count(&self) -> usize {
        self.drivers.len()
    }
}

/// Result of the Grübler count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofReport {
    /// Predicted mobility `F = 3(L-1) - 2 Σ (i-1) J_i`; a lower bound on the true DOF.
    pub mobility: i64,
    /// `L`, ground included.
    pub links: usize,
    /// `Σ (i-1) J_i`.
    pub joint_sum: usize,
    /// `Some(true)` when a sub-collection of links counts negative, so the
    /// prediction may undercount. `None` when the linkage is too large to scan.
    pub overbraced: Option<bool>,
}

fn mobility(links: usize, joint_sum: usize) -> i64 {
    3 * (links as i64 - 1) - 2 * joint_sum as i64
}

/// Grübler's count with a joint pinning `k` links contributing `k - 1`.
pub fn grubler_dof(s: &LinkageSchema) -> Result<DofReport> {
    if let Some(bad) = s.joints.iter().position(|j| j.len() < 2) {
        return Err(Error::DegenerateJoint(bad));
    }
    let joint_sum: usize = s.joints.iter().map(|j| j.len() - 1).sum();
    let links = s.links.len();
    let overbraced = (links <= OVERBRACE_MAX_LINKS).then(|| has_negative_subcollection(s));
    Ok(DofReport {
        mobility: mobility(links, joint_sum),
        links,
        joint_sum,
        overbraced,
    })
}

fn has_negative_subcollection(s: &LinkageSchema) -> bool {
    let l = s.links.len();
    let masks: Vec<u32> = s
        .joints
        .iter()
        .map(|j| j.iter().fold(0u32, |m, &x| m | (1 << x)))
        .collect();
    (1u32..(1u32 << l)).filter(|sub| sub.count_ones() >= 2).any(|sub| {
        let sum: usize = masks
            .iter()
            .map(|m| (m & sub).count_ones() as usize)
            .filter(|&k| k >= 2)
            .map(|k| k - 1)
            .sum();
        mobility(sub.count_ones() as usize, sum) < 0
    })
}

/// Deletes every driving link and identifies the two joints at its ends.
pub fn remove_drivers(s: &LinkageSchema) -> Result<LinkageSchema> {
    let mut joints = s.joints.clone();
    for &d in &s.drivers {
        let at: Vec<usize> = (0..joints.len()).filter(|&j| joints[j].contains(&d)).collect();
        if at.len() != 2 {
            return Err(Error::DriverValence {
                link: s.links[d].clone(),
                joints: at.len(),
            });
        }
        let second = joints.remove(at[1]);
        let first = &mut joints[at[0]];
        first.retain(|&x| x != d);
        for x in second {
            if x != d && !first.contains(&x) {
                first.push(x);
            }
        }
    }
    // renumber the surviving links
    let keep: Vec<usize> = (0..s.links.len()).filter(|x| !s.drivers.contains(x)).collect();
    let mut pos = vec![usize::MAX; s.links.len()];
    for (i, &x) in keep.iter().enumerate() {
        pos[x] = i;
    }
    let joints = joints
        .into_iter()
        .map(|j| j.into_iter().map(|x| pos[x]).collect::<Vec<_>>())
        .filter(|j| j.len() >= 2)
        .collect();
    Ok(LinkageSchema {
        links: keep.iter().map(|&x| s.links[x].clone()).collect(),
        ground: pos[s.ground],
        joints,
        drivers: BTreeSet::new(),
    })
}

/// The naive bar-and-joint count `2|V| - 3 - |E|`.
pub fn bar_joint_dof(g: &Multigraph) -> i64 {
    2 * g.vertex_count() as i64 - 3 - g.edge_count() as i64
}

fn check_size(n: usize) -> Result<()> {
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::SizeLimit {
            actual: n,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    Ok(())
}

fn edge_masks(edges: impl Iterator<Item = (usize, usize)>) -> Vec<u32> {
    edges.map(|(a, b)| (1u32 << a) | (1u32 << b)).collect()
}

fn induced_count(masks: &[u32], subset: u32) -> usize {
    masks.iter().filter(|&&m| m & subset == m).count()
}

/// Laman's condition checked over every vertex subset: at most `2|U| - 3`
/// induced edges whenever `|U| >= 2`.
pub fn laman_independent_oracle(g: &Multigraph) -> Result<bool> {
    let n = g.vertex_count();
    check_size(n)?;
    let masks = edge_masks(g.edges().iter().map(|e| e.ends()));
    Ok(laman_masks(n, &masks, None))
}

fn laman_masks(n: usize, masks: &[u32], skip_full: Option<u32>) -> bool {
    (1u32..(1u32 << n))
        .filter(|u| u.count_ones() >= 2 && Some(*u) != skip_full)
        .all(|u| induced_count(masks, u) as i64 <= 2 * u.count_ones() as i64 - 3)
}

/// Rigidity circuit: `|E| = 2|V| - 2`, no isolated vertex, and every proper
/// edge subset satisfies Laman's condition.
pub fn circuit_oracle(g: &Multigraph) -> Result<bool> {
    let n = g.vertex_count();
    check_size(n)?;
    if n < 2 || g.has_isolated_vertex() || g.edge_count() != 2 * n - 2 {
        return Ok(false);
    }
    // With no isolated vertices, a proper vertex subset never induces all of E,
    // so proper edge subsets are independent iff every proper vertex subset
    // meets the Laman bound.
    let masks = edge_masks(g.edges().iter().map(|e| e.ends()));
    let full = (1u32 << n) - 1;
    Ok(laman_masks(n, &masks, Some(full)))
}

/// A vertex subset of a pinned graph breaking one of the pinned framework inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinnedViolation {
    pub inner: Vec<usize>,
    pub pins: Vec<usize>,
    pub edges: usize,
    pub bound: i64,
}

/// Exhaustive check of the pinned framework conditions; `Ok(None)` when they hold.
///
/// The global count `|E| = 2|I|` is reported with the whole vertex set as the
/// offending subset.
pub fn pinned_conditions_violation(g: &PinnedGraph) -> Result<Option<PinnedViolation>> {
    let n = g.vertex_count();
    check_size(n)?;
    if g.edge_count() != 2 * g.inner_count() {
        return Ok(Some(PinnedViolation {
            inner: g.inner(),
            pins: g.pins(),
            edges: g.edge_count(),
            bound: 2 * g.inner_count() as i64,
        }));
    }
    let masks = edge_masks(g.edges().iter().map(|e| e.ends()));
    let pin_mask = g.pins().iter().fold(0u32, |m, &p| m | (1 << p));
    for u in 1u32..(1u32 << n) {
        let inside: Vec<u32> = masks.iter().copied().filter(|&m| m & u == m).collect();
        if inside.is_empty() {
            continue;
        }
        let span = inside.iter().fold(0u32, |m, &e| m | e);
        if span != u {
            // the spanned subset is enumerated separately and is at least as tight
            continue;
        }
        let inner = (span & !pin_mask).count_ones() as i64;
        let pins = (span & pin_mask).count_ones();
        let bound = match pins {
            0 => 2 * inner - 3,
            1 => 2 * inner - 1,
            _ => 2 * inner,
        };
        if inside.len() as i64 > bound {
            let members = |m: u32| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>();
            return Ok(Some(PinnedViolation {
                inner: members(span & !pin_mask),
                pins: members(span & pin_mask),
                edges: inside.len(),
                bound,
            }));
        }
    }
    Ok(None)
}

/// Pinned framework conditions: `|E| = 2|I|` and, for every subgraph,
/// `|E'| <= 2|I'|` (two or more pins), `2|I'| - 1` (one pin), `2|I'| - 3` (none).
pub fn pinned_conditions_oracle(g: &PinnedGraph) -> Result<bool> {
    Ok(pinned_conditions_violation(g)?.is_none())
}
