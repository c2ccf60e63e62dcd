//! Isomorphism classes of rigidity circuits and Assur graphs, built up by
//! vertex count, plus the brute-force sweeps used to check them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ops::{edge_split, two_sum};
use crate::assur::check_minimality;
use crate::canon::{canonical_code_with_limit, CanonicalCode};
use crate::counting::{circuit_oracle, pinned_conditions_oracle};
use crate::error::{Error, Result};
use crate::graph::{catalog, split_contracted_vertex, Multigraph, PinnedGraph, VertexKind};

/// Largest vertex count accepted by the enumerators.
pub const ENUMERATION_MAX_VERTICES: usize = 10;

/// Canonical-code bound used while enumerating.
const LIMIT: usize = 16;

/// Circuit classes by vertex count, each with a representative.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitCatalog {
    pub by_size: BTreeMap<usize, BTreeMap<CanonicalCode, Multigraph>>,
}

impl CircuitCatalog {
    pub fn count(&self, n: usize) -> usize {
        self.by_size.get(&n).map_or(0, BTreeMap::len)
    }

    pub fn total(&self) -> usize {
        self.by_size.values().map(BTreeMap::len).sum()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Multigraph> {
        self.by_size.values().flat_map(|m| m.values())
    }
}

/// Assur graph classes by total vertex count (inner plus pins).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssurCatalog {
    pub by_size: BTreeMap<usize, BTreeMap<CanonicalCode, PinnedGraph>>,
}

impl AssurCatalog {
    pub fn count(&self, n: usize) -> usize {
        self.by_size.get(&n).map_or(0, BTreeMap::len)
    }

    pub fn total(&self) -> usize {
        self.by_size.values().map(BTreeMap::len).sum()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &PinnedGraph> {
        self.by_size.values().flat_map(|m| m.values())
    }
}

fn check_bound(n: usize, min: usize) -> Result<()> {
    if n < min || n > ENUMERATION_MAX_VERTICES {
        return Err(Error::InvalidOperation(format!(
            "enumeration bound must lie in {min}..={ENUMERATION_MAX_VERTICES}, got {n}"
        )));
    }
    Ok(())
}

/// Every rigidity circuit on 4 to `n_max` vertices up to isomorphism,
/// generated from `K4` by edge splits and 2-sums.
pub fn enumerate_circuits(n_max: usize) -> Result<CircuitCatalog> {
    check_bound(n_max, 4)?;
    let mut cat = CircuitCatalog::default();
    let k4 = Multigraph::complete(4);
    cat.by_size
        .entry(4)
        .or_default()
        .insert(canonical_code_with_limit(&k4, LIMIT)?, k4);
    for n in 5..=n_max {
        let mut level = BTreeMap::new();
        for g in cat.by_size[&(n - 1)].values() {
            for e in 0..g.edge_count() {
                let (u, w) = g.edge(e).ends();
                for x in (0..g.vertex_count()).filter(|&x| x != u && x != w) {
                    let h = edge_split(g, e, x)?;
                    level.entry(canonical_code_with_limit(&h, LIMIT)?).or_insert(h);
                }
            }
        }
        for n1 in 4..=n - 2 {
            let n2 = n + 2 - n1;
            if n2 < n1 {
                break;
            }
            for g1 in cat.by_size[&n1].values() {
                for g2 in cat.by_size[&n2].values() {
                    for e1 in 0..g1.edge_count() {
                        for e2 in 0..g2.edge_count() {
                            for flip in [false, true] {
                                let h = two_sum(g1, g2, e1, e2, flip)?;
                                level.entry(canonical_code_with_limit(&h, LIMIT)?).or_insert(h);
                            }
                        }
                    }
                }
            }
        }
        cat.by_size.insert(n, level);
    }
    Ok(cat)
}

/// Partitions of `0..len` into exactly `blocks` labelled blocks, as
/// restricted growth strings (first occurrence of label `k` precedes `k + 1`).
pub fn set_partitions(len: usize, blocks: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, len: usize, blocks: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            if used == blocks {
                out.push(prefix.clone());
            }
            return;
        }
        // not enough positions left to open the missing blocks
        if blocks - used > len - prefix.len() {
            return;
        }
        for l in 0..(used + 1).min(blocks) {
            prefix.push(l);
            go(prefix, len, blocks, used.max(l + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if blocks <= len {
        go(&mut Vec::new(), len, blocks, 0, &mut out);
    }
    out
}

/// Every Assur graph on at most `n_max` vertices (inner plus pins) up to
/// isomorphism: the dyad, and every way of splitting one vertex of a
/// circuit into two or more pins.
pub fn enumerate_assur(n_max: usize) -> Result<AssurCatalog> {
    check_bound(n_max, 3)?;
    let mut cat = AssurCatalog::default();
    let dyad = catalog::dyad();
    cat.by_size
        .entry(3)
        .or_default()
        .insert(canonical_code_with_limit(&dyad, LIMIT)?, dyad);
    if n_max < 5 {
        return Ok(cat);
    }
    let circuits = enumerate_circuits(n_max - 1)?;
    for c in circuits.graphs() {
        let m = c.vertex_count();
        for v in 0..m {
            let deg = c.degree(v);
            for pins in 2..=deg.min(n_max + 1 - m) {
                for assignment in set_partitions(deg, pins) {
                    let g = split_contracted_vertex(c, v, &assignment)?;
                    cat.by_size
                        .entry(g.vertex_count())
                        .or_default()
                        .entry(canonical_code_with_limit(&g, LIMIT)?)
                        .or_insert(g);
                }
            }
        }
    }
    Ok(cat)
}

/// All `n`-vertex graphs with `2n - 2` edges that the exhaustive circuit
/// oracle accepts, up to isomorphism. Only simple graphs are swept, so the
/// doubled edge (`n = 2`) is not included.
pub fn circuit_sweep(n: usize) -> Result<BTreeMap<CanonicalCode, Multigraph>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = BTreeMap::new();
    if n < 3 {
        return Ok(out);
    }
    for choice in combinations(pairs.len(), 2 * n - 2) {
        let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
        let g = Multigraph::from_edges(n, &edges)?;
        if circuit_oracle(&g)? {
            out.entry(canonical_code_with_limit(&g, LIMIT)?).or_insert(g);
        }
    }
    Ok(out)
}

/// All pinned isostatic graphs with exactly `n` vertices, at least two pins,
/// and no isolated pin, up to isomorphism. Uses the exhaustive pinned
/// conditions oracle.
pub fn pinned_isostatic_sweep(n: usize) -> Result<BTreeMap<CanonicalCode, PinnedGraph>> {
    let mut out = BTreeMap::new();
    for inner in 1..n.saturating_sub(1) {
        let pins = n - inner;
        let mut pairs = Vec::new();
        for a in 0..inner {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        let names: Vec<(String, VertexKind)> = (0..n)
            .map(|v| {
                if v < inner {
                    (format!("v{v}"), VertexKind::Inner)
                } else {
                    (format!("p{}", v - inner), VertexKind::Pinned)
                }
            })
            .collect();
        let vertices: Vec<(&str, VertexKind)> = names.iter().map(|(l, k)| (l.as_str(), *k)).collect();
        if 2 * inner > pairs.len() || pins > 2 * inner {
            continue;
        }
        for choice in combinations(pairs.len(), 2 * inner) {
            let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
            let g = PinnedGraph::from_parts(&vertices, &edges)?;
            if (inner..n).any(|p| g.degree(p) == 0) {
                continue;
            }
            if pinned_conditions_oracle(&g)? {
                out.entry(canonical_code_with_limit(&g, LIMIT)?).or_insert(g);
            }
        }
    }
    Ok(out)
}

/// The Assur graphs among [`pinned_isostatic_sweep`]: those passing the
/// exhaustive minimality test.
pub fn assur_sweep(n: usize) -> Result<BTreeMap<CanonicalCode, PinnedGraph>> {
    let mut out = BTreeMap::new();
    for (code, g) in pinned_isostatic_sweep(n)? {
        if check_minimality(&g)? {
            out.insert(code, g);
        }
    }
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;

    #[test]
    fn partitions_and_combinations() {
        assert_eq!(set_partitions(3, 2), vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(4, 4).len(), 1);
        assert!(set_partitions(2, 3).is_empty());
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn small_circuit_counts() {
        let cat = enumerate_circuits(5).unwrap();
        assert_eq!(cat.count(4), 1);
        assert_eq!(cat.count(5), 1);
        let wheel = canonical_code(&catalog::wheel(4)).unwrap();
        assert!(cat.by_size[&5].contains_key(&wheel));
        assert!(enumerate_circuits(3).is_err());
        assert!(enumerate_circuits(11).is_err());
    }

    #[test]
    fn small_assur_counts() {
        let cat = enumerate_assur(5).unwrap();
        assert_eq!(cat.count(3), 1);
        assert_eq!(cat.count(4), 0);
        let triad = canonical_code(&catalog::triad()).unwrap();
        assert!(!cat.by_size[&5].contains_key(&triad));
        let k4_split = canonical_code(&catalog::k4_two_pin()).unwrap();
        assert!(cat.by_size[&5].contains_key(&k4_split));
    }

    #[test]
    fn sweeps_match_small_catalogs() {
        let cat = enumerate_circuits(5).unwrap();
        for n in [4, 5] {
            let sweep: Vec<_> = circuit_sweep(n).unwrap().into_keys().collect();
            let gen: Vec<_> = cat.by_size[&n].keys().cloned().collect();
            assert_eq!(sweep, gen);
        }
        assert_eq!(assur_sweep(3).unwrap().len(), 1);
        assert!(assur_sweep(4).unwrap().is_empty());
    }
}
