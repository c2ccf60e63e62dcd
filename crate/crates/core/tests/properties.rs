use std::collections::BTreeMap;

use assur_core::assur::{decompose, is_assur, AssurOptions};
use assur_core::canon::canonical_code;
use assur_core::counting::{
    bar_joint_dof, circuit_oracle, grubler_dof, laman_independent_oracle, pinned_conditions_oracle, LinkageSchema,
};
use assur_core::generate::{enumerate_assur, pin_rearrangement, set_partitions};
use assur_core::graph::{contract_pins, contracted_pin_vertex, split_contracted_vertex, Multigraph, PinnedGraph, VertexKind};
use assur_core::numeric::{build_rigidity_matrix, motion_space, Configuration};
use assur_core::pebble::{all_circuits, pebble_rank, pinned_isostatic};
use assur_core::Fp61;
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn simple_graph(max_n: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_n).prop_flat_map(|n| {
        let all = pairs(n);
        let len = all.len();
        subsequence(all, 0..=len).prop_map(move |edges| Multigraph::from_edges(n, &edges).unwrap())
    })
}

fn pinned_graph(max_n: usize) -> impl Strategy<Value = PinnedGraph> {
    (3..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n - 1))
        .prop_flat_map(|(n, inner)| {
            let candidates: Vec<(usize, usize)> = pairs(n).into_iter().filter(|&(a, _)| a < inner).collect();
            let len = candidates.len();
            subsequence(candidates, 0..=len).prop_map(move |edges| {
                let names: Vec<(String, VertexKind)> = (0..n)
                    .map(|v| if v < inner { (format!("v{v}"), VertexKind::Inner) } else { (format!("p{v}"), VertexKind::Pinned) })
                    .collect();
                let vertices: Vec<(&str, VertexKind)> = names.iter().map(|(l, k)| (l.as_str(), *k)).collect();
                PinnedGraph::from_parts(&vertices, &edges).unwrap()
            })
        })
}

/// Brute-force isomorphism test respecting vertex colours and edge multiplicities.
fn isomorphic(a: &(Vec<u8>, Vec<(usize, usize)>), b: &(Vec<u8>, Vec<(usize, usize)>)) -> bool {
    fn counts(edges: &[(usize, usize)], perm: &[usize]) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &(x, y) in edges {
            let (p, q) = (perm[x], perm[y]);
            *m.entry((p.min(q), p.max(q))).or_insert(0) += 1;
        }
        m
    }
    let n = a.0.len();
    if n != b.0.len() || a.1.len() != b.1.len() {
        return false;
    }
    let target = counts(&b.1, &(0..n).collect::<Vec<_>>());
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        (0..n).all(|v| a.0[v] == b.0[p[v]]) && counts(&a.1, p) == target
    })
}

fn permutations(p: &mut Vec<usize>, k: usize, found: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return found(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, found) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

fn colored(g: &PinnedGraph) -> (Vec<u8>, Vec<(usize, usize)>) {
    (
        (0..g.vertex_count()).map(|v| g.is_pin(v) as u8).collect(),
        g.edges().iter().map(|e| e.ends()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_ignores_edge_order(g in simple_graph(8), seed in any::<u64>()) {
        let rank = pebble_rank(&g, None).rank;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        for _ in 0..20 {
            order.shuffle(&mut rng);
            prop_assert_eq!(pebble_rank(&g, Some(&order)).rank, rank);
        }
    }

    #[test]
    fn pebble_matches_laman_oracle(g in simple_graph(7)) {
        let report = pebble_rank(&g, None);
        prop_assert_eq!(report.is_independent(), laman_independent_oracle(&g).unwrap());
        prop_assert!(report.rank <= 2 * g.vertex_count() - 3);
        let basis: Vec<(usize, usize)> = report.independent.iter().map(|&i| g.edge(i).ends()).collect();
        prop_assert!(laman_independent_oracle(&Multigraph::from_edges(g.vertex_count(), &basis).unwrap()).unwrap());
    }

    #[test]
    fn fundamental_circuits_pass_the_oracle(g in simple_graph(7)) {
        let report = pebble_rank(&g, None);
        for c in all_circuits(&g, &report) {
            let edges: Vec<(usize, usize)> = c.iter().map(|&i| g.edge(i).ends()).collect();
            let sub = Multigraph::from_edges(g.vertex_count(), &edges).unwrap();
            let touched: Vec<usize> = (0..g.vertex_count()).filter(|&v| sub.degree(v) > 0).collect();
            prop_assert!(circuit_oracle(&sub.induced(&touched)).unwrap());
            prop_assert_eq!(c.len() % 2, 0);
        }
    }

    #[test]
    fn pinned_isostatic_matches_conditions(g in pinned_graph(6)) {
        let g = g.without_isolated_pins();
        prop_assume!(g.pin_count() >= 2);
        prop_assert_eq!(pinned_isostatic(&g).unwrap(), pinned_conditions_oracle(&g).unwrap());
    }

    #[test]
    fn canonical_code_matches_brute_force(a in pinned_graph(6), b in pinned_graph(6)) {
        let same = canonical_code(&a).unwrap() == canonical_code(&b).unwrap();
        prop_assert_eq!(same, isomorphic(&colored(&a), &colored(&b)));
    }

    #[test]
    fn canonical_code_ignores_relabelling(g in pinned_graph(7), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut h = PinnedGraph::new();
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
            h.add_vertex(g.label(old), g.kind(old)).unwrap();
        }
        for e in g.edges().iter().rev() {
            let (a, b) = e.ends();
            h.add_edge(inverse[b], inverse[a]).unwrap();
        }
        prop_assert_eq!(canonical_code(&g).unwrap(), canonical_code(&h).unwrap());
    }

    #[test]
    fn contraction_round_trip(g in pinned_graph(7)) {
        let g = g.without_isolated_pins();
        prop_assume!(g.pin_count() >= 2);
        let m = contract_pins(&g);
        prop_assert_eq!(m.edge_count(), g.edge_count());
        let pstar = contracted_pin_vertex(&g);
        let pins = g.pins();
        let assignment: Vec<usize> = m
            .incident_edges(pstar)
            .into_iter()
            .map(|i| {
                let (a, b) = g.edge(i).ends();
                let pin = if g.is_pin(a) { a } else { b };
                pins.iter().position(|&p| p == pin).unwrap()
            })
            .collect();
        let back = split_contracted_vertex(&m, pstar, &assignment).unwrap();
        prop_assert_eq!(back.edge_count(), g.edge_count());
        prop_assert_eq!(canonical_code(&back).unwrap(), canonical_code(&g).unwrap());
    }

    #[test]
    fn bar_encoding_matches_naive_count(g in simple_graph(7)) {
        prop_assume!(g.edge_count() > 0 && !g.has_isolated_vertex());
        let s = LinkageSchema::from_bar_graph(&g).unwrap();
        prop_assert_eq!(grubler_dof(&s).unwrap().mobility, bar_joint_dof(&g));
    }

    #[test]
    fn unpinned_motions_include_trivial_ones(g in simple_graph(7), seed in any::<u64>()) {
        let c = Configuration::random(g.vertex_count(), &mut ChaCha8Rng::seed_from_u64(seed));
        let basis = motion_space(&g, &c).unwrap();
        prop_assert!(basis.dimension() >= 3);
        prop_assert!(basis.residuals(&g, &c).iter().all(|r| *r == Fp61::new(0)));
        let rank = build_rigidity_matrix(&g, &c).unwrap().rank();
        let rigid = rank == 2 * g.vertex_count() - 3;
        prop_assert_eq!(basis.dimension() == 3, rigid);
    }
}

#[test]
fn contraction_circuits_meet_only_at_the_pin() {
    for g in enumerate_assur(6).unwrap().graphs().chain(isostatic_examples().iter()) {
        if !pinned_isostatic(g).unwrap() {
            continue;
        }
        let m = contract_pins(g);
        let pstar = contracted_pin_vertex(g);
        let circuits = all_circuits(&m, &pebble_rank(&m, None));
        for (i, a) in circuits.iter().enumerate() {
            for b in &circuits[i + 1..] {
                assert!(a.iter().all(|e| !b.contains(e)));
                let verts = |c: &Vec<usize>| -> Vec<usize> {
                    let mut v: Vec<usize> = c.iter().flat_map(|&e| [m.edge(e).ends().0, m.edge(e).ends().1]).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                let (va, vb) = (verts(a), verts(b));
                let shared: Vec<usize> = va.into_iter().filter(|v| vb.contains(v)).collect();
                assert_eq!(shared, vec![pstar]);
            }
        }
    }
}

fn isostatic_examples() -> Vec<PinnedGraph> {
    use assur_core::catalog::*;
    vec![stacked_dyads(), two_dyad_chain(), dyad(), triad()]
}

#[test]
fn assur_iff_single_component() {
    for n in 3..=6 {
        for g in assur_core::generate::pinned_isostatic_sweep(n).unwrap().values() {
            let v = is_assur(g, &AssurOptions::default()).unwrap();
            assert_eq!(v.overall, decompose(g).unwrap().components.len() == 1);
        }
    }
}

#[test]
fn pin_rearrangement_keeps_contraction() {
    for g in enumerate_assur(6).unwrap().graphs() {
        let code = canonical_code(&contract_pins(g)).unwrap();
        let slots = contract_pins(g).degree(contracted_pin_vertex(g));
        for k in 2..=slots {
            for a in set_partitions(slots, k) {
                if let Ok(h) = pin_rearrangement(g, &a) {
                    assert_eq!(canonical_code(&contract_pins(&h)).unwrap(), code);
                }
            }
        }
    }
}

#[test]
fn vertex_deletion_with_and_without_pins_agree() {
    use assur_core::assur::check_vertex_deletion;
    for n in 3..=6 {
        for g in assur_core::generate::pinned_isostatic_sweep(n).unwrap().values() {
            assert_eq!(
                check_vertex_deletion(g, 11, 8, true).unwrap(),
                check_vertex_deletion(g, 11, 8, false).unwrap(),
            );
        }
    }
}
