mod common;

use std::collections::BTreeMap;

use common::{graphs, query_time, relabel};
use rand::Rng;
use tgx_core::baselines::caw::{caw_encode_event, caw_walk_set, Walk};
use tgx_core::baselines::nn::{max_abs_diff, param_rng};
use tgx_core::baselines::tgat::{tgat_aggregate, TgatLayer};
use tgx_core::gen::GraphSpec;
use tgx_core::{build_monotone_tct, NodeId, StateMap, TctNode, Timestamp};

#[test]
fn tgat_ignores_neighborhood_proportions() {
    let mut r = common::rng(61);
    for seed in 0..50 {
        let layer = TgatLayer::random(6, 2, 4, &mut param_rng(seed, 0));
        let h_v: Vec<f64> = (0..6).map(|_| r.random_range(-1.0..1.0)).collect();
        let neigh: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..r.random_range(1..5))
            .map(|_| {
                (
                    (0..6).map(|_| r.random_range(-1.0..1.0)).collect(),
                    (0..2).map(|_| r.random_range(0.0..2.0)).collect(),
                    r.random_range(0.0..5.0),
                )
            })
            .collect();
        let base = tgat_aggregate(&h_v, &neigh, &layer);
        for k in 2..=4 {
            let repeated: Vec<_> = neigh.iter().flat_map(|x| std::iter::repeat_n(x.clone(), k)).collect();
            assert!(max_abs_diff(&base, &tgat_aggregate(&h_v, &repeated, &layer)) < 1e-9);
        }
    }
}

#[test]
fn caw_codes_survive_relabelling() {
    let spec = GraphSpec { events: 1..=14, ..Default::default() };
    for (i, g) in graphs(62, 100, &spec).iter().enumerate() {
        let h = relabel(g, 1000 + i as u64);
        // The shuffle is not tracked here, so compare multisets of event codes.
        let t = query_time(g);
        for len in 1..=3 {
            let mut a: Vec<_> = g.events().iter().map(|e| caw_encode_event(g, e.u, e.v, t, len).unwrap()).collect();
            let mut b: Vec<_> = h.events().iter().map(|e| caw_encode_event(&h, e.u, e.v, t, len).unwrap()).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "len {len}");
        }
    }
}

#[test]
fn caw_codes_are_identity_free_under_a_known_permutation() {
    let g = &graphs(63, 1, &GraphSpec { nodes: 6..=6, events: 12..=12, ..Default::default() })[0];
    let perm: BTreeMap<NodeId, NodeId> = (0..6).map(|v| (v, (v * 5 + 2) % 6)).collect();
    let h = tgx_core::TemporalGraph::new(
        g.node_feats().iter().map(|(n, f)| (perm[n], f.clone())).collect(),
        g.events().iter().map(|e| tgx_core::Event::new(perm[&e.u], perm[&e.v], e.t, e.feat.clone())).collect(),
    );
    let t = query_time(g);
    for u in 0..6 {
        for v in 0..6 {
            assert_eq!(
                caw_encode_event(g, u, v, t, 3).unwrap(),
                caw_encode_event(&h, perm[&u], perm[&v], t, 3).unwrap()
            );
        }
    }
}

fn tree_paths(n: &TctNode, prefix: &mut Walk, depth: usize, out: &mut Vec<Walk>) {
    if prefix.len() == depth + 1 {
        out.push(prefix.clone());
        return;
    }
    for c in &n.children {
        prefix.push((c.graph_node, c.in_edge.as_ref().unwrap().1));
        tree_paths(c, prefix, depth, out);
        prefix.pop();
    }
}

fn leaves_within(n: &TctNode, budget: usize) -> usize {
    if budget == 0 || n.children.is_empty() {
        1
    } else {
        n.children.iter().map(|c| leaves_within(c, budget - 1)).sum()
    }
}

#[test]
fn walk_sets_agree_with_monotone_tct_paths() {
    let spec = GraphSpec { events: 0..=14, max_time: 5, ..Default::default() };
    for g in graphs(64, 100, &spec) {
        let t: Timestamp = query_time(&g);
        for u in g.nodes() {
            let tree = build_monotone_tct(&g, u, t, &StateMap::new()).unwrap();
            for len in 1..=4 {
                let set = caw_walk_set(&g, u, t, len).unwrap();
                assert_eq!(set.walks.len(), leaves_within(&tree.root, len - 1));
                for depth in 0..len {
                    let mut paths = Vec::new();
                    tree_paths(&tree.root, &mut vec![(u, t)], depth, &mut paths);
                    let mut prefixes: Vec<Walk> = set
                        .walks
                        .iter()
                        .filter(|w| w.len() > depth)
                        .map(|w| w[..=depth].to_vec())
                        .collect();
                    paths.sort();
                    paths.dedup();
                    prefixes.sort();
                    prefixes.dedup();
                    assert_eq!(paths, prefixes, "u={u} len={len} depth={depth}");
                }
            }
        }
    }
}
