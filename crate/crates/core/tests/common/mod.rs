//! Shared helpers and brute-force oracles for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tgx_core::gen::{random_graph, GraphSpec};
use tgx_core::{NodeId, TctNode, TemporalGraph, Timestamp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graphs(seed: u64, count: usize, spec: &GraphSpec) -> Vec<TemporalGraph> {
    let mut r = rng(seed);
    (0..count).map(|_| random_graph(&mut r, spec)).collect()
}

pub fn query_time(g: &TemporalGraph) -> Timestamp {
    g.max_time().map_or(1, |t| t + 1)
}

/// Number of walks `u = w_0, w_1, ..., w_k = i` whose event timestamps are
/// strictly decreasing and all below `t`. Scans the raw event list.
pub fn monotone_walks(g: &TemporalGraph, u: NodeId, i: NodeId, t: Timestamp, k: usize) -> u64 {
    if k == 0 {
        return u64::from(u == i);
    }
    let mut total = 0;
    for e in g.events() {
        if e.t >= t || !(e.u == u || e.v == u) {
            continue;
        }
        // A self-loop is one neighborhood entry, not two.
        let next = if e.u == u { e.v } else { e.u };
        total += monotone_walks(g, next, i, e.t, k - 1);
    }
    total
}

/// Exhaustive isomorphism test for labelled rooted trees: tries every
/// pairing of children.
pub fn brute_iso(a: &TctNode, b: &TctNode) -> bool {
    if a.state != b.state || a.in_edge != b.in_edge || a.children.len() != b.children.len() {
        return false;
    }
    fn assign(a: &[TctNode], b: &[TctNode], used: &mut Vec<bool>, i: usize) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && brute_iso(&a[i], &b[j]) {
                used[j] = true;
                if assign(a, b, used, i + 1) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; b.children.len()];
    assign(&a.children, &b.children, &mut used, 0)
}

/// Textbook 1-WL on a multigraph given as an adjacency multiset. Colors are
/// relabelled to dense integers by sorting signatures each round, so the
/// result is independent of any interning.
pub fn static_wl_rounds(
    init: &BTreeMap<NodeId, u64>,
    adj: &BTreeMap<NodeId, Vec<NodeId>>,
    rounds: usize,
) -> Vec<BTreeMap<NodeId, u64>> {
    let mut out = vec![init.clone()];
    for _ in 0..rounds {
        let prev = out.last().unwrap();
        let sigs: BTreeMap<NodeId, (u64, Vec<u64>)> = prev
            .iter()
            .map(|(v, c)| {
                let mut nb: Vec<u64> = adj[v].iter().map(|u| prev[u]).collect();
                nb.sort_unstable();
                (*v, (*c, nb))
            })
            .collect();
        let mut distinct: Vec<&(u64, Vec<u64>)> = sigs.values().collect();
        distinct.sort();
        distinct.dedup();
        let next = sigs
            .iter()
            .map(|(v, s)| (*v, distinct.binary_search(&s).unwrap() as u64))
            .collect();
        out.push(next);
    }
    out
}

/// Whether two colorings induce the same partition of the node set.
pub fn same_partition<A: Ord, B: Ord>(a: &BTreeMap<NodeId, A>, b: &BTreeMap<NodeId, B>) -> bool {
    let nodes: Vec<NodeId> = a.keys().copied().collect();
    nodes.iter().all(|x| {
        nodes.iter().all(|y| (a[x] == a[y]) == (b[x] == b[y]))
    })
}

/// `g` with node ids permuted by a seeded shuffle.
pub fn relabel(g: &TemporalGraph, seed: u64) -> TemporalGraph {
    use rand::seq::SliceRandom;
    use tgx_core::Event;
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut image = nodes.clone();
    image.shuffle(&mut rng(seed));
    let map: BTreeMap<NodeId, NodeId> = nodes.into_iter().zip(image).collect();
    let feats = g.node_feats().iter().map(|(n, f)| (map[n], f.clone())).collect();
    let events = g
        .events()
        .iter()
        .map(|e| Event::new(map[&e.u], map[&e.v], e.t, e.feat.clone()))
        .collect();
    TemporalGraph::new(feats, events)
}

/// Disjoint union of `a` and `b`, with `b`'s ids shifted past `a`'s.
pub fn disjoint_union(a: &TemporalGraph, b: &TemporalGraph) -> (TemporalGraph, NodeId) {
    use tgx_core::Event;
    let shift = a.nodes().max().map_or(0, |m| m + 1);
    let mut feats = a.node_feats().clone();
    feats.extend(b.node_feats().iter().map(|(n, f)| (n + shift, f.clone())));
    let mut events = a.events().to_vec();
    events.extend(b.events().iter().map(|e| Event::new(e.u + shift, e.v + shift, e.t, e.feat.clone())));
    (TemporalGraph::new(feats, events), shift)
}
