mod common;

use common::{disjoint_union, graphs};
use rand::Rng;
use tgx_core::expressiveness::{corpus_build, distinguish_events, Model};
use tgx_core::gen::{perturb, GraphSpec};
use tgx_core::pint::PintConfig;
use tgx_core::{Event, NodeId, TemporalGraph, Timestamp};

type Query = (NodeId, NodeId, Timestamp);

/// Event pairs that are hard to tell apart: the same endpoints in `g` and in
/// a lightly perturbed copy of `g`, placed side by side in one graph.
fn twin_pairs(seed: u64, count: usize) -> Vec<(TemporalGraph, Query, Query)> {
    let spec = GraphSpec { nodes: 3..=5, events: 2..=9, max_time: 4, node_feat_values: 1, ..Default::default() };
    let mut r = common::rng(seed);
    graphs(seed, count, &spec)
        .into_iter()
        .map(|g| {
            let copy = if r.random_bool(0.5) { perturb(&mut r, &g, 4) } else { g.clone() };
            let (u, shift) = disjoint_union(&g, &copy);
            let n = g.node_count() as NodeId;
            let a = r.random_range(0..n);
            let b = (a + r.random_range(1..n)) % n;
            (u, (a, b, 5), (a + shift, b + shift, 5))
        })
        .collect()
}

/// Edges of two different unions of cycles with the same node count and one
/// shared timestamp: every node sees the same computation tree, so message
/// passing is blind while walks can close cycles.
fn cycle_pairs(seed: u64, count: usize) -> Vec<(TemporalGraph, Query, Query)> {
    let mut r = common::rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n: NodeId = r.random_range(6..=9);
        let split = |r: &mut rand_chacha::ChaCha8Rng| {
            let mut sizes = Vec::new();
            let mut left = n;
            while left >= 6 && r.random_bool(0.6) {
                let s = r.random_range(3..=left - 3);
                sizes.push(s);
                left -= s;
            }
            sizes.push(left);
            sizes
        };
        let (a, b) = (split(&mut r), split(&mut r));
        let tau = r.random_range(1..=3);
        let cycles = |sizes: &[NodeId]| {
            let mut events = Vec::new();
            let mut start = 0;
            for &s in sizes {
                for i in 0..s {
                    events.push(Event::plain(start + i, start + (i + 1) % s, tau));
                }
                start += s;
            }
            TemporalGraph::from_events(events)
        };
        let (g, shift) = disjoint_union(&cycles(&a), &cycles(&b));
        let t = tau + 1;
        out.push((g, (0, 1, t), (shift, shift + 1, t)));
    }
    out
}

#[test]
fn pint_dominates_mp_tgn_and_caw() {
    let (mut mp_hits, mut caw_hits, mut caw_only) = (0, 0, 0);
    let population = twin_pairs(51, 150).into_iter().chain(cycle_pairs(52, 50));
    for (g, e1, e2) in population {
        for layers in 1..=3 {
            let pint = Model::Pint(PintConfig::pint(layers, layers + 1));
            let mp = distinguish_events(&g, e1, e2, &Model::MpTgnInjective { layers, memory: false }).unwrap();
            let caw = distinguish_events(&g, e1, e2, &Model::Caw { len: layers + 1 }).unwrap();
            let p = distinguish_events(&g, e1, e2, &pint).unwrap();
            if mp.distinguished() || caw.distinguished() {
                assert!(p.distinguished(), "{e1:?} vs {e2:?} at L={layers}\n{}", g.to_events_string());
            }
            mp_hits += usize::from(mp.distinguished());
            caw_hits += usize::from(caw.distinguished());
            caw_only += usize::from(caw.distinguished() && !mp.distinguished());
        }
    }
    assert!(mp_hits > 100 && caw_hits > 50, "mp {mp_hits}, caw {caw_hits}");
    assert!(caw_only > 10, "only {caw_only} separations need walks");
}

#[test]
fn pint_separates_both_walk_constructions() {
    for (name, e1, e2, layers) in [("figS3_left", (0, 1), (3, 1), 3), ("figS3_right", (0, 10), (5, 10), 4)] {
        let case = corpus_build(name).unwrap();
        let g = &case.graphs[0];
        let t = case.time;
        let v = distinguish_events(g, (e1.0, e1.1, t), (e2.0, e2.1, t), &Model::Pint(PintConfig::pint(layers, 4)))
            .unwrap();
        assert!(v.distinguished(), "{name}");
    }
}
