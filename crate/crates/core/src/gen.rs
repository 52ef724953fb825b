//! Seeded random instances for property suites and benchmarks.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::graph::{Event, Features, NodeId, Snapshot, SnapshotSequence, TemporalGraph, Timestamp};

#[derive(Clone, Debug)]
pub struct GraphSpec {
    pub nodes: RangeInclusive<u32>,
    pub events: RangeInclusive<usize>,
    /// Timestamps are drawn from `1..=max_time`.
    pub max_time: Timestamp,
    /// Node features are single values below this; 1 means uniform.
    pub node_feat_values: u64,
    /// Edge features are single values below this; 0 means empty tuples.
    pub edge_feat_values: u64,
}

impl Default for GraphSpec {
    fn default() -> Self {
        GraphSpec {
            nodes: 2..=8,
            events: 0..=20,
            max_time: 6,
            node_feat_values: 2,
            edge_feat_values: 0,
        }
    }
}

/// Random multigraph without self-loops on nodes `0..n`.
pub fn random_graph(rng: &mut impl Rng, spec: &GraphSpec) -> TemporalGraph {
    let n = rng.random_range(spec.nodes.clone()).max(2);
    let feats: BTreeMap<NodeId, Features> = (0..n)
        .map(|v| {
            let f = if spec.node_feat_values <= 1 {
                Features::empty()
            } else {
                Features(vec![rng.random_range(0..spec.node_feat_values)])
            };
            (v, f)
        })
        .collect();
    let m = rng.random_range(spec.events.clone());
    let events = (0..m)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let t = rng.random_range(1..=spec.max_time.max(1));
            let f = if spec.edge_feat_values == 0 {
                Features::empty()
            } else {
                Features(vec![rng.random_range(0..spec.edge_feat_values)])
            };
            Event::new(a, b, t, f)
        })
        .collect();
    TemporalGraph::new(feats, events)
}

/// `g` with one event retimed or one node's feature changed.
pub fn perturb(rng: &mut impl Rng, g: &TemporalGraph, max_time: Timestamp) -> TemporalGraph {
    let mut feats = g.node_feats().clone();
    let mut events = g.events().to_vec();
    if !events.is_empty() && rng.random_bool(0.7) {
        let i = rng.random_range(0..events.len());
        events[i].t = rng.random_range(1..=max_time.max(1));
    } else if let Some(&v) = feats.keys().nth(rng.random_range(0..feats.len().max(1))) {
        let f = feats.get_mut(&v).expect("key exists");
        f.0 = vec![f.0.first().map_or(1, |x| x + 1)];
    }
    TemporalGraph::new(feats, events)
}

/// Random DTDG. The last snapshot is never empty so the sequence is already
/// in canonical form.
pub fn random_snapshots(
    rng: &mut impl Rng,
    max_snapshots: usize,
    max_nodes: u32,
) -> SnapshotSequence {
    let count = rng.random_range(0..=max_snapshots);
    let mut snaps = Vec::with_capacity(count);
    for i in 0..count {
        let last = i + 1 == count;
        let mut nodes = BTreeMap::new();
        for v in 0..max_nodes {
            if rng.random_bool(0.6) || (last && v == 0) {
                let width = rng.random_range(0..=2);
                let f = (0..width).map(|_| rng.random_range(0..4)).collect::<Vec<u64>>();
                nodes.insert(v, Features(f));
            }
        }
        let ids: Vec<NodeId> = nodes.keys().copied().collect();
        let mut edges = Vec::new();
        for _ in 0..rng.random_range(0..=ids.len() * 2) {
            let a = ids[rng.random_range(0..ids.len())];
            let b = ids[rng.random_range(0..ids.len())];
            let f = if rng.random_bool(0.5) { vec![] } else { vec![rng.random_range(0..3)] };
            edges.push((a, b, Features(f)));
        }
        snaps.push(Snapshot::new(nodes, edges).expect("endpoints drawn from node set"));
    }
    SnapshotSequence::new(snaps)
}
