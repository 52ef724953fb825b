mod common;

use std::collections::BTreeMap;

use common::{graphs, query_time, relabel, same_partition, static_wl_rounds};
use tgx_core::gen::GraphSpec;
use tgx_core::twl::{refine_once, twl_compare, twl_refine, TwlVerdict};
use tgx_core::{Event, NodeId, TemporalGraph};

#[test]
fn refinement_is_monotone_and_stabilizes_within_node_count() {
    let spec = GraphSpec { events: 0..=20, edge_feat_values: 2, ..Default::default() };
    for g in graphs(31, 300, &spec) {
        let t = query_time(&g);
        let h = twl_refine(&g, t, None);
        let stable = h.stabilized_at.expect("refinement terminates");
        assert!(stable <= g.node_count());
        for w in h.rounds.windows(2) {
            let (a, b) = (&w[0].colors, &w[1].colors);
            for x in a.keys() {
                for y in a.keys() {
                    if b[x] == b[y] {
                        assert_eq!(a[x], a[y], "round {} merged a split pair", w[1].round);
                    }
                }
            }
        }
        // Past the stable round nothing moves.
        let later = refine_once(&g, t, h.last());
        assert!(same_partition(&later.colors, &h.last().colors));
    }
}

#[test]
fn uniform_times_reduce_to_static_wl() {
    let spec = GraphSpec { events: 0..=16, max_time: 1, node_feat_values: 3, ..Default::default() };
    for g in graphs(32, 200, &spec) {
        let init: BTreeMap<NodeId, u64> =
            g.node_feats().iter().map(|(n, f)| (*n, f.0.first().copied().unwrap_or(0))).collect();
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = g.nodes().map(|n| (n, vec![])).collect();
        for e in g.events() {
            adj.get_mut(&e.u).unwrap().push(e.v);
            adj.get_mut(&e.v).unwrap().push(e.u);
        }
        let n = g.node_count();
        let expected = static_wl_rounds(&init, &adj, n + 1);
        let h = twl_refine(&g, 2, Some(n + 1));
        for (r, part) in h.rounds.iter().enumerate() {
            assert!(same_partition(&part.colors, &expected[r]), "round {r}");
        }
    }
}

#[test]
fn relabelled_graphs_are_inconclusive() {
    for (i, g) in graphs(33, 200, &GraphSpec::default()).iter().enumerate() {
        let h = relabel(g, i as u64);
        let t = query_time(g);
        assert_eq!(twl_compare(g, &h, t).verdict, TwlVerdict::Inconclusive);
    }
}

#[test]
fn timestamps_matter() {
    // Same static path, different orderings along it.
    let a = TemporalGraph::from_events(vec![Event::plain(0, 1, 1), Event::plain(1, 2, 2)]);
    let b = TemporalGraph::from_events(vec![Event::plain(0, 1, 1), Event::plain(1, 2, 1)]);
    let report = twl_compare(&a, &b, 3);
    assert_eq!(report.verdict, TwlVerdict::NonIsomorphic);
    assert_eq!(report.round, 1);
    // Events at or after the query time are invisible.
    assert_eq!(twl_compare(&a, &b, 1).verdict, TwlVerdict::Inconclusive);
}

#[test]
fn differing_node_counts_split_at_round_zero() {
    let a = TemporalGraph::from_events(vec![Event::plain(0, 1, 1)]);
    let b = TemporalGraph::from_events(vec![Event::plain(0, 1, 1), Event::plain(1, 2, 1)]);
    let report = twl_compare(&a, &b, 5);
    assert_eq!((report.verdict, report.round), (TwlVerdict::NonIsomorphic, 0));
}
