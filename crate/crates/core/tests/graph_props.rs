mod common;

use proptest::prelude::*;
use tgx_core::gen::{random_snapshots, GraphSpec};
use tgx_core::{ctdg_to_dtdg, dtdg_to_ctdg, load_events, save_events, Event, TemporalGraph};

fn arb_graph() -> impl Strategy<Value = TemporalGraph> {
    let event = (0u32..6, 0u32..6, 0u64..8, proptest::collection::vec(0u64..3, 0..2));
    proptest::collection::vec(event, 0..25).prop_map(|evs| {
        TemporalGraph::from_events(evs.into_iter().map(|(a, b, t, f)| Event::new(a, b, t, f)).collect())
    })
}

proptest! {
    #[test]
    fn snapshots_grow_with_time(g in arb_graph(), t1 in 0u64..10, dt in 0u64..10) {
        let early = g.snapshot_at(t1);
        let late = g.snapshot_at(t1 + dt);
        prop_assert!(early.events().len() <= late.events().len());
        // Both are sorted prefixes of the same event list.
        prop_assert_eq!(early.events(), &late.events()[..early.events().len()]);
    }

    #[test]
    fn neighborhood_matches_scan(g in arb_graph(), t in 0u64..10) {
        for v in g.nodes() {
            let scan = g.events().iter().filter(|e| e.t < t && (e.u == v || e.v == v)).count();
            prop_assert_eq!(g.neighborhood(v, t).unwrap().len(), scan);
        }
    }

    #[test]
    fn event_text_round_trip(g in arb_graph()) {
        let text = g.to_events_string();
        let back = TemporalGraph::parse_events(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_events_string(), text);
    }
}

#[test]
fn dtdg_round_trip_on_random_sequences() {
    let mut r = common::rng(0);
    for _ in 0..100 {
        let seq = random_snapshots(&mut r, 6, 8);
        for delta in [1, 3] {
            let g = dtdg_to_ctdg(&seq, delta).unwrap();
            assert_eq!(ctdg_to_dtdg(&g, delta).unwrap(), seq);
        }
        let text = seq.to_snapshots_string();
        assert_eq!(tgx_core::SnapshotSequence::parse_snapshots(&text).unwrap(), seq);
    }
}

#[test]
fn event_files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    for (i, g) in common::graphs(1, 20, &GraphSpec { edge_feat_values: 3, ..Default::default() })
        .into_iter()
        .enumerate()
    {
        let path = dir.path().join(format!("g{i}.events"));
        save_events(&g, &path).unwrap();
        assert_eq!(load_events(&path).unwrap(), g);
    }
}

#[test]
fn malformed_lines_report_line_numbers() {
    let err = TemporalGraph::parse_events("# tgx-events v1\n0,1,2,\n0,1\n").unwrap_err();
    assert!(matches!(err, tgx_core::TgxError::Parse { line: 3, .. }), "{err}");
    let err = TemporalGraph::parse_events("0,1,-2,\n").unwrap_err();
    assert!(matches!(err, tgx_core::TgxError::Validation(_)), "{err}");
}
