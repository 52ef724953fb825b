mod common;

use common::{graphs, query_time, relabel, same_partition};
use rand::Rng;
use tgx_core::gen::{perturb, GraphSpec};
use tgx_core::pint::{Embedding, MemoryKind, Mode, PintConfig, PintEngine, SlotTable};
use tgx_core::twl::{twl_compare, twl_refine, TwlVerdict};
use tgx_core::{build_tct, feature_states, tct_canonical, temporal_diameter, NodeId};

fn exact(e: Embedding) -> tgx_core::CanonicalId {
    e.as_exact().expect("exact mode")
}

#[test]
fn embeddings_differ_iff_tcts_differ() {
    let spec = GraphSpec { nodes: 2..=8, events: 0..=20, edge_feat_values: 2, ..Default::default() };
    let mut split = 0;
    for g in graphs(41, 300, &spec) {
        let t = query_time(&g);
        let states = feature_states(&g);
        let nodes: Vec<NodeId> = g.nodes().collect();
        for layers in 1..=3 {
            let engine = PintEngine::new(&g, t, PintConfig::mp_tgn(layers, MemoryKind::Identity)).unwrap();
            let h: Vec<_> = nodes.iter().map(|&v| exact(engine.node_task_embedding(v).unwrap())).collect();
            let trees: Vec<_> = nodes
                .iter()
                .map(|&v| tct_canonical(&build_tct(&g, v, t, layers, &states).unwrap()))
                .collect();
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    assert_eq!(h[i] != h[j], trees[i] != trees[j], "L={layers} nodes {} {}", nodes[i], nodes[j]);
                    split += usize::from(h[i] != h[j]);
                }
            }
        }
    }
    assert!(split > 1000);
}

#[test]
fn memoryless_depth_plus_diameter_covers_memory() {
    let spec = GraphSpec { nodes: 2..=6, events: 0..=12, max_time: 5, node_feat_values: 1, ..Default::default() };
    let mut with_memory = 0;
    for g in graphs(42, 100, &spec) {
        let t = query_time(&g);
        let delta = temporal_diameter(&g, t);
        for layers in 1..=2 {
            let mem = PintEngine::new(&g, t, PintConfig::mp_tgn(layers, MemoryKind::Injective)).unwrap();
            let flat =
                PintEngine::new(&g, t, PintConfig::mp_tgn(layers + delta, MemoryKind::Identity)).unwrap();
            for u in g.nodes() {
                for v in g.nodes().filter(|&v| v > u) {
                    let a = mem.node_task_embedding(u).unwrap() != mem.node_task_embedding(v).unwrap();
                    let b = flat.node_task_embedding(u).unwrap() != flat.node_task_embedding(v).unwrap();
                    if a {
                        with_memory += 1;
                        assert!(b, "memory separates {u},{v} at L={layers} but L+{delta} memoryless does not");
                    }
                }
            }
        }
    }
    assert!(with_memory > 100);
}

#[test]
fn twl_agrees_with_node_multisets() {
    let spec = GraphSpec { nodes: 2..=7, events: 0..=14, max_time: 4, ..Default::default() };
    let base = graphs(43, 100, &spec);
    let mut r = common::rng(44);
    let mut splits = 0;
    for (i, a) in base.iter().enumerate() {
        let b = match r.random_range(0..3) {
            0 => relabel(a, i as u64),
            1 => perturb(&mut r, &relabel(a, i as u64), 4),
            _ => perturb(&mut r, a, 4),
        };
        let t = query_time(a).max(query_time(&b));
        let report = twl_compare(a, &b, t);
        let stable = [a, &b]
            .iter()
            .map(|g| twl_refine(g, t, None).stabilized_at.unwrap())
            .max()
            .unwrap()
            .max(report.round);
        let depth = (stable + temporal_diameter(a, t).max(temporal_diameter(&b, t))).max(1);
        let slots = SlotTable::for_graphs(&[a, &b], t).unwrap();
        let cfg = PintConfig::mp_tgn(depth, MemoryKind::Identity);
        let ma = PintEngine::with_slots(a, t, cfg.clone(), slots.clone()).unwrap().node_multiset().unwrap();
        let mb = PintEngine::with_slots(&b, t, cfg, slots).unwrap().node_multiset().unwrap();
        assert_eq!(report.verdict == TwlVerdict::NonIsomorphic, ma != mb, "pair {i}: {report:?}");
        splits += usize::from(ma != mb);
    }
    assert!(splits > 20 && splits < 90, "{splits} of 100 pairs split");
}

#[test]
fn layer_partitions_track_twl_rounds() {
    for g in graphs(45, 100, &GraphSpec { edge_feat_values: 2, ..Default::default() }) {
        let t = query_time(&g);
        let h = twl_refine(&g, t, Some(3));
        for (layers, part) in h.rounds.iter().enumerate().skip(1) {
            let engine = PintEngine::new(&g, t, PintConfig::mp_tgn(layers, MemoryKind::Identity)).unwrap();
            let emb = g.nodes().map(|v| (v, exact(engine.node_task_embedding(v).unwrap()))).collect();
            assert!(same_partition(&part.colors, &emb), "layer {layers}");
        }
    }
}

#[test]
fn positional_features_only_refine() {
    for g in graphs(46, 150, &GraphSpec::default()) {
        let t = query_time(&g);
        for layers in 1..=3 {
            let plain = PintEngine::new(&g, t, PintConfig { use_positional: false, ..PintConfig::pint(layers, 4) }).unwrap();
            let pos = PintEngine::new(&g, t, PintConfig::pint(layers, 4)).unwrap();
            for u in g.nodes() {
                for v in g.nodes() {
                    if plain.edge_embedding(u, v).unwrap() != plain.edge_embedding(v, v).unwrap() {
                        assert_ne!(pos.edge_embedding(u, v).unwrap(), pos.edge_embedding(v, v).unwrap());
                    }
                    if plain.node_task_embedding(u).unwrap() != plain.node_task_embedding(v).unwrap() {
                        assert_ne!(pos.node_task_embedding(u).unwrap(), pos.node_task_embedding(v).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn edge_embeddings_are_symmetric() {
    for g in graphs(47, 50, &GraphSpec::default()) {
        let t = query_time(&g);
        let exact = PintEngine::new(&g, t, PintConfig::pint(2, 4)).unwrap();
        let numeric = PintEngine::new(&g, t, PintConfig { mode: Mode::Numeric, ..PintConfig::pint(2, 4) }).unwrap();
        for u in g.nodes() {
            for v in g.nodes() {
                assert_eq!(exact.edge_embedding(u, v).unwrap(), exact.edge_embedding(v, u).unwrap());
                assert_eq!(numeric.edge_embedding(u, v).unwrap(), numeric.edge_embedding(v, u).unwrap());
            }
        }
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let g = &graphs(48, 1, &GraphSpec { nodes: 6..=6, events: 15..=15, ..Default::default() })[0];
    let t = query_time(g);
    for mode in [Mode::Exact, Mode::Numeric] {
        let cfg = PintConfig { mode, seed: 9, ..PintConfig::pint(3, 4) };
        let a = PintEngine::new(g, t, cfg.clone()).unwrap();
        let b = PintEngine::new(g, t, cfg).unwrap();
        for v in g.nodes() {
            let (x, y) = (a.node_task_embedding(v).unwrap(), b.node_task_embedding(v).unwrap());
            match (&x, &y) {
                (Embedding::Numeric(p), Embedding::Numeric(q)) => {
                    assert!(p.iter().zip(q).all(|(s, r)| s.to_bits() == r.to_bits()))
                }
                _ => assert_eq!(x, y),
            }
        }
    }
}

#[test]
fn numeric_mode_rejects_injective_memory() {
    let g = &graphs(49, 1, &GraphSpec::default())[0];
    let cfg = PintConfig { mode: Mode::Numeric, memory: MemoryKind::Injective, ..PintConfig::default() };
    assert!(matches!(PintEngine::new(g, 3, cfg), Err(tgx_core::TgxError::Config(_))));
}
