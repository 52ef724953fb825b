//! Executable counterexample corpus.
//!
//! Every case is a small hand-built temporal graph (or pair) with the
//! verdicts each model family is known to produce on it. Node colors are
//! integer features, edge features are uniform (empty), and the ordered
//! timestamps of each construction are the integers `1, 2, 3, ...`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::static_props::{static_properties, StaticProps};
use super::{distinguish_events, distinguish_nodes, Model, Outcome};
use crate::baselines::caw::{caw_graph_code, render_walks};
use crate::baselines::nn::max_abs_diff;
use crate::baselines::tgat::TgatModel;
use crate::baselines::tgn_att::TgnAttModel;
use crate::error::{Result, TgxError};
use crate::graph::{Event, Features, NodeId, TemporalGraph, Timestamp};
use crate::pint::{MemoryKind, PintConfig, PintEngine, SlotTable};
use crate::tct::{build_monotone_tct, build_tct, feature_states, tct_isomorphic};
use crate::twl::{twl_compare, TwlVerdict};

use super::{AGREE_TOL, NUMERIC_HIDDEN, NUMERIC_SEEDS};

/// One expectation attached to a case. Graph indices refer to
/// [`CorpusCase::graphs`].
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Nodes { u: NodeId, v: NodeId, model: Model, expected: Outcome },
    Events { e1: (NodeId, NodeId), e2: (NodeId, NodeId), model: Model, expected: Outcome },
    /// `depth: None` compares monotone TCTs.
    TctIso { graph: usize, u: NodeId, v: NodeId, depth: Option<usize>, expected: bool },
    Twl { expected: TwlVerdict },
    Props { graph: usize, expected: StaticProps },
    /// Node multisets of an injective MP-TGN on graphs 0 and 1.
    NodeMultisets { layers: usize, expected_equal: bool },
    /// Corresponding nodes of graphs 0 and 1 have isomorphic TCTs.
    CorrespondingTcts { depth: usize },
    /// TGN-Att memory states agree within each group, for every seed.
    TgnMemoryGroups { groups: Vec<Vec<NodeId>> },
    /// TGAT attention outputs of `u` and `v` agree at every layer.
    TgatMessages { u: NodeId, v: NodeId, layers: usize },
    /// Rendered anonymized walks of an event, compared as a multiset of lines.
    AnonWalks { u: NodeId, v: NodeId, len: usize, expected: Vec<&'static str> },
    /// Graph-level CAW codes of graphs 0 and 1.
    CawGraphCodes { len: usize, expected_equal: bool },
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: &'static str,
    pub description: &'static str,
    pub graphs: Vec<TemporalGraph>,
    pub time: Timestamp,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub passed: bool,
    pub cases: Vec<CaseReport>,
}

const CATALOG: &[&str] =
    &["fig3_left", "figS2", "figS1", "figS3_left", "fig3_right", "figS3_right", "fig4", "fig5", "fig7"];

pub fn corpus_catalog() -> &'static [&'static str] {
    CATALOG
}

fn graph(colors: &[(NodeId, u64)], events: &[(NodeId, NodeId, Timestamp)]) -> TemporalGraph {
    let feats: BTreeMap<NodeId, Features> =
        colors.iter().map(|&(n, c)| (n, Features(vec![c]))).collect();
    let events = events.iter().map(|&(a, b, t)| Event::plain(a, b, t)).collect();
    TemporalGraph::new(feats, events)
}

fn uniform(n: NodeId) -> Vec<(NodeId, u64)> {
    (0..n).map(|v| (v, 0)).collect()
}

fn mptgn(layers: usize) -> Model {
    Model::MpTgnInjective { layers, memory: false }
}

// u, v, z, w, a, b, c: the star-like graph where u and v see the same
// attention inputs in different proportions.
fn proportion_graph() -> TemporalGraph {
    let (u, v, z, w, a, b, c) = (0, 1, 2, 3, 4, 5, 6);
    graph(
        &[(u, 0), (v, 0), (a, 0), (z, 1), (w, 1), (b, 2), (c, 2)],
        &[(a, z, 1), (u, z, 1), (u, w, 1), (v, w, 1), (z, b, 2), (w, c, 2)],
    )
}

fn proportion_case(name: &'static str) -> CorpusCase {
    let (u, v, z, w, a, b, c) = (0, 1, 2, 3, 4, 5, 6);
    CorpusCase {
        name,
        description: "u and v have non-isomorphic TCTs but identical attention inputs up to multiplicity",
        graphs: vec![proportion_graph()],
        time: 3,
        checks: vec![
            Check::TctIso { graph: 0, u, v, depth: Some(2), expected: false },
            Check::TctIso { graph: 0, u: z, v: w, depth: Some(2), expected: true },
            Check::Nodes { u, v, model: Model::Tgat { layers: 2 }, expected: Outcome::Indistinguishable },
            Check::Nodes { u, v, model: Model::TgnAtt { layers: 2 }, expected: Outcome::Indistinguishable },
            Check::Nodes { u, v, model: mptgn(2), expected: Outcome::Distinguished },
            Check::TgatMessages { u, v, layers: 2 },
            Check::TgnMemoryGroups { groups: vec![vec![u, v, a], vec![z, w], vec![b, c]] },
        ],
    }
}

fn memory_case() -> CorpusCase {
    let (u, v, a, b, c) = (0, 1, 2, 3, 4);
    CorpusCase {
        name: "figS1",
        description: "memory separates u and v at one layer; memoryless models need more depth",
        graphs: vec![graph(&uniform(5), &[(b, c, 1), (u, a, 2), (v, c, 2)])],
        time: 3,
        checks: vec![
            Check::Nodes {
                u,
                v,
                model: Model::MpTgnInjective { layers: 1, memory: true },
                expected: Outcome::Distinguished,
            },
            Check::Nodes { u, v, model: mptgn(1), expected: Outcome::Indistinguishable },
            Check::Nodes { u, v, model: mptgn(3), expected: Outcome::Distinguished },
        ],
    }
}

// u, v, w, z with a late middle edge.
fn walk_path() -> Vec<(NodeId, NodeId, Timestamp)> {
    let (u, v, w, z) = (0, 1, 2, 3);
    vec![(u, v, 1), (v, w, 2), (w, z, 1)]
}

fn caw_wins_case() -> CorpusCase {
    let (u, v, z) = (0, 1, 3);
    CorpusCase {
        name: "figS3_left",
        description: "CAW separates (u,v) from (z,v) although u and z have isomorphic TCTs",
        graphs: vec![graph(&uniform(4), &walk_path())],
        time: 3,
        checks: vec![
            Check::TctIso { graph: 0, u, v: z, depth: Some(4), expected: true },
            Check::Events { e1: (u, v), e2: (z, v), model: Model::Caw { len: 3 }, expected: Outcome::Distinguished },
            Check::Events { e1: (u, v), e2: (z, v), model: mptgn(3), expected: Outcome::Indistinguishable },
            Check::Events {
                e1: (u, v),
                e2: (z, v),
                model: Model::Pint(PintConfig::pint(3, 4)),
                expected: Outcome::Distinguished,
            },
            Check::AnonWalks {
                u,
                v,
                len: 3,
                expected: vec![
                    "{[1,0,0],[0,1,0]} -1-> {[0,1,0],[2,0,0]}",
                    "{[0,1,0],[2,0,0]} -1-> {[1,0,0],[0,1,0]}",
                    "{[0,1,0],[2,0,0]} -2-> {[0,0,0],[0,1,0]} -1-> {[0,0,0],[0,0,1]}",
                ],
            },
            Check::AnonWalks {
                u: z,
                v,
                len: 3,
                expected: vec![
                    "{[1,0,0],[0,0,1]} -1-> {[0,1,0],[0,1,0]}",
                    "{[0,0,0],[2,0,0]} -1-> {[0,0,0],[0,1,0]}",
                    "{[0,0,0],[2,0,0]} -2-> {[0,1,0],[0,1,0]} -1-> {[1,0,0],[0,0,1]}",
                ],
            },
        ],
    }
}

fn mp_limits_case() -> CorpusCase {
    let (u, v, z, u2, v2) = (0, 1, 3, 4, 5);
    let mut events = walk_path();
    events.push((u2, v2, 1));
    CorpusCase {
        name: "fig3_right",
        description: "MP-TGNs confuse (u,v) with (v,z); CAW confuses (u,z) with (u',z)",
        graphs: vec![graph(&uniform(6), &events)],
        time: 3,
        checks: vec![
            Check::TctIso { graph: 0, u, v: z, depth: Some(3), expected: true },
            Check::TctIso { graph: 0, u, v: z, depth: None, expected: true },
            Check::TctIso { graph: 0, u, v: u2, depth: Some(3), expected: false },
            Check::Events { e1: (u, v), e2: (v, z), model: mptgn(3), expected: Outcome::Indistinguishable },
            Check::Events { e1: (u, z), e2: (u2, z), model: Model::Caw { len: 3 }, expected: Outcome::Indistinguishable },
            Check::Events { e1: (u, z), e2: (u2, z), model: mptgn(3), expected: Outcome::Distinguished },
        ],
    }
}

fn mp_wins_case() -> CorpusCase {
    let (u, v, p, q, r) = (0, 1, 2, 3, 4);
    let (u2, v2, p2, q2, r2) = (5, 6, 7, 8, 9);
    let (z, w) = (10, 11);
    let events = [
        (u, v, 1),
        (v, p, 2),
        (p, q, 3),
        (q, r, 2),
        (u2, v2, 1),
        (v2, p2, 2),
        (p2, q2, 3),
        (q2, r2, 1),
        (z, w, 1),
    ];
    let walks = vec!["{[1,0],[0,0]} -1-> {[0,1],[0,0]}", "{[0,0],[1,0]} -1-> {[0,0],[0,1]}"];
    CorpusCase {
        name: "figS3_right",
        description: "deep TCTs separate (u,z) from (u',z) while their walk sets coincide",
        graphs: vec![graph(&uniform(12), &events)],
        time: 4,
        checks: vec![
            Check::TctIso { graph: 0, u, v: u2, depth: Some(3), expected: true },
            Check::TctIso { graph: 0, u, v: u2, depth: Some(4), expected: false },
            Check::Events { e1: (u, z), e2: (u2, z), model: mptgn(4), expected: Outcome::Distinguished },
            Check::Events { e1: (u, z), e2: (u2, z), model: mptgn(3), expected: Outcome::Indistinguishable },
            Check::Events { e1: (u, z), e2: (u2, z), model: Model::Caw { len: 2 }, expected: Outcome::Indistinguishable },
            Check::Events { e1: (u, z), e2: (u2, z), model: Model::Caw { len: 4 }, expected: Outcome::Indistinguishable },
            Check::Events {
                e1: (u, z),
                e2: (u2, z),
                model: Model::Pint(PintConfig::pint(4, 4)),
                expected: Outcome::Distinguished,
            },
            Check::AnonWalks { u, v: z, len: 2, expected: walks.clone() },
            Check::AnonWalks { u: u2, v: z, len: 2, expected: walks },
        ],
    }
}

fn wl_limits_case() -> CorpusCase {
    let colors: Vec<(NodeId, u64)> = (0..6).map(|v| (v, v as u64 % 3)).collect();
    let (u1, v1, w1, u2, v2, w2) = (0, 1, 2, 3, 4, 5);
    let triangles = graph(
        &colors,
        &[(u1, v1, 1), (v1, w1, 2), (w1, u1, 3), (u2, v2, 1), (v2, w2, 2), (w2, u2, 3)],
    );
    let hexagon = graph(
        &colors,
        &[(u1, v1, 1), (v1, w1, 2), (w1, u2, 3), (u2, v2, 1), (v2, w2, 2), (w2, u1, 3)],
    );
    CorpusCase {
        name: "fig4",
        description: "two temporal triangles vs a temporal hexagon: temporal WL cannot tell them apart",
        graphs: vec![triangles, hexagon],
        time: 4,
        checks: vec![
            Check::Twl { expected: TwlVerdict::Inconclusive },
            Check::Props { graph: 0, expected: StaticProps::new(None, Some(3), 2) },
            Check::Props { graph: 1, expected: StaticProps::new(Some(3), Some(6), 1) },
            Check::CorrespondingTcts { depth: 4 },
            Check::NodeMultisets { layers: 4, expected_equal: true },
        ],
    }
}

fn pint_limits_case() -> CorpusCase {
    let (u, v, z) = (0, 1, 2);
    CorpusCase {
        name: "fig5",
        description: "an automorphism swapping u and z makes (u,v) and (v,z) inseparable",
        graphs: vec![graph(&uniform(3), &[(u, v, 1), (z, v, 1), (u, z, 2)])],
        time: 3,
        checks: vec![
            Check::Events {
                e1: (u, v),
                e2: (v, z),
                model: Model::Pint(PintConfig::pint(3, 4)),
                expected: Outcome::Indistinguishable,
            },
            Check::Events { e1: (u, v), e2: (v, z), model: mptgn(3), expected: Outcome::Indistinguishable },
            Check::Events { e1: (u, v), e2: (v, z), model: Model::Caw { len: 3 }, expected: Outcome::Indistinguishable },
        ],
    }
}

fn caw_props_case() -> CorpusCase {
    let (a, b, c, d, e, f) = (0, 1, 2, 3, 4, 5);
    let shared = [(a, b, 1), (c, d, 1), (e, f, 1), (b, c, 2)];
    let mut g1 = shared.to_vec();
    g1.push((a, d, 3));
    let mut g2 = shared.to_vec();
    g2.push((a, e, 3));
    CorpusCase {
        name: "fig7",
        description: "graphs with different diameter, girth and cycle count but equal CAW readouts",
        graphs: vec![graph(&uniform(6), &g1), graph(&uniform(6), &g2)],
        time: 4,
        checks: vec![
            Check::CawGraphCodes { len: 3, expected_equal: true },
            Check::Props { graph: 0, expected: StaticProps::new(None, Some(4), 1) },
            Check::Props { graph: 1, expected: StaticProps::new(Some(5), None, 0) },
        ],
    }
}

pub fn corpus_build(name: &str) -> Result<CorpusCase> {
    match name {
        "fig3_left" => Ok(proportion_case("fig3_left")),
        "figS2" => Ok(proportion_case("figS2")),
        "figS1" => Ok(memory_case()),
        "figS3_left" => Ok(caw_wins_case()),
        "fig3_right" => Ok(mp_limits_case()),
        "figS3_right" => Ok(mp_wins_case()),
        "fig4" => Ok(wl_limits_case()),
        "fig5" => Ok(pint_limits_case()),
        "fig7" => Ok(caw_props_case()),
        other => Err(TgxError::UnknownCase(other.to_string())),
    }
}

fn outcome_check(model: &Model, expected: Outcome, got: Result<super::Verdict>) -> (bool, String) {
    match got {
        Ok(v) => (
            v.result == expected,
            format!("{:?} ({})", v.result, v.witness.unwrap_or_default()),
        ),
        Err(e) => (false, format!("{} failed: {e}", model.tag())),
    }
}

fn describe(check: &Check) -> String {
    match check {
        Check::Nodes { u, v, model, expected } => {
            format!("nodes {u},{v} under {} -> {expected:?}", model.tag())
        }
        Check::Events { e1, e2, model, expected } => format!(
            "events ({},{}) vs ({},{}) under {} -> {expected:?}",
            e1.0, e1.1, e2.0, e2.1, model.tag()
        ),
        Check::TctIso { graph, u, v, depth, expected } => format!(
            "graph {graph} TCT({u}) ~ TCT({v}) at depth {} is {expected}",
            depth.map_or("monotone".to_string(), |d| d.to_string())
        ),
        Check::Twl { expected } => format!("temporal WL -> {expected:?}"),
        Check::Props { graph, expected } => format!("graph {graph} properties {expected}"),
        Check::NodeMultisets { layers, expected_equal } => {
            format!("MP-TGN node multisets at depth {layers} equal is {expected_equal}")
        }
        Check::CorrespondingTcts { depth } => {
            format!("corresponding nodes have isomorphic depth-{depth} TCTs")
        }
        Check::TgnMemoryGroups { groups } => format!("TGN-Att memory equal within {groups:?}"),
        Check::TgatMessages { u, v, layers } => {
            format!("TGAT messages of {u},{v} agree for {layers} layers")
        }
        Check::AnonWalks { u, v, len, .. } => format!("anonymized walks of ({u},{v}) at length {len}"),
        Check::CawGraphCodes { len, expected_equal } => {
            format!("CAW graph codes at length {len} equal is {expected_equal}")
        }
    }
}

fn run_check(case: &CorpusCase, check: &Check) -> Result<(bool, String)> {
    let t = case.time;
    let g0 = &case.graphs[0];
    let pair = || -> Result<(&TemporalGraph, &TemporalGraph)> {
        case.graphs
            .get(1)
            .map(|g1| (g0, g1))
            .ok_or_else(|| TgxError::Validation(format!("case {} needs two graphs", case.name)))
    };
    Ok(match check {
        Check::Nodes { u, v, model, expected } => {
            outcome_check(model, *expected, distinguish_nodes(g0, *u, *v, t, model))
        }
        Check::Events { e1, e2, model, expected } => outcome_check(
            model,
            *expected,
            distinguish_events(g0, (e1.0, e1.1, t), (e2.0, e2.1, t), model),
        ),
        Check::TctIso { graph, u, v, depth, expected } => {
            let g = &case.graphs[*graph];
            let s = feature_states(g);
            let (a, b) = match depth {
                Some(d) => (build_tct(g, *u, t, *d, &s)?, build_tct(g, *v, t, *d, &s)?),
                None => (build_monotone_tct(g, *u, t, &s)?, build_monotone_tct(g, *v, t, &s)?),
            };
            let iso = tct_isomorphic(&a, &b);
            (iso == *expected, format!("isomorphic={iso}"))
        }
        Check::Twl { expected } => {
            let (a, b) = pair()?;
            let r = twl_compare(a, b, t);
            (
                r.verdict == *expected,
                format!("{:?} at round {} (counts {:?} / {:?})", r.verdict, r.round, r.counts_a, r.counts_b),
            )
        }
        Check::Props { graph, expected } => {
            let p = static_properties(&case.graphs[*graph], t);
            (p == *expected, p.to_string())
        }
        Check::NodeMultisets { layers, expected_equal } => {
            let (a, b) = pair()?;
            let slots = SlotTable::for_graphs(&[a, b], t)?;
            let cfg = PintConfig::mp_tgn(*layers, MemoryKind::Identity);
            let ma = PintEngine::with_slots(a, t, cfg.clone(), slots.clone())?.node_multiset()?;
            let mb = PintEngine::with_slots(b, t, cfg, slots)?.node_multiset()?;
            let eq = ma == mb;
            (eq == *expected_equal, format!("equal={eq}"))
        }
        Check::CorrespondingTcts { depth } => {
            let (a, b) = pair()?;
            let (sa, sb) = (feature_states(a), feature_states(b));
            let mut bad = Vec::new();
            for n in a.nodes() {
                let ta = build_tct(a, n, t, *depth, &sa)?;
                let tb = build_tct(b, n, t, *depth, &sb)?;
                if !tct_isomorphic(&ta, &tb) {
                    bad.push(n);
                }
            }
            (bad.is_empty(), format!("mismatched nodes {bad:?}"))
        }
        Check::TgnMemoryGroups { groups } => {
            let mut worst: f64 = 0.0;
            for seed in NUMERIC_SEEDS {
                let mem = TgnAttModel::for_graph(g0, 1, NUMERIC_HIDDEN, seed).memory(g0, t)?;
                for group in groups {
                    for x in &group[1..] {
                        worst = worst.max(max_abs_diff(&mem.states[&group[0]], &mem.states[x]));
                    }
                }
            }
            (worst <= AGREE_TOL, format!("max deviation {worst:.3e}"))
        }
        Check::TgatMessages { u, v, layers } => {
            let mut worst: f64 = 0.0;
            for seed in NUMERIC_SEEDS {
                let trace = TgatModel::for_graph(g0, *layers, NUMERIC_HIDDEN, seed).embed(g0, t)?;
                for agg in &trace.agg {
                    worst = worst.max(max_abs_diff(&agg[u], &agg[v]));
                }
            }
            (worst <= AGREE_TOL, format!("max deviation {worst:.3e}"))
        }
        Check::AnonWalks { u, v, len, expected } => {
            let text = render_walks(g0, *u, *v, t, *len)?;
            let mut got: Vec<&str> = text.lines().collect();
            let mut want = expected.clone();
            got.sort_unstable();
            want.sort_unstable();
            (got == want, format!("walks {got:?}"))
        }
        Check::CawGraphCodes { len, expected_equal } => {
            let (a, b) = pair()?;
            let (ca, cb) = (caw_graph_code(a, t, *len)?, caw_graph_code(b, t, *len)?);
            let eq = ca == cb;
            (eq == *expected_equal, format!("{ca} vs {cb}"))
        }
    })
}

/// Runs every check of every case. Failures, including errors, become
/// report entries.
pub fn corpus_verify(cases: &[CorpusCase]) -> CorpusReport {
    let mut report = CorpusReport { passed: true, cases: Vec::with_capacity(cases.len()) };
    for case in cases {
        let mut checks = Vec::with_capacity(case.checks.len());
        for check in &case.checks {
            let (passed, detail) = run_check(case, check).unwrap_or_else(|e| (false, format!("error: {e}")));
            checks.push(CheckResult { check: describe(check), passed, detail });
        }
        let passed = checks.iter().all(|c| c.passed);
        report.passed &= passed;
        report.cases.push(CaseReport { name: case.name.to_string(), passed, checks });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case() {
        assert!(matches!(corpus_build("fig99"), Err(TgxError::UnknownCase(_))));
    }

    #[test]
    fn empty_selection_gives_empty_report() {
        let r = corpus_verify(&[]);
        assert!(r.cases.is_empty());
        assert!(r.passed);
    }

    #[test]
    fn catalog_builds() {
        for name in corpus_catalog() {
            assert_eq!(corpus_build(name).unwrap().name, *name);
        }
    }
}
