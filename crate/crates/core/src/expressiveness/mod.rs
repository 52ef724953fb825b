//! Distinguishability oracles across model families.

pub mod corpus;
pub mod static_props;

use serde::Serialize;

use crate::baselines::caw::caw_encode_event;
use crate::baselines::nn::max_abs_diff;
use crate::baselines::tgat::TgatModel;
use crate::baselines::tgn_att::TgnAttModel;
use crate::error::{Result, TgxError};
use crate::graph::{NodeId, TemporalGraph, Timestamp};
use crate::pint::{Embedding, MemoryKind, Mode, PintConfig, PintEngine};
use crate::twl::twl_refine;

pub use corpus::{corpus_build, corpus_catalog, corpus_verify, CorpusCase, CorpusReport};
pub use static_props::{simple_cycle_count, static_properties, StaticProps};

/// Numeric verdicts: any seed deviating by more than this distinguishes.
pub const DISTINGUISH_TOL: f64 = 1e-6;
/// Numeric verdicts: every seed must agree within this to be indistinguishable.
pub const AGREE_TOL: f64 = 1e-9;
/// Seeds sampled by numeric verdicts.
pub const NUMERIC_SEEDS: std::ops::Range<u64> = 0..10;
/// Hidden width of the numeric baselines.
pub const NUMERIC_HIDDEN: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Model {
    Twl,
    MpTgnInjective { layers: usize, memory: bool },
    Pint(PintConfig),
    Tgat { layers: usize },
    TgnAtt { layers: usize },
    Caw { len: usize },
}

impl Model {
    pub fn tag(&self) -> String {
        match self {
            Model::Twl => "twl".into(),
            Model::MpTgnInjective { layers, memory } => {
                format!("mptgn_injective(L={layers},memory={memory})")
            }
            Model::Pint(c) => format!(
                "pint(L={},d={},positional={},{:?})",
                c.layers, c.dim, c.use_positional, c.mode
            ),
            Model::Tgat { layers } => format!("tgat(L={layers})"),
            Model::TgnAtt { layers } => format!("tgn_att(L={layers})"),
            Model::Caw { len } => format!("caw(len={len})"),
        }
    }

    fn pint_config(&self) -> Option<PintConfig> {
        match self {
            Model::MpTgnInjective { layers, memory } => Some(PintConfig::mp_tgn(
                *layers,
                if *memory { MemoryKind::Injective } else { MemoryKind::Identity },
            )),
            Model::Pint(c) => Some(c.clone()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Distinguished,
    Indistinguishable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub result: Outcome,
    pub model: String,
    pub witness: Option<String>,
}

impl Verdict {
    fn new(result: Outcome, model: &Model, witness: impl Into<String>) -> Self {
        Verdict { result, model: model.tag(), witness: Some(witness.into()) }
    }

    fn from_codes<T: PartialEq + std::fmt::Display>(model: &Model, a: T, b: T) -> Self {
        let result = if a == b { Outcome::Indistinguishable } else { Outcome::Distinguished };
        Verdict::new(result, model, format!("{a} vs {b}"))
    }

    pub fn distinguished(&self) -> bool {
        self.result == Outcome::Distinguished
    }
}

/// Applies the two-tolerance rule to per-seed maximum deviations.
pub fn numeric_outcome(deviations: &[f64]) -> Result<Outcome> {
    let worst = deviations.iter().copied().fold(0.0, f64::max);
    if worst > DISTINGUISH_TOL {
        Ok(Outcome::Distinguished)
    } else if worst <= AGREE_TOL {
        Ok(Outcome::Indistinguishable)
    } else {
        Err(TgxError::NumericAmbiguous(worst))
    }
}

fn numeric_verdict(model: &Model, deviations: Vec<f64>) -> Result<Verdict> {
    let worst = deviations.iter().copied().fold(0.0, f64::max);
    let outcome = numeric_outcome(&deviations)?;
    Ok(Verdict::new(
        outcome,
        model,
        format!("max deviation {worst:.3e} over {} seeds", deviations.len()),
    ))
}

fn exact_or_numeric(model: &Model, cfg: &PintConfig, run: impl Fn(&PintConfig) -> Result<(Embedding, Embedding)>) -> Result<Verdict> {
    match cfg.mode {
        Mode::Exact => {
            let (a, b) = run(cfg)?;
            Ok(Verdict::from_codes(model, a, b))
        }
        Mode::Numeric => {
            let mut devs = Vec::new();
            for seed in NUMERIC_SEEDS {
                let c = PintConfig { seed: cfg.seed.wrapping_add(seed), ..cfg.clone() };
                let (a, b) = run(&c)?;
                let (Embedding::Numeric(a), Embedding::Numeric(b)) = (a, b) else {
                    unreachable!("numeric config yields numeric embeddings")
                };
                devs.push(max_abs_diff(&a, &b));
            }
            numeric_verdict(model, devs)
        }
    }
}

/// Whether `model` separates nodes `u` and `v` of `g` at time `t`.
pub fn distinguish_nodes(
    g: &TemporalGraph,
    u: NodeId,
    v: NodeId,
    t: Timestamp,
    model: &Model,
) -> Result<Verdict> {
    for x in [u, v] {
        if !g.contains(x) {
            return Err(TgxError::UnknownNode(x));
        }
    }
    if u == v {
        return Ok(Verdict::new(Outcome::Indistinguishable, model, "identical query"));
    }
    match model {
        Model::Twl => {
            let h = twl_refine(g, t, None);
            let last = h.last();
            let (a, b) = (last.colors[&u], last.colors[&v]);
            let mut verdict = Verdict::from_codes(model, a, b);
            if verdict.distinguished() {
                let round = h.rounds.iter().position(|p| p.colors[&u] != p.colors[&v]).unwrap_or(0);
                verdict.witness = Some(format!("colors split at round {round}: {a} vs {b}"));
            }
            Ok(verdict)
        }
        Model::MpTgnInjective { .. } | Model::Pint(_) => {
            let cfg = model.pint_config().expect("pint-family model");
            exact_or_numeric(model, &cfg, |c| {
                let engine = PintEngine::new(g, t, c.clone())?;
                Ok((engine.node_task_embedding(u)?, engine.node_task_embedding(v)?))
            })
        }
        Model::Tgat { layers } => {
            let mut devs = Vec::new();
            for seed in NUMERIC_SEEDS {
                let trace = TgatModel::for_graph(g, *layers, NUMERIC_HIDDEN, seed).embed(g, t)?;
                let h = trace.h.last().expect("final layer");
                devs.push(max_abs_diff(&h[&u], &h[&v]));
            }
            numeric_verdict(model, devs)
        }
        Model::TgnAtt { layers } => {
            let mut devs = Vec::new();
            for seed in NUMERIC_SEEDS {
                let trace = TgnAttModel::for_graph(g, *layers, NUMERIC_HIDDEN, seed).embed(g, t)?;
                let h = trace.h.last().expect("final layer");
                devs.push(max_abs_diff(&h[&u], &h[&v]));
            }
            numeric_verdict(model, devs)
        }
        Model::Caw { .. } => Err(TgxError::UnknownModel(model.tag())),
    }
}

/// Whether `model` separates the synchronous events `e1` and `e2` of `g`.
pub fn distinguish_events(
    g: &TemporalGraph,
    e1: (NodeId, NodeId, Timestamp),
    e2: (NodeId, NodeId, Timestamp),
    model: &Model,
) -> Result<Verdict> {
    if e1.2 != e2.2 {
        return Err(TgxError::AsyncQuery(e1.2, e2.2));
    }
    let t = e1.2;
    for x in [e1.0, e1.1, e2.0, e2.1] {
        if !g.contains(x) {
            return Err(TgxError::UnknownNode(x));
        }
    }
    match model {
        Model::MpTgnInjective { .. } | Model::Pint(_) => {
            let cfg = model.pint_config().expect("pint-family model");
            exact_or_numeric(model, &cfg, |c| {
                let engine = PintEngine::new(g, t, c.clone())?;
                Ok((engine.edge_embedding(e1.0, e1.1)?, engine.edge_embedding(e2.0, e2.1)?))
            })
        }
        Model::Caw { len } => {
            let a = caw_encode_event(g, e1.0, e1.1, t, *len)?;
            let b = caw_encode_event(g, e2.0, e2.1, t, *len)?;
            Ok(Verdict::from_codes(model, a, b))
        }
        _ => Err(TgxError::UnknownModel(model.tag())),
    }
}
