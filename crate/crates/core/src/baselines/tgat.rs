//! TGAT: time-encoded single-head attention over full temporal neighborhoods.

use std::collections::HashMap;

use rand::Rng;

use super::nn::{concat, padded, param_rng, Dense};
use crate::error::Result;
use crate::graph::{NodeId, TemporalGraph, Timestamp};

#[derive(Clone, Debug, PartialEq)]
pub struct TimeEncoderParams {
    pub omegas: Vec<f64>,
    pub biases: Vec<f64>,
}

impl TimeEncoderParams {
    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        TimeEncoderParams {
            omegas: (0..dim).map(|_| rng.random_range(0.0..=2.0)).collect(),
            biases: (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.omegas.len()
    }
}

/// `[cos(w_1 dt + b_1), ..., cos(w_d dt + b_d)]`.
pub fn time_encode(dt: f64, p: &TimeEncoderParams) -> Vec<f64> {
    p.omegas
        .iter()
        .zip(&p.biases)
        .map(|(w, b)| (w * dt + b).cos())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TgatLayer {
    pub time: TimeEncoderParams,
    pub wq: Dense,
    pub wk: Dense,
    pub wv: Dense,
    pub mlp: Dense,
}

impl TgatLayer {
    pub fn random(hidden: usize, edge_width: usize, time_dim: usize, rng: &mut impl Rng) -> Self {
        let row = hidden + time_dim + edge_width;
        TgatLayer {
            time: TimeEncoderParams::random(time_dim, rng),
            wq: Dense::random_linear(hidden + time_dim, hidden, rng),
            wk: Dense::random_linear(row, hidden, rng),
            wv: Dense::random_linear(row, hidden, rng),
            mlp: Dense::random(2 * hidden, hidden, rng),
        }
    }
}

/// `softmax(q K^T) V` for the neighbors `(h_u, e, t - t')` of a node with
/// embedding `h_v`. An empty neighborhood aggregates to the zero vector.
pub fn tgat_aggregate(h_v: &[f64], neighbors: &[(Vec<f64>, Vec<f64>, f64)], p: &TgatLayer) -> Vec<f64> {
    let out_dim = p.wv.output_dim();
    if neighbors.is_empty() {
        return vec![0.0; out_dim];
    }
    let q = p.wq.forward(&concat(&[h_v, &time_encode(0.0, &p.time)]));
    let rows: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|(h, e, dt)| concat(&[h, &time_encode(*dt, &p.time), e]))
        .collect();
    let scores: Vec<f64> = rows
        .iter()
        .map(|c| p.wk.forward(c).iter().zip(&q).map(|(k, q)| k * q).sum())
        .collect();
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut out = vec![0.0; out_dim];
    for (c, w) in rows.iter().zip(&weights) {
        for (o, v) in out.iter_mut().zip(p.wv.forward(c)) {
            *o += w / z * v;
        }
    }
    out
}

/// Per-layer node embeddings and aggregated messages.
#[derive(Clone, Debug, Default)]
pub struct TgatTrace {
    /// `h[l][v]` for `l = 0..=layers`.
    pub h: Vec<HashMap<NodeId, Vec<f64>>>,
    /// `agg[l][v]` is the attention output feeding layer `l + 1`.
    pub agg: Vec<HashMap<NodeId, Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TgatModel {
    pub hidden: usize,
    pub proj: Dense,
    pub layers: Vec<TgatLayer>,
    pub feat_width: usize,
    pub edge_width: usize,
}

impl TgatModel {
    /// Parameters for graph `g`, drawn from `seed`.
    pub fn for_graph(g: &TemporalGraph, layers: usize, hidden: usize, seed: u64) -> Self {
        let feat_width = g.node_feats().values().map(|f| f.0.len()).max().unwrap_or(0).max(1);
        let edge_width = g.events().iter().map(|e| e.feat.0.len()).max().unwrap_or(0).max(1);
        let mut rng = param_rng(seed, 7);
        let proj = Dense::random(feat_width, hidden, &mut rng);
        let layers = (0..layers)
            .map(|_| TgatLayer::random(hidden, edge_width, hidden, &mut rng))
            .collect();
        TgatModel { hidden, proj, layers, feat_width, edge_width }
    }

    /// Initial embeddings from node features.
    pub fn feature_inputs(&self, g: &TemporalGraph) -> HashMap<NodeId, Vec<f64>> {
        g.node_feats()
            .iter()
            .map(|(n, f)| (*n, self.proj.forward_tanh(&padded(&f.0, self.feat_width))))
            .collect()
    }

    /// Runs every layer for every node, starting from `h0`.
    pub fn run(
        &self,
        g: &TemporalGraph,
        t: Timestamp,
        h0: HashMap<NodeId, Vec<f64>>,
    ) -> Result<TgatTrace> {
        let mut trace = TgatTrace { h: vec![h0], agg: Vec::new() };
        for layer in &self.layers {
            let prev = trace.h.last().expect("h0");
            let mut agg = HashMap::new();
            let mut next = HashMap::new();
            for v in g.nodes() {
                let neigh: Vec<_> = g
                    .neighborhood(v, t)?
                    .into_iter()
                    .map(|nb| {
                        (
                            prev[&nb.u].clone(),
                            padded(&nb.feat.0, self.edge_width),
                            (t - nb.t_prime) as f64,
                        )
                    })
                    .collect();
                let a = tgat_aggregate(&prev[&v], &neigh, layer);
                next.insert(v, layer.mlp.forward_tanh(&concat(&[&prev[&v], &a])));
                agg.insert(v, a);
            }
            trace.agg.push(agg);
            trace.h.push(next);
        }
        Ok(trace)
    }

    pub fn embed(&self, g: &TemporalGraph, t: Timestamp) -> Result<TgatTrace> {
        self.run(g, t, self.feature_inputs(g))
    }
}
