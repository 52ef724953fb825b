//! TGN-Att: numeric memory with mean aggregation of simultaneous messages,
//! followed by TGAT layers over the memory states.

use std::collections::{BTreeMap, HashMap};

use super::nn::{concat, padded, param_rng, Dense};
use super::tgat::{TgatModel, TgatTrace};
use crate::error::{Result, TgxError};
use crate::graph::{Event, NodeId, TemporalGraph, Timestamp};

#[derive(Clone, Debug, PartialEq)]
pub struct TgnAttMemory {
    pub states: BTreeMap<NodeId, Vec<f64>>,
    pub last_update: BTreeMap<NodeId, Timestamp>,
    pub clock: Timestamp,
    update: Dense,
    edge_width: usize,
}

impl TgnAttMemory {
    /// `s_v(0)` is the node feature padded to `width`.
    pub fn new(g: &TemporalGraph, width: usize, seed: u64) -> Self {
        let edge_width = g.events().iter().map(|e| e.feat.0.len()).max().unwrap_or(0).max(1);
        let msg_width = 2 * width + 1 + edge_width;
        TgnAttMemory {
            states: g.node_feats().iter().map(|(n, f)| (*n, padded(&f.0, width))).collect(),
            last_update: BTreeMap::new(),
            clock: 0,
            update: Dense::random(width + msg_width, width, &mut param_rng(seed, 11)),
            edge_width,
        }
    }

    pub fn replay(g: &TemporalGraph, t: Timestamp, width: usize, seed: u64) -> Result<Self> {
        let mut mem = Self::new(g, width, seed);
        for (ts, batch) in g.batches_before(t) {
            mem.step(ts, batch)?;
        }
        Ok(mem)
    }

    fn state(&self, v: NodeId) -> Result<&Vec<f64>> {
        self.states.get(&v).ok_or(TgxError::UnknownNode(v))
    }

    /// Messages `[s_i, s_u, t - t_i, e]`, averaged per node, then
    /// `s_i <- tanh(W [s_i | m_i] + b)`.
    pub fn step(&mut self, t: Timestamp, batch: &[Event]) -> Result<()> {
        if t <= self.clock && !self.last_update.is_empty() {
            return Err(TgxError::StaleTimestamp { t, clock: self.clock });
        }
        if let Some(e) = batch.iter().find(|e| e.t != t) {
            return Err(TgxError::MixedBatch { expected: t, found: e.t });
        }
        let mut sums: HashMap<NodeId, (Vec<f64>, f64)> = HashMap::new();
        for e in batch {
            let ends: &[(NodeId, NodeId)] =
                if e.is_self_loop() { &[(e.u, e.u)] } else { &[(e.u, e.v), (e.v, e.u)] };
            for &(me, other) in ends {
                let dt = (t - self.last_update.get(&me).copied().unwrap_or(0)) as f64;
                let m = concat(&[
                    self.state(me)?,
                    self.state(other)?,
                    &[dt],
                    &padded(&e.feat.0, self.edge_width),
                ]);
                let slot = sums.entry(me).or_insert_with(|| (vec![0.0; m.len()], 0.0));
                slot.0.iter_mut().zip(&m).for_each(|(s, x)| *s += x);
                slot.1 += 1.0;
            }
        }
        let mut updates = Vec::with_capacity(sums.len());
        for (v, (sum, count)) in sums {
            let mean: Vec<f64> = sum.iter().map(|x| x / count).collect();
            updates.push((v, self.update.forward_tanh(&concat(&[self.state(v)?, &mean]))));
        }
        for (v, s) in updates {
            self.states.insert(v, s);
            self.last_update.insert(v, t);
        }
        self.clock = t;
        Ok(())
    }
}

/// TGAT over memory states.
#[derive(Clone, Debug)]
pub struct TgnAttModel {
    pub tgat: TgatModel,
    pub seed: u64,
}

impl TgnAttModel {
    pub fn for_graph(g: &TemporalGraph, layers: usize, hidden: usize, seed: u64) -> Self {
        TgnAttModel { tgat: TgatModel::for_graph(g, layers, hidden, seed), seed }
    }

    pub fn memory(&self, g: &TemporalGraph, t: Timestamp) -> Result<TgnAttMemory> {
        TgnAttMemory::replay(g, t, self.tgat.hidden, self.seed)
    }

    pub fn embed(&self, g: &TemporalGraph, t: Timestamp) -> Result<TgatTrace> {
        let mem = self.memory(g, t)?;
        self.tgat.run(g, t, mem.states.into_iter().collect())
    }
}
