//! Deterministic PINT engine.
//!
//! Exact mode replaces every learned function by interning and aggregates
//! neighborhoods with the slot sum from [`crate::injective`], so embedding
//! equality is exactly the model's distinguishability relation. Numeric mode
//! evaluates the decay-weighted sum with fixed-seed dense layers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::baselines::nn::{concat, padded, param_rng, Dense};
use crate::error::{Result, TgxError};
use crate::graph::{Event, Features, NeighborhoodEntry, NodeId, TemporalGraph, Timestamp};
use crate::injective::{injective_multiset_sum, AggParams};
use crate::intern::{intern, CanonicalId, Value};
use crate::posfeat::{normalize_l1, PosStore};
use crate::tct::StateMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MemoryKind {
    Identity,
    Injective,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PintConfig {
    pub layers: usize,
    /// Positional feature dimension.
    pub dim: usize,
    pub mode: Mode,
    /// Decay base and rate of the numeric aggregation.
    pub alpha: f64,
    pub beta: f64,
    pub use_positional: bool,
    pub memory: MemoryKind,
    pub seed: u64,
    /// Hidden width in numeric mode.
    pub hidden: usize,
}

impl Default for PintConfig {
    fn default() -> Self {
        PintConfig {
            layers: 2,
            dim: 4,
            mode: Mode::Exact,
            alpha: 2.0,
            beta: 0.1,
            use_positional: true,
            memory: MemoryKind::Identity,
            seed: 0,
            hidden: 8,
        }
    }
}

impl PintConfig {
    /// Exact injective MP-TGN: no positional features.
    pub fn mp_tgn(layers: usize, memory: MemoryKind) -> Self {
        PintConfig { layers, use_positional: false, memory, ..Default::default() }
    }

    /// Exact PINT with positional features of dimension `dim`.
    pub fn pint(layers: usize, dim: usize) -> Self {
        PintConfig { layers, dim, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(TgxError::Config("at least one layer is required".into()));
        }
        if self.use_positional && self.dim == 0 {
            return Err(TgxError::ZeroDimension);
        }
        if self.mode == Mode::Numeric && self.memory == MemoryKind::Injective {
            return Err(TgxError::Config(
                "injective memory produces interned states and has no numeric form".into(),
            ));
        }
        if self.mode == Mode::Numeric && (self.alpha <= 0.0 || self.hidden == 0) {
            return Err(TgxError::Config("numeric mode needs alpha > 0 and hidden >= 1".into()));
        }
        Ok(())
    }
}

/// Node memory `s_v(t)` together with the last update times `t_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryState {
    pub kind: MemoryKind,
    pub states: BTreeMap<NodeId, Value>,
    pub last_update: BTreeMap<NodeId, Timestamp>,
    pub clock: Timestamp,
}

impl MemoryState {
    pub fn new(g: &TemporalGraph, kind: MemoryKind) -> Self {
        let states = g
            .node_feats()
            .iter()
            .map(|(n, f)| {
                let s = match kind {
                    MemoryKind::Identity => f.to_value(),
                    MemoryKind::Injective => {
                        Value::Id(intern(Value::tagged("mem0", vec![f.to_value()])))
                    }
                };
                (*n, s)
            })
            .collect();
        MemoryState { kind, states, last_update: BTreeMap::new(), clock: 0 }
    }

    /// Memory after every event of `g` before `t`.
    pub fn replay(g: &TemporalGraph, t: Timestamp, kind: MemoryKind) -> Result<Self> {
        let mut mem = Self::new(g, kind);
        for (ts, batch) in g.batches_before(t) {
            mem.step(ts, batch)?;
        }
        Ok(mem)
    }

    pub fn state(&self, v: NodeId) -> Result<&Value> {
        self.states.get(&v).ok_or(TgxError::UnknownNode(v))
    }

    pub fn state_map(&self) -> StateMap {
        self.states.iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Applies one batch of simultaneous events at time `t`.
    pub fn step(&mut self, t: Timestamp, batch: &[Event]) -> Result<()> {
        if t <= self.clock && !(t == 0 && self.clock == 0 && self.last_update.is_empty()) {
            return Err(TgxError::StaleTimestamp { t, clock: self.clock });
        }
        if let Some(e) = batch.iter().find(|e| e.t != t) {
            return Err(TgxError::MixedBatch { expected: t, found: e.t });
        }
        self.clock = t;
        if self.kind == MemoryKind::Identity {
            return Ok(());
        }
        let mut msgs: HashMap<NodeId, Vec<Value>> = HashMap::new();
        for e in batch {
            let ends: &[(NodeId, NodeId)] =
                if e.is_self_loop() { &[(e.u, e.u)] } else { &[(e.u, e.v), (e.v, e.u)] };
            for &(me, other) in ends {
                let last = self.last_update.get(&me).copied().unwrap_or(0);
                let m = Value::tagged(
                    "msg",
                    vec![
                        self.state(me)?.clone(),
                        self.state(other)?.clone(),
                        Value::Int(t - last),
                        e.feat.to_value(),
                    ],
                );
                msgs.entry(me).or_default().push(Value::Id(intern(m)));
            }
        }
        let mut updates = Vec::with_capacity(msgs.len());
        for (v, m) in msgs {
            let s = self.state(v)?.clone();
            updates.push((v, Value::Id(intern(Value::tagged("mem", vec![s, Value::multiset(m)])))));
        }
        for (v, s) in updates {
            self.states.insert(v, s);
            self.last_update.insert(v, t);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Embedding {
    Exact(CanonicalId),
    Numeric(Vec<f64>),
}

impl Embedding {
    pub fn as_exact(&self) -> Option<CanonicalId> {
        match self {
            Embedding::Exact(id) => Some(*id),
            Embedding::Numeric(_) => None,
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Embedding::Exact(id) => write!(f, "{id}"),
            Embedding::Numeric(v) => {
                f.write_str("[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x:.9}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Bounds and feature enumeration feeding the slot sum. Exact embeddings from
/// engines that share one table are comparable with each other.
#[derive(Debug)]
pub struct SlotTable {
    params: AggParams,
    feats: HashMap<Features, u64>,
}

pub type SharedSlots = Arc<Mutex<SlotTable>>;

impl SlotTable {
    /// Table whose bounds cover every neighborhood of `graphs` at time `t`.
    pub fn for_graphs(graphs: &[&TemporalGraph], t: Timestamp) -> Result<SharedSlots> {
        let n = graphs.iter().map(|g| g.events_before(t).len()).max().unwrap_or(0) as u64 + 1;
        let params = AggParams::decimal(n, t)?;
        Ok(Arc::new(Mutex::new(SlotTable { params, feats: HashMap::new() })))
    }

    fn feat_slot(&mut self, f: &Features) -> u64 {
        let next = self.feats.len() as u64;
        *self.feats.entry(f.clone()).or_insert(next)
    }

    fn covers(&self, g: &TemporalGraph, t: Timestamp) -> bool {
        (g.events_before(t).len() as u64) < self.params.n && t <= self.params.t_max
    }
}

struct NumericParams {
    proj: HashMap<usize, Dense>,
    msg: Vec<Dense>,
    upd: Vec<Dense>,
    feat_width: usize,
    edge_width: usize,
}

pub struct PintEngine<'g> {
    g: &'g TemporalGraph,
    t: Timestamp,
    cfg: PintConfig,
    mem: MemoryState,
    pos: Option<PosStore>,
    slots: SharedSlots,
    neigh: HashMap<NodeId, Vec<NeighborhoodEntry>>,
    exact_cache: Mutex<HashMap<Vec<NodeId>, Arc<HashMap<NodeId, CanonicalId>>>>,
    numeric: Option<Mutex<NumericParams>>,
}

impl<'g> PintEngine<'g> {
    /// Engine at time `t`, replaying memory and positional features from `g`.
    pub fn new(g: &'g TemporalGraph, t: Timestamp, cfg: PintConfig) -> Result<Self> {
        let slots = SlotTable::for_graphs(&[g], t)?;
        Self::with_slots(g, t, cfg, slots)
    }

    pub fn with_slots(
        g: &'g TemporalGraph,
        t: Timestamp,
        cfg: PintConfig,
        slots: SharedSlots,
    ) -> Result<Self> {
        cfg.validate()?;
        let mem = MemoryState::replay(g, t, cfg.memory)?;
        let pos = if cfg.use_positional { Some(PosStore::replay(g, t, cfg.dim)?) } else { None };
        Self::from_parts(g, t, cfg, mem, pos, slots)
    }

    pub fn from_parts(
        g: &'g TemporalGraph,
        t: Timestamp,
        cfg: PintConfig,
        mem: MemoryState,
        pos: Option<PosStore>,
        slots: SharedSlots,
    ) -> Result<Self> {
        cfg.validate()?;
        if cfg.use_positional && pos.is_none() {
            return Err(TgxError::MissingPositional);
        }
        {
            let table = slots.lock().expect("slot table poisoned");
            if !table.covers(g, t) {
                return Err(TgxError::Precondition(
                    "slot table bounds do not cover this graph".into(),
                ));
            }
        }
        let mut neigh = HashMap::new();
        for v in g.nodes() {
            neigh.insert(v, g.neighborhood(v, t)?);
        }
        let numeric = (cfg.mode == Mode::Numeric).then(|| {
            let feat_width = g.node_feats().values().map(|f| f.0.len()).max().unwrap_or(0).max(1);
            let edge_width = g.events().iter().map(|e| e.feat.0.len()).max().unwrap_or(0).max(1);
            let h = cfg.hidden;
            let msg = (0..cfg.layers)
                .map(|l| Dense::random(h + edge_width, h, &mut param_rng(cfg.seed, 2 * l as u64)))
                .collect();
            let upd = (0..cfg.layers)
                .map(|l| Dense::random(2 * h, h, &mut param_rng(cfg.seed, 2 * l as u64 + 1)))
                .collect();
            Mutex::new(NumericParams { proj: HashMap::new(), msg, upd, feat_width, edge_width })
        });
        Ok(PintEngine {
            g,
            t,
            cfg,
            mem,
            pos,
            slots,
            neigh,
            exact_cache: Mutex::new(HashMap::new()),
            numeric,
        })
    }

    pub fn config(&self) -> &PintConfig {
        &self.cfg
    }

    pub fn memory(&self) -> &MemoryState {
        &self.mem
    }

    pub fn positional(&self) -> Option<&PosStore> {
        self.pos.as_ref()
    }

    fn check_nodes(&self, nodes: &[NodeId]) -> Result<()> {
        match nodes.iter().find(|n| !self.g.contains(**n)) {
            Some(n) => Err(TgxError::UnknownNode(*n)),
            None => Ok(()),
        }
    }

    fn exact_pass(&self, anchors: &[NodeId]) -> Result<Arc<HashMap<NodeId, CanonicalId>>> {
        let key = if self.cfg.use_positional { anchors.to_vec() } else { Vec::new() };
        if let Some(hit) = self.exact_cache.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let mut h: HashMap<NodeId, CanonicalId> = HashMap::new();
        for v in self.g.nodes() {
            let mut parts = vec![self.mem.state(v)?.clone()];
            if let Some(pos) = &self.pos {
                parts.extend(key.iter().map(|&a| Value::ints(&pos.get_feature(v, a))));
            }
            h.insert(v, intern(Value::tagged("h0", parts)));
        }
        let mut table = self.slots.lock().expect("slot table poisoned");
        for layer in 1..=self.cfg.layers {
            let mut next = HashMap::with_capacity(h.len());
            for v in self.g.nodes() {
                // Neighbor embeddings are enumerated by rank among the distinct
                // ones present; the sorted support goes into the update so the
                // pair (support, sum) pins down the multiset.
                let mut support: Vec<CanonicalId> = self.neigh[&v].iter().map(|nb| h[&nb.u]).collect();
                support.sort_unstable();
                support.dedup();
                let mut items = Vec::with_capacity(self.neigh[&v].len());
                for nb in &self.neigh[&v] {
                    let rank = support.binary_search(&h[&nb.u]).expect("in support") as u64;
                    items.push((rank, table.feat_slot(&nb.feat), self.t - nb.t_prime));
                }
                let agg = injective_multiset_sum(&items, &table.params)?;
                let id = intern(Value::tagged(
                    "upd",
                    vec![
                        Value::Int(layer as u64),
                        Value::Id(h[&v]),
                        Value::Tuple(support.into_iter().map(Value::Id).collect()),
                        Value::Scalar(agg),
                    ],
                ));
                next.insert(v, id);
            }
            h = next;
        }
        drop(table);
        let h = Arc::new(h);
        self.exact_cache.lock().expect("cache poisoned").insert(key, h.clone());
        Ok(h)
    }

    fn numeric_pass(&self, anchors: &[NodeId]) -> Result<HashMap<NodeId, Vec<f64>>> {
        let mut params = self.numeric.as_ref().expect("numeric params").lock().expect("poisoned");
        let a = if self.cfg.use_positional { anchors.len() } else { 0 };
        let in_width = params.feat_width + a * self.cfg.dim;
        let (h_dim, seed) = (self.cfg.hidden, self.cfg.seed);
        let proj = params
            .proj
            .entry(a)
            .or_insert_with(|| Dense::random(in_width, h_dim, &mut param_rng(seed, 1000 + a as u64)))
            .clone();
        let mut h: HashMap<NodeId, Vec<f64>> = HashMap::new();
        for v in self.g.nodes() {
            let Value::Tuple(items) = self.mem.state(v)? else {
                return Err(TgxError::Config("numeric mode needs feature states".into()));
            };
            let raw: Vec<u64> = items
                .iter()
                .map(|x| match x {
                    Value::Int(i) => Ok(*i),
                    _ => Err(TgxError::Config("numeric mode needs integer states".into())),
                })
                .collect::<Result<_>>()?;
            let mut x = padded(&raw, params.feat_width);
            if let (Some(pos), true) = (&self.pos, self.cfg.use_positional) {
                for &anc in anchors {
                    x.extend(normalize_l1(&pos.get_feature(v, anc)).iter().map(|r| {
                        num_traits::ToPrimitive::to_f64(r).unwrap_or(0.0)
                    }));
                }
            }
            h.insert(v, proj.forward_tanh(&x));
        }
        for layer in 0..self.cfg.layers {
            let mut next = HashMap::with_capacity(h.len());
            for v in self.g.nodes() {
                let mut agg = vec![0.0; h_dim];
                for nb in &self.neigh[&v] {
                    let e = padded(&nb.feat.0, params.edge_width);
                    let m = params.msg[layer].forward_tanh(&concat(&[&h[&nb.u], &e]));
                    let decay = self.cfg.alpha.powf(-self.cfg.beta * (self.t - nb.t_prime) as f64);
                    for (s, x) in agg.iter_mut().zip(m) {
                        *s += x * decay;
                    }
                }
                next.insert(v, params.upd[layer].forward_tanh(&concat(&[&h[&v], &agg])));
            }
            h = next;
        }
        Ok(h)
    }

    /// Embedding of `v` with positional features relative to `anchors`.
    pub fn node_embedding(&self, v: NodeId, anchors: &[NodeId]) -> Result<Embedding> {
        self.check_nodes(&[v])?;
        self.check_nodes(anchors)?;
        match self.cfg.mode {
            Mode::Exact => Ok(Embedding::Exact(self.exact_pass(anchors)?[&v])),
            Mode::Numeric => Ok(Embedding::Numeric(self.numeric_pass(anchors)?.remove(&v).unwrap())),
        }
    }

    /// Node-task embedding: anchored at `v` itself.
    pub fn node_task_embedding(&self, v: NodeId) -> Result<Embedding> {
        self.node_embedding(v, &[v])
    }

    /// Edge embedding, symmetric in `(u, v)`. Each endpoint lists itself first
    /// among its anchors so swapping the endpoints swaps the two halves.
    pub fn edge_embedding(&self, u: NodeId, v: NodeId) -> Result<Embedding> {
        let hu = self.node_embedding(u, &[u, v])?;
        let hv = self.node_embedding(v, &[v, u])?;
        Ok(match (hu, hv) {
            (Embedding::Exact(a), Embedding::Exact(b)) => Embedding::Exact(intern(Value::tagged(
                "edge",
                vec![Value::multiset(vec![Value::Id(a), Value::Id(b)])],
            ))),
            (Embedding::Numeric(a), Embedding::Numeric(b)) => {
                let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                Embedding::Numeric(concat(&[&sum, &prod]))
            }
            _ => unreachable!("one engine has one mode"),
        })
    }

    /// Sorted multiset of node-task embeddings over every node (exact mode).
    pub fn node_multiset(&self) -> Result<Vec<CanonicalId>> {
        if self.cfg.mode != Mode::Exact {
            return Err(TgxError::Config("node multisets are compared in exact mode".into()));
        }
        let mut out = Vec::with_capacity(self.g.node_count());
        for v in self.g.nodes() {
            out.push(self.node_task_embedding(v)?.as_exact().expect("exact"));
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// One-shot node embedding from explicit memory and positional snapshots.
pub fn pint_node_embedding(
    g: &TemporalGraph,
    v: NodeId,
    t: Timestamp,
    cfg: &PintConfig,
    mem: &MemoryState,
    pos: Option<&PosStore>,
    anchors: &[NodeId],
) -> Result<Embedding> {
    let slots = SlotTable::for_graphs(&[g], t)?;
    let engine = PintEngine::from_parts(g, t, cfg.clone(), mem.clone(), pos.cloned(), slots)?;
    engine.node_embedding(v, anchors)
}

/// One-shot edge embedding from explicit memory and positional snapshots.
pub fn pint_edge_embedding(
    g: &TemporalGraph,
    u: NodeId,
    v: NodeId,
    t: Timestamp,
    cfg: &PintConfig,
    mem: &MemoryState,
    pos: Option<&PosStore>,
) -> Result<Embedding> {
    let slots = SlotTable::for_graphs(&[g], t)?;
    let engine = PintEngine::from_parts(g, t, cfg.clone(), mem.clone(), pos.cloned(), slots)?;
    engine.edge_embedding(u, v)
}
