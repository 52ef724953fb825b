//! Event-stream model for continuous-time dynamic graphs.
//!
//! A [`TemporalGraph`] is an immutable multiset of undirected, timestamped
//! interactions plus one feature tuple per node. Everything else in the crate
//! reads graphs through [`TemporalGraph::neighborhood`] and
//! [`TemporalGraph::events_before`], which both apply the strict `t_k < t` cut.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, TgxError};
use crate::intern::Value;

pub type NodeId = u32;
pub type Timestamp = u64;

/// Reserved id of the dummy node that carries node features in converted DTDGs.
pub const DUMMY_NODE: NodeId = u32::MAX;

pub const EVENTS_HEADER: &str = "# tgx-events v1";
pub const SNAPSHOTS_HEADER: &str = "# tgx-snapshots v1";

/// Node or edge feature: a tuple of non-negative integers, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Features(pub Vec<u64>);

impl Features {
    pub fn empty() -> Self {
        Features(Vec::new())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn to_value(&self) -> Value {
        Value::ints(&self.0)
    }
}

impl From<Vec<u64>> for Features {
    fn from(v: Vec<u64>) -> Self {
        Features(v)
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Features {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Features::empty());
        }
        s.split(';')
            .map(|tok| parse_uint(tok.trim(), "feature"))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Features)
    }
}

fn parse_uint(tok: &str, what: &str) -> std::result::Result<u64, String> {
    if tok.starts_with('-') {
        return Err(format!("negative {what} `{tok}`"));
    }
    tok.parse::<u64>()
        .map_err(|e| format!("invalid {what} `{tok}`: {e}"))
}

fn parse_node(tok: &str) -> std::result::Result<NodeId, String> {
    let raw = parse_uint(tok.trim(), "node id")?;
    NodeId::try_from(raw).map_err(|_| format!("node id {raw} exceeds 32 bits"))
}

/// One undirected interaction. Construction normalizes endpoints so `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Event {
    pub u: NodeId,
    pub v: NodeId,
    pub t: Timestamp,
    pub feat: Features,
}

impl Event {
    pub fn new(a: NodeId, b: NodeId, t: Timestamp, feat: impl Into<Features>) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Event { u, v, t, feat: feat.into() }
    }

    /// Unfeatured shorthand used heavily by constructions.
    pub fn plain(a: NodeId, b: NodeId, t: Timestamp) -> Self {
        Event::new(a, b, t, Features::empty())
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`; for a self-loop this is `x` itself.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }

    fn sort_key(&self) -> (Timestamp, NodeId, NodeId, &Features) {
        (self.t, self.u, self.v, &self.feat)
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// `(u, e, t')` element of a temporal neighborhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodEntry {
    pub u: NodeId,
    pub feat: Features,
    pub t_prime: Timestamp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    node_feats: BTreeMap<NodeId, Features>,
    events: Vec<Event>,
    /// Per node, indices into `events` of incident events (time-ordered).
    incidence: HashMap<NodeId, Vec<usize>>,
}

impl TemporalGraph {
    /// Builds a graph, sorting events and giving every endpoint a feature row
    /// (the empty tuple when `node_feats` has none).
    pub fn new(node_feats: BTreeMap<NodeId, Features>, events: Vec<Event>) -> Self {
        let mut node_feats = node_feats;
        let mut events: Vec<Event> = events
            .into_iter()
            .map(|e| Event::new(e.u, e.v, e.t, e.feat))
            .collect();
        events.sort();
        for e in &events {
            node_feats.entry(e.u).or_default();
            node_feats.entry(e.v).or_default();
        }
        let mut incidence: HashMap<NodeId, Vec<usize>> = HashMap::new();
        for &n in node_feats.keys() {
            incidence.insert(n, Vec::new());
        }
        for (i, e) in events.iter().enumerate() {
            incidence.get_mut(&e.u).expect("endpoint registered").push(i);
            if e.v != e.u {
                incidence.get_mut(&e.v).expect("endpoint registered").push(i);
            }
        }
        TemporalGraph { node_feats, events, incidence }
    }

    pub fn from_events(events: Vec<Event>) -> Self {
        Self::new(BTreeMap::new(), events)
    }

    pub fn empty() -> Self {
        Self::new(BTreeMap::new(), Vec::new())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn node_feats(&self) -> &BTreeMap<NodeId, Features> {
        &self.node_feats
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_feats.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.node_feats.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.node_feats.contains_key(&v)
    }

    pub fn features(&self, v: NodeId) -> Result<&Features> {
        self.node_feats.get(&v).ok_or(TgxError::UnknownNode(v))
    }

    /// Largest timestamp in the graph, or `None` when there are no events.
    pub fn max_time(&self) -> Option<Timestamp> {
        self.events.last().map(|e| e.t)
    }

    /// Events with `t_k < t`, in sorted order.
    pub fn events_before(&self, t: Timestamp) -> &[Event] {
        let cut = self.events.partition_point(|e| e.t < t);
        &self.events[..cut]
    }

    /// The sub-multiset `{(u_k, v_k, t_k) | t_k < t}` with unchanged node features.
    pub fn snapshot_at(&self, t: Timestamp) -> TemporalGraph {
        TemporalGraph::new(self.node_feats.clone(), self.events_before(t).to_vec())
    }

    /// Incident events of `v` with timestamp `< t`, in time order.
    pub fn incident_before(&self, v: NodeId, t: Timestamp) -> Result<impl Iterator<Item = &Event> + '_> {
        let idx = self.incidence.get(&v).ok_or(TgxError::UnknownNode(v))?;
        Ok(idx
            .iter()
            .map(move |&i| &self.events[i])
            .take_while(move |e| e.t < t))
    }

    /// Temporal neighborhood `N(v, t)` as a multiset (one entry per event).
    pub fn neighborhood(&self, v: NodeId, t: Timestamp) -> Result<Vec<NeighborhoodEntry>> {
        Ok(self
            .incident_before(v, t)?
            .map(|e| NeighborhoodEntry {
                u: e.other(v),
                feat: e.feat.clone(),
                t_prime: e.t,
            })
            .collect())
    }

    /// Events grouped by timestamp (ascending), restricted to `t_k < t`.
    pub fn batches_before(&self, t: Timestamp) -> Vec<(Timestamp, &[Event])> {
        let events = self.events_before(t);
        let mut out = Vec::new();
        let mut start = 0;
        while start < events.len() {
            let ts = events[start].t;
            let end = start + events[start..].partition_point(|e| e.t == ts);
            out.push((ts, &events[start..end]));
            start = end;
        }
        out
    }

    pub fn to_events_string(&self) -> String {
        let mut out = String::new();
        out.push_str(EVENTS_HEADER);
        out.push('\n');
        for (n, f) in &self.node_feats {
            out.push_str(&format!("N,{n},{f}\n"));
        }
        for e in &self.events {
            out.push_str(&format!("{},{},{},{}\n", e.u, e.v, e.t, e.feat));
        }
        out
    }

    pub fn parse_events(text: &str) -> Result<Self> {
        let mut feats = BTreeMap::new();
        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let perr = |msg: String| TgxError::Parse { line: line_no, msg };
            if fields[0] == "N" {
                if fields.len() != 3 {
                    return Err(perr(format!("node line needs 3 fields, got {}", fields.len())));
                }
                let n = parse_node(fields[1]).map_err(perr)?;
                let f: Features = fields[2].parse().map_err(perr)?;
                feats.insert(n, f);
                continue;
            }
            if fields.len() != 4 {
                return Err(perr(format!("event line needs 4 fields, got {}", fields.len())));
            }
            if fields[2].trim().starts_with('-') {
                return Err(TgxError::Validation(format!(
                    "line {line_no}: negative timestamp `{}`",
                    fields[2].trim()
                )));
            }
            let u = parse_node(fields[0]).map_err(perr)?;
            let v = parse_node(fields[1]).map_err(perr)?;
            let t = parse_uint(fields[2].trim(), "timestamp").map_err(perr)?;
            let f: Features = fields[3].parse().map_err(perr)?;
            events.push(Event::new(u, v, t, f));
        }
        Ok(TemporalGraph::new(feats, events))
    }
}

pub fn load_events(path: impl AsRef<Path>) -> Result<TemporalGraph> {
    TemporalGraph::parse_events(&fs::read_to_string(path)?)
}

pub fn save_events(g: &TemporalGraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, g.to_events_string())?;
    Ok(())
}

/// One static graph of a DTDG.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Snapshot {
    pub nodes: BTreeMap<NodeId, Features>,
    /// Undirected edges with `u <= v`, kept sorted; duplicates are preserved.
    pub edges: Vec<(NodeId, NodeId, Features)>,
}

impl Snapshot {
    pub fn new(
        nodes: BTreeMap<NodeId, Features>,
        edges: Vec<(NodeId, NodeId, Features)>,
    ) -> Result<Self> {
        let mut edges: Vec<_> = edges
            .into_iter()
            .map(|(a, b, f)| if a <= b { (a, b, f) } else { (b, a, f) })
            .collect();
        edges.sort();
        for (a, b, _) in &edges {
            for x in [a, b] {
                if !nodes.contains_key(x) {
                    return Err(TgxError::Validation(format!(
                        "edge endpoint {x} missing from snapshot node set"
                    )));
                }
            }
        }
        if nodes.contains_key(&DUMMY_NODE) {
            return Err(TgxError::Validation("snapshot uses the reserved dummy node id".into()));
        }
        Ok(Snapshot { nodes, edges })
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }
}

/// DTDG: snapshots indexed consecutively from 1.
///
/// Trailing empty snapshots carry no events and are trimmed on construction,
/// so the representation is canonical for conversion round-trips.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SnapshotSequence {
    snapshots: Vec<Snapshot>,
}

impl SnapshotSequence {
    pub fn new(mut snapshots: Vec<Snapshot>) -> Self {
        while snapshots.last().is_some_and(Snapshot::is_empty) {
            snapshots.pop();
        }
        SnapshotSequence { snapshots }
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn to_snapshots_string(&self) -> String {
        let mut out = String::new();
        out.push_str(SNAPSHOTS_HEADER);
        out.push('\n');
        for (i, s) in self.snapshots.iter().enumerate() {
            out.push('\n');
            out.push_str(&format!("S,{}\n", i + 1));
            for (n, f) in &s.nodes {
                out.push_str(&format!("N,{n},{f}\n"));
            }
            for (a, b, f) in &s.edges {
                out.push_str(&format!("{a},{b},{f}\n"));
            }
        }
        out
    }

    pub fn parse_snapshots(text: &str) -> Result<Self> {
        let mut snapshots: Vec<Snapshot> = Vec::new();
        let mut current: Option<(BTreeMap<NodeId, Features>, Vec<(NodeId, NodeId, Features)>)> =
            None;
        let flush = |cur: &mut Option<_>, out: &mut Vec<Snapshot>| -> Result<()> {
            if let Some((nodes, edges)) = cur.take() {
                out.push(Snapshot::new(nodes, edges)?);
            }
            Ok(())
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            let perr = |msg: String| TgxError::Parse { line: line_no, msg };
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                flush(&mut current, &mut snapshots)?;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            match fields[0] {
                "S" => {
                    flush(&mut current, &mut snapshots)?;
                    let idx = fields
                        .get(1)
                        .ok_or_else(|| perr("snapshot header needs an index".into()))
                        .and_then(|s| parse_uint(s.trim(), "snapshot index").map_err(perr))?;
                    if idx as usize != snapshots.len() + 1 {
                        return Err(perr(format!(
                            "snapshot index {idx} out of sequence (expected {})",
                            snapshots.len() + 1
                        )));
                    }
                    current = Some((BTreeMap::new(), Vec::new()));
                }
                "N" => {
                    let cur = current
                        .as_mut()
                        .ok_or_else(|| perr("node line outside a snapshot block".into()))?;
                    if fields.len() != 3 {
                        return Err(perr(format!("node line needs 3 fields, got {}", fields.len())));
                    }
                    let n = parse_node(fields[1]).map_err(perr)?;
                    cur.0.insert(n, fields[2].parse().map_err(perr)?);
                }
                _ => {
                    let cur = current
                        .as_mut()
                        .ok_or_else(|| perr("edge line outside a snapshot block".into()))?;
                    if fields.len() != 3 {
                        return Err(perr(format!("edge line needs 3 fields, got {}", fields.len())));
                    }
                    let a = parse_node(fields[0]).map_err(perr)?;
                    let b = parse_node(fields[1]).map_err(perr)?;
                    cur.1.push((a, b, fields[2].parse().map_err(perr)?));
                }
            }
        }
        flush(&mut current, &mut snapshots)?;
        Ok(SnapshotSequence::new(snapshots))
    }
}

pub fn load_snapshots(path: impl AsRef<Path>) -> Result<SnapshotSequence> {
    SnapshotSequence::parse_snapshots(&fs::read_to_string(path)?)
}

/// Snapshot `i` becomes events at time `i * delta`: its edges, plus one event
/// `(u, DUMMY_NODE)` per node carrying that node's features.
pub fn dtdg_to_ctdg(seq: &SnapshotSequence, delta: Timestamp) -> Result<TemporalGraph> {
    if delta == 0 {
        return Err(TgxError::Precondition("delta must be at least 1".into()));
    }
    let mut events = Vec::new();
    for (i, snap) in seq.snapshots().iter().enumerate() {
        let t = (i as Timestamp + 1) * delta;
        events.extend(snap.edges.iter().map(|(a, b, f)| Event::new(*a, *b, t, f.clone())));
        events.extend(
            snap.nodes
                .iter()
                .map(|(n, f)| Event::new(*n, DUMMY_NODE, t, f.clone())),
        );
    }
    Ok(TemporalGraph::from_events(events))
}

/// Inverse of [`dtdg_to_ctdg`]. Every timestamp must be a positive multiple of
/// `delta`; missing multiples yield empty snapshots. Endpoints of ordinary
/// events without a dummy-node event take their graph-level features.
pub fn ctdg_to_dtdg(g: &TemporalGraph, delta: Timestamp) -> Result<SnapshotSequence> {
    if delta == 0 {
        return Err(TgxError::Precondition("delta must be at least 1".into()));
    }
    let Some(max_t) = g.max_time() else {
        return Ok(SnapshotSequence::default());
    };
    for e in g.events() {
        if e.t == 0 || e.t % delta != 0 {
            return Err(TgxError::Precondition(format!(
                "timestamp {} is not a positive multiple of delta {delta}",
                e.t
            )));
        }
    }
    let count = (max_t / delta) as usize;
    let mut parts: Vec<(BTreeMap<NodeId, Features>, Vec<(NodeId, NodeId, Features)>)> =
        vec![Default::default(); count];
    for e in g.events() {
        let slot = &mut parts[(e.t / delta) as usize - 1];
        if e.v == DUMMY_NODE && e.u != DUMMY_NODE {
            slot.0.insert(e.u, e.feat.clone());
        } else {
            slot.1.push((e.u, e.v, e.feat.clone()));
        }
    }
    let mut snapshots = Vec::with_capacity(count);
    for (mut nodes, edges) in parts {
        for (a, b, _) in &edges {
            for x in [*a, *b] {
                if !nodes.contains_key(&x) {
                    nodes.insert(x, g.features(x)?.clone());
                }
            }
        }
        snapshots.push(Snapshot::new(nodes, edges)?);
    }
    Ok(SnapshotSequence::new(snapshots))
}
