//! Causal anonymous walks, enumerated exhaustively and encoded by interning.

use std::fmt::Write as _;

use crate::error::{Result, TgxError};
use crate::graph::{NodeId, TemporalGraph, Timestamp};
use crate::intern::{intern, CanonicalId, Value};

/// `((w_1, t_1), ..., (w_n, t_n))` with `t_1` the query time.
pub type Walk = Vec<(NodeId, Timestamp)>;

/// Maximal time-decreasing walks with at most `max_len` positions.
/// Parallel events yield repeated walks, so this is a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSet {
    pub origin: NodeId,
    pub t: Timestamp,
    pub max_len: usize,
    pub walks: Vec<Walk>,
}

pub fn caw_walk_set(g: &TemporalGraph, u: NodeId, t: Timestamp, max_len: usize) -> Result<WalkSet> {
    if max_len == 0 {
        return Err(TgxError::Precondition("walk length must be at least 1".into()));
    }
    fn extend(g: &TemporalGraph, walk: &mut Walk, max_len: usize, out: &mut Vec<Walk>) -> Result<()> {
        let (w, tau) = *walk.last().expect("walk has an origin");
        let mut extended = false;
        if walk.len() < max_len {
            for e in g.incident_before(w, tau)? {
                extended = true;
                walk.push((e.other(w), e.t));
                extend(g, walk, max_len, out)?;
                walk.pop();
            }
        }
        if !extended {
            out.push(walk.clone());
        }
        Ok(())
    }
    let mut walks = Vec::new();
    extend(g, &mut vec![(u, t)], max_len, &mut walks)?;
    walks.sort();
    Ok(WalkSet { origin: u, t, max_len, walks })
}

/// `g(w; S)[l]`: how many walks of `S` have `w` at position `l`.
pub fn anon_vector(w: NodeId, s: &WalkSet) -> Vec<u64> {
    let mut out = vec![0u64; s.max_len];
    for walk in &s.walks {
        for (l, (x, _)) in walk.iter().enumerate() {
            if *x == w {
                out[l] += 1;
            }
        }
    }
    out
}

/// `{g(w; S_u), g(w; S_v)}` in `(S_u, S_v)` order.
pub fn caw_anonymize(w: NodeId, su: &WalkSet, sv: &WalkSet) -> [Vec<u64>; 2] {
    [anon_vector(w, su), anon_vector(w, sv)]
}

fn anon_value(w: NodeId, su: &WalkSet, sv: &WalkSet) -> Value {
    let [a, b] = caw_anonymize(w, su, sv);
    Value::multiset(vec![Value::ints(&a), Value::ints(&b)])
}

fn walk_code(walk: &Walk, su: &WalkSet, sv: &WalkSet) -> CanonicalId {
    let mut prev_t = walk[0].1;
    let steps = walk
        .iter()
        .map(|&(w, tw)| {
            let dt = prev_t - tw;
            prev_t = tw;
            Value::Tuple(vec![anon_value(w, su, sv), Value::Int(dt)])
        })
        .collect();
    intern(Value::tagged("walk", vec![Value::Tuple(steps)]))
}

/// Code of the event `(u, v, t)`: the multiset of encoded walks in
/// `S_u` and `S_v`.
pub fn caw_encode_event(
    g: &TemporalGraph,
    u: NodeId,
    v: NodeId,
    t: Timestamp,
    max_len: usize,
) -> Result<CanonicalId> {
    let su = caw_walk_set(g, u, t, max_len)?;
    let sv = caw_walk_set(g, v, t, max_len)?;
    let codes = su
        .walks
        .iter()
        .chain(&sv.walks)
        .map(|w| Value::Id(walk_code(w, &su, &sv)))
        .collect();
    Ok(intern(Value::tagged("caw", vec![Value::multiset(codes)])))
}

/// Graph-level readout: multiset of event codes, each event encoded at its
/// own timestamp, over the events before `t`.
pub fn caw_graph_code(g: &TemporalGraph, t: Timestamp, max_len: usize) -> Result<CanonicalId> {
    let mut codes = Vec::new();
    for e in g.events_before(t) {
        codes.push(Value::Id(caw_encode_event(g, e.u, e.v, e.t, max_len)?));
    }
    Ok(intern(Value::tagged("caw-graph", vec![Value::multiset(codes)])))
}

fn fmt_vec(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Anonymized walks of the event in arrow notation, one walk per line,
/// e.g. `{[1,0,0],[0,1,0]} -1-> {[0,1,0],[2,0,0]}`.
pub fn render_walks(g: &TemporalGraph, u: NodeId, v: NodeId, t: Timestamp, max_len: usize) -> Result<String> {
    let su = caw_walk_set(g, u, t, max_len)?;
    let sv = caw_walk_set(g, v, t, max_len)?;
    let mut out = String::new();
    for walk in su.walks.iter().chain(&sv.walks) {
        for (i, &(w, tw)) in walk.iter().enumerate() {
            let [a, b] = caw_anonymize(w, &su, &sv);
            if i > 0 {
                let _ = write!(out, " -{tw}-> ");
            }
            let _ = write!(out, "{{{},{}}}", fmt_vec(&a), fmt_vec(&b));
        }
        out.push('\n');
    }
    Ok(out)
}
