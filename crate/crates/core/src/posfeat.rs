//! Relative positional features.
//!
//! `r[i -> u][k]` counts the occurrences of node `i` at layer `k` of the
//! monotone TCT of `u`. An event `(u, v, t)` hangs `u`'s monotone TCT under
//! `v`'s root (and vice versa), so `v`'s vectors gain `u`'s vectors shifted one
//! layer down. Events sharing a timestamp are applied simultaneously.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Result, TgxError};
use crate::graph::{Event, NodeId, TemporalGraph, Timestamp};
use crate::tct::{build_monotone_tct, StateMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosStore {
    d: usize,
    vecs: HashMap<(NodeId, NodeId), Vec<u64>>,
    reach: HashMap<NodeId, BTreeSet<NodeId>>,
    clock: Timestamp,
}

/// `r[k] -> r[k + 1]`, dropping the last component.
pub fn shift(v: &[u64]) -> Vec<u64> {
    let mut out = vec![0; v.len()];
    if !v.is_empty() {
        out[1..].copy_from_slice(&v[..v.len() - 1]);
    }
    out
}

pub fn init_store(nodes: impl IntoIterator<Item = NodeId>, d: usize) -> Result<PosStore> {
    if d == 0 {
        return Err(TgxError::ZeroDimension);
    }
    let mut store = PosStore { d, vecs: HashMap::new(), reach: HashMap::new(), clock: 0 };
    for n in nodes {
        store.ensure(n);
    }
    Ok(store)
}

impl PosStore {
    /// Store after replaying every event of `g` before `t`.
    pub fn replay(g: &TemporalGraph, t: Timestamp, d: usize) -> Result<Self> {
        let mut store = init_store(g.nodes(), d)?;
        for (ts, batch) in g.batches_before(t) {
            store.apply_batch(ts, batch)?;
        }
        Ok(store)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn clock(&self) -> Timestamp {
        self.clock
    }

    pub fn reach(&self, u: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.reach.get(&u)
    }

    fn basis(&self) -> Vec<u64> {
        let mut e = vec![0; self.d];
        e[0] = 1;
        e
    }

    fn ensure(&mut self, n: NodeId) {
        if !self.reach.contains_key(&n) {
            self.reach.insert(n, BTreeSet::from([n]));
            let e = self.basis();
            self.vecs.insert((n, n), e);
        }
    }

    /// `r[i -> u]`, or the zero vector.
    pub fn get_feature(&self, i: NodeId, u: NodeId) -> Vec<u64> {
        self.vecs.get(&(i, u)).cloned().unwrap_or_else(|| vec![0; self.d])
    }

    /// All stored `(i, u, r)` with a nonzero vector, sorted by `(i, u)`.
    pub fn nonzero(&self) -> Vec<(NodeId, NodeId, Vec<u64>)> {
        let mut out: Vec<_> = self
            .vecs
            .iter()
            .filter(|(_, v)| v.iter().any(|&x| x > 0))
            .map(|(&(i, u), v)| (i, u, v.clone()))
            .collect();
        out.sort();
        out
    }

    /// Applies every event in `events`, all at timestamp `t`, reading only
    /// pre-batch values. An empty batch only advances the clock.
    pub fn apply_batch(&mut self, t: Timestamp, events: &[Event]) -> Result<()> {
        if t <= self.clock {
            return Err(TgxError::StaleTimestamp { t, clock: self.clock });
        }
        for e in events {
            if e.t != t {
                return Err(TgxError::MixedBatch { expected: t, found: e.t });
            }
            if e.is_self_loop() {
                return Err(TgxError::SelfLoop(e.u));
            }
        }
        for e in events {
            self.ensure(e.u);
            self.ensure(e.v);
        }
        // Partners per node, with multiplicity.
        let mut partners: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for e in events {
            partners.entry(e.v).or_default().push(e.u);
            partners.entry(e.u).or_default().push(e.v);
        }
        let mut new_vecs: Vec<((NodeId, NodeId), Vec<u64>)> = Vec::new();
        let mut new_reach: Vec<(NodeId, BTreeSet<NodeId>)> = Vec::new();
        for (&v, us) in &partners {
            let mut acc: HashMap<NodeId, Vec<u64>> = HashMap::new();
            let mut reach = self.reach[&v].clone();
            for &u in us {
                for &i in &self.reach[&u] {
                    let r = self.vecs.get(&(i, u)).expect("reach implies a vector");
                    let slot = acc.entry(i).or_insert_with(|| vec![0; self.d]);
                    for (s, x) in slot.iter_mut().zip(shift(r)) {
                        *s = s.checked_add(x).ok_or(TgxError::Overflow)?;
                    }
                    reach.insert(i);
                }
            }
            for (i, mut add) in acc {
                if let Some(old) = self.vecs.get(&(i, v)) {
                    for (s, x) in add.iter_mut().zip(old) {
                        *s = s.checked_add(*x).ok_or(TgxError::Overflow)?;
                    }
                }
                new_vecs.push(((i, v), add));
            }
            new_reach.push((v, reach));
        }
        for (k, r) in new_vecs {
            self.vecs.insert(k, r);
        }
        for (v, r) in new_reach {
            self.reach.insert(v, r);
        }
        self.clock = t;
        Ok(())
    }
}

/// `v / sum|v|` as exact rationals; the zero vector maps to itself.
pub fn normalize_l1(v: &[u64]) -> Vec<BigRational> {
    let total: u128 = v.iter().map(|&x| x as u128).sum();
    if total == 0 {
        return vec![BigRational::zero(); v.len()];
    }
    v.iter()
        .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(total)))
        .collect()
}

/// Layer-by-layer occurrences of `i` in the monotone TCT of `u` at `t`.
pub fn brute_force_counts(
    g: &TemporalGraph,
    i: NodeId,
    u: NodeId,
    t: Timestamp,
    d: usize,
) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(TgxError::ZeroDimension);
    }
    let tree = build_monotone_tct(g, u, t, &StateMap::new())?;
    Ok(tree.root.layer_counts(i, d))
}
