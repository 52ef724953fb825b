//! Temporal Weisfeiler-Leman refinement.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::graph::{NodeId, TemporalGraph, Timestamp};
use crate::intern::{intern, CanonicalId, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorPartition {
    pub colors: BTreeMap<NodeId, CanonicalId>,
    pub round: usize,
}

impl ColorPartition {
    pub fn distinct(&self) -> usize {
        let mut c: Vec<_> = self.colors.values().collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Sorted color multiset.
    pub fn multiset(&self) -> Vec<CanonicalId> {
        let mut c: Vec<_> = self.colors.values().copied().collect();
        c.sort_unstable();
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorHistory {
    pub rounds: Vec<ColorPartition>,
    /// First round `r` with `count(r) == count(r + 1)`.
    pub stabilized_at: Option<usize>,
}

impl ColorHistory {
    pub fn last(&self) -> &ColorPartition {
        self.rounds.last().expect("history holds round 0")
    }

    pub fn counts(&self) -> Vec<usize> {
        self.rounds.iter().map(ColorPartition::distinct).collect()
    }
}

pub fn initial_colors(g: &TemporalGraph) -> ColorPartition {
    let colors = g
        .node_feats()
        .iter()
        .map(|(n, f)| (*n, intern(Value::tagged("twl0", vec![f.to_value()]))))
        .collect();
    ColorPartition { colors, round: 0 }
}

/// One refinement round over the events of `g` before `t`.
pub fn refine_once(g: &TemporalGraph, t: Timestamp, prev: &ColorPartition) -> ColorPartition {
    let mut bags: HashMap<NodeId, Vec<Value>> = HashMap::new();
    for e in g.events_before(t) {
        let entry = |other: NodeId| {
            Value::Tuple(vec![
                Value::Id(prev.colors[&other]),
                e.feat.to_value(),
                Value::Int(e.t),
            ])
        };
        bags.entry(e.u).or_default().push(entry(e.v));
        if e.u != e.v {
            bags.entry(e.v).or_default().push(entry(e.u));
        }
    }
    let colors = prev
        .colors
        .iter()
        .map(|(n, c)| {
            let bag = bags.remove(n).unwrap_or_default();
            (*n, intern(Value::tagged("twl", vec![Value::Id(*c), Value::multiset(bag)])))
        })
        .collect();
    ColorPartition { colors, round: prev.round + 1 }
}

/// Refines until the number of distinct colors stops increasing, or until
/// `max_rounds` refinements have been made.
pub fn twl_refine(g: &TemporalGraph, t: Timestamp, max_rounds: Option<usize>) -> ColorHistory {
    let mut rounds = vec![initial_colors(g)];
    let mut stabilized_at = None;
    loop {
        let r = rounds.len() - 1;
        if max_rounds.is_some_and(|m| r >= m) {
            break;
        }
        let next = refine_once(g, t, &rounds[r]);
        let stable = next.distinct() == rounds[r].distinct();
        rounds.push(next);
        if stable {
            stabilized_at = Some(r);
            break;
        }
    }
    ColorHistory { rounds, stabilized_at }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TwlVerdict {
    NonIsomorphic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwlReport {
    pub verdict: TwlVerdict,
    /// Round at which the verdict was reached.
    pub round: usize,
    pub counts_a: Vec<usize>,
    pub counts_b: Vec<usize>,
}

/// Lockstep refinement of two graphs.
///
/// Colors come from one registry, so they are comparable across graphs. The
/// test reports `NonIsomorphic` at the first round whose color multisets
/// differ. It reports `Inconclusive` once both graphs keep their color count
/// for a round while the multisets still agree; at that point the partition
/// of the disjoint union is stable as well, so no later round can diverge.
pub fn twl_compare(a: &TemporalGraph, b: &TemporalGraph, t: Timestamp) -> TwlReport {
    let mut pa = initial_colors(a);
    let mut pb = initial_colors(b);
    let mut counts_a = vec![pa.distinct()];
    let mut counts_b = vec![pb.distinct()];
    if pa.multiset() != pb.multiset() {
        return TwlReport { verdict: TwlVerdict::NonIsomorphic, round: 0, counts_a, counts_b };
    }
    loop {
        let na = refine_once(a, t, &pa);
        let nb = refine_once(b, t, &pb);
        counts_a.push(na.distinct());
        counts_b.push(nb.distinct());
        let round = na.round;
        if na.multiset() != nb.multiset() {
            return TwlReport { verdict: TwlVerdict::NonIsomorphic, round, counts_a, counts_b };
        }
        if na.distinct() == pa.distinct() && nb.distinct() == pb.distinct() {
            return TwlReport { verdict: TwlVerdict::Inconclusive, round, counts_a, counts_b };
        }
        pa = na;
        pb = nb;
    }
}
