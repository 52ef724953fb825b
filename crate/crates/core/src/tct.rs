//! Temporal computation trees.
//!
//! `build_tct` unrolls message passing: every neighborhood entry of a tree
//! node spawns a child, queried at the same time `t`. `build_monotone_tct`
//! re-queries each child at its edge timestamp instead, which keeps only
//! strictly time-decreasing root-to-leaf paths.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::Result;
use crate::graph::{Features, NodeId, TemporalGraph, Timestamp};
use crate::intern::{intern, CanonicalId, Value};

/// Per-node state used to annotate tree nodes.
pub type StateMap = HashMap<NodeId, Value>;

/// Identity memory: every node's state is its feature tuple.
pub fn feature_states(g: &TemporalGraph) -> StateMap {
    g.node_feats()
        .iter()
        .map(|(n, f)| (*n, f.to_value()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Bounded(usize),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TctNode {
    pub graph_node: NodeId,
    pub state: Value,
    pub level: usize,
    pub in_edge: Option<(Features, Timestamp)>,
    pub children: Vec<TctNode>,
}

impl TctNode {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(TctNode::node_count).sum::<usize>()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// `out[k]` = number of tree nodes at layer `k` mapped to `target`, for `k < d`.
    pub fn layer_counts(&self, target: NodeId, d: usize) -> Vec<u64> {
        let mut out = vec![0u64; d];
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            if n.level < d && n.graph_node == target {
                out[n.level] += 1;
            }
            stack.extend(n.children.iter());
        }
        out
    }

    fn canonical(&self) -> CanonicalId {
        let children = self
            .children
            .iter()
            .map(|c| {
                let (feat, t) = c.in_edge.as_ref().expect("non-root has an in-edge");
                Value::Tuple(vec![Value::Id(c.canonical()), feat.to_value(), Value::Int(*t)])
            })
            .collect();
        intern(Value::tagged(
            "tct",
            vec![
                Value::Int(self.level as u64),
                self.state.clone(),
                Value::multiset(children),
            ],
        ))
    }

    fn dump_into(&self, out: &mut String) {
        let pad = "  ".repeat(self.level);
        let via = match &self.in_edge {
            Some((f, t)) => format!("({f},{t})"),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{pad}{} {} state={} via={via}",
            self.level, self.graph_node, self.state
        );
        for c in &self.children {
            c.dump_into(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tct {
    pub root: TctNode,
    pub query_time: Timestamp,
    pub depth: Depth,
}

impl Tct {
    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn height(&self) -> usize {
        self.root.height()
    }

    /// Indented text dump, one node per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.root.dump_into(&mut out);
        out
    }
}

impl fmt::Display for Tct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

fn state_of(g: &TemporalGraph, states: &StateMap, v: NodeId) -> Result<Value> {
    match states.get(&v) {
        Some(s) => Ok(s.clone()),
        None => Ok(g.features(v)?.to_value()),
    }
}

/// Depth-`depth` TCT of `v` at time `t`. Nodes missing from `states` fall
/// back to their features.
pub fn build_tct(
    g: &TemporalGraph,
    v: NodeId,
    t: Timestamp,
    depth: usize,
    states: &StateMap,
) -> Result<Tct> {
    fn expand(
        g: &TemporalGraph,
        v: NodeId,
        t: Timestamp,
        level: usize,
        depth: usize,
        in_edge: Option<(Features, Timestamp)>,
        states: &StateMap,
    ) -> Result<TctNode> {
        let mut children = Vec::new();
        if level < depth {
            for nb in g.neighborhood(v, t)? {
                children.push(expand(
                    g,
                    nb.u,
                    t,
                    level + 1,
                    depth,
                    Some((nb.feat, nb.t_prime)),
                    states,
                )?);
            }
        }
        Ok(TctNode {
            graph_node: v,
            state: state_of(g, states, v)?,
            level,
            in_edge,
            children,
        })
    }
    let root = expand(g, v, t, 0, depth, None, states)?;
    Ok(Tct { root, query_time: t, depth: Depth::Bounded(depth) })
}

/// Maximal subtree of the TCT with strictly decreasing timestamps along every
/// root-to-leaf path.
pub fn build_monotone_tct(
    g: &TemporalGraph,
    v: NodeId,
    t: Timestamp,
    states: &StateMap,
) -> Result<Tct> {
    fn expand(
        g: &TemporalGraph,
        v: NodeId,
        t: Timestamp,
        level: usize,
        in_edge: Option<(Features, Timestamp)>,
        states: &StateMap,
    ) -> Result<TctNode> {
        let mut children = Vec::new();
        for nb in g.neighborhood(v, t)? {
            let t_prime = nb.t_prime;
            children.push(expand(g, nb.u, t_prime, level + 1, Some((nb.feat, t_prime)), states)?);
        }
        Ok(TctNode {
            graph_node: v,
            state: state_of(g, states, v)?,
            level,
            in_edge,
            children,
        })
    }
    let root = expand(g, v, t, 0, None, states)?;
    Ok(Tct { root, query_time: t, depth: Depth::Unbounded })
}

/// Canonical code: equal codes exactly when the trees are isomorphic.
pub fn tct_canonical(tree: &Tct) -> CanonicalId {
    tree.root.canonical()
}

pub fn tct_isomorphic(a: &Tct, b: &Tct) -> bool {
    tct_canonical(a) == tct_canonical(b)
}

/// Length of the longest walk with strictly decreasing timestamps among
/// events before `t`.
pub fn temporal_diameter(g: &TemporalGraph, t: Timestamp) -> usize {
    // best[x]: longest time-increasing walk ending at x so far.
    let mut best: HashMap<NodeId, usize> = HashMap::new();
    let mut overall = 0;
    for (_, batch) in g.batches_before(t) {
        let mut updates: Vec<(NodeId, usize)> = Vec::with_capacity(2 * batch.len());
        for e in batch {
            let bu = best.get(&e.u).copied().unwrap_or(0);
            let bv = best.get(&e.v).copied().unwrap_or(0);
            updates.push((e.u, bv + 1));
            updates.push((e.v, bu + 1));
        }
        for (x, len) in updates {
            let slot = best.entry(x).or_insert(0);
            *slot = (*slot).max(len);
            overall = overall.max(len);
        }
    }
    overall
}
