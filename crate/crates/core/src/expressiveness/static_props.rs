//! Properties of the simple static projection of a temporal graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::graph::{NodeId, TemporalGraph, Timestamp};

/// `None` stands for infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StaticProps {
    pub diameter: Option<usize>,
    pub girth: Option<usize>,
    pub circuit_rank: usize,
}

impl StaticProps {
    pub fn new(diameter: Option<usize>, girth: Option<usize>, circuit_rank: usize) -> Self {
        StaticProps { diameter, girth, circuit_rank }
    }
}

fn fmt_opt(x: Option<usize>) -> String {
    x.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

impl std::fmt::Display for StaticProps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(diameter={}, girth={}, circuit_rank={})",
            fmt_opt(self.diameter),
            fmt_opt(self.girth),
            self.circuit_rank
        )
    }
}

/// Simple undirected graph over every node of `g`, from the events before
/// `t`, with timestamps, multiplicities and self-loops dropped.
pub fn projection(g: &TemporalGraph, t: Timestamp) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = g.nodes().map(|n| (n, BTreeSet::new())).collect();
    for e in g.events_before(t) {
        if e.u != e.v {
            adj.get_mut(&e.u).expect("endpoint").insert(e.v);
            adj.get_mut(&e.v).expect("endpoint").insert(e.u);
        }
    }
    adj
}

fn bfs(adj: &BTreeMap<NodeId, BTreeSet<NodeId>>, s: NodeId) -> BTreeMap<NodeId, usize> {
    let mut dist = BTreeMap::from([(s, 0)]);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if !dist.contains_key(&y) {
                dist.insert(y, dist[&x] + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn static_properties(g: &TemporalGraph, t: Timestamp) -> StaticProps {
    let adj = projection(g, t);
    let n = adj.len();
    let m: usize = adj.values().map(BTreeSet::len).sum::<usize>() / 2;

    let mut diameter = Some(0);
    let mut seen = BTreeSet::new();
    let mut components = 0;
    for &s in adj.keys() {
        let dist = bfs(&adj, s);
        if dist.len() < n {
            diameter = None;
        } else if let Some(d) = diameter.as_mut() {
            *d = (*d).max(*dist.values().max().unwrap_or(&0));
        }
        if seen.insert(s) {
            components += 1;
            seen.extend(dist.keys().copied());
        }
    }

    let mut girth: Option<usize> = None;
    for &s in adj.keys() {
        let mut dist = BTreeMap::from([(s, 0usize)]);
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                match dist.get(&y) {
                    None => {
                        dist.insert(y, dist[&x] + 1);
                        parent.insert(y, x);
                        queue.push_back(y);
                    }
                    Some(&dy) if parent.get(&x) != Some(&y) => {
                        let len = dist[&x] + dy + 1;
                        girth = Some(girth.map_or(len, |gv| gv.min(len)));
                    }
                    _ => {}
                }
            }
        }
    }

    StaticProps { diameter, girth, circuit_rank: m + components - n }
}

/// Number of simple cycles (length >= 3) in the projection. Exponential;
/// meant for small graphs.
pub fn simple_cycle_count(g: &TemporalGraph, t: Timestamp) -> usize {
    let adj = projection(g, t);
    fn dfs(
        adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
        start: NodeId,
        x: NodeId,
        depth: usize,
        on_path: &mut BTreeSet<NodeId>,
    ) -> usize {
        let mut found = 0;
        for &y in &adj[&x] {
            if y == start && depth >= 2 {
                found += 1;
            } else if y > start && !on_path.contains(&y) {
                on_path.insert(y);
                found += dfs(adj, start, y, depth + 1, on_path);
                on_path.remove(&y);
            }
        }
        found
    }
    let mut total = 0;
    for &s in adj.keys() {
        let mut on_path = BTreeSet::from([s]);
        total += dfs(&adj, s, s, 0, &mut on_path);
    }
    // Every cycle is traversed once in each direction.
    total / 2
}
