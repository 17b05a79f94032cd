//! Graphic and (1,2) metrics over a simple graph, tours, and the exact
//! Held–Karp oracle.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SimpleGraph};
use crate::onetwo::CycleCover;

/// Largest graphic instance that gets a full distance matrix.
pub const DENSE_DISTANCE_LIMIT: usize = 5000;

/// Default node cap for [`exact_optimum`].
pub const DEFAULT_EXACT_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Shortest-path distances in the base graph.
    Graphic,
    /// 1 on base-graph edges, 2 elsewhere.
    OneTwo,
}

impl MetricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::Graphic => "graphic",
            MetricKind::OneTwo => "onetwo",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graphic" => Ok(MetricKind::Graphic),
            "onetwo" => Ok(MetricKind::OneTwo),
            other => Err(Error::Parse(format!("unknown metric kind `{other}`"))),
        }
    }
}

#[derive(Debug)]
enum Distances {
    None,
    Dense(Vec<u16>),
    Lazy(Mutex<HashMap<NodeId, Arc<Vec<u32>>>>),
}

/// An immutable metric instance. Safe to share across threads.
#[derive(Debug)]
pub struct MetricInstance {
    kind: MetricKind,
    base: SimpleGraph,
    dist: Distances,
}

/// Builds the metric. Graphic instances need a connected base graph.
pub fn build_instance(g: SimpleGraph, kind: MetricKind) -> Result<MetricInstance> {
    let dist = match kind {
        MetricKind::OneTwo => Distances::None,
        MetricKind::Graphic => {
            if !g.is_connected() {
                return Err(Error::Disconnected);
            }
            let n = g.node_count();
            if n <= DENSE_DISTANCE_LIMIT {
                let mut m = vec![0u16; n * n];
                for s in 0..n {
                    let row = bfs(&g, s as NodeId);
                    for (t, d) in row.into_iter().enumerate() {
                        m[s * n + t] = d as u16;
                    }
                }
                Distances::Dense(m)
            } else {
                Distances::Lazy(Mutex::new(HashMap::new()))
            }
        }
    };
    Ok(MetricInstance { kind, base: g, dist })
}

fn bfs(g: &SimpleGraph, s: NodeId) -> Vec<u32> {
    let mut d = vec![u32::MAX; g.node_count()];
    let mut queue = std::collections::VecDeque::new();
    d[s as usize] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if d[w as usize] == u32::MAX {
                d[w as usize] = d[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

impl MetricInstance {
    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn base(&self) -> &SimpleGraph {
        &self.base
    }

    pub fn node_count(&self) -> usize {
        self.base.node_count()
    }

    pub fn dist(&self, u: NodeId, v: NodeId) -> u32 {
        if u == v {
            return 0;
        }
        match &self.dist {
            Distances::None => {
                if self.base.has_edge(u, v) {
                    1
                } else {
                    2
                }
            }
            Distances::Dense(m) => u32::from(m[u as usize * self.node_count() + v as usize]),
            Distances::Lazy(cache) => {
                let row = {
                    let mut cache = cache.lock().expect("distance cache poisoned");
                    cache
                        .entry(u)
                        .or_insert_with(|| Arc::new(bfs(&self.base, u)))
                        .clone()
                };
                row[v as usize]
            }
        }
    }

    /// Rejects anything that is not a permutation of `0..n`.
    pub fn validate(&self, order: &[NodeId]) -> Result<()> {
        let n = self.node_count();
        if order.len() != n {
            return Err(Error::InvalidTour(format!(
                "tour has {} entries, instance has {n} nodes",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in order {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| Error::InvalidTour(format!("node {v} out of range")))?;
            if *slot {
                return Err(Error::InvalidTour(format!("node {v} visited twice")));
            }
            *slot = true;
        }
        Ok(())
    }

    /// Cost of a closed tour without validation.
    pub fn cycle_cost(&self, order: &[NodeId]) -> u64 {
        let n = order.len();
        (0..n)
            .map(|i| u64::from(self.dist(order[i], order[(i + 1) % n])))
            .sum()
    }
}

/// A Hamiltonian cycle and its cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<NodeId>,
    pub cost: u64,
}

impl Tour {
    /// c_τ(v): half the cost of the two tour edges at `v`, indexed by node.
    pub fn node_costs(&self, inst: &MetricInstance) -> Vec<f64> {
        let n = self.order.len();
        let mut out = vec![0.0; inst.node_count()];
        for i in 0..n {
            let (u, v) = (self.order[i], self.order[(i + 1) % n]);
            let half = f64::from(inst.dist(u, v)) / 2.0;
            out[u as usize] += half;
            out[v as usize] += half;
        }
        out
    }
}

pub fn tour_cost(inst: &MetricInstance, order: &[NodeId]) -> Result<Tour> {
    inst.validate(order)?;
    Ok(Tour {
        order: order.to_vec(),
        cost: inst.cycle_cost(order),
    })
}

/// Optimal tour by Held–Karp over subsets, refusing more than `cap` nodes.
/// Among optimal tours the lexicographically smallest order is returned.
pub fn exact_optimum(inst: &MetricInstance, cap: usize) -> Result<Tour> {
    let n = inst.node_count();
    if n > cap || n > 24 {
        return Err(Error::SizeCap { n, cap: cap.min(24) });
    }
    if n <= 3 {
        let order: Vec<NodeId> = (0..n as NodeId).collect();
        return tour_cost(inst, &order);
    }
    // Nodes 1..n map to bits 0..m. h[S * m + v] is the cheapest path that
    // starts at v (v ∉ S), visits all of S and ends at node 0.
    let m = n - 1;
    let d = |a: usize, b: usize| inst.dist(a as NodeId, b as NodeId);
    let full = (1usize << m) - 1;
    let mut h = vec![u32::MAX; (1 << m) * m];
    for v in 0..m {
        h[v] = d(v + 1, 0);
    }
    for s in 1..=full {
        for v in 0..m {
            if s >> v & 1 == 1 {
                continue;
            }
            let mut best = u32::MAX;
            let mut rest = s;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = d(v + 1, u + 1) + h[(s & !(1 << u)) * m + u];
                best = best.min(c);
            }
            h[s * m + v] = best;
        }
    }
    let mut order = vec![0 as NodeId];
    let mut cur = 0usize;
    let mut remaining = full;
    let total = (0..m)
        .map(|u| d(0, u + 1) + h[(full & !(1 << u)) * m + u])
        .min()
        .unwrap();
    let mut left = total;
    while remaining != 0 {
        let next = (0..m)
            .filter(|&u| remaining >> u & 1 == 1)
            .find(|&u| d(cur, u + 1) + h[(remaining & !(1 << u)) * m + u] == left)
            .expect("optimal continuation exists");
        left -= d(cur, next + 1);
        remaining &= !(1 << next);
        cur = next + 1;
        order.push(cur as NodeId);
    }
    Ok(Tour {
        order,
        cost: u64::from(total),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundBreakdown {
    pub n: u64,
    /// Half the number of degree-1 nodes of the base graph.
    pub half_deg1: f64,
    pub cover_k: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceLowerBound {
    pub value: u64,
    pub breakdown: LowerBoundBreakdown,
}

/// max(n, n + ⌈d₁/2⌉, n + k) with d₁ the number of degree-1 nodes and k the
/// 2-edge count of a minimum cover.
///
/// Every distance is at least 1, and for n ≥ 3 a degree-1 node has at most
/// one tour neighbor at distance 1. Instances with fewer than three nodes
/// get the plain tour-length bound (0 for one node).
pub fn instance_lower_bound(inst: &MetricInstance, cover: Option<&CycleCover>) -> Result<InstanceLowerBound> {
    let n = inst.node_count() as u64;
    let g = inst.base();
    let d1 = (0..g.node_count() as NodeId)
        .filter(|&v| g.degree(v) == 1)
        .count() as u64;
    let cover_k = match cover {
        Some(c) => {
            c.validate(inst)?;
            Some(c.k)
        }
        None => None,
    };
    let mut value = if n >= 2 { n } else { 0 };
    if n >= 3 {
        value = value.max(n + d1.div_ceil(2));
    }
    if let Some(k) = cover_k {
        value = value.max(n + k);
    }
    Ok(InstanceLowerBound {
        value,
        breakdown: LowerBoundBreakdown {
            n,
            half_deg1: d1 as f64 / 2.0,
            cover_k,
        },
    })
}
