use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SimpleGraph};
use crate::matching::max_cardinality_matching;
use crate::metric::{MetricInstance, MetricKind};

/// Vertex-disjoint cycles covering every node. Cost is `n + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCover {
    pub cycles: Vec<Vec<NodeId>>,
    /// Number of consecutive pairs that are not base-graph edges.
    pub k: u64,
    /// Per cycle: uses 1-edges only. Not serialized; see [`CycleCover::new`].
    #[serde(skip)]
    pub pure: Vec<bool>,
}

fn two_edges(g: &SimpleGraph, cycle: &[NodeId]) -> u64 {
    let len = cycle.len();
    (0..len)
        .filter(|&i| !g.has_edge(cycle[i], cycle[(i + 1) % len]))
        .count() as u64
}

impl CycleCover {
    /// Validates `cycles` against `inst` and computes `k` and the pure flags.
    pub fn new(inst: &MetricInstance, cycles: Vec<Vec<NodeId>>) -> Result<Self> {
        let g = inst.base();
        let pure = cycles.iter().map(|c| two_edges(g, c) == 0).collect();
        let k = cycles.iter().map(|c| two_edges(g, c)).sum();
        let cover = CycleCover { cycles, k, pure };
        cover.validate(inst)?;
        Ok(cover)
    }

    pub fn cost(&self, n: usize) -> u64 {
        n as u64 + self.k
    }

    pub fn validate(&self, inst: &MetricInstance) -> Result<()> {
        if inst.kind() != MetricKind::OneTwo {
            return Err(Error::KindMismatch("cycle covers need a onetwo instance".into()));
        }
        let n = inst.node_count();
        let mut seen = vec![false; n];
        for c in &self.cycles {
            if c.len() < 3 {
                return Err(Error::CoverMismatch(format!("cycle of length {}", c.len())));
            }
            for &v in c {
                match seen.get_mut(v as usize) {
                    None => return Err(Error::CoverMismatch(format!("node {v} out of range"))),
                    Some(true) => return Err(Error::CoverMismatch(format!("node {v} covered twice"))),
                    Some(s) => *s = true,
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::CoverMismatch(format!("node {v} not covered")));
        }
        let k: u64 = self.cycles.iter().map(|c| two_edges(inst.base(), c)).sum();
        if k != self.k {
            return Err(Error::CoverMismatch(format!("k is {k}, cover says {}", self.k)));
        }
        if !self.pure.is_empty() && self.pure.len() != self.cycles.len() {
            return Err(Error::CoverMismatch("pure flags do not match cycles".into()));
        }
        Ok(())
    }
}

/// Maximum simple 2-matching of `g` as a list of edges.
///
/// Tutte's reduction: every node gets two copies, every edge `uv` becomes a
/// pair `e_u – e_v` with `e_u` joined to both copies of `u`. A maximum
/// matching there has `|E| + s` edges where `s` is the 2-matching size.
pub fn max_two_matching(g: &SimpleGraph) -> Vec<(NodeId, NodeId)> {
    let n = g.node_count();
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let m = edges.len();
    let mut gadget = SimpleGraph::new(2 * n + 2 * m);
    for (k, &(u, v)) in edges.iter().enumerate() {
        let eu = (2 * n + 2 * k) as NodeId;
        let ev = eu + 1;
        gadget.add_edge(eu, ev);
        gadget.add_edge(eu, 2 * u);
        gadget.add_edge(eu, 2 * u + 1);
        gadget.add_edge(ev, 2 * v);
        gadget.add_edge(ev, 2 * v + 1);
    }
    let mate = max_cardinality_matching(&gadget);
    let copy_of = |x: Option<NodeId>| x.filter(|&c| (c as usize) < 2 * n).map(|c| c / 2);
    edges
        .into_iter()
        .enumerate()
        .filter(|&(k, (u, v))| {
            let eu = 2 * n + 2 * k;
            copy_of(mate[eu]) == Some(u) && copy_of(mate[eu + 1]) == Some(v)
        })
        .map(|(_, e)| e)
        .collect()
}

/// Splits a subgraph of maximum degree 2 into paths (isolated nodes count as
/// one-node paths) and cycles.
fn paths_and_cycles(n: usize, edges: &[(NodeId, NodeId)]) -> (Vec<Vec<NodeId>>, Vec<Vec<NodeId>>) {
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut seen = vec![false; n];
    let walk = |start: NodeId, seen: &mut Vec<bool>| {
        let mut seq = vec![start];
        seen[start as usize] = true;
        let mut cur = start;
        while let Some(&next) = adj[cur as usize].iter().find(|&&w| !seen[w as usize]) {
            seen[next as usize] = true;
            seq.push(next);
            cur = next;
        }
        seq
    };
    let mut paths = Vec::new();
    for v in 0..n as NodeId {
        if !seen[v as usize] && adj[v as usize].len() <= 1 {
            paths.push(walk(v, &mut seen));
        }
    }
    let mut cycles = Vec::new();
    for v in 0..n as NodeId {
        if !seen[v as usize] {
            cycles.push(walk(v, &mut seen));
        }
    }
    (paths, cycles)
}

/// Minimum 2-factor of the (1,2) metric, then pairwise triangle merging.
///
/// The 1-edges of a 2-factor form a simple 2-matching, so `k ≥ n − s` with
/// `s` the maximum 2-matching size. Chaining the paths of a maximum
/// 2-matching into one cycle attains `k = n − s` unless the path nodes are
/// fewer than three; those are inserted at the cheapest spot of an existing
/// cycle instead.
pub fn min_cycle_cover(inst: &MetricInstance) -> Result<CycleCover> {
    if inst.kind() != MetricKind::OneTwo {
        return Err(Error::KindMismatch("cycle covers need a onetwo instance".into()));
    }
    let n = inst.node_count();
    if n < 3 {
        return Err(Error::Range(format!("cycle cover needs n >= 3, got {n}")));
    }
    let (paths, mut cycles) = paths_and_cycles(n, &max_two_matching(inst.base()));
    let chained: Vec<NodeId> = paths.into_iter().flatten().collect();
    if chained.len() >= 3 {
        cycles.push(chained);
    } else if !chained.is_empty() {
        insert_segment(inst, &mut cycles, chained);
    }
    merge_triangles(inst, &mut cycles);
    for c in &mut cycles {
        canonical_rotation(c);
    }
    cycles.sort();
    CycleCover::new(inst, cycles)
}

/// Starts a cycle at its smallest node, walking towards the smaller neighbor.
pub(crate) fn canonical_rotation(c: &mut [NodeId]) {
    if c.is_empty() {
        return;
    }
    let i = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
    c.rotate_left(i);
    if c.len() > 2 && c[c.len() - 1] < c[1] {
        c[1..].reverse();
    }
}

fn insert_segment(inst: &MetricInstance, cycles: &mut [Vec<NodeId>], seg: Vec<NodeId>) {
    let d = |a: NodeId, b: NodeId| i64::from(inst.dist(a, b));
    let rev: Vec<NodeId> = seg.iter().rev().copied().collect();
    let mut best: Option<(i64, usize, usize, bool)> = None;
    for (ci, c) in cycles.iter().enumerate() {
        for i in 0..c.len() {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            for (reversed, s) in [(false, &seg), (true, &rev)] {
                let delta = d(a, s[0]) + d(*s.last().unwrap(), b) - d(a, b);
                if best.is_none_or(|bst| delta < bst.0) {
                    best = Some((delta, ci, i, reversed));
                }
            }
        }
    }
    let (_, ci, i, reversed) = best.expect("a cycle exists when n >= 3");
    let s = if reversed { rev } else { seg };
    let c = &mut cycles[ci];
    let tail = c.split_off(i + 1);
    c.extend(s);
    c.extend(tail);
}

/// Merges two triangles into a hexagon whenever that does not raise the cost.
fn merge_triangles(inst: &MetricInstance, cycles: &mut Vec<Vec<NodeId>>) {
    let g = inst.base();
    let d = |a: NodeId, b: NodeId| i64::from(inst.dist(a, b));
    let mut owner = vec![usize::MAX; inst.node_count()];
    for (ci, c) in cycles.iter().enumerate() {
        for &v in c {
            owner[v as usize] = ci;
        }
    }
    let mut alive = vec![true; cycles.len()];
    for i in 0..cycles.len() {
        if cycles[i].len() != 3 || !alive[i] {
            continue;
        }
        let mut partners: Vec<usize> = cycles[i]
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().map(|&w| owner[w as usize]))
            .filter(|&j| j > i && alive[j] && cycles[j].len() == 3)
            .collect();
        partners.sort_unstable();
        partners.dedup();
        for j in partners {
            let (a, b) = (&cycles[i], &cycles[j]);
            let mut best: Option<(i64, Vec<NodeId>)> = None;
            for x in 0..3 {
                for y in 0..3 {
                    let (a0, a1) = (a[x], a[(x + 1) % 3]);
                    let (b0, b1) = (b[y], b[(y + 1) % 3]);
                    let removed = d(a0, a1) + d(b0, b1);
                    // Path a1 .. a0 (rest of a), then b in one of two directions.
                    let a_path = [a1, a[(x + 2) % 3], a0];
                    for cross in [false, true] {
                        let b_path = if cross {
                            [b0, b[(y + 2) % 3], b1]
                        } else {
                            [b1, b[(y + 2) % 3], b0]
                        };
                        let added = d(a0, b_path[0]) + d(b_path[2], a1);
                        let delta = added - removed;
                        if delta <= 0 && best.as_ref().is_none_or(|bst| delta < bst.0) {
                            let mut seq = a_path.to_vec();
                            seq.extend(b_path);
                            best = Some((delta, seq));
                        }
                    }
                }
            }
            if let Some((_, seq)) = best {
                for &v in &seq {
                    owner[v as usize] = i;
                }
                cycles[i] = seq;
                cycles[j].clear();
                alive[j] = false;
                break;
            }
        }
    }
    cycles.retain(|c| !c.is_empty());
}
