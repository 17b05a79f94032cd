//! The random-matching multigraph model and neighbor statistics.
//!
//! Every node `v` of the deterministic degree sequence contributes `deg(v)`
//! copies; the copies are matched uniformly at random and each matched pair
//! becomes an edge (or a self-loop when both copies belong to the same
//! node). When the number of copies is odd, one uniformly chosen copy stays
//! unmatched.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{MultiGraph, NodeId, SimpleGraph};
use crate::model::{degree_sequence, PowerLawParams};

/// Generator for a single sample seeded by `seed`.
pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` of an experiment seeded by `seed_base`.
pub fn trial_rng(seed_base: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_base);
    rng.set_stream(trial);
    rng
}

/// Samples `G_{α,β}` deterministically from `seed`.
pub fn sample_plg(params: &PowerLawParams, seed: u64, node_cap: u64) -> Result<MultiGraph> {
    sample_plg_with(params, node_cap, &mut sample_rng(seed))
}

pub fn sample_plg_with<R: RngCore>(
    params: &PowerLawParams,
    node_cap: u64,
    rng: &mut R,
) -> Result<MultiGraph> {
    let degrees = degree_sequence(params, node_cap)?.node_degrees();
    Ok(sample_configuration(degrees, rng))
}

/// Random perfect matching on the copies of a prescribed degree sequence.
pub fn sample_configuration<R: RngCore>(degrees: Vec<u32>, rng: &mut R) -> MultiGraph {
    let total: usize = degrees.iter().map(|&d| d as usize).sum();
    let mut copies: Vec<NodeId> = Vec::with_capacity(total);
    for (v, &d) in degrees.iter().enumerate() {
        copies.extend(std::iter::repeat_n(v as NodeId, d as usize));
    }
    copies.shuffle(rng);
    let mut g = MultiGraph::new(degrees);
    // With an odd count the trailing copy is left out; after a uniform
    // shuffle it is a uniformly chosen copy.
    for pair in copies.chunks_exact(2) {
        g.add_pair(pair[0], pair[1]);
    }
    g
}

/// Drops self-loops and collapses parallel edges.
pub fn simplify(g: &MultiGraph) -> SimpleGraph {
    let mut s = SimpleGraph::new(g.node_count());
    for &(u, v) in g.multiplicities().keys() {
        s.add_edge(u, v);
    }
    s
}

/// The largest connected component, relabeled contiguously. Ties go to the
/// component with the smallest member. The mapping sends new ids to old.
pub fn largest_component(g: &SimpleGraph) -> (SimpleGraph, Vec<NodeId>) {
    let comps = g.components();
    let mut best: Option<&Vec<NodeId>> = None;
    for c in &comps {
        if best.is_none_or(|b| c.len() > b.len()) {
            best = Some(c);
        }
    }
    match best {
        Some(nodes) => g.induced_subgraph(nodes),
        None => (SimpleGraph::new(0), Vec::new()),
    }
}

/// Per-node counts of degree-1 and degree-2 neighbors and the number `m1`
/// of degree-1 nodes adjacent to another degree-1 node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborStats {
    pub n1: Vec<u32>,
    pub n2: Vec<u32>,
    pub m1: u64,
}

impl NeighborStats {
    pub fn n1_total(&self) -> u64 {
        self.n1.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn n2_total(&self) -> u64 {
        self.n2.iter().map(|&x| u64::from(x)).sum()
    }
}

pub fn neighbor_stats(g: &SimpleGraph) -> NeighborStats {
    let n = g.node_count();
    let mut n1 = vec![0u32; n];
    let mut n2 = vec![0u32; n];
    let mut m1 = 0;
    for v in 0..n as NodeId {
        for &w in g.neighbors(v) {
            match g.degree(w) {
                1 => n1[v as usize] += 1,
                2 => n2[v as usize] += 1,
                _ => {}
            }
        }
        if g.degree(v) == 1 && n1[v as usize] == 1 {
            m1 += 1;
        }
    }
    NeighborStats { n1, n2, m1 }
}

/// `(A1, A2)`: Σ over nodes of degree > 2 of `max(0, N1(v)/2 - 1)` and
/// `max(0, N2(v)/2 - 1)`.
pub fn a_values(g: &SimpleGraph, stats: &NeighborStats) -> (f64, f64) {
    let mut a1 = 0.0;
    let mut a2 = 0.0;
    for v in 0..g.node_count() {
        if g.degree(v as NodeId) > 2 {
            a1 += (f64::from(stats.n1[v]) / 2.0 - 1.0).max(0.0);
            a2 += (f64::from(stats.n2[v]) / 2.0 - 1.0).max(0.0);
        }
    }
    (a1, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_NODE_CAP;

    fn p(alpha: f64, beta: f64) -> PowerLawParams {
        PowerLawParams::new(alpha, beta).unwrap()
    }

    #[test]
    fn single_leaf_has_no_edges() {
        for seed in 0..5 {
            let g = sample_plg(&p(0.1, 3.0), seed, DEFAULT_NODE_CAP).unwrap();
            assert_eq!(g.node_count(), 1);
            assert_eq!(g.matched_pairs(), 0);
            assert_eq!(g.realized_degrees(), vec![0]);
        }
    }

    #[test]
    fn handshake_and_degree_bounds() {
        let g = sample_plg(&p(100f64.ln(), 2.0), 42, DEFAULT_NODE_CAP).unwrap();
        let realized = g.realized_degrees();
        let total: u64 = realized.iter().map(|&d| u64::from(d)).sum();
        assert_eq!(total, 2 * g.matched_pairs());
        let assigned: u64 = g.assigned_degrees().iter().map(|&d| u64::from(d)).sum();
        let short: Vec<_> = realized
            .iter()
            .zip(g.assigned_degrees())
            .filter(|(r, a)| r != a)
            .collect();
        assert_eq!(short.len() as u64, assigned % 2);
        for (r, a) in short {
            assert_eq!(*r + 1, *a);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let params = p(300f64.ln(), 2.2);
        let a = sample_plg(&params, 9, DEFAULT_NODE_CAP).unwrap();
        let b = sample_plg(&params, 9, DEFAULT_NODE_CAP).unwrap();
        let c = sample_plg(&params, 10, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(
            serde_json::to_string(&a.to_json(Some(&params))).unwrap(),
            serde_json::to_string(&b.to_json(Some(&params))).unwrap()
        );
        assert_ne!(a, c);
    }

    #[test]
    fn trial_streams_differ() {
        let mut a = trial_rng(5, 0);
        let mut b = trial_rng(5, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn simplify_collapses() {
        let mut g = MultiGraph::new(vec![4, 3]);
        for _ in 0..3 {
            g.add_pair(0, 1);
        }
        g.add_pair(0, 0);
        let s = simplify(&g);
        assert_eq!(s.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(simplify(&MultiGraph::new(vec![])).node_count(), 0);
    }

    #[test]
    fn simplify_never_raises_degree() {
        let g = sample_plg(&p(500f64.ln(), 2.2), 3, DEFAULT_NODE_CAP).unwrap();
        let s = simplify(&g);
        let realized = g.realized_degrees();
        for v in 0..s.node_count() {
            assert!(s.degree(v as NodeId) as u32 <= realized[v]);
        }
    }

    #[test]
    fn largest_component_tie_and_identity() {
        let g = SimpleGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (c, map) = largest_component(&g);
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(c.edge_count(), 3);

        let path = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (c, map) = largest_component(&path);
        assert_eq!(c, path);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn star_and_pair_stats() {
        let star = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = neighbor_stats(&star);
        assert_eq!(s.n1[0], 3);
        assert_eq!(s.m1, 0);
        assert_eq!(a_values(&star, &s), (0.5, 0.0));

        let pair = SimpleGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(neighbor_stats(&pair).m1, 2);
    }
}
