//! Reference implementations used only by tests. They favor the obvious
//! method over the fast one.

#![allow(dead_code)]

use itertools::Itertools;
use plgtsp::{MetricInstance, NodeId, SimpleGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Plain partial sum of 200 000 terms plus the integral tail and its first
/// two correction terms.
pub fn zeta_oracle(s: f64) -> f64 {
    let n = 200_000u32;
    let mut sum = 0.0;
    for i in (1..n).rev() {
        sum += f64::from(i).powf(-s);
    }
    let nf = f64::from(n);
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
}

/// Minimum tour cost over all orders fixing node 0 first.
pub fn brute_force_tsp(inst: &MetricInstance) -> u64 {
    let n = inst.node_count();
    if n <= 3 {
        return inst.cycle_cost(&(0..n as NodeId).collect::<Vec<_>>());
    }
    (1..n as NodeId)
        .permutations(n - 1)
        .map(|rest| {
            let mut order = vec![0];
            order.extend(rest);
            inst.cycle_cost(&order)
        })
        .min()
        .unwrap()
}

/// Connected graph: a random spanning tree plus independent extra edges.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u as NodeId, v as NodeId);
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u as NodeId, v as NodeId);
            }
        }
    }
    g
}

/// Any graph, possibly disconnected.
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u as NodeId, v as NodeId);
            }
        }
    }
    g
}

/// Connectivity after deleting `removed` edges, by union-find.
pub fn connected_without(g: &SimpleGraph, removed: &[(NodeId, NodeId)]) -> bool {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let gone: std::collections::HashSet<(NodeId, NodeId)> =
        removed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut parts = n;
    for (a, b) in g.edges() {
        if gone.contains(&(a.min(b), a.max(b))) {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts <= 1
}
