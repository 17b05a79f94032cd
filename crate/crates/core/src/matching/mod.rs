//! Matchings: weighted blossom, cardinality blossom, bipartite augmenting paths.

mod blossom;

use std::collections::VecDeque;

use crate::graph::{NodeId, SimpleGraph};

pub use blossom::max_weight_matching;

const NONE: usize = usize::MAX;

/// Minimum-weight perfect matching on the complete graph over `0..n`
/// (`n` even) with costs `cost(i, j) >= 0`.
pub fn min_weight_perfect_matching<F>(n: usize, cost: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> i64,
{
    assert!(n.is_multiple_of(2), "perfect matching needs an even vertex count");
    if n == 0 {
        return Vec::new();
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_cost = 0;
    for i in 0..n {
        for j in i + 1..n {
            let c = cost(i, j);
            max_cost = max_cost.max(c);
            edges.push((i, j, c));
        }
    }
    for e in &mut edges {
        e.2 = max_cost + 1 - e.2;
    }
    max_weight_matching(n, &edges, true)
        .into_iter()
        .map(|m| m.expect("complete graph on an even vertex set has a perfect matching"))
        .collect()
}

/// Maximum-cardinality matching of a simple graph (Edmonds), greedy start.
pub fn max_cardinality_matching(g: &SimpleGraph) -> Vec<Option<NodeId>> {
    let n = g.node_count();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(&w) = g
                .neighbors(v as NodeId)
                .iter()
                .find(|&&w| mate[w as usize] == NONE)
            {
                mate[v] = w as usize;
                mate[w as usize] = v;
            }
        }
    }
    let mut search = Search::new(n);
    for root in 0..n {
        if mate[root] == NONE && g.degree(root as NodeId) > 0 {
            if let Some(end) = search.find_path(g, &mate, root) {
                let mut v = end;
                while v != NONE {
                    let pv = search.parent[v];
                    let next = mate[pv];
                    mate[v] = pv;
                    mate[pv] = v;
                    v = next;
                }
            }
        }
    }
    mate.into_iter()
        .map(|m| (m != NONE).then_some(m as NodeId))
        .collect()
}

struct Search {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[usize], a: usize, b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        let mut a = a;
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        let mut b = b;
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], v: usize, b: usize, child: usize) {
        let (mut v, mut child) = (v, child);
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_path(&mut self, g: &SimpleGraph, mate: &[usize], root: usize) -> Option<usize> {
        let n = mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v as NodeId) {
                let to = to as usize;
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Maximum bipartite matching by augmenting paths. `adj[l]` lists the right
/// vertices adjacent to left vertex `l`, tried in the given order. Returns
/// the right partner of every left vertex.
pub fn bipartite_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let mut left_of = vec![NONE; n_right];
    let mut right_of = vec![NONE; adj.len()];
    let mut stamp = vec![usize::MAX; n_right];
    for l in 0..adj.len() {
        augment(l, l, adj, &mut left_of, &mut right_of, &mut stamp);
    }
    right_of.into_iter().map(|r| (r != NONE).then_some(r)).collect()
}

fn augment(
    root: usize,
    l: usize,
    adj: &[Vec<usize>],
    left_of: &mut [usize],
    right_of: &mut [usize],
    stamp: &mut [usize],
) -> bool {
    // Iterative DFS over alternating paths.
    let mut stack: Vec<(usize, usize)> = vec![(l, 0)];
    let mut path: Vec<usize> = Vec::new();
    while let Some(&mut (u, ref mut idx)) = stack.last_mut() {
        if *idx >= adj[u].len() {
            stack.pop();
            path.pop();
            continue;
        }
        let r = adj[u][*idx];
        *idx += 1;
        if stamp[r] == root {
            continue;
        }
        stamp[r] = root;
        path.push(r);
        if left_of[r] == NONE {
            for (depth, &(lu, _)) in stack.iter().enumerate() {
                let rr = path[depth];
                left_of[rr] = lu;
                right_of[lu] = rr;
            }
            return true;
        }
        stack.push((left_of[r], 0));
    }
    false
}
