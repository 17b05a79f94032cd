//! Graphic-TSP heuristics and the removable-pairing bound.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SimpleGraph};
use crate::matching::min_weight_perfect_matching;
use crate::metric::{tour_cost, MetricInstance, MetricKind, Tour};

pub type Edge = (NodeId, NodeId);

fn norm(u: NodeId, v: NodeId) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn require_graphic(inst: &MetricInstance) -> Result<()> {
    if inst.kind() != MetricKind::Graphic {
        return Err(Error::KindMismatch(format!(
            "graphic algorithm on a {} instance",
            inst.kind().as_str()
        )));
    }
    Ok(())
}

/// BFS spanning tree from node 0 as a parent array (`parent[0] == 0`).
pub fn bfs_tree(g: &SimpleGraph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut parent = vec![NodeId::MAX; n];
    if n == 0 {
        return parent;
    }
    parent[0] = 0;
    let mut queue = VecDeque::from([0 as NodeId]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if parent[w as usize] == NodeId::MAX {
                parent[w as usize] = u;
                queue.push_back(w);
            }
        }
    }
    parent
}

fn tree_children(parent: &[NodeId]) -> Vec<Vec<NodeId>> {
    let mut children = vec![Vec::new(); parent.len()];
    for (v, &p) in parent.iter().enumerate().skip(1) {
        children[p as usize].push(v as NodeId);
    }
    children
}

/// Tree doubling: walking the doubled tree and skipping repeats visits the
/// nodes in DFS preorder (children by increasing id).
pub fn mst_double_tour(inst: &MetricInstance) -> Result<Tour> {
    require_graphic(inst)?;
    let n = inst.node_count();
    if n == 0 {
        return tour_cost(inst, &[]);
    }
    let children = tree_children(&bfs_tree(inst.base()));
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0 as NodeId];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children[v as usize].iter().rev());
    }
    tour_cost(inst, &order)
}

/// Christofides: BFS tree, exact minimum-weight perfect matching on the odd
/// tree nodes, Euler tour, shortcut.
pub fn christofides(inst: &MetricInstance) -> Result<Tour> {
    require_graphic(inst)?;
    let n = inst.node_count();
    if n <= 2 {
        let order: Vec<NodeId> = (0..n as NodeId).collect();
        return tour_cost(inst, &order);
    }
    let parent = bfs_tree(inst.base());
    let mut multi: Vec<Edge> = (1..n).map(|v| (parent[v], v as NodeId)).collect();
    let mut deg = vec![0u32; n];
    for &(a, b) in &multi {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let odd: Vec<NodeId> = (0..n as NodeId).filter(|&v| deg[v as usize] % 2 == 1).collect();
    let mate = min_weight_perfect_matching(odd.len(), |i, j| i64::from(inst.dist(odd[i], odd[j])));
    for (i, &j) in mate.iter().enumerate() {
        if i < j {
            multi.push((odd[i], odd[j]));
        }
    }
    let walk = euler_circuit(n, &multi, 0);
    let mut seen = vec![false; n];
    let order: Vec<NodeId> = walk
        .into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v as usize], true))
        .collect();
    tour_cost(inst, &order)
}

/// Hierholzer on a connected multigraph with all degrees even. Edges at a
/// node are used in insertion order.
fn euler_circuit(n: usize, edges: &[Edge], start: NodeId) -> Vec<NodeId> {
    let mut incident = vec![Vec::new(); n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        incident[a as usize].push(k);
        incident[b as usize].push(k);
    }
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; n];
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        let vi = v as usize;
        while cursor[vi] < incident[vi].len() && used[incident[vi][cursor[vi]]] {
            cursor[vi] += 1;
        }
        if cursor[vi] == incident[vi].len() {
            circuit.push(v);
            stack.pop();
        } else {
            let k = incident[vi][cursor[vi]];
            used[k] = true;
            let (a, b) = edges[k];
            stack.push(if a == v { b } else { a });
        }
    }
    circuit.reverse();
    circuit
}

/// Edge-partition into biconnected components plus articulation points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biconnected {
    /// Each component's edges, normalized `(u < v)` and sorted.
    pub components: Vec<Vec<Edge>>,
    pub articulation_points: Vec<NodeId>,
}

/// DFS lowpoint decomposition (iterative, neighbors in increasing id).
pub fn biconnected_components(g: &SimpleGraph) -> Biconnected {
    let n = g.node_count();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut is_art = vec![false; n];
    let mut timer = 0u32;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut components = Vec::new();

    for root in 0..n as NodeId {
        if disc[root as usize] != u32::MAX {
            continue;
        }
        disc[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        let mut root_children = 0;
        // (node, parent, next neighbor index)
        let mut stack: Vec<(NodeId, NodeId, usize)> = vec![(root, NodeId::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, p, idx) = *top;
            if let Some(&w) = g.neighbors(v).get(idx) {
                top.2 += 1;
                if w == p {
                    continue;
                }
                if disc[w as usize] == u32::MAX {
                    edge_stack.push((v, w));
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if disc[w as usize] < disc[v as usize] {
                    edge_stack.push((v, w));
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if p == NodeId::MAX {
                    continue;
                }
                low[p as usize] = low[p as usize].min(low[v as usize]);
                if low[v as usize] >= disc[p as usize] {
                    if p != root {
                        is_art[p as usize] = true;
                    }
                    let mut comp = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        comp.push(norm(e.0, e.1));
                        if e == (p, v) {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
        if root_children > 1 {
            is_art[root as usize] = true;
        }
    }
    components.sort();
    Biconnected {
        components,
        articulation_points: (0..n as NodeId).filter(|&v| is_art[v as usize]).collect(),
    }
}

/// A removable pairing `(R, P)` built on a DFS tree `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovablePairing {
    pub root: NodeId,
    pub tree: BTreeSet<Edge>,
    pub removable: BTreeSet<Edge>,
    /// `(center, back edge, tree edge)`, centers increasing.
    pub pairs: Vec<(NodeId, Edge, Edge)>,
}

impl RemovablePairing {
    /// Number of edges outside the DFS tree.
    pub fn non_tree_count(&self, g: &SimpleGraph) -> usize {
        g.edge_count() - self.tree.len()
    }
}

fn check_biconnected(g: &SimpleGraph) -> Result<()> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::NotBiconnected(format!("{n} nodes")));
    }
    if let Some(v) = (0..n as NodeId).find(|&v| g.degree(v) < 2) {
        return Err(Error::NotBiconnected(format!(
            "node {v} has degree {}",
            g.degree(v)
        )));
    }
    if !g.is_connected() {
        return Err(Error::NotBiconnected("graph is disconnected".into()));
    }
    let bc = biconnected_components(g);
    if let Some(&a) = bc.articulation_points.first() {
        return Err(Error::NotBiconnected(format!("articulation point {a}")));
    }
    Ok(())
}

/// DFS tree from `root` (children by increasing id); `R` starts as the
/// non-tree edges. Each node `v` of degree ≥ 3, in increasing id, takes its
/// first back edge `{v, w}` to a descendant (smallest `w`) and pairs it with
/// the tree edge from `v` towards `w`, adding that tree edge to `R`.
pub fn removable_pairing(g: &SimpleGraph, root: NodeId) -> Result<RemovablePairing> {
    check_biconnected(g)?;
    let n = g.node_count();
    if root as usize >= n {
        return Err(Error::Range(format!("root {root} out of range")));
    }
    let mut parent = vec![NodeId::MAX; n];
    let mut pre = vec![u32::MAX; n];
    let mut size = vec![1u32; n];
    let mut depth = vec![0u32; n];
    let mut timer = 0;
    let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
    pre[root as usize] = timer;
    timer += 1;
    while let Some(top) = stack.last_mut() {
        let (v, idx) = *top;
        if let Some(&w) = g.neighbors(v).get(idx) {
            top.1 += 1;
            if pre[w as usize] == u32::MAX {
                pre[w as usize] = timer;
                timer += 1;
                parent[w as usize] = v;
                depth[w as usize] = depth[v as usize] + 1;
                stack.push((w, 0));
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                size[p as usize] += size[v as usize];
            }
        }
    }
    let tree: BTreeSet<Edge> = (0..n as NodeId)
        .filter(|&v| v != root)
        .map(|v| norm(v, parent[v as usize]))
        .collect();
    let mut removable: BTreeSet<Edge> = g.edges().filter(|e| !tree.contains(e)).collect();
    let in_subtree = |c: NodeId, w: NodeId| {
        let (pc, pw) = (pre[c as usize], pre[w as usize]);
        pc <= pw && pw < pc + size[c as usize]
    };
    let mut pairs = Vec::new();
    for v in 0..n as NodeId {
        if g.degree(v) < 3 {
            continue;
        }
        let back = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| !tree.contains(&norm(v, w)) && depth[w as usize] > depth[v as usize]);
        let Some(w) = back else { continue };
        let child = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&c| parent[c as usize] == v && in_subtree(c, w))
            .expect("descendant lies below some child");
        let e2 = norm(v, child);
        if removable.insert(e2) {
            pairs.push((v, norm(v, w), e2));
        }
    }
    Ok(RemovablePairing {
        root,
        tree,
        removable,
        pairs,
    })
}

/// One biconnected component of the degree-≥2 core with its pairing.
/// Bridges carry no pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorePiece {
    pub edges: Vec<Edge>,
    pub pairing: Option<RemovablePairing>,
    /// Maps pairing-local node ids back to graph ids.
    pub nodes: Vec<NodeId>,
}

/// Nodes that survive repeatedly deleting nodes of degree ≤ 1.
pub fn two_core(g: &SimpleGraph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut deg: Vec<usize> = (0..n as NodeId).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<NodeId> = (0..n as NodeId).filter(|&v| deg[v as usize] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        for &w in g.neighbors(v) {
            if alive[w as usize] {
                deg[w as usize] -= 1;
                if deg[w as usize] == 1 {
                    queue.push(w);
                }
            }
        }
    }
    (0..n as NodeId).filter(|&v| alive[v as usize]).collect()
}

/// Pairings for every biconnected component of the 2-core, in graph ids.
pub fn core_pairings(g: &SimpleGraph) -> Result<Vec<CorePiece>> {
    let core = two_core(g);
    let (sub, map) = g.induced_subgraph(&core);
    let bc = biconnected_components(&sub);
    let mut pieces = Vec::new();
    for comp in bc.components {
        let edges: Vec<Edge> = comp
            .iter()
            .map(|&(a, b)| norm(map[a as usize], map[b as usize]))
            .collect();
        if comp.len() == 1 {
            pieces.push(CorePiece {
                edges,
                pairing: None,
                nodes: vec![],
            });
            continue;
        }
        let mut local: Vec<NodeId> = comp.iter().flat_map(|&(a, b)| [a, b]).collect();
        local.sort_unstable();
        local.dedup();
        let piece_graph = SimpleGraph::from_edges(
            local.len(),
            comp.iter().map(|&(a, b)| {
                (
                    local.binary_search(&a).unwrap() as NodeId,
                    local.binary_search(&b).unwrap() as NodeId,
                )
            }),
        )?;
        let pairing = removable_pairing(&piece_graph, 0)?;
        pieces.push(CorePiece {
            edges,
            pairing: Some(pairing),
            nodes: local.iter().map(|&v| map[v as usize]).collect(),
        });
    }
    Ok(pieces)
}

/// Σ over pieces of (4/3)|E_i| − (2/3)|R_i|. Every core edge must belong to
/// exactly one piece.
pub fn ms_cost_bound(g: &SimpleGraph, pieces: &[CorePiece]) -> Result<f64> {
    let core = two_core(g);
    let (sub, map) = g.induced_subgraph(&core);
    let mut expected: Vec<Edge> = sub
        .edges()
        .map(|(a, b)| norm(map[a as usize], map[b as usize]))
        .collect();
    expected.sort_unstable();
    let mut covered: Vec<Edge> = pieces.iter().flat_map(|p| p.edges.iter().copied()).collect();
    covered.sort_unstable();
    if covered != expected {
        return Err(Error::Coverage(format!(
            "pieces cover {} edges, core has {}",
            covered.len(),
            expected.len()
        )));
    }
    let mut total = 0.0;
    for p in pieces {
        let r = p.pairing.as_ref().map_or(0, |pr| pr.removable.len());
        if let Some(pr) = &p.pairing {
            if pr.tree.len() + pr.removable.len() - pr.pairs.len() != p.edges.len() {
                return Err(Error::Coverage("pairing does not match its piece".into()));
            }
        }
        total += 4.0 / 3.0 * p.edges.len() as f64 - 2.0 / 3.0 * r as f64;
    }
    Ok(total)
}

/// Totals reported alongside the removable-pairing bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsReport {
    /// [`ms_cost_bound`] over the 2-core.
    pub bound: f64,
    /// Bound on a full tour: `bound` with bridges charged 2 instead of 4/3,
    /// plus 2 for every edge outside the 2-core.
    pub tour_bound: f64,
    pub core_edges: usize,
    pub removable_total: usize,
    pub tree_total: usize,
    pub pair_total: usize,
    pub pieces: usize,
}

pub fn ms_report(g: &SimpleGraph) -> Result<MsReport> {
    let pieces = core_pairings(g)?;
    let bound = ms_cost_bound(g, &pieces)?;
    let pr = pieces.iter().filter_map(|p| p.pairing.as_ref());
    let core_edges: usize = pieces.iter().map(|p| p.edges.len()).sum();
    let bridges = pieces.iter().filter(|p| p.pairing.is_none()).count();
    let outside = g.edge_count() - core_edges;
    Ok(MsReport {
        bound,
        tour_bound: bound + (2.0 - 4.0 / 3.0) * bridges as f64 + 2.0 * outside as f64,
        core_edges,
        removable_total: pr.clone().map(|p| p.removable.len()).sum(),
        tree_total: pr.clone().map(|p| p.tree.len()).sum(),
        pair_total: pr.map(|p| p.pairs.len()).sum(),
        pieces: pieces.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{build_instance, exact_optimum};
    use itertools::Itertools;

    fn g(n: usize, edges: &[(NodeId, NodeId)]) -> SimpleGraph {
        SimpleGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn cycle(n: usize) -> SimpleGraph {
        g(
            n,
            &(0..n as NodeId)
                .map(|i| (i, (i + 1) % n as NodeId))
                .collect::<Vec<_>>(),
        )
    }

    fn graphic(s: SimpleGraph) -> MetricInstance {
        build_instance(s, MetricKind::Graphic).unwrap()
    }

    #[test]
    fn heuristics_on_small_graphs() {
        let c4 = graphic(cycle(4));
        let t = mst_double_tour(&c4).unwrap();
        assert!(t.cost >= 4 && t.cost <= 6);
        assert_eq!(christofides(&c4).unwrap().cost, 4);

        let star = graphic(g(4, &[(0, 1), (0, 2), (0, 3)]));
        assert_eq!(mst_double_tour(&star).unwrap().cost, 6);
        assert_eq!(christofides(&star).unwrap().cost, 6);

        let p5 = graphic(g(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert_eq!(mst_double_tour(&p5).unwrap().cost, 8);
        assert_eq!(christofides(&p5).unwrap().cost, 8);
        assert_eq!(exact_optimum(&p5, 16).unwrap().cost, 8);

        let onetwo = build_instance(cycle(4), MetricKind::OneTwo).unwrap();
        assert!(matches!(christofides(&onetwo), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn christofides_on_petersen_like() {
        let edges: Vec<_> = (0..5)
            .map(|i| (i, (i + 1) % 5))
            .chain((0..5).map(|i| (i, i + 5)))
            .chain((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)))
            .collect();
        let inst = graphic(g(10, &edges));
        let opt = exact_optimum(&inst, 16).unwrap().cost;
        let c = christofides(&inst).unwrap().cost;
        assert!(2 * c <= 3 * opt);
        assert_eq!(opt, 11);
    }

    #[test]
    fn euler_uses_every_edge() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let walk = euler_circuit(5, &edges, 0);
        assert_eq!(walk.len(), 7);
        assert_eq!(walk.first(), walk.last());
    }

    #[test]
    fn bicomponents() {
        let bowtie = g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let bc = biconnected_components(&bowtie);
        assert_eq!(bc.components.len(), 2);
        assert_eq!(bc.articulation_points, vec![2]);
        let bc = biconnected_components(&cycle(6));
        assert_eq!(bc.components.len(), 1);
        assert!(bc.articulation_points.is_empty());
        let tree = g(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        let bc = biconnected_components(&tree);
        assert_eq!(bc.components.len(), 4);
        assert!(bc.components.iter().all(|c| c.len() == 1));
        assert_eq!(bc.articulation_points, vec![1, 3]);
    }

    #[test]
    fn pairing_examples() {
        let c4 = cycle(4);
        let p = removable_pairing(&c4, 0).unwrap();
        assert_eq!(p.removable.len(), 1);
        assert!(p.pairs.is_empty());
        let pieces = core_pairings(&c4).unwrap();
        let b = ms_cost_bound(&c4, &pieces).unwrap();
        assert!((b - 14.0 / 3.0).abs() < 1e-12);

        let k4 = g(4, &(0..4).tuple_combinations().collect::<Vec<_>>());
        let p = removable_pairing(&k4, 0).unwrap();
        assert!(p.removable.len() >= 3);
        assert!(!p.pairs.is_empty());
        assert_eq!(p.non_tree_count(&k4), 3);
        let pieces = core_pairings(&k4).unwrap();
        let b = ms_cost_bound(&k4, &pieces).unwrap();
        let r = p.removable.len() as f64;
        assert!((b - (8.0 - 2.0 / 3.0 * r)).abs() < 1e-12);
        assert!(b <= 6.0 + 1e-12);
    }

    #[test]
    fn pairing_rejects_non_biconnected() {
        let bowtie = g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert!(matches!(
            removable_pairing(&bowtie, 0),
            Err(Error::NotBiconnected(_))
        ));
        let path = g(3, &[(0, 1), (1, 2)]);
        assert!(removable_pairing(&path, 0).is_err());
    }

    #[test]
    fn coverage_mismatch_detected() {
        let bowtie = g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let mut pieces = core_pairings(&bowtie).unwrap();
        assert_eq!(pieces.len(), 2);
        pieces.pop();
        assert!(matches!(ms_cost_bound(&bowtie, &pieces), Err(Error::Coverage(_))));
    }

    #[test]
    fn two_core_strips_trees() {
        let lollipop = g(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(two_core(&lollipop), vec![0, 1, 2]);
    }

    #[test]
    fn ms_tour_bound_dominates_optimum() {
        // Two triangles joined by a bridge, with a pendant path.
        let h = g(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 3),
                (5, 6),
                (6, 7),
            ],
        );
        let r = ms_report(&h).unwrap();
        let opt = exact_optimum(&graphic(h.clone()), 16).unwrap().cost as f64;
        assert_eq!(r.core_edges, 7);
        assert!((r.tour_bound - (r.bound + 2.0 / 3.0 + 4.0)).abs() < 1e-12);
        assert!(r.tour_bound >= opt, "{} < {opt}", r.tour_bound);
        for n in 3..8 {
            let c = cycle(n);
            let opt = exact_optimum(&graphic(c.clone()), 16).unwrap().cost as f64;
            assert!(ms_report(&c).unwrap().tour_bound >= opt);
        }
    }
}
