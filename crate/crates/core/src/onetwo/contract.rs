use serde::{Deserialize, Serialize};

use super::patch::PatchState;
use super::solve_py;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::metric::{build_instance, tour_cost, MetricInstance, MetricKind, Tour};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractResult {
    pub tour: Tour,
    /// Contracted 1-edges between two degree-1 nodes.
    pub pairs: Vec<(NodeId, NodeId)>,
    /// Patch state of the residual instance, when it had three or more nodes.
    pub residual_state: Option<PatchState>,
}

/// Contracts every 1-edge whose endpoints both have degree 1, solves the
/// residual instance with the cover-patching pipeline, and walks each
/// contracted edge where its super-node sits in the residual tour.
///
/// Edges between two degree-1 nodes are isolated, so they form a matching
/// and the maximum matching among them is all of them.
pub fn contract12_tour(inst: &MetricInstance) -> Result<ContractResult> {
    if inst.kind() != MetricKind::OneTwo {
        return Err(Error::KindMismatch("contraction needs a onetwo instance".into()));
    }
    let g = inst.base();
    let n = g.node_count();
    let pairs: Vec<(NodeId, NodeId)> = g
        .edges()
        .filter(|&(u, v)| g.degree(u) == 1 && g.degree(v) == 1)
        .collect();
    let mut partner = vec![NodeId::MAX; n];
    for &(a, b) in &pairs {
        partner[a as usize] = b;
    }
    let keep: Vec<NodeId> = (0..n as NodeId)
        .filter(|&v| !pairs.iter().any(|&(_, b)| b == v))
        .collect();
    let (sub, map) = g.induced_subgraph(&keep);
    let residual = build_instance(sub, MetricKind::OneTwo)?;
    let (residual_state, rtour) = solve_py(&residual)?;
    let mut order = Vec::with_capacity(n);
    for &x in &rtour.order {
        let v = map[x as usize];
        order.push(v);
        if partner[v as usize] != NodeId::MAX {
            order.push(partner[v as usize]);
        }
    }
    Ok(ContractResult {
        tour: tour_cost(inst, &order)?,
        pairs,
        residual_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::metric::exact_optimum;
    use crate::onetwo::{min_cycle_cover, py_pipeline};

    fn inst(n: usize, edges: &[(NodeId, NodeId)]) -> MetricInstance {
        build_instance(
            SimpleGraph::from_edges(n, edges.iter().copied()).unwrap(),
            MetricKind::OneTwo,
        )
        .unwrap()
    }

    #[test]
    fn perfect_matching_of_eight() {
        let i = inst(8, &[(0, 1), (2, 3), (4, 5), (6, 7)]);
        let r = contract12_tour(&i).unwrap();
        assert_eq!(r.pairs.len(), 4);
        assert_eq!(r.tour.cost, 12);
        assert_eq!(exact_optimum(&i, 16).unwrap().cost, 12);
    }

    #[test]
    fn no_pairs_matches_pipeline() {
        let i = inst(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]);
        let r = contract12_tour(&i).unwrap();
        assert!(r.pairs.is_empty());
        let cover = min_cycle_cover(&i).unwrap();
        let (_, t) = py_pipeline(&i, &cover).unwrap();
        assert_eq!(r.tour, t);
    }

    #[test]
    fn tiny_residuals() {
        let i = inst(4, &[(0, 1), (2, 3)]);
        let r = contract12_tour(&i).unwrap();
        assert_eq!(r.tour.cost, 6);
        assert!(r.residual_state.is_none());
        let i = inst(3, &[(0, 1)]);
        assert_eq!(contract12_tour(&i).unwrap().tour.cost, 5);
    }
}
