//! (1,2)-TSP: cycle covers, cover patching, degree-1 contraction.

mod contract;
mod cover;
mod patch;

pub use contract::{contract12_tour, ContractResult};
pub use cover::{max_two_matching, min_cycle_cover, CycleCover};
pub use patch::{cover_diagnostics, patch_state, py_pipeline, Component, Diagnostics, PatchState};

use crate::error::Result;
use crate::metric::{tour_cost, MetricInstance, Tour};

/// Cover plus patching, or the identity order below three nodes.
pub fn solve_py(inst: &MetricInstance) -> Result<(Option<PatchState>, Tour)> {
    let n = inst.node_count();
    if n < 3 {
        let order: Vec<_> = (0..n as crate::graph::NodeId).collect();
        return Ok((None, tour_cost(inst, &order)?));
    }
    let cover = min_cycle_cover(inst)?;
    let (state, tour) = py_pipeline(inst, &cover)?;
    Ok((Some(state), tour))
}
