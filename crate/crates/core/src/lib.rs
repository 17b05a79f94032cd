//! Traveling-salesman experiments on (α,β) power-law graphs.
//!
//! Degree sequences and the random-matching model, graphic and (1,2)
//! metrics with an exact small-instance oracle, approximation algorithms,
//! closed-form ratio bounds, and the gadget constructions behind the
//! inapproximability bounds.

pub mod bounds;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod graphic;
pub mod matching;
pub mod metric;
pub mod model;
pub mod montecarlo;
pub mod onetwo;
pub mod random;
pub mod zeta;

pub use bounds::{analytic_tour_lower_bound, crossover, emit_curve, evaluate_bound, BoundId, RatioCurve};
pub use error::{Error, Result};
pub use gadgets::{
    build_hybrid_instance, build_tsp_gadget_graph, embed_simple, even_degree_packing, hardness_gap,
    matching_profile, EmbedMode, GadgetDefinition, GadgetGraph, HardnessGap, MatchingProfile, PackingPlan,
};
pub use graph::{GraphJson, MultiGraph, NodeId, SimpleGraph};
pub use graphic::{
    biconnected_components, christofides, core_pairings, ms_cost_bound, ms_report, mst_double_tour,
    removable_pairing, Biconnected, MsReport, RemovablePairing,
};
pub use metric::{
    build_instance, exact_optimum, instance_lower_bound, tour_cost, InstanceLowerBound, MetricInstance,
    MetricKind, Tour, DEFAULT_EXACT_CAP,
};
pub use model::{
    asymptotic_counts, degree_sequence, interval_volume, node_cap_from_env, volume_upper_bound,
    DegreeSequence, PowerLawParams, DEFAULT_NODE_CAP, NODE_CAP_ENV,
};
pub use montecarlo::{estimate_a_values, run_stats, StatsReport, Summary};
pub use onetwo::{contract12_tour, cover_diagnostics, min_cycle_cover, py_pipeline, CycleCover, PatchState};
pub use random::{a_values, largest_component, neighbor_stats, sample_plg, simplify, NeighborStats};
pub use zeta::zeta;
