use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid power-law parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("node cap exceeded: sequence needs {needed} nodes, cap is {cap}")]
    NodeCap { needed: u64, cap: u64 },

    #[error("graph is disconnected; graphic metric needs a connected graph")]
    Disconnected,

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("instance has {n} nodes, exact solver cap is {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("cycle cover does not match instance: {0}")]
    CoverMismatch(String),

    #[error("graph is not 2-vertex-connected: {0}")]
    NotBiconnected(String),

    #[error("pairing coverage mismatch: {0}")]
    Coverage(String),

    #[error("{id} is only valid for beta in {interval}, got {beta}")]
    OutOfValidity { id: String, interval: String, beta: f64 },

    #[error("no sign change of the difference on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("matching is not perfect: {0}")]
    NotPerfect(String),

    #[error("gadget constraint `{name}` violated: {detail}")]
    GadgetConstraint { name: String, detail: String },

    #[error("packing infeasible: {0}")]
    Infeasible(String),

    #[error("wrong instance kind: {0}")]
    KindMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
