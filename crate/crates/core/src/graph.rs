//! Graph containers: the sampled multigraph and its simple underlying graph,
//! plus the shared JSON file format.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PowerLawParams;

pub type NodeId = u32;

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate pairs collapse; self-loops
    /// and out-of-range ids are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u == v {
                return Err(Error::Parse(format!("self-loop at node {u}")));
            }
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::Parse(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Self {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Adds `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        assert!(u != v, "self-loop at node {u}");
        let list = &mut self.adj[u as usize];
        match list.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                list.insert(pos, v);
                let other = &mut self.adj[v as usize];
                let pos = other.binary_search(&u).unwrap_err();
                other.insert(pos, u);
                self.edge_count += 1;
                true
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u != v && self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start as NodeId);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `nodes`, relabeled `0..nodes.len()` in the given
    /// order. The returned mapping sends new ids to old ids.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> (SimpleGraph, Vec<NodeId>) {
        let mut index = vec![NodeId::MAX; self.node_count()];
        for (new, &old) in nodes.iter().enumerate() {
            index[old as usize] = new as NodeId;
        }
        let mut sub = SimpleGraph::new(nodes.len());
        for (new, &old) in nodes.iter().enumerate() {
            let list: Vec<NodeId> = self
                .neighbors(old)
                .iter()
                .filter_map(|&w| {
                    let m = index[w as usize];
                    (m != NodeId::MAX).then_some(m)
                })
                .collect();
            sub.edge_count += list.len();
            sub.adj[new] = list;
        }
        for list in &mut sub.adj {
            list.sort_unstable();
        }
        sub.edge_count /= 2;
        (sub, nodes.to_vec())
    }

    pub fn to_json(&self, params: Option<&PowerLawParams>) -> GraphJson {
        GraphJson {
            alpha: params.map(|p| p.alpha()),
            beta: params.map(|p| p.beta()),
            nodes: self.node_count(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            loops: Vec::new(),
            multiplicity: Vec::new(),
            assigned_degrees: None,
        }
    }
}

/// Multigraph with self-loops, as produced by the random-matching model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraph {
    pub(crate) assigned_degrees: Vec<u32>,
    /// Keyed by `(u, v)` with `u < v`.
    pub(crate) multiplicity: BTreeMap<(NodeId, NodeId), u32>,
    pub(crate) self_loops: BTreeMap<NodeId, u32>,
}

impl MultiGraph {
    pub fn new(assigned_degrees: Vec<u32>) -> Self {
        Self {
            assigned_degrees,
            ..Self::default()
        }
    }

    pub fn node_count(&self) -> usize {
        self.assigned_degrees.len()
    }

    pub fn assigned_degrees(&self) -> &[u32] {
        &self.assigned_degrees
    }

    pub fn multiplicities(&self) -> &BTreeMap<(NodeId, NodeId), u32> {
        &self.multiplicity
    }

    pub fn self_loops(&self) -> &BTreeMap<NodeId, u32> {
        &self.self_loops
    }

    /// Records one matched pair of copies.
    pub fn add_pair(&mut self, u: NodeId, v: NodeId) {
        if u == v {
            *self.self_loops.entry(u).or_insert(0) += 1;
        } else {
            let key = (u.min(v), u.max(v));
            *self.multiplicity.entry(key).or_insert(0) += 1;
        }
    }

    /// Number of matched copy pairs (edges counted with multiplicity, loops included).
    pub fn matched_pairs(&self) -> u64 {
        self.multiplicity.values().map(|&c| u64::from(c)).sum::<u64>()
            + self.self_loops.values().map(|&c| u64::from(c)).sum::<u64>()
    }

    /// Realized degrees: multiplicities at v plus twice its loops.
    pub fn realized_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.node_count()];
        for (&(u, v), &c) in &self.multiplicity {
            deg[u as usize] += c;
            deg[v as usize] += c;
        }
        for (&v, &c) in &self.self_loops {
            deg[v as usize] += 2 * c;
        }
        deg
    }

    pub fn to_json(&self, params: Option<&PowerLawParams>) -> GraphJson {
        GraphJson {
            alpha: params.map(|p| p.alpha()),
            beta: params.map(|p| p.beta()),
            nodes: self.node_count(),
            edges: self.multiplicity.keys().map(|&(u, v)| [u, v]).collect(),
            loops: self.self_loops.iter().map(|(&v, &c)| [v, c]).collect(),
            multiplicity: self
                .multiplicity
                .iter()
                .filter(|(_, &c)| c > 1)
                .map(|(&(u, v), &c)| [u, v, c])
                .collect(),
            assigned_degrees: Some(self.assigned_degrees.clone()),
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Self> {
        let degrees = doc.assigned_degrees.clone().unwrap_or_else(|| vec![0; doc.nodes]);
        if degrees.len() != doc.nodes {
            return Err(Error::Parse("assigned_degrees length differs from nodes".into()));
        }
        let mut g = MultiGraph::new(degrees);
        for &[u, v] in &doc.edges {
            check_pair(doc.nodes, u, v)?;
            g.multiplicity.insert((u.min(v), u.max(v)), 1);
        }
        for &[u, v, c] in &doc.multiplicity {
            check_pair(doc.nodes, u, v)?;
            match g.multiplicity.get_mut(&(u.min(v), u.max(v))) {
                Some(slot) => *slot = c,
                None => return Err(Error::Parse(format!("multiplicity for absent edge ({u}, {v})"))),
            }
        }
        for &[v, c] in &doc.loops {
            if v as usize >= doc.nodes {
                return Err(Error::Parse(format!("loop at out-of-range node {v}")));
            }
            g.self_loops.insert(v, c);
        }
        if doc.assigned_degrees.is_none() {
            g.assigned_degrees = g.realized_degrees();
        }
        Ok(g)
    }
}

fn check_pair(nodes: usize, u: NodeId, v: NodeId) -> Result<()> {
    if u == v || u as usize >= nodes || v as usize >= nodes {
        return Err(Error::Parse(format!("bad edge ({u}, {v}) for {nodes} nodes")));
    }
    Ok(())
}

/// On-disk graph document. Pairs are 0-based and sorted lexicographically;
/// `multiplicity` lists only pairs joined by more than one edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub nodes: usize,
    pub edges: Vec<[NodeId; 2]>,
    #[serde(default)]
    pub loops: Vec<[NodeId; 2]>,
    #[serde(default)]
    pub multiplicity: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assigned_degrees: Option<Vec<u32>>,
}

impl GraphJson {
    /// The simple underlying graph (loops and multiplicities dropped).
    pub fn to_simple(&self) -> Result<SimpleGraph> {
        SimpleGraph::from_edges(self.nodes, self.edges.iter().map(|&[u, v]| (u, v)))
    }

    pub fn params(&self) -> Option<PowerLawParams> {
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => PowerLawParams::new(a, b).ok(),
            _ => None,
        }
    }
}
