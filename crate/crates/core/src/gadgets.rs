//! Reduction gadgets for the (1,2)-TSP hardness bounds on power-law graphs.
//!
//! The subcubic instance is a ring of units. A unit is either a single
//! parity gadget (one per 2-equation) or a clause block (three per
//! 3-equation): three parity gadgets wired through eight degree-3 extra
//! nodes, two of which are then replaced by K4 copies so the whole graph
//! has a perfect matching. Each unit exposes two in-ports and two
//! out-ports; unit `i`'s out-ports are joined to unit `i+1`'s in-ports.
//!
//! Internal wiring comes from a [`GadgetDefinition`], which can be loaded
//! from JSON and is validated before use. The built graph is certified by
//! its degree histogram and by the edge-type profile of its matching.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bounds::{lb_packing_scale, lb_simple_scale};
use crate::error::{Error, Result};
use crate::graph::{NodeId, SimpleGraph};
use crate::model::snapped_floor;
use crate::zeta::zeta;

/// Node-count multipliers of the target instance, per unit of `v`.
pub const NODES_PER_V: usize = 708;
pub const HISTOGRAM_PER_V: [usize; 3] = [156, 516, 36];
pub const PROFILE_PER_V: [usize; 4] = [156, 174, 12, 12];

const TWO_EQ_PER_V: usize = 60;
const THREE_EQ_PER_V: usize = 2;
const VARS_PER_V: usize = 42;
const CLAUSES_PER_THREE_EQ: usize = 3;

fn constraint(name: &str, detail: impl Into<String>) -> Error {
    Error::GadgetConstraint {
        name: name.to_string(),
        detail: detail.into(),
    }
}

fn check_v(v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Domain("gadget scale v must be >= 1".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Hybrid instances

/// Mod-2 system with two- and three-variable equations; every right-hand
/// side is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridInstance {
    pub variables: usize,
    pub two_equations: Vec<[usize; 2]>,
    pub three_equations: Vec<[usize; 3]>,
}

impl HybridInstance {
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.variables];
        for eq in &self.two_equations {
            for &x in eq {
                occ[x] += 1;
            }
        }
        for eq in &self.three_equations {
            for &x in eq {
                occ[x] += 1;
            }
        }
        occ
    }
}

/// A syntactically valid instance with `42v` variables, each occurring three
/// times, `60v` two-equations and `2v` three-equations.
pub fn build_hybrid_instance(v: usize) -> Result<HybridInstance> {
    check_v(v)?;
    let n = VARS_PER_V * v;
    // Round-robin occurrence list; consecutive entries are distinct.
    let occ: Vec<usize> = (0..3 * n).map(|i| i % n).collect();
    let (three, two) = occ.split_at(3 * THREE_EQ_PER_V * v);
    Ok(HybridInstance {
        variables: n,
        three_equations: three.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        two_equations: two.chunks(2).map(|c| [c[0], c[1]]).collect(),
    })
}

// ---------------------------------------------------------------------------
// Definition file

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityTemplate {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub in_ports: [String; 2],
    pub out_ports: [String; 2],
    pub matching: Vec<[String; 2]>,
}

/// Parity gadgets inside a clause block are referenced as `p<k>.<node>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseTemplate {
    pub parity_gadgets: usize,
    pub extra_nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub in_ports: [String; 2],
    pub out_ports: [String; 2],
    pub k4_sites: Vec<String>,
    pub matching: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetDefinition {
    pub parity: ParityTemplate,
    pub clause: ClauseTemplate,
}

/// Extra nodes every clause block must name.
pub const CLAUSE_ROLES: [&str; 6] = ["s_or", "s_mid", "e_or", "c1", "c2", "c3"];

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

impl GadgetDefinition {
    pub fn canonical() -> Self {
        let parity = ParityTemplate {
            nodes: ["a1", "a2", "b1", "b2", "x", "y", "t1", "t2"]
                .map(String::from)
                .to_vec(),
            edges: vec![
                pair("a1", "t1"),
                pair("t1", "b1"),
                pair("a2", "t2"),
                pair("t2", "b2"),
                pair("x", "a1"),
                pair("x", "a2"),
                pair("x", "y"),
                pair("y", "b1"),
                pair("y", "b2"),
            ],
            in_ports: pair("a1", "a2"),
            out_ports: pair("b1", "b2"),
            matching: vec![
                pair("t1", "a1"),
                pair("t2", "b2"),
                pair("x", "a2"),
                pair("y", "b1"),
            ],
        };
        let clause = ClauseTemplate {
            parity_gadgets: 3,
            extra_nodes: ["s_or", "s_mid", "e_or", "c1", "c2", "c3", "h1", "h2"]
                .map(String::from)
                .to_vec(),
            edges: vec![
                pair("p0.b1", "s_or"),
                pair("p1.a1", "s_or"),
                pair("s_or", "s_mid"),
                pair("p1.b2", "e_or"),
                pair("p2.a2", "e_or"),
                pair("e_or", "s_mid"),
                pair("s_mid", "c3"),
                pair("p0.b2", "c1"),
                pair("c1", "h1"),
                pair("c1", "c2"),
                pair("c2", "h2"),
                pair("c2", "p1.a2"),
                pair("c3", "p1.b1"),
                pair("c3", "h1"),
                pair("h1", "h2"),
                pair("h2", "p2.a1"),
            ],
            in_ports: pair("p0.a1", "p0.a2"),
            out_ports: pair("p2.b1", "p2.b2"),
            k4_sites: vec!["s_or".into(), "e_or".into()],
            matching: vec![pair("s_mid", "c3"), pair("c1", "c2"), pair("h1", "h2")],
        };
        GadgetDefinition { parity, clause }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let def: GadgetDefinition =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("gadget definition: {e}")))?;
        def.validate()?;
        Ok(def)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition serializes")
    }

    /// Checks every structural constraint; the error names the first one
    /// that fails.
    pub fn validate(&self) -> Result<()> {
        let p = &self.parity;
        let index = name_index(&p.nodes, "parity_nodes")?;
        if p.nodes.len() != 8 {
            return Err(constraint(
                "parity_nodes",
                format!("parity gadget needs 8 nodes, has {}", p.nodes.len()),
            ));
        }
        let internal = template_degrees(&p.edges, &index, "parity_edges")?;
        let ports: Vec<&String> = p.in_ports.iter().chain(&p.out_ports).collect();
        let port_set: BTreeSet<&String> = ports.iter().copied().collect();
        if port_set.len() != 4 || ports.iter().any(|n| !index.contains_key(n.as_str())) {
            return Err(constraint("parity_ports", "need four distinct port nodes"));
        }
        // Ports take one edge from outside.
        let context: Vec<usize> = p
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| internal[i] + usize::from(port_set.contains(n)))
            .collect();
        if let Some(i) = context.iter().position(|&d| !(2..=3).contains(&d)) {
            return Err(constraint(
                "parity_degree",
                format!("node {} has degree {} in context", p.nodes[i], context[i]),
            ));
        }
        let types = matching_types(&p.matching, &p.edges, &index, &context, "parity_matching")?;
        if types.len() != 4
            || types.iter().filter(|&&t| t == (2, 3)).count() != 2
            || types.iter().filter(|&&t| t == (3, 3)).count() != 2
        {
            return Err(constraint(
                "parity_matching",
                format!("expected two (2,3) and two (3,3) edges, got {types:?}"),
            ));
        }

        let c = &self.clause;
        if c.parity_gadgets == 0 {
            return Err(constraint("clause_gadgets", "clause block needs parity gadgets"));
        }
        let extra = name_index(&c.extra_nodes, "clause_extra_nodes")?;
        for role in CLAUSE_ROLES {
            if !extra.contains_key(role) {
                return Err(constraint(
                    "clause_extra_nodes",
                    format!("missing extra node {role}"),
                ));
            }
        }
        let mut extra_deg = vec![0usize; c.extra_nodes.len()];
        let mut port_use: BTreeMap<(usize, String), usize> = BTreeMap::new();
        for k in 0..c.parity_gadgets {
            for port in &ports {
                port_use.insert((k, (*port).clone()), 0);
            }
        }
        let mut seen = BTreeSet::new();
        let touch = |name: &str,
                     extra_deg: &mut Vec<usize>,
                     port_use: &mut BTreeMap<(usize, String), usize>|
         -> Result<()> {
            match resolve(name, &extra, &index, c.parity_gadgets)? {
                ClauseRef::Extra(i) => extra_deg[i] += 1,
                ClauseRef::Parity(k, node) => {
                    let slot = port_use
                        .get_mut(&(k, node.clone()))
                        .ok_or_else(|| constraint("port_usage", format!("{name} is not a parity port")))?;
                    *slot += 1;
                }
            }
            Ok(())
        };
        for [a, b] in &c.edges {
            if a == b || !seen.insert(ordered(a, b)) {
                return Err(constraint(
                    "clause_edges",
                    format!("bad or repeated edge {a}-{b}"),
                ));
            }
            touch(a, &mut extra_deg, &mut port_use)?;
            touch(b, &mut extra_deg, &mut port_use)?;
        }
        for name in c.in_ports.iter().chain(&c.out_ports) {
            touch(name, &mut extra_deg, &mut port_use)?;
        }
        if let Some(((k, node), n)) = port_use.iter().find(|(_, &n)| n != 1) {
            return Err(constraint(
                "port_usage",
                format!("p{k}.{node} is used {n} times, expected once"),
            ));
        }
        if let Some(i) = extra_deg.iter().position(|&d| d != 3) {
            return Err(constraint(
                "clause_degree",
                format!("extra node {} has degree {}", c.extra_nodes[i], extra_deg[i]),
            ));
        }
        let sites: BTreeSet<&String> = c.k4_sites.iter().collect();
        if c.k4_sites.len() != 2 || sites.len() != 2 || sites.iter().any(|s| !extra.contains_key(s.as_str()))
        {
            return Err(constraint("k4_sites", "need two distinct extra nodes"));
        }
        let mut covered = BTreeSet::new();
        for [a, b] in &c.matching {
            let ok = extra.contains_key(a.as_str())
                && extra.contains_key(b.as_str())
                && seen.contains(&ordered(a, b))
                && covered.insert(a.clone())
                && covered.insert(b.clone());
            if !ok {
                return Err(constraint(
                    "clause_matching",
                    format!("{a}-{b} is not a usable matching edge"),
                ));
            }
        }
        let expect: BTreeSet<String> = c
            .extra_nodes
            .iter()
            .filter(|n| !sites.contains(n))
            .cloned()
            .collect();
        if covered != expect {
            return Err(constraint(
                "clause_matching",
                "matching must cover exactly the extra nodes that are not K4 sites",
            ));
        }
        Ok(())
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn name_index<'a>(names: &'a [String], what: &str) -> Result<HashMap<&'a str, usize>> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if n.contains('.') || index.insert(n.as_str(), i).is_some() {
            return Err(constraint(
                what,
                format!("node name `{n}` repeated or contains '.'"),
            ));
        }
    }
    Ok(index)
}

fn template_degrees(edges: &[[String; 2]], index: &HashMap<&str, usize>, what: &str) -> Result<Vec<usize>> {
    let mut deg = vec![0; index.len()];
    let mut seen = BTreeSet::new();
    for [a, b] in edges {
        let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
            return Err(constraint(what, format!("unknown endpoint in {a}-{b}")));
        };
        if i == j || !seen.insert((i.min(j), i.max(j))) {
            return Err(constraint(what, format!("bad or repeated edge {a}-{b}")));
        }
        deg[i] += 1;
        deg[j] += 1;
    }
    Ok(deg)
}

fn matching_types(
    matching: &[[String; 2]],
    edges: &[[String; 2]],
    index: &HashMap<&str, usize>,
    degree: &[usize],
    what: &str,
) -> Result<Vec<(usize, usize)>> {
    let edge_set: BTreeSet<(String, String)> = edges.iter().map(|[a, b]| ordered(a, b)).collect();
    let mut covered = BTreeSet::new();
    let mut types = Vec::new();
    for [a, b] in matching {
        let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
            return Err(constraint(what, format!("unknown endpoint in {a}-{b}")));
        };
        if !edge_set.contains(&ordered(a, b)) || !covered.insert(i) || !covered.insert(j) {
            return Err(constraint(what, format!("{a}-{b} is not a usable matching edge")));
        }
        types.push((degree[i].min(degree[j]), degree[i].max(degree[j])));
    }
    if covered.len() != index.len() {
        return Err(constraint(what, "matching is not perfect"));
    }
    Ok(types)
}

enum ClauseRef {
    Extra(usize),
    Parity(usize, String),
}

fn resolve(
    name: &str,
    extra: &HashMap<&str, usize>,
    parity: &HashMap<&str, usize>,
    gadgets: usize,
) -> Result<ClauseRef> {
    if let Some(&i) = extra.get(name) {
        return Ok(ClauseRef::Extra(i));
    }
    let bad = || constraint("clause_edges", format!("cannot resolve node `{name}`"));
    let (head, node) = name.split_once('.').ok_or_else(bad)?;
    let k: usize = head
        .strip_prefix('p')
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    if k >= gadgets || !parity.contains_key(node) {
        return Err(bad());
    }
    Ok(ClauseRef::Parity(k, node.to_string()))
}

// ---------------------------------------------------------------------------
// Built graph

#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: SimpleGraph,
    /// `parity:<node>`, `clause:<extra>` or `k4:<site>:<k>`.
    pub roles: Vec<String>,
    /// `eq2:<i>` or `eq3:<j>/clause<c>`.
    pub source_units: Vec<String>,
    /// Perfect matching assembled from the template matchings.
    pub canonical_matching: Vec<(NodeId, NodeId)>,
}

impl GadgetGraph {
    /// Counts of nodes by degree.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for v in 0..self.graph.node_count() {
            *h.entry(self.graph.degree(v as NodeId)).or_insert(0) += 1;
        }
        h
    }
}

struct Builder {
    graph_edges: Vec<(NodeId, NodeId)>,
    roles: Vec<String>,
    units: Vec<String>,
    matching: Vec<(NodeId, NodeId)>,
}

impl Builder {
    fn node(&mut self, role: String, unit: &str) -> NodeId {
        self.roles.push(role);
        self.units.push(unit.to_string());
        (self.roles.len() - 1) as NodeId
    }

    fn parity(&mut self, t: &ParityTemplate, unit: &str) -> HashMap<String, NodeId> {
        let ids: HashMap<String, NodeId> = t
            .nodes
            .iter()
            .map(|n| (n.clone(), self.node(format!("parity:{n}"), unit)))
            .collect();
        for [a, b] in &t.edges {
            self.graph_edges.push((ids[a], ids[b]));
        }
        for [a, b] in &t.matching {
            self.matching.push((ids[a], ids[b]));
        }
        ids
    }

    /// Returns in-ports and out-ports of the new block.
    fn clause(&mut self, def: &GadgetDefinition, unit: &str) -> ([NodeId; 2], [NodeId; 2]) {
        let c = &def.clause;
        let gadgets: Vec<HashMap<String, NodeId>> = (0..c.parity_gadgets)
            .map(|_| self.parity(&def.parity, unit))
            .collect();
        let sites: BTreeSet<&String> = c.k4_sites.iter().collect();
        let mut extra: HashMap<&str, NodeId> = HashMap::new();
        // A K4 site's former edges go to k0, k1, k2 in edge-list order.
        let mut k4: HashMap<&str, [NodeId; 4]> = HashMap::new();
        for name in &c.extra_nodes {
            if sites.contains(name) {
                let ks = [0, 1, 2, 3].map(|k| self.node(format!("k4:{name}:{k}"), unit));
                for a in 0..4 {
                    for b in a + 1..4 {
                        self.graph_edges.push((ks[a], ks[b]));
                    }
                }
                self.matching.push((ks[0], ks[1]));
                self.matching.push((ks[2], ks[3]));
                k4.insert(name, ks);
            } else {
                extra.insert(name, self.node(format!("clause:{name}"), unit));
            }
        }
        let mut k4_next: HashMap<&str, usize> = HashMap::new();
        let mut lookup = |name: &str| -> NodeId {
            if let Some(&id) = extra.get(name) {
                return id;
            }
            if let Some(ks) = k4.get(name) {
                let slot = k4_next.entry(k4.get_key_value(name).unwrap().0).or_insert(0);
                *slot += 1;
                return ks[*slot - 1];
            }
            let (head, node) = name.split_once('.').expect("validated reference");
            let k: usize = head[1..].parse().expect("validated reference");
            gadgets[k][node]
        };
        let mut edges = Vec::new();
        for [a, b] in &c.edges {
            edges.push((lookup(a), lookup(b)));
        }
        let ins = [lookup(&c.in_ports[0]), lookup(&c.in_ports[1])];
        let outs = [lookup(&c.out_ports[0]), lookup(&c.out_ports[1])];
        self.graph_edges.extend(edges);
        for [a, b] in &c.matching {
            self.matching.push((extra[a.as_str()], extra[b.as_str()]));
        }
        (ins, outs)
    }
}

/// The matching-ready subcubic instance for scale `v`, built from the
/// canonical templates.
pub fn build_tsp_gadget_graph(v: usize) -> Result<GadgetGraph> {
    build_tsp_gadget_graph_with(&GadgetDefinition::canonical(), v)
}

pub fn build_tsp_gadget_graph_with(def: &GadgetDefinition, v: usize) -> Result<GadgetGraph> {
    check_v(v)?;
    def.validate()?;
    let mut b = Builder {
        graph_edges: Vec::new(),
        roles: Vec::new(),
        units: Vec::new(),
        matching: Vec::new(),
    };
    let mut ports: Vec<([NodeId; 2], [NodeId; 2])> = Vec::new();
    for i in 0..TWO_EQ_PER_V * v {
        let ids = b.parity(&def.parity, &format!("eq2:{i}"));
        let p = &def.parity;
        ports.push((
            [ids[&p.in_ports[0]], ids[&p.in_ports[1]]],
            [ids[&p.out_ports[0]], ids[&p.out_ports[1]]],
        ));
    }
    for j in 0..THREE_EQ_PER_V * v {
        for c in 0..CLAUSES_PER_THREE_EQ {
            ports.push(b.clause(def, &format!("eq3:{j}/clause{c}")));
        }
    }
    for i in 0..ports.len() {
        let next = (i + 1) % ports.len();
        for k in 0..2 {
            b.graph_edges.push((ports[i].1[k], ports[next].0[k]));
        }
    }
    let n = b.roles.len();
    let mut graph = SimpleGraph::new(n);
    for &(x, y) in &b.graph_edges {
        if x == y || !graph.add_edge(x, y) {
            return Err(constraint(
                "simple_graph",
                format!("edge {x}-{y} is a loop or repeated"),
            ));
        }
    }
    let gg = GadgetGraph {
        graph,
        roles: b.roles,
        source_units: b.units,
        canonical_matching: b.matching,
    };
    certify_histogram(&gg, v)?;
    Ok(gg)
}

fn certify_histogram(g: &GadgetGraph, v: usize) -> Result<()> {
    let n = g.graph.node_count();
    if n != NODES_PER_V * v {
        return Err(constraint(
            "histogram",
            format!("{n} nodes, expected {}", NODES_PER_V * v),
        ));
    }
    let h = g.histogram();
    let expect: BTreeMap<usize, usize> = (2..=4).zip(HISTOGRAM_PER_V.map(|c| c * v)).collect();
    if h != expect {
        return Err(constraint(
            "histogram",
            format!("degree histogram {h:?}, expected {expect:?}"),
        ));
    }
    Ok(())
}

/// Matching edges counted by the degrees of their endpoints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingProfile {
    pub t23: usize,
    pub t33: usize,
    pub t34: usize,
    pub t44: usize,
}

impl MatchingProfile {
    pub fn total(&self) -> usize {
        self.t23 + self.t33 + self.t34 + self.t44
    }

    pub fn scaled(v: usize) -> Self {
        let [a, b, c, d] = PROFILE_PER_V.map(|x| x * v);
        MatchingProfile {
            t23: a,
            t33: b,
            t34: c,
            t44: d,
        }
    }

    /// Edge degree pairs `(d(u), d(v))`, `d(u) ≤ d(v)`, low degrees first.
    pub fn edge_types(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.total());
        out.extend(std::iter::repeat_n((2, 3), self.t23));
        out.extend(std::iter::repeat_n((3, 3), self.t33));
        out.extend(std::iter::repeat_n((3, 4), self.t34));
        out.extend(std::iter::repeat_n((4, 4), self.t44));
        out
    }
}

pub fn matching_profile(g: &GadgetGraph, matching: &[(NodeId, NodeId)]) -> Result<MatchingProfile> {
    let n = g.graph.node_count();
    let mut covered = vec![false; n];
    let mut p = MatchingProfile::default();
    for &(u, w) in matching {
        if !g.graph.has_edge(u, w) {
            return Err(Error::NotPerfect(format!("{u}-{w} is not an edge")));
        }
        for x in [u, w] {
            if std::mem::replace(&mut covered[x as usize], true) {
                return Err(Error::NotPerfect(format!("node {x} matched twice")));
            }
        }
        let (a, b) = {
            let (du, dw) = (g.graph.degree(u), g.graph.degree(w));
            (du.min(dw), du.max(dw))
        };
        match (a, b) {
            (2, 3) => p.t23 += 1,
            (3, 3) => p.t33 += 1,
            (3, 4) => p.t34 += 1,
            (4, 4) => p.t44 += 1,
            other => return Err(Error::NotPerfect(format!("unexpected edge type {other:?}"))),
        }
    }
    if let Some(x) = covered.iter().position(|&c| !c) {
        return Err(Error::NotPerfect(format!("node {x} is unmatched")));
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Embedding into a power-law degree sequence

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleEmbedding {
    pub alpha_min: f64,
    /// 2, 3 or 4: which `k^β·c_k·v` term is largest.
    pub binding_degree: u32,
    pub beta_star: f64,
}

/// Least `α` with `e^α ≥ max{2^β·156v, 3^β·516v, 4^β·36v}`.
pub fn embed_simple(v: usize, beta: f64) -> Result<SimpleEmbedding> {
    check_v(v)?;
    if !(beta > 1.0) {
        return Err(Error::Domain(format!("beta must be > 1, got {beta}")));
    }
    let vf = v as f64;
    let terms = [
        (2, 2f64.powf(beta) * 156.0 * vf),
        (3, 3f64.powf(beta) * 516.0 * vf),
        (4, 4f64.powf(beta) * 36.0 * vf),
    ];
    let (deg, best) = terms
        .iter()
        .copied()
        .fold((0, f64::NEG_INFINITY), |acc, t| if t.1 > acc.1 { t } else { acc });
    Ok(SimpleEmbedding {
        alpha_min: best.ln(),
        binding_degree: deg,
        beta_star: crate::bounds::beta_star(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackedEdge {
    pub du: u64,
    pub dv: u64,
    /// Slot `i` occupies degrees `[2i, 2i+1]`.
    pub slot: u64,
    pub mu: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingPlan {
    pub beta: f64,
    /// Least α meeting the capacity inequality.
    pub alpha_min: f64,
    /// α actually used by the greedy fill, after any 1% increases.
    pub alpha: f64,
    pub retries: u32,
    pub edges: Vec<PackedEdge>,
    /// `(2i, 2i+1)` for every slot that received an edge.
    pub occupied_slots: Vec<(u64, u64)>,
}

/// Left side of the capacity inequality at `α`.
pub fn packing_capacity(alpha: f64, beta: f64) -> f64 {
    let e = alpha.exp();
    e / (3f64.powf(beta - 1.0) * 2.0 * (beta - 1.0)) - 0.5 * (alpha / beta).exp() + 0.5
}

fn slot_capacity(scale: f64, beta: f64, slot: u64) -> u64 {
    snapped_floor(scale / ((2 * slot + 1) as f64).powf(beta)) as u64
}

fn packing_alpha(beta: f64, target: f64) -> f64 {
    if packing_capacity(0.0, beta) >= target {
        return 0.0;
    }
    // Capacity dips then grows, so everything above the crossing qualifies.
    let mut hi = 1.0;
    while packing_capacity(hi, beta) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if packing_capacity(mid, beta) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn greedy_fill(types: &[(u64, u64)], alpha: f64, beta: f64) -> Option<Vec<PackedEdge>> {
    let scale = alpha.exp();
    let max_degree = snapped_floor((alpha / beta).exp()) as u64;
    let mut used: BTreeMap<u64, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(types.len());
    for &(du, dv) in types {
        let mut slot = du.div_ceil(2);
        loop {
            if 2 * slot + 1 > max_degree {
                return None;
            }
            let u = used.entry(slot).or_insert(0);
            if *u < slot_capacity(scale, beta, slot) {
                *u += 1;
                break;
            }
            slot += 1;
        }
        out.push(PackedEdge {
            du,
            dv,
            slot,
            mu: 2 * slot + 1 - du,
        });
    }
    Some(out)
}

/// Assigns multiplicities to the matching edges so inflated degrees land in
/// `[2i, 2i+1]` slots, filling the smallest slot first.
pub fn even_degree_packing(v: usize, beta: f64, profile: &MatchingProfile) -> Result<PackingPlan> {
    if !(beta > 1.0) {
        return Err(Error::Domain(format!("beta must be > 1, got {beta}")));
    }
    if profile.total() != 0 && *profile != MatchingProfile::scaled(v) {
        return Err(Error::Domain(format!(
            "profile {profile:?} does not match scale v = {v}"
        )));
    }
    let types = profile.edge_types();
    let alpha_min = packing_alpha(beta, types.len() as f64);
    let mut alpha = alpha_min;
    for retries in 0..=10 {
        if let Some(edges) = greedy_fill(&types, alpha, beta) {
            let slots: BTreeSet<u64> = edges.iter().map(|e| e.slot).collect();
            let plan = PackingPlan {
                beta,
                alpha_min,
                alpha,
                retries,
                edges,
                occupied_slots: slots.into_iter().map(|i| (2 * i, 2 * i + 1)).collect(),
            };
            plan.audit()?;
            return Ok(plan);
        }
        alpha *= 1.01;
    }
    Err(Error::Infeasible(format!(
        "greedy fill failed for beta {beta} up to alpha {alpha}"
    )))
}

impl PackingPlan {
    pub fn total_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges per slot next to the slot's capacity `floor(e^α/(2i+1)^β)`.
    pub fn slot_usage(&self) -> Vec<(u64, u64, u64)> {
        let mut used: BTreeMap<u64, u64> = BTreeMap::new();
        for e in &self.edges {
            *used.entry(e.slot).or_insert(0) += 1;
        }
        let scale = self.alpha.exp();
        used.into_iter()
            .map(|(i, n)| (i, n, slot_capacity(scale, self.beta, i)))
            .collect()
    }

    /// Parity rule, degree-slot placement and per-slot capacity.
    pub fn audit(&self) -> Result<()> {
        let max_degree = snapped_floor((self.alpha / self.beta).exp()) as u64;
        for e in &self.edges {
            let inflated_u = e.du + e.mu - 1;
            let inflated_v = e.dv + e.mu - 1;
            if e.mu == 0 || e.mu % 2 != (e.du + 1) % 2 {
                return Err(constraint(
                    "packing_parity",
                    format!("{e:?}: mu must be >= 1 and = d(u)-1 mod 2"),
                ));
            }
            if inflated_u != 2 * e.slot || !(inflated_v == 2 * e.slot || inflated_v == 2 * e.slot + 1) {
                return Err(constraint(
                    "packing_parity",
                    format!("{e:?}: inflated degrees leave the slot"),
                ));
            }
            if 2 * e.slot + 1 > max_degree {
                return Err(constraint(
                    "packing_capacity",
                    format!("{e:?}: slot above max degree {max_degree}"),
                ));
            }
        }
        for (slot, used, cap) in self.slot_usage() {
            if used > cap {
                return Err(constraint(
                    "packing_capacity",
                    format!("slot {slot} holds {used} edges, capacity {cap}"),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gap between yes and no instances

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedMode {
    Simple,
    Packing,
}

impl std::str::FromStr for EmbedMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(EmbedMode::Simple),
            "packing" => Ok(EmbedMode::Packing),
            _ => Err(Error::Parse(format!("unknown embedding mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardnessGap {
    pub scale: f64,
    pub filler_nodes: f64,
    pub yes_cost: f64,
    pub no_cost: f64,
    pub ratio: f64,
    /// `v → ∞` limit of `ratio`.
    pub limit: f64,
}

/// Tour-cost thresholds for the embedded instance, `O(1)` terms dropped
/// except the three joining 2-edges in packing mode.
pub fn hardness_gap(v: usize, beta: f64, mode: EmbedMode) -> Result<HardnessGap> {
    check_v(v)?;
    if !(beta > 1.0) {
        return Err(Error::Domain(format!("beta must be > 1, got {beta}")));
    }
    let z = zeta(beta)?;
    let vf = v as f64;
    let (d, joins) = match mode {
        EmbedMode::Simple => (lb_simple_scale(beta), 0.0),
        EmbedMode::Packing => (lb_packing_scale(beta), 3.0),
    };
    let scale = d * vf;
    let core = NODES_PER_V as f64 * vf;
    let filler = (z - 1.0) * scale - core;
    let yes = core + filler + 1.5 * scale + joins;
    let no = yes + vf;
    Ok(HardnessGap {
        scale,
        filler_nodes: filler,
        yes_cost: yes,
        no_cost: no,
        ratio: no / yes,
        limit: (z + 0.5 + 1.0 / d) / (z + 0.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hybrid_counts() {
        let h = build_hybrid_instance(1).unwrap();
        assert_eq!(
            (h.variables, h.two_equations.len(), h.three_equations.len()),
            (42, 60, 2)
        );
        let h = build_hybrid_instance(3).unwrap();
        assert_eq!(
            (h.variables, h.two_equations.len(), h.three_equations.len()),
            (126, 180, 6)
        );
        assert!(h.occurrences().iter().all(|&c| c == 3));
        assert!(h.two_equations.iter().all(|e| e[0] != e[1]));
        assert!(build_hybrid_instance(0).is_err());
    }

    #[test]
    fn canonical_definition_validates() {
        let def = GadgetDefinition::canonical();
        def.validate().unwrap();
        let back = GadgetDefinition::from_json(&def.to_json()).unwrap();
        assert_eq!(back, def);
    }

    #[test]
    fn tampering_names_the_constraint() {
        let mut def = GadgetDefinition::canonical();
        def.parity.nodes.pop();
        let err = def.validate().unwrap_err();
        assert!(
            matches!(err, Error::GadgetConstraint { ref name, .. } if name == "parity_nodes"),
            "{err}"
        );

        let mut def = GadgetDefinition::canonical();
        def.clause.edges.pop();
        let err = def.validate().unwrap_err();
        assert!(matches!(err, Error::GadgetConstraint { .. }), "{err}");

        let mut def = GadgetDefinition::canonical();
        def.clause.k4_sites = vec!["s_or".into()];
        let err = def.validate().unwrap_err();
        assert!(
            matches!(err, Error::GadgetConstraint { ref name, .. } if name == "k4_sites"),
            "{err}"
        );
    }

    #[test]
    fn parity_gadget_shape() {
        let g = build_tsp_gadget_graph(1).unwrap();
        let first: Vec<usize> = (0..8).map(|v| g.graph.degree(v)).collect();
        assert_eq!(first.iter().filter(|&&d| d == 2).count(), 2);
        assert_eq!(first.iter().filter(|&&d| d == 3).count(), 6);
        assert!(g.roles[..8].iter().all(|r| r.starts_with("parity:")));
    }

    #[test]
    fn histogram_and_profile_v1() {
        let g = build_tsp_gadget_graph(1).unwrap();
        assert_eq!(g.graph.node_count(), 708);
        let h = g.histogram();
        assert_eq!((h[&2], h[&3], h[&4]), (156, 516, 36));
        let p = matching_profile(&g, &g.canonical_matching).unwrap();
        assert_eq!(
            p,
            MatchingProfile {
                t23: 156,
                t33: 174,
                t34: 12,
                t44: 12
            }
        );
        assert_eq!(p.total(), 354);
    }

    #[test]
    fn k4_sites_induce_k4() {
        let g = build_tsp_gadget_graph(1).unwrap();
        let ks: Vec<NodeId> = (0..g.roles.len() as NodeId)
            .filter(|&v| {
                g.roles[v as usize].starts_with("k4:s_or:") && g.source_units[v as usize] == "eq3:0/clause0"
            })
            .collect();
        assert_eq!(ks.len(), 4);
        for &a in &ks {
            for &b in &ks {
                assert_eq!(a == b, !g.graph.has_edge(a, b));
            }
        }
        let outward = ks
            .iter()
            .filter(|&&k| g.graph.neighbors(k).iter().any(|w| !ks.contains(w)))
            .count();
        assert_eq!(outward, 3);
    }

    #[test]
    fn profile_rejects_non_perfect() {
        let g = build_tsp_gadget_graph(1).unwrap();
        let partial = &g.canonical_matching[1..];
        assert!(matches!(matching_profile(&g, partial), Err(Error::NotPerfect(_))));
    }

    #[test]
    fn simple_embedding_regimes() {
        let e = embed_simple(1, 2.0).unwrap();
        assert!((e.alpha_min - 4644f64.ln()).abs() < 1e-12);
        assert_eq!(e.binding_degree, 3);
        let e = embed_simple(1, 10.0).unwrap();
        assert!((e.alpha_min - (4f64.powi(10) * 36.0).ln()).abs() < 1e-12);
        assert_eq!(e.binding_degree, 4);
        let b = crate::bounds::beta_star();
        let lo = embed_simple(1, b - 1e-6).unwrap();
        let hi = embed_simple(1, b + 1e-6).unwrap();
        assert_eq!((lo.binding_degree, hi.binding_degree), (3, 4));
        let at3 = (3f64.powf(b) * 516.0).ln();
        let at4 = (4f64.powf(b) * 36.0).ln();
        assert!((at3 - at4).abs() < 1e-9);
    }

    #[test]
    fn packing_audits() {
        for beta in [1.5, 2.5] {
            let plan = even_degree_packing(1, beta, &MatchingProfile::scaled(1)).unwrap();
            assert_eq!(plan.total_edges(), 354);
            plan.audit().unwrap();
            assert!(packing_capacity(plan.alpha_min, beta) >= 354.0);
            assert!((packing_capacity(plan.alpha_min, beta) - 354.0).abs() < 1e-6 * 354.0);
        }
    }

    #[test]
    fn packing_audit_catches_tampering() {
        let mut plan = even_degree_packing(1, 2.5, &MatchingProfile::scaled(1)).unwrap();
        plan.edges[0].mu += 1;
        let err = plan.audit().unwrap_err();
        assert!(matches!(err, Error::GadgetConstraint { ref name, .. } if name == "packing_parity"));
    }

    #[test]
    fn empty_profile_packs_nothing() {
        let plan = even_degree_packing(1, 2.0, &MatchingProfile::default()).unwrap();
        assert!(plan.edges.is_empty());
        assert_eq!(plan.alpha_min, 0.0);
    }

    #[test]
    fn gap_ratio_tends_to_limit() {
        let a = hardness_gap(1, 1.5, EmbedMode::Packing).unwrap();
        let b = hardness_gap(1000, 1.5, EmbedMode::Packing).unwrap();
        assert!((b.ratio - b.limit).abs() < (a.ratio - a.limit).abs());
        assert!((b.no_cost - b.yes_cost - 1000.0).abs() < 1e-6);
        let s = hardness_gap(2, 2.0, EmbedMode::Simple).unwrap();
        assert!((s.ratio - s.limit).abs() < 1e-12);
    }
}
