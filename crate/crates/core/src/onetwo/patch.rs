//! Patching a cycle cover into a tour.
//!
//! The bipartite graph `B` joins each cycle to the outside vertices that have
//! a 1-edge into it. A maximum matching `M` of `B` gives every matched cycle
//! one outgoing arc (to the cycle holding its matched vertex), forming the
//! digraph `F`. A spanning part `F′` of directed 2-paths and in-stars is
//! extracted greedily, cycles are merged along its arcs, and whatever is left
//! is patched together pair by pair.

use serde::{Deserialize, Serialize};

use super::cover::{canonical_rotation, CycleCover};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::matching::bipartite_matching;
use crate::metric::{tour_cost, MetricInstance, Tour};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    /// `from → mid → to`.
    TwoPath {
        from: usize,
        mid: usize,
        to: usize,
    },
    InStar {
        center: usize,
        leaves: Vec<usize>,
    },
    Isolated {
        cycle: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchState {
    pub cycle_count: usize,
    /// Vertices adjacent to each cycle in `B`, increasing.
    pub b_adjacency: Vec<Vec<NodeId>>,
    /// Matched vertex of each cycle.
    pub matching: Vec<Option<NodeId>>,
    /// The arc of `F` leaving each cycle.
    pub arcs: Vec<Option<usize>>,
    /// Components of `F′`.
    pub components: Vec<Component>,
    pub r2: u64,
    pub n2: u64,
    /// n + k + (2/9)(n − n₂ − k) + r₂.
    pub eq1_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub r2: u64,
    pub n2: u64,
    pub pure_cycle_count: u64,
}

/// Isolated pure cycles of `F′` (count and total size) and the number of
/// pure cycles. Needs the cover's pure flags.
pub fn cover_diagnostics(cover: &CycleCover, state: &PatchState) -> Result<Diagnostics> {
    if cover.pure.len() != cover.cycles.len() || state.cycle_count != cover.cycles.len() {
        return Err(Error::CoverMismatch("state was not built for this cover".into()));
    }
    let mut r2 = 0;
    let mut n2 = 0;
    for comp in &state.components {
        if let Component::Isolated { cycle } = *comp {
            if cover.pure[cycle] {
                r2 += 1;
                n2 += cover.cycles[cycle].len() as u64;
            }
        }
    }
    Ok(Diagnostics {
        r2,
        n2,
        pure_cycle_count: cover.pure.iter().filter(|&&p| p).count() as u64,
    })
}

/// Builds `B`, `M`, `F` and `F′` for a cover.
pub fn patch_state(inst: &MetricInstance, cover: &CycleCover) -> Result<PatchState> {
    cover.validate(inst)?;
    let cover = if cover.pure.len() == cover.cycles.len() {
        cover.clone()
    } else {
        CycleCover::new(inst, cover.cycles.clone())?
    };
    let g = inst.base();
    let n = inst.node_count();
    let q = cover.cycles.len();
    let mut owner = vec![0usize; n];
    for (ci, c) in cover.cycles.iter().enumerate() {
        for &v in c {
            owner[v as usize] = ci;
        }
    }
    let mut b_adjacency: Vec<Vec<NodeId>> = Vec::with_capacity(q);
    for (ci, c) in cover.cycles.iter().enumerate() {
        let mut adj: Vec<NodeId> = c
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| owner[w as usize] != ci)
            .collect();
        adj.sort_unstable();
        adj.dedup();
        b_adjacency.push(adj);
    }
    let left: Vec<Vec<usize>> = b_adjacency
        .iter()
        .map(|a| a.iter().map(|&v| v as usize).collect())
        .collect();
    let matching: Vec<Option<NodeId>> = bipartite_matching(&left, n)
        .into_iter()
        .map(|m| m.map(|v| v as NodeId))
        .collect();
    let arcs: Vec<Option<usize>> = matching.iter().map(|m| m.map(|v| owner[v as usize])).collect();
    let components = extract_spanning(&arcs);
    let state = PatchState {
        cycle_count: q,
        b_adjacency,
        matching,
        arcs,
        components,
        r2: 0,
        n2: 0,
        eq1_bound: 0.0,
    };
    let diag = cover_diagnostics(&cover, &state)?;
    let (nf, kf) = (n as f64, cover.k as f64);
    Ok(PatchState {
        r2: diag.r2,
        n2: diag.n2,
        eq1_bound: nf + kf + 2.0 / 9.0 * (nf - diag.n2 as f64 - kf) + diag.r2 as f64,
        ..state
    })
}

/// Greedy `F′`: 2-paths first, then in-stars, then leftover arcs join an
/// existing star as extra leaves; anything else stays isolated.
fn extract_spanning(arcs: &[Option<usize>]) -> Vec<Component> {
    let q = arcs.len();
    let mut used = vec![false; q];
    let mut comps = Vec::new();
    for c in 0..q {
        let Some(mid) = arcs[c] else { continue };
        let Some(to) = arcs[mid] else { continue };
        if to == c || used[c] || used[mid] || used[to] {
            continue;
        }
        used[c] = true;
        used[mid] = true;
        used[to] = true;
        comps.push(Component::TwoPath { from: c, mid, to });
    }
    let mut star_of = vec![usize::MAX; q];
    for c in 0..q {
        let Some(center) = arcs[c] else { continue };
        if used[c] {
            continue;
        }
        if !used[center] {
            used[center] = true;
            star_of[center] = comps.len();
            comps.push(Component::InStar {
                center,
                leaves: Vec::new(),
            });
        }
        if star_of[center] != usize::MAX {
            used[c] = true;
            if let Component::InStar { leaves, .. } = &mut comps[star_of[center]] {
                leaves.push(c);
            }
        }
    }
    for c in 0..q {
        if !used[c] {
            comps.push(Component::Isolated { cycle: c });
        }
    }
    comps
}

/// Arcs of `F′` as (from, to) pairs, in component order.
fn spanning_arcs(comps: &[Component]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for comp in comps {
        match comp {
            Component::TwoPath { from, mid, to } => {
                out.push((*from, *mid));
                out.push((*mid, *to));
            }
            Component::InStar { center, leaves } => {
                out.extend(leaves.iter().map(|&l| (l, *center)));
            }
            Component::Isolated { .. } => {}
        }
    }
    out
}

struct Pieces<'a> {
    inst: &'a MetricInstance,
    seqs: Vec<Vec<NodeId>>,
    owner: Vec<usize>,
}

impl<'a> Pieces<'a> {
    fn d(&self, a: NodeId, b: NodeId) -> i64 {
        i64::from(self.inst.dist(a, b))
    }

    /// Removes edge `(A[i], A[i+1])` and `(B[j], B[j+1])` and reconnects.
    /// Straight: `A[i]–B[j]`, `B[j+1]–A[i+1]`. Crossed: `A[i]–B[j+1]`,
    /// `B[j]–A[i+1]`. Returns the cost change and the two added edges.
    fn option(&self, a: usize, i: usize, b: usize, j: usize, crossed: bool) -> (i64, [(NodeId, NodeId); 2]) {
        let (sa, sb) = (&self.seqs[a], &self.seqs[b]);
        let (a0, a1) = (sa[i], sa[(i + 1) % sa.len()]);
        let (b0, b1) = (sb[j], sb[(j + 1) % sb.len()]);
        let added = if crossed {
            [(a0, b1), (b0, a1)]
        } else {
            [(a0, b0), (b1, a1)]
        };
        let delta =
            self.d(added[0].0, added[0].1) + self.d(added[1].0, added[1].1) - self.d(a0, a1) - self.d(b0, b1);
        (delta, added)
    }

    fn apply(&mut self, a: usize, i: usize, b: usize, j: usize, crossed: bool) {
        let sb = std::mem::take(&mut self.seqs[b]);
        let sa = std::mem::take(&mut self.seqs[a]);
        // A from A[i+1] around to A[i].
        let mut out = Vec::with_capacity(sa.len() + sb.len());
        out.extend_from_slice(&sa[i + 1..]);
        out.extend_from_slice(&sa[..=i]);
        // Then B: straight goes A[i] → B[j] backwards to B[j+1];
        // crossed goes A[i] → B[j+1] forwards to B[j].
        let lb = sb.len();
        if crossed {
            out.extend((0..lb).map(|t| sb[(j + 1 + t) % lb]));
        } else {
            out.extend((0..lb).map(|t| sb[(j + lb - t) % lb]));
        }
        for &v in &sb {
            self.owner[v as usize] = a;
        }
        self.seqs[a] = out;
    }
}

/// Builds the patch state and a tour. The tour starts at node 0.
pub fn py_pipeline(inst: &MetricInstance, cover: &CycleCover) -> Result<(PatchState, Tour)> {
    let state = patch_state(inst, cover)?;
    let n = inst.node_count();
    let mut pieces = Pieces {
        inst,
        seqs: cover.cycles.clone(),
        owner: vec![0; n],
    };
    for (ci, c) in cover.cycles.iter().enumerate() {
        for &v in c {
            pieces.owner[v as usize] = ci;
        }
    }

    // Merge along F′: the arc from C to C′ has matched vertex v ∈ C′ and some
    // 1-edge v–u with u ∈ C; that edge must be one of the two added edges.
    for (from, _) in spanning_arcs(&state.components) {
        let v = state.matching[from].expect("arc comes from a matched cycle");
        let a = pieces.owner[cover.cycles[from][0] as usize];
        let b = pieces.owner[v as usize];
        if a == b {
            continue;
        }
        let mut best: Option<(i64, usize, usize, bool)> = None;
        let (la, lb) = (pieces.seqs[a].len(), pieces.seqs[b].len());
        let pos_v = pieces.seqs[b].iter().position(|&x| x == v).unwrap();
        for &u in inst.base().neighbors(v) {
            if pieces.owner[u as usize] != a {
                continue;
            }
            let pos_u = pieces.seqs[a].iter().position(|&x| x == u).unwrap();
            for i in [pos_u, (pos_u + la - 1) % la] {
                for j in [pos_v, (pos_v + lb - 1) % lb] {
                    for crossed in [false, true] {
                        let (delta, added) = pieces.option(a, i, b, j, crossed);
                        let uses = added.iter().any(|&(x, y)| (x, y) == (u, v) || (x, y) == (v, u));
                        if uses && best.is_none_or(|bst| delta < bst.0) {
                            best = Some((delta, i, j, crossed));
                        }
                    }
                }
            }
        }
        let (_, i, j, crossed) = best.expect("matched vertex has a 1-edge into the cycle");
        pieces.apply(a, i, b, j, crossed);
    }

    // Patch what is left into one tour, smallest original cycle first.
    let mut order: Vec<usize> = Vec::new();
    for c in &cover.cycles {
        let p = pieces.owner[c[0] as usize];
        if !order.contains(&p) {
            order.push(p);
        }
    }
    let t = order[0];
    for &d in &order[1..] {
        let mut best: Option<(i64, usize, usize, bool)> = None;
        for i in 0..pieces.seqs[t].len() {
            for j in 0..pieces.seqs[d].len() {
                for crossed in [false, true] {
                    let (delta, _) = pieces.option(t, i, d, j, crossed);
                    if best.is_none_or(|bst| delta < bst.0) {
                        best = Some((delta, i, j, crossed));
                    }
                }
            }
        }
        let (_, i, j, crossed) = best.unwrap();
        pieces.apply(t, i, d, j, crossed);
    }
    let mut tour = std::mem::take(&mut pieces.seqs[t]);
    canonical_rotation(&mut tour);
    Ok((state, tour_cost(inst, &tour)?))
}
