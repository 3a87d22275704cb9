//! Autotopies of a reduced decomposition read off its bunch structure:
//! involution paths between leaves of one bunch and native cycles at forks.

use std::collections::BTreeMap;

use serde::Serialize;

use super::stats::{is_bridge, is_fork, tree_stats, TreeStats};
use super::tree::{DecompositionTree, Edge, NodeId};
use super::{is_reduced, uniform_colour};
use crate::autotopy::is_autotopy;
use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm};
use crate::semilinear::native_elements;

/// A permutation on every edge of a decomposition tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeIsotopy {
    perms: BTreeMap<Edge, Perm>,
}

impl EdgeIsotopy {
    pub fn identity(t: &DecompositionTree) -> EdgeIsotopy {
        EdgeIsotopy {
            perms: t.edges().into_iter().map(|e| (e, Perm::IDENTITY)).collect(),
        }
    }

    pub fn get(&self, e: Edge) -> Perm {
        self.perms.get(&e).copied().unwrap_or_default()
    }

    pub fn set(&mut self, e: Edge, p: Perm) {
        self.perms.insert(e, p);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &Perm)> {
        self.perms.iter()
    }

    pub fn inverse(&self) -> EdgeIsotopy {
        EdgeIsotopy {
            perms: self.perms.iter().map(|(&e, p)| (e, p.inverse())).collect(),
        }
    }

    /// The isotopy induced at node `u`: value edge first, then child edges.
    pub fn local(&self, t: &DecompositionTree, u: NodeId) -> Isotopy {
        Isotopy::new(
            t.incident_edges(u)
                .into_iter()
                .map(|e| self.get(e))
                .collect(),
        )
        .expect("nodes have arity at least 2")
    }

    /// The isotopy acting on the represented quasigroup: output leaf, then
    /// `x_1, ..., x_n`.
    pub fn flatten(&self, n: usize) -> Isotopy {
        let mut parts = vec![self.get(Edge::Output)];
        parts.extend((1..=n).map(|x| self.get(Edge::Leaf(x))));
        Isotopy::new(parts).expect("n is at least 1")
    }
}

/// Whether the permutations around every node form an autotopy of its label.
pub fn is_decomposition_autotopy(t: &DecompositionTree, e: &EdgeIsotopy) -> Result<bool> {
    for u in 0..t.node_count() {
        if !is_autotopy(t.label(u), &e.local(t, u))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AutotopySource {
    Bunch(usize),
    Fork(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralAutotopy {
    pub source: AutotopySource,
    pub edges: EdgeIsotopy,
}

impl StructuralAutotopy {
    pub fn flatten(&self, n: usize) -> Isotopy {
        self.edges.flatten(n)
    }
}

fn colour(t: &DecompositionTree, u: NodeId) -> Result<u8> {
    uniform_colour(t.label(u))
        .ok_or_else(|| Error::NotReduced(format!("node {u} is not uniformly semilinear")))
}

/// Ancestors of `u` from `u` itself up to the root.
fn ancestors(t: &DecompositionTree, mut u: NodeId) -> Vec<NodeId> {
    let mut out = vec![u];
    while let Some((p, _)) = t.parent(u) {
        out.push(p);
        u = p;
    }
    out
}

/// Nodes and inner edges on the tree path between nodes `a` and `b`.
fn path_between(t: &DecompositionTree, a: NodeId, b: NodeId) -> (Vec<NodeId>, Vec<Edge>) {
    let up_a = ancestors(t, a);
    let up_b = ancestors(t, b);
    let meet = *up_b.iter().find(|w| up_a.contains(w)).expect("common root");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for chain in [&up_a, &up_b] {
        for &w in chain.iter().take_while(|&&w| w != meet) {
            nodes.push(w);
            edges.push(Edge::Inner(w));
        }
    }
    nodes.push(meet);
    (nodes, edges)
}

/// The involution path autotopy between two leaves of bunch `bunch`.
fn psi(
    t: &DecompositionTree,
    stats: &TreeStats,
    bunch: usize,
    x: Edge,
    y: Edge,
) -> Result<EdgeIsotopy> {
    let ux = t.owner(x).expect("leaf edge");
    let uy = t.owner(y).expect("leaf edge");
    let xi = native_elements(colour(t, ux)?)?.native_involution;
    let (nodes, inner) = path_between(t, ux, uy);
    let mut e = EdgeIsotopy::identity(t);
    for edge in inner.into_iter().chain([x, y]) {
        e.set(edge, xi);
    }
    for w in nodes {
        if stats.bunch_of[w] == bunch {
            continue;
        }
        if !is_bridge(t, w) {
            return Err(Error::InvalidTree(format!(
                "node {w} joins a bunch without being a bridge"
            )));
        }
        let leaf = t.leaf_edges(w)[0];
        let natives = native_elements(colour(t, w)?)?.native_transpositions;
        let tau = natives
            .into_iter()
            .find(|&tau| {
                e.set(leaf, tau);
                is_autotopy(t.label(w), &e.local(t, w)).unwrap_or(false)
            })
            .ok_or_else(|| {
                Error::InvalidTree(format!("bridge {w} admits no native transposition"))
            })?;
        e.set(leaf, tau);
    }
    Ok(e)
}

/// The pair of native-cycle autotopies at a fork.
fn fork_cycles(t: &DecompositionTree, u: NodeId) -> Result<[EdgeIsotopy; 2]> {
    let leaves = t.leaf_edges(u);
    let cycles = native_elements(colour(t, u)?)?.native_cycles;
    for p1 in cycles {
        for p2 in cycles {
            let mut e = EdgeIsotopy::identity(t);
            e.set(leaves[0], p1);
            e.set(leaves[1], p2);
            if is_autotopy(t.label(u), &e.local(t, u))? {
                let inv = e.inverse();
                return Ok([e, inv]);
            }
        }
    }
    Err(Error::InvalidTree(format!(
        "fork {u} admits no native cycle pair"
    )))
}

/// For each bunch with leaves `x, y_1, ..., y_{k-1}` the autotopies
/// `psi^{x,y_i}`, then two cycle autotopies per fork.
pub fn structural_autotopies(t: &DecompositionTree) -> Result<Vec<StructuralAutotopy>> {
    if !is_reduced(t) {
        return Err(Error::NotReduced(
            "structural autotopies need a reduced tree".into(),
        ));
    }
    let stats = tree_stats(t);
    let mut out = Vec::new();
    for bunch in 0..stats.bunches {
        let leaves: Vec<Edge> = stats
            .bunch_members(bunch)
            .into_iter()
            .flat_map(|u| t.leaf_edges(u))
            .collect();
        if let Some((&x, rest)) = leaves.split_first() {
            for &y in rest {
                out.push(StructuralAutotopy {
                    source: AutotopySource::Bunch(bunch),
                    edges: psi(t, &stats, bunch, x, y)?,
                });
            }
        }
    }
    for u in 0..t.node_count() {
        if is_fork(t, u) {
            for edges in fork_cycles(t, u)? {
                out.push(StructuralAutotopy {
                    source: AutotopySource::Fork(u),
                    edges,
                });
            }
        }
    }
    Ok(out)
}

/// `2^(N - V + B + L + F)`.
pub fn lower_bound_predict(s: &TreeStats) -> u64 {
    let exp = s.leaves + s.bridges + s.bald_bunches + s.forks - s.nodes;
    1u64 << exp
}

/// `2^(floor(n/2) + 2)`.
pub fn floor_bound(n: usize) -> u64 {
    1u64 << (n / 2 + 2)
}
