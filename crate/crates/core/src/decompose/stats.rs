//! Counting leaves, bald nodes, bridges, forks and bunches on the unrooted
//! view of a decomposition tree.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::tree::{Child, DecompositionTree, NodeId};
use crate::autotopy::are_isotopic;
use crate::construct::l_bullet;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    /// N: leaves including the output leaf.
    pub leaves: usize,
    /// V
    pub nodes: usize,
    /// E: nodes without adjacent leaves.
    pub bald: usize,
    /// B: degree-3 nodes with exactly one leaf.
    pub bridges: usize,
    /// F: degree-3 nodes with exactly two leaves.
    pub forks: usize,
    /// Gamma: connected components of the bunch graph.
    pub bunches: usize,
    /// L: bunches whose nodes have no leaves.
    pub bald_bunches: usize,
    /// Bunch index of every node; bunches are numbered by their smallest node.
    pub bunch_of: Vec<usize>,
    /// Edges of the bunch graph, one per bridge.
    pub bunch_graph: Vec<(NodeId, NodeId)>,
}

impl TreeStats {
    pub fn bunch_members(&self, bunch: usize) -> Vec<NodeId> {
        (0..self.nodes)
            .filter(|&u| self.bunch_of[u] == bunch)
            .collect()
    }

    /// `Gamma = V - B`.
    pub fn bunch_count_identity(&self) -> bool {
        self.bunches + self.bridges == self.nodes
    }

    /// `L >= E - B`.
    pub fn bald_bunch_bound(&self) -> bool {
        self.bald_bunches + self.bridges >= self.bald
    }
}

/// Degree and number of adjacent leaves of a node in the unrooted tree.
pub(crate) fn degree_and_leaves(t: &DecompositionTree, u: NodeId) -> (usize, usize) {
    (t.label(u).arity() + 1, t.leaf_edges(u).len())
}

pub(crate) fn is_bridge(t: &DecompositionTree, u: NodeId) -> bool {
    degree_and_leaves(t, u) == (3, 1)
}

pub(crate) fn is_fork(t: &DecompositionTree, u: NodeId) -> bool {
    degree_and_leaves(t, u) == (3, 2)
}

/// Node neighbours of `u`: the parent (if any), then node children.
pub(crate) fn node_neighbours(t: &DecompositionTree, u: NodeId) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = t.parent(u).map(|(p, _)| p).into_iter().collect();
    out.extend(t.children(u).iter().filter_map(|c| match *c {
        Child::Node(v) => Some(v),
        Child::Var(_) => None,
    }));
    out
}

pub fn tree_stats(t: &DecompositionTree) -> TreeStats {
    let v = t.node_count();
    let mut uf = UnionFind::<usize>::new(v);
    let mut bunch_graph = Vec::new();
    let (mut bald, mut bridges, mut forks) = (0, 0, 0);
    for u in 0..v {
        let (_, leaves) = degree_and_leaves(t, u);
        if leaves == 0 {
            bald += 1;
        }
        if is_fork(t, u) {
            forks += 1;
        }
        if is_bridge(t, u) {
            bridges += 1;
            if let [a, b] = node_neighbours(t, u)[..] {
                uf.union(a, b);
                bunch_graph.push((a.min(b), a.max(b)));
            }
        }
    }
    let mut index_of_root = vec![usize::MAX; v];
    let mut bunch_of = vec![0; v];
    let mut bunches = 0;
    for (u, slot) in bunch_of.iter_mut().enumerate() {
        let r = uf.find(u);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = bunches;
            bunches += 1;
        }
        *slot = index_of_root[r];
    }
    let mut has_leaf = vec![false; bunches];
    for u in 0..v {
        if degree_and_leaves(t, u).1 > 0 {
            has_leaf[bunch_of[u]] = true;
        }
    }
    TreeStats {
        leaves: t.arity() + 1,
        nodes: v,
        bald,
        bridges,
        forks,
        bunches,
        bald_bunches: has_leaf.iter().filter(|&&h| !h).count(),
        bunch_of,
        bunch_graph,
    }
}

/// The structural conditions characterizing trees whose quasigroups reach the
/// lower bound for odd arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    /// (I) no vertex of degree above 4.
    pub max_degree_four: bool,
    /// (II) no forks.
    pub no_forks: bool,
    /// (III) no bald bunches.
    pub no_bald_bunches: bool,
    /// (IV) at most one non-bald node per bunch.
    pub one_non_bald_per_bunch: bool,
    /// (V) no bald node of degree above 3.
    pub bald_nodes_degree_three: bool,
    /// Every degree-4 label is isotopic to `l_3^bullet`.
    pub degree_four_labels: bool,
}

impl MinimalityReport {
    pub fn conditions_hold(&self) -> bool {
        self.max_degree_four
            && self.no_forks
            && self.no_bald_bunches
            && self.one_non_bald_per_bunch
            && self.bald_nodes_degree_three
    }

    pub fn all_hold(&self) -> bool {
        self.conditions_hold() && self.degree_four_labels
    }
}

pub fn minimality_conditions(t: &DecompositionTree) -> Result<MinimalityReport> {
    let stats = tree_stats(t);
    let v = t.node_count();
    let kinds: Vec<(usize, usize)> = (0..v).map(|u| degree_and_leaves(t, u)).collect();
    let mut non_bald_per_bunch = vec![0usize; stats.bunches];
    for (kind, &bunch) in kinds.iter().zip(&stats.bunch_of) {
        if kind.1 > 0 {
            non_bald_per_bunch[bunch] += 1;
        }
    }
    let reference = l_bullet(3)?;
    let mut degree_four_labels = true;
    for (u, kind) in kinds.iter().enumerate() {
        if kind.0 == 4 && are_isotopic(t.label(u), &reference)?.is_none() {
            degree_four_labels = false;
        }
    }
    Ok(MinimalityReport {
        max_degree_four: kinds.iter().all(|k| k.0 <= 4),
        no_forks: stats.forks == 0,
        no_bald_bunches: stats.bald_bunches == 0,
        one_non_bald_per_bunch: non_bald_per_bunch.iter().all(|&c| c <= 1),
        bald_nodes_degree_three: kinds.iter().all(|k| k.1 > 0 || k.0 <= 3),
        degree_four_labels,
    })
}
