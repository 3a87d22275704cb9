//! Repetition-free decompositions of quasigroups into trees of smaller ones.

mod stats;
mod structural;
mod tree;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm};
use crate::quasigroup::{compose_at, pow4, Quasigroup};
use crate::semilinear::{semilinear_profile, PairPartition, SemilinearProfile};

pub use stats::{minimality_conditions, tree_stats, MinimalityReport, TreeStats};
pub use structural::{
    floor_bound, is_decomposition_autotopy, lower_bound_predict, structural_autotopies,
    AutotopySource, EdgeIsotopy, StructuralAutotopy,
};
pub use tree::{Child, DecompositionTree, Edge, Node, NodeId, Subtree, TreeDoc};

/// A factorization `f(x) = outer(inner(x_A), x_rest)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    /// The variables of the inner block, 1-based and increasing.
    pub subset: Vec<usize>,
    pub inner: Quasigroup,
    /// Takes the inner value first, then the remaining variables in order.
    pub outer: Quasigroup,
}

/// The first block `A` (smallest, then lexicographic) through which `q` factors.
pub fn find_split(q: &Quasigroup) -> Option<Split> {
    let n = q.arity();
    for k in 2..n {
        for subset in (1..=n).combinations(k) {
            if let Some(split) = try_split(q, &subset) {
                return Some(split);
            }
        }
    }
    None
}

fn try_split(q: &Quasigroup, subset: &[usize]) -> Option<Split> {
    let n = q.arity();
    let rest: Vec<usize> = (1..=n).filter(|j| !subset.contains(j)).collect();
    let offsets = |vars: &[usize]| -> Vec<usize> {
        (0..pow4(vars.len()))
            .map(|idx| {
                vars.iter().enumerate().fold(0, |acc, (p, &j)| {
                    let digit = (idx / pow4(vars.len() - 1 - p)) % 4;
                    acc + digit * q.stride(j)
                })
            })
            .collect()
    };
    let off_a = offsets(subset);
    let off_r = offsets(&rest);
    let inner: Vec<u8> = off_a.iter().map(|&o| q.value_at(o)).collect();
    let m = off_r.len();
    let mut outer = vec![u8::MAX; 4 * m];
    for (a, &oa) in off_a.iter().enumerate() {
        let v = inner[a] as usize;
        for (r, &or) in off_r.iter().enumerate() {
            let val = q.value_at(oa + or);
            let slot = &mut outer[v * m + r];
            if *slot == u8::MAX {
                *slot = val;
            } else if *slot != val {
                return None;
            }
        }
    }
    Some(Split {
        subset: subset.to_vec(),
        inner: Quasigroup::new(subset.len(), inner).ok()?,
        outer: Quasigroup::new(rest.len() + 1, outer).ok()?,
    })
}

/// Splits recursively until every label is irreducible.
pub fn full_decomposition(q: &Quasigroup) -> Result<DecompositionTree> {
    if q.arity() < 2 {
        return Err(Error::InvalidArgument(
            "decompositions need arity at least 2".into(),
        ));
    }
    let items = (1..=q.arity()).map(Subtree::Var).collect();
    DecompositionTree::from_subtree(decompose_items(q.clone(), items))
}

fn decompose_items(q: Quasigroup, items: Vec<Subtree>) -> Subtree {
    let Some(split) = find_split(&q) else {
        return Subtree::Node(q, items);
    };
    let mut inner_items = Vec::new();
    let mut outer_items = Vec::new();
    for (k, item) in items.into_iter().enumerate() {
        if split.subset.contains(&(k + 1)) {
            inner_items.push(item);
        } else {
            outer_items.push(item);
        }
    }
    outer_items.insert(0, Subtree::Node(split.inner, inner_items));
    decompose_items(split.outer, outer_items)
}

pub fn tree_eval(t: &DecompositionTree) -> Result<Quasigroup> {
    t.eval()
}

/// Orients an adjacent pair as `(parent, position, child)`.
fn orient(t: &DecompositionTree, u: NodeId, v: NodeId) -> Result<(NodeId, usize, NodeId)> {
    if u >= t.node_count() || v >= t.node_count() {
        return Err(Error::NotAdjacent(u, v));
    }
    match (t.parent(v), t.parent(u)) {
        (Some((p, pos)), _) if p == u => Ok((u, pos, v)),
        (_, Some((p, pos))) if p == v => Ok((v, pos, u)),
        _ => Err(Error::NotAdjacent(u, v)),
    }
}

fn coherent_profiles(parent: &SemilinearProfile, pos: usize, child: &SemilinearProfile) -> bool {
    PairPartition::ALL
        .iter()
        .any(|&p| parent.is_semilinear_in_pair(pos, p) && child.is_semilinear_in_pair(0, p))
}

/// Whether the labels of two adjacent nodes share a pair partition across their edge.
pub fn are_coherent(t: &DecompositionTree, u: NodeId, v: NodeId) -> Result<bool> {
    let (p, pos, c) = orient(t, u, v)?;
    Ok(coherent_profiles(
        &semilinear_profile(t.label(p)),
        pos,
        &semilinear_profile(t.label(c)),
    ))
}

/// Replaces two adjacent nodes by one node labelled with their composition.
pub fn merge(t: &DecompositionTree, u: NodeId, v: NodeId) -> Result<DecompositionTree> {
    let (p, pos, c) = orient(t, u, v)?;
    let label = compose_at(t.label(p), t.label(c), pos)?;
    DecompositionTree::from_subtree(rebuild_merged(t, 0, p, pos, c, &label))
}

fn rebuild_merged(
    t: &DecompositionTree,
    id: NodeId,
    p: NodeId,
    pos: usize,
    c: NodeId,
    label: &Quasigroup,
) -> Subtree {
    let sub = |child: &Child| match *child {
        Child::Var(x) => Subtree::Var(x),
        Child::Node(x) => rebuild_merged(t, x, p, pos, c, label),
    };
    if id != p {
        return Subtree::Node(
            t.label(id).clone(),
            t.children(id).iter().map(sub).collect(),
        );
    }
    let mut kids = Vec::new();
    for (k, child) in t.children(p).iter().enumerate() {
        if k + 1 == pos {
            kids.extend(t.children(c).iter().map(sub));
        } else {
            kids.push(sub(child));
        }
    }
    Subtree::Node(label.clone(), kids)
}

/// The first coherent `(parent, child)` pair in breadth-first order.
fn first_coherent_pair(t: &DecompositionTree) -> Option<(NodeId, NodeId)> {
    let profiles: Vec<SemilinearProfile> = (0..t.node_count())
        .map(|u| semilinear_profile(t.label(u)))
        .collect();
    t.inner_edges()
        .into_iter()
        .find(|&(p, pos, c)| coherent_profiles(&profiles[p], pos, &profiles[c]))
        .map(|(p, _, c)| (p, c))
}

/// Merges coherent neighbours until none remain.
pub fn make_proper(t: &DecompositionTree) -> Result<DecompositionTree> {
    let mut t = t.clone();
    while let Some((p, c)) = first_coherent_pair(&t) {
        t = merge(&t, p, c)?;
    }
    Ok(t)
}

pub fn proper_decomposition(q: &Quasigroup) -> Result<DecompositionTree> {
    make_proper(&full_decomposition(q)?)
}

/// Every label semilinear and no two neighbours coherent.
pub fn is_proper(t: &DecompositionTree) -> bool {
    (0..t.node_count()).all(|u| semilinear_profile(t.label(u)).is_semilinear())
        && first_coherent_pair(t).is_none()
}

/// The partner `a` in `{1, 2}` of a node's uniform `{0,a}` semilinearity, if any.
pub fn uniform_colour(q: &Quasigroup) -> Option<u8> {
    semilinear_profile(q)
        .uniform_pairs()
        .into_iter()
        .find(|&a| a == 1 || a == 2)
}

/// Proper, with every label uniformly `{0,1}`- or `{0,2}`-semilinear.
pub fn is_reduced(t: &DecompositionTree) -> bool {
    is_proper(t) && (0..t.node_count()).all(|u| uniform_colour(t.label(u)).is_some())
}

/// Relabels a proper decomposition so that nodes at even depth are
/// uniformly `{0,t}`-semilinear and nodes at odd depth `{0,3-t}`-semilinear.
///
/// Returns the new tree and the isotopy `i` with
/// `apply_isotopy(eval(t), i) = eval(new tree)`.
pub fn reduce_decomposition(t: &DecompositionTree) -> Result<(DecompositionTree, Isotopy)> {
    if !is_proper(t) {
        return Err(Error::NotProper(
            "a coherent pair or non-semilinear label".into(),
        ));
    }
    let assignment: Vec<Vec<PairPartition>> = (0..t.node_count())
        .map(|u| semilinear_profile(t.label(u)).assignments[0].clone())
        .collect();
    let root_pair = assignment[0][0].partner();
    let top = if root_pair == 1 || root_pair == 2 {
        root_pair
    } else {
        1
    };
    let colour = |u: NodeId| {
        if t.depth(u).is_multiple_of(2) {
            top
        } else {
            3 - top
        }
    };

    let mut edge_perm = std::collections::HashMap::new();
    edge_perm.insert(Edge::Output, Perm::transposition(top, root_pair));
    for u in 0..t.node_count() {
        for (k, child) in t.children(u).iter().enumerate() {
            let a_parent = assignment[u][k + 1].partner();
            match *child {
                Child::Var(x) => {
                    edge_perm.insert(Edge::Leaf(x), Perm::transposition(colour(u), a_parent));
                }
                Child::Node(v) => {
                    let a_child = assignment[v][0].partner();
                    if a_child == a_parent {
                        return Err(Error::NotProper(format!("nodes {u} and {v} are coherent")));
                    }
                    let mut images = [0u8; 4];
                    images[colour(u) as usize] = a_parent;
                    images[colour(v) as usize] = a_child;
                    images[3] = 6 - a_parent - a_child;
                    edge_perm.insert(Edge::Inner(v), Perm::from_images(images)?);
                }
            }
        }
    }
    let reduced = t.map_labels(|u, label| {
        let parts = t.incident_edges(u).iter().map(|e| edge_perm[e]).collect();
        label.apply_isotopy(&Isotopy::new(parts)?)
    })?;
    let mut flat = vec![edge_perm[&Edge::Output]];
    flat.extend((1..=t.arity()).map(|x| edge_perm[&Edge::Leaf(x)]));
    Ok((reduced, Isotopy::new(flat)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::{XOR2_TABLE, Z4_TABLE};

    fn z4() -> Quasigroup {
        Quasigroup::from_digits(2, Z4_TABLE).unwrap()
    }

    fn xor2() -> Quasigroup {
        Quasigroup::from_digits(2, XOR2_TABLE).unwrap()
    }

    fn l(n: usize) -> Quasigroup {
        Quasigroup::from_fn(n, |x| x.iter().fold(0, |a, &b| a ^ b)).unwrap()
    }

    #[test]
    fn split_of_l4_is_first_pair() {
        let s = find_split(&l(4)).unwrap();
        assert_eq!(s.subset, vec![1, 2]);
        assert_eq!(s.inner, xor2());
        assert_eq!(s.outer, l(3));
    }

    #[test]
    fn binary_has_no_split_but_z4_chain_does() {
        assert!(find_split(&z4()).is_none());
        let h = compose_at(&z4(), &z4(), 1).unwrap();
        assert!(find_split(&h).is_some());
    }

    #[test]
    fn full_decomposition_round_trip() {
        let q = compose_at(&compose_at(&z4(), &xor2(), 2).unwrap(), &z4(), 1).unwrap();
        let t = full_decomposition(&q).unwrap();
        assert_eq!(t.eval().unwrap(), q);
        assert!((0..t.node_count()).all(|u| t.label(u).arity() == 2));
        assert_eq!(full_decomposition(&xor2()).unwrap().node_count(), 1);
    }

    #[test]
    fn merging_two_xors_gives_l3() {
        let t = full_decomposition(&l(3)).unwrap();
        assert_eq!(t.node_count(), 2);
        assert!(are_coherent(&t, 0, 1).unwrap());
        let m = merge(&t, 0, 1).unwrap();
        assert_eq!(m.node_count(), 1);
        assert_eq!(*m.label(0), l(3));
        assert!(merge(&m, 0, 0).is_err());
    }

    #[test]
    fn z4_chain_is_coherent() {
        let t = full_decomposition(&compose_at(&z4(), &z4(), 1).unwrap()).unwrap();
        assert_eq!(t.node_count(), 2);
        assert!(are_coherent(&t, 1, 0).unwrap());
    }

    #[test]
    fn proper_of_linear_is_single_node() {
        let t = proper_decomposition(&l(5)).unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(is_proper(&t));
    }

    #[test]
    fn reduce_converts_03_pairs() {
        // conjugating z4 by (23) moves its pair {0,2} to {0,3}
        let q = z4()
            .apply_isotopy(&Isotopy::uniform(2, Perm::transposition(2, 3)))
            .unwrap();
        assert_eq!(semilinear_profile(&q).uniform_pairs(), vec![3]);
        let t = DecompositionTree::single(q.clone()).unwrap();
        let (r, iso) = reduce_decomposition(&t).unwrap();
        assert!(is_reduced(&r));
        assert_eq!(uniform_colour(r.label(0)), Some(1));
        assert_eq!(q.apply_isotopy(&iso).unwrap(), r.eval().unwrap());
    }

    #[test]
    fn reduce_of_reduced_is_identity() {
        let t = DecompositionTree::single(z4()).unwrap();
        let (r, iso) = reduce_decomposition(&t).unwrap();
        assert!(iso.is_identity());
        assert_eq!(r, t);
    }
}
