//! Builders for named quasigroups, the chain examples reaching the lower
//! bound, Construction T trees and random semilinear compositions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decompose::{DecompositionTree, Subtree};
use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm, Symbol};
use crate::quasigroup::{Quasigroup, XOR2_TABLE, Z4_TABLE};
use crate::semilinear::PairPartition;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["xor2", "z4", "g3", "h3"];

pub fn builtin(name: &str) -> Result<Quasigroup> {
    match name {
        "xor2" => Quasigroup::from_digits(2, XOR2_TABLE),
        "z4" => Quasigroup::from_digits(2, Z4_TABLE),
        "g3" => Quasigroup::from_fn(3, |x| x[0] ^ ((x[1] + x[2]) % 4)),
        "h3" => Quasigroup::from_fn(3, |x| (x[0] + x[1] + x[2]) % 4),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// `l_n(x) = x_1 xor ... xor x_n`.
pub fn linear(n: usize) -> Result<Quasigroup> {
    Quasigroup::from_fn(n, |x| x.iter().fold(0, |a, &b| a ^ b))
}

/// `l_n` with the values on `{0,2}^n` shifted by `xor 2`.
pub fn l_bullet(n: usize) -> Result<Quasigroup> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "l_bullet needs arity at least 2".into(),
        ));
    }
    Quasigroup::from_fn(n, |x| {
        let v = x.iter().fold(0, |a, &b| a ^ b);
        if x.iter().all(|&xi| xi & 1 == 0) {
            v ^ 2
        } else {
            v
        }
    })
}

/// The transposition (12) that turns `{0,2}`-semilinear labels into `{0,1}`-semilinear ones.
pub fn tau() -> Perm {
    Perm::transposition(1, 2)
}

/// `tau q(tau x_1, ..., tau x_n)`.
pub fn conjugate_by_tau(q: &Quasigroup) -> Result<Quasigroup> {
    q.apply_isotopy(&Isotopy::uniform(q.arity(), tau()))
}

/// The tree of the chain example of arity `n >= 5`.
///
/// Odd `n`: `f(x_1, x_2, x_3)` wrapped alternately by `g` and `f`, two new
/// variables per wrapper, where `f = l_3^bullet` and `g` is its `tau`-conjugate.
/// Even `n`: the innermost node is `h = l_4^bullet`.
pub fn chain_tree(n: usize) -> Result<DecompositionTree> {
    if n < 5 {
        return Err(Error::Construction(format!("chain needs n >= 5, got {n}")));
    }
    let f = l_bullet(3)?;
    let g = conjugate_by_tau(&f)?;
    let (mut cur, mut next) = if n % 2 == 1 {
        (Subtree::leaves(f.clone(), 1..=3), 4)
    } else {
        (Subtree::leaves(l_bullet(4)?, 1..=4), 5)
    };
    let mut use_g = true;
    while next <= n {
        let label = if use_g { g.clone() } else { f.clone() };
        cur = Subtree::node(label, vec![cur, Subtree::Var(next), Subtree::Var(next + 1)]);
        next += 2;
        use_g = !use_g;
    }
    DecompositionTree::from_subtree(cur)
}

pub fn chain(n: usize) -> Result<Quasigroup> {
    chain_tree(n)?.eval()
}

/// Free choices of Construction T.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTSpec {
    /// Number of skeleton nodes, `(n - 1) / 2`.
    pub skeleton_nodes: usize,
    /// Skeleton edges; every skeleton degree must be at most 3.
    pub skeleton_edges: Vec<(usize, usize)>,
    /// Skeleton nodes with one leaf to split, with the choice `1..=3` of which
    /// node neighbour (in increasing id order) stays with the leaf.
    pub splits: Vec<(usize, u8)>,
    /// Start the bipartition with colour 2 instead of 1 at node 0.
    pub bipartition_flip: bool,
    /// Isotopies applied to the `{0,2}`-semilinear base label of a node
    /// before it is conjugated into its colour; every component must
    /// preserve the partition `{0,2}|{1,3}`. Keyed by node id after
    /// splitting: split node `s` keeps id `s` for its leaf half and the other
    /// half gets id `skeleton_nodes + k` for the `k`-th split.
    pub perturbations: Vec<(usize, Isotopy)>,
    /// Index of the output leaf among all leaves, in order of owning node.
    pub output_leaf: usize,
}

impl ConstructionTSpec {
    /// A path skeleton with no splits and canonical labels.
    pub fn path(n: usize) -> ConstructionTSpec {
        let k = n.saturating_sub(1) / 2;
        ConstructionTSpec {
            skeleton_nodes: k,
            skeleton_edges: (1..k).map(|v| (v - 1, v)).collect(),
            splits: Vec::new(),
            bipartition_flip: false,
            perturbations: Vec::new(),
            output_leaf: 0,
        }
    }

    pub fn arity(&self) -> usize {
        2 * self.skeleton_nodes + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Nbr {
    Node(usize),
    Leaf(usize),
}

/// Runs Construction T and returns the resulting tree.
pub fn construction_t_tree(spec: &ConstructionTSpec) -> Result<DecompositionTree> {
    let k = spec.skeleton_nodes;
    if k == 0 {
        return Err(Error::Construction("the skeleton needs a node".into()));
    }
    if spec.skeleton_edges.len() + 1 != k {
        return Err(Error::Construction(
            "a skeleton on k nodes has k - 1 edges".into(),
        ));
    }
    let mut nbrs: Vec<Vec<Nbr>> = vec![Vec::new(); k];
    for &(a, b) in &spec.skeleton_edges {
        if a >= k || b >= k || a == b || nbrs[a].contains(&Nbr::Node(b)) {
            return Err(Error::Construction(format!("bad skeleton edge ({a}, {b})")));
        }
        nbrs[a].push(Nbr::Node(b));
        nbrs[b].push(Nbr::Node(a));
    }
    if nbrs.iter().any(|l| l.len() > 3) {
        return Err(Error::Construction("skeleton degree above 3".into()));
    }
    if component_size(&nbrs, 0) != k {
        return Err(Error::Construction("the skeleton is not connected".into()));
    }
    let mut leaf_count = 0;
    for list in nbrs.iter_mut() {
        let extra = 4 - list.len();
        for _ in 0..extra {
            list.push(Nbr::Leaf(leaf_count));
            leaf_count += 1;
        }
    }

    for (j, &(s, choice)) in spec.splits.iter().enumerate() {
        let leaves: Vec<Nbr> = nbrs
            .get(s)
            .filter(|_| s < k)
            .map(|l| {
                l.iter()
                    .copied()
                    .filter(|x| matches!(x, Nbr::Leaf(_)))
                    .collect()
            })
            .unwrap_or_default();
        if leaves.len() != 1 || spec.splits[..j].iter().any(|&(t, _)| t == s) {
            return Err(Error::Construction(format!("node {s} cannot be split")));
        }
        if !(1..=3).contains(&choice) {
            return Err(Error::Construction(format!(
                "split choice {choice} outside 1..=3"
            )));
        }
        let mut node_nbrs: Vec<usize> = nbrs[s]
            .iter()
            .filter_map(|x| match *x {
                Nbr::Node(v) => Some(v),
                Nbr::Leaf(_) => None,
            })
            .collect();
        node_nbrs.sort_unstable();
        let keep = node_nbrs.remove(choice as usize - 1);
        let other = nbrs.len();
        nbrs[s] = vec![leaves[0], Nbr::Node(keep), Nbr::Node(other)];
        nbrs.push(vec![
            Nbr::Node(node_nbrs[0]),
            Nbr::Node(node_nbrs[1]),
            Nbr::Node(s),
        ]);
        for &moved in &node_nbrs {
            for x in nbrs[moved].iter_mut() {
                if *x == Nbr::Node(s) {
                    *x = Nbr::Node(other);
                }
            }
        }
    }

    let total = nbrs.len();
    let mut colour = vec![0u8; total];
    colour[0] = if spec.bipartition_flip { 2 } else { 1 };
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for x in nbrs[u].clone() {
            if let Nbr::Node(v) = x {
                if colour[v] == 0 {
                    colour[v] = 3 - colour[u];
                    stack.push(v);
                }
            }
        }
    }

    let mut labels = Vec::with_capacity(total);
    for u in 0..total {
        let base = if nbrs[u].len() == 4 {
            l_bullet(3)?
        } else {
            builtin("z4")?
        };
        let perturbed = match spec.perturbations.iter().find(|(v, _)| *v == u) {
            Some((_, iso)) => {
                let frame = PairPartition::with_zero(2)?;
                if iso.parts().iter().any(|&p| frame.image(p) != frame) {
                    return Err(Error::Construction(format!(
                        "perturbation of node {u} leaves the {{0,2}} frame"
                    )));
                }
                base.apply_isotopy(iso)?
            }
            None => base,
        };
        labels.push(if colour[u] == 1 {
            conjugate_by_tau(&perturbed)?
        } else {
            perturbed
        });
    }
    if let Some((v, _)) = spec.perturbations.iter().find(|(v, _)| *v >= total) {
        return Err(Error::Construction(format!("no node {v} to perturb")));
    }

    if spec.output_leaf >= leaf_count {
        return Err(Error::Construction(format!(
            "output leaf {} out of range 0..{leaf_count}",
            spec.output_leaf
        )));
    }
    let root = (0..total)
        .find(|&u| nbrs[u].contains(&Nbr::Leaf(spec.output_leaf)))
        .expect("every leaf has an owner");
    let mut next_var = 0;
    let tree = orient(
        &nbrs,
        &labels,
        root,
        Nbr::Leaf(spec.output_leaf),
        &mut next_var,
    );
    DecompositionTree::from_subtree(tree)
}

fn component_size(nbrs: &[Vec<Nbr>], start: usize) -> usize {
    let mut seen = vec![false; nbrs.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for x in &nbrs[u] {
            if let Nbr::Node(v) = *x {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
    }
    count
}

fn orient(
    nbrs: &[Vec<Nbr>],
    labels: &[Quasigroup],
    u: usize,
    from: Nbr,
    next_var: &mut usize,
) -> Subtree {
    let kids = nbrs[u]
        .iter()
        .filter(|&&x| x != from)
        .map(|&x| match x {
            Nbr::Leaf(_) => {
                *next_var += 1;
                Subtree::Var(*next_var)
            }
            Nbr::Node(v) => orient(nbrs, labels, v, Nbr::Node(u), next_var),
        })
        .collect();
    Subtree::Node(labels[u].clone(), kids)
}

/// Runs Construction T and evaluates the tree.
pub fn construction_t(spec: &ConstructionTSpec) -> Result<(DecompositionTree, Quasigroup)> {
    if spec.arity().is_multiple_of(2) {
        return Err(Error::Construction("Construction T needs odd n".into()));
    }
    let tree = construction_t_tree(spec)?;
    let q = tree.eval()?;
    Ok((tree, q))
}

/// Permutations preserving the partition `{0,2}|{1,3}`.
fn frame_preserving() -> Vec<Perm> {
    let frame = PairPartition::with_zero(2).expect("valid pair");
    Perm::all()
        .iter()
        .copied()
        .filter(|&p| frame.image(p) == frame)
        .collect()
}

/// A Construction T specification for odd `n >= 3` with every free choice
/// drawn from a ChaCha8 stream seeded by `seed`.
pub fn random_construction_t_spec(n: usize, seed: u64) -> Result<ConstructionTSpec> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Construction(format!(
            "Construction T needs odd n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (n - 1) / 2;
    let mut degree = vec![0usize; k];
    let mut edges = Vec::new();
    for v in 1..k {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < 3).collect();
        let u = *open
            .choose(&mut rng)
            .expect("a tree always has an open node");
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v));
    }
    let mut splits = Vec::new();
    for (u, &d) in degree.iter().enumerate() {
        if d == 3 && rng.gen_bool(0.5) {
            splits.push((u, rng.gen_range(1..=3u8)));
        }
    }
    let bipartition_flip = rng.gen_bool(0.5);
    let frame = frame_preserving();
    let mut perturbations = Vec::new();
    for u in 0..k + splits.len() {
        if rng.gen_bool(0.5) {
            let arity = if u < k && !splits.iter().any(|&(s, _)| s == u) {
                3
            } else {
                2
            };
            let parts = (0..=arity)
                .map(|_| *frame.choose(&mut rng).unwrap())
                .collect();
            perturbations.push((u, Isotopy::new(parts)?));
        }
    }
    let leaves = n + 1;
    Ok(ConstructionTSpec {
        skeleton_nodes: k,
        skeleton_edges: edges,
        splits,
        bipartition_flip,
        perturbations,
        output_leaf: rng.gen_range(0..leaves),
    })
}

/// The semilinear blocks used for random compositions: `xor`, `+4`, `l_3`,
/// `l_3^bullet`, `g3`, `h3`, `l_4`, `l_4^bullet`.
pub fn semilinear_blocks() -> Result<Vec<Quasigroup>> {
    Ok(vec![
        builtin("xor2")?,
        builtin("z4")?,
        linear(3)?,
        l_bullet(3)?,
        builtin("g3")?,
        builtin("h3")?,
        linear(4)?,
        l_bullet(4)?,
    ])
}

pub fn random_isotopy(arity: usize, rng: &mut impl Rng) -> Isotopy {
    let all = Perm::all();
    Isotopy::new((0..=arity).map(|_| *all.choose(rng).unwrap()).collect())
        .expect("arity at least 1")
}

/// A random tree of random isotopes of semilinear blocks over `x_1..x_n`,
/// with its evaluation.
pub fn random_semilinear_composition(
    n: usize,
    rng: &mut impl Rng,
) -> Result<(DecompositionTree, Quasigroup)> {
    if n < 2 {
        return Err(Error::InvalidArgument("compositions need n >= 2".into()));
    }
    let blocks = semilinear_blocks()?;
    let mut items: Vec<Subtree> = (1..=n).map(Subtree::Var).collect();
    items.shuffle(rng);
    while items.len() > 1 {
        let fitting: Vec<&Quasigroup> =
            blocks.iter().filter(|b| b.arity() <= items.len()).collect();
        let block = *fitting.choose(rng).unwrap();
        let label = block.apply_isotopy(&random_isotopy(block.arity(), rng))?;
        let mut picked = Vec::with_capacity(block.arity());
        for _ in 0..block.arity() {
            let at = rng.gen_range(0..items.len());
            picked.push(items.swap_remove(at));
        }
        let at = rng.gen_range(0..=items.len());
        items.insert(at, Subtree::Node(label, picked));
    }
    let tree = DecompositionTree::from_subtree(items.pop().unwrap())?;
    let q = tree.eval()?;
    Ok((tree, q))
}

/// [`random_semilinear_composition`] driven by a seeded ChaCha8 stream.
pub fn seeded_semilinear_composition(
    n: usize,
    seed: u64,
) -> Result<(DecompositionTree, Quasigroup)> {
    random_semilinear_composition(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every Latin square of order 4, as binary quasigroups in table order.
pub fn latin_squares() -> Vec<Quasigroup> {
    fn fill(cell: usize, table: &mut [Symbol; 16], out: &mut Vec<Quasigroup>) {
        if cell == 16 {
            out.push(Quasigroup::new(2, table.to_vec()).expect("Latin by construction"));
            return;
        }
        let (r, c) = (cell / 4, cell % 4);
        for v in 0..4 {
            let clash =
                (0..c).any(|j| table[4 * r + j] == v) || (0..r).any(|i| table[4 * i + c] == v);
            if !clash {
                table[cell] = v;
                fill(cell + 1, table, out);
            }
        }
    }
    let mut out = Vec::with_capacity(576);
    fill(0, &mut [0; 16], &mut out);
    out
}
