#![allow(dead_code)]

use qg4::construct::{
    builtin, chain_tree, construction_t, l_bullet, linear, random_construction_t_spec,
    seeded_semilinear_composition,
};
use qg4::decompose::{make_proper, reduce_decomposition, DecompositionTree, Subtree};
use qg4::Quasigroup;

pub struct Member {
    pub name: String,
    pub q: Quasigroup,
    pub tree: Option<DecompositionTree>,
}

impl Member {
    fn plain(name: impl Into<String>, q: Quasigroup) -> Member {
        Member {
            name: name.into(),
            q,
            tree: None,
        }
    }

    fn with_tree(name: impl Into<String>, tree: DecompositionTree) -> Member {
        Member {
            name: name.into(),
            q: tree.eval().unwrap(),
            tree: Some(tree),
        }
    }
}

/// Builtins, linear and bullet quasigroups, the chains, 100 seeded
/// Construction T outputs and 100 random semilinear compositions, all of
/// arity at most 6.
pub fn corpus() -> Vec<Member> {
    let mut out = Vec::new();
    for name in ["xor2", "z4", "g3", "h3"] {
        out.push(Member::plain(name, builtin(name).unwrap()));
    }
    for n in 2..=6 {
        out.push(Member::plain(format!("linear({n})"), linear(n).unwrap()));
    }
    for n in 2..=5 {
        out.push(Member::plain(
            format!("l_bullet({n})"),
            l_bullet(n).unwrap(),
        ));
    }
    for n in 5..=6 {
        out.push(Member::with_tree(
            format!("chain({n})"),
            chain_tree(n).unwrap(),
        ));
    }
    out.extend(construction_t_corpus());
    out.extend(composition_corpus());
    out
}

pub fn construction_t_corpus() -> Vec<Member> {
    (0..100u64)
        .map(|seed| {
            let n = if seed % 2 == 0 { 5 } else { 3 };
            let spec = random_construction_t_spec(n, seed).unwrap();
            let (tree, _) = construction_t(&spec).unwrap();
            Member::with_tree(format!("construction-t(n={n}, seed={seed})"), tree)
        })
        .collect()
}

pub fn composition_corpus() -> Vec<Member> {
    (0..100u64)
        .map(|seed| {
            let n = 2 + (seed % 5) as usize;
            let (tree, _) = seeded_semilinear_composition(n, seed).unwrap();
            Member::with_tree(format!("composition(n={n}, seed={seed})"), tree)
        })
        .collect()
}

/// The proper, reduced form of a tree and its evaluation.
pub fn reduced(t: &DecompositionTree) -> (DecompositionTree, Quasigroup) {
    let (r, _) = reduce_decomposition(&make_proper(t).unwrap()).unwrap();
    let q = r.eval().unwrap();
    (r, q)
}

/// The 12-node tree with one bald node, five bridges and one fork, rooted at
/// the node alpha whose first leaf is the output. Labels are linear
/// placeholders of the right arity.
pub fn reference_tree() -> DecompositionTree {
    let mut next = 0;
    let mut var = || {
        next += 1;
        Subtree::Var(next)
    };
    let node = |children: Vec<Subtree>| Subtree::node(linear(children.len()).unwrap(), children);
    let mu = node(vec![var(), var(), var(), var()]);
    let lambda = node(vec![mu, var(), var()]);
    let kappa = node(vec![var(), var(), var()]);
    let iota = node(vec![kappa, lambda]);
    let theta = node(vec![iota, var()]);
    let eta = node(vec![theta, var()]);
    let zeta = node(vec![eta, var()]);
    let beta = node(vec![var(), var()]);
    let delta = node(vec![beta, var()]);
    let epsilon = node(vec![zeta, delta, var()]);
    let gamma = node(vec![epsilon, var()]);
    let alpha = node(vec![gamma, var(), var()]);
    DecompositionTree::from_subtree(alpha).unwrap()
}
