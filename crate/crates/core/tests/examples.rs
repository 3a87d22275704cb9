//! Worked examples for every module, checked through the public API.

use qg4::autotopy::{atp_join, is_transitive, propagate};
use qg4::construct::{
    builtin, chain, chain_tree, conjugate_by_tau, construction_t, l_bullet, linear,
    random_construction_t_spec, ConstructionTSpec,
};
use qg4::decompose::{
    are_coherent, find_split, full_decomposition, is_reduced, lower_bound_predict, merge,
    minimality_conditions, proper_decomposition, reduce_decomposition, tree_stats, uniform_colour,
    DecompositionTree, Subtree,
};
use qg4::semilinear::{
    is_linear, is_semilinear_in_pair, native_elements, semilinear_profile, PairPartition,
};
use qg4::{
    are_isotopic, autotopy_group, compose_at, is_autotopy, Error, Isotopy, Perm, Quasigroup,
};

fn z4() -> Quasigroup {
    builtin("z4").unwrap()
}

fn xor2() -> Quasigroup {
    builtin("xor2").unwrap()
}

fn p(text: &str) -> Perm {
    Perm::from_cycles(text).unwrap()
}

fn iso(text: &str) -> Isotopy {
    Isotopy::parse(text).unwrap()
}

#[test]
fn parsing() {
    let id = Quasigroup::parse_qg4(b"qg4 1\n0123").unwrap();
    assert_eq!(id.arity(), 1);
    assert_eq!(id.eval(&[2]).unwrap(), 2);
    assert!(matches!(
        Quasigroup::parse_qg4(b"qg4 2\n0123100223013210"),
        Err(Error::NotLatin { .. })
    ));
    assert!(matches!(
        Quasigroup::parse_qg4(b"qg4 2\n0123"),
        Err(Error::DigitCount { .. })
    ));
    assert!(matches!(
        Quasigroup::parse_qg4(b"qgX 2\n"),
        Err(Error::MalformedHeader(_))
    ));
}

#[test]
fn evaluation_and_sections() {
    assert_eq!(xor2().eval(&[2, 3]).unwrap(), 1);
    assert_eq!(z4().eval(&[2, 3]).unwrap(), 1);
    assert_eq!(linear(4).unwrap().eval(&[0; 4]).unwrap(), 0);
    assert!(xor2().section(1, &[0]).unwrap().is_identity());
    assert_eq!(
        z4().section(2, &[1]).unwrap(),
        Perm::from_images([1, 2, 3, 0]).unwrap()
    );
}

#[test]
fn inverses_solve_for_an_argument() {
    let inv = z4().inverse(1).unwrap();
    for x in 0..4 {
        for y in 0..4 {
            let v = z4().eval(&[x, y]).unwrap();
            assert_eq!(inv.eval(&[v, y]).unwrap(), x);
        }
    }
}

#[test]
fn tau_conjugate_and_composition() {
    let g = conjugate_by_tau(&l_bullet(3).unwrap()).unwrap();
    let tau = p("(12)");
    for x in [[0, 0, 0], [1, 2, 3], [2, 2, 1]] {
        let image = l_bullet(3).unwrap().eval(&x.map(|v| tau.apply(v))).unwrap();
        assert_eq!(g.eval(&x).unwrap(), tau.apply(image));
    }
    let c = compose_at(&xor2(), &z4(), 2).unwrap();
    assert_eq!(c.eval(&[1, 2, 3]).unwrap(), 0);
    assert_eq!(c, builtin("g3").unwrap());
}

#[test]
fn autotopy_checks() {
    assert!(is_autotopy(&z4(), &iso("(Id, (0123), (0321))")).unwrap());
    assert!(is_autotopy(&z4(), &iso("((02)(13), (02)(13), Id)")).unwrap());
    assert!(!is_autotopy(&z4(), &iso("(Id, (01), Id)")).unwrap());
    assert!(propagate(&z4(), &[0, 0, 0], Perm::IDENTITY)
        .unwrap()
        .unwrap()
        .is_identity());
    assert_eq!(
        propagate(&z4(), &[0, 0, 0], p("(13)")).unwrap(),
        Some(iso("((13), (13), (13))"))
    );
    assert_eq!(propagate(&z4(), &[0, 0, 0], p("(123)")).unwrap(), None);
    assert_eq!(
        propagate(&z4(), &[1, 0, 0], Perm::IDENTITY),
        Err(Error::NotInCode)
    );
}

#[test]
fn group_orders_and_transitivity() {
    assert_eq!(autotopy_group(&z4()).unwrap().order, 32);
    assert_eq!(autotopy_group(&xor2()).unwrap().order, 96);
    assert_eq!(autotopy_group(&l_bullet(3).unwrap()).unwrap().order, 16);
    assert!(is_transitive(&linear(2).unwrap()).unwrap());
    assert!(is_transitive(&linear(3).unwrap()).unwrap());
    assert!(is_transitive(&z4()).unwrap());
    assert!(!is_transitive(&l_bullet(3).unwrap()).unwrap());
}

#[test]
fn isotopy_search() {
    assert_eq!(are_isotopic(&xor2(), &z4()).unwrap(), None);
    let theta = iso("((01), (0123), (13))");
    let moved = z4().apply_isotopy(&theta).unwrap();
    let found = are_isotopic(&z4(), &moved).unwrap().unwrap();
    assert_eq!(z4().apply_isotopy(&found).unwrap(), moved);
    let l3 = compose_at(&xor2(), &xor2(), 1).unwrap();
    assert!(are_isotopic(&linear(3).unwrap(), &l3).unwrap().is_some());
}

#[test]
fn joined_groups() {
    let a = autotopy_group(&xor2()).unwrap();
    let joined = atp_join(&a, &a, 2).unwrap();
    assert_eq!(
        joined.order,
        autotopy_group(&linear(3).unwrap()).unwrap().order
    );
    assert_eq!(joined.order, 384);
    let trivial = qg4::AutotopyGroup::from_elements(2, vec![Isotopy::identity(2)]);
    assert_eq!(atp_join(&trivial, &trivial, 2).unwrap().order, 1);
}

#[test]
fn ternary_classes_are_distinct() {
    let reps = [
        linear(3).unwrap(),
        l_bullet(3).unwrap(),
        builtin("g3").unwrap(),
        builtin("h3").unwrap(),
    ];
    for i in 0..4 {
        for j in i + 1..4 {
            assert_eq!(
                are_isotopic(&reps[i], &reps[j]).unwrap(),
                None,
                "{i} vs {j}"
            );
        }
    }
    let foreign = p("(01)(23)");
    let g_auto = Isotopy::new(vec![foreign, foreign, Perm::IDENTITY, Perm::IDENTITY]).unwrap();
    assert!(is_autotopy(&reps[2], &g_auto).unwrap());
    let other = p("(03)(12)");
    let h_auto = Isotopy::new(vec![foreign, foreign, foreign, other]).unwrap();
    assert!(is_autotopy(&reps[3], &h_auto).unwrap());
    assert!(!is_autotopy(&reps[3], &Isotopy::uniform(3, foreign)).unwrap());
}

#[test]
fn semilinearity() {
    let pz = semilinear_profile(&z4());
    assert_eq!(pz.assignments.len(), 1);
    assert!(pz.assignments[0]
        .iter()
        .all(|&q| q == PairPartition::with_zero(2).unwrap()));
    assert_eq!(semilinear_profile(&xor2()).assignments.len(), 3);
    assert!(!semilinear_profile(&chain(5).unwrap()).is_semilinear());
    let p02 = PairPartition::with_zero(2).unwrap();
    let p01 = PairPartition::with_zero(1).unwrap();
    assert!(is_semilinear_in_pair(&z4(), 1, p02));
    assert!(!is_semilinear_in_pair(&z4(), 1, p01));
    assert!(PairPartition::ALL
        .iter()
        .all(|&q| is_semilinear_in_pair(&xor2(), 0, q)));
    assert!((2..=5).all(|n| is_linear(&linear(n).unwrap())));
    assert!(!is_linear(&l_bullet(3).unwrap()));
    assert!(!is_linear(&z4()));
}

#[test]
fn native_elements_of_pairs() {
    let n02 = native_elements(2).unwrap();
    assert_eq!(n02.native_involution, p("(02)(13)"));
    assert_eq!(n02.native_transpositions, [p("(02)"), p("(13)")]);
    let mut cycles = n02.native_cycles.to_vec();
    cycles.sort();
    let mut want = vec![p("(0123)"), p("(0321)")];
    want.sort();
    assert_eq!(cycles, want);
    assert_eq!(native_elements(1).unwrap().native_involution, p("(01)(23)"));
}

#[test]
fn splitting() {
    assert_eq!(
        find_split(&chain(5).unwrap()).unwrap().subset,
        vec![1, 2, 3]
    );
    assert_eq!(find_split(&linear(4).unwrap()).unwrap().subset, vec![1, 2]);
    assert!(find_split(&l_bullet(3).unwrap()).is_none());
    assert_eq!(full_decomposition(&xor2()).unwrap().node_count(), 1);
    let t7 = full_decomposition(&chain(7).unwrap()).unwrap();
    assert_eq!(t7.node_count(), 3);
    assert!((0..3).all(|u| t7.label(u).arity() == 3));
    assert_eq!(t7.eval().unwrap(), chain(7).unwrap());
}

#[test]
fn coherence_and_merging() {
    let xx = DecompositionTree::from_subtree(Subtree::node(
        xor2(),
        vec![Subtree::leaves(xor2(), [1, 2]), Subtree::Var(3)],
    ))
    .unwrap();
    assert!(are_coherent(&xx, 0, 1).unwrap());
    assert_eq!(merge(&xx, 0, 1).unwrap().label(0), &linear(3).unwrap());
    let zz = DecompositionTree::from_subtree(Subtree::node(
        z4(),
        vec![Subtree::leaves(z4(), [1, 2]), Subtree::Var(3)],
    ))
    .unwrap();
    assert!(are_coherent(&zz, 0, 1).unwrap());
    let c5 = chain_tree(5).unwrap();
    assert!(!are_coherent(&c5, 0, 1).unwrap());
    assert_eq!(
        are_coherent(&chain_tree(7).unwrap(), 0, 2),
        Err(Error::NotAdjacent(0, 2))
    );
    assert_eq!(
        proper_decomposition(&linear(5).unwrap())
            .unwrap()
            .node_count(),
        1
    );
    let proper = proper_decomposition(&chain(5).unwrap()).unwrap();
    assert_eq!(proper.node_count(), 2);
    assert_eq!(proper.eval().unwrap(), chain(5).unwrap());
}

#[test]
fn reduction() {
    let (r, i) = reduce_decomposition(&chain_tree(5).unwrap()).unwrap();
    let before = chain(5).unwrap();
    assert_eq!(before.apply_isotopy(&i).unwrap(), r.eval().unwrap());
    assert!(are_isotopic(&before, &r.eval().unwrap()).unwrap().is_some());

    let z03 = z4().apply_isotopy(&Isotopy::uniform(2, p("(23)"))).unwrap();
    let z01 = conjugate_by_tau(&z4()).unwrap();
    let mixed = DecompositionTree::from_subtree(Subtree::node(
        z03,
        vec![Subtree::Var(1), Subtree::leaves(z01, [2, 3])],
    ))
    .unwrap();
    let (r, i) = reduce_decomposition(&mixed).unwrap();
    assert!(is_reduced(&r));
    let colours: Vec<Option<u8>> = (0..2).map(|u| uniform_colour(r.label(u))).collect();
    assert_eq!(colours, vec![Some(1), Some(2)]);
    assert_eq!(
        mixed.eval().unwrap().apply_isotopy(&i).unwrap(),
        r.eval().unwrap()
    );
}

#[test]
fn chain_statistics() {
    let s = tree_stats(&chain_tree(5).unwrap());
    assert_eq!(
        (
            s.leaves,
            s.nodes,
            s.bridges,
            s.forks,
            s.bald,
            s.bald_bunches,
            s.bunches
        ),
        (6, 2, 0, 0, 0, 0, 2)
    );
    assert_eq!(lower_bound_predict(&s), 16);
    let s6 = tree_stats(&chain_tree(6).unwrap());
    assert_eq!((s6.leaves, s6.nodes), (7, 2));
    assert_eq!(lower_bound_predict(&s6), 32);
    assert!(minimality_conditions(&chain_tree(5).unwrap())
        .unwrap()
        .all_hold());
    assert!(
        !minimality_conditions(&chain_tree(6).unwrap())
            .unwrap()
            .max_degree_four
    );
}

#[test]
fn minimality_failures() {
    let g3 = builtin("g3").unwrap();
    let f = conjugate_by_tau(&l_bullet(3).unwrap()).unwrap();
    let with_g = DecompositionTree::from_subtree(Subtree::node(
        f,
        vec![
            Subtree::leaves(g3, [1, 2, 3]),
            Subtree::Var(4),
            Subtree::Var(5),
        ],
    ))
    .unwrap();
    assert!(!minimality_conditions(&with_g).unwrap().degree_four_labels);
    let fork = DecompositionTree::from_subtree(Subtree::node(
        l_bullet(3).unwrap(),
        vec![
            Subtree::leaves(conjugate_by_tau(&z4()).unwrap(), [1, 2]),
            Subtree::Var(3),
            Subtree::Var(4),
        ],
    ))
    .unwrap();
    assert!(!minimality_conditions(&fork).unwrap().no_forks);
}

#[test]
fn construction_t_examples() {
    let (_, q) = construction_t(&ConstructionTSpec::path(5)).unwrap();
    assert!(are_isotopic(&q, &chain(5).unwrap()).unwrap().is_some());
    let (_, single) = construction_t(&ConstructionTSpec::path(3)).unwrap();
    assert!(are_isotopic(&single, &l_bullet(3).unwrap())
        .unwrap()
        .is_some());
    assert_eq!(autotopy_group(&single).unwrap().order, 16);
    assert!(random_construction_t_spec(6, 0).is_err());
}
