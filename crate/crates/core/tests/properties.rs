use proptest::prelude::*;
use qg4::construct::{construction_t, random_construction_t_spec, seeded_semilinear_composition};
use qg4::decompose::{make_proper, minimality_conditions, reduce_decomposition, DecompositionTree};
use qg4::{are_isotopic, autotopy_group, is_autotopy, Isotopy, Perm, Quasigroup};

fn perm() -> impl Strategy<Value = Perm> {
    (0usize..24).prop_map(|i| Perm::all()[i])
}

fn isotopy(arity: usize) -> impl Strategy<Value = Isotopy> {
    prop::collection::vec(perm(), arity + 1).prop_map(|parts| Isotopy::new(parts).unwrap())
}

fn composition(max_arity: usize) -> impl Strategy<Value = (DecompositionTree, Quasigroup)> {
    (2..=max_arity, any::<u64>())
        .prop_map(|(n, seed)| seeded_semilinear_composition(n, seed).unwrap())
}

fn quasigroup_with_isotopy(max_arity: usize) -> impl Strategy<Value = (Quasigroup, Isotopy)> {
    composition(max_arity).prop_flat_map(|(_, q)| {
        let n = q.arity();
        (Just(q), isotopy(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perm_text_round_trip(p in perm()) {
        prop_assert_eq!(Perm::from_cycles(&p.to_string()).unwrap(), p);
        prop_assert_eq!(p.compose(&p.inverse()), Perm::IDENTITY);
    }

    #[test]
    fn isotopy_text_round_trip(t in isotopy(3)) {
        prop_assert_eq!(Isotopy::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn qg4_round_trip((_, q) in composition(4)) {
        prop_assert_eq!(Quasigroup::parse_qg4(q.to_qg4().as_bytes()).unwrap(), q);
    }

    #[test]
    fn isotopy_action_inverts((q, t) in quasigroup_with_isotopy(4)) {
        let moved = q.apply_isotopy(&t).unwrap();
        prop_assert_eq!(moved.apply_isotopy(&t.inverse()).unwrap(), q);
    }

    #[test]
    fn isotopy_search_recovers_a_witness((q, t) in quasigroup_with_isotopy(3)) {
        let moved = q.apply_isotopy(&t).unwrap();
        let found = are_isotopic(&q, &moved).unwrap().expect("isotopic by construction");
        prop_assert_eq!(q.apply_isotopy(&found).unwrap(), moved);
    }

    #[test]
    fn group_order_is_an_isotopy_invariant((q, t) in quasigroup_with_isotopy(4)) {
        let a = autotopy_group(&q).unwrap();
        let b = autotopy_group(&q.apply_isotopy(&t).unwrap()).unwrap();
        prop_assert_eq!(a.order, b.order);
        prop_assert_eq!(a.order % 2, 0);
    }

    #[test]
    fn conjugated_autotopies_stay_autotopies((q, t) in quasigroup_with_isotopy(3)) {
        let moved = q.apply_isotopy(&t).unwrap();
        for g in autotopy_group(&q).unwrap().generators {
            let conj = t.inverse().compose(&g).compose(&t);
            prop_assert!(is_autotopy(&moved, &conj).unwrap());
        }
    }

    #[test]
    fn tree_json_round_trip((t, _) in composition(5)) {
        prop_assert_eq!(DecompositionTree::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn reroot_evaluates_to_the_inverse((t, q) in composition(4), j in 1usize..=4) {
        let j = 1 + (j - 1) % q.arity();
        prop_assert_eq!(t.reroot(j).unwrap().eval().unwrap(), q.inverse(j).unwrap());
    }

    #[test]
    fn reduction_isotopy_is_exact((t, q) in composition(5)) {
        let (r, i) = reduce_decomposition(&make_proper(&t).unwrap()).unwrap();
        prop_assert_eq!(q.apply_isotopy(&i).unwrap(), r.eval().unwrap());
    }

    #[test]
    fn construction_t_trees_are_minimal(seed in any::<u64>(), half in 1usize..=4) {
        let (tree, q) = construction_t(&random_construction_t_spec(2 * half + 1, seed).unwrap()).unwrap();
        prop_assert_eq!(q.arity(), 2 * half + 1);
        prop_assert!(minimality_conditions(&tree).unwrap().all_hold());
    }
}
