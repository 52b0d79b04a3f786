use proptest::prelude::*;

use qset::algebra::{
    difference, distinguishable_subqsets, ordered_pair, power_qc, strong_singleton_of, sub_qset_of_card, union,
};
use qset::notation::{parse, print_canonical};
use qset::relations::{ext_eq, indist, quotient, weak_ext_indist};
use qset::statistics::{enumerate_occupancies, mb_weight, microstate_count, StatKind};
use qset::{Cardinal, Entity, QSet};

fn atom() -> impl Strategy<Value = Entity> {
    prop_oneof![
        prop::sample::select(vec!["e", "p"]).prop_map(|s| Entity::m_atom(s).unwrap()),
        prop::sample::select(vec!["A", "B"]).prop_map(|s| Entity::macro_atom(s).unwrap()),
        (0u64..4).prop_map(Entity::label),
    ]
}

fn entity() -> impl Strategy<Value = Entity> {
    atom().prop_recursive(3, 24, 5, |inner| {
        prop::collection::vec((inner, 1u64..4), 0..5).prop_map(|parts| Entity::Q(QSet::from_elements(parts).unwrap()))
    })
}

fn qset() -> impl Strategy<Value = QSet> {
    prop::collection::vec((entity(), 1u64..5), 0..5).prop_map(|parts| QSet::from_elements(parts).unwrap())
}

proptest! {
    #[test]
    fn canonical_text_round_trips(e in entity()) {
        let text = print_canonical(&e);
        let back = parse(&text).unwrap();
        prop_assert_eq!(print_canonical(&back), text);
        prop_assert!(indist(&e, &back));
    }

    #[test]
    fn canonicalization_is_idempotent(x in qset()) {
        let again = QSet::from_elements(x.classes()).unwrap();
        prop_assert_eq!(again.text(), x.text());
        prop_assert!(x.validate().is_ok());
    }

    #[test]
    fn indist_is_an_equivalence(a in entity(), b in entity(), c in entity()) {
        prop_assert!(indist(&a, &a));
        prop_assert_eq!(indist(&a, &b), indist(&b, &a));
        if indist(&a, &b) && indist(&b, &c) {
            prop_assert!(indist(&a, &c));
        }
    }

    #[test]
    fn ext_eq_implies_indist(a in entity(), b in entity()) {
        match ext_eq(&a, &b) {
            Ok(true) => prop_assert!(indist(&a, &b)),
            Ok(false) => {}
            Err(_) => prop_assert!(a.is_m_atom() || b.is_m_atom()),
        }
    }

    #[test]
    fn weak_extensionality_agrees_with_canonical_text(x in qset(), y in qset()) {
        prop_assert_eq!(weak_ext_indist(&x, &y), x.text() == y.text());
    }

    #[test]
    fn quotient_counts_sum_to_qc(x in qset()) {
        prop_assert_eq!(quotient(&x).total(), x.qc());
    }

    #[test]
    fn empty_iff_zero_qc(x in qset()) {
        prop_assert_eq!(x.is_empty(), x.qc() == Cardinal::ZERO);
    }

    #[test]
    fn difference_then_union_restores(x in qset()) {
        prop_assume!(!x.is_empty());
        let (s, rest) = strong_singleton_of(&x).unwrap();
        prop_assert_eq!(rest.qc().get() + 1, x.qc().get());
        prop_assert_eq!(&difference(&x, &s).unwrap(), &rest);
        prop_assert_eq!(union(s.inner(), &rest).unwrap(), x);
    }

    #[test]
    fn sub_qsets_have_every_smaller_cardinal(x in qset()) {
        for beta in 0..=x.qc().get() {
            let sub = sub_qset_of_card(&x, Cardinal::new(beta)).unwrap();
            prop_assert_eq!(sub.qc().get(), beta);
            prop_assert!(sub.is_subqset_of(&x));
        }
    }

    #[test]
    fn distinguishable_bounded_by_power(x in qset()) {
        let power = power_qc(&x).unwrap();
        let distinct = distinguishable_subqsets(&x).unwrap();
        prop_assert!(distinct <= power);
        prop_assert_eq!(distinct == power, x.classes().all(|(_, c)| c == 1));
    }

    #[test]
    fn ordered_pairs_are_symmetric_only_on_indistinguishables(a in entity(), b in entity()) {
        let ab = Entity::Q(ordered_pair(&a, &b).unwrap().into_encoding());
        let ba = Entity::Q(ordered_pair(&b, &a).unwrap().into_encoding());
        prop_assert_eq!(indist(&ab, &ba), indist(&a, &b));
    }

    #[test]
    fn multinomial_weights_sum_to_mb(n in 0u64..7, k in 1u64..7) {
        let total: u128 = enumerate_occupancies(n, k, false)
            .unwrap()
            .iter()
            .map(|v| mb_weight(v).unwrap().get())
            .sum();
        prop_assert_eq!(Cardinal::new(total), microstate_count(n, k, StatKind::MaxwellBoltzmann).unwrap());
    }
}
