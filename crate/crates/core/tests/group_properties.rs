use bigerm::bigerm::{detect_case, random_group_element, random_unit_homothety, Bigerm, GroupClass};
use bigerm::random::random_bigerm;
use proptest::prelude::*;

const T: usize = 18;

fn class_for(phi: &Bigerm, general: bool) -> GroupClass {
    if general {
        GroupClass::General
    } else {
        GroupClass::for_delta(phi.delta())
    }
}

fn same_up_to_truncation(a: &Bigerm, b: &Bigerm) -> bool {
    (1..=2).all(|i| {
        let (x, y) = (a.branch(i), b.branch(i));
        let t = x.trunc().min(y.trunc());
        x.x().agrees_with(y.x(), t) && x.y().agrees_with(y.y(), t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn a_delta_preserves_multiplicities_and_case(germ in any::<u64>(), elem in any::<u64>()) {
        let phi = random_bigerm(germ, 3, T);
        let g = random_group_element(elem, GroupClass::for_delta(phi.delta()), 4, T);
        let psi = g.apply(&phi).unwrap();
        prop_assert_eq!(psi.multiplicity(), phi.multiplicity());
        prop_assert_eq!(detect_case(psi.branch(1), psi.branch(2)).unwrap(), phi.delta());
        let normal = psi.puiseux_normalize().unwrap();
        prop_assert_eq!(normal.delta(), phi.delta());
    }

    #[test]
    fn homotheties_preserve_multiplicities_and_case(germ in any::<u64>(), elem in any::<u64>()) {
        let phi = random_bigerm(germ, 3, T);
        let h = random_unit_homothety(elem, phi.multiplicity(), phi.delta(), T);
        let psi = h.apply(&phi).unwrap();
        prop_assert_eq!(psi.multiplicity(), phi.multiplicity());
        prop_assert_eq!(detect_case(psi.branch(1), psi.branch(2)).unwrap(), phi.delta());
    }

    #[test]
    fn inverse_undoes_the_action(germ in any::<u64>(), elem in any::<u64>(), general in any::<bool>()) {
        let phi = random_bigerm(germ, 3, T);
        let g = random_group_element(elem, class_for(&phi, general), 4, T);
        let back = g.inverse().unwrap().apply(&g.apply(&phi).unwrap()).unwrap();
        prop_assert!(same_up_to_truncation(&back, &phi), "{} came back as {}", phi, back);
    }
}
