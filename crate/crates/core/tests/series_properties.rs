use bigerm::series::{q, Coefficient, Param, UniSeries};
use proptest::prelude::*;

const T: usize = 12;

fn rational() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn series(min_order: usize) -> impl Strategy<Value = UniSeries> {
    prop::collection::vec(rational(), T + 1 - min_order)
        .prop_map(move |cs| UniSeries::from_terms(Param::T1, T, cs.into_iter().enumerate().map(|(i, c)| (i + min_order, c))))
}

fn order_one() -> impl Strategy<Value = UniSeries> {
    (rational().prop_filter("nonzero", |c| *c != 0), series(2)).prop_map(|(lead, rest)| &UniSeries::monomial(Param::T1, lead, 1, T) + &rest)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn multiplication_is_associative(a in series(0), b in series(0), c in series(0)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in series(0), b in series(0), c in series(0)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn addition_is_commutative(a in series(0), b in series(0)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn reparametrization_round_trip(s in series(1), rho in order_one()) {
        let inv = rho.compositional_inverse().unwrap();
        let back = s.reparametrize(&rho).unwrap().reparametrize(&inv).unwrap();
        let t = back.trunc().min(s.trunc());
        prop_assert!(back.agrees_with(&s, t), "{} vs {}", back, s);
    }

    #[test]
    fn orders_add_under_multiplication(a in series(1), b in series(2)) {
        let p = &a * &b;
        if let (Some(x), Some(y)) = (a.ord(), b.ord()) {
            if x + y <= p.trunc() {
                prop_assert_eq!(p.ord(), Some(x + y));
            }
        }
    }

    #[test]
    fn chain_rule(s in series(0), rho in order_one()) {
        let lhs = s.compose(&rho).derive();
        let rhs = &s.derive().compose(&rho) * &rho.derive();
        let t = lhs.trunc().min(rhs.trunc());
        prop_assert!(lhs.agrees_with(&rhs, t));
    }
}
