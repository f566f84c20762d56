use super::*;
use crate::bigerm::{BigermInput, Delta};
use crate::series::{qi, Scalar};
use crate::valuesets::{lambda_delta, value_set, SetKind};

fn input(b1: (&str, &str), b2: (&str, &str)) -> Source {
    BigermInput::new(b1, b2).into()
}

fn nf(b1: (&str, &str), b2: (&str, &str)) -> NormalForm {
    normal_form(&input(b1, b2), DEFAULT_CAP).unwrap()
}

#[test]
fn node_is_case_d() {
    let n = nf(("t", "0"), ("0", "t"));
    assert_eq!(n.case(), Case::D);
    assert!(n.terms.is_empty());
    assert_eq!(n.invariants.intersection, 1);
}

#[test]
fn two_cusps_with_trivial_pivots() {
    let n = nf(("t^2", "t^3"), ("t^7", "t^2"));
    assert_eq!(n.case(), Case::B, "{}", n.render());
    assert!(n.terms.iter().all(|t| t.coeff.is_one() && t.role == TermRole::Pivot));
    assert_eq!((n.shape.j1, n.shape.j2), (Some(3), Some(7)));
}

#[test]
fn parallel_cusps_keep_their_ratio() {
    let n = nf(("t^2", "t^5"), ("t^2", "3*t^5"));
    assert_eq!(n.invariants.delta(), Delta::Tangent);
    assert_eq!(n.case(), Case::CPrime, "{}", n.render());
    let coeffs: Vec<_> = n.terms.iter().map(|t| t.coeff.clone()).collect();
    assert_eq!(coeffs, vec![qi(1), qi(3)]);
    assert_eq!(n.terms[1].role, TermRole::Kept);
}

#[test]
fn eliminates_removable_term() {
    let src = input(("t^2", "t^5 + t^7"), ("t^3", "t^7"));
    let inv = invariants(&src, DEFAULT_CAP).unwrap();
    let red = reduce_a_delta(&inv.phi, inv.cutoff).unwrap();
    assert!(red.eliminated.contains(&(1, 7)), "{:?}", red.eliminated);
    assert!(red.reduced.free_component(1).coeff_or_zero(7).is_zero());
    let again = reduce_a_delta(&red.reduced, inv.cutoff).unwrap();
    assert_eq!(again.reduced, red.reduced);
    assert!(again.eliminated.is_empty());
}

#[test]
fn reduction_preserves_value_sets() {
    let src = input(("t^3", "t^4 + t^5 + 2*t^7"), ("t^2", "t^3 - t^4"));
    let inv = invariants(&src, DEFAULT_CAP).unwrap();
    let red = reduce_a_delta(&inv.phi, inv.cutoff).unwrap();
    let after = Source::Jet(red.reduced.clone());
    let inv2 = invariants(&after, DEFAULT_CAP).unwrap();
    assert_eq!(inv2.gamma.points(), inv.gamma.points());
    assert_eq!(inv2.lambda_delta.points(), inv.lambda_delta.points());
}

#[test]
fn kernel_removability_matches_fibers() {
    for src in [
        input(("t^2", "t^5 + t^7"), ("t^3", "t^7")),
        input(("t^3", "t^4 + t^5"), ("t^2", "t^3")),
        input(("t^2", "t^3"), ("t^9 + t^11", "t^2")),
    ] {
        let inv = invariants(&src, DEFAULT_CAP).unwrap();
        let red = reduce_a_delta(&inv.phi, inv.cutoff).unwrap();
        let w = inv.lambda_delta.window();
        let w = (2 * w.0, 2 * w.1);
        let phi = src.realize(w.0.max(w.1) + 4).unwrap();
        let (ld, _) = value_set(&phi, SetKind::LambdaDelta, w).unwrap();
        let fibers = removable_exponents(&ld, inv.multiplicity(), inv.cutoff).unwrap();
        assert_eq!(red.removable, fibers, "{}", inv.phi);
    }
}

#[test]
fn flow_changes_only_the_targeted_order() {
    let src = input(("t^2", "t^5 + t^7"), ("t^3", "t^7"));
    let inv = invariants(&src, DEFAULT_CAP).unwrap();
    let (_, table) = lambda_delta(&inv.phi).unwrap();
    let p = table.keys().find(|p| p.0 == 7 && p.1 >= 7).expect("order-7 witness");
    let crate::valuesets::Witness::Differential(omega) = table.get(p).unwrap() else {
        panic!("differential witness expected");
    };
    let corr = correction_from_witness(&omega, &inv.phi, 7).unwrap();
    let moved = corr.flow(&inv.phi).unwrap();
    assert!(moved.free_component(1).agrees_with(inv.phi.free_component(1), 6));
    assert!(moved.free_component(2).agrees_with(inv.phi.free_component(2), 6));
    assert_ne!(moved.free_component(1).coeff_or_zero(7), inv.phi.free_component(1).coeff_or_zero(7));
}
