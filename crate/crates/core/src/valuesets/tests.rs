use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bigerm::{Bigerm, BigermInput, Branch};
use crate::series::{parse_bipoly, parse_series, qi, Coefficient, Param, Scalar};

fn bg(b1: (&str, &str), b2: (&str, &str), w: usize) -> Bigerm {
    BigermInput::new(b1, b2).realize(w).unwrap()
}

fn cusps(w: usize) -> Bigerm {
    bg(("t^2", "t^3"), ("t^3", "t^2"), w)
}

fn tangent_pair(w: usize) -> Bigerm {
    bg(("t^2", "t^5"), ("t^3", "t^7"), w)
}

fn poly(s: &str) -> BiPoly {
    parse_bipoly(s, 64).unwrap()
}

fn branch(x: &str, y: &str, w: usize) -> Branch {
    Branch::new(parse_series(x, Param::T1, w).unwrap(), parse_series(y, Param::T1, w).unwrap()).unwrap()
}

fn quadrant(from: ValuePoint, window: ValuePoint) -> impl Iterator<Item = ValuePoint> {
    (from.0..=window.0).flat_map(move |a| (from.1..=window.1).map(move |b| (a, b)))
}

/// Orders of random rational combinations of the generators.
fn brute_force(gens: &[Generator], window: ValuePoint, rounds: usize, seed: u64) -> BTreeSet<ValuePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeSet::new();
    for _ in 0..rounds {
        let k = rng.gen_range(1..=4.min(gens.len()));
        let mut acc: Option<[UniSeries; 2]> = None;
        for _ in 0..k {
            let g = &gens[rng.gen_range(0..gens.len())];
            let c = Coefficient::from(rng.gen_range(-3i64..=3));
            let term = [g.values[0].scale(&c), g.values[1].scale(&c)];
            acc = Some(match acc {
                None => term,
                Some([a, b]) => [&a + &term[0], &b + &term[1]],
            });
        }
        let [a, b] = acc.unwrap();
        if let (Some(x), Some(y)) = (a.ord(), b.ord()) {
            if x <= window.0 && y <= window.1 {
                found.insert((x, y));
            }
        }
    }
    found
}

fn assert_witnesses(phi: &Bigerm, kind: SetKind, set: &ValueSet, table: &WitnessTable) {
    assert_eq!(table.len(), set.len());
    for p in table.keys() {
        let w = table.get(p).unwrap();
        assert_eq!(w.value(phi, kind), Ok(p), "witness {} for {:?}", w.to_literal(), p);
    }
}

#[test]
fn value_of_function_examples() {
    let phi = cusps(12);
    assert_eq!(value_of_function(&poly("y"), &phi), Ok((3, 2)));
    assert_eq!(value_of_function(&poly("x*y"), &phi), Ok((5, 5)));
    assert_eq!(value_of_function(&poly("y^2 - x^3"), &phi), Err(BranchVanishing(1)));
}

#[test]
fn value_of_differential_examples() {
    let phi = cusps(12);
    let dx = Differential::dx_monomial(0, 0);
    assert_eq!(value_of_differential(&dx, &phi), Ok((2, 3)));
    let rot = Differential::new(poly("y"), poly("-x"), qi(0));
    assert_eq!(value_of_differential(&rot, &phi), Ok((5, 5)));
    let eta = poly("x^2*y + 3*y^3 - 2*x*y");
    assert_eq!(value_of_differential(&Differential::exact(&eta), &phi), value_of_function(&eta, &phi));
}

#[test]
fn node_gamma() {
    let phi = bg(("t", "0"), ("0", "t"), 12);
    let (set, table) = gamma(&phi).unwrap();
    assert_eq!(set.conductor(), Some((1, 1)));
    let mut expected: BTreeSet<ValuePoint> = quadrant((1, 1), set.window()).collect();
    expected.insert((0, 0));
    assert_eq!(set.points(), &expected);
    assert_witnesses(&phi, SetKind::Gamma, &set, &table);
    assert_eq!(set.maximal_points().unwrap(), BTreeSet::from([(0, 0)]));
}

#[test]
fn cusp_pair_gamma_conductor() {
    let phi = cusps(16);
    let (set, table) = gamma(&phi).unwrap();
    assert_eq!(set.conductor(), Some((6, 6)));
    assert!(set.contains((2, 3)) && set.contains((3, 2)));
    assert_witnesses(&phi, SetKind::Gamma, &set, &table);
}

#[test]
fn gamma_contains_value_of_x() {
    let phi = tangent_pair(34);
    let (set, _) = gamma(&phi).unwrap();
    assert_eq!(set.conductor(), Some((18, 26)));
    assert_eq!(value_of_function(&poly("x"), &phi), Ok((2, 3)));
    assert!(set.contains((2, 3)));
}

#[test]
fn lambda_first_points() {
    let phi = cusps(16);
    let (set, table) = lambda(&phi).unwrap();
    assert!(set.contains((2, 3)) && set.contains((3, 2)));
    assert_witnesses(&phi, SetKind::Lambda, &set, &table);
    let (g, _) = gamma(&phi).unwrap();
    for &p in g.points().iter().filter(|&&p| p != (0, 0)) {
        assert!(set.contains(p), "{p:?} in gamma but not in lambda");
    }
}

#[test]
fn lambda_delta_generators() {
    let has_y_dy = |phi: &Bigerm| {
        differential_generators(phi, SetKind::LambdaDelta, (6, 6))
            .iter()
            .any(|g| g.label == Witness::Differential(Differential::y_dy()))
    };
    assert!(has_y_dy(&tangent_pair(20)));
    assert!(!has_y_dy(&cusps(20)));
}

#[test]
fn lambda_delta_shifts_into_lambda() {
    let phi = tangent_pair(24);
    let (ld, table) = lambda_delta(&phi).unwrap();
    let (l, _) = lambda(&phi).unwrap();
    assert_witnesses(&phi, SetKind::LambdaDelta, &ld, &table);
    for &(a, b) in ld.points() {
        let p = (a + 2, b + 3);
        if p.0 <= l.window().0 && p.1 <= l.window().1 {
            assert!(l.contains(p), "{p:?}");
        }
    }
    ld.check_property_a().unwrap();
    ld.check_property_b().unwrap();
    assert!(ld.maximal_points().is_ok());
}

#[test]
fn saturation_agrees_with_random_combinations() {
    let cases = [cusps(18), tangent_pair(20), bg(("t^3", "t^4 + t^5"), ("t^2", "t^3"), 20)];
    for (n, phi) in cases.iter().enumerate() {
        for kind in [SetKind::Gamma, SetKind::Lambda, SetKind::LambdaDelta] {
            let w = max_window(phi, kind);
            let w = (w.0.min(20), w.1.min(20));
            let gens = match kind {
                SetKind::Gamma => function_generators(phi, w),
                _ => differential_generators(phi, kind, w),
            };
            let (points, table) = saturate(&gens, w).unwrap();
            let brute = brute_force(&gens, w, 500, n as u64);
            assert!(brute.is_subset(&points), "{kind:?}: {:?}", brute.difference(&points).collect::<Vec<_>>());
            let set = ValueSet::new(w, points, 0);
            assert_witnesses(phi, kind, &set, &table);
            set.check_property_a().unwrap();
        }
    }
}

#[test]
fn single_generator() {
    let phi = cusps(12);
    let gens: Vec<Generator> = function_generators(&phi, (10, 10)).into_iter().filter(|g| g.label.to_literal() == "x*y").collect();
    assert_eq!(gens.len(), 1);
    let (points, _) = saturate(&gens, (10, 10)).unwrap();
    assert_eq!(points, BTreeSet::from([(5, 5)]));
}

#[test]
fn window_beyond_truncation() {
    let phi = cusps(10);
    assert!(matches!(value_set(&phi, SetKind::Gamma, (12, 12)), Err(VsError::WindowExceedsTruncation { .. })));
}

#[test]
fn fiber_examples() {
    let mut pts = BTreeSet::from([(1, 1), (1, 3), (2, 1)]);
    pts.extend(quadrant((3, 3), (4, 4)));
    let v = ValueSet::new((4, 4), pts, 1);
    assert_eq!(v.conductor(), Some((3, 3)));
    assert_eq!(v.fiber(1, (1, 1)).unwrap(), BTreeSet::from([(1, 3)]));
    assert_eq!(v.fiber(2, (1, 1)).unwrap(), BTreeSet::from([(2, 1)]));
    assert!(v.fiber(1, (2, 1)).unwrap().is_empty());
    assert!(matches!(v.fiber(1, (4, 4)), Err(VsError::OutsideReliableRegion(_))));
}

#[test]
fn maximal_points_of_artificial_set() {
    let mut pts = BTreeSet::from([(0, 0), (2, 3), (5, 1)]);
    pts.extend(quadrant((5, 3), (12, 12)));
    let v = ValueSet::new((12, 12), pts, 2);
    assert_eq!(v.conductor(), Some((5, 3)));
    assert_eq!(v.maximal_points().unwrap(), BTreeSet::from([(0, 0)]));
}

#[test]
fn missing_conductor_is_reported() {
    let v = ValueSet::new((4, 4), BTreeSet::from([(1, 1)]), 1);
    assert!(matches!(v.maximal_points(), Err(VsError::ConductorMissing)));
}

#[test]
fn intersection_multiplicity_examples() {
    let cases = [
        (bg(("t", "0"), ("0", "t"), 10), 1),
        (cusps(12), 4),
        (bg(("t", "t^2"), ("t", "t^3"), 10), 2),
        (tangent_pair(30), 14),
    ];
    for (phi, i) in cases {
        assert_eq!(intersection_multiplicity(&phi).unwrap(), i, "{phi}");
        assert_eq!(intersection_multiplicity(&phi.swap_branches().unwrap()).unwrap(), i, "{phi} swapped");
    }
}

#[test]
fn gamma_conductor_matches_branch_data() {
    for phi in [cusps(20), tangent_pair(34)] {
        let (set, _) = gamma(&phi).unwrap();
        let i = intersection_multiplicity(&phi).unwrap();
        let mu = [1, 2].map(|k| branch_semigroup(phi.branch(k)).unwrap().conductor());
        assert_eq!(set.conductor(), Some((mu[0] + i, mu[1] + i)), "{phi}");
    }
}

#[test]
fn branch_semigroup_examples() {
    let s = branch_semigroup(&branch("t^2", "t^3", 12)).unwrap();
    assert_eq!(s.conductor(), 2);
    assert_eq!(s.generators(), vec![2, 3]);
    assert!(!s.contains(1) && s.contains(0) && s.contains(7));
    let s = branch_semigroup(&branch("t", "t^4 - t^5", 12)).unwrap();
    assert_eq!(s.conductor(), 0);
    let s = branch_semigroup(&branch("t^3", "t^4 + t^5", 16)).unwrap();
    assert_eq!(s.generators(), vec![3, 4]);
    assert_eq!(s.gaps(), vec![1, 2, 5]);
}

#[test]
fn branch_semigroup_matches_random_pullbacks() {
    let b = branch("t^3", "t^4 + t^5", 18);
    let s = branch_semigroup(&b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let mut p = BiPoly::zero(64);
        for _ in 0..3 {
            let (a, e) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            p = p.add(&BiPoly::monomial(Coefficient::from(rng.gen_range(-2i64..=2)), a, e, 64));
        }
        if let Some(o) = p.compose(b.x(), b.y()).ord() {
            assert!(s.contains(o), "{o}");
        }
    }
    assert!(!Coefficient::one().is_zero());
}
