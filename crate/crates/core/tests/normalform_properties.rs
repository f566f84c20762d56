use bigerm::normalform::{invariants, normal_form, removable_exponents, Source, DEFAULT_CAP};
use bigerm::selftest::random_germ;
use bigerm::valuesets::{value_set, SetKind};

const GERMS: u64 = 30;

#[test]
fn surviving_terms_have_empty_fibers() {
    for seed in 0..GERMS {
        let nf = normal_form(&Source::Jet(random_germ(seed, 40).unwrap()), DEFAULT_CAP).unwrap();
        let inv = &nf.invariants;
        let (m1, m2) = inv.multiplicity();
        let w = inv.lambda_delta.window();
        let wide = (2 * w.0, 2 * w.1);
        let phi = random_germ(seed, wide.0.max(wide.1) + m1 + m2).unwrap();
        let (lambda, _) = value_set(&phi, SetKind::LambdaDelta, wide).unwrap();
        let removable = removable_exponents(&lambda, (m1, m2), inv.cutoff).unwrap();
        for term in &nf.terms {
            assert!(term.exponent < inv.cutoff, "germ {seed}: term at {} beyond cutoff {}", term.exponent, inv.cutoff);
            assert!(
                !removable[term.branch - 1].contains(&term.exponent),
                "germ {seed}: removable term survives at ({}, {})",
                term.branch,
                term.exponent
            );
        }
    }
}

#[test]
fn pipeline_keeps_the_value_sets() {
    for seed in 0..GERMS {
        let nf = normal_form(&Source::Jet(random_germ(seed, 40).unwrap()), DEFAULT_CAP).unwrap();
        for phi in [&nf.reduced, &nf.scaled] {
            let after = invariants(&Source::Jet(phi.clone()), DEFAULT_CAP).unwrap();
            assert_eq!(after.gamma, nf.invariants.gamma, "germ {seed}: {phi}");
            assert_eq!(after.lambda_delta, nf.invariants.lambda_delta, "germ {seed}: {phi}");
        }
    }
}

#[test]
fn normal_form_is_idempotent() {
    for seed in 0..GERMS {
        let nf = normal_form(&Source::Jet(random_germ(seed, 40).unwrap()), DEFAULT_CAP).unwrap();
        let again = normal_form(&Source::Jet(nf.scaled.clone()), DEFAULT_CAP).unwrap();
        assert_eq!(again.to_json(), nf.to_json(), "germ {seed}");
    }
}
