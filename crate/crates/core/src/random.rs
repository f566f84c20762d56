//! Deterministic random bigerms in Puiseux form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigerm::{small_rational, Bigerm, Branch, Delta};
use crate::series::{Coefficient, Param, Scalar, UniSeries};

/// Number of exponents sampled above the first Puiseux exponent.
const TAIL: usize = 4;

fn free_component(rng: &mut ChaCha8Rng, m: usize, p: Param, trunc: usize) -> UniSeries {
    let first = if m == 1 {
        rng.gen_range(2..=4)
    } else {
        loop {
            let j = rng.gen_range(m + 1..=m + 4);
            if num_integer::gcd(j, m) == 1 {
                break j;
            }
        }
    };
    let mut terms = vec![(first, small_rational(rng))];
    for e in first + 1..=first + TAIL {
        if rng.gen_bool(0.5) {
            terms.push((e, small_rational(rng)));
        }
    }
    UniSeries::from_terms(p, trunc, terms)
}

/// A random bigerm with multiplicities at most `max_m`, of either tangency
/// case, whose free components are polynomials with small rational
/// coefficients.
pub fn random_bigerm(seed: u64, max_m: usize, trunc: usize) -> Bigerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m1 = rng.gen_range(1..=max_m.max(1));
    let m2 = rng.gen_range(1..=max_m.max(1));
    let delta = if rng.gen_bool(0.5) { Delta::Transversal } else { Delta::Tangent };
    let pure = |p: Param, m: usize| UniSeries::monomial(p, Coefficient::one(), m, trunc);
    let f1 = free_component(&mut rng, m1, Param::T1, trunc);
    let f2 = free_component(&mut rng, m2, Param::T2, trunc);
    let b1 = Branch::new(pure(Param::T1, m1), f1).expect("primitive by construction");
    let b2 = match delta {
        Delta::Transversal => Branch::new(f2, pure(Param::T2, m2)),
        Delta::Tangent => Branch::new(pure(Param::T2, m2), f2),
    }
    .expect("primitive by construction");
    Bigerm::from_branches(b1, b2).expect("Puiseux form by construction")
}
