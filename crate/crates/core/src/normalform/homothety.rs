use serde::Serialize;

use crate::bigerm::{Bigerm, Delta};
use crate::equivalence::torus::{monomial, solvable_over_c, solve_over_q, MultiplicativeConstraint};
use crate::series::{Coefficient, Scalar, UniSeries};

/// How a surviving term reached the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermRole {
    Kept,
    Pivot,
    /// A pivot that only becomes 1 after an irrational homothety.
    PendingScale,
}

/// A nonzero Puiseux coefficient of the normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub branch: usize,
    pub exponent: usize,
    pub coeff: Coefficient,
    pub role: TermRole,
    /// Exponent vector of the homothety character acting on this term.
    pub weight: Vec<i64>,
}

/// Number of homothety unknowns: `(τ1, τ2)` for transversal germs,
/// `(τ1, τ2, B)` for tangent ones.
pub fn unknowns(delta: Delta) -> usize {
    match delta {
        Delta::Transversal => 2,
        Delta::Tangent => 3,
    }
}

/// Character by which the homothety multiplies `a_{branch, j}`.
pub fn term_weight(delta: Delta, m: (usize, usize), branch: usize, j: usize) -> Vec<i64> {
    let (j, m1, m2) = (j as i64, m.0 as i64, m.1 as i64);
    match (delta, branch) {
        (Delta::Transversal, 1) => vec![-j, m2],
        (Delta::Transversal, _) => vec![m1, -j],
        (Delta::Tangent, 1) => vec![-j, 0, 1],
        (Delta::Tangent, _) => vec![0, -j, 1],
    }
}

/// Relations the unknowns must satisfy for the map to be a homothety.
pub fn structural_constraints(delta: Delta, m: (usize, usize)) -> Vec<MultiplicativeConstraint> {
    match delta {
        Delta::Transversal => Vec::new(),
        Delta::Tangent => vec![MultiplicativeConstraint::new(vec![m.0 as i64, -(m.1 as i64), 0], Coefficient::one())],
    }
}

/// `(branch, exponent, coefficient)` of every nonzero Puiseux coefficient,
/// branch 1 first, exponents increasing.
pub fn support(phi: &Bigerm) -> Vec<(usize, usize, Coefficient)> {
    (1..=2)
        .flat_map(|i| phi.free_component(i).terms().map(move |(e, c)| (i, e, c.clone())))
        .collect()
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Coefficient>> = rows.iter().map(|r| r.iter().map(|&v| Coefficient::from(v)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = &m[i][c] / &m[r][c];
            if !f.is_zero() {
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Indices into `support` of the terms normalized to 1: the first two whose
/// characters are independent modulo the structural relations.
pub fn select_pivots(delta: Delta, m: (usize, usize), support: &[(usize, usize, Coefficient)]) -> Vec<usize> {
    let mut rows: Vec<Vec<i64>> = structural_constraints(delta, m).into_iter().map(|c| c.exponents).collect();
    let base = rows.len();
    let mut chosen = Vec::new();
    for (n, (b, j, _)) in support.iter().enumerate() {
        if chosen.len() == 2 {
            break;
        }
        rows.push(term_weight(delta, m, *b, *j));
        if rank(&rows) == base + chosen.len() + 1 {
            chosen.push(n);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Outcome of normalizing the pivots.
#[derive(Debug, Clone)]
pub struct Scaled {
    pub scaled: Bigerm,
    pub terms: Vec<Term>,
    pub rational: bool,
}

/// Applies the rational homothety sending every pivot to 1, or leaves the
/// coefficients untouched and marks the pivots pending when none exists.
pub fn normalize_pivots(phi: &Bigerm) -> Scaled {
    let (delta, m) = (phi.delta(), phi.multiplicity());
    let sup = support(phi);
    let pivots = select_pivots(delta, m, &sup);
    let mut system = structural_constraints(delta, m);
    for &p in &pivots {
        let (b, j, c) = &sup[p];
        system.push(MultiplicativeConstraint::new(term_weight(delta, m, *b, *j), Coefficient::one() / c));
    }
    let solution = solve_over_q(&system, unknowns(delta));
    let rational = solution.is_some();
    let terms: Vec<Term> = sup
        .iter()
        .enumerate()
        .map(|(n, (b, j, c))| {
            let weight = term_weight(delta, m, *b, *j);
            let coeff = match &solution {
                Some(x) => c * monomial(x, &weight),
                None => c.clone(),
            };
            let role = match (pivots.contains(&n), rational) {
                (false, _) => TermRole::Kept,
                (true, true) => TermRole::Pivot,
                (true, false) => TermRole::PendingScale,
            };
            Term { branch: *b, exponent: *j, coeff, role, weight }
        })
        .collect();
    let mut terms = terms;
    if rational {
        canonical_signs(delta, m, &mut terms);
    }
    let component = |i: usize| {
        let f = phi.free_component(i);
        UniSeries::from_terms(
            f.param(),
            f.trunc(),
            terms.iter().filter(|t| t.branch == i).map(|t| (t.exponent, t.coeff.clone())),
        )
    };
    let scaled = phi.with_free_components(component(1), component(2));
    Scaled { scaled, terms, rational }
}

/// Flips kept coefficients by the sign characters that fix every pivot,
/// greedily making each one positive in support order.
fn canonical_signs(delta: Delta, m: (usize, usize), terms: &mut [Term]) {
    let mut system = structural_constraints(delta, m);
    for t in terms.iter().filter(|t| t.role != TermRole::Kept) {
        system.push(MultiplicativeConstraint::new(t.weight.clone(), Coefficient::one()));
    }
    let n = unknowns(delta);
    for t in terms.iter_mut().filter(|t| t.role == TermRole::Kept) {
        let sign = if t.coeff.is_negative() { -Coefficient::one() } else { Coefficient::one() };
        system.push(MultiplicativeConstraint::new(t.weight.clone(), sign.clone()));
        if !solvable_over_c(&system, n) {
            let last = system.last_mut().expect("just pushed");
            last.target = Coefficient::one();
            continue;
        }
        if sign.is_negative() {
            t.coeff = -t.coeff.clone();
        }
    }
}
