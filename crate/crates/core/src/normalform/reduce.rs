use std::collections::BTreeSet;

use super::flow::correction_from_witness;
use super::NfError;
use crate::bigerm::{Bigerm, Delta};
use crate::series::{Coefficient, Scalar};
use crate::valuesets::{form_monomials, form_values, Differential, FormMonomial, SetKind, ValueSet, VsError};

/// Exponents whose terms can be eliminated, per branch.
pub type Removable = [BTreeSet<usize>; 2];

/// Result of the `A[δ]` reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: Bigerm,
    pub cutoff: usize,
    pub removable: Removable,
    /// `(branch, exponent)` of every term that was actually cancelled.
    pub eliminated: Vec<(usize, usize)>,
}

/// Exponents `k < limit` removable by the fiber rule on `Λ[δ]`: branch 1
/// when `F1(k,k)` is nonempty or `(k,k)` is maximal, branch 2 when
/// `F2(k,k)` is nonempty.
pub fn removable_exponents(lambda: &ValueSet, m: (usize, usize), limit: usize) -> Result<Removable, VsError> {
    let maximal = lambda.maximal_points()?;
    let mut out: Removable = [BTreeSet::new(), BTreeSet::new()];
    for k in 1..limit {
        let p = (k, k);
        let f1 = !lambda.fiber(1, p)?.is_empty();
        let f2 = !lambda.fiber(2, p)?.is_empty();
        if k > m.0 && (f1 || maximal.contains(&p)) {
            out[0].insert(k);
        }
        if k > m.1 && f2 {
            out[1].insert(k);
        }
    }
    Ok(out)
}

/// Sign of the free-component change on branch `i` induced by `h_i`.
fn tangent_sign(i: usize, delta: Delta) -> Coefficient {
    match (i, delta) {
        (2, Delta::Transversal) => -Coefficient::one(),
        _ => Coefficient::one(),
    }
}

/// Cancels the order-`k` coefficient of the free component of branch `i`
/// with the flow of `ω`, whose `h_i` has order-`k` coefficient `h`.
pub fn eliminate_term(phi: &Bigerm, i: usize, k: usize, omega: &Differential, cutoff: usize) -> Result<Bigerm, NfError> {
    let trunc = phi.trunc();
    let m = phi.branch(i).multiplicity();
    let pull = omega.pullback(phi.branch(i));
    let h = pull.coeff_or_zero(k + m - 1) / Coefficient::from(m);
    if h.is_zero() {
        return Err(NfError::WitnessMissing { branch: i, k });
    }
    let base = correction_from_witness(omega, phi, k)?;
    let sign = tangent_sign(i, phi.delta());
    let mut current = phi.clone();
    for _ in 0..4 {
        let coef = current.free_component(i).coeff_or_zero(k);
        if coef.is_zero() {
            return Ok(current);
        }
        let s = -coef / (&sign * &h);
        let next = base.scaled(&s).flow(&current)?.exact_jet(cutoff, trunc)?;
        for j in 1..=2 {
            let (a, b) = (current.free_component(j), next.free_component(j));
            if k > 0 && !a.agrees_with(b, k - 1) {
                return Err(NfError::NoProgress { branch: i, k });
            }
        }
        current = next;
    }
    if current.free_component(i).coeff_or_zero(k).is_zero() {
        Ok(current)
    } else {
        Err(NfError::NoProgress { branch: i, k })
    }
}

/// Kernel `K_k`: combinations of `Ω[δ]` generators whose value coordinates
/// are `>= k` on both branches.
struct Kernel {
    combos: Vec<Vec<Coefficient>>,
}

impl Kernel {
    fn full(n: usize) -> Self {
        let combos = (0..n)
            .map(|j| {
                let mut v = vec![Coefficient::zero(); n];
                v[j] = Coefficient::one();
                v
            })
            .collect();
        Kernel { combos }
    }

    fn functional(&self, column: &[Coefficient]) -> Vec<Coefficient> {
        self.combos
            .iter()
            .map(|v| {
                let mut acc = Coefficient::zero();
                for (c, x) in v.iter().zip(column) {
                    if !c.is_zero() && !x.is_zero() {
                        acc += c * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Restricts to the common zero set of the functionals (given by their
    /// values on the current basis).
    fn restrict(&mut self, mut f: [Vec<Coefficient>; 2]) {
        for which in 0..2 {
            let Some(p) = f[which].iter().position(|c| !c.is_zero()) else {
                continue;
            };
            let pivot = self.combos.remove(p);
            let pv: Vec<Coefficient> = f.iter_mut().map(|g| g.remove(p)).collect();
            for (o, v) in self.combos.iter_mut().enumerate() {
                let r = &f[which][o] / &pv[which];
                if r.is_zero() {
                    continue;
                }
                axpy(v, &pivot, &r);
                for (g, pg) in f.iter_mut().zip(&pv) {
                    g[o] -= pg * &r;
                }
            }
        }
    }
}

fn axpy(dst: &mut [Coefficient], src: &[Coefficient], r: &Coefficient) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= s * r;
        }
    }
}

/// A kernel element with `F_main != 0` and, when possible, `F_other = 0`.
fn choose(combos: &[Vec<Coefficient>], main: &[Coefficient], other: &[Coefficient]) -> Option<(Vec<Coefficient>, Coefficient)> {
    if let Some(b) = (0..combos.len()).find(|&b| !main[b].is_zero() && other[b].is_zero()) {
        return Some((combos[b].clone(), main[b].clone()));
    }
    if let Some(p) = other.iter().position(|c| !c.is_zero()) {
        for q in 0..combos.len() {
            let r = &other[q] / &other[p];
            let value = &main[q] - &(&r * &main[p]);
            if q != p && !value.is_zero() {
                let mut v = combos[q].clone();
                axpy(&mut v, &combos[p], &r);
                return Some((v, value));
            }
        }
    }
    None
}

fn is_multiple(f: &[Coefficient], g: &[Coefficient]) -> bool {
    match g.iter().position(|c| !c.is_zero()) {
        None => f.iter().all(|c| c.is_zero()),
        Some(p) => {
            let r = &f[p] / &g[p];
            f.iter().zip(g).all(|(a, b)| *a == &r * b)
        }
    }
}

fn materialize(monomials: &[FormMonomial], combo: &[Coefficient]) -> Differential {
    monomials
        .iter()
        .zip(combo)
        .filter(|(_, c)| !c.is_zero())
        .fold(Differential::zero(), |acc, (f, c)| acc.add(&f.label().scale(c)))
}

/// Eliminates, in increasing order, every removable term of order below
/// `cutoff`, and drops everything from `cutoff` on.
pub fn reduce_a_delta(phi: &Bigerm, cutoff: usize) -> Result<Reduction, NfError> {
    phi.require_puiseux()?;
    let (m1, m2) = phi.multiplicity();
    let trunc = cutoff + m1 + m2;
    let mut psi = phi.exact_jet(cutoff, trunc)?;
    let window = (cutoff.saturating_sub(1), cutoff.saturating_sub(1));
    let monomials = form_monomials(&psi, SetKind::LambdaDelta, window);
    let mut kernel = Kernel::full(monomials.len());
    let mut removable: Removable = [BTreeSet::new(), BTreeSet::new()];
    let mut eliminated = Vec::new();
    let mut values: Option<Vec<[Vec<Coefficient>; 2]>> = None;
    for k in 0..cutoff {
        let table = values.get_or_insert_with(|| {
            form_values(&psi, SetKind::LambdaDelta, &monomials, window)
                .into_iter()
                .map(|v| [0, 1].map(|i| (0..cutoff).map(|e| v[i].coeff_or_zero(e)).collect()))
                .collect()
        });
        let column = |i: usize| table.iter().map(|v| v[i][k].clone()).collect::<Vec<_>>();
        let f1 = kernel.functional(&column(0));
        let f2 = kernel.functional(&column(1));
        let f = [f1, f2];
        if k > m1 && f[0].iter().any(|c| !c.is_zero()) {
            removable[0].insert(k);
            if !psi.free_component(1).coeff_or_zero(k).is_zero() {
                let (v, _) = choose(&kernel.combos, &f[0], &f[1]).or_else(|| {
                    let b = f[0].iter().position(|c| !c.is_zero())?;
                    Some((kernel.combos[b].clone(), f[0][b].clone()))
                }).ok_or(NfError::WitnessMissing { branch: 1, k })?;
                psi = eliminate_term(&psi, 1, k, &materialize(&monomials, &v), cutoff)?;
                eliminated.push((1, k));
                values = None;
            }
        }
        if k > m2 && !is_multiple(&f[1], &f[0]) {
            removable[1].insert(k);
            if !psi.free_component(2).coeff_or_zero(k).is_zero() {
                let (v, _) = choose(&kernel.combos, &f[1], &f[0]).ok_or(NfError::WitnessMissing { branch: 2, k })?;
                psi = eliminate_term(&psi, 2, k, &materialize(&monomials, &v), cutoff)?;
                eliminated.push((2, k));
                values = None;
            }
        }
        kernel.restrict(f);
    }
    Ok(Reduction { reduced: psi, cutoff, removable, eliminated })
}
