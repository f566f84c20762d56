use std::collections::{BTreeMap, BTreeSet};

use super::generators::BranchPowers;
use super::VsError;
use crate::bigerm::{Bigerm, Branch};
use crate::series::{Coefficient, Scalar, UniSeries};

/// Value semigroup of a single branch, known up to `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    window: usize,
    elements: BTreeSet<usize>,
    conductor: usize,
}

impl NumericalSemigroup {
    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.conductor || self.elements.contains(&n)
    }

    /// Elements below the conductor.
    pub fn small_elements(&self) -> Vec<usize> {
        self.elements.iter().copied().filter(|&n| n < self.conductor).collect()
    }

    pub fn gaps(&self) -> Vec<usize> {
        (0..self.conductor).filter(|&n| !self.elements.contains(&n)).collect()
    }

    /// Minimal generators.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        for n in (1..self.conductor + self.multiplicity().max(1)).filter(|&n| self.contains(n)) {
            let reachable = |n: usize| {
                let mut ok = vec![false; n + 1];
                ok[0] = true;
                for k in 1..=n {
                    ok[k] = gens.iter().any(|&g| g <= k && ok[k - g]);
                }
                ok[n]
            };
            if !reachable(n) {
                gens.push(n);
            }
        }
        gens
    }

    pub fn multiplicity(&self) -> usize {
        self.elements.iter().copied().find(|&n| n > 0).unwrap_or(1)
    }
}

/// Orders of all polynomial pullbacks along one branch.
pub fn branch_semigroup(b: &Branch) -> Result<NumericalSemigroup, VsError> {
    let window = b.trunc();
    let ox = b.x().ord();
    let oy = b.y().ord();
    let m = b.multiplicity();
    let mut powers = BranchPowers::new(b);
    let mut pivots: BTreeMap<usize, Vec<Coefficient>> = BTreeMap::new();
    let max_a = ox.map_or(0, |o| window / o);
    let max_b = oy.map_or(0, |o| window / o);
    for a in 0..=max_a {
        for e in 0..=max_b {
            if (a > 0 && ox.is_none()) || (e > 0 && oy.is_none()) {
                continue;
            }
            let val = a * ox.unwrap_or(0) + e * oy.unwrap_or(0);
            if val > window {
                continue;
            }
            let s = powers.monomial(a, e);
            let mut v: Vec<Coefficient> = (0..=window).map(|k| s.coeff_or_zero(k)).collect();
            while let Some(o) = v.iter().position(|c| !c.is_zero()) {
                match pivots.get(&o) {
                    Some(p) => {
                        let f = &v[o] / &p[o];
                        for (d, s) in v.iter_mut().zip(p) {
                            if !s.is_zero() {
                                *d -= s * &f;
                            }
                        }
                    }
                    None => {
                        pivots.insert(o, v);
                        break;
                    }
                }
            }
        }
    }
    let elements: BTreeSet<usize> = pivots.into_keys().collect();
    let conductor = (0..=window + 1)
        .find(|&c| (c..=window).all(|n| elements.contains(&n)))
        .expect("window + 1 always qualifies");
    if conductor + m > window {
        return Err(VsError::BranchConductorNotDetected { trunc: window });
    }
    Ok(NumericalSemigroup { window, elements, conductor })
}

/// `I = ord(f1 ∘ φ2)`, with `f1 = det(v·Id − Y(C))` the implicit equation of
/// branch 1, `C` the companion matrix of `t^m − u` over `Q[u]`.
pub fn intersection_multiplicity(phi: &Bigerm) -> Result<usize, VsError> {
    phi.require_puiseux()?;
    let m = phi.multiplicity().0;
    let y1 = phi.branch(1).y();
    let t1 = y1.trunc();
    let known = (t1 + 1) / m;
    let b2 = phi.branch(2);
    let (u2, v2) = (b2.x(), b2.y());
    let mut powers = BranchPowers::new(b2);
    // entry (i, j): coefficient of t^i in Y(t)·t^j, as a polynomial in u
    let entry = |i: usize, j: usize, powers: &mut BranchPowers| -> UniSeries {
        let mut terms: Vec<(usize, Coefficient)> = Vec::new();
        for (e, c) in y1.terms() {
            if (e + j) % m == i && (e + j) / m < known {
                terms.push(((e + j) / m, c.clone()));
            }
        }
        let trunc = u2.ord().map_or(u2.trunc(), |o| (known * o).saturating_sub(1)).min(u2.trunc());
        let mut acc = UniSeries::zero(u2.param(), trunc);
        for (k, c) in terms {
            acc = &acc + &powers.x_pow(k).scale(&c);
        }
        acc
    };
    let mut mat: Vec<Vec<UniSeries>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let p = entry(i, j, &mut powers);
            row.push(if i == j { v2 - &p } else { p.neg() });
        }
        mat.push(row);
    }
    let det = determinant(&mat);
    match det.ord() {
        Some(i) => Ok(i),
        None => Err(VsError::IntersectionUnresolved { trunc: det.trunc() }),
    }
}

fn determinant(mat: &[Vec<UniSeries>]) -> UniSeries {
    let n = mat.len();
    let mut memo: BTreeMap<(usize, u64), UniSeries> = BTreeMap::new();
    minor(mat, 0, 0, &mut memo, n)
}

fn minor(mat: &[Vec<UniSeries>], row: usize, used: u64, memo: &mut BTreeMap<(usize, u64), UniSeries>, n: usize) -> UniSeries {
    if row == n {
        let p = mat[0][0].param();
        let t = mat.iter().flatten().map(|s| s.trunc()).max().unwrap_or(0);
        return UniSeries::one(p, t);
    }
    if let Some(s) = memo.get(&(row, used)) {
        return s.clone();
    }
    let mut acc: Option<UniSeries> = None;
    let mut sign = true;
    for c in 0..n {
        if used & (1 << c) != 0 {
            continue;
        }
        let sub = minor(mat, row + 1, used | (1 << c), memo, n);
        let term = &mat[row][c] * &sub;
        let term = if sign { term } else { term.neg() };
        sign = !sign;
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    let out = acc.expect("at least one free column");
    memo.insert((row, used), out.clone());
    out
}
