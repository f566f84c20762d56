use malachite_base::num::arithmetic::traits::{CheckedRoot, Pow};

use crate::series::{Coefficient, Scalar};

/// `∏_j x_j^(exponents[j]) = target` over the torus `(K^*)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeConstraint {
    pub exponents: Vec<i64>,
    pub target: Coefficient,
}

impl MultiplicativeConstraint {
    pub fn new(exponents: Vec<i64>, target: Coefficient) -> Self {
        MultiplicativeConstraint { exponents, target }
    }

    pub fn holds_at(&self, x: &[Coefficient]) -> bool {
        monomial(x, &self.exponents) == self.target
    }
}

/// `∏ x_j^(e_j)`, with all `x_j` nonzero.
pub fn monomial(x: &[Coefficient], e: &[i64]) -> Coefficient {
    x.iter()
        .zip(e)
        .filter(|(_, &k)| k != 0)
        .fold(Coefficient::one(), |acc, (b, &k)| acc * b.clone().pow(k))
}

/// The real `n`-th root of `c` when it is rational.
pub fn rational_root(c: &Coefficient, n: u64) -> Option<Coefficient> {
    if c.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    c.checked_root(n)
}

/// Diagonal form `L · E · R = D` with `L`, `R` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub left: Vec<Vec<i64>>,
    pub diagonal: Vec<i64>,
    pub right: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Diagonalizes an integer `p × n` matrix by unimodular row and column
/// operations.
pub fn smith_form(e: &[Vec<i64>], n: usize) -> Smith {
    let p = e.len();
    let mut a: Vec<Vec<i64>> = e.to_vec();
    let mut left = identity(p);
    let mut right = identity(n);
    for t in 0..p.min(n) {
        loop {
            let best = (t..p)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            left.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in right.iter_mut() {
                row.swap(t, bj);
            }
            let pivot = a[t][t];
            let mut clean = true;
            for i in t + 1..p {
                let q = a[i][t] / pivot;
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..p {
                        left[i][j] -= q * left[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j] / pivot;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in right.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    let diagonal = (0..p.min(n)).map(|i| a[i][i]).collect();
    Smith { left, diagonal, right }
}

/// Right-hand side `μ = λ^L` of the diagonal system `z^D = μ`, `z = x^(R⁻¹)`.
fn transformed_targets(cs: &[MultiplicativeConstraint], s: &Smith) -> Vec<Coefficient> {
    let lambda: Vec<Coefficient> = cs.iter().map(|c| c.target.clone()).collect();
    s.left.iter().map(|row| monomial(&lambda, row)).collect()
}

fn matrix(cs: &[MultiplicativeConstraint], n: usize) -> Vec<Vec<i64>> {
    cs.iter()
        .map(|c| {
            let mut row = c.exponents.clone();
            row.resize(n, 0);
            row
        })
        .collect()
}

/// Whether the system has a solution in `(C^*)^n`.
pub fn solvable_over_c(cs: &[MultiplicativeConstraint], n: usize) -> bool {
    if cs.iter().any(|c| c.target.is_zero()) {
        return false;
    }
    let s = smith_form(&matrix(cs, n), n);
    let mu = transformed_targets(cs, &s);
    mu.iter()
        .enumerate()
        .all(|(i, m)| s.diagonal.get(i).is_some_and(|&d| d != 0) || m.is_one())
}

/// A solution in `(Q^*)^n`, when the diagonal roots are rational.
pub fn solve_over_q(cs: &[MultiplicativeConstraint], n: usize) -> Option<Vec<Coefficient>> {
    if cs.iter().any(|c| c.target.is_zero()) {
        return None;
    }
    let s = smith_form(&matrix(cs, n), n);
    let mu = transformed_targets(cs, &s);
    let mut z = vec![Coefficient::one(); n];
    for (i, m) in mu.iter().enumerate() {
        match s.diagonal.get(i).copied().filter(|&d| d != 0) {
            None if m.is_one() => {}
            None => return None,
            Some(d) => {
                let base = if d < 0 { Coefficient::one() / m } else { m.clone() };
                z[i] = rational_root(&base, d.unsigned_abs())?;
            }
        }
    }
    let x: Vec<Coefficient> = s.right.iter().map(|row| monomial(&z, row)).collect();
    debug_assert!(cs.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{q, qi};

    fn c(e: &[i64], t: Coefficient) -> MultiplicativeConstraint {
        MultiplicativeConstraint::new(e.to_vec(), t)
    }

    #[test]
    fn diagonal_form_reconstructs() {
        let e = vec![vec![4, 6, 2], vec![-3, 5, 7]];
        let s = smith_form(&e, 3);
        for i in 0..2 {
            for j in 0..3 {
                let v: i64 = (0..2).map(|k| s.left[i][k] * (0..3).map(|l| e[k][l] * s.right[l][j]).sum::<i64>()).sum();
                let d = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(v, d, "{i} {j}");
            }
        }
    }

    #[test]
    fn square_root_of_three() {
        let cs = [c(&[2], qi(3))];
        assert!(solvable_over_c(&cs, 1));
        assert_eq!(solve_over_q(&cs, 1), None);
        let cs = [c(&[2], q(9, 4))];
        let x = solve_over_q(&cs, 1).unwrap();
        assert!(cs[0].holds_at(&x));
    }

    #[test]
    fn dependent_rows() {
        let ok = [c(&[2, -3], qi(4)), c(&[-4, 6], q(1, 16))];
        assert!(solvable_over_c(&ok, 2));
        let bad = [c(&[2, -3], qi(4)), c(&[-4, 6], qi(16))];
        assert!(!solvable_over_c(&bad, 2));
    }

    #[test]
    fn negative_odd_root() {
        let cs = [c(&[3, 0], qi(-8)), c(&[1, 1], qi(6))];
        let x = solve_over_q(&cs, 2).unwrap();
        assert_eq!(x, vec![qi(-2), qi(-3)]);
    }
}
