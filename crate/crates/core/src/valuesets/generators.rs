use super::saturate::Generator;
use super::witness::{Differential, Witness, EXACT_DEG};
use super::ValuePoint;
use crate::bigerm::{Bigerm, Branch, Delta};
use crate::series::{BiPoly, Coefficient, Scalar, UniSeries};

/// Which value set a generator family feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    Gamma,
    Lambda,
    LambdaDelta,
}

#[derive(Debug, Clone, Copy)]
enum Pure {
    X(usize),
    Y(usize),
    Neither,
}

/// Cached powers of the two components of a branch, for fast monomial
/// pullbacks. When one component is exactly `t^m`, monomials become shifts
/// of powers of the other one.
#[derive(Debug, Clone)]
pub struct BranchPowers {
    xp: Vec<UniSeries>,
    yp: Vec<UniSeries>,
    pure: Pure,
}

fn pure_power(s: &UniSeries) -> Option<usize> {
    let mut terms = s.terms();
    match (terms.next(), terms.next()) {
        (Some((e, c)), None) if c.is_one() => Some(e),
        _ => None,
    }
}

impl BranchPowers {
    pub fn new(b: &Branch) -> Self {
        let pure = match (pure_power(b.x()), pure_power(b.y())) {
            (Some(m), _) => Pure::X(m),
            (_, Some(m)) => Pure::Y(m),
            _ => Pure::Neither,
        };
        let one = |s: &UniSeries| UniSeries::one(s.param(), s.trunc());
        BranchPowers { xp: vec![one(b.x()), b.x().clone()], yp: vec![one(b.y()), b.y().clone()], pure }
    }

    fn grow(powers: &mut Vec<UniSeries>, n: usize) {
        while powers.len() <= n {
            let next = &powers[powers.len() - 1] * &powers[1];
            powers.push(next);
        }
    }

    pub fn x_pow(&mut self, a: usize) -> &UniSeries {
        Self::grow(&mut self.xp, a);
        &self.xp[a]
    }

    pub fn y_pow(&mut self, b: usize) -> &UniSeries {
        Self::grow(&mut self.yp, b);
        &self.yp[b]
    }

    /// `x^a y^b` pulled back.
    pub fn monomial(&mut self, a: usize, b: usize) -> UniSeries {
        match self.pure {
            Pure::X(m) => self.y_pow(b).mul_t_pow(m * a),
            Pure::Y(m) => self.x_pow(a).mul_t_pow(m * b),
            Pure::Neither => {
                let xa = self.x_pow(a).clone();
                &xa * self.y_pow(b)
            }
        }
    }

    /// `x^a y^b x'` pulled back.
    pub fn dx_monomial(&mut self, a: usize, b: usize) -> UniSeries {
        match self.pure {
            Pure::X(m) => self.y_pow(b).mul_t_pow(m * a + m - 1).scale(&Coefficient::from(m)),
            Pure::Y(m) => {
                let d = self.x_pow(a + 1).derive().scale(&(Coefficient::one() / Coefficient::from(a + 1)));
                d.mul_t_pow(m * b)
            }
            Pure::Neither => {
                let dx = self.xp[1].derive();
                &self.monomial(a, b) * &dx
            }
        }
    }

    /// `x^a y^b y'` pulled back.
    pub fn dy_monomial(&mut self, a: usize, b: usize) -> UniSeries {
        match self.pure {
            Pure::X(m) => {
                let d = self.y_pow(b + 1).derive().scale(&(Coefficient::one() / Coefficient::from(b + 1)));
                d.mul_t_pow(m * a)
            }
            Pure::Y(m) => self.x_pow(a).mul_t_pow(m * b + m - 1).scale(&Coefficient::from(m)),
            Pure::Neither => {
                let dy = self.yp[1].derive();
                &self.monomial(a, b) * &dy
            }
        }
    }

    /// `p(x(t), y(t))` from the cached powers.
    pub fn eval(&mut self, p: &BiPoly) -> UniSeries {
        let param = self.xp[1].param();
        let ox = self.xp[1].ord().unwrap_or(self.xp[1].trunc() + 1);
        let oy = self.yp[1].ord().unwrap_or(self.yp[1].trunc() + 1);
        let cap = self.xp[1].trunc().max(self.yp[1].trunc());
        let tail = ((p.deg().min(cap) + 1) * ox.min(oy)).saturating_sub(1);
        let mut trunc = tail.min(cap);
        let mut acc: Vec<Coefficient> = Vec::new();
        for (&(a, b), c) in p.terms() {
            let mono = self.monomial(a, b);
            trunc = trunc.min(mono.trunc());
            if acc.len() < trunc + 1 {
                acc.resize(trunc + 1, Coefficient::zero());
            }
            for (e, v) in mono.terms() {
                if e < acc.len() {
                    acc[e] += v * c;
                }
            }
        }
        acc.resize(trunc + 1, Coefficient::zero());
        UniSeries::from_terms(param, trunc, acc.into_iter().enumerate())
    }
}

fn order_of(s: &UniSeries) -> Option<usize> {
    s.ord()
}

fn branch_orders(phi: &Bigerm) -> [(Option<usize>, Option<usize>); 2] {
    [1, 2].map(|i| (order_of(phi.branch(i).x()), order_of(phi.branch(i).y())))
}

/// `a·ox + b·oy + extra`, or `None` when a zero component appears with a
/// positive exponent.
fn weighted(o: (Option<usize>, Option<usize>), a: usize, b: usize, extra: Option<usize>) -> Option<usize> {
    let part = |ord: Option<usize>, e: usize| if e == 0 { Some(0) } else { ord.map(|o| o * e) };
    Some(part(o.0, a)? + part(o.1, b)? + extra?)
}

fn exponent_range(orders: &[(Option<usize>, Option<usize>); 2], window: ValuePoint) -> (usize, usize) {
    let bound = |ord: Option<usize>, w: usize| ord.map_or(0, |o| w / o.max(1));
    let max_a = bound(orders[0].0, window.0).max(bound(orders[1].0, window.1));
    let max_b = bound(orders[0].1, window.0).max(bound(orders[1].1, window.1));
    (max_a + 1, max_b + 1)
}

/// Monomials `x^a y^b` (constant included) whose value is inside the window
/// on at least one branch.
pub fn function_generators(phi: &Bigerm, window: ValuePoint) -> Vec<Generator> {
    let orders = branch_orders(phi);
    let (na, nb) = exponent_range(&orders, window);
    let mut powers = [BranchPowers::new(phi.branch(1)), BranchPowers::new(phi.branch(2))];
    let mut out = Vec::new();
    for a in 0..=na {
        for b in 0..=nb {
            let v = [0, 1].map(|i| weighted(orders[i], a, b, Some(0)));
            if !(v[0].is_some_and(|x| x <= window.0) || v[1].is_some_and(|x| x <= window.1)) {
                continue;
            }
            let values = [0, 1].map(|i| {
                let w = if i == 0 { window.0 } else { window.1 };
                powers[i].monomial(a, b).truncated(w)
            });
            out.push(Generator {
                label: Witness::Function(BiPoly::monomial(Coefficient::one(), a, b, EXACT_DEG)),
                values,
            });
        }
    }
    out
}

/// A monomial differential `x^a y^b dx` or `x^a y^b dy`; `y dy` inside `Ω[δ]`
/// is the one with `(a, b) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormMonomial {
    pub a: usize,
    pub b: usize,
    pub dy: bool,
}

impl FormMonomial {
    pub fn label(&self) -> Differential {
        match (self.a, self.b, self.dy) {
            (0, 1, true) => Differential::y_dy(),
            (a, b, true) => Differential::dy_monomial(a, b),
            (a, b, false) => Differential::dx_monomial(a, b),
        }
    }

    /// `ω(φ_i)` from cached powers.
    pub fn pullback(&self, powers: &mut BranchPowers) -> UniSeries {
        if self.dy {
            powers.dy_monomial(self.a, self.b)
        } else {
            powers.dx_monomial(self.a, self.b)
        }
    }
}

fn value_shift(phi: &Bigerm, kind: SetKind) -> [isize; 2] {
    let (m1, m2) = phi.multiplicity();
    match kind {
        SetKind::LambdaDelta => [m1 as isize - 1, m2 as isize - 1],
        _ => [-1, -1],
    }
}

/// Monomial differentials for `Λ` (all `a + b`) or for `Ω[δ]` (`a + b >= 2`,
/// plus `y dy` when the branches are tangent) whose value can fall inside
/// the window on at least one branch.
pub fn form_monomials(phi: &Bigerm, kind: SetKind, window: ValuePoint) -> Vec<FormMonomial> {
    let orders = branch_orders(phi);
    let (m1, m2) = phi.multiplicity();
    let shift = value_shift(phi, kind);
    let (na, nb) = exponent_range(&orders, (window.0 + m1, window.1 + m2));
    let mut out = Vec::new();
    for a in 0..=na {
        for b in 0..=nb {
            if kind == SetKind::LambdaDelta && a + b < 2 {
                continue;
            }
            for dy in [false, true] {
                let extra = |o: (Option<usize>, Option<usize>)| if dy { o.1 } else { o.0 };
                let v = [0, 1].map(|i| {
                    weighted(orders[i], a, b, extra(orders[i]))
                        .map(|x| x as isize - 1 - shift[i])
                        .filter(|&x| x >= 0)
                });
                if v[0].is_some_and(|x| x as usize <= window.0) || v[1].is_some_and(|x| x as usize <= window.1) {
                    out.push(FormMonomial { a, b, dy });
                }
            }
        }
    }
    if kind == SetKind::LambdaDelta && phi.delta() == Delta::Tangent {
        out.push(FormMonomial { a: 0, b: 1, dy: true });
    }
    out
}

/// Value series of the given monomials on both branches: `t·ω(φ_i)` for
/// `Λ`, `ω(φ_i) / t^(m_i - 1)` for `Λ[δ]`.
pub fn form_values(phi: &Bigerm, kind: SetKind, monomials: &[FormMonomial], window: ValuePoint) -> Vec<[UniSeries; 2]> {
    let shift = value_shift(phi, kind);
    let mut powers = [BranchPowers::new(phi.branch(1)), BranchPowers::new(phi.branch(2))];
    monomials
        .iter()
        .map(|f| {
            [0, 1].map(|i| {
                let w = if i == 0 { window.0 } else { window.1 };
                value_series(f.pullback(&mut powers[i]), shift[i], w)
            })
        })
        .collect()
}

/// Generators of `Λ` or `Λ[δ]` inside the window.
pub fn differential_generators(phi: &Bigerm, kind: SetKind, window: ValuePoint) -> Vec<Generator> {
    let monomials = form_monomials(phi, kind, window);
    let values = form_values(phi, kind, &monomials, window);
    monomials
        .iter()
        .zip(values)
        .map(|(f, values)| Generator { label: Witness::Differential(f.label()), values })
        .collect()
}

/// Turns a pullback `ω(φ_i)` into a series whose order is the value:
/// multiplied by `t` for `Λ`, divided by `t^(m-1)` for `Λ[δ]`.
fn value_series(pull: UniSeries, shift: isize, window: usize) -> UniSeries {
    let s = if shift < 0 {
        pull.mul_t_pow((-shift) as usize)
    } else {
        pull.div_t_pow(shift as usize).unwrap_or_else(|| UniSeries::zero(pull.param(), 0))
    };
    s.truncated(window)
}
