use std::collections::BTreeMap;
use std::fmt;

use super::{value_of_differential, value_of_function, BranchVanishing, SetKind, ValuePoint};
use crate::bigerm::{Bigerm, Branch, Delta};
use crate::series::{BiPoly, Coefficient, Scalar, UniSeries};

/// Degree bound used for polynomials that are known exactly.
pub(crate) const EXACT_DEG: usize = 1 << 16;

/// `ω = η1 dx + (β y + η2) dy`.
#[derive(Clone, PartialEq, Eq)]
pub struct Differential {
    pub eta1: BiPoly,
    pub eta2: BiPoly,
    pub beta: Coefficient,
}

impl Differential {
    pub fn new(eta1: BiPoly, eta2: BiPoly, beta: Coefficient) -> Self {
        Differential { eta1, eta2, beta }
    }

    pub fn zero() -> Self {
        Differential::new(BiPoly::zero(EXACT_DEG), BiPoly::zero(EXACT_DEG), Coefficient::zero())
    }

    /// `x^a y^b dx`.
    pub fn dx_monomial(a: usize, b: usize) -> Self {
        Differential::new(BiPoly::monomial(Coefficient::one(), a, b, EXACT_DEG), BiPoly::zero(EXACT_DEG), Coefficient::zero())
    }

    /// `x^a y^b dy`.
    pub fn dy_monomial(a: usize, b: usize) -> Self {
        Differential::new(BiPoly::zero(EXACT_DEG), BiPoly::monomial(Coefficient::one(), a, b, EXACT_DEG), Coefficient::zero())
    }

    /// `y dy`, carried by the `β` slot.
    pub fn y_dy() -> Self {
        Differential::new(BiPoly::zero(EXACT_DEG), BiPoly::zero(EXACT_DEG), Coefficient::one())
    }

    /// `d f = f_x dx + f_y dy`.
    pub fn exact(f: &BiPoly) -> Self {
        Differential::new(f.partial_x(), f.partial_y(), Coefficient::zero())
    }

    /// Coefficient of `dx`.
    pub fn dx_part(&self) -> BiPoly {
        self.eta1.clone()
    }

    /// Coefficient of `dy`, with the `β y` term folded in.
    pub fn dy_part(&self) -> BiPoly {
        self.eta2.add(&BiPoly::monomial(self.beta.clone(), 0, 1, self.eta2.deg()))
    }

    /// Membership in `Ω[δ]`: both η-parts in `(x,y)^2`, and `β = 0` unless the
    /// branches are tangent.
    pub fn in_omega(&self, delta: Delta) -> bool {
        self.eta1.in_square_of_maximal_ideal()
            && self.eta2.in_square_of_maximal_ideal()
            && (delta == Delta::Tangent || self.beta.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Differential::new(self.eta1.add(&other.eta1), self.eta2.add(&other.eta2), &self.beta + &other.beta)
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        Differential::new(self.eta1.scale(c), self.eta2.scale(c), &self.beta * c)
    }

    pub fn is_zero(&self) -> bool {
        self.eta1.is_zero() && self.eta2.is_zero() && self.beta.is_zero()
    }

    /// `ω(φ_i)` as a series: `η1(φ_i) x_i' + (β y + η2)(φ_i) y_i'`.
    pub fn pullback(&self, b: &Branch) -> UniSeries {
        let p = self.dx_part().compose(b.x(), b.y());
        let q = self.dy_part().compose(b.x(), b.y());
        &(&p * &b.x().derive()) + &(&q * &b.y().derive())
    }

    pub fn to_literal(&self) -> String {
        let mut parts = Vec::new();
        if !self.eta1.is_zero() {
            parts.push(format!("({})*dx", self.eta1.to_literal()));
        }
        let dy = self.dy_part();
        if !dy.is_zero() {
            parts.push(format!("({})*dy", dy.to_literal()));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// A function (for `Γ`) or a differential form (for `Λ`, `Λ[δ]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Function(BiPoly),
    Differential(Differential),
}

impl Witness {
    fn scale(&self, c: &Coefficient) -> Self {
        match self {
            Witness::Function(p) => Witness::Function(p.scale(c)),
            Witness::Differential(w) => Witness::Differential(w.scale(c)),
        }
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Witness::Function(p), Witness::Function(q)) => Witness::Function(p.add(q)),
            (Witness::Differential(a), Witness::Differential(b)) => Witness::Differential(a.add(b)),
            _ => panic!("cannot combine a function with a differential"),
        }
    }

    /// Value in the coordinates of the given set; `Λ[δ]` subtracts the
    /// multiplicities.
    pub fn value(&self, phi: &Bigerm, kind: SetKind) -> Result<ValuePoint, BranchVanishing> {
        match (self, kind) {
            (Witness::Function(p), _) => value_of_function(p, phi),
            (Witness::Differential(w), SetKind::LambdaDelta) => {
                let (m1, m2) = phi.multiplicity();
                value_of_differential(w, phi).map(|(a, b)| (a - m1, b - m2))
            }
            (Witness::Differential(w), _) => value_of_differential(w, phi),
        }
    }

    pub fn as_differential(&self) -> Option<&Differential> {
        match self {
            Witness::Differential(w) => Some(w),
            Witness::Function(_) => None,
        }
    }

    pub fn to_literal(&self) -> String {
        match self {
            Witness::Function(p) => p.to_literal(),
            Witness::Differential(w) => w.to_literal(),
        }
    }
}

/// Witnesses stored as linear combinations of the generators; each one is
/// materialized on request.
#[derive(Debug, Clone)]
pub struct WitnessTable {
    labels: Vec<Witness>,
    combos: BTreeMap<ValuePoint, Vec<(usize, Coefficient)>>,
}

impl WitnessTable {
    pub(crate) fn new(labels: Vec<Witness>) -> Self {
        WitnessTable { labels, combos: BTreeMap::new() }
    }

    pub(crate) fn insert(&mut self, p: ValuePoint, combo: Vec<(usize, Coefficient)>) {
        self.combos.insert(p, combo);
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = ValuePoint> + '_ {
        self.combos.keys().copied()
    }

    pub fn get(&self, p: ValuePoint) -> Option<Witness> {
        let combo = self.combos.get(&p)?;
        let mut terms = combo.iter().map(|(j, c)| self.labels[*j].scale(c));
        let first = terms.next()?;
        Some(terms.fold(first, |acc, w| acc.add(&w)))
    }

    /// `value -> witness literal`, sorted by value.
    pub fn dump(&self) -> Vec<(ValuePoint, String)> {
        self.keys().map(|p| (p, self.get(p).map(|w| w.to_literal()).unwrap_or_default())).collect()
    }
}
