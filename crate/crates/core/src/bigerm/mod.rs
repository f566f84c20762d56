//! Bigerms: ordered pairs of parametrized branches, their tangency case, the
//! Puiseux normalization, and the action of the reparametrization group.

mod group;
mod input;

pub use group::{random_group_element, random_unit_homothety, small_rational, GroupClass, GroupElement};
pub use input::{BigermInput, BranchInput, InputError};

use std::fmt;

use malachite_base::num::arithmetic::traits::Pow;
use num_integer::Integer;
use crate::series::Scalar;
use serde::{Deserialize, Serialize};

use crate::series::{Coefficient, Param, SeriesError, UniSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BigermError {
    #[error("branch {0}: both components vanish up to truncation")]
    ZeroBranch(usize),
    #[error("branch {0}: parametrization does not pass through the origin")]
    NotAtOrigin(usize),
    #[error("branch {0}: components have equal order, tangent not readable (not in Puiseux orientation)")]
    UndefinedTangent(usize),
    #[error("branch {0}: parametrization is a power substitution (exponent gcd {1})")]
    NotPrimitive(usize, usize),
    #[error("branch {branch}: dominant component has leading coefficient {coeff}, an exact m-th root is required")]
    LeadingCoefficient { branch: usize, coeff: String },
    #[error("the two branches define the same germ up to truncation")]
    SameBranch,
    #[error("declared delta {declared} but the branches have delta {detected}")]
    DeltaMismatch { declared: u8, detected: u8 },
    #[error("terms below order {below} are needed but the bigerm is only known up to {trunc}")]
    JetUnknown { below: usize, trunc: usize },
    #[error("bigerm is not in Puiseux form: {0}")]
    NotPuiseux(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Tangency case: distinct tangents (1) or a common tangent (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Delta {
    Transversal,
    Tangent,
}

impl Delta {
    pub fn value(self) -> u8 {
        match self {
            Delta::Transversal => 1,
            Delta::Tangent => 2,
        }
    }
}

impl From<Delta> for u8 {
    fn from(d: Delta) -> u8 {
        d.value()
    }
}

impl TryFrom<u8> for Delta {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Delta::Transversal),
            2 => Ok(Delta::Tangent),
            _ => Err(format!("delta must be 1 or 2, got {v}")),
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Which coordinate carries the lower order on a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominant {
    X,
    Y,
}

/// One parametrized branch `t ↦ (x(t), y(t))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    x: UniSeries,
    y: UniSeries,
}

impl Branch {
    /// Validates a parametrization: through the origin, not identically
    /// zero, and primitive.
    pub fn new(x: UniSeries, y: UniSeries) -> Result<Self, BigermError> {
        Self::checked(x, y, 0)
    }

    fn checked(x: UniSeries, y: UniSeries, index: usize) -> Result<Self, BigermError> {
        if x.param() != y.param() {
            return Err(SeriesError::ParamMismatch(x.param(), y.param()).into());
        }
        if x.ord() == Some(0) || y.ord() == Some(0) {
            return Err(BigermError::NotAtOrigin(index));
        }
        let b = Branch { x, y };
        let m = b.multiplicity_opt().ok_or(BigermError::ZeroBranch(index))?;
        let g = b
            .x
            .terms()
            .chain(b.y.terms())
            .fold(m, |g, (e, _)| g.gcd(&e));
        if g != 1 {
            return Err(BigermError::NotPrimitive(index, g));
        }
        Ok(b)
    }

    pub(crate) fn unchecked(x: UniSeries, y: UniSeries) -> Self {
        Branch { x, y }
    }

    pub fn x(&self) -> &UniSeries {
        &self.x
    }

    pub fn y(&self) -> &UniSeries {
        &self.y
    }

    pub fn param(&self) -> Param {
        self.x.param()
    }

    fn multiplicity_opt(&self) -> Option<usize> {
        match (self.x.ord(), self.y.ord()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }

    /// `m = min(ord x, ord y)`.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity_opt().expect("validated branch is nonzero")
    }

    /// The coordinate of strictly lower order, `None` if the orders tie.
    pub fn dominant(&self) -> Option<Dominant> {
        let ox = self.x.ord().unwrap_or(usize::MAX);
        let oy = self.y.ord().unwrap_or(usize::MAX);
        match ox.cmp(&oy) {
            std::cmp::Ordering::Less => Some(Dominant::X),
            std::cmp::Ordering::Greater => Some(Dominant::Y),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn component(&self, d: Dominant) -> &UniSeries {
        match d {
            Dominant::X => &self.x,
            Dominant::Y => &self.y,
        }
    }

    pub fn trunc(&self) -> usize {
        self.x.trunc().min(self.y.trunc())
    }

    pub fn swapped_coordinates(&self) -> Self {
        Branch { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn with_param(&self, p: Param) -> Self {
        Branch { x: self.x.clone().with_param(p), y: self.y.clone().with_param(p) }
    }

    pub fn truncated(&self, t: usize) -> Self {
        Branch { x: self.x.truncated(t), y: self.y.truncated(t) }
    }

    /// Reparametrizes `t ↦ rho(t)`, i.e. returns `(x∘rho, y∘rho)`.
    pub fn reparametrize(&self, rho: &UniSeries) -> Result<Self, BigermError> {
        Ok(Branch { x: self.x.reparametrize(rho)?, y: self.y.reparametrize(rho)? })
    }

    /// Coefficients of `t^m` in both components.
    fn tangent_vector(&self) -> [Coefficient; 2] {
        let m = self.multiplicity();
        [self.x.coeff_or_zero(m), self.y.coeff_or_zero(m)]
    }

    /// `(r0 x + r1 y, s0 x + s1 y)` for rows `r`, `s`.
    fn linear_image(&self, r: &[Coefficient; 2], s: &[Coefficient; 2]) -> Self {
        let comb = |c: &[Coefficient; 2]| &self.x.scale(&c[0]) + &self.y.scale(&c[1]);
        Branch { x: comb(r), y: comb(s) }
    }

    /// `t ↦ s t`.
    fn rescaled(&self, s: &Coefficient) -> Self {
        let scale = |u: &UniSeries| {
            UniSeries::from_terms(u.param(), u.trunc(), u.terms().map(|(e, c)| (e, c * s.pow(e as u64))))
        };
        Branch { x: scale(&self.x), y: scale(&self.y) }
    }

    /// Rewrites the branch so that its dominant component is exactly
    /// `t^m`, via `t ↦ t·u(t)^(1/m)` where the dominant component is
    /// `t^m·u(t)`. Requires `u(0) = 1`.
    fn puiseux(&self, dom: Dominant, index: usize) -> Result<Self, BigermError> {
        if self.is_puiseux_in(dom) {
            return Ok(self.clone());
        }
        let d = self.component(dom);
        let m = d.ord().expect("dominant component is nonzero");
        let (_, lead) = d.leading().expect("nonzero");
        if !lead.is_one() {
            return Err(BigermError::LeadingCoefficient { branch: index, coeff: lead.to_string() });
        }
        let unit = d.div_t_pow(m).expect("order m");
        let root = unit
            .unit_pow(&crate::series::q(1, m as i64))
            .expect("unit with constant term 1");
        let tau = root.mul_t_pow(1).truncated(d.trunc());
        let back = tau.compositional_inverse()?;
        let t = self.trunc();
        let exact = UniSeries::monomial(self.param(), Coefficient::one(), m, t);
        let (x, y) = match dom {
            Dominant::X => (exact, self.y.reparametrize(&back)?.truncated(t)),
            Dominant::Y => (self.x.reparametrize(&back)?.truncated(t), exact),
        };
        Ok(Branch { x, y })
    }

    fn is_puiseux_in(&self, dom: Dominant) -> bool {
        let d = self.component(dom);
        let m = match d.ord() {
            Some(m) => m,
            None => return false,
        };
        d.terms().count() == 1 && d.leading().is_some_and(|(_, c)| c.is_one()) && {
            let other = match dom {
                Dominant::X => &self.y,
                Dominant::Y => &self.x,
            };
            other.ord().is_none_or(|o| o > m)
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.to_literal("t"), self.y.to_literal("t"))
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// Tangency case of two branches in Puiseux orientation.
pub fn detect_case(b1: &Branch, b2: &Branch) -> Result<Delta, BigermError> {
    let d1 = b1.dominant().ok_or(BigermError::UndefinedTangent(1))?;
    let d2 = b2.dominant().ok_or(BigermError::UndefinedTangent(2))?;
    Ok(if d1 == d2 { Delta::Tangent } else { Delta::Transversal })
}

/// Two branches with a tangency case, known up to the working truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bigerm {
    branches: [Branch; 2],
    delta: Delta,
}

impl Bigerm {
    /// Builds a bigerm in Puiseux form from two branches in any tangent
    /// orientation: detects `delta`, swaps coordinates if needed so that
    /// branch 1 is tangent to `y = 0`, and Puiseux-normalizes both branches.
    pub fn from_branches(b1: Branch, b2: Branch) -> Result<Self, BigermError> {
        let b1 = Branch::checked(b1.x, b1.y, 1)?.with_param(Param::T1);
        let b2 = Branch::checked(b2.x, b2.y, 2)?.with_param(Param::T2);
        let delta = detect_case(&b1, &b2)?;
        let (b1, b2) = if b1.dominant() == Some(Dominant::Y) {
            (b1.swapped_coordinates(), b2.swapped_coordinates())
        } else {
            (b1, b2)
        };
        let raw = Bigerm { branches: [b1, b2], delta };
        raw.puiseux_normalize()
    }

    /// Builds a bigerm from branches in arbitrary linear coordinates: a
    /// rational linear change sends the tangents to the axes and makes the
    /// leading coefficients of the dominant components equal to one.
    pub fn prepare(b1: Branch, b2: Branch) -> Result<Self, BigermError> {
        let b1 = Branch::checked(b1.x, b1.y, 1)?.with_param(Param::T1);
        let b2 = Branch::checked(b2.x, b2.y, 2)?.with_param(Param::T2);
        let v1 = b1.tangent_vector();
        let v2 = b2.tangent_vector();
        let det = &v2[1] * &v1[0] - &v2[0] * &v1[1];
        let tangent = det.is_zero();
        let first = if tangent {
            if v1[0].is_zero() { [Coefficient::zero(), Coefficient::one()] } else { [Coefficient::one(), Coefficient::zero()] }
        } else {
            [v2[1].clone(), -v2[0].clone()]
        };
        let second = [-v1[1].clone(), v1[0].clone()];
        let b1 = b1.linear_image(&first, &second);
        let b2 = b2.linear_image(&first, &second);
        let (m1, m2) = (b1.multiplicity(), b2.multiplicity());
        let lead = |b: &Branch, d: Dominant| b.component(d).coeff_or_zero(b.multiplicity());
        let (b1, b2) = if tangent {
            let (a1, a2) = (lead(&b1, Dominant::X), lead(&b2, Dominant::X));
            let g = m1.gcd(&m2);
            let r = &a2 / &a1;
            let root = crate::equivalence::torus::rational_root(&r, g as u64).ok_or_else(|| BigermError::LeadingCoefficient {
                branch: 2,
                coeff: r.to_string(),
            })?;
            let u = (1..=m2).find(|u| (u * m1 - g) % m2 == 0).expect("Bezout");
            let v = (u * m1 - g) / m2;
            let s1 = (&root).pow(u as u64);
            let s2 = (&root).pow(v as u64);
            let lambda = Coefficient::one() / (&a1 * (&s1).pow(m1 as u64));
            let one = Coefficient::one();
            let zero = Coefficient::zero();
            let scale = |b: Branch, s: &Coefficient| b.rescaled(s).linear_image(&[lambda.clone(), zero.clone()], &[zero.clone(), one.clone()]);
            (scale(b1, &s1), scale(b2, &s2))
        } else {
            let (a, b) = (lead(&b1, Dominant::X), lead(&b2, Dominant::Y));
            let first = [Coefficient::one() / a, Coefficient::zero()];
            let second = [Coefficient::zero(), Coefficient::one() / b];
            (b1.linear_image(&first, &second), b2.linear_image(&first, &second))
        };
        Bigerm::from_branches(b1, b2)
    }

    /// Assembles a bigerm without renormalizing; the result may be outside
    /// Puiseux form.
    pub fn from_parts(b1: Branch, b2: Branch, delta: Delta) -> Self {
        Bigerm {
            branches: [b1.with_param(Param::T1), b2.with_param(Param::T2)],
            delta,
        }
    }

    pub fn branch(&self, i: usize) -> &Branch {
        &self.branches[i - 1]
    }

    pub fn branches(&self) -> &[Branch; 2] {
        &self.branches
    }

    pub fn delta(&self) -> Delta {
        self.delta
    }

    pub fn multiplicity(&self) -> (usize, usize) {
        (self.branches[0].multiplicity(), self.branches[1].multiplicity())
    }

    pub fn trunc(&self) -> usize {
        self.branches[0].trunc().min(self.branches[1].trunc())
    }

    /// Dominant coordinate of branch `i` in Puiseux orientation.
    pub fn dominant_of(&self, i: usize) -> Dominant {
        match (i, self.delta) {
            (2, Delta::Transversal) => Dominant::Y,
            _ => Dominant::X,
        }
    }

    /// The component carrying the Puiseux coefficients `a_ij` of branch `i`.
    pub fn free_component(&self, i: usize) -> &UniSeries {
        match self.dominant_of(i) {
            Dominant::X => self.branch(i).y(),
            Dominant::Y => self.branch(i).x(),
        }
    }

    pub fn truncated(&self, t: usize) -> Self {
        Bigerm {
            branches: [self.branches[0].truncated(t), self.branches[1].truncated(t)],
            delta: self.delta,
        }
    }

    pub fn is_puiseux(&self) -> bool {
        (1..=2).all(|i| self.branch(i).is_puiseux_in(self.dominant_of(i)))
    }

    pub fn require_puiseux(&self) -> Result<(), BigermError> {
        if self.is_puiseux() {
            Ok(())
        } else {
            Err(BigermError::NotPuiseux(self.to_string()))
        }
    }

    /// Reparametrizes each branch so its dominant component is a pure power.
    pub fn puiseux_normalize(&self) -> Result<Self, BigermError> {
        let delta = detect_case(&self.branches[0], &self.branches[1])?;
        if delta != self.delta {
            return Err(BigermError::DeltaMismatch {
                declared: self.delta.value(),
                detected: delta.value(),
            });
        }
        if self.branches[0].dominant() != Some(Dominant::X) {
            return Err(BigermError::NotPuiseux("branch 1 is not tangent to y = 0".into()));
        }
        let b1 = self.branches[0].puiseux(Dominant::X, 1)?;
        let b2 = self.branches[1].puiseux(self.dominant_of(2), 2)?;
        Ok(Bigerm { branches: [b1, b2], delta })
    }

    /// Exchanges the two branches, then swaps coordinates when the tangents
    /// are distinct so that the new branch 1 is again tangent to `y = 0`.
    pub fn swap_branches(&self) -> Result<Self, BigermError> {
        let [b1, b2] = self.branches.clone();
        let (n1, n2) = match self.delta {
            Delta::Transversal => (b2.swapped_coordinates(), b1.swapped_coordinates()),
            Delta::Tangent => (b2, b1),
        };
        Bigerm::from_branches(n1, n2)
    }

    /// Replaces the Puiseux coefficients of both branches, keeping the pure
    /// powers.
    pub(crate) fn with_free_components(&self, f1: UniSeries, f2: UniSeries) -> Self {
        let mut out = self.clone();
        for (i, f) in [(1, f1), (2, f2)] {
            let b = &self.branches[i - 1];
            out.branches[i - 1] = match self.dominant_of(i) {
                Dominant::X => Branch { x: b.x.clone(), y: f },
                Dominant::Y => Branch { x: f, y: b.y.clone() },
            };
        }
        out
    }

    /// Sets every term of order `>= from` in the free components to zero.
    pub fn cut_above(&self, from: usize) -> Self {
        self.with_free_components(
            self.free_component(1).cut_above(from),
            self.free_component(2).cut_above(from),
        )
    }

    /// Keeps the terms of order `< below` in the free components and treats
    /// the result as a polynomial bigerm known exactly up to `trunc`.
    pub fn exact_jet(&self, below: usize, trunc: usize) -> Result<Self, BigermError> {
        if below > 0 && self.trunc() < below - 1 {
            return Err(BigermError::JetUnknown { below, trunc: self.trunc() });
        }
        let mut out = self.cut_above(below);
        for b in out.branches.iter_mut() {
            *b = Branch { x: b.x.extended(trunc), y: b.y.extended(trunc) };
        }
        Ok(out)
    }

    /// True when every coefficient of the free components vanishes at
    /// orders `>= from`.
    pub fn is_polynomial_below(&self, from: usize) -> bool {
        (1..=2).all(|i| self.free_component(i).terms().all(|(e, _)| e < from))
    }
}

impl fmt::Display for Bigerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] (delta = {})", self.branches[0], self.branches[1], self.delta)
    }
}

impl fmt::Debug for Bigerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}] delta={}", self.branches[0], self.branches[1], self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{parse_series, q, qi};

    pub(crate) fn br(x: &str, y: &str, w: usize) -> Branch {
        Branch::new(
            parse_series(x, Param::T1, w).unwrap(),
            parse_series(y, Param::T1, w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn detect_case_examples() {
        assert_eq!(detect_case(&br("t^2", "t^3", 10), &br("t^3", "t^2", 10)), Ok(Delta::Transversal));
        assert_eq!(detect_case(&br("t^2", "t^3", 10), &br("t^3", "t^7", 10)), Ok(Delta::Tangent));
        let line_x = Branch::new(parse_series("t", Param::T1, 10).unwrap(), UniSeries::zero(Param::T1, 10)).unwrap();
        let line_y = line_x.swapped_coordinates();
        assert_eq!(detect_case(&line_x, &line_y), Ok(Delta::Transversal));
        assert_eq!(
            detect_case(&br("t^2", "t^2 + t^3", 10), &line_x),
            Err(BigermError::UndefinedTangent(1))
        );
    }

    #[test]
    fn branch_validation() {
        let w = 10;
        let p = |s: &str| parse_series(s, Param::T1, w).unwrap();
        assert_eq!(Branch::new(p("t^2"), p("t^4")), Err(BigermError::NotPrimitive(0, 2)));
        assert_eq!(
            Branch::new(UniSeries::zero(Param::T1, w), UniSeries::zero(Param::T1, w)),
            Err(BigermError::ZeroBranch(0))
        );
        assert_eq!(Branch::new(p("1 + t"), p("t^2")), Err(BigermError::NotAtOrigin(0)));
    }

    #[test]
    fn puiseux_normalize_examples() {
        let w = 12;
        let phi = Bigerm::from_branches(br("t^2", "t^5 + 1/2*t^7", w), br("t^3", "t^7", w)).unwrap();
        assert!(phi.is_puiseux());
        assert_eq!(phi.free_component(1).coeff(7), Some(&q(1, 2)));

        let phi = Bigerm::from_branches(br("t^2 + t^3", "t^3", w), br("t^3", "t^2", w)).unwrap();
        let b1 = phi.branch(1);
        assert_eq!(b1.x().terms().count(), 1);
        assert_eq!(b1.x().coeff(2), Some(&qi(1)));
        // x = t^2 + t^3 = s^2 gives t = s - s^2/2 + ..., y = s^3 - 3/2 s^4 + ...
        assert_eq!(b1.y().coeff(3), Some(&qi(1)));
        assert_eq!(b1.y().coeff(4), Some(&q(-3, 2)));

        let err = Bigerm::from_branches(br("2*t^2", "t^3", w), br("t^3", "t^2", w));
        assert!(matches!(err, Err(BigermError::LeadingCoefficient { branch: 1, .. })));
    }

    #[test]
    fn orientation_is_fixed_by_coordinate_swap() {
        let w = 10;
        let phi = Bigerm::from_branches(br("t^3", "t^2", w), br("t^2", "t^3", w)).unwrap();
        assert_eq!(phi.delta(), Delta::Transversal);
        assert_eq!(phi.branch(1).x().ord(), Some(2));
        let phi = Bigerm::from_branches(br("t^3", "t^2", w), br("t^5", "t^2", w)).unwrap();
        assert_eq!(phi.delta(), Delta::Tangent);
        assert_eq!(phi.branch(2).y().ord(), Some(5));
    }
}
