//! Value semigroup `Γ`, differential value sets `Λ` and `Λ[δ]`, and the
//! staircase combinatorics (conductor, fibers, maximal points) read off them.
//!
//! A value set is only ever known inside a window `[0, B1] × [0, B2]`. Every
//! point reported inside the window is exact; statements about what lies
//! beyond the window are made only through the detected conductor.

mod generators;
mod saturate;
mod semigroup;
mod witness;

use std::collections::BTreeSet;

use serde_json::json;

pub use generators::{differential_generators, form_monomials, form_values, function_generators, BranchPowers, FormMonomial, SetKind};
pub use saturate::{saturate, Generator};
pub use semigroup::{branch_semigroup, intersection_multiplicity, NumericalSemigroup};
pub use witness::{Differential, Witness, WitnessTable};

use crate::bigerm::{Bigerm, BigermError};
use crate::series::{BiPoly, UniSeries};

/// A pair of pullback orders `(v1, v2)`.
pub type ValuePoint = (usize, usize);

/// Returned instead of a value when a function or form vanishes identically
/// (up to truncation) on the given branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("vanishes on branch {0}")]
pub struct BranchVanishing(pub usize);

#[derive(Debug, thiserror::Error)]
pub enum VsError {
    #[error("window {window:?} needs coefficients beyond the known truncation {trunc:?}")]
    WindowExceedsTruncation { window: ValuePoint, trunc: ValuePoint },
    #[error("conductor not detected inside window {:?} ({} points found)", .partial.window(), .partial.len())]
    ConductorNotDetected { partial: Box<ValueSet> },
    #[error("point {0:?} lies outside the region where fibers are reliable")]
    OutsideReliableRegion(ValuePoint),
    #[error("branch semigroup conductor not detected below truncation {trunc}")]
    BranchConductorNotDetected { trunc: usize },
    #[error("value set has no detected conductor")]
    ConductorMissing,
    #[error("truncation {trunc} too small to resolve the intersection multiplicity")]
    IntersectionUnresolved { trunc: usize },
    #[error("the two branches coincide up to the working truncation")]
    SameBranch,
    #[error(transparent)]
    Bigerm(#[from] BigermError),
}

/// The points of a value set inside a window, with its conductor when the
/// full quadrant above it was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSet {
    window: ValuePoint,
    points: BTreeSet<ValuePoint>,
    conductor: Option<ValuePoint>,
}

impl ValueSet {
    /// Wraps the points found inside `window` and looks for a conductor whose
    /// quadrant is filled at least `margin` steps in each direction.
    pub fn new(window: ValuePoint, points: BTreeSet<ValuePoint>, margin: usize) -> Self {
        let points: BTreeSet<_> = points.into_iter().filter(|p| p.0 <= window.0 && p.1 <= window.1).collect();
        let conductor = detect_conductor(window, &points, margin);
        ValueSet { window, points, conductor }
    }

    pub fn window(&self) -> ValuePoint {
        self.window
    }

    pub fn points(&self) -> &BTreeSet<ValuePoint> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: ValuePoint) -> bool {
        self.points.contains(&p)
    }

    pub fn conductor(&self) -> Option<ValuePoint> {
        self.conductor
    }

    /// True when a conductor was found; the quadrant above it is then
    /// contained in the set everywhere inside the window.
    pub fn is_quadrant_closed(&self) -> bool {
        self.conductor.is_some()
    }

    /// The same set seen through a smaller window.
    pub fn restricted(&self, window: ValuePoint) -> BTreeSet<ValuePoint> {
        self.points.iter().copied().filter(|p| p.0 <= window.0 && p.1 <= window.1).collect()
    }

    /// `F_i(p)`: points agreeing with `p` in coordinate `i` and strictly larger
    /// in the other one.
    pub fn fiber(&self, i: usize, p: ValuePoint) -> Result<BTreeSet<ValuePoint>, VsError> {
        let c = self.conductor.ok_or(VsError::ConductorMissing)?;
        let (b1, b2) = self.window;
        let reliable = p.0 <= b1 && p.1 <= b2 && {
            let (own, other, own_bound, other_bound, c_own, c_other) = match i {
                1 => (p.0, p.1, b1, b2, c.0, c.1),
                _ => (p.1, p.0, b2, b1, c.1, c.0),
            };
            other < other_bound && own.max(c_own) < own_bound && c_other <= other_bound
        };
        if !reliable {
            return Err(VsError::OutsideReliableRegion(p));
        }
        Ok(self
            .points
            .iter()
            .copied()
            .filter(|q| match i {
                1 => q.0 == p.0 && q.1 > p.1,
                _ => q.1 == p.1 && q.0 > p.0,
            })
            .collect())
    }

    /// Points of the conductor rectangle `[0, c1] × [0, c2]`, boundary
    /// included, whose two fibers are empty.
    pub fn maximal_points(&self) -> Result<BTreeSet<ValuePoint>, VsError> {
        let c = self.conductor.ok_or(VsError::ConductorMissing)?;
        let mut out = BTreeSet::new();
        for &p in self.points.iter().filter(|p| p.0 <= c.0 && p.1 <= c.1) {
            if self.fiber(1, p)?.is_empty() && self.fiber(2, p)?.is_empty() {
                out.insert(p);
            }
        }
        Ok(out)
    }

    /// Property A: `(a1,a2), (b1,b2)` with `a1 < b1`, `a2 > b2` force
    /// `(a1, b2)`. Returns the first violating triple.
    pub fn check_property_a(&self) -> Result<(), (ValuePoint, ValuePoint)> {
        for &a in &self.points {
            for &b in self.points.range((a.0 + 1, 0)..) {
                if a.1 > b.1 && !self.contains((a.0, b.1)) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// Property B: `(a1,a2), (a1,b2)` with `a2 ≠ b2` force some `(a, min)`
    /// with `a > a1`, in both coordinate directions. Pairs whose required
    /// point could only lie beyond the window are skipped.
    pub fn check_property_b(&self) -> Result<(), (ValuePoint, ValuePoint)> {
        let (b1, b2) = self.window;
        for &p in &self.points {
            for &q in self.points.range((p.0, p.1 + 1)..(p.0 + 1, 0)) {
                let low = p.1.min(q.1);
                let found = (p.0 + 1..=b1).any(|a| self.contains((a, low)));
                if !found && p.0 < b1 && self.conductor.is_some_and(|c| c.0 < b1) {
                    return Err((p, q));
                }
            }
        }
        let by_second: BTreeSet<(usize, usize)> = self.points.iter().map(|&(a, b)| (b, a)).collect();
        for &(s, f) in &by_second {
            for &(_, f2) in by_second.range((s, f + 1)..(s + 1, 0)) {
                let low = f.min(f2);
                let found = (s + 1..=b2).any(|b| self.contains((low, b)));
                if !found && s < b2 && self.conductor.is_some_and(|c| c.1 < b2) {
                    return Err(((f, s), (f2, s)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<[usize; 2]> = self.points.iter().map(|&(a, b)| [a, b]).collect();
        let maximal: Option<Vec<[usize; 2]>> = self
            .maximal_points()
            .ok()
            .map(|m| m.into_iter().map(|(a, b)| [a, b]).collect());
        json!({
            "window": [self.window.0, self.window.1],
            "points": pts,
            "conductor": self.conductor.map(|(a, b)| [a, b]),
            "maximal": maximal,
        })
    }
}

/// Minimal corner `c` such that every point of `[c1, B1] × [c2, B2]` is in
/// the set and `B - c >= margin` componentwise.
fn detect_conductor(window: ValuePoint, points: &BTreeSet<ValuePoint>, margin: usize) -> Option<ValuePoint> {
    let (b1, b2) = window;
    // full[a][b]: the rectangle [a, b1] × [b, b2] is filled
    let mut full = vec![vec![false; b2 + 2]; b1 + 2];
    for a in (0..=b1).rev() {
        for b in (0..=b2).rev() {
            let right = a == b1 || full[a + 1][b];
            let up = b == b2 || full[a][b + 1];
            full[a][b] = points.contains(&(a, b)) && right && up;
        }
    }
    let lowest_b = |a: usize| (0..=b2).find(|&b| full[a][b]);
    let first_a = (0..=b1).find(|&a| lowest_b(a).is_some())?;
    let c2 = lowest_b(first_a)?;
    if (first_a..=b1).any(|a| lowest_b(a).is_some_and(|b| b < c2)) {
        return None;
    }
    let c = (first_a, c2);
    (b1 >= c.0 + margin && b2 >= c.1 + margin).then_some(c)
}

/// `(ord η∘φ1, ord η∘φ2)`.
pub fn value_of_function(eta: &BiPoly, phi: &Bigerm) -> Result<ValuePoint, BranchVanishing> {
    let s1 = eta.compose(phi.branch(1).x(), phi.branch(1).y());
    let s2 = eta.compose(phi.branch(2).x(), phi.branch(2).y());
    orders(&s1, &s2)
}

/// `(ord ω(φ1) + 1, ord ω(φ2) + 1)`.
pub fn value_of_differential(omega: &Differential, phi: &Bigerm) -> Result<ValuePoint, BranchVanishing> {
    let s1 = omega.pullback(phi.branch(1));
    let s2 = omega.pullback(phi.branch(2));
    orders(&s1, &s2).map(|(a, b)| (a + 1, b + 1))
}

fn orders(s1: &UniSeries, s2: &UniSeries) -> Result<ValuePoint, BranchVanishing> {
    let a = s1.ord().ok_or(BranchVanishing(1))?;
    let b = s2.ord().ok_or(BranchVanishing(2))?;
    Ok((a, b))
}

/// Value set together with the witnesses realizing each point.
pub type Saturated = (ValueSet, WitnessTable);

fn margin(phi: &Bigerm) -> usize {
    let (m1, m2) = phi.multiplicity();
    m1 + m2
}

/// Largest window supported by the truncation of `phi` for each kind.
pub fn max_window(phi: &Bigerm, kind: SetKind) -> ValuePoint {
    let w = |i: usize| phi.branch(i).trunc();
    let (m1, m2) = phi.multiplicity();
    match kind {
        SetKind::Gamma | SetKind::Lambda => (w(1), w(2)),
        SetKind::LambdaDelta => (w(1).saturating_sub(m1), w(2).saturating_sub(m2)),
    }
}

/// Computes the value set of the given kind inside `window`.
pub fn value_set(phi: &Bigerm, kind: SetKind, window: ValuePoint) -> Result<Saturated, VsError> {
    let gens = match kind {
        SetKind::Gamma => function_generators(phi, window),
        _ => differential_generators(phi, kind, window),
    };
    let (points, table) = saturate(&gens, window)?;
    let set = ValueSet::new(window, points, margin(phi));
    if set.conductor().is_none() {
        return Err(VsError::ConductorNotDetected { partial: Box::new(set) });
    }
    Ok((set, table))
}

/// The value semigroup, in the largest window the truncation allows.
pub fn gamma(phi: &Bigerm) -> Result<Saturated, VsError> {
    value_set(phi, SetKind::Gamma, max_window(phi, SetKind::Gamma))
}

/// Values of all differential forms.
pub fn lambda(phi: &Bigerm) -> Result<Saturated, VsError> {
    value_set(phi, SetKind::Lambda, max_window(phi, SetKind::Lambda))
}

/// Values of `Ω[δ]`, shifted by the multiplicities.
pub fn lambda_delta(phi: &Bigerm) -> Result<Saturated, VsError> {
    phi.require_puiseux()?;
    value_set(phi, SetKind::LambdaDelta, max_window(phi, SetKind::LambdaDelta))
}


#[cfg(test)]
mod tests;
