use super::NfError;
use crate::bigerm::{Bigerm, Branch, Delta};
use crate::series::{BiPoly, Coefficient, Scalar, UniSeries};
use crate::valuesets::{BranchPowers, Differential};

const EXACT: usize = 1 << 16;

/// Infinitesimal element of `A[δ]`: ambient field `(η1 + β y, η2)` and a
/// reparametrization field `ε_i` on each branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCorrection {
    pub eps: [UniSeries; 2],
    pub eta1: BiPoly,
    pub eta2: BiPoly,
    pub beta: Coefficient,
    pub k: usize,
}

impl TangentCorrection {
    /// The ambient vector field, with `β y` folded into the first component.
    pub fn field(&self) -> [BiPoly; 2] {
        [self.eta1.add(&BiPoly::monomial(self.beta.clone(), 0, 1, EXACT)), self.eta2.clone()]
    }

    pub fn scaled(&self, s: &Coefficient) -> Self {
        TangentCorrection {
            eps: [self.eps[0].scale(s), self.eps[1].scale(s)],
            eta1: self.eta1.scale(s),
            eta2: self.eta2.scale(s),
            beta: &self.beta * s,
            k: self.k,
        }
    }

    /// `(x_i' ε_i + ξ1(φ_i), y_i' ε_i + ξ2(φ_i))` for each branch.
    pub fn induced_vector(&self, phi: &Bigerm) -> [[UniSeries; 2]; 2] {
        let [f1, f2] = self.field();
        [1, 2].map(|i| {
            let b = phi.branch(i);
            let eps = &self.eps[i - 1];
            [
                &(&b.x().derive() * eps) + &f1.compose(b.x(), b.y()),
                &(&b.y().derive() * eps) + &f2.compose(b.x(), b.y()),
            ]
        })
    }

    /// Time-one flow: `σ ∘ φ_i ∘ ρ_i`, with `σ` the flow of the ambient field
    /// and `ρ_i` the flow of `ε_i`, renormalized to Puiseux form.
    pub fn flow(&self, phi: &Bigerm) -> Result<Bigerm, NfError> {
        let field = self.field();
        let mut out = Vec::with_capacity(2);
        for i in 1..=2 {
            let b = phi.branch(i);
            let weight = Weight::of(b);
            let field = [weight.prune(&field[0], weight.slack()), weight.prune(&field[1], weight.slack())];
            let mut powers = BranchPowers::new(b);
            let moved = [BiPoly::x(EXACT), BiPoly::y(EXACT)].map(|u| {
                let image = lie_series(&u, &field, &weight);
                reparametrize_flow(&powers.eval(&image), &self.eps[i - 1])
            });
            let [x, y] = moved;
            out.push(Branch::unchecked(x, y));
        }
        let b2 = out.pop().expect("two branches");
        let b1 = out.pop().expect("two branches");
        Ok(Bigerm::from_parts(b1, b2, phi.delta()).puiseux_normalize()?)
    }
}

/// Pullback orders of monomials on one branch, used to drop everything
/// beyond the truncation.
struct Weight {
    ox: Option<usize>,
    oy: Option<usize>,
    trunc: usize,
}

impl Weight {
    fn of(b: &Branch) -> Self {
        Weight { ox: b.x().ord(), oy: b.y().ord(), trunc: b.trunc() }
    }

    fn slack(&self) -> usize {
        self.ox.unwrap_or(0).max(self.oy.unwrap_or(0))
    }

    fn of_monomial(&self, a: usize, b: usize) -> Option<usize> {
        let part = |o: Option<usize>, e: usize| if e == 0 { Some(0) } else { o.map(|o| o * e) };
        Some(part(self.ox, a)? + part(self.oy, b)?)
    }

    fn prune(&self, p: &BiPoly, slack: usize) -> BiPoly {
        BiPoly::from_terms(
            EXACT,
            p.terms()
                .filter(|((a, b), _)| self.of_monomial(*a, *b).is_some_and(|w| w <= self.trunc + slack))
                .map(|(k, c)| (*k, c.clone())),
        )
    }
}

/// `exp(X) u` for the derivation `X = ξ1 ∂x + ξ2 ∂y`, dropping monomials
/// whose pullback lies beyond the truncation.
fn lie_series(u: &BiPoly, field: &[BiPoly; 2], weight: &Weight) -> BiPoly {
    let mut acc = u.clone();
    let mut term = u.clone();
    let mut n = 1i64;
    loop {
        term = weight.prune(&term.derivation(&field[0], &field[1]), 0).scale(&Coefficient::from_signeds(1, n));
        if term.is_zero() {
            return acc;
        }
        acc = acc.add(&term);
        n += 1;
    }
}

/// `g ∘ ρ` for `ρ` the time-one flow of `ε(t) d/dt`, i.e. `exp(ε d/dt) g`.
fn reparametrize_flow(g: &UniSeries, eps: &UniSeries) -> UniSeries {
    let mut acc = g.clone();
    let mut term = g.clone();
    let mut n = 1i64;
    loop {
        term = (&term.derive() * eps).scale(&Coefficient::from_signeds(1, n));
        if term.is_zero() {
            return acc;
        }
        acc = &acc + &term;
        n += 1;
    }
}

/// Turns `ω = g2 dx + g1 dy ∈ Ω[δ]` into the element of the tangent space
/// whose induced vector is `[(0, h1), (-1)^δ((2-δ) h2, (δ-1) h2)]`, with
/// `h_i = ω(φ_i) / (m_i t^(m_i - 1))`.
pub fn correction_from_witness(omega: &Differential, phi: &Bigerm, k: usize) -> Result<TangentCorrection, NfError> {
    phi.require_puiseux()?;
    if !omega.in_omega(phi.delta()) {
        return Err(NfError::NotInOmega(omega.to_literal()));
    }
    let (g2, g1) = (omega.dx_part(), omega.dy_part());
    let quotient = |g: &BiPoly, i: usize| -> Result<UniSeries, NfError> {
        let b = phi.branch(i);
        let m = b.multiplicity();
        let pull = g.compose(b.x(), b.y());
        let q = pull.div_t_pow(m - 1).ok_or(NfError::NonExactDivision { branch: i })?;
        let q = q.scale(&Coefficient::from_signeds(1, m as i64));
        if q.ord().is_some_and(|o| o < 2) {
            return Err(NfError::NonExactDivision { branch: i });
        }
        Ok(q)
    };
    let eps1 = quotient(&g1, 1)?;
    let eps2 = match phi.delta() {
        Delta::Transversal => quotient(&g2, 2)?.neg(),
        Delta::Tangent => quotient(&g1, 2)?,
    };
    Ok(TangentCorrection {
        eps: [eps1, eps2],
        eta1: omega.eta2.scale(&-Coefficient::one()),
        eta2: omega.eta1.clone(),
        beta: -omega.beta.clone(),
        k,
    })
}
