use num_integer::Integer;
use crate::series::Scalar;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Bigerm, BigermError, Branch, Delta};
use crate::series::{q, qi, BiPoly, Coefficient, Param, UniSeries};

/// Subgroup tag of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupClass {
    /// Any element with invertible linear part.
    General,
    /// 1-jet is the identity.
    A1,
    /// 1-jet of the ambient map is `(x + b y, y)`, reparametrizations tangent to the identity.
    A1Tilde,
    /// Linear diagonal maps and linear reparametrizations.
    Homothety,
}

impl GroupClass {
    /// The group `A[delta]` fixing the tangent cone in each case.
    pub fn for_delta(delta: Delta) -> Self {
        match delta {
            Delta::Transversal => GroupClass::A1,
            Delta::Tangent => GroupClass::A1Tilde,
        }
    }
}

/// `(rho_1, rho_2, sigma)` acting by `phi_i ↦ sigma ∘ phi_i ∘ rho_i^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    rho: [UniSeries; 2],
    sigma: [BiPoly; 2],
    class: GroupClass,
}

fn linear_part(p: &BiPoly) -> (Coefficient, Coefficient) {
    (p.coeff(1, 0), p.coeff(0, 1))
}

fn invalid(msg: impl Into<String>) -> BigermError {
    BigermError::NotPuiseux(format!("invalid group element: {}", msg.into()))
}

impl GroupElement {
    pub fn new(
        rho1: UniSeries,
        rho2: UniSeries,
        sigma_x: BiPoly,
        sigma_y: BiPoly,
        class: GroupClass,
    ) -> Result<Self, BigermError> {
        let g = GroupElement {
            rho: [rho1.with_param(Param::T1), rho2.with_param(Param::T2)],
            sigma: [sigma_x, sigma_y],
            class,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), BigermError> {
        for (i, r) in self.rho.iter().enumerate() {
            if r.ord() != Some(1) || !r.coeff_or_zero(0).is_zero() {
                return Err(invalid(format!("rho_{} must have order 1", i + 1)));
            }
        }
        for s in &self.sigma {
            if !s.coeff(0, 0).is_zero() {
                return Err(invalid("sigma must fix the origin"));
            }
        }
        let (a, b) = linear_part(&self.sigma[0]);
        let (c, d) = linear_part(&self.sigma[1]);
        if (&a * &d - &b * &c).is_zero() {
            return Err(invalid("linear part of sigma is singular"));
        }
        let tangent_one = self.rho.iter().all(|r| r.coeff_or_zero(1).is_one());
        let ok = match self.class {
            GroupClass::General => true,
            GroupClass::A1 => tangent_one && a.is_one() && b.is_zero() && c.is_zero() && d.is_one(),
            GroupClass::A1Tilde => tangent_one && a.is_one() && c.is_zero() && d.is_one(),
            GroupClass::Homothety => {
                self.rho.iter().all(|r| r.terms().count() == 1)
                    && self.sigma[0].terms().count() == 1
                    && self.sigma[1].terms().count() == 1
                    && b.is_zero()
                    && c.is_zero()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("jet constraints of {:?} violated", self.class)))
        }
    }

    pub fn identity(trunc: usize) -> Self {
        GroupElement {
            rho: [
                UniSeries::monomial(Param::T1, Coefficient::one(), 1, trunc),
                UniSeries::monomial(Param::T2, Coefficient::one(), 1, trunc),
            ],
            sigma: [BiPoly::x(trunc), BiPoly::y(trunc)],
            class: GroupClass::A1,
        }
    }

    pub fn rho(&self, i: usize) -> &UniSeries {
        &self.rho[i - 1]
    }

    pub fn sigma(&self) -> &[BiPoly; 2] {
        &self.sigma
    }

    pub fn class(&self) -> GroupClass {
        self.class
    }

    /// Applies the element to each branch. The result is truncated at the
    /// bigerm's truncation and is not renormalized.
    pub fn apply(&self, phi: &Bigerm) -> Result<Bigerm, BigermError> {
        let t = phi.trunc();
        let mut out = Vec::with_capacity(2);
        for i in 1..=2 {
            let b = phi.branch(i);
            let nx = self.sigma[0].compose(b.x(), b.y());
            let ny = self.sigma[1].compose(b.x(), b.y());
            let back = self.rho[i - 1].truncated(t).compositional_inverse()?;
            let nx = nx.reparametrize(&back.clone().with_param(nx.param()))?;
            let ny = ny.reparametrize(&back.with_param(ny.param()))?;
            out.push(Branch::unchecked(nx.truncated(t), ny.truncated(t)));
        }
        let b2 = out.pop().expect("two branches");
        let b1 = out.pop().expect("two branches");
        Ok(Bigerm::from_parts(b1, b2, phi.delta()))
    }

    /// `self ∘ other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let rho = [0, 1].map(|i| self.rho[i].compose(&other.rho[i]));
        let sigma = [0, 1].map(|i| self.sigma[i].substitute(&other.sigma[0], &other.sigma[1]));
        let class = if self.class == other.class { self.class } else { GroupClass::General };
        GroupElement { rho, sigma, class }
    }

    /// Inverse element, with the ambient inverse solved degree by degree
    /// from `tau = L^{-1}((x, y) - N(tau))`.
    pub fn inverse(&self) -> Result<Self, BigermError> {
        let rho = [
            self.rho[0].compositional_inverse()?,
            self.rho[1].compositional_inverse()?,
        ];
        let deg = self.sigma[0].deg().min(self.sigma[1].deg());
        let (a, b) = linear_part(&self.sigma[0]);
        let (c, d) = linear_part(&self.sigma[1]);
        let det = &a * &d - &b * &c;
        let (ia, ib, ic, id) = (&d / &det, -&b / &det, -&c / &det, &a / &det);
        let lin = |p: &BiPoly| {
            let (u, v) = linear_part(p);
            BiPoly::from_terms(deg, [((1, 0), u), ((0, 1), v)])
        };
        let nonlinear = [0, 1].map(|i| self.sigma[i].sub(&lin(&self.sigma[i])));
        let apply_inv = |wx: &BiPoly, wy: &BiPoly| {
            [wx.scale(&ia).add(&wy.scale(&ib)), wx.scale(&ic).add(&wy.scale(&id))]
        };
        let mut tau = apply_inv(&BiPoly::x(deg), &BiPoly::y(deg));
        for _ in 0..deg {
            let wx = BiPoly::x(deg).sub(&nonlinear[0].substitute(&tau[0], &tau[1]));
            let wy = BiPoly::y(deg).sub(&nonlinear[1].substitute(&tau[0], &tau[1]));
            tau = apply_inv(&wx, &wy);
        }
        Ok(GroupElement { rho, sigma: tau, class: self.class })
    }
}

const SMALL: [(i64, i64); 10] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-1, 3), (2, 3), (-3, 2)];

/// A random nonzero rational with small numerator and denominator.
pub fn small_rational(rng: &mut impl Rng) -> Coefficient {
    let (n, d) = *SMALL.choose(rng).expect("nonempty");
    q(n, d)
}

/// Deterministic random element of the given class. `size` bounds both the
/// number of higher-order terms and their degrees.
pub fn random_group_element(seed: u64, class: GroupClass, size: usize, trunc: usize) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = size.max(2);
    let mut rho = Vec::new();
    for p in [Param::T1, Param::T2] {
        let lead = match class {
            GroupClass::General | GroupClass::Homothety => small_rational(&mut rng),
            _ => Coefficient::one(),
        };
        let mut r = UniSeries::monomial(p, lead, 1, trunc);
        if class != GroupClass::Homothety {
            for _ in 0..rng.gen_range(1..=size) {
                let e = rng.gen_range(2..=size.min(trunc).max(2));
                r = &r + &UniSeries::monomial(p, small_rational(&mut rng), e, trunc);
            }
        }
        rho.push(r);
    }
    let (a, b, c, d) = match class {
        GroupClass::A1 => (qi(1), qi(0), qi(0), qi(1)),
        GroupClass::A1Tilde => (qi(1), small_rational(&mut rng), qi(0), qi(1)),
        GroupClass::Homothety => (small_rational(&mut rng), qi(0), qi(0), small_rational(&mut rng)),
        GroupClass::General => loop {
            let m = [0; 4].map(|_| if rng.gen_bool(0.5) { small_rational(&mut rng) } else { qi(0) });
            let [a, b, c, d] = m;
            if !(&a * &d - &b * &c).is_zero() {
                break (a, b, c, d);
            }
        },
    };
    let mut sx = BiPoly::from_terms(trunc, [((1, 0), a), ((0, 1), b)]);
    let mut sy = BiPoly::from_terms(trunc, [((1, 0), c), ((0, 1), d)]);
    if class != GroupClass::Homothety {
        for s in [&mut sx, &mut sy] {
            for _ in 0..rng.gen_range(1..=size) {
                let deg = rng.gen_range(2..=size.clamp(2, 4));
                let i = rng.gen_range(0..=deg);
                *s = s.add(&BiPoly::monomial(small_rational(&mut rng), i, deg - i, trunc));
            }
        }
    }
    let rho2 = rho.pop().expect("two");
    let rho1 = rho.pop().expect("two");
    GroupElement::new(rho1, rho2, sx, sy, class).expect("generator respects class constraints")
}

/// A rational homothety that keeps the dominant leading coefficients of a
/// Puiseux-form bigerm equal to one.
pub fn random_unit_homothety(seed: u64, m: (usize, usize), delta: Delta, trunc: usize) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let pow = |c: &Coefficient, e: usize| -> Coefficient {
        (0..e).fold(Coefficient::one(), |acc, _| acc * c)
    };
    let (alpha1, alpha2, a, b) = match delta {
        Delta::Transversal => {
            let a1 = small_rational(&mut rng);
            let a2 = small_rational(&mut rng);
            let a = pow(&a1, m.0);
            let b = pow(&a2, m.1);
            (a1, a2, a, b)
        }
        Delta::Tangent => {
            let g = m.0.gcd(&m.1);
            let lambda = small_rational(&mut rng);
            let a1 = pow(&lambda, m.1 / g);
            let a2 = pow(&lambda, m.0 / g);
            let a = pow(&a1, m.0);
            (a1, a2, a, small_rational(&mut rng))
        }
    };
    GroupElement::new(
        UniSeries::monomial(Param::T1, alpha1, 1, trunc),
        UniSeries::monomial(Param::T2, alpha2, 1, trunc),
        BiPoly::monomial(a, 1, 0, trunc),
        BiPoly::monomial(b, 0, 1, trunc),
        GroupClass::Homothety,
    )
    .expect("homothety")
}
