use std::fmt;

use crate::series::Scalar;
use serde::{Deserialize, Serialize};

use super::{fmt_terms, Coefficient, SeriesError};

/// Which branch parameter a series is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    T1,
    T2,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::T1 => f.write_str("t1"),
            Param::T2 => f.write_str("t2"),
        }
    }
}

/// Order of a truncated series: either a finite exponent or the sentinel
/// for a series with no nonzero coefficient up to its truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(usize),
    AboveTruncation,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(n) => Some(n),
            Order::AboveTruncation => None,
        }
    }
}

/// A power series in one parameter known exactly up to `t^trunc`.
///
/// Coefficients are stored densely; terms above the truncation are unknown,
/// which is different from being zero. A series whose known coefficients all
/// vanish is "zero up to truncation" and has [`Order::AboveTruncation`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniSeries {
    param: Param,
    coeffs: Vec<Coefficient>,
}

impl UniSeries {
    pub fn zero(param: Param, trunc: usize) -> Self {
        UniSeries { param, coeffs: vec![Coefficient::zero(); trunc + 1] }
    }

    pub fn one(param: Param, trunc: usize) -> Self {
        Self::monomial(param, Coefficient::one(), 0, trunc)
    }

    /// `c * t^exp`, zero if `exp > trunc`.
    pub fn monomial(param: Param, c: Coefficient, exp: usize, trunc: usize) -> Self {
        let mut s = Self::zero(param, trunc);
        if exp <= trunc {
            s.coeffs[exp] = c;
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and terms above `trunc` are dropped.
    pub fn from_terms<I>(param: Param, trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, Coefficient)>,
    {
        let mut s = Self::zero(param, trunc);
        for (e, c) in terms {
            if e <= trunc {
                s.coeffs[e] += c;
            }
        }
        s
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn with_param(mut self, param: Param) -> Self {
        self.param = param;
        self
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^e`, or `None` when `e` lies above the truncation.
    pub fn coeff(&self, e: usize) -> Option<&Coefficient> {
        self.coeffs.get(e)
    }

    pub fn coeff_or_zero(&self, e: usize) -> Coefficient {
        self.coeffs.get(e).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Coefficient)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(n) => Order::Finite(n),
            None => Order::AboveTruncation,
        }
    }

    /// Finite order, or `None` when zero up to truncation.
    pub fn ord(&self) -> Option<usize> {
        self.order().finite()
    }

    /// Lower bound for the order usable in truncation bookkeeping.
    fn ord_bound(&self) -> usize {
        self.ord().unwrap_or(self.trunc() + 1)
    }

    pub fn leading(&self) -> Option<(usize, &Coefficient)> {
        self.terms().next()
    }

    pub fn is_zero(&self) -> bool {
        self.ord().is_none()
    }

    /// Forgets every coefficient above `t^trunc`.
    pub fn truncated(&self, trunc: usize) -> Self {
        let t = trunc.min(self.trunc());
        UniSeries { param: self.param, coeffs: self.coeffs[..=t].to_vec() }
    }

    /// Drops the terms of exponent `>= from` while keeping the truncation:
    /// the result is a polynomial known to be zero there.
    pub fn cut_above(&self, from: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(from) {
            *c = Coefficient::zero();
        }
        s
    }

    /// Reinterprets a polynomial as exact up to `trunc` (new slots are zero).
    pub fn extended(&self, trunc: usize) -> Self {
        let mut s = self.truncated(trunc);
        s.coeffs.resize(trunc + 1, Coefficient::zero());
        s
    }

    /// Whether the two series have identical coefficients up to `t^upto`.
    /// Returns `false` if either is not known that far.
    pub fn agrees_with(&self, other: &Self, upto: usize) -> bool {
        self.trunc() >= upto
            && other.trunc() >= upto
            && self.coeffs[..=upto] == other.coeffs[..=upto]
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.param == other.param {
            Ok(())
        } else {
            Err(SeriesError::ParamMismatch(self.param, other.param))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let t = self.trunc().min(other.trunc());
        let coeffs = (0..=t).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(UniSeries { param: self.param, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg())
    }

    /// Product, truncated at `min(T1 + ord s2, T2 + ord s1)`, never beyond
    /// the larger of the two truncations.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let (t1, t2) = (self.trunc(), other.trunc());
        let (o1, o2) = (self.ord_bound(), other.ord_bound());
        let t = (t1 + o2).min(t2 + o1).min(t1.max(t2));
        let mut coeffs = vec![Coefficient::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(t + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(t + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(UniSeries { param: self.param, coeffs })
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        UniSeries { param: self.param, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Self {
        UniSeries { param: self.param, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one(self.param, self.trunc());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Term-by-term derivative, known up to `trunc - 1`.
    pub fn derive(&self) -> Self {
        if self.trunc() == 0 {
            return Self::zero(self.param, 0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|i| &self.coeffs[i] * Coefficient::from(i))
            .collect();
        UniSeries { param: self.param, coeffs }
    }

    /// Exact division by `t^k`; `None` if a term below `t^k` is nonzero.
    pub fn div_t_pow(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        if k > self.trunc() {
            return Some(Self::zero(self.param, 0));
        }
        Some(UniSeries { param: self.param, coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplication by `t^k`.
    pub fn mul_t_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![Coefficient::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniSeries { param: self.param, coeffs }
    }

    /// `self ∘ inner` for an inner series without constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(
            inner.coeffs[0].is_zero(),
            "inner series of a composition must vanish at 0"
        );
        let r = inner.ord_bound();
        let cap = self.trunc().max(inner.trunc());
        let mut t = ((self.trunc() + 1) * r - 1).min(cap);
        for (e, _) in self.terms().filter(|(e, _)| *e >= 1) {
            t = t.min(inner.trunc() + (e - 1) * r);
        }
        let inner = inner.truncated(t);
        let mut out = Self::zero(self.param, t);
        out.coeffs[0] = self.coeffs[0].clone();
        let mut power = Self::one(self.param, t);
        for e in 1..=self.trunc() {
            if e * r > t {
                break;
            }
            power = &power * &inner;
            let c = &self.coeffs[e];
            if c.is_zero() {
                continue;
            }
            for (i, p) in power.coeffs.iter().enumerate().take(t + 1) {
                if !p.is_zero() {
                    out.coeffs[i] += c * p;
                }
            }
        }
        out
    }

    /// `self ∘ rho` for a reparametrization `rho` of order exactly one.
    pub fn reparametrize(&self, rho: &Self) -> Result<Self, SeriesError> {
        self.check(rho)?;
        match rho.ord() {
            Some(1) => Ok(self.compose(rho)),
            other => Err(SeriesError::NotOrderOne(format!("{other:?}"))),
        }
    }

    /// `sigma` with `self ∘ sigma = sigma ∘ self = t` up to truncation,
    /// via Lagrange inversion: `[t^n] sigma = (1/n) [t^(n-1)] (t/self)^n`.
    pub fn compositional_inverse(&self) -> Result<Self, SeriesError> {
        if self.ord() != Some(1) {
            return Err(SeriesError::NotOrderOne(format!("{:?}", self.ord())));
        }
        let t = self.trunc();
        let unit = self.div_t_pow(1).expect("order one");
        let q = unit.recip().expect("unit");
        let mut out = Self::zero(self.param, t);
        let mut power = Self::one(self.param, q.trunc());
        for n in 1..=t {
            power = &power * &q;
            let c = power.coeff_or_zero(n - 1);
            out.coeffs[n] = c / Coefficient::from(n);
        }
        Ok(out)
    }

    /// `1/self` for a unit (nonzero constant term).
    pub fn recip(&self) -> Option<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let normalized = self.scale(&(Coefficient::one() / &c0));
        let inv = normalized.unit_pow(&-Coefficient::one())?;
        Some(inv.scale(&(Coefficient::one() / &c0)))
    }

    /// `self^r` for a unit with constant term exactly 1 and rational `r`,
    /// solved order by order from `u * v' = r * v * u'`.
    pub fn unit_pow(&self, r: &Coefficient) -> Option<Self> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let t = self.trunc();
        let u = &self.coeffs;
        let mut v = vec![Coefficient::zero(); t + 1];
        v[0] = Coefficient::one();
        for n in 1..=t {
            let mut acc = Coefficient::zero();
            for j in 0..n {
                let w = Coefficient::from(n - j);
                if !u[n - j].is_zero() && !v[j].is_zero() {
                    acc += r * &v[j] * &w * &u[n - j];
                }
            }
            for i in 1..n {
                let w = Coefficient::from(n - i);
                if !u[i].is_zero() && !v[n - i].is_zero() {
                    acc -= &u[i] * &w * &v[n - i];
                }
            }
            v[n] = acc / Coefficient::from(n);
        }
        Some(UniSeries { param: self.param, coeffs: v })
    }

    /// The literal form, e.g. `3/2*t^4 + t^6`, without truncation marker.
    pub fn to_literal(&self, var: &str) -> String {
        fmt_terms(self.terms().map(|(e, c)| {
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            (c, mono)
        }))
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal("t"))
    }
}

impl fmt::Debug for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{}) [{}]", self.to_literal("t"), self.trunc() + 1, self.param)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl<'a> std::ops::$tr<&'a UniSeries> for &'a UniSeries {
            type Output = UniSeries;
            /// Panics when the parameters differ; use the `try_` form to
            /// recover instead.
            fn $m(self, rhs: &'a UniSeries) -> UniSeries {
                self.$call(rhs).expect("series parameters must match")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &UniSeries {
    type Output = UniSeries;
    fn neg(self) -> UniSeries {
        UniSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{q, qi};

    fn s(terms: &[(usize, i64)], t: usize) -> UniSeries {
        UniSeries::from_terms(Param::T1, t, terms.iter().map(|&(e, c)| (e, qi(c))))
    }

    #[test]
    fn order_examples() {
        assert_eq!(s(&[(3, 1), (4, -1)], 10).order(), Order::Finite(3));
        assert_eq!(s(&[], 10).order(), Order::AboveTruncation);
        assert_eq!(s(&[(10, 5)], 10).order(), Order::Finite(10));
    }

    #[test]
    fn arithmetic_examples() {
        let a = s(&[(1, 1), (2, 1)], 10);
        let b = s(&[(1, 1)], 10);
        assert_eq!((&a * &b).terms().count(), 2);
        assert!((&a * &b).agrees_with(&s(&[(2, 1), (3, 1)], 10), 10));
        assert!((&s(&[(2, 1)], 10) + &s(&[(2, -1)], 10)).is_zero());
        let c = s(&[(3, 1)], 10).scale(&q(2, 3));
        assert_eq!(c.coeff(3), Some(&q(2, 3)));
    }

    #[test]
    fn mul_truncation_rule() {
        let a = s(&[(2, 1)], 6);
        let b = s(&[(3, 1)], 10);
        // min(6 + 3, 10 + 2) = 9, capped at 10
        assert_eq!((&a * &b).trunc(), 9);
    }

    #[test]
    fn param_mismatch() {
        let a = s(&[(1, 1)], 5);
        let b = a.clone().with_param(Param::T2);
        assert_eq!(a.try_add(&b), Err(SeriesError::ParamMismatch(Param::T1, Param::T2)));
    }

    #[test]
    fn derive_examples() {
        assert!(s(&[(2, 1)], 10).derive().agrees_with(&s(&[(1, 2)], 9), 9));
        assert!(s(&[(0, 7)], 10).derive().is_zero());
        let d = s(&[(3, 1), (5, 1)], 10).derive();
        assert!(d.agrees_with(&s(&[(2, 3), (4, 5)], 9), 9));
        assert_eq!(d.trunc(), 9);
    }

    #[test]
    fn reparametrize_examples() {
        let sq = s(&[(2, 1)], 10);
        let rho = s(&[(1, 1), (2, 1)], 10);
        let r = sq.reparametrize(&rho).unwrap();
        assert!(r.agrees_with(&s(&[(2, 1), (3, 2), (4, 1)], 10), 10));
        let id = s(&[(1, 1)], 10);
        let arb = s(&[(2, 3), (5, -1), (7, 2)], 10);
        assert_eq!(arb.reparametrize(&id).unwrap(), arb);
        let cube = s(&[(3, 1)], 10).reparametrize(&s(&[(1, 2)], 10)).unwrap();
        assert!(cube.agrees_with(&s(&[(3, 8)], 10), 10));
        assert!(sq.reparametrize(&sq).is_err());
    }

    #[test]
    fn inverse_examples() {
        let id = s(&[(1, 1)], 8);
        assert_eq!(id.compositional_inverse().unwrap(), id);
        let two = s(&[(1, 2)], 8);
        assert!(two
            .compositional_inverse()
            .unwrap()
            .agrees_with(&UniSeries::monomial(Param::T1, q(1, 2), 1, 8), 8));
        let rho = s(&[(1, 1), (2, 1)], 8);
        let sigma = rho.compositional_inverse().unwrap();
        // Catalan numbers with alternating sign
        assert!(sigma.agrees_with(
            &s(&[(1, 1), (2, -1), (3, 2), (4, -5), (5, 14), (6, -42), (7, 132), (8, -429)], 8),
            8
        ));
        assert!(rho.compose(&sigma).agrees_with(&id, 8));
        assert!(sigma.compose(&rho).agrees_with(&id, 8));
        assert!(s(&[(2, 1)], 8).compositional_inverse().is_err());
    }

    #[test]
    fn unit_roots() {
        // (1 + t)^(1/2) squared
        let u = s(&[(0, 1), (1, 1)], 8);
        let v = u.unit_pow(&q(1, 2)).unwrap();
        assert!((&v * &v).agrees_with(&u, 8));
        let w = u.recip().unwrap();
        assert!((&w * &u).agrees_with(&s(&[(0, 1)], 8), 8));
        assert!(s(&[(0, 2)], 4).unit_pow(&q(1, 2)).is_none());
    }

    #[test]
    fn literal_rendering() {
        let a = UniSeries::from_terms(Param::T1, 10, [(4, q(3, 2)), (6, qi(1)), (7, qi(-2))]);
        assert_eq!(a.to_string(), "3/2*t^4 + t^6 - 2*t^7");
        assert_eq!(UniSeries::zero(Param::T1, 3).to_string(), "0");
    }
}
