use std::collections::BTreeMap;
use std::fmt;

use super::Scalar;

use super::{fmt_terms, Coefficient, UniSeries};

/// A polynomial in `x, y` known up to total degree `deg`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), Coefficient>,
    deg: usize,
}

impl BiPoly {
    pub fn zero(deg: usize) -> Self {
        BiPoly { terms: BTreeMap::new(), deg }
    }

    pub fn monomial(c: Coefficient, a: usize, b: usize, deg: usize) -> Self {
        Self::from_terms(deg, [((a, b), c)])
    }

    pub fn x(deg: usize) -> Self {
        Self::monomial(Coefficient::from(1), 1, 0, deg)
    }

    pub fn y(deg: usize) -> Self {
        Self::monomial(Coefficient::from(1), 0, 1, deg)
    }

    pub fn from_terms<I>(deg: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), Coefficient)>,
    {
        let mut p = Self::zero(deg);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, (a, b): (usize, usize), c: Coefficient) {
        if a + b > self.deg || c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(Coefficient::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Coefficient)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, a: usize, b: usize) -> Coefficient {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least total degree of a nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(a, b)| a + b).min()
    }

    /// Whether every term has total degree at least 2, i.e. `p ∈ (x,y)^2`.
    pub fn in_square_of_maximal_ideal(&self) -> bool {
        self.low_degree().is_none_or(|d| d >= 2)
    }

    pub fn truncated(&self, deg: usize) -> Self {
        let deg = deg.min(self.deg);
        Self::from_terms(deg, self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        Self::from_terms(self.deg, self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.truncated(other.deg);
        for (k, c) in &other.terms {
            p.add_term(*k, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Coefficient::from(1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l1 = self.low_degree().unwrap_or(self.deg + 1);
        let l2 = other.low_degree().unwrap_or(other.deg + 1);
        let deg = (self.deg + l2).min(other.deg + l1).min(self.deg.max(other.deg));
        let mut p = Self::zero(deg);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                p.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        p
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.deg.saturating_sub(1),
            self.terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|((a, b), c)| ((a - 1, *b), c * Coefficient::from(*a))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.deg.saturating_sub(1),
            self.terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|((a, b), c)| ((*a, b - 1), c * Coefficient::from(*b))),
        )
    }

    /// Applies the derivation `f ↦ v1·∂f/∂x + v2·∂f/∂y`.
    pub fn derivation(&self, v1: &Self, v2: &Self) -> Self {
        v1.mul(&self.partial_x()).add(&v2.mul(&self.partial_y()))
    }

    /// `p(x(t), y(t))`. Both inner series must vanish at the origin.
    pub fn compose(&self, x: &UniSeries, y: &UniSeries) -> UniSeries {
        let param = x.param();
        let ox = x.ord().unwrap_or(x.trunc() + 1);
        let oy = y.ord().unwrap_or(y.trunc() + 1);
        assert!(ox >= 1 && oy >= 1, "compose needs components vanishing at 0");
        let cap = x.trunc().max(y.trunc());
        let tail = ((self.deg + 1) * ox.min(oy)).saturating_sub(1);
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let xp = powers(x, max_a, cap);
        let yp = powers(y, max_b, cap);
        let mut t = tail.min(cap);
        let mut parts = Vec::with_capacity(self.terms.len());
        for ((a, b), c) in &self.terms {
            let m = &xp[*a] * &yp[*b];
            t = t.min(m.trunc());
            parts.push(m.scale(c));
        }
        let mut out = UniSeries::zero(param, t);
        for p in parts {
            out = &out + &p.truncated(t);
        }
        out
    }

    /// `p(u(x,y), v(x,y))` for `u, v` without constant term.
    pub fn substitute(&self, u: &Self, v: &Self) -> Self {
        let deg = self.deg.min(u.deg).min(v.deg);
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let one = Self::monomial(Coefficient::from(1), 0, 0, deg);
        let mut up = vec![one.clone()];
        for i in 1..=max_a {
            up.push(up[i - 1].mul(u).truncated(deg));
        }
        let mut vp = vec![one];
        for i in 1..=max_b {
            vp.push(vp[i - 1].mul(v).truncated(deg));
        }
        let mut out = Self::zero(deg);
        for ((a, b), c) in &self.terms {
            out = out.add(&up[*a].mul(&vp[*b]).scale(c).extended(deg));
        }
        out
    }

    /// Same terms, known up to `deg` (new degrees are taken as zero).
    pub fn extended(&self, deg: usize) -> Self {
        BiPoly { terms: self.terms.clone(), deg }.truncated(deg)
    }

    pub fn to_literal(&self) -> String {
        // graded order: by total degree, then by descending x power
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|((a, b), _)| (a + b, std::cmp::Reverse(*a)));
        fmt_terms(keys.into_iter().map(|((a, b), c)| {
            let mut parts = Vec::new();
            match a {
                0 => {}
                1 => parts.push("x".to_string()),
                _ => parts.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("y".to_string()),
                _ => parts.push(format!("y^{b}")),
            }
            (c, parts.join("*"))
        }))
    }
}

fn powers(s: &UniSeries, n: usize, cap: usize) -> Vec<UniSeries> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(UniSeries::one(s.param(), cap));
    for i in 1..=n {
        let next = &out[i - 1] * s;
        out.push(next);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [deg<={}]", self.to_literal(), self.deg)
    }
}
