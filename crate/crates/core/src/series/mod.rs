//! Exact truncated power series in one parameter and truncated bivariate
//! polynomials over the rationals.

mod bipoly;
mod parse;
mod uni;

pub use bipoly::BiPoly;
pub use parse::{parse_bipoly, parse_series, ParseError};
pub use uni::{Order, Param, UniSeries};

/// Exact rational coefficient, always kept reduced with a positive
/// denominator.
pub type Coefficient = malachite_q::Rational;

/// Field constants and tests used throughout the crate.
pub trait Scalar: Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
}

impl Scalar for Coefficient {
    fn zero() -> Self {
        Coefficient::from(0)
    }

    fn one() -> Self {
        Coefficient::from(1)
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn is_one(&self) -> bool {
        *self == 1
    }

    fn is_negative(&self) -> bool {
        *self < 0
    }
}

/// Shorthand for the rational `num/den`.
pub fn q(num: i64, den: i64) -> Coefficient {
    Coefficient::from_signeds(num, den)
}

/// Shorthand for an integer coefficient.
pub fn qi(n: i64) -> Coefficient {
    Coefficient::from(n)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series in {0} combined with series in {1}")]
    ParamMismatch(Param, Param),
    #[error("reparametrization must have order exactly 1 (got {0})")]
    NotOrderOne(String),
}

pub(crate) fn fmt_coeff(c: &Coefficient) -> String {
    c.to_string()
}

/// Renders `coef * mono` joined with signs, `mono` already formatted (empty
/// for the constant term).
pub(crate) fn fmt_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Coefficient, String)>,
{
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&fmt_coeff(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_coeff(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
