//! Literal syntax: `3/2*t^4 + t^6`, `x^2*y - 1/3*y^3`.

use std::str::FromStr;

use super::{BiPoly, Coefficient, Param, Scalar, UniSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{input}` at byte {pos}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { input: self.src.to_string(), pos: self.pos, msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<Coefficient> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| Coefficient::from_str(&self.src[start..self.pos]).expect("digits"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        Some(self.src[start..self.pos].to_string())
    }
}

type Term = (Coefficient, Vec<(String, usize)>);

fn parse_terms(src: &str) -> Result<Vec<Term>, ParseError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut out = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            if first {
                return Err(cur.err("empty expression"));
            }
            break;
        }
        let mut sign = Coefficient::one();
        if cur.eat('-') {
            sign = -sign;
        } else if !cur.eat('+') && !first {
            return Err(cur.err("expected `+` or `-`"));
        }
        first = false;
        let mut coef = Coefficient::one();
        let mut vars = Vec::new();
        let mut expect_factor = true;
        while expect_factor {
            if let Some(n) = cur.integer() {
                let den = if cur.eat('/') {
                    cur.integer().ok_or_else(|| cur.err("expected denominator"))?
                } else {
                    Coefficient::one()
                };
                if den.is_zero() {
                    return Err(cur.err("zero denominator"));
                }
                coef *= n / den;
            } else if let Some(name) = cur.ident() {
                let exp = if cur.eat('^') {
                    let e = cur.integer().ok_or_else(|| cur.err("expected exponent"))?;
                    e.to_string().parse::<usize>().map_err(|_| cur.err("exponent too large"))?
                } else {
                    1
                };
                vars.push((name, exp));
            } else {
                return Err(cur.err("expected a number or variable"));
            }
            expect_factor = cur.eat('*');
        }
        out.push((sign * coef, vars));
    }
    Ok(out)
}

/// Parses a univariate literal in `t` (also accepting `t1`/`t2`), known up
/// to `t^trunc`.
pub fn parse_series(src: &str, param: Param, trunc: usize) -> Result<UniSeries, ParseError> {
    let mut terms = Vec::new();
    for (c, vars) in parse_terms(src)? {
        let mut e = 0;
        for (name, k) in vars {
            if !matches!(name.as_str(), "t" | "t1" | "t2") {
                return Err(ParseError {
                    input: src.to_string(),
                    pos: 0,
                    msg: format!("unknown variable `{name}` in a series"),
                });
            }
            e += k;
        }
        terms.push((e, c));
    }
    Ok(UniSeries::from_terms(param, trunc, terms))
}

/// Parses a bivariate literal in `x`, `y`.
pub fn parse_bipoly(src: &str, deg: usize) -> Result<BiPoly, ParseError> {
    let mut terms = Vec::new();
    for (c, vars) in parse_terms(src)? {
        let (mut a, mut b) = (0, 0);
        for (name, k) in vars {
            match name.as_str() {
                "x" => a += k,
                "y" => b += k,
                other => {
                    return Err(ParseError {
                        input: src.to_string(),
                        pos: 0,
                        msg: format!("unknown variable `{other}` in a polynomial"),
                    })
                }
            }
        }
        terms.push(((a, b), c));
    }
    Ok(BiPoly::from_terms(deg, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{q, qi};

    #[test]
    fn series_literals() {
        let s = parse_series("3/2*t^4 + t^6", Param::T1, 10).unwrap();
        assert_eq!(s.coeff(4), Some(&q(3, 2)));
        assert_eq!(s.coeff(6), Some(&qi(1)));
        let s = parse_series("-t^2 - 2*t + 5", Param::T2, 4).unwrap();
        assert_eq!(s.to_string(), "5 - 2*t - t^2");
        assert!(parse_series("t^", Param::T1, 4).is_err());
        assert!(parse_series("x", Param::T1, 4).is_err());
        assert!(parse_series("1/0*t", Param::T1, 4).is_err());
        assert!(parse_series("", Param::T1, 4).is_err());
    }

    #[test]
    fn bipoly_literals() {
        let p = parse_bipoly("x^2*y - 1/3*y^3", 6).unwrap();
        assert_eq!(p.coeff(2, 1), qi(1));
        assert_eq!(p.coeff(0, 3), q(-1, 3));
        assert_eq!(parse_bipoly(&p.to_literal(), 6).unwrap(), p);
    }
}
