//! Text and JSON input formats:
//!
//! ```text
//! delta: 2
//! branch1: x = t^2, y = t^5 + 1/2*t^7
//! branch2: x = t^3, y = t^7
//! ```

use serde::{Deserialize, Serialize};

use super::{Bigerm, BigermError, Branch};
use crate::series::{parse_series, ParseError, Param};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchInput {
    pub x: String,
    pub y: String,
}

/// A bigerm as written by the user: polynomial components, exact up to any
/// truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigermInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u8>,
    pub branch1: BranchInput,
    pub branch2: BranchInput,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Literal { line: usize, source: ParseError },
    #[error("invalid JSON bigerm: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Bigerm(#[from] BigermError),
}

impl BigermInput {
    pub fn new(b1: (&str, &str), b2: (&str, &str)) -> Self {
        BigermInput {
            delta: None,
            branch1: BranchInput { x: b1.0.into(), y: b1.1.into() },
            branch2: BranchInput { x: b2.0.into(), y: b2.1.into() },
        }
    }

    /// Accepts either the JSON form or the line-based text form.
    pub fn parse(src: &str) -> Result<Self, InputError> {
        if src.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(src)?);
        }
        let mut delta = None;
        let mut branches: [Option<BranchInput>; 2] = [None, None];
        for (n, raw) in src.lines().enumerate() {
            let line = n + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) = text
                .split_once(':')
                .ok_or_else(|| InputError::Syntax { line, msg: "expected `key: value`".into() })?;
            match key.trim() {
                "delta" => {
                    let d: u8 = value.trim().parse().map_err(|_| InputError::Syntax {
                        line,
                        msg: format!("delta must be 1 or 2, got `{}`", value.trim()),
                    })?;
                    if d != 1 && d != 2 {
                        return Err(InputError::Syntax { line, msg: format!("delta must be 1 or 2, got {d}") });
                    }
                    delta = Some(d);
                }
                k @ ("branch1" | "branch2") => {
                    let idx = if k == "branch1" { 0 } else { 1 };
                    branches[idx] = Some(parse_branch_line(value, line)?);
                }
                other => {
                    return Err(InputError::Syntax { line, msg: format!("unknown key `{other}`") });
                }
            }
        }
        let [b1, b2] = branches;
        let missing = |name: &str| InputError::Syntax { line: src.lines().count(), msg: format!("missing {name}") };
        Ok(BigermInput {
            delta,
            branch1: b1.ok_or_else(|| missing("branch1"))?,
            branch2: b2.ok_or_else(|| missing("branch2"))?,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(d) = self.delta {
            s.push_str(&format!("delta: {d}\n"));
        }
        s.push_str(&format!("branch1: x = {}, y = {}\n", self.branch1.x, self.branch1.y));
        s.push_str(&format!("branch2: x = {}, y = {}\n", self.branch2.x, self.branch2.y));
        s
    }

    /// Builds the Puiseux-form bigerm, with all series known up to `trunc`.
    pub fn realize(&self, trunc: usize) -> Result<Bigerm, InputError> {
        let lit = |s: &str, p: Param, line: usize| {
            parse_series(s, p, trunc).map_err(|source| InputError::Literal { line, source })
        };
        let b1 = Branch::checked(
            lit(&self.branch1.x, Param::T1, 1)?,
            lit(&self.branch1.y, Param::T1, 1)?,
            1,
        )?;
        let b2 = Branch::checked(
            lit(&self.branch2.x, Param::T2, 2)?,
            lit(&self.branch2.y, Param::T2, 2)?,
            2,
        )?;
        let phi = Bigerm::prepare(b1, b2)?;
        if let Some(d) = self.delta {
            if d != phi.delta().value() {
                return Err(BigermError::DeltaMismatch { declared: d, detected: phi.delta().value() }.into());
            }
        }
        Ok(phi)
    }
}

fn parse_branch_line(value: &str, line: usize) -> Result<BranchInput, InputError> {
    let mut x = None;
    let mut y = None;
    for part in value.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| InputError::Syntax { line, msg: "expected `x = ..., y = ...`".into() })?;
        let v = v.trim().to_string();
        match k.trim() {
            "x" => x = Some(v),
            "y" => y = Some(v),
            other => return Err(InputError::Syntax { line, msg: format!("unknown component `{other}`") }),
        }
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok(BranchInput { x, y }),
        _ => Err(InputError::Syntax { line, msg: "branch needs both x and y".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigerm::Delta;

    const SAMPLE: &str = "delta: 2\nbranch1: x = t^2, y = t^5 + 1/2*t^7\nbranch2: x = t^3, y = t^7\n";

    #[test]
    fn text_format() {
        let inp = BigermInput::parse(SAMPLE).unwrap();
        assert_eq!(inp.delta, Some(2));
        assert_eq!(inp.branch1.y, "t^5 + 1/2*t^7");
        let phi = inp.realize(16).unwrap();
        assert_eq!(phi.delta(), Delta::Tangent);
        assert_eq!(BigermInput::parse(&inp.to_text()).unwrap(), inp);
    }

    #[test]
    fn json_format() {
        let inp = BigermInput::parse(SAMPLE).unwrap();
        let js = serde_json::to_string(&inp).unwrap();
        assert_eq!(BigermInput::parse(&js).unwrap(), inp);
    }

    #[test]
    fn diagnostics() {
        let e = BigermInput::parse("delta: 3\n").unwrap_err();
        assert!(e.to_string().starts_with("line 1"), "{e}");
        let e = BigermInput::parse("branch1: x = t^2\n").unwrap_err();
        assert!(e.to_string().contains("line 1"));
        let e = BigermInput::parse("delta: 1\nbranch1: x = t^2, y = t^5\nbranch2: x = t^3, y = t^7\n")
            .unwrap()
            .realize(12)
            .unwrap_err();
        assert!(e.to_string().contains("declared delta 1"));
    }
}
