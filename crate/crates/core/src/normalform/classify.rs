use serde::Serialize;

use super::homothety::{Term, TermRole};
use super::NfError;
use crate::bigerm::Delta;

/// Normal-form family of a germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "a'")]
    APrime,
    #[serde(rename = "b'")]
    BPrime,
    #[serde(rename = "c'")]
    CPrime,
    #[serde(rename = "d'")]
    DPrime,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
            Case::D => "d",
            Case::APrime => "a'",
            Case::BPrime => "b'",
            Case::CPrime => "c'",
            Case::DPrime => "d'",
        }
    }
}

/// Family together with its discrete parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub case: Case,
    /// The roles of the two branches are exchanged relative to the family.
    pub mirrored: bool,
    pub j1: Option<usize>,
    pub j2: Option<usize>,
    pub k: Option<usize>,
}

pub fn classify(delta: Delta, m: (usize, usize), terms: &[Term]) -> Result<Shape, NfError> {
    let exps = |b: usize| terms.iter().filter(|t| t.branch == b).map(|t| t.exponent).collect::<Vec<_>>();
    let (t1, t2) = (exps(1), exps(2));
    let j1 = t1.first().copied();
    let j2 = t2.first().copied();
    let second = || terms.iter().filter(|t| t.role != TermRole::Kept).nth(1).map(|t| t.exponent);
    let shape = |case, mirrored, k| Ok(Shape { case, mirrored, j1, j2, k });
    let unmatched = || Err(NfError::Unclassified(format!("m = {m:?}, exponents {t1:?} and {t2:?}")));
    match delta {
        Delta::Transversal => match (t1.len(), t2.len()) {
            (0, 0) if m == (1, 1) => shape(Case::D, false, None),
            (1, 0) if m.1 == 1 => shape(Case::C, false, None),
            (0, 1) if m.0 == 1 => shape(Case::C, true, None),
            (1, 1) => shape(Case::B, false, None),
            (0, 0) => unmatched(),
            _ => shape(Case::A, t1.is_empty(), second()),
        },
        Delta::Tangent => match (t1.len(), t2.len()) {
            (1, 0) if m.1 == 1 => shape(Case::DPrime, false, None),
            (0, 1) if m.0 == 1 => shape(Case::DPrime, true, None),
            (1, 1) => {
                let c = |b: usize| &terms.iter().find(|t| t.branch == b).expect("one term per branch").coeff;
                let parallel = m.0 == m.1 && j1 == j2 && *c(1) != *c(2);
                shape(if parallel { Case::CPrime } else { Case::BPrime }, false, None)
            }
            (0, 0) => unmatched(),
            _ => shape(Case::APrime, t1.is_empty(), second()),
        },
    }
}
