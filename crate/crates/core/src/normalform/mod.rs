//! Normal forms of bigerms: elimination of every removable Puiseux term by
//! the flow of a differential witness, followed by homothety scaling and
//! classification into families.

mod analysis;
mod classify;
mod flow;
mod homothety;
mod reduce;

use serde_json::json;

pub use analysis::{invariants, Invariants, Source, DEFAULT_CAP};
pub use classify::{classify, Case, Shape};
pub use flow::{correction_from_witness, TangentCorrection};
pub use homothety::{normalize_pivots, select_pivots, structural_constraints, support, term_weight, unknowns, Scaled, Term, TermRole};
pub use reduce::{eliminate_term, reduce_a_delta, removable_exponents, Reduction, Removable};

use crate::bigerm::{Bigerm, BigermError, InputError};
use crate::series::fmt_coeff;
use crate::valuesets::{ValuePoint, VsError};

#[derive(Debug, thiserror::Error)]
pub enum NfError {
    #[error("form {0} does not lie in the module of admissible differentials")]
    NotInOmega(String),
    #[error("coefficient of the witness is not divisible by the branch {branch} parametrization derivative")]
    NonExactDivision { branch: usize },
    #[error("no witness removes the order-{k} term of branch {branch}")]
    WitnessMissing { branch: usize, k: usize },
    #[error("flow failed to cancel the order-{k} term of branch {branch}")]
    NoProgress { branch: usize, k: usize },
    #[error("invariants not resolved below the truncation cap {cap}")]
    TruncationCap { cap: usize },
    #[error("semigroup conductor {found:?} differs from the branch data prediction {expected:?}")]
    ConductorMismatch { expected: ValuePoint, found: Option<ValuePoint> },
    #[error("normal form matches no family: {0}")]
    Unclassified(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Bigerm(#[from] BigermError),
    #[error(transparent)]
    ValueSet(#[from] VsError),
}

/// A germ in normal form, with the invariants used to reach it.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub invariants: Invariants,
    /// Representative with every removable term cancelled, before scaling.
    pub reduced: Bigerm,
    /// Representative after the rational homothety, when one exists.
    pub scaled: Bigerm,
    pub terms: Vec<Term>,
    pub rational: bool,
    pub shape: Shape,
}

impl NormalForm {
    pub fn case(&self) -> Case {
        self.shape.case
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (m1, m2) = self.invariants.multiplicity();
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                json!({
                    "branch": t.branch,
                    "exponent": t.exponent,
                    "coeff": fmt_coeff(&t.coeff),
                    "role": t.role,
                    "weight": t.weight,
                })
            })
            .collect();
        json!({
            "case": self.shape.case,
            "mirrored": self.shape.mirrored,
            "delta": self.invariants.delta().value(),
            "m": [m1, m2],
            "j1": self.shape.j1,
            "j2": self.shape.j2,
            "k": self.shape.k,
            "cutoff": self.invariants.cutoff,
            "terms": terms,
            "gamma": self.invariants.gamma.to_json(),
            "lambda_delta": self.invariants.lambda_delta.to_json(),
        })
    }

    /// The parametrization with pivots written as 1 and kept coefficients
    /// replaced by the parameters `a, b, c, ...` in support order.
    pub fn family(&self) -> String {
        let mut letters = ('a'..='z').map(String::from);
        let names: Vec<Option<String>> = self
            .terms
            .iter()
            .map(|t| if t.role == TermRole::Kept { letters.next() } else { None })
            .collect();
        let free = |b: usize| -> String {
            let parts: Vec<String> = self
                .terms
                .iter()
                .zip(&names)
                .filter(|(t, _)| t.branch == b)
                .map(|(t, name)| {
                    let mono = power(&format!("t{b}"), t.exponent);
                    match name {
                        Some(n) => format!("{n}*{mono}"),
                        None => mono,
                    }
                })
                .collect();
            if parts.is_empty() { "0".into() } else { parts.join(" + ") }
        };
        let (m1, m2) = self.invariants.multiplicity();
        let b2 = match self.invariants.delta() {
            crate::bigerm::Delta::Transversal => format!("({}, {})", free(2), power("t2", m2)),
            crate::bigerm::Delta::Tangent => format!("({}, {})", power("t2", m2), free(2)),
        };
        format!("({}, {}) {b2}", power("t1", m1), free(1))
    }

    /// Human-readable parametrization; pending pivots are shown as `1*`.
    pub fn render(&self) -> String {
        let phi = &self.scaled;
        let (m1, m2) = phi.multiplicity();
        let free = |b: usize, var: &str| -> String {
            let parts: Vec<String> = self
                .terms
                .iter()
                .filter(|t| t.branch == b)
                .map(|t| {
                    let mono = power(var, t.exponent);
                    match t.role {
                        TermRole::PendingScale => format!("1*{mono}"),
                        _ if t.coeff == 1 => mono,
                        _ => format!("{}*{mono}", fmt_coeff(&t.coeff)),
                    }
                })
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ").replace("+ -", "- ")
            }
        };
        let b1 = format!("({}, {})", power("t1", m1), free(1, "t1"));
        let b2 = match phi.delta() {
            crate::bigerm::Delta::Transversal => format!("({}, {})", free(2, "t2"), power("t2", m2)),
            crate::bigerm::Delta::Tangent => format!("({}, {})", power("t2", m2), free(2, "t2")),
        };
        let mut out = format!("case {}: [{b1}, {b2}]", self.shape.case.label());
        if !self.rational {
            out.push_str("\n  * equals 1 after a homothety with irrational coefficients");
        }
        out
    }
}

/// `var^e`, written `var` when `e = 1`.
pub fn power(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Analyzes the germ and brings it to normal form.
pub fn normal_form(src: &Source, cap: usize) -> Result<NormalForm, NfError> {
    let invariants = invariants(src, cap)?;
    let reduction = reduce_a_delta(&invariants.phi, invariants.cutoff)?;
    let Scaled { scaled, terms, rational } = normalize_pivots(&reduction.reduced);
    let shape = classify(invariants.delta(), invariants.multiplicity(), &terms)?;
    Ok(NormalForm { invariants, reduced: reduction.reduced, scaled, terms, rational, shape })
}

#[cfg(test)]
mod tests;
