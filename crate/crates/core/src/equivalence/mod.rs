//! Deciding whether two bigerms are analytically equivalent: compare the
//! value sets for both branch orders, then look for a homothety between the
//! normal forms.

pub mod torus;

use serde::Serialize;
use serde_json::json;

pub use torus::{monomial, smith_form, solvable_over_c, solve_over_q, MultiplicativeConstraint, Smith};

use crate::normalform::{invariants, normal_form, structural_constraints, unknowns, Invariants, NfError, NormalForm, Source};
use crate::series::fmt_coeff;

/// Supports of two normal forms differ, so no homothety relates them.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("normal forms have different shapes: {0}")]
pub struct ShapeMismatch(pub String);

/// Which order of the second germ's branches was compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchOrder {
    AsGiven,
    Swapped,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub equivalent: bool,
    pub order: Option<BranchOrder>,
    pub case: Option<String>,
    pub constraints: Vec<MultiplicativeConstraint>,
    /// Reason the last compared order failed, when not equivalent.
    pub reason: String,
}

impl Verdict {
    fn negative(reason: impl Into<String>) -> Self {
        Verdict { equivalent: false, order: None, case: None, constraints: Vec::new(), reason: reason.into() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let constraints: Vec<serde_json::Value> = self
            .constraints
            .iter()
            .map(|c| json!({ "exponents": c.exponents, "ratio": fmt_coeff(&c.target) }))
            .collect();
        json!({
            "equivalent": self.equivalent,
            "order": self.order,
            "case": self.case,
            "constraints": constraints,
            "reason": self.reason,
        })
    }
}

/// Relations `h^(w_q) = b_q / a_q` that a homothety `h` taking `a` to `b`
/// must satisfy, together with the structural relations.
pub fn homothety_constraints(a: &NormalForm, b: &NormalForm) -> Result<Vec<MultiplicativeConstraint>, ShapeMismatch> {
    let (ia, ib) = (&a.invariants, &b.invariants);
    if ia.delta() != ib.delta() || ia.multiplicity() != ib.multiplicity() {
        return Err(ShapeMismatch(format!(
            "delta {} / {}, m {:?} / {:?}",
            ia.delta(),
            ib.delta(),
            ia.multiplicity(),
            ib.multiplicity()
        )));
    }
    let sup = |n: &NormalForm| n.terms.iter().map(|t| (t.branch, t.exponent)).collect::<Vec<_>>();
    if sup(a) != sup(b) {
        return Err(ShapeMismatch(format!("supports {:?} / {:?}", sup(a), sup(b))));
    }
    let mut out = structural_constraints(ia.delta(), ia.multiplicity());
    for (s, t) in a.terms.iter().zip(&b.terms) {
        out.push(MultiplicativeConstraint::new(s.weight.clone(), &t.coeff / &s.coeff));
    }
    Ok(out)
}

fn same_sets(a: &Invariants, b: &Invariants) -> (bool, bool) {
    let gamma = a.multiplicity() == b.multiplicity() && a.gamma == b.gamma;
    (gamma, gamma && a.lambda_delta == b.lambda_delta)
}

/// Compares `φ` with `ψ` in both branch orders of `ψ`: value semigroups,
/// `Λ[δ]`, and finally homotheties between the normal forms.
pub fn decide_equivalence(phi: &Source, psi: &Source, cap: usize) -> Result<Verdict, NfError> {
    let inv_phi = invariants(phi, cap)?;
    let psi_given = invariants(psi, cap)?;
    let psi_swapped_src = Source::Jet(psi_given.phi.swap_branches()?);
    let psi_swapped = invariants(&psi_swapped_src, cap)?;
    let candidates = [
        (BranchOrder::AsGiven, psi, psi_given),
        (BranchOrder::Swapped, &psi_swapped_src, psi_swapped),
    ];
    let matching: Vec<_> = candidates.into_iter().filter(|(_, _, inv)| same_sets(&inv_phi, inv).0).collect();
    if matching.is_empty() {
        return Ok(Verdict::negative("value semigroups differ in both branch orders"));
    }
    let nf_phi = normal_form(phi, cap)?;
    let mut verdict = Verdict::negative("");
    for (order, src, inv) in matching {
        if !same_sets(&inv_phi, &inv).1 {
            verdict = Verdict::negative(format!("{order:?}: differential value sets differ"));
            continue;
        }
        let nf_psi = normal_form(src, cap)?;
        let case = Some(nf_phi.case().label().to_string());
        match homothety_constraints(&nf_phi, &nf_psi) {
            Err(e) => verdict = Verdict::negative(format!("{order:?}: {e}")),
            Ok(cs) => {
                let n = unknowns(inv.delta());
                if solvable_over_c(&cs, n) {
                    return Ok(Verdict { equivalent: true, order: Some(order), case, constraints: cs, reason: String::new() });
                }
                verdict = Verdict {
                    equivalent: false,
                    order: Some(order),
                    case,
                    constraints: cs,
                    reason: format!("{order:?}: no homothety relates the normal forms"),
                };
            }
        }
    }
    Ok(verdict)
}
