use serde_json::json;

use super::NfError;
use crate::bigerm::{Bigerm, BigermInput, Branch, Delta};
use crate::valuesets::{
    branch_semigroup, intersection_multiplicity, value_set, NumericalSemigroup, SetKind, ValuePoint, ValueSet,
    VsError,
};

/// Default ceiling on the working truncation.
pub const DEFAULT_CAP: usize = 512;

const START: usize = 16;

/// Where the coefficients of a germ come from.
#[derive(Debug, Clone)]
pub enum Source {
    /// Polynomial components typed by the user.
    Input(BigermInput),
    /// A germ in any coordinates whose known coefficients are taken as an
    /// exact polynomial jet.
    Jet(Bigerm),
}

impl Source {
    pub fn realize(&self, trunc: usize) -> Result<Bigerm, NfError> {
        match self {
            Source::Input(i) => Ok(i.realize(trunc)?),
            Source::Jet(phi) => {
                let [b1, b2] = phi.branches().clone().map(|b| Branch::new(b.x().extended(trunc), b.y().extended(trunc)));
                Ok(Bigerm::prepare(b1?, b2?)?)
            }
        }
    }
}

impl From<BigermInput> for Source {
    fn from(i: BigermInput) -> Self {
        Source::Input(i)
    }
}

impl From<Bigerm> for Source {
    fn from(phi: Bigerm) -> Self {
        Source::Jet(phi)
    }
}

/// Topological and analytic invariants of a germ, each computed in a window
/// fixed by the invariants themselves.
#[derive(Debug, Clone)]
pub struct Invariants {
    pub phi: Bigerm,
    pub intersection: usize,
    pub semigroups: [NumericalSemigroup; 2],
    pub gamma: ValueSet,
    pub lambda_delta: ValueSet,
    /// Order from which every Puiseux term is removable.
    pub cutoff: usize,
}

impl Invariants {
    pub fn delta(&self) -> Delta {
        self.phi.delta()
    }

    pub fn multiplicity(&self) -> (usize, usize) {
        self.phi.multiplicity()
    }

    pub fn conductor(&self) -> ValuePoint {
        self.gamma.conductor().expect("detected during analysis")
    }

    pub fn lambda_delta_conductor(&self) -> ValuePoint {
        self.lambda_delta.conductor().expect("detected during analysis")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (m1, m2) = self.multiplicity();
        let semigroup = |s: &NumericalSemigroup| {
            json!({ "generators": s.generators(), "conductor": s.conductor(), "gaps": s.gaps() })
        };
        json!({
            "delta": self.delta().value(),
            "m": [m1, m2],
            "intersection_multiplicity": self.intersection,
            "branch_semigroups": [semigroup(&self.semigroups[0]), semigroup(&self.semigroups[1])],
            "conductor": self.conductor(),
            "gamma": self.gamma.to_json(),
            "lambda_delta": self.lambda_delta.to_json(),
            "cutoff": self.cutoff,
        })
    }
}

fn recoverable(e: &VsError) -> bool {
    matches!(
        e,
        VsError::BranchConductorNotDetected { .. }
            | VsError::IntersectionUnresolved { .. }
            | VsError::ConductorNotDetected { .. }
            | VsError::WindowExceedsTruncation { .. }
    )
}

/// Branch semigroups and intersection multiplicity, doubling the truncation
/// until they are resolved.
fn branch_data(src: &Source, cap: usize) -> Result<([NumericalSemigroup; 2], usize), NfError> {
    let mut t = START.min(cap);
    loop {
        let phi = src.realize(t)?;
        let attempt = || -> Result<_, VsError> {
            let s1 = branch_semigroup(phi.branch(1))?;
            let s2 = branch_semigroup(phi.branch(2))?;
            Ok(([s1, s2], intersection_multiplicity(&phi)?))
        };
        match attempt() {
            Ok(r) => return Ok(r),
            Err(e) if recoverable(&e) && t < cap => t = (2 * t).min(cap),
            Err(VsError::IntersectionUnresolved { .. }) => return Err(VsError::SameBranch.into()),
            Err(e) if recoverable(&e) => return Err(NfError::TruncationCap { cap }),
            Err(e) => return Err(e.into()),
        }
    }
}

/// Computes all invariants of the germ given by `src`, never reading
/// coefficients beyond `cap`.
pub fn invariants(src: &Source, cap: usize) -> Result<Invariants, NfError> {
    let (semigroups, intersection) = branch_data(src, cap)?;
    let probe = src.realize(START.min(cap))?;
    let (m1, m2) = probe.multiplicity();
    let margin = m1 + m2;
    let c = (semigroups[0].conductor() + intersection, semigroups[1].conductor() + intersection);
    let gamma_window = (c.0 + margin, c.1 + margin);
    let mut ld_window = gamma_window;
    loop {
        let need = (ld_window.0 + m1).max(ld_window.1 + m2).max(gamma_window.0).max(gamma_window.1);
        if need > cap {
            return Err(NfError::TruncationCap { cap });
        }
        let phi = src.realize(need)?;
        let (gamma, _) = value_set(&phi, SetKind::Gamma, gamma_window)?;
        if gamma.conductor() != Some(c) {
            return Err(NfError::ConductorMismatch { expected: c, found: gamma.conductor() });
        }
        match value_set(&phi, SetKind::LambdaDelta, ld_window) {
            Ok((lambda_delta, _)) => {
                let l = lambda_delta.conductor().expect("value_set detects the conductor");
                let cutoff = c.0.max(c.1).max(l.0).max(l.1);
                let phi = src.realize(need.max(cutoff + margin))?;
                return Ok(Invariants { phi, intersection, semigroups, gamma, lambda_delta, cutoff });
            }
            Err(e) if recoverable(&e) => ld_window = (2 * ld_window.0, 2 * ld_window.1),
            Err(e) => return Err(e.into()),
        }
    }
}
