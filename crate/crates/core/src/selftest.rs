//! Randomized property suites over every module, deterministic for a seed.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigerm::{random_group_element, random_unit_homothety, small_rational, Bigerm, GroupClass};
use crate::equivalence::{decide_equivalence, solvable_over_c, solve_over_q, torus::monomial, MultiplicativeConstraint};
use crate::normalform::{invariants, normal_form, reduce_a_delta, NfError, Source, DEFAULT_CAP};
use crate::random::random_bigerm;
use crate::series::{Coefficient, UniSeries};
use crate::table::{run_table, TableConfig};
use crate::valuesets::{
    differential_generators, function_generators, intersection_multiplicity, max_window, saturate, value_set,
    Differential, Generator, SetKind, ValuePoint, ValueSet, VsError, Witness,
};

/// Largest multiplicity of the random germs.
pub const MAX_M: usize = 3;

/// Degree bound of the random germs' polynomial components.
const RAW_TRUNC: usize = 16;

const KINDS: [SetKind; 3] = [SetKind::Gamma, SetKind::Lambda, SetKind::LambdaDelta];

/// Outcome of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(e) = outcome {
            self.failures.push(e);
        }
    }
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    pub quick: bool,
    pub cap: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 7, quick: false, cap: DEFAULT_CAP }
    }
}

/// The random germ number `seed`, realized at truncation `trunc`.
pub fn random_germ(seed: u64, trunc: usize) -> Result<Bigerm, NfError> {
    Source::Jet(random_bigerm(seed, MAX_M, RAW_TRUNC)).realize(trunc)
}

fn seeds(base: u64, n: usize) -> impl Iterator<Item = u64> {
    (0..n as u64).map(move |i| base.wrapping_mul(1_000_003).wrapping_add(i))
}

fn generators(phi: &Bigerm, kind: SetKind, w: ValuePoint) -> Vec<Generator> {
    match kind {
        SetKind::Gamma => function_generators(phi, w),
        _ => differential_generators(phi, kind, w),
    }
}

/// Points of a value set inside `w`, whether or not a conductor shows up.
pub fn points_in(phi: &Bigerm, kind: SetKind, w: ValuePoint) -> Result<BTreeSet<ValuePoint>, VsError> {
    match value_set(phi, kind, w) {
        Ok((set, _)) => Ok(set.points().clone()),
        Err(VsError::ConductorNotDetected { partial }) => Ok(partial.points().clone()),
        Err(e) => Err(e),
    }
}

/// Orders of `rounds` random rational combinations of the generators that
/// land inside `w`.
pub fn random_combination_values(gens: &[Generator], w: ValuePoint, rounds: usize, seed: u64) -> BTreeSet<ValuePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeSet::new();
    if gens.is_empty() {
        return found;
    }
    for _ in 0..rounds {
        let mut acc: Option<[UniSeries; 2]> = None;
        for _ in 0..rng.gen_range(1..=4.min(gens.len())) {
            let g = &gens[rng.gen_range(0..gens.len())];
            let c = small_rational(&mut rng);
            let term = [g.values[0].scale(&c), g.values[1].scale(&c)];
            acc = Some(match acc {
                None => term,
                Some([a, b]) => [&a + &term[0], &b + &term[1]],
            });
        }
        let [a, b] = acc.expect("at least one generator");
        if let (Some(x), Some(y)) = (a.ord(), b.ord()) {
            if x <= w.0 && y <= w.1 {
                found.insert((x, y));
            }
        }
    }
    found
}

/// Saturated `Γ`, `Λ`, `Λ[δ]` contain every value of random combinations,
/// and every witness evaluates to its key.
pub fn oracle_case(seed: u64, rounds: usize) -> Result<(), String> {
    let phi = random_germ(seed, 26).map_err(|e| format!("germ {seed}: {e}"))?;
    for kind in KINDS {
        let mw = max_window(&phi, kind);
        let w = (mw.0.min(20), mw.1.min(20));
        let gens = generators(&phi, kind, w);
        let (points, table) = saturate(&gens, w).map_err(|e| format!("germ {seed} {kind:?}: {e}"))?;
        let brute = random_combination_values(&gens, w, rounds, seed);
        if let Some(p) = brute.difference(&points).next() {
            return Err(format!("germ {seed} {kind:?}: combination value {p:?} missing from {phi}"));
        }
        for p in table.keys() {
            let witness = table.get(p).ok_or_else(|| format!("germ {seed}: no witness at {p:?}"))?;
            if witness.value(&phi, kind) != Ok(p) {
                return Err(format!("germ {seed} {kind:?}: witness {} does not reach {p:?}", witness.to_literal()));
            }
        }
    }
    Ok(())
}

/// `Γ`, `Λ`, `Λ[δ]` agree inside a common window before and after
/// `elements` random `A[δ]` elements composed with rational homotheties.
pub fn invariance_case(seed: u64, elements: usize) -> Result<(), String> {
    let trunc = 40;
    let phi = random_germ(seed, trunc).map_err(|e| format!("germ {seed}: {e}"))?;
    let class = GroupClass::for_delta(phi.delta());
    for e in seeds(seed ^ 0xa5a5, elements) {
        let g = random_group_element(e, class, 4, trunc);
        let h = random_unit_homothety(e, phi.multiplicity(), phi.delta(), trunc);
        let psi = g
            .apply(&phi)
            .and_then(|p| h.apply(&p))
            .and_then(|p| p.puiseux_normalize())
            .map_err(|err| format!("germ {seed} element {e}: {err}"))?;
        for kind in KINDS {
            let (a, b) = (max_window(&phi, kind), max_window(&psi, kind));
            let w = (a.0.min(b.0).min(24), a.1.min(b.1).min(24));
            let before = points_in(&phi, kind, w).map_err(|err| format!("germ {seed}: {err}"))?;
            let after = points_in(&psi, kind, w).map_err(|err| format!("germ {seed} element {e}: {err}"))?;
            if before != after {
                let diff: Vec<_> = before.symmetric_difference(&after).collect();
                return Err(format!("germ {seed} element {e} {kind:?}: sets differ at {diff:?}"));
            }
        }
    }
    Ok(())
}

/// `reduce_a_delta` gives coefficient-identical output on random `A[δ]`
/// translates.
pub fn uniqueness_case(seed: u64, translates: usize, cap: usize) -> Result<(), String> {
    let inv = invariants(&Source::Jet(random_bigerm(seed, MAX_M, RAW_TRUNC)), cap).map_err(|e| format!("germ {seed}: {e}"))?;
    let (m1, m2) = inv.multiplicity();
    let cutoff = inv.cutoff;
    let trunc = cutoff + m1 + m2 + 4;
    let phi = random_germ(seed, trunc).map_err(|e| format!("germ {seed}: {e}"))?;
    let jet = |r: &Bigerm| [1, 2].map(|i| r.free_component(i).cut_above(cutoff).truncated(cutoff));
    let reference = reduce_a_delta(&phi, cutoff).map_err(|e| format!("germ {seed}: {e}"))?;
    let class = GroupClass::for_delta(phi.delta());
    for e in seeds(seed ^ 0x5a5a, translates) {
        let psi = random_group_element(e, class, 4, trunc)
            .apply(&phi)
            .and_then(|p| p.puiseux_normalize())
            .map_err(|err| format!("germ {seed} element {e}: {err}"))?;
        let r = reduce_a_delta(&psi, cutoff).map_err(|err| format!("germ {seed} element {e}: {err}"))?;
        if jet(&r.reduced) != jet(&reference.reduced) {
            return Err(format!("germ {seed} element {e}: {} reduces to {} instead of {}", psi, r.reduced, reference.reduced));
        }
    }
    Ok(())
}

fn check_set(seed: u64, kind: SetKind, set: &ValueSet) -> Result<(), String> {
    if let Err((a, b)) = set.check_property_a() {
        return Err(format!("germ {seed} {kind:?}: property A fails for {a:?}, {b:?}"));
    }
    if let Err((a, b)) = set.check_property_b() {
        return Err(format!("germ {seed} {kind:?}: property B fails for {a:?}, {b:?}"));
    }
    Ok(())
}

/// Properties A and B, `Γ∖{0} ⊆ Λ` through exact differentials, conductor
/// stability under window doubling and symmetry of the intersection
/// multiplicity.
pub fn structure_case(seed: u64, cap: usize) -> Result<(), String> {
    let err = |e: &dyn std::fmt::Display| format!("germ {seed}: {e}");
    let inv = invariants(&Source::Jet(random_bigerm(seed, MAX_M, RAW_TRUNC)), cap).map_err(|e| err(&e))?;
    let (m1, m2) = inv.multiplicity();
    let windows = [inv.gamma.window(), inv.gamma.window(), inv.lambda_delta.window()];
    let need = windows.iter().map(|w| 2 * w.0.max(w.1)).max().unwrap_or(0) + m1 + m2;
    let phi = random_germ(seed, need).map_err(|e| err(&e))?;
    let mut gamma = None;
    let mut lambda = None;
    for (kind, w) in KINDS.into_iter().zip(windows) {
        let (set, table) = match value_set(&phi, kind, w) {
            Ok(r) => r,
            Err(VsError::ConductorNotDetected { .. }) if kind == SetKind::Lambda => {
                value_set(&phi, kind, (2 * w.0, 2 * w.1)).map_err(|e| err(&e))?
            }
            Err(e) => return Err(err(&e)),
        };
        check_set(seed, kind, &set)?;
        let w = set.window();
        let (doubled, _) = value_set(&phi, kind, (2 * w.0, 2 * w.1)).map_err(|e| err(&e))?;
        check_set(seed, kind, &doubled)?;
        if doubled.conductor() != set.conductor() || doubled.restricted(w) != *set.points() {
            return Err(format!("germ {seed} {kind:?}: conductor {:?} becomes {:?} on the doubled window", set.conductor(), doubled.conductor()));
        }
        match kind {
            SetKind::Gamma => gamma = Some((set, table)),
            SetKind::Lambda => lambda = Some(set),
            SetKind::LambdaDelta => {}
        }
    }
    let (gamma, table) = gamma.expect("computed above");
    let lambda = lambda.expect("computed above");
    for p in gamma.points().iter().copied().filter(|&p| p != (0, 0) && p.0 <= lambda.window().0 && p.1 <= lambda.window().1) {
        let Some(Witness::Function(eta)) = table.get(p) else {
            return Err(format!("germ {seed}: no function witness at {p:?}"));
        };
        let omega = Witness::Differential(Differential::exact(&eta));
        if omega.value(&phi, SetKind::Lambda) != Ok(p) || !lambda.contains(p) {
            return Err(format!("germ {seed}: d({}) does not give {p:?} in the differential values", eta));
        }
    }
    let swapped = phi.swap_branches().map_err(|e| err(&e))?;
    let (i, j) = (intersection_multiplicity(&phi), intersection_multiplicity(&swapped));
    match (i, j) {
        (Ok(i), Ok(j)) if i == j && i == inv.intersection => Ok(()),
        (i, j) => Err(format!("germ {seed}: intersection {i:?} versus {j:?} after swapping")),
    }
}

/// Which jet of the random germ is compared with the jet of order
/// `c + m1 + m2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOrder {
    /// Terms of order at most `c - 1`.
    BelowConductor,
    /// Terms of order at most `c`.
    Conductor,
}

/// Normal forms of two jets of the same germ coincide, with `c` the largest
/// conductor coordinate.
pub fn determinacy_case(seed: u64, order: JetOrder, cap: usize) -> Result<(), String> {
    let inv = invariants(&Source::Jet(random_bigerm(seed, MAX_M, RAW_TRUNC)), cap).map_err(|e| format!("germ {seed}: {e}"))?;
    let (m1, m2) = inv.multiplicity();
    let c = inv.conductor();
    let c = c.0.max(c.1);
    let keep = match order {
        JetOrder::BelowConductor => c - 1,
        JetOrder::Conductor => c,
    };
    let nf_of_jet = |last: usize| -> Result<serde_json::Value, String> {
        let jet = inv.phi.exact_jet(last + 1, last + 1 + m1 + m2).map_err(|e| format!("germ {seed}: {e}"))?;
        normal_form(&Source::Jet(jet), cap).map(|nf| nf.to_json()).map_err(|e| format!("germ {seed}, jet of order {last}: {e}"))
    };
    let long = nf_of_jet(c + m1 + m2)?;
    let short = nf_of_jet(keep)?;
    if long == short {
        Ok(())
    } else {
        Err(format!("germ {seed} ({}): jet of order {keep} gives case {} instead of {}", inv.phi, short["case"], long["case"]))
    }
}

/// Random `A[δ]` and general translates are recognized as equivalent, and
/// the verdict on unrelated germs does not depend on the argument order.
pub fn equivalence_case(seed: u64, cap: usize) -> Result<(), String> {
    let trunc = 40;
    let phi = random_germ(seed, trunc).map_err(|e| format!("germ {seed}: {e}"))?;
    for class in [GroupClass::for_delta(phi.delta()), GroupClass::General] {
        let psi = random_group_element(seed ^ 0x77, class, 4, trunc).apply(&phi).map_err(|e| format!("germ {seed}: {e}"))?;
        let v = decide_equivalence(&Source::Jet(phi.clone()), &Source::Jet(psi), cap).map_err(|e| format!("germ {seed}: {e}"))?;
        if !v.equivalent {
            return Err(format!("germ {seed}: {class:?} translate not equivalent ({})", v.reason));
        }
    }
    let other = random_germ(seed.wrapping_add(1 << 32), trunc).map_err(|e| format!("germ {seed}: {e}"))?;
    let (a, b) = (Source::Jet(phi), Source::Jet(other));
    let forward = decide_equivalence(&a, &b, cap).map_err(|e| format!("germ {seed}: {e}"))?;
    let backward = decide_equivalence(&b, &a, cap).map_err(|e| format!("germ {seed}: {e}"))?;
    if forward.equivalent != backward.equivalent {
        return Err(format!("germ {seed}: verdict depends on the argument order"));
    }
    Ok(())
}

/// Multiplicative systems with a known rational solution are solved over
/// `Q`, solutions satisfy the system, and contradictory systems are
/// rejected over `C`.
pub fn torus_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=3);
    let point: Vec<Coefficient> = (0..n).map(|_| small_rational(&mut rng)).collect();
    let cs: Vec<MultiplicativeConstraint> = (0..rows)
        .map(|_| {
            let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let target = monomial(&point, &e);
            MultiplicativeConstraint::new(e, target)
        })
        .collect();
    if !solvable_over_c(&cs, n) {
        return Err(format!("system {seed}: solvable at {point:?} but rejected over C"));
    }
    match solve_over_q(&cs, n) {
        Some(x) if cs.iter().all(|c| c.holds_at(&x)) => {}
        Some(x) => return Err(format!("system {seed}: {x:?} violates the system")),
        None => return Err(format!("system {seed}: rational solution {point:?} not found")),
    }
    let mut bad = cs.clone();
    let mut twisted = cs[0].clone();
    twisted.target = &twisted.target * Coefficient::from(2);
    bad.push(twisted);
    if solvable_over_c(&bad, n) || solve_over_q(&bad, n).is_some() {
        return Err(format!("system {seed}: contradictory rows accepted"));
    }
    Ok(())
}

fn run_suite(name: &str, cases: Vec<u64>, check: impl Fn(u64) -> Result<(), String> + Sync + Send) -> SuiteReport {
    let outcomes: Vec<_> = cases.into_par_iter().map(check).collect();
    let mut report = SuiteReport::new(name);
    outcomes.into_iter().for_each(|o| report.record(o));
    report
}

pub fn oracle_suite(seed: u64, germs: usize, rounds: usize) -> SuiteReport {
    run_suite("value-set oracle", seeds(seed, germs).collect(), |s| oracle_case(s, rounds))
}

pub fn invariance_suite(seed: u64, germs: usize, elements: usize) -> SuiteReport {
    run_suite("invariance", seeds(seed, germs).collect(), |s| invariance_case(s, elements))
}

pub fn uniqueness_suite(seed: u64, germs: usize, translates: usize, cap: usize) -> SuiteReport {
    run_suite("normal-form uniqueness", seeds(seed, germs).collect(), |s| uniqueness_case(s, translates, cap))
}

pub fn structure_suite(seed: u64, germs: usize, cap: usize) -> SuiteReport {
    run_suite("structure", seeds(seed, germs).collect(), |s| structure_case(s, cap))
}

pub fn determinacy_suite(seed: u64, germs: usize, order: JetOrder, cap: usize) -> SuiteReport {
    run_suite("determinacy", seeds(seed, germs).collect(), |s| determinacy_case(s, order, cap))
}

pub fn equivalence_suite(seed: u64, germs: usize, cap: usize) -> SuiteReport {
    run_suite("equivalence", seeds(seed, germs).collect(), |s| equivalence_case(s, cap))
}

pub fn torus_suite(seed: u64, systems: usize) -> SuiteReport {
    run_suite("torus", seeds(seed, systems).collect(), torus_case)
}

/// With `exact`, every row must show exactly its expected families;
/// otherwise only unexpected families and sampling failures count.
pub fn table_suite(seed: u64, samples: usize, exact: bool, cap: usize) -> SuiteReport {
    let cfg = TableConfig { seed, samples, cap, ..TableConfig::default() };
    let mut report = SuiteReport::new("table");
    for row in run_table(&cfg) {
        report.cases += 1;
        let ok = if exact { row.matches() } else { row.failures.is_empty() && row.observed.keys().all(|f| row.expected.contains(f)) };
        if !ok {
            report.failures.push(format!("row {:?}: observed {:?}, expected {:?}, {:?}", row.pair, row.observed.keys().collect::<Vec<_>>(), row.expected, row.failures));
        }
    }
    report
}

/// Runs every suite. Determinacy compares the jet of order `c` with the
/// jet of order `c + m1 + m2`.
pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteReport> {
    let n = |full: usize, quick: usize| if cfg.quick { quick } else { full };
    let s = cfg.seed;
    vec![
        torus_suite(s, n(200, 40)),
        oracle_suite(s, n(20, 5), n(500, 200)),
        structure_suite(s, n(20, 5), cfg.cap),
        invariance_suite(s, n(20, 4), n(20, 5)),
        uniqueness_suite(s, n(20, 4), n(5, 2), cfg.cap),
        determinacy_suite(s, n(50, 10), JetOrder::Conductor, cfg.cap),
        equivalence_suite(s, n(20, 4), cfg.cap),
        table_suite(s, n(25, 5), !cfg.quick, cfg.cap),
    ]
}
