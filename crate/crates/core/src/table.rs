//! Regeneration of the classification table for transversal bigerms whose
//! branches have semigroups `N`, `<2, j>` (j odd) or `<3, 3 + α>`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigerm::{small_rational, Bigerm, Branch};
use crate::normalform::{normal_form, power, NfError, NormalForm, Source};
use crate::series::{Coefficient, Param, Scalar, UniSeries};

/// Multiplicity pairs of the table, in display order.
pub const DEFAULT_PAIRS: [(usize, usize); 6] = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// Extra exponents sampled above the leading Puiseux term.
const SPAN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableConfig {
    pub pairs: Vec<(usize, usize)>,
    pub alphas: Vec<usize>,
    pub max_j: usize,
    pub samples: usize,
    pub seed: u64,
    pub cap: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            pairs: DEFAULT_PAIRS.to_vec(),
            alphas: vec![1, 2],
            max_j: 9,
            samples: 25,
            seed: 2024,
            cap: crate::normalform::DEFAULT_CAP,
        }
    }
}

/// Equisingularity data of one branch: multiplicity and first Puiseux
/// exponent (`None` for a smooth branch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchShape {
    pub m: usize,
    pub j: Option<usize>,
}

/// One choice of discrete parameters inside a row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowInstance {
    pub pair: (usize, usize),
    pub shapes: [BranchShape; 2],
}

fn smooth() -> BranchShape {
    BranchShape { m: 1, j: None }
}

fn cusp(m: usize, j: usize) -> BranchShape {
    BranchShape { m, j: Some(j) }
}

fn odd_exponents(max_j: usize) -> Vec<usize> {
    (3..=max_j).step_by(2).collect()
}

/// Instances of a row; the branch of higher multiplicity comes first.
pub fn row_instances(pair: (usize, usize), cfg: &TableConfig) -> Vec<RowInstance> {
    let inst = |a: BranchShape, b: BranchShape| RowInstance { pair, shapes: [a, b] };
    let js = odd_exponents(cfg.max_j);
    let alphas = &cfg.alphas;
    match pair {
        (1, 1) => vec![inst(smooth(), smooth())],
        (1, 2) => js.iter().map(|&j| inst(cusp(2, j), smooth())).collect(),
        (1, 3) => alphas.iter().map(|&a| inst(cusp(3, 3 + a), smooth())).collect(),
        (2, 2) => js.iter().flat_map(|&a| js.iter().map(move |&b| inst(cusp(2, a), cusp(2, b)))).collect(),
        (2, 3) => alphas.iter().flat_map(|&a| js.iter().map(move |&j| inst(cusp(3, 3 + a), cusp(2, j)))).collect(),
        (3, 3) => alphas
            .iter()
            .flat_map(|&a| alphas.iter().map(move |&b| inst(cusp(3, 3 + a), cusp(3, 3 + b))))
            .collect(),
        _ => Vec::new(),
    }
}

/// Families of the classification table for one instance, in the notation of
/// [`NormalForm::family`].
pub fn expected_families(inst: &RowInstance) -> Vec<String> {
    let [s1, s2] = inst.shapes;
    let b1 = |extra: bool| match s1.j {
        None => "(t1, 0)".to_string(),
        Some(j) if extra => format!("(t1^{}, t1^{j} + t1^{})", s1.m, 2 * j - s1.m),
        Some(j) => format!("(t1^{}, t1^{j})", s1.m),
    };
    let b2 = |coeffs: &[&str], extra: bool| match s2.j {
        None => "(0, t2)".to_string(),
        Some(j) => {
            let name = |i: usize| coeffs.get(i).map_or(String::new(), |c| format!("{c}*"));
            let mut free = format!("{}t2^{j}", name(0));
            if extra {
                free.push_str(&format!(" + {}t2^{}", name(1), 2 * j - s2.m));
            }
            format!("({free}, {})", power("t2", s2.m))
        }
    };
    let plain = format!("{} {}", b1(false), b2(&[], false));
    match (s1.m, s2.m) {
        (1, 1) | (2, 1) | (2, 2) => vec![plain],
        (3, 1) => vec![plain, format!("{} {}", b1(true), b2(&[], false))],
        (3, 2) => vec![plain, format!("{} {}", b1(true), b2(&["a"], false))],
        (3, 3) => vec![
            plain,
            format!("{} {}", b1(true), b2(&["a"], false)),
            format!("{} {}", b1(true), b2(&["a", "b"], true)),
        ],
        _ => Vec::new(),
    }
}

fn sample_component(shape: BranchShape, rng: &mut ChaCha8Rng, p: Param, trunc: usize) -> UniSeries {
    let (lead, top) = match shape.j {
        Some(j) => (Some(j), j + SPAN),
        None => (None, SPAN),
    };
    let mut terms: Vec<(usize, Coefficient)> = Vec::new();
    if let Some(j) = lead {
        terms.push((j, small_rational(rng)));
    }
    for e in lead.map_or(2, |j| j + 1)..=top {
        if rng.gen_bool(2.0 / 3.0) {
            terms.push((e, small_rational(rng)));
        }
    }
    UniSeries::from_terms(p, trunc, terms)
}

/// A random transversal bigerm with the given branch shapes.
pub fn sample_bigerm(inst: &RowInstance, seed: u64) -> Bigerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trunc = inst.shapes.iter().map(|s| s.j.unwrap_or(1)).max().unwrap_or(1) + SPAN;
    let [s1, s2] = inst.shapes;
    let pure = |p: Param, m: usize| UniSeries::monomial(p, Coefficient::one(), m, trunc);
    let y1 = sample_component(s1, &mut rng, Param::T1, trunc);
    let x2 = sample_component(s2, &mut rng, Param::T2, trunc);
    let b1 = Branch::new(pure(Param::T1, s1.m), y1).expect("primitive by construction");
    let b2 = Branch::new(x2, pure(Param::T2, s2.m)).expect("primitive by construction");
    Bigerm::prepare(b1, b2).expect("transversal by construction")
}

/// Family of a normal form, with the branches ordered so that the first one
/// carries at least as many surviving terms when the multiplicities agree.
pub fn canonical_family(nf: &NormalForm, cap: usize) -> Result<String, NfError> {
    let count = |n: &NormalForm, b: usize| n.terms.iter().filter(|t| t.branch == b).count();
    let (m1, m2) = nf.invariants.multiplicity();
    if m1 == m2 && count(nf, 2) > count(nf, 1) {
        let swapped = nf.invariants.phi.swap_branches()?;
        return Ok(normal_form(&Source::Jet(swapped), cap)?.family());
    }
    Ok(nf.family())
}

/// Observed and expected families of one row.
#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub pair: (usize, usize),
    pub expected: BTreeSet<String>,
    pub observed: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

impl RowReport {
    pub fn matches(&self) -> bool {
        self.failures.is_empty() && self.observed.keys().cloned().collect::<BTreeSet<_>>() == self.expected
    }
}

fn job_seed(seed: u64, pair: (usize, usize), instance: usize, sample: usize) -> u64 {
    let mut h = seed ^ 0x5bd1_e995;
    for v in [pair.0, pair.1, instance, sample] {
        h = h.wrapping_mul(0x1000_0000_01b3).wrapping_add(v as u64 + 1);
    }
    h
}

/// Samples every instance of every configured row and aggregates the
/// observed normal-form families.
pub fn run_table(cfg: &TableConfig) -> Vec<RowReport> {
    cfg.pairs
        .iter()
        .map(|&pair| {
            let instances = row_instances(pair, cfg);
            let expected: BTreeSet<String> = instances.iter().flat_map(expected_families).collect();
            let jobs: Vec<(usize, usize)> =
                (0..instances.len()).flat_map(|i| (0..cfg.samples).map(move |s| (i, s))).collect();
            let results: Vec<Result<String, String>> = jobs
                .par_iter()
                .map(|&(i, s)| {
                    let phi = sample_bigerm(&instances[i], job_seed(cfg.seed, pair, i, s));
                    normal_form(&Source::Jet(phi.clone()), cfg.cap)
                        .and_then(|nf| canonical_family(&nf, cfg.cap))
                        .map_err(|e| format!("{phi}: {e}"))
                })
                .collect();
            let mut observed = BTreeMap::new();
            let mut failures = Vec::new();
            for r in results {
                match r {
                    Ok(f) => *observed.entry(f).or_insert(0) += 1,
                    Err(e) => failures.push(e),
                }
            }
            RowReport { pair, expected, observed, failures }
        })
        .collect()
}

/// Markdown rendering in the layout of the classification table.
pub fn to_markdown(reports: &[RowReport]) -> String {
    let mut out = String::from("| (m1,m2) | Normal Form | samples |\n|---|---|---|\n");
    for r in reports {
        let mut first = true;
        for (family, n) in &r.observed {
            let label = if first { format!("({},{})", r.pair.0, r.pair.1) } else { String::new() };
            let mark = if r.expected.contains(family) { "" } else { " (unexpected)" };
            out.push_str(&format!("| {label} | `{family}`{mark} | {n} |\n"));
            first = false;
        }
        for missing in r.expected.iter().filter(|f| !r.observed.contains_key(*f)) {
            out.push_str(&format!("| | `{missing}` (not observed) | 0 |\n"));
        }
        for f in &r.failures {
            out.push_str(&format!("| | failure: {f} | |\n"));
        }
    }
    out
}
