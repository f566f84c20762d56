//! All value pairs reachable by finite linear combinations of generators.
//!
//! Let `W_a` be the combinations whose first series has order `>= a`. Keep a
//! basis of `W_a` in echelon form on the second series (distinct orders,
//! plus a block of elements vanishing on the second series inside the
//! window). Passing from `W_a` to `W_{a+1}` removes exactly one second-order
//! value `r_a` (the largest among basis elements of first order `a`), and the
//! points on row `a` are the second orders `b <= r_a` still present in `W_a`.

use std::collections::{BTreeMap, BTreeSet};

use super::witness::{Witness, WitnessTable};
use super::{ValuePoint, VsError};
use crate::series::{Coefficient, Scalar, UniSeries};

/// A labelled element with its two value series (orders are the values).
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: Witness,
    pub values: [UniSeries; 2],
}

#[derive(Debug, Clone)]
struct Elem {
    combo: Vec<Coefficient>,
    img: [Vec<Coefficient>; 2],
}

impl Elem {
    fn ord(&self, i: usize) -> Option<usize> {
        self.img[i].iter().position(|c| !c.is_zero())
    }

    fn is_zero(&self) -> bool {
        self.img.iter().all(|v| v.iter().all(|c| c.is_zero()))
    }

    /// `self -= f * other`.
    fn sub_scaled(&mut self, other: &Elem, f: &Coefficient) {
        axpy(&mut self.combo, &other.combo, f);
        axpy(&mut self.img[0], &other.img[0], f);
        axpy(&mut self.img[1], &other.img[1], f);
    }

    fn sparse_combo(&self) -> Vec<(usize, Coefficient)> {
        self.combo.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect()
    }
}

fn axpy(dst: &mut [Coefficient], src: &[Coefficient], f: &Coefficient) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= s * f;
        }
    }
}

fn dense(s: &UniSeries, upto: usize) -> Vec<Coefficient> {
    (0..=upto).map(|e| s.coeff_or_zero(e)).collect()
}

/// Saturates the generators inside `window`, returning the points and a
/// witness for each.
pub fn saturate(gens: &[Generator], window: ValuePoint) -> Result<(BTreeSet<ValuePoint>, WitnessTable), VsError> {
    let n = gens.len();
    let bounds = [window.0, window.1];
    let short = |i: usize| gens.iter().map(|g| g.values[i].trunc()).filter(|&t| t < bounds[i]).min();
    let (a, b) = (short(0), short(1));
    if a.is_some() || b.is_some() {
        return Err(VsError::WindowExceedsTruncation {
            window,
            trunc: (a.unwrap_or(bounds[0]), b.unwrap_or(bounds[1])),
        });
    }

    // echelon basis on the second series
    let mut pivots: BTreeMap<usize, Elem> = BTreeMap::new();
    let mut vanishing: Vec<Elem> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let mut combo = vec![Coefficient::zero(); n];
        combo[j] = Coefficient::one();
        let mut v = Elem { combo, img: [dense(&g.values[0], bounds[0]), dense(&g.values[1], bounds[1])] };
        loop {
            match v.ord(1) {
                None => {
                    if !v.is_zero() {
                        vanishing.push(v);
                    }
                    break;
                }
                Some(o) => match pivots.get(&o) {
                    Some(p) => {
                        let f = &v.img[1][o] / &p.img[1][o];
                        v.sub_scaled(p, &f);
                    }
                    None => {
                        pivots.insert(o, v);
                        break;
                    }
                },
            }
        }
    }

    let mut table = WitnessTable::new(gens.iter().map(|g| g.label.clone()).collect());
    let mut points = BTreeSet::new();
    for a in 0..=bounds[0] {
        // the element leaving W_a: vanishing ones first, else the largest pivot
        let leaving_vanishing = vanishing.iter().position(|e| !e.img[0][a].is_zero());
        let leaving_pivot = pivots.iter().rev().find(|(_, e)| !e.img[0][a].is_zero()).map(|(&o, _)| o);
        let p = match (leaving_vanishing, leaving_pivot) {
            (Some(k), _) => vanishing.swap_remove(k),
            (None, Some(o)) => pivots.remove(&o).expect("present"),
            (None, None) => continue,
        };
        let r = p.ord(1);
        for (&b, e) in pivots.range(..=r.unwrap_or(usize::MAX)) {
            let combo = if !e.img[0][a].is_zero() {
                e.sparse_combo()
            } else {
                let mut sum = e.clone();
                sum.sub_scaled(&p, &-Coefficient::one());
                sum.sparse_combo()
            };
            points.insert((a, b));
            table.insert((a, b), combo);
        }
        if let Some(b) = r {
            points.insert((a, b));
            table.insert((a, b), p.sparse_combo());
        }
        let lead = p.img[0][a].clone();
        for e in pivots.values_mut().chain(vanishing.iter_mut()) {
            if !e.img[0][a].is_zero() {
                let f = &e.img[0][a] / &lead;
                e.sub_scaled(&p, &f);
            }
        }
    }
    Ok((points, table))
}
