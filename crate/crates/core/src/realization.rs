//! Transport of integer sets onto the real line.
//!
//! Each `b` in `B_i` becomes the interval `[b, b + eta]`. With
//! `eta = 1/(H+1)` every fold `h <= H` keeps the blocks `[b, b + h eta]`,
//! `b` in `hB_i`, pairwise disjoint, so `mu(hA_i) = |hB_i| * h * eta` and
//! measures order exactly like cardinalities.

use serde::{Deserialize, Serialize};

use crate::discrete::{tau, FiniteIntSet, TauTuple};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationPlan {
    pub eta: Rational,
    pub sets: Vec<FiniteIntSet>,
    #[serde(rename = "H")]
    pub h_max: usize,
}

/// `A = ⋃_{b in B} [b, b + eta]`.
pub fn thicken(b: &FiniteIntSet, eta: &Rational) -> IntervalUnion {
    IntervalUnion::canonicalize(b.elements().iter().map(|&v| {
        let lo = Rational::from_integer(v);
        let hi = &lo + eta;
        Interval::new(lo, hi).expect("eta is nonnegative")
    }))
}

pub fn realize(
    sets: &[FiniteIntSet],
    h_max: usize,
) -> Result<(Vec<IntervalUnion>, RealizationPlan)> {
    if h_max == 0 {
        return Err(Error::ZeroFold);
    }
    if sets.iter().any(FiniteIntSet::is_empty) {
        return Err(Error::EmptySet);
    }
    let eta = Rational::new(1, h_max as i64 + 1);
    let out = sets.iter().map(|b| thicken(b, &eta)).collect();
    Ok((
        out,
        RealizationPlan {
            eta,
            sets: sets.to_vec(),
            h_max,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRaceEntry {
    pub h: usize,
    pub measures: Vec<Rational>,
    pub sizes: Vec<usize>,
    pub tau_measures: TauTuple,
    pub tau_sizes: TauTuple,
    /// `mu(hA_i) == |hB_i| * h * eta` for every `i`.
    pub product_law: bool,
    /// Every `hA_i` has exactly `|hB_i|` parts.
    pub blocks_disjoint: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRaceReport {
    pub entries: Vec<TauRaceEntry>,
}

impl TauRaceReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// For each `h <= H` compares `tau` of the exact measures of `hA_i` with
/// `tau` of `|hB_i|`.
pub fn verify_tau_race(sets: &[IntervalUnion], plan: &RealizationPlan) -> Result<TauRaceReport> {
    if sets.len() != plan.sets.len() {
        return Err(Error::Dimension(format!(
            "{} interval sets for {} integer sets",
            sets.len(),
            plan.sets.len()
        )));
    }
    let folds = sets
        .iter()
        .map(|a| a.hfold_profile(plan.h_max))
        .collect::<Result<Vec<_>>>()?;
    let int_folds = plan
        .sets
        .iter()
        .map(|b| {
            let mut acc = vec![b.clone()];
            for _ in 1..plan.h_max {
                let next = acc.last().expect("nonempty").sum(b);
                acc.push(next);
            }
            acc
        })
        .collect::<Vec<_>>();

    let mut entries = Vec::with_capacity(plan.h_max);
    for h in 1..=plan.h_max {
        let block = Rational::from_integer(h as i64) * &plan.eta;
        let measures: Vec<Rational> = folds.iter().map(|f| f[h - 1].measure()).collect();
        let sizes: Vec<usize> = int_folds.iter().map(|f| f[h - 1].len()).collect();
        let product_law = measures
            .iter()
            .zip(&sizes)
            .all(|(mu, &s)| *mu == Rational::from_integer(s as i64) * &block);
        let blocks_disjoint = folds.iter().zip(&sizes).all(|(f, &s)| f[h - 1].len() == s);
        let tau_measures = tau(&measures);
        let tau_sizes = tau(&sizes);
        let pass = tau_measures == tau_sizes && product_law && blocks_disjoint;
        entries.push(TauRaceEntry {
            h,
            measures,
            sizes,
            tau_measures,
            tau_sizes,
            product_law,
            blocks_disjoint,
            pass,
        });
    }
    Ok(TauRaceReport { entries })
}
