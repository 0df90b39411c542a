//! Sumsets of finite integer sets, rank normalization, and an exhaustive
//! search for sets whose sumset sizes follow prescribed orders.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, duplicate-free finite set of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct FiniteIntSet {
    elements: Vec<i64>,
}

impl FiniteIntSet {
    pub fn new<I: IntoIterator<Item = i64>>(items: I) -> Self {
        let mut elements: Vec<i64> = items.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        FiniteIntSet { elements }
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self, other: &FiniteIntSet) -> FiniteIntSet {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                out.push(a + b);
            }
        }
        FiniteIntSet::new(out)
    }

    /// The `h`-fold sumset `hB`.
    pub fn hfold(&self, h: usize) -> Result<FiniteIntSet> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if h == 0 {
            return Err(Error::ZeroFold);
        }
        let mut acc = self.clone();
        for _ in 1..h {
            acc = acc.sum(self);
        }
        Ok(acc)
    }

    /// `[|B|, |2B|, ..., |hmax B|]`.
    pub fn size_profile(&self, hmax: usize) -> Result<Vec<usize>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if hmax == 0 {
            return Err(Error::ZeroFold);
        }
        let mut out = Vec::with_capacity(hmax);
        let mut acc = self.clone();
        out.push(acc.len());
        for _ in 1..hmax {
            acc = acc.sum(self);
            out.push(acc.len());
        }
        Ok(out)
    }
}

impl From<Vec<i64>> for FiniteIntSet {
    fn from(v: Vec<i64>) -> Self {
        FiniteIntSet::new(v)
    }
}

impl From<FiniteIntSet> for Vec<i64> {
    fn from(s: FiniteIntSet) -> Self {
        s.elements
    }
}

/// Dense rank tuple: equal entries share a rank and ranks run `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct TauTuple(Vec<u64>);

impl TauTuple {
    /// Accepts `values` only if it is already a normalized tuple.
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() || tau(&values).0 != values {
            return Err(Error::InvalidTau(values));
        }
        Ok(TauTuple(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u64>> for TauTuple {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        TauTuple::new(v)
    }
}

impl From<TauTuple> for Vec<u64> {
    fn from(t: TauTuple) -> Self {
        t.0
    }
}

/// Replaces each entry by the rank of its value among the distinct values.
pub fn tau<T: Ord>(u: &[T]) -> TauTuple {
    let mut distinct: Vec<&T> = u.iter().collect();
    distinct.sort();
    distinct.dedup();
    TauTuple(
        u.iter()
            .map(|x| distinct.binary_search(&x).expect("value present") as u64 + 1)
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<FiniteIntSet>),
    Exhausted,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&[FiniteIntSet]> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::Exhausted => None,
        }
    }
}

/// Searches for `B_1, ..., B_n` inside `[0, ground]`, each of size at most
/// `maxsize`, with `tau(|hB_1|, ..., |hB_n|) = targets[h-1]` for every `h`.
///
/// Only sets containing 0 are tried; sumset sizes are translation
/// invariant. Candidates are ordered by size, then lexicographically, and
/// the lexicographically first tuple of candidates is returned.
pub fn search_race_sets(
    targets: &[TauTuple],
    ground: u32,
    maxsize: usize,
) -> Result<SearchOutcome> {
    let Some(first) = targets.first() else {
        return Err(Error::Dimension("no target tuples".into()));
    };
    let n = first.len();
    if n < 2 {
        return Err(Error::Dimension(format!("need at least 2 sets, got {n}")));
    }
    if let Some(t) = targets.iter().find(|t| t.len() != n) {
        return Err(Error::Dimension(format!(
            "target {:?} has length {}, expected {n}",
            t.values(),
            t.len()
        )));
    }
    let hmax = targets.len();

    let candidates = candidate_sets(ground, maxsize);
    let profiles: Vec<Vec<usize>> = candidates
        .par_iter()
        .map(|b| b.size_profile(hmax).expect("candidates are nonempty"))
        .collect();

    // One representative (the earliest candidate) per distinct profile.
    let mut seen: HashSet<&[usize]> = HashSet::new();
    let mut classes: Vec<usize> = Vec::new();
    for (idx, p) in profiles.iter().enumerate() {
        if seen.insert(p.as_slice()) {
            classes.push(idx);
        }
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    if backtrack(targets, &profiles, &classes, &mut chosen, n) {
        Ok(SearchOutcome::Found(
            chosen.into_iter().map(|i| candidates[i].clone()).collect(),
        ))
    } else {
        Ok(SearchOutcome::Exhausted)
    }
}

fn backtrack(
    targets: &[TauTuple],
    profiles: &[Vec<usize>],
    classes: &[usize],
    chosen: &mut Vec<usize>,
    n: usize,
) -> bool {
    let pos = chosen.len();
    if pos == n {
        return true;
    }
    for &cand in classes {
        let consistent = chosen.iter().enumerate().all(|(j, &prev)| {
            targets.iter().enumerate().all(|(h, t)| {
                let want = t.values()[j].cmp(&t.values()[pos]);
                profiles[prev][h].cmp(&profiles[cand][h]) == want
            })
        });
        if consistent {
            chosen.push(cand);
            if backtrack(targets, profiles, classes, chosen, n) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Subsets of `[0, ground]` containing 0 with at most `maxsize` elements,
/// by size and then lexicographically.
fn candidate_sets(ground: u32, maxsize: usize) -> Vec<FiniteIntSet> {
    let pool: Vec<i64> = (1..=i64::from(ground)).collect();
    let mut out = Vec::new();
    for size in 1..=maxsize.min(pool.len() + 1) {
        let k = size - 1;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut elems = Vec::with_capacity(size);
            elems.push(0);
            elems.extend(idx.iter().map(|&i| pool[i]));
            out.push(FiniteIntSet { elements: elems });
            // Next k-combination in lexicographic order.
            let Some(i) = (0..k).rev().find(|&i| idx[i] < pool.len() - k + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Checks that `sets` realize `targets`, returning the offending `h`.
pub fn check_race(sets: &[FiniteIntSet], targets: &[TauTuple]) -> Result<Option<usize>> {
    let profiles = sets
        .iter()
        .map(|b| b.size_profile(targets.len()))
        .collect::<Result<Vec<_>>>()?;
    for (h, t) in targets.iter().enumerate() {
        let sizes: Vec<usize> = profiles.iter().map(|p| p[h]).collect();
        if tau(&sizes) != *t {
            return Ok(Some(h + 1));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> FiniteIntSet {
        FiniteIntSet::new(v.iter().copied())
    }

    fn tt(v: &[u64]) -> TauTuple {
        TauTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hfold_examples() {
        assert_eq!(set(&[0, 1]).hfold(2).unwrap(), set(&[0, 1, 2]));
        assert_eq!(set(&[0, 1, 3]).hfold(2).unwrap(), set(&[0, 1, 2, 3, 4, 6]));
        assert_eq!(set(&[0]).hfold(7).unwrap(), set(&[0]));
        assert!(matches!(set(&[]).hfold(2), Err(Error::EmptySet)));
        assert!(matches!(set(&[1]).hfold(0), Err(Error::ZeroFold)));
    }

    #[test]
    fn tau_table() {
        assert_eq!(tau(&[1, 2, 3, 4, 5, 6]).values(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(tau(&[-2, 13, 11, 0, 22, 4]).values(), &[1, 5, 4, 2, 6, 3]);
        assert_eq!(tau(&[7, 3, 2, 9, 3, 5]).values(), &[4, 2, 1, 5, 2, 3]);
        assert_eq!(tau(&[9, 7, 8, 9, 7, 8]).values(), &[3, 1, 2, 3, 1, 2]);
    }

    #[test]
    fn tau_tuple_validation() {
        assert!(TauTuple::new(vec![1, 2]).is_ok());
        assert!(TauTuple::new(vec![1, 1]).is_ok());
        assert!(TauTuple::new(vec![1, 3]).is_err());
        assert!(TauTuple::new(vec![0, 1]).is_err());
        assert!(TauTuple::new(vec![]).is_err());
        assert!(serde_json::from_str::<TauTuple>("[2,2]").is_err());
    }

    #[test]
    fn candidates_ordered() {
        let c = candidate_sets(3, 3);
        let got: Vec<Vec<i64>> = c.into_iter().map(Vec::from).collect();
        assert_eq!(
            got,
            vec![
                vec![0],
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 2, 3],
            ]
        );
        assert_eq!(candidate_sets(0, 4), vec![set(&[0])]);
        // sum_{k<5} C(12, k)
        assert_eq!(candidate_sets(12, 5).len(), 1 + 12 + 66 + 220 + 495);
    }

    #[test]
    fn search_oscillation() {
        let targets = [tt(&[1, 2]), tt(&[2, 1])];
        let out = search_race_sets(&targets, 12, 5).unwrap();
        let w = out.witness().expect("witness");
        assert_eq!(w, &[set(&[0, 1, 3, 7]), set(&[0, 1, 2, 3, 4])]);
        assert_eq!(check_race(w, &targets).unwrap(), None);
    }

    #[test]
    fn spec_witness_checks() {
        let w = [set(&[0, 1, 5, 12]), set(&[0, 1, 2, 3, 4])];
        assert_eq!(w[0].hfold(2).unwrap().len(), 10);
        assert_eq!(w[1].hfold(2).unwrap().len(), 9);
        assert_eq!(check_race(&w, &[tt(&[1, 2]), tt(&[2, 1])]).unwrap(), None);
    }

    #[test]
    fn search_trivial() {
        let out = search_race_sets(&[tt(&[1, 1])], 12, 5).unwrap();
        assert_eq!(out, SearchOutcome::Found(vec![set(&[0]), set(&[0])]));
    }

    #[test]
    fn search_exhaustion() {
        let out = search_race_sets(&[tt(&[1, 2]), tt(&[2, 1])], 2, 2).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted);
    }

    #[test]
    fn search_rejects_bad_shapes() {
        assert!(search_race_sets(&[], 5, 3).is_err());
        assert!(search_race_sets(&[tt(&[1])], 5, 3).is_err());
        assert!(search_race_sets(&[tt(&[1, 2]), tt(&[1, 2, 3])], 5, 3).is_err());
    }

    #[test]
    fn search_three_sets() {
        let targets = [tt(&[1, 2, 3]), tt(&[3, 2, 1])];
        let out = search_race_sets(&targets, 12, 6).unwrap();
        if let Some(w) = out.witness() {
            assert_eq!(check_race(w, &targets).unwrap(), None);
        }
    }
}
