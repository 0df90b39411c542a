//! Finite unions of closed rational intervals.
//!
//! [`IntervalUnion`] is kept in canonical form: parts sorted by lower end and
//! strictly separated, so two unions are the same point set exactly when
//! their part vectors are equal. Every set the crate builds (the two-block
//! set, carved sets, assembled sets and all of their sumsets) lives here.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A closed interval `[lo, hi]` with `lo <= hi`. `lo == hi` is a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Inner and outer grid approximations of a measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBounds {
    pub inner: Rational,
    pub outer: Rational,
}

/// Canonical finite union of pairwise separated closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(IntervalUnion {
            parts: vec![Interval::new(lo, hi)?],
        })
    }

    /// Sorts and merges an arbitrary collection of intervals. Touching
    /// intervals (`[a, b]` and `[b, c]`) merge.
    pub fn canonicalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut v: Vec<Interval> = raw.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        let mut parts: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match parts.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => parts.push(iv),
            }
        }
        IntervalUnion { parts }
    }

    /// Validating constructor from raw endpoint pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(pairs: I) -> Result<Self> {
        let raw = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonicalize(raw))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.parts.first().map(|p| &p.lo)
    }

    pub fn max(&self) -> Option<&Rational> {
        self.parts.last().map(|p| &p.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // First part with lo > x; the candidate is the one before it.
        let idx = self.parts.partition_point(|p| &p.lo <= x);
        idx > 0 && &self.parts[idx - 1].hi >= x
    }

    /// `true` when every point of `self` lies in `[lo, hi]`.
    pub fn is_within(&self, lo: &Rational, hi: &Rational) -> bool {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => a >= lo && b <= hi,
            _ => true,
        }
    }

    /// Lebesgue measure: the sum of part lengths.
    pub fn measure(&self) -> Rational {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::canonicalize(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    /// `{a + b : a in self, b in other}`.
    pub fn minkowski_sum(&self, other: &IntervalUnion) -> IntervalUnion {
        if self.is_empty() || other.is_empty() {
            return IntervalUnion::empty();
        }
        let scaled = ScaledPair::new(self, other);
        match (scaled.small_a(), scaled.small_b()) {
            (Some(a), Some(b)) => scaled.rebuild(sum_merge(&a, &b)),
            _ => scaled.rebuild(sum_merge(&scaled.a, &scaled.b)),
        }
    }

    /// The `h`-fold sumset `A + ... + A`.
    pub fn hfold(&self, h: usize) -> Result<IntervalUnion> {
        if h == 0 {
            return Err(Error::ZeroFold);
        }
        let mut acc = self.clone();
        for _ in 1..h {
            acc = acc.minkowski_sum(self);
        }
        Ok(acc)
    }

    /// `[A, 2A, ..., hmax A]`, sharing work between consecutive folds.
    pub fn hfold_profile(&self, hmax: usize) -> Result<Vec<IntervalUnion>> {
        if hmax == 0 {
            return Err(Error::ZeroFold);
        }
        let mut out = Vec::with_capacity(hmax);
        out.push(self.clone());
        for _ in 1..hmax {
            let next = out.last().expect("nonempty").minkowski_sum(self);
            out.push(next);
        }
        Ok(out)
    }

    /// `{lambda * a : a in self}`.
    pub fn dilate(&self, lambda: &Rational) -> IntervalUnion {
        let raw = self.parts.iter().map(|p| {
            let (a, b) = (lambda * &p.lo, lambda * &p.hi);
            if lambda.is_negative() {
                Interval { lo: b, hi: a }
            } else {
                Interval { lo: a, hi: b }
            }
        });
        Self::canonicalize(raw)
    }

    pub fn translate(&self, t: &Rational) -> IntervalUnion {
        IntervalUnion {
            parts: self
                .parts
                .iter()
                .map(|p| Interval {
                    lo: &p.lo + t,
                    hi: &p.hi + t,
                })
                .collect(),
        }
    }

    /// Removes the interiors of `other`'s parts from `self`. `other`'s
    /// endpoints stay in the result, which is therefore again a finite
    /// union of closed intervals.
    pub fn subtract(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.parts {
            let mut start = a.lo.clone();
            let mut alive = true;
            for b in &other.parts {
                if b.lo >= b.hi || b.hi <= start || b.lo >= a.hi {
                    continue;
                }
                if b.lo >= start {
                    out.push(Interval {
                        lo: start.clone(),
                        hi: b.lo.clone(),
                    });
                }
                if b.hi >= a.hi {
                    // a.hi lies in the open part only when strictly inside it
                    if b.hi == a.hi {
                        out.push(Interval::point(a.hi.clone()));
                    }
                    alive = false;
                    break;
                }
                start = b.hi.clone();
            }
            if alive {
                out.push(Interval {
                    lo: start,
                    hi: a.hi.clone(),
                });
            }
        }
        Self::canonicalize(out)
    }

    /// Counts grid cells `[kg, (k+1)g]` inside and meeting `self`, giving
    /// `inner <= measure <= outer`. Uses only floor/ceil of endpoints, not
    /// interval lengths.
    pub fn grid_measure_oracle(&self, g: &Rational) -> Result<GridBounds> {
        if !g.is_positive() {
            return Err(Error::NonPositiveGridStep(g.to_string()));
        }
        let mut inner = BigInt::zero();
        // Half-open index ranges [first, last) of cells meeting a part,
        // merged because neighbouring parts may share a cell.
        let mut outer_ranges: Vec<(BigInt, BigInt)> = Vec::new();
        for p in &self.parts {
            if p.lo == p.hi {
                continue;
            }
            let lo = &p.lo / g;
            let hi = &p.hi / g;
            let full_first = lo.ceil();
            let full_last = hi.floor();
            if full_last > full_first {
                inner += &full_last - &full_first;
            }
            let first = lo.floor();
            let last = hi.ceil();
            match outer_ranges.last_mut() {
                Some((_, end)) if first < *end => {
                    if last > *end {
                        *end = last;
                    }
                }
                _ => outer_ranges.push((first, last)),
            }
        }
        let outer: BigInt = outer_ranges.iter().map(|(a, b)| b - a).sum();
        Ok(GridBounds {
            inner: g * Rational::from_bigint(inner),
            outer: g * Rational::from_bigint(outer),
        })
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[&Rational; 2]> = self.parts.iter().map(|p| [&p.lo, &p.hi]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[Rational; 2]> = Vec::deserialize(d)?;
        IntervalUnion::from_pairs(pairs.into_iter().map(|[lo, hi]| (lo, hi)))
            .map_err(serde::de::Error::custom)
    }
}

/// Both operands of a Minkowski sum rescaled to integer endpoints over a
/// shared denominator.
struct ScaledPair {
    denom: BigInt,
    a: Vec<(BigInt, BigInt)>,
    b: Vec<(BigInt, BigInt)>,
}

impl ScaledPair {
    fn new(a: &IntervalUnion, b: &IntervalUnion) -> Self {
        let mut denom = BigInt::one();
        for p in a.parts.iter().chain(b.parts.iter()) {
            denom = denom.lcm(p.lo.denom()).lcm(p.hi.denom());
        }
        let scale = |x: &Rational| x.numer() * (&denom / x.denom());
        let conv = |u: &IntervalUnion| {
            u.parts
                .iter()
                .map(|p| (scale(&p.lo), scale(&p.hi)))
                .collect()
        };
        let a = conv(a);
        let b = conv(b);
        ScaledPair { denom, a, b }
    }

    fn small(v: &[(BigInt, BigInt)]) -> Option<Vec<(i128, i128)>> {
        // Headroom so that pairwise sums cannot overflow.
        const LIMIT: i128 = i128::MAX / 4;
        v.iter()
            .map(|(lo, hi)| {
                let lo = lo.to_i128().filter(|x| x.abs() < LIMIT)?;
                let hi = hi.to_i128().filter(|x| x.abs() < LIMIT)?;
                Some((lo, hi))
            })
            .collect()
    }

    fn small_a(&self) -> Option<Vec<(i128, i128)>> {
        Self::small(&self.a)
    }

    fn small_b(&self) -> Option<Vec<(i128, i128)>> {
        Self::small(&self.b)
    }

    fn rebuild<T: Into<BigInt>>(&self, merged: Vec<(T, T)>) -> IntervalUnion {
        let d = Rational::from_bigint(self.denom.clone());
        let parts = merged
            .into_iter()
            .map(|(lo, hi)| Interval {
                lo: Rational::from_bigint(lo.into()) / &d,
                hi: Rational::from_bigint(hi.into()) / &d,
            })
            .collect();
        IntervalUnion { parts }
    }
}

/// All pairwise sums of two sorted separated part lists, sorted and merged.
fn sum_merge<T>(a: &[(T, T)], b: &[(T, T)]) -> Vec<(T, T)>
where
    T: Ord + Clone,
    for<'x> &'x T: std::ops::Add<&'x T, Output = T>,
{
    let mut sums: Vec<(T, T)> = Vec::with_capacity(a.len() * b.len());
    for (alo, ahi) in a {
        for (blo, bhi) in b {
            sums.push((alo + blo, ahi + bhi));
        }
    }
    sums.sort_unstable();
    let mut out: Vec<(T, T)> = Vec::new();
    for (lo, hi) in sums {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}
