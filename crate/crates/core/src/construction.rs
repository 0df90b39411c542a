//! Sets of reals with prescribed differences of sumset measures.
//!
//! Given integers `m[i][h]` the pipeline is
//!
//! 1. [`solve_x`]: back-substitute the upper-triangular system
//!    `sum_{r >= h} (r - h + 1) x[i][r] = m[i][h]`.
//! 2. [`lift_to_ell`]: integrate the rows of `x` into nonnegative counts
//!    `ell[i][r]` with `ell[i+1][r] - ell[i][r] = x[i][r]`.
//! 3. [`choose_params`]: pick `epsilon`, `delta`, `c`.
//! 4. [`build_y`]: carve `ell[i][r]` open gaps of length `r * delta` out of
//!    `[1 + epsilon, 2 - 2 epsilon]`.
//! 5. [`assemble_a`]: `A_i = [0, delta] ∪ (c + (X ∪ Y_i))`, where `X` is the
//!    two-block set from [`build_x`].
//! 6. dilate every `A_i` by `theta / delta`.
//!
//! The sets then satisfy `mu(hA_i) - mu(hA_{i+1}) = theta * m[i][h]` for
//! `1 <= h <= H`, and [`verify_differences`] checks that exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rational::Rational;

/// Largest accepted `|m[i][h]|`. The carved sets need on the order of
/// `|m|` intervals each, so larger targets are not buildable anyway.
pub const MAX_TARGET: i64 = 1 << 31;

/// Target differences `m[i][h]`, `n - 1` rows of length `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffMatrix {
    n: usize,
    h_max: usize,
    m: Vec<Vec<i64>>,
}

impl DiffMatrix {
    pub fn new(n: usize, h_max: usize, m: Vec<Vec<i64>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("n must be at least 2, got {n}")));
        }
        if h_max < 2 {
            return Err(Error::Dimension(format!(
                "H must be at least 2, got {h_max}"
            )));
        }
        if m.len() != n - 1 {
            return Err(Error::Dimension(format!(
                "expected {} rows of m, got {}",
                n - 1,
                m.len()
            )));
        }
        if let Some((i, row)) = m.iter().enumerate().find(|(_, row)| row.len() != h_max) {
            return Err(Error::Dimension(format!(
                "row {} of m has length {}, expected {h_max}",
                i + 1,
                row.len()
            )));
        }
        if let Some(v) = m.iter().flatten().find(|v| v.abs() > MAX_TARGET) {
            return Err(Error::Dimension(format!(
                "target {v} exceeds {MAX_TARGET} in magnitude"
            )));
        }
        Ok(DiffMatrix { n, h_max, m })
    }

    pub fn zeros(n: usize, h_max: usize) -> Result<Self> {
        Self::new(n, h_max, vec![vec![0; h_max]; n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.m
    }

    /// `m[i][h]` with 1-based indices.
    pub fn get(&self, i: usize, h: usize) -> i64 {
        self.m[i - 1][h - 1]
    }
}

/// Solution `x[i][r]` of the triangular system, same shape as `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XMatrix {
    x: Vec<Vec<i64>>,
}

impl XMatrix {
    pub fn new(x: Vec<Vec<i64>>) -> Self {
        XMatrix { x }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.x
    }

    /// Evaluates `sum_{r >= h} (r - h + 1) x[i][r]` for every row and `h`.
    pub fn apply_triangular(&self) -> Vec<Vec<i64>> {
        self.x.iter().map(|row| triangular_apply(row)).collect()
    }
}

/// `(Mx)_h = sum_{r=h}^{H} (r - h + 1) x_r`, 1-based `h` and `r`.
pub fn triangular_apply(x: &[i64]) -> Vec<i64> {
    let h_max = x.len();
    (1..=h_max)
        .map(|h| (h..=h_max).map(|r| (r - h + 1) as i64 * x[r - 1]).sum())
        .collect()
}

/// Nonnegative counts `ell[i][r]`, `n` rows of length `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EllMatrix {
    ell: Vec<Vec<u64>>,
}

impl EllMatrix {
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.ell
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.ell.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn max_row_sum(&self) -> u64 {
        self.row_sums().into_iter().max().unwrap_or(0)
    }

    /// `ell[i+1][r] - ell[i][r]` for every `i`, `r`.
    pub fn differences(&self) -> Vec<Vec<i64>> {
        self.ell
            .windows(2)
            .map(|w| {
                w[0].iter()
                    .zip(&w[1])
                    .map(|(a, b)| *b as i64 - *a as i64)
                    .collect()
            })
            .collect()
    }
}

/// The scalars of the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub epsilon: Rational,
    pub delta: Rational,
    pub c: Rational,
    #[serde(rename = "H")]
    pub h_max: usize,
    pub n: usize,
}

impl ConstructionParams {
    /// Checks every inequality the construction relies on for carved sets
    /// with at most `l_max` gaps.
    pub fn validate(&self, l_max: u64) -> Result<()> {
        let eps = &self.epsilon;
        let delta = &self.delta;
        let h = Rational::from_integer(self.h_max as i64);
        let h1 = Rational::from_integer(self.h_max as i64 - 1);
        let bad = |what: &str| Err(Error::InvalidParams(what.to_string()));
        if self.h_max < 2 {
            return bad("H < 2");
        }
        if !eps.is_positive() || *eps >= Rational::new(1, 3) {
            return Err(Error::EpsilonOutOfRange(eps.to_string()));
        }
        if !delta.is_positive() {
            return bad("delta <= 0");
        }
        if *delta >= eps / &h1 {
            return bad("delta >= epsilon/(H-1)");
        }
        if l_max == 0 {
            return Err(Error::ZeroRowSum);
        }
        let l = Rational::from_integer(l_max as i64);
        let room = Rational::one() - Rational::from_integer(3) * eps;
        if *delta > &room / (Rational::from_integer(2) * &h * &l) {
            return bad("delta > (1-3 epsilon)/(2 H L)");
        }
        if &h1 * delta + Rational::from_integer(3) >= self.c {
            return bad("(H-1) delta + 3 >= c");
        }
        Ok(())
    }

    /// `[1 + epsilon, 2 - 2 epsilon]`, the interval the carved sets live in.
    pub fn carve_range(&self) -> (Rational, Rational) {
        let one = Rational::one();
        let two = Rational::from_integer(2);
        (&one + &self.epsilon, &two - &two * &self.epsilon)
    }
}

/// Back-substitution for `M x = m` with `M[h][r] = r - h + 1` for `r >= h`.
pub fn solve_x(m: &DiffMatrix) -> XMatrix {
    let h_max = m.h_max;
    let x =
        m.m.iter()
            .map(|row| {
                (0..h_max)
                    .map(|r| {
                        let at = |k: usize| row.get(k).copied().unwrap_or(0);
                        at(r) - 2 * at(r + 1) + at(r + 2)
                    })
                    .collect()
            })
            .collect();
    XMatrix { x }
}

/// Smallest nonnegative sequence `l_1, ..., l_n` with successive
/// differences `diffs`: `l_1` lifts the lowest prefix sum to zero.
pub fn lift_column(diffs: &[i64]) -> Vec<u64> {
    let lowest = diffs
        .iter()
        .scan(0i64, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .fold(0i64, i64::min);
    let mut level = -lowest;
    let mut out = Vec::with_capacity(diffs.len() + 1);
    out.push(level as u64);
    for d in diffs {
        level += d;
        out.push(level as u64);
    }
    out
}

/// Lifts every column of `x` with [`lift_column`], then adds 1 to column 1
/// of every row if some row would otherwise sum to zero. The shift keeps
/// all differences.
pub fn lift_to_ell(x: &XMatrix) -> EllMatrix {
    let n = x.x.len() + 1;
    let h_max = x.x.first().map_or(0, Vec::len);
    let mut ell = vec![vec![0u64; h_max]; n];
    for r in 0..h_max {
        let column: Vec<i64> = x.x.iter().map(|row| row[r]).collect();
        for (i, v) in lift_column(&column).into_iter().enumerate() {
            ell[i][r] = v;
        }
    }
    if h_max > 0 && ell.iter().any(|row| row.iter().all(|&v| v == 0)) {
        for row in &mut ell {
            row[0] += 1;
        }
    }
    EllMatrix { ell }
}

/// `epsilon = 1/4`, `delta` half of the largest admissible value, and
/// `c = (H-1) delta + 4`.
pub fn choose_params(h_max: usize, n: usize, l_max: u64) -> Result<ConstructionParams> {
    if l_max == 0 {
        return Err(Error::ZeroRowSum);
    }
    if h_max < 2 {
        return Err(Error::InvalidParams(format!(
            "H must be at least 2, got {h_max}"
        )));
    }
    let epsilon = Rational::new(1, 4);
    let h = Rational::from_integer(h_max as i64);
    let h1 = Rational::from_integer(h_max as i64 - 1);
    let room = Rational::one() - Rational::from_integer(3) * &epsilon;
    let first = &epsilon / &h1;
    let second = room / (Rational::from_integer(2) * &h * Rational::from_integer(l_max as i64));
    let delta = first.min(second) * Rational::new(1, 2);
    let c = &h1 * &delta + Rational::from_integer(4);
    let params = ConstructionParams {
        epsilon,
        delta,
        c,
        h_max,
        n,
    };
    params.validate(l_max)?;
    Ok(params)
}

/// The two-block set `[0, 1 - epsilon] ∪ [2, 3 - epsilon]`.
pub fn build_x(epsilon: &Rational) -> Result<IntervalUnion> {
    if !epsilon.is_positive() || *epsilon >= Rational::new(1, 3) {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    two_block_set(epsilon)
}

/// `[0, 1 - epsilon] ∪ [2, 3 - epsilon]` for any `epsilon <= 1`, without
/// the strict range check of [`build_x`].
pub fn two_block_set(epsilon: &Rational) -> Result<IntervalUnion> {
    let one = Rational::one();
    IntervalUnion::from_pairs([
        (Rational::zero(), &one - epsilon),
        (
            Rational::from_integer(2),
            Rational::from_integer(3) - epsilon,
        ),
    ])
}

/// One open gap `(lo, hi)` removed from the carve range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarvedGap {
    /// 1-based gap index `j = L_{r-1} + i`.
    pub index: usize,
    /// The gap has length `r * delta`.
    pub r: usize,
    pub lo: Rational,
    pub hi: Rational,
}

/// A carved set together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YBlueprint {
    pub ell: Vec<u64>,
    /// `u_j = 1 + epsilon + 2 H j delta` for `j = 0..=L`.
    pub anchors: Vec<Rational>,
    pub gaps: Vec<CarvedGap>,
    /// Union of the gap closures.
    pub z: IntervalUnion,
    pub y: IntervalUnion,
}

/// Removes, for each `r`, `ell_row[r-1]` open gaps of length `r * delta`
/// from `[1 + epsilon, 2 - 2 epsilon]`, the `j`-th gap starting at `u_j`.
pub fn build_y(ell_row: &[u64], params: &ConstructionParams) -> Result<YBlueprint> {
    if ell_row.len() != params.h_max {
        return Err(Error::Dimension(format!(
            "ell row has length {}, expected H = {}",
            ell_row.len(),
            params.h_max
        )));
    }
    let total: u64 = ell_row.iter().sum();
    if total == 0 {
        return Err(Error::ZeroEllRow);
    }
    params.validate(total)?;

    let (lo, hi) = params.carve_range();
    let step = Rational::from_integer(2 * params.h_max as i64) * &params.delta;
    let anchors: Vec<Rational> = (0..=total)
        .map(|j| &lo + &step * Rational::from_integer(j as i64))
        .collect();

    let mut gaps = Vec::with_capacity(total as usize);
    let mut j = 0usize;
    for (r0, &count) in ell_row.iter().enumerate() {
        let r = r0 + 1;
        let len = Rational::from_integer(r as i64) * &params.delta;
        for _ in 0..count {
            j += 1;
            let start = anchors[j].clone();
            let end = &start + &len;
            gaps.push(CarvedGap {
                index: j,
                r,
                lo: start,
                hi: end,
            });
        }
    }
    // The last gap must end strictly before the right end of the range,
    // otherwise 2 - 2 epsilon is carved away.
    if let Some(last) = gaps.last() {
        if last.hi >= hi {
            return Err(Error::InvalidParams(format!(
                "carved gap {} ends at {} beyond {}",
                last.index, last.hi, hi
            )));
        }
    }

    let z = IntervalUnion::canonicalize(
        gaps.iter()
            .map(|g| Interval::new(g.lo.clone(), g.hi.clone()).expect("positive length")),
    );
    if z.len() != gaps.len() {
        return Err(Error::Consistency("carved gaps overlap".into()));
    }
    let base = IntervalUnion::interval(lo.clone(), hi.clone())?;
    let y = base.subtract(&z);
    if y.is_empty() || !y.is_within(&lo, &hi) {
        return Err(Error::Consistency("carved set left its range".into()));
    }
    if let Some(u) = anchors.iter().find(|u| !y.contains(u)) {
        return Err(Error::Consistency(format!(
            "anchor {u} missing from carved set"
        )));
    }
    Ok(YBlueprint {
        ell: ell_row.to_vec(),
        anchors,
        gaps,
        z,
        y,
    })
}

/// `(h-1) delta + 1 - 3 epsilon - delta * sum_{r=h}^{H} (r - h + 1) ell_r`.
pub fn shifted_measure_closed_form(
    ell_row: &[u64],
    h: usize,
    params: &ConstructionParams,
) -> Rational {
    let delta = &params.delta;
    let weight: i64 = (h..=ell_row.len())
        .map(|r| (r - h + 1) as i64 * ell_row[r - 1] as i64)
        .sum();
    Rational::from_integer(h as i64 - 1) * delta + Rational::one()
        - Rational::from_integer(3) * &params.epsilon
        - delta * Rational::from_integer(weight)
}

/// `mu([0, (h-1) delta] + Y)`, computed directly and checked against
/// [`shifted_measure_closed_form`].
pub fn shifted_measure(
    blueprint: &YBlueprint,
    h: usize,
    params: &ConstructionParams,
) -> Result<Rational> {
    if h == 0 || h > params.h_max {
        return Err(Error::Dimension(format!(
            "h = {h} outside 1..={}",
            params.h_max
        )));
    }
    let reach = Rational::from_integer(h as i64 - 1) * &params.delta;
    let shift = IntervalUnion::interval(Rational::zero(), reach)?;
    let direct = shift.minkowski_sum(&blueprint.y).measure();
    let closed = shifted_measure_closed_form(&blueprint.ell, h, params);
    if direct != closed {
        return Err(Error::Consistency(format!(
            "shifted measure at h = {h}: direct {direct} vs closed form {closed}"
        )));
    }
    Ok(direct)
}

/// `[0, delta] ∪ (c + (X ∪ Y))`.
pub fn assemble_a(
    x: &IntervalUnion,
    y: &IntervalUnion,
    params: &ConstructionParams,
) -> Result<IntervalUnion> {
    if y.is_empty() {
        return Err(Error::EmptyCarvedSet);
    }
    let (lo, hi) = params.carve_range();
    if !y.is_within(&lo, &hi) {
        return Err(Error::CarvedSetOutOfRange {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let head = IntervalUnion::interval(Rational::zero(), params.delta.clone())?;
    Ok(head.union(&x.union(y).translate(&params.c)))
}

/// Output of [`build_sets`].
#[derive(Clone, Debug)]
pub struct Construction {
    pub sets: Vec<IntervalUnion>,
    pub params: ConstructionParams,
    pub x: XMatrix,
    pub ell: EllMatrix,
    /// The dilation factor `theta / delta`.
    pub scale: Rational,
}

/// Runs the whole pipeline for targets `m` scaled by `theta > 0`.
pub fn build_sets(m: &DiffMatrix, theta: &Rational) -> Result<Construction> {
    if !theta.is_positive() {
        return Err(Error::NonPositiveTheta(theta.to_string()));
    }
    let x = solve_x(m);
    if x.apply_triangular() != m.m {
        return Err(Error::Consistency(
            "triangular solve does not reproduce m".into(),
        ));
    }
    let ell = lift_to_ell(&x);
    if ell.differences() != x.x {
        return Err(Error::Consistency(
            "ell differences do not reproduce x".into(),
        ));
    }
    let params = choose_params(m.h_max, m.n, ell.max_row_sum())?;
    let two_block = build_x(&params.epsilon)?;
    let scale = theta / &params.delta;
    let sets = ell
        .rows()
        .iter()
        .map(|row| {
            let blueprint = build_y(row, &params)?;
            let a = assemble_a(&two_block, &blueprint.y, &params)?;
            Ok(a.dilate(&scale))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Construction {
        sets,
        params,
        x,
        ell,
        scale,
    })
}

/// One `(i, h)` difference check, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub i: usize,
    pub h: usize,
    pub computed: Rational,
    pub target: Rational,
    pub pass: bool,
}

/// `mu(hA_j) - mu(hA_k)` against the sum of the successive differences
/// between `j` and `k` and against `theta * sum m[i][h]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelescopeEntry {
    pub j: usize,
    pub k: usize,
    pub h: usize,
    pub direct: Rational,
    pub summed: Rational,
    pub target: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceReport {
    /// `measures[i-1][h-1] = mu(hA_i)`.
    pub measures: Vec<Vec<Rational>>,
    pub entries: Vec<DiffEntry>,
    pub telescoping: Vec<TelescopeEntry>,
}

impl DifferenceReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass) && self.telescoping.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DiffEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// `mu(hA)` for `h = 1..=h_max`.
pub fn measure_profile(a: &IntervalUnion, h_max: usize) -> Result<Vec<Rational>> {
    Ok(a.hfold_profile(h_max)?
        .iter()
        .map(IntervalUnion::measure)
        .collect())
}

/// Exactly compares `mu(hA_i) - mu(hA_{i+1})` with `theta * m[i][h]` for
/// all `i`, `h`. Mismatches are report entries; only a set count that
/// disagrees with `m` is an error.
pub fn verify_differences(
    sets: &[IntervalUnion],
    m: &DiffMatrix,
    theta: &Rational,
) -> Result<DifferenceReport> {
    if sets.len() != m.n {
        return Err(Error::Dimension(format!(
            "{} sets for n = {}",
            sets.len(),
            m.n
        )));
    }
    let h_max = m.h_max;
    let measures = sets
        .par_iter()
        .map(|a| measure_profile(a, h_max))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity((m.n - 1) * h_max);
    for i in 1..m.n {
        for h in 1..=h_max {
            let computed = &measures[i - 1][h - 1] - &measures[i][h - 1];
            let target = theta * Rational::from_integer(m.get(i, h));
            let pass = computed == target;
            entries.push(DiffEntry {
                i,
                h,
                computed,
                target,
                pass,
            });
        }
    }

    let mut telescoping = Vec::new();
    for j in 1..=m.n {
        for k in j + 1..=m.n {
            for h in 1..=h_max {
                let direct = &measures[j - 1][h - 1] - &measures[k - 1][h - 1];
                let summed: Rational = (j..k)
                    .map(|i| &measures[i - 1][h - 1] - &measures[i][h - 1])
                    .sum();
                let target = theta * Rational::from_integer((j..k).map(|i| m.get(i, h)).sum());
                let pass = direct == summed && direct == target;
                telescoping.push(TelescopeEntry {
                    j,
                    k,
                    h,
                    direct,
                    summed,
                    target,
                    pass,
                });
            }
        }
    }
    Ok(DifferenceReport {
        measures,
        entries,
        telescoping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn iu(pairs: &[(Rational, Rational)]) -> IntervalUnion {
        IntervalUnion::from_pairs(pairs.iter().cloned()).unwrap()
    }

    fn params_2_1() -> ConstructionParams {
        choose_params(2, 2, 1).unwrap()
    }

    #[test]
    fn solve_x_examples() {
        let m = DiffMatrix::new(2, 2, vec![vec![3, 1]]).unwrap();
        assert_eq!(solve_x(&m).rows(), &[vec![1, 1]]);
        let m = DiffMatrix::zeros(3, 4).unwrap();
        assert_eq!(solve_x(&m).rows(), &[vec![0; 4], vec![0; 4]]);
        let m = DiffMatrix::new(2, 3, vec![vec![0, 0, 1]]).unwrap();
        let x = solve_x(&m);
        assert_eq!(x.rows(), &[vec![1, -2, 1]]);
        assert_eq!(x.apply_triangular(), vec![vec![0, 0, 1]]);
    }

    #[test]
    fn diff_matrix_shapes() {
        assert!(DiffMatrix::new(1, 2, vec![]).is_err());
        assert!(DiffMatrix::new(2, 1, vec![vec![1]]).is_err());
        assert!(DiffMatrix::new(3, 2, vec![vec![1, 2]]).is_err());
        assert!(DiffMatrix::new(2, 2, vec![vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn lift_examples() {
        let x = XMatrix {
            x: vec![vec![1, 0]],
        };
        assert_eq!(lift_to_ell(&x).rows(), &[vec![1, 0], vec![2, 0]]);

        assert_eq!(lift_column(&[-2]), vec![2, 0]);
        assert_eq!(lift_column(&[1, -3, 5]), vec![2, 3, 0, 5]);
        // Full lift of that column repairs the zero second row.
        let x = XMatrix { x: vec![vec![-2]] };
        assert_eq!(lift_to_ell(&x).rows(), &[vec![3], vec![1]]);

        let x = XMatrix {
            x: vec![vec![0, 0, 0], vec![0, 0, 0]],
        };
        assert_eq!(
            lift_to_ell(&x).rows(),
            &[vec![1, 0, 0], vec![1, 0, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn lift_uses_every_prefix() {
        // The lowest prefix is the full column sum; leaving it out would
        // make the last row negative.
        let x = XMatrix {
            x: vec![vec![1, 0], vec![-3, 0]],
        };
        let ell = lift_to_ell(&x);
        // (2,0),(3,0),(0,0) before the zero row is repaired.
        assert_eq!(ell.rows(), &[vec![3, 0], vec![4, 0], vec![1, 0]]);
        assert_eq!(ell.differences(), x.rows());
    }

    #[test]
    fn choose_params_examples() {
        let p = params_2_1();
        assert_eq!(p.epsilon, q(1, 4));
        assert_eq!(p.delta, q(1, 32));
        assert_eq!(p.c, q(129, 32));
        assert_eq!(choose_params(2, 2, 2).unwrap().delta, q(1, 64));
        assert_eq!(choose_params(5, 2, 1).unwrap().delta, q(1, 80));
        assert!(matches!(choose_params(2, 2, 0), Err(Error::ZeroRowSum)));
    }

    #[test]
    fn validate_rejects() {
        let mut p = params_2_1();
        assert!(p.validate(1).is_ok());
        assert!(p.validate(3).is_err());
        p.c = r(3) + q(1, 32);
        assert!(p.validate(1).is_err());
        let mut p = params_2_1();
        p.epsilon = q(1, 3);
        assert!(matches!(p.validate(1), Err(Error::EpsilonOutOfRange(_))));
    }

    #[test]
    fn build_x_examples() {
        assert_eq!(
            build_x(&q(1, 4)).unwrap(),
            iu(&[(r(0), q(3, 4)), (r(2), q(11, 4))])
        );
        assert_eq!(
            build_x(&q(1, 5)).unwrap(),
            iu(&[(r(0), q(4, 5)), (r(2), q(14, 5))])
        );
        assert!(matches!(
            build_x(&q(1, 3)),
            Err(Error::EpsilonOutOfRange(_))
        ));
        assert!(build_x(&r(0)).is_err());
    }

    #[test]
    fn build_y_examples() {
        let p = params_2_1();
        let b = build_y(&[1, 0], &p).unwrap();
        assert_eq!(b.anchors[1], q(11, 8));
        assert_eq!(b.gaps.len(), 1);
        assert_eq!(
            (b.gaps[0].lo.clone(), b.gaps[0].hi.clone()),
            (q(11, 8), q(45, 32))
        );
        assert_eq!(b.y, iu(&[(q(5, 4), q(11, 8)), (q(45, 32), q(3, 2))]));
        assert_eq!(b.y.measure(), q(7, 32));

        let b = build_y(&[0, 1], &p).unwrap();
        assert_eq!(b.gaps[0].r, 2);
        assert_eq!(b.gaps[0].lo, q(11, 8));
        assert_eq!(&b.gaps[0].hi - &b.gaps[0].lo, q(1, 16));
        assert_eq!(b.y.measure(), q(3, 16));

        assert!(matches!(build_y(&[0, 0], &p), Err(Error::ZeroEllRow)));
        assert!(build_y(&[1], &p).is_err());
        // L = 3 exceeds what delta = 1/32 allows.
        assert!(build_y(&[2, 1], &p).is_err());
    }

    #[test]
    fn build_y_measure_formula() {
        let p = choose_params(3, 2, 6).unwrap();
        let ell = [1, 2, 3];
        let b = build_y(&ell, &p).unwrap();
        let weighted: i64 = ell
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as i64 + 1) * v as i64)
            .sum();
        assert_eq!(
            b.y.measure(),
            r(1) - r(3) * &p.epsilon - &p.delta * r(weighted)
        );
        assert_eq!(b.y.len(), 7);
    }

    #[test]
    fn shifted_measure_examples() {
        let p = params_2_1();
        let b = build_y(&[1, 0], &p).unwrap();
        assert_eq!(shifted_measure(&b, 1, &p).unwrap(), q(7, 32));
        assert_eq!(shifted_measure(&b, 2, &p).unwrap(), q(9, 32));
        let b = build_y(&[0, 1], &p).unwrap();
        assert_eq!(shifted_measure(&b, 1, &p).unwrap(), q(3, 16));
        assert!(shifted_measure(&b, 0, &p).is_err());
        assert!(shifted_measure(&b, 3, &p).is_err());
    }

    #[test]
    fn shifted_measure_detects_tampering() {
        let p = params_2_1();
        let mut b = build_y(&[1, 0], &p).unwrap();
        b.ell = vec![0, 1];
        assert!(matches!(
            shifted_measure(&b, 1, &p),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn assemble_examples() {
        let p = params_2_1();
        let x = build_x(&p.epsilon).unwrap();
        let b = build_y(&[1, 0], &p).unwrap();
        let a = assemble_a(&x, &b.y, &p).unwrap();
        let shifted = x.union(&b.y).translate(&p.c);
        assert_eq!(shifted.len(), 4);
        assert_eq!(a.len(), 5);
        assert_eq!(a, iu(&[(r(0), q(1, 32))]).union(&shifted));
        assert_eq!(a.parts()[1].lo(), &p.c);

        assert!(matches!(
            assemble_a(&x, &IntervalUnion::empty(), &p),
            Err(Error::EmptyCarvedSet)
        ));
        let outside = iu(&[(r(1), q(3, 2))]);
        assert!(matches!(
            assemble_a(&x, &outside, &p),
            Err(Error::CarvedSetOutOfRange { .. })
        ));
    }

    #[test]
    fn build_sets_small() {
        let m = DiffMatrix::new(2, 2, vec![vec![1, 0]]).unwrap();
        let out = build_sets(&m, &r(1)).unwrap();
        assert_eq!(out.ell.rows(), &[vec![1, 0], vec![2, 0]]);
        assert_eq!(out.params.delta, q(1, 64));
        assert_eq!(out.scale, r(64));
        let rep = verify_differences(&out.sets, &m, &r(1)).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(&rep.measures[0][0] - &rep.measures[1][0], r(1));
        assert_eq!(&rep.measures[0][1] - &rep.measures[1][1], r(0));
    }

    #[test]
    fn build_sets_zero_targets() {
        let m = DiffMatrix::zeros(3, 3).unwrap();
        let out = build_sets(&m, &r(1)).unwrap();
        let rep = verify_differences(&out.sets, &m, &r(1)).unwrap();
        assert!(rep.all_pass());
        assert!(rep.entries.iter().all(|e| e.computed.is_zero()));
    }

    #[test]
    fn build_sets_three_sets() {
        let m = DiffMatrix::new(3, 2, vec![vec![2, -1], vec![-3, 4]]).unwrap();
        let theta = q(3, 7);
        let out = build_sets(&m, &theta).unwrap();
        let rep = verify_differences(&out.sets, &m, &theta).unwrap();
        assert_eq!(rep.entries.len(), 4);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.entries[1].computed, q(-3, 7));
    }

    #[test]
    fn build_sets_rejects_theta() {
        let m = DiffMatrix::zeros(2, 2).unwrap();
        assert!(matches!(
            build_sets(&m, &r(0)),
            Err(Error::NonPositiveTheta(_))
        ));
        assert!(matches!(
            build_sets(&m, &r(-1)),
            Err(Error::NonPositiveTheta(_))
        ));
    }

    #[test]
    fn verify_detects_dilation() {
        let m = DiffMatrix::new(2, 3, vec![vec![1, -2, 0]]).unwrap();
        let out = build_sets(&m, &r(1)).unwrap();
        let mut sets = out.sets.clone();
        sets[0] = sets[0].dilate(&r(2));
        let rep = verify_differences(&sets, &m, &r(1)).unwrap();
        assert!(!rep.all_pass());
        assert_eq!(rep.failures().count(), 3);
    }

    #[test]
    fn verify_trivial_equal_sets() {
        let a = iu(&[(r(0), r(1)), (r(3), r(4))]);
        let sets = vec![a.clone(), a];
        let zero = DiffMatrix::zeros(2, 3).unwrap();
        assert!(verify_differences(&sets, &zero, &r(1)).unwrap().all_pass());
        let nonzero = DiffMatrix::new(2, 3, vec![vec![0, 1, 0]]).unwrap();
        assert!(!verify_differences(&sets, &nonzero, &r(1))
            .unwrap()
            .all_pass());
        assert!(verify_differences(&sets[..1], &zero, &r(1)).is_err());
    }
}
