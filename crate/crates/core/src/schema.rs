//! JSON file formats. Every rational is a `"p/q"` string.

use serde::{Deserialize, Serialize};

use crate::construction::{ConstructionParams, DiffEntry, DiffMatrix, EllMatrix, TelescopeEntry};
use crate::discrete::{FiniteIntSet, TauTuple};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::rational::Rational;
use crate::realization::TauRaceEntry;

/// `{"n", "H", "theta": "p/q", "m": [[int, ...], ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    #[serde(rename = "H")]
    pub h_max: usize,
    pub theta: Rational,
    pub m: Vec<Vec<i64>>,
}

impl ProblemSpec {
    pub fn diff_matrix(&self) -> Result<DiffMatrix> {
        if !self.theta.is_positive() {
            return Err(Error::NonPositiveTheta(self.theta.to_string()));
        }
        DiffMatrix::new(self.n, self.h_max, self.m.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildOutput {
    pub params: ConstructionParams,
    /// The dilation factor `theta / delta` applied last.
    pub scale: Rational,
    pub ell: EllMatrix,
    pub sets: Vec<IntervalUnion>,
    pub report: Vec<DiffEntry>,
    pub telescoping: Vec<TelescopeEntry>,
}

/// Any file carrying a `"sets"` array; other keys are ignored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetsFile {
    pub sets: Vec<IntervalUnion>,
}

/// Either `{"targets": [[1,2],[2,1]]}` or the bare list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RaceTargets {
    Wrapped { targets: Vec<TauTuple> },
    Bare(Vec<TauTuple>),
}

impl RaceTargets {
    pub fn into_targets(self) -> Vec<TauTuple> {
        match self {
            RaceTargets::Wrapped { targets } | RaceTargets::Bare(targets) => targets,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RaceOutput {
    pub targets: Vec<TauTuple>,
    pub ground: u32,
    pub maxsize: usize,
    pub witness: Vec<FiniteIntSet>,
    pub eta: Rational,
    #[serde(rename = "H")]
    pub h_max: usize,
    pub sets: Vec<IntervalUnion>,
    pub report: Vec<TauRaceEntry>,
}
