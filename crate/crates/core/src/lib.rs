//! Exact constructions of sumset-measure races on the real line.
//!
//! Sets are finite unions of closed rational intervals, so every measure
//! and every sumset is computed without rounding.
//!
//! - [`interval`]: canonical interval unions, Minkowski sums, measure.
//! - [`discrete`]: integer sumsets, rank normalization, witness search.
//! - [`construction`]: sets with prescribed measure differences.
//! - [`realization`]: integer sets thickened into interval unions.
//! - [`cli`], [`schema`], [`render`]: the `sumrace` front end.

pub mod cli;
pub mod construction;
pub mod discrete;
pub mod error;
pub mod interval;
pub mod rational;
pub mod realization;
pub mod render;
pub mod schema;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
pub use rational::Rational;
