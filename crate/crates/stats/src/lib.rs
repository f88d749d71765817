//! Hypothesis tests used by the popularity and lexicalization analyses.
//!
//! The crate covers Welch's two-sample t test, Type II two-way ANOVA for
//! unbalanced designs, the Games–Howell post hoc procedure and the
//! studentized range distribution it depends on. Everything is pure and
//! deterministic; reductions use compensated summation so results do not
//! depend on evaluation order.

pub mod anova;
pub mod distributions;
pub mod games_howell;
pub mod quadrature;
pub mod studentized_range;
pub mod summary;
pub mod welch;

mod error;

pub use anova::{two_way_anova, AnovaEffect, AnovaTable, EffectKind, ObservationTable};
pub use error::StatsError;
pub use games_howell::{games_howell, GamesHowellResult, PairwiseComparison};
pub use studentized_range::studentized_range_cdf;
pub use welch::{welch_t, WelchResult};
