//! Finite causal sets, product history spaces with dependency maps, exact
//! probability measures, and checkers for screening-off principles.

pub mod causet;
pub mod error;
pub mod histories;
pub mod hunter;
pub mod io;
pub mod measure;
pub mod principles;
pub mod scalar;
pub mod suite;

pub use causet::{validate_causet, Causet, CrucialIdentity, Region};
pub use error::{Error, Result};
pub use histories::{DomMap, Event, HistorySpace};
pub use measure::MeasureTable;
pub use principles::{check_principle, implication_matrix, CheckOptions, Model, Principle, Verdict};
pub use scalar::Probability;

/// Exact rational scalar used by the checkers and the hunter.
pub type Rational = num_rational::BigRational;
/// Measure with exact rational weights.
pub type ExactMeasure = MeasureTable<Rational>;
/// Model with exact rational weights.
pub type ExactModel = Model<Rational>;
/// Measure with `f64` weights.
pub type FloatMeasure = MeasureTable<f64>;
