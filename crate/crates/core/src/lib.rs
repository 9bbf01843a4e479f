//! Sequence prediction from potential functions: stability checks, exact
//! and randomized playout forecasters, potential constructors, graph
//! relaxations for node classification, and exhaustive verification tools.

pub mod error;
pub mod forecast;
pub mod graphopt;
pub mod oracle;
pub mod philib;
pub mod phispec;
pub mod potential;
pub mod predictors;
pub mod random;
pub mod sequence;
pub mod stability;
pub mod stats;
pub mod transcript;

pub use error::{Error, Result};
pub use forecast::{expected_mistakes, FnForecaster, Forecast, Forecaster};
pub use phispec::PhiSpec;
pub use potential::{CovariatePotential, PotentialFunction};
pub use predictors::{ExactPredictor, PlayoutConfig, PlayoutMode, PlayoutPredictor};
pub use sequence::{Alphabet, Outcome, SequencePrefix};
pub use stability::{check_stability, mean_phi, CheckMode, MeanMode, StabilityReport};
pub use stats::{Estimate, MonteCarlo};
