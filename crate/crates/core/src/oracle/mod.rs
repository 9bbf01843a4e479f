//! Exhaustive and statistical checks of the mistake guarantees.

mod achievability;
mod adversary;
mod covariate;
mod game;
mod identity;
mod playout;

pub use achievability::{
    achievable_level, impossibility_witness, verify_achievability, AchievabilityReport, Regime,
    WitnessReport, MEAN_TOLERANCE,
};
pub use adversary::{adversary_run, AdversaryKind, AdversaryReport, PredictorKind};
pub use covariate::{covariate_bound_check, uniform_unit, CovariateCheckReport};
pub use game::{game_value, GameValueReport, MAX_TABLE_HORIZON};
pub use identity::{average_error_identity, mistakes_all, RandomForecaster};
pub use playout::{playout_equivalence, PlayoutEquivalenceReport};
