use super::{binary_mean, multiclass_forecast, PlayoutConfig};
use crate::error::Result;
use crate::forecast::{Forecast, Forecaster};
use crate::potential::PotentialFunction;
use crate::sequence::{Alphabet, Outcome};

/// A [`Forecaster`] that recomputes each forecast from `phi` with a fixed
/// playout configuration.
#[derive(Clone, Debug)]
pub struct PlayoutPredictor {
    phi: PotentialFunction,
    cfg: PlayoutConfig,
}

impl PlayoutPredictor {
    pub fn new(phi: PotentialFunction, cfg: PlayoutConfig) -> Self {
        Self { phi, cfg }
    }

    pub fn config(&self) -> &PlayoutConfig {
        &self.cfg
    }

    pub fn potential(&self) -> &PotentialFunction {
        &self.phi
    }
}

impl Forecaster for PlayoutPredictor {
    fn alphabet(&self) -> Alphabet {
        self.phi.alphabet()
    }

    fn horizon(&self) -> usize {
        self.phi.horizon()
    }

    fn forecast(&self, prefix: &[Outcome]) -> Result<Forecast> {
        match self.phi.alphabet() {
            Alphabet::Binary => binary_mean(&self.phi, prefix, &self.cfg),
            Alphabet::Labels(_) => multiclass_forecast(&self.phi, prefix, &self.cfg),
        }
    }
}
