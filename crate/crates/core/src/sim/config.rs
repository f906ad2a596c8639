use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::SolverKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalProcess {
    /// `floor(lambda)` packets every slot plus one more with probability
    /// `lambda - floor(lambda)`; a plain Bernoulli stream for `lambda <= 1`.
    #[default]
    BernoulliBatch,
    /// Poisson(`lambda`) packets per slot.
    Poisson,
    /// Fixed arrival counts for slots `1, 2, ...`; zero afterwards.
    Scripted(Vec<u32>),
}

impl FromStr for ArrivalProcess {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bernoulli" | "bernoulli-batch" => Ok(ArrivalProcess::BernoulliBatch),
            "poisson" => Ok(ArrivalProcess::Poisson),
            other => Err(format!("unknown arrival process `{other}` (expected bernoulli|poisson)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub lambda: f64,
    pub arrival_process: ArrivalProcess,
    pub horizon: u64,
    pub seed: u64,
    pub p_on: f64,
    pub route_solver: SolverKind,
    pub activation_solver: SolverKind,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            lambda: 0.0,
            arrival_process: ArrivalProcess::BernoulliBatch,
            horizon: 10_000,
            seed: 0,
            p_on: 1.0,
            route_solver: SolverKind::Exact,
            activation_solver: SolverKind::Exact,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::Config(format!("lambda must be finite and >= 0, got {}", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.p_on) {
            return Err(Error::Config(format!("p_on must lie in [0, 1], got {}", self.p_on)));
        }
        if self.horizon < 1 {
            return Err(Error::Config("horizon must be at least one slot".into()));
        }
        Ok(())
    }

    pub(crate) fn draw_arrivals<R: Rng>(&self, rng: &mut R, slot: u64) -> u64 {
        match &self.arrival_process {
            ArrivalProcess::BernoulliBatch => {
                let whole = self.lambda.floor();
                let frac = self.lambda - whole;
                whole as u64 + u64::from(frac > 0.0 && rng.random_bool(frac))
            }
            ArrivalProcess::Poisson => {
                if self.lambda == 0.0 {
                    0
                } else {
                    Poisson::new(self.lambda).expect("lambda > 0").sample(rng) as u64
                }
            }
            ArrivalProcess::Scripted(counts) => counts
                .get((slot - 1) as usize)
                .copied()
                .unwrap_or(0) as u64,
        }
    }
}
