//! Slotted Monte Carlo simulation of two networks on the unit square.
//!
//! A [`Topology`] holds transmitter/receiver pairs; each slot a scheduler
//! (i.i.d. random access or token-priority CSMA) picks the active links and
//! every active interior link is credited a rate from its SIR. The greedy
//! loop in [`run_greedy_adaptation`] lets each network hill-climb its own
//! strategy on measured throughput.
//!
//! Randomness is fully determined by 64-bit seeds; see [`rng`].

mod adapt;
mod channel;
mod measure;
pub mod rng;
mod schedule;
mod topology;

pub use adapt::{
    run_greedy_adaptation, scheduled_fraction, AdaptationTrace, GreedyConfig, TailMeans, TraceStep,
};
pub use channel::{compute_sir, Channel};
pub use measure::{measure_throughput, MeasureConfig, ThroughputEstimate};
pub use schedule::{schedule_csma, schedule_random_access, GammaRule, SlotSchedule};
pub use topology::{generate_topology, Link, NetworkId, Point, Topology, TopologySpec};

use crate::numerics::SirThreshold;
use serde::{Deserialize, Serialize};

/// Lowest silencing threshold a network may choose, in dB.
pub const GAMMA_MIN_DB: f64 = -30.0;
/// Highest silencing threshold a network may choose, in dB.
pub const GAMMA_MAX_DB: f64 = 30.0;

/// Per-slot variable rate credited when a link has no active interferer:
/// `log(1 + 10¹²)`.
pub const INTERFERENCE_FREE_RATE: f64 = 27.631_021_115_929_547;

/// How interference at a receiver is aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SirMode {
    /// Only the strongest interferer counts.
    Dominant,
    /// All active transmitters add up.
    Full,
}

/// Rate credited to an active link in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RateModel {
    /// `log(1+β_i)` when the SIR exceeds network `i`'s target, else nothing.
    FixedRate {
        beta1: SirThreshold,
        beta2: SirThreshold,
    },
    /// `log(1+SIR)`.
    VariableRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SirModel {
    pub mode: SirMode,
    pub rate: RateModel,
}

impl SirModel {
    /// Rate credited at signal power `s` and interference `i`.
    pub(crate) fn credit(&self, s: f64, i: f64, network: NetworkId) -> f64 {
        match self.rate {
            RateModel::VariableRate => {
                if i > 0.0 {
                    (s / i).ln_1p().min(INTERFERENCE_FREE_RATE)
                } else {
                    INTERFERENCE_FREE_RATE
                }
            }
            RateModel::FixedRate { beta1, beta2 } => {
                let beta = match network {
                    NetworkId::Net1 => beta1.get(),
                    NetworkId::Net2 => beta2.get(),
                };
                if s > beta * i {
                    beta.ln_1p()
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    RandomAccess,
    Csma,
}

impl Protocol {
    /// Admissible strategy range: access probability or threshold in dB.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Protocol::RandomAccess => (0.0, 1.0),
            Protocol::Csma => (GAMMA_MIN_DB, GAMMA_MAX_DB),
        }
    }

    pub(crate) fn strategy(self, s: [f64; 2]) -> ProtocolStrategy {
        match self {
            Protocol::RandomAccess => ProtocolStrategy::RandomAccess { p1: s[0], p2: s[1] },
            Protocol::Csma => ProtocolStrategy::Csma {
                gamma1_db: s[0],
                gamma2_db: s[1],
            },
        }
    }
}

/// Both networks' strategies under one protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "protocol")]
pub enum ProtocolStrategy {
    RandomAccess { p1: f64, p2: f64 },
    Csma { gamma1_db: f64, gamma2_db: f64 },
}

impl ProtocolStrategy {
    pub fn protocol(&self) -> Protocol {
        match self {
            ProtocolStrategy::RandomAccess { .. } => Protocol::RandomAccess,
            ProtocolStrategy::Csma { .. } => Protocol::Csma,
        }
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        match *self {
            ProtocolStrategy::RandomAccess { p1, p2 } => {
                schedule::check_probability(p1)?;
                schedule::check_probability(p2)
            }
            ProtocolStrategy::Csma {
                gamma1_db,
                gamma2_db,
            } => {
                schedule::check_gamma(gamma1_db)?;
                schedule::check_gamma(gamma2_db)
            }
        }
    }
}
