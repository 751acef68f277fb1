//! Spectrum sharing between two wireless networks under random access.
//!
//! Two networks of transmitter/receiver pairs share one band. Each network
//! picks the density of simultaneous transmissions it schedules; the
//! interplay is a two-player game whose unique Nash equilibrium depends on
//! the pathloss exponent. This crate provides
//!
//! * [`numerics`]: the transcendental thresholds (optimal single-network
//!   density, the variable-rate thresholds), the variable-rate kernel
//!   integral and the root finding / quadrature behind them,
//! * [`game`]: utilities, best responses, equilibria, regimes, the
//!   cooperative baseline and the price of anarchy,
//! * [`sim`]: a slotted Monte Carlo simulator with random-access and
//!   token-priority CSMA scheduling and greedy adaptation loops.
//!
//! All rates are in nats (natural logarithm).

pub mod error;
pub mod game;
pub mod numerics;
pub mod sim;

pub use error::{Error, Result};
pub use game::{Equilibrium, GameConfig, LabelMap, Model, RangeSpec, Regime, StrategyPair};
pub use numerics::{Density, PathlossExponent, SirThreshold};
