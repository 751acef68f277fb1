//! The two-network random access game.
//!
//! Network `i` has `N_i` nodes per transmission disc and chooses a transmit
//! density `Λ_i ∈ [0, N_i]`. The solvers assume the sparser network is
//! labelled 1; [`GameConfig::canonicalize`] enforces that and returns the
//! [`LabelMap`] needed to report results in the caller's labels.

mod asymptotic;
mod baseline;
mod equilibrium;
mod range;
mod utility;

pub use asymptotic::{asymptotic_equilibrium, equilibrium_utility_asymptote, fixed_rate_constants};
pub use baseline::{cooperative_baseline, price_of_anarchy};
pub use equilibrium::{best_response, classify_regime, max_deviation_gain, solve_equilibrium};
pub use range::{effective_nodes_per_disc, RangeSpec};
pub use utility::{utility_fixed, utility_random_access, utility_transformed, utility_variable};

use crate::error::{Error, Result};
use crate::numerics::{Density, PathlossExponent, SirThreshold};
use serde::{Deserialize, Serialize};

/// Rate model: fixed packet size `log(1+β)` or rate adapted to the
/// instantaneous SIR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    FixedRate,
    VariableRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub alpha: PathlossExponent,
    pub n1: Density,
    pub n2: Density,
    pub model: Model,
}

impl GameConfig {
    /// Validates `n1, n2 > 0`. The pair need not be ordered.
    pub fn new(alpha: f64, n1: f64, n2: f64, model: Model) -> Result<Self> {
        Ok(Self {
            alpha: PathlossExponent::new(alpha)?,
            n1: Density::positive(n1)?,
            n2: Density::positive(n2)?,
            model,
        })
    }

    pub fn is_canonical(&self) -> bool {
        self.n1 <= self.n2
    }

    /// Order the networks so that `n1 <= n2`.
    pub fn canonicalize(self) -> (Self, LabelMap) {
        if self.is_canonical() {
            (self, LabelMap { swapped: false })
        } else {
            (
                Self {
                    n1: self.n2,
                    n2: self.n1,
                    ..self
                },
                LabelMap { swapped: true },
            )
        }
    }

    pub(crate) fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected n1 <= n2, got n1={} n2={}; canonicalize first",
                self.n1.get(),
                self.n2.get()
            )))
        }
    }
}

/// Mapping between canonical (sparser-first) and caller network labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelMap {
    pub swapped: bool,
}

impl LabelMap {
    /// Reorder a canonical pair into caller order (and vice versa; the map
    /// is an involution).
    pub fn apply<T>(&self, pair: (T, T)) -> (T, T) {
        if self.swapped {
            (pair.1, pair.0)
        } else {
            pair
        }
    }

    /// Caller label (1 or 2) of canonical network `i`.
    pub fn caller_index(&self, canonical: u8) -> u8 {
        match (self.swapped, canonical) {
            (false, i) => i,
            (true, 1) => 2,
            (true, _) => 1,
        }
    }
}

/// Densities (and, for fixed rate, target SIRs) of both networks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub lambda1: Density,
    pub lambda2: Density,
    pub beta1: Option<SirThreshold>,
    pub beta2: Option<SirThreshold>,
}

impl StrategyPair {
    pub fn densities(lambda1: Density, lambda2: Density) -> Self {
        Self {
            lambda1,
            lambda2,
            beta1: None,
            beta2: None,
        }
    }

    pub fn with_betas(mut self, beta1: SirThreshold, beta2: SirThreshold) -> Self {
        self.beta1 = Some(beta1);
        self.beta2 = Some(beta2);
        self
    }

    pub fn swapped(self) -> Self {
        Self {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            beta1: self.beta2,
            beta2: self.beta1,
        }
    }

    /// Checks `0 <= Λ_i <= N_i` against a config.
    pub fn check_feasible(&self, cfg: &GameConfig) -> Result<()> {
        if self.lambda1 > cfg.n1 || self.lambda2 > cfg.n2 {
            return Err(Error::invalid("transmit density exceeds nodes per disc"));
        }
        Ok(())
    }
}

/// Which strategy-space constraints bind at the equilibrium. Labels are in
/// canonical order: `FullPartial` means the sparser network schedules all
/// of its links and the denser one only a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FullFull,
    FullPartial,
    PartialPartial,
}

impl Regime {
    /// Label in caller order, e.g. `"partial/full"` when the caller's
    /// network 1 is the denser one.
    pub fn oriented_label(self, labels: LabelMap) -> &'static str {
        match (self, labels.swapped) {
            (Regime::FullFull, _) => "full/full",
            (Regime::PartialPartial, _) => "partial/partial",
            (Regime::FullPartial, false) => "full/partial",
            (Regime::FullPartial, true) => "partial/full",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::FullFull => "FullFull",
            Regime::FullPartial => "FullPartial",
            Regime::PartialPartial => "PartialPartial",
        }
    }
}

/// The unique Nash equilibrium of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub regime: Regime,
    pub lambda1: Density,
    pub lambda2: Density,
    pub p1: f64,
    pub p2: f64,
    pub beta1: Option<SirThreshold>,
    pub beta2: Option<SirThreshold>,
    pub u1: f64,
    pub u2: f64,
    pub u_e: f64,
    pub model: Model,
}

impl Equilibrium {
    pub fn strategies(&self) -> StrategyPair {
        StrategyPair {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            beta1: self.beta1,
            beta2: self.beta2,
        }
    }

    /// Swap per-network fields according to `labels`. The regime tag stays
    /// canonical; use [`Regime::oriented_label`] for display.
    pub fn relabel(self, labels: LabelMap) -> Self {
        if !labels.swapped {
            return self;
        }
        Self {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            p1: self.p2,
            p2: self.p1,
            beta1: self.beta2,
            beta2: self.beta1,
            u1: self.u2,
            u2: self.u1,
            ..self
        }
    }
}
