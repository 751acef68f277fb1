//! Root solvers, quadrature and the defining equations of the game
//! thresholds.

mod kernel;
mod quad;
mod roots;
mod thresholds;

pub use kernel::{f_ratio, foc_integral, vr_kernel, vr_moment};
pub use quad::{integrate, Integral};
pub use roots::{bracket_monotone, solve_bracketed, RootBracket, Trend};
pub use thresholds::{
    beta_objective, gamma, lambda_star_residual, optimal_beta_for_load, solve_beta_star,
    solve_lambda_double_prime, solve_lambda_prime, solve_lambda_star,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Pathloss exponent, strictly greater than 2.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PathlossExponent(f64);

impl PathlossExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::invalid(format!(
                "pathloss exponent must be finite and > 2, got {alpha}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `alpha / 2`, the exponent that shows up in nearly every formula.
    #[inline]
    pub fn half(self) -> f64 {
        self.0 / 2.0
    }
}

impl TryFrom<f64> for PathlossExponent {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PathlossExponent> for f64 {
    fn from(a: PathlossExponent) -> f64 {
        a.0
    }
}

/// Average number of (simultaneous) transmissions or nodes per transmission
/// disc.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Density(f64);

impl Density {
    pub const ZERO: Density = Density(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::invalid(format!(
                "density must be finite and >= 0, got {value}"
            )))
        }
    }

    /// Like [`Density::new`] but additionally rejects zero.
    pub fn positive(value: f64) -> Result<Self> {
        let d = Self::new(value)?;
        if d.0 > 0.0 {
            Ok(d)
        } else {
            Err(Error::invalid("density must be > 0"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Density {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Density> for f64 {
    fn from(d: Density) -> f64 {
        d.0
    }
}

/// Target SIR as a linear power ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SirThreshold(f64);

impl SirThreshold {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(Self(beta))
        } else {
            Err(Error::invalid(format!(
                "SIR threshold must be finite and > 0, got {beta}"
            )))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(10f64.powf(db / 10.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SirThreshold {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SirThreshold> for f64 {
    fn from(b: SirThreshold) -> f64 {
        b.0
    }
}
