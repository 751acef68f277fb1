use crate::error::{Error, Result};
use crate::numerics::Density;
use serde::{Deserialize, Serialize};

/// Distribution of the tx-rx distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RangeSpec {
    /// Every receiver at distance `d`.
    Fixed { d: f64 },
    /// Receiver uniform on the disc of radius `r` around its transmitter.
    UniformDisc { r: f64 },
    /// Only the second moment `E[d²]` is known.
    SecondMoment { m2: f64 },
}

impl RangeSpec {
    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            RangeSpec::Fixed { d } => d,
            RangeSpec::UniformDisc { r } => r,
            RangeSpec::SecondMoment { m2 } => m2,
        };
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "range parameter must be > 0, got {v}"
            )))
        }
    }

    /// `E[d²]`; `R²/2` for the uniform disc.
    pub fn second_moment(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            RangeSpec::Fixed { d } => d * d,
            RangeSpec::UniformDisc { r } => 0.5 * r * r,
            RangeSpec::SecondMoment { m2 } => m2,
        })
    }
}

/// Nodes per transmission disc `π λ E[d²]` for spatial density `λ` (nodes
/// per unit area). With power control every result for a fixed range `d`
/// carries over with `d²` replaced by `E[d²]`.
pub fn effective_nodes_per_disc(density: f64, range: RangeSpec) -> Result<Density> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::invalid(format!(
            "spatial density must be > 0, got {density}"
        )));
    }
    Density::new(std::f64::consts::PI * density * range.second_moment()?)
}
