//! Large-`N₁` approximations for `2 < α < 4`.

use super::{GameConfig, StrategyPair};
use crate::error::{Error, Result};
use crate::numerics::Density;

fn require_low_alpha(cfg: &GameConfig) -> Result<f64> {
    cfg.require_canonical()?;
    let alpha = cfg.alpha.get();
    if alpha >= 4.0 {
        return Err(Error::invalid(format!(
            "asymptotic forms hold only for 2 < alpha < 4, got {alpha}"
        )));
    }
    Ok(alpha)
}

/// `(N₁, min(N₂, 2N₁/(α-2)))`, the limit of the equilibrium as `N₁ → ∞`.
/// Identical for both rate models.
pub fn asymptotic_equilibrium(cfg: &GameConfig) -> Result<StrategyPair> {
    let alpha = require_low_alpha(cfg)?;
    let (n1, n2) = (cfg.n1.get(), cfg.n2.get());
    let cap = 2.0 * n1 / (alpha - 2.0);
    Ok(StrategyPair::densities(cfg.n1, Density::new(n2.min(cap))?))
}

/// `(c₁(α), c₂(α))` with `c₁ = (α/2-1)^{α/2-1} (α/2) e^{-α/2}` and
/// `c₂ = (α/2)^{α/2} e^{-α/2}`.
pub fn fixed_rate_constants(alpha: f64) -> (f64, f64) {
    let a = 0.5 * alpha;
    let c1 = (a - 1.0).powf(a - 1.0) * a * (-a).exp();
    let c2 = a.powf(a) * (-a).exp();
    (c1, c2)
}

/// Large-`N₁` fixed-rate equilibrium welfare `U_e`.
///
/// When both networks schedule everything (`N₂ ≤ 2N₁/(α-2)`) the total
/// load is `N₁+N₂` and `U_e → c₂/(N₁+N₂)^{α/2-1}`; once the denser network
/// caps its density at `2N₁/(α-2)` the load is `αN₁/(α-2)` and
/// `U_e → c₁/N₁^{α/2-1}`. The two branches coincide on the boundary.
pub fn equilibrium_utility_asymptote(cfg: &GameConfig) -> Result<f64> {
    let alpha = require_low_alpha(cfg)?;
    let (n1, n2) = (cfg.n1.get(), cfg.n2.get());
    let (c1, c2) = fixed_rate_constants(alpha);
    let e = 0.5 * alpha - 1.0;
    if n2 <= 2.0 * n1 / (alpha - 2.0) {
        Ok(c2 / (n1 + n2).powf(e))
    } else {
        Ok(c1 / n1.powf(e))
    }
}
