use super::{GameConfig, Model, StrategyPair};
use crate::error::{Error, Result};
use crate::numerics::{beta_objective, optimal_beta_for_load, Density, PathlossExponent};

/// Fixed-rate payoffs `U_i = Λ_i log(1+β_i) e^{-(Λ₁+Λ₂) β_i^{2/α}}` for
/// explicit target SIRs.
pub fn utility_fixed(strategies: &StrategyPair, cfg: &GameConfig) -> Result<(f64, f64)> {
    if cfg.model != Model::FixedRate {
        return Err(Error::invalid(
            "utility_fixed requires the fixed-rate model",
        ));
    }
    let (Some(b1), Some(b2)) = (strategies.beta1, strategies.beta2) else {
        return Err(Error::invalid("fixed-rate utility needs both target SIRs"));
    };
    let (l1, l2) = (strategies.lambda1.get(), strategies.lambda2.get());
    let load = l1 + l2;
    Ok((
        l1 * beta_objective(b1.get(), load, cfg.alpha),
        l2 * beta_objective(b2.get(), load, cfg.alpha),
    ))
}

/// Fixed-rate payoffs with each network's target SIR optimised for the
/// current total load: `U_i = Λ_i max_β log(1+β) e^{-(Λ₁+Λ₂) β^{2/α}}`.
pub fn utility_random_access(
    lambda1: Density,
    lambda2: Density,
    alpha: PathlossExponent,
) -> Result<(f64, f64)> {
    let load = lambda1.get() + lambda2.get();
    if load == 0.0 {
        return Err(Error::invalid(
            "random access utility undefined with no transmissions",
        ));
    }
    let beta = optimal_beta_for_load(Density::new(load)?, alpha)?.get();
    let per_tx = beta_objective(beta, load, alpha);
    Ok((lambda1.get() * per_tx, lambda2.get() * per_tx))
}

fn transformed_one(own: f64, other: f64, alpha: PathlossExponent) -> f64 {
    if own == 0.0 {
        return 0.0;
    }
    own * own.powf(-alpha.half()).ln_1p() * (-other / own - 1.0).exp()
}

/// Payoffs of the transformed game,
/// `U₁ = Λ₁ log(1 + Λ₁^{-α/2}) e^{-Λ₂/Λ₁ - 1}` and symmetrically for `U₂`.
/// A zero density yields its limiting payoff of zero.
pub fn utility_transformed(
    lambda1: Density,
    lambda2: Density,
    alpha: PathlossExponent,
) -> (f64, f64) {
    let (l1, l2) = (lambda1.get(), lambda2.get());
    (
        transformed_one(l1, l2, alpha),
        transformed_one(l2, l1, alpha),
    )
}

/// Variable-rate payoffs `U_i = Λ_i K(Λ₁+Λ₂)`.
pub fn utility_variable(
    lambda1: Density,
    lambda2: Density,
    alpha: PathlossExponent,
) -> Result<(f64, f64)> {
    let load = Density::new(lambda1.get() + lambda2.get())?;
    let k = crate::numerics::vr_kernel(load, alpha).map_err(|_| {
        Error::invalid("variable-rate utility undefined when both densities are zero")
    })?;
    Ok((lambda1.get() * k, lambda2.get() * k))
}
