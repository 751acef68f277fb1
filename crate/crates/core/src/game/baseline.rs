use super::equilibrium::solve_equilibrium;
use super::{GameConfig, Model, StrategyPair};
use crate::error::{Error, Result};
use crate::numerics::{
    beta_objective, solve_beta_star, solve_lambda_prime, solve_lambda_star, vr_kernel, Density,
};

/// Welfare-maximising joint operation: both networks act as one network
/// with `N₁+N₂` nodes per disc and split the optimal total density in
/// proportion to their sizes.
///
/// Returns the split and the cooperative welfare `U_c`. Unconstrained
/// (`N₁+N₂ > Λ*`), fixed rate gives `U_c = Λ* log(1+Λ*^{-α/2}) / e`,
/// independent of the node counts.
pub fn cooperative_baseline(cfg: &GameConfig) -> Result<(StrategyPair, f64)> {
    cfg.require_canonical()?;
    let (n1, n2) = (cfg.n1.get(), cfg.n2.get());
    let n = n1 + n2;
    let (total, pair, u_c) = match cfg.model {
        Model::FixedRate => {
            let total = solve_lambda_star(cfg.alpha)?.get().min(n);
            let beta = solve_beta_star(Density::new(n)?, cfg.alpha)?;
            let u = total * beta_objective(beta.get(), total, cfg.alpha);
            (total, Some(beta), u)
        }
        Model::VariableRate => {
            let total = solve_lambda_prime(cfg.alpha)?.get().min(n);
            let u = total * vr_kernel(Density::new(total)?, cfg.alpha)?;
            (total, None, u)
        }
    };
    let mut split =
        StrategyPair::densities(Density::new(total * n1 / n)?, Density::new(total * n2 / n)?);
    if let Some(beta) = pair {
        split = split.with_betas(beta, beta);
    }
    Ok((split, u_c))
}

/// `U_c / U_e`: cooperative welfare over equilibrium welfare (≥ 1).
pub fn price_of_anarchy(cfg: &GameConfig) -> Result<f64> {
    let (_, u_c) = cooperative_baseline(cfg)?;
    let eq = solve_equilibrium(cfg)?;
    if !(eq.u_e > 0.0) {
        return Err(Error::ZeroEquilibriumUtility);
    }
    Ok(u_c / eq.u_e)
}
