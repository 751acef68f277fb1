use super::utility::{utility_fixed, utility_random_access, utility_variable};
use super::{Equilibrium, GameConfig, Model, Regime, StrategyPair};
use crate::error::{Error, Result};
use crate::numerics::{
    bracket_monotone, foc_integral, optimal_beta_for_load, solve_bracketed,
    solve_lambda_double_prime, solve_lambda_star, Density, PathlossExponent, RootBracket, Trend,
};

const ARG_TOL: f64 = 1e-12;

/// `x (g(x) - 1)` with `g(x) = α / (2 (1 + x^{α/2}) log(1 + x^{-α/2}))`.
///
/// A fixed-rate network at interior density `x` is best-responding exactly
/// when the opponent plays this value. Negative below `Λ*(α)`, zero there,
/// increasing above.
fn fixed_rate_response_curve(x: f64, alpha: PathlossExponent) -> f64 {
    let a = alpha.half();
    let y = x.powf(a);
    let g = a / ((1.0 + y) * (1.0 / y).ln_1p());
    x * (g - 1.0)
}

fn fixed_rate_unclipped(other: f64, alpha: PathlossExponent) -> Result<f64> {
    let lstar = solve_lambda_star(alpha)?.get();
    if other == 0.0 {
        return Ok(lstar);
    }
    let curve = |x: f64| fixed_rate_response_curve(x, alpha) - other;
    let mut hi = (10.0 * (other * 2.0 / (alpha.get() - 2.0)).max(1.0)).max(2.0 * lstar);
    let mut guard = 0;
    while curve(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoBracket { lo: lstar, hi });
        }
    }
    solve_bracketed(curve, RootBracket::new(lstar, hi, ARG_TOL)?)
}

fn variable_rate_unclipped(other: f64, alpha: f64) -> Result<f64> {
    let foc = |l: f64| foc_integral(l, l + other, alpha);
    let guess = (2.0 * other / (alpha - 2.0)).max(0.5);
    let mut br = bracket_monotone(foc, guess, 1e-9, 1e15, Trend::Decreasing)?;
    br.tol = ARG_TOL;
    solve_bracketed(foc, br)
}

fn best_response_raw(
    other: f64,
    n_self: f64,
    alpha: PathlossExponent,
    model: Model,
) -> Result<f64> {
    match model {
        Model::FixedRate => {
            // The payoff increases up to the response curve's preimage of
            // `other`, so the cap binds iff the curve is still below it.
            if fixed_rate_response_curve(n_self, alpha) <= other {
                return Ok(n_self);
            }
            Ok(fixed_rate_unclipped(other, alpha)?.min(n_self))
        }
        Model::VariableRate => {
            if foc_integral(n_self, n_self + other, alpha.get()) >= 0.0 {
                return Ok(n_self);
            }
            Ok(variable_rate_unclipped(other, alpha.get())?.min(n_self))
        }
    }
}

/// Payoff-maximising density in `[0, n_self]` against an opponent playing
/// `lambda_other`, under `cfg`'s model and pathloss exponent.
pub fn best_response(lambda_other: Density, n_self: Density, cfg: &GameConfig) -> Result<Density> {
    if n_self.get() <= 0.0 {
        return Err(Error::invalid("best response needs n_self > 0"));
    }
    Density::new(best_response_raw(
        lambda_other.get(),
        n_self.get(),
        cfg.alpha,
        cfg.model,
    )?)
}

/// Interior symmetric equilibrium density, if the model has one at this
/// exponent: `sqrt(Λ*(α/2))` for fixed rate and `Λ''(α)` for variable rate,
/// both only for `α > 4`.
fn symmetric_threshold(alpha: PathlossExponent, model: Model) -> Result<Option<f64>> {
    if alpha.get() <= 4.0 {
        return Ok(None);
    }
    match model {
        Model::FixedRate => {
            let half = PathlossExponent::new(alpha.half())?;
            Ok(Some(solve_lambda_star(half)?.get().sqrt()))
        }
        Model::VariableRate => Ok(solve_lambda_double_prime(alpha)?.map(Density::get)),
    }
}

pub(crate) fn equilibrium_densities(cfg: &GameConfig) -> Result<(Regime, f64, f64)> {
    cfg.require_canonical()?;
    let (n1, n2) = (cfg.n1.get(), cfg.n2.get());
    if let Some(t) = symmetric_threshold(cfg.alpha, cfg.model)? {
        if n1 > t {
            return Ok((Regime::PartialPartial, t, t));
        }
    }
    let l2 = best_response_raw(n1, n2, cfg.alpha, cfg.model)?;
    let regime = if l2 >= n2 {
        Regime::FullFull
    } else {
        Regime::FullPartial
    };
    Ok((regime, n1, l2))
}

/// Regime of the unique equilibrium. `cfg` must be canonical.
pub fn classify_regime(cfg: &GameConfig) -> Result<Regime> {
    equilibrium_densities(cfg).map(|(r, _, _)| r)
}

/// The unique Nash equilibrium of a canonical configuration.
///
/// The sparser network schedules everything unless `α > 4` and it is dense
/// enough to reach the symmetric interior point; the denser network then
/// best-responds. Fixed-rate target SIRs are each network's optimum at the
/// equilibrium load.
pub fn solve_equilibrium(cfg: &GameConfig) -> Result<Equilibrium> {
    let (regime, l1, l2) = equilibrium_densities(cfg)?;
    let (lambda1, lambda2) = (Density::new(l1)?, Density::new(l2)?);
    let strategies = StrategyPair::densities(lambda1, lambda2);
    let (strategies, (u1, u2)) = match cfg.model {
        Model::FixedRate => {
            let beta = optimal_beta_for_load(Density::new(l1 + l2)?, cfg.alpha)?;
            let s = strategies.with_betas(beta, beta);
            (s, utility_fixed(&s, cfg)?)
        }
        Model::VariableRate => (strategies, utility_variable(lambda1, lambda2, cfg.alpha)?),
    };
    Ok(Equilibrium {
        regime,
        lambda1,
        lambda2,
        p1: l1 / cfg.n1.get(),
        p2: l2 / cfg.n2.get(),
        beta1: strategies.beta1,
        beta2: strategies.beta2,
        u1,
        u2,
        u_e: u1 + u2,
        model: cfg.model,
    })
}

/// Payoffs with target SIRs optimised away (the model's game payoffs).
pub(crate) fn game_payoffs(
    l1: f64,
    l2: f64,
    alpha: PathlossExponent,
    model: Model,
) -> Result<(f64, f64)> {
    let (d1, d2) = (Density::new(l1)?, Density::new(l2)?);
    match model {
        Model::FixedRate => utility_random_access(d1, d2, alpha),
        Model::VariableRate => utility_variable(d1, d2, alpha),
    }
}

/// Largest relative payoff gain either network can obtain by a unilateral
/// deviation to one of `grid_points` evenly spaced densities in `[0, N_i]`.
///
/// Non-positive for a true equilibrium (up to solver tolerance).
pub fn max_deviation_gain(eq: &Equilibrium, cfg: &GameConfig, grid_points: usize) -> Result<f64> {
    if grid_points < 2 {
        return Err(Error::invalid("deviation grid needs at least two points"));
    }
    let (l1, l2) = (eq.lambda1.get(), eq.lambda2.get());
    let (base1, base2) = game_payoffs(l1, l2, cfg.alpha, cfg.model)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 0..grid_points {
        let frac = k as f64 / (grid_points - 1) as f64;
        let d1 = frac * cfg.n1.get();
        let d2 = frac * cfg.n2.get();
        let (u1, _) = game_payoffs(d1, l2, cfg.alpha, cfg.model)?;
        let (_, u2) = game_payoffs(l1, d2, cfg.alpha, cfg.model)?;
        worst = worst.max((u1 - base1) / base1).max((u2 - base2) / base2);
    }
    Ok(worst)
}
