use super::kernel::foc_integral;
use super::roots::{bracket_monotone, solve_bracketed, RootBracket, Trend};
use super::{Density, PathlossExponent, SirThreshold};
use crate::error::{Error, Result};

const ARG_TOL: f64 = 1e-12;
const SCAN_MIN: f64 = 1e-6;
const SCAN_MAX: f64 = 1e6;

/// Residual of `α/2 = (1 + Λ^{α/2}) log(1 + Λ^{-α/2})`, written as
/// right-hand side minus left-hand side. Strictly decreasing in `Λ`.
pub fn lambda_star_residual(lambda: f64, alpha: PathlossExponent) -> f64 {
    let a = alpha.half();
    let y = lambda.powf(a);
    (1.0 + y) * (1.0 / y).ln_1p() - a
}

/// Optimal transmit density of a single unconstrained network under the
/// fixed-rate model.
pub fn solve_lambda_star(alpha: PathlossExponent) -> Result<Density> {
    let f = |l: f64| lambda_star_residual(l, alpha);
    let mut br = bracket_monotone(f, 1.0, SCAN_MIN, SCAN_MAX, Trend::Decreasing)?;
    br.tol = ARG_TOL;
    Density::new(solve_bracketed(f, br)?)
}

/// `log(1 + β) e^{-s β^{2/α}}`: the per-transmission payoff at load `s`.
pub fn beta_objective(beta: f64, load: f64, alpha: PathlossExponent) -> f64 {
    beta.ln_1p() * (-load * beta.powf(2.0 / alpha.get())).exp()
}

/// `ln((1 + 1/β) log(1 + β))` with `β = e^t`, stable for any finite `t`.
fn ln_q(t: f64) -> f64 {
    if t < -18.0 {
        // (1 + 1/β) log(1+β) = 1 + β/2 + O(β²)
        return 0.5 * t.exp();
    }
    let log1p_beta = if t > 35.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    };
    (-t).exp().ln_1p() + log1p_beta.ln()
}

/// The `β` maximising `log(1+β) e^{-s β^{2/α}}` at total transmit density
/// `s`, i.e. the root of `α / (2 s β^{2/α}) = (1 + 1/β) log(1 + β)`.
pub fn optimal_beta_for_load(load: Density, alpha: PathlossExponent) -> Result<SirThreshold> {
    let s = load.get();
    if s <= 0.0 {
        return Err(Error::invalid("target SIR optimisation needs load > 0"));
    }
    let a = alpha.half();
    let ln_c = (a / s).ln();
    // Solve in t = ln β; the objective is increasing in t.
    let g = |t: f64| t / a + ln_q(t) - ln_c;
    let t_hi = a * ln_c + 1.0;
    let t_lo = (a * (ln_c - std::f64::consts::LN_2)).min(0.0) - 1.0;
    let t = solve_bracketed(g, RootBracket::new(t_lo, t_hi, 1e-13)?)?;
    SirThreshold::new(t.exp())
}

/// Optimal target SIR of a single network with `n_per_disc` nodes per
/// transmission disc.
///
/// Above the full-reuse threshold `Λ*(α)` this is `Λ*^{-α/2}`; below it
/// every node transmits and the SIR target adapts to the load `N`.
pub fn solve_beta_star(n_per_disc: Density, alpha: PathlossExponent) -> Result<SirThreshold> {
    let n = n_per_disc.get();
    if n <= 0.0 {
        return Err(Error::invalid("nodes per disc must be > 0"));
    }
    let lstar = solve_lambda_star(alpha)?.get();
    if n > lstar {
        SirThreshold::new(lstar.powf(-alpha.half()))
    } else {
        optimal_beta_for_load(n_per_disc, alpha)
    }
}

/// Unconstrained maximiser of `Λ K(Λ)`: the variable-rate analogue of
/// `Λ*(α)`.
pub fn solve_lambda_prime(alpha: PathlossExponent) -> Result<Density> {
    let al = alpha.get();
    let f = |l: f64| foc_integral(l, l, al);
    let mut br = bracket_monotone(f, 1.0, SCAN_MIN, SCAN_MAX, Trend::Decreasing)?;
    br.tol = ARG_TOL;
    Density::new(solve_bracketed(f, br)?)
}

/// Symmetric interior equilibrium density of the variable-rate game.
///
/// `None` for `α ≤ 4`, where `f(s, s) > 1` for every `s` and the threshold
/// is infinite.
pub fn solve_lambda_double_prime(alpha: PathlossExponent) -> Result<Option<Density>> {
    let al = alpha.get();
    if al <= 4.0 {
        return Ok(None);
    }
    let f = |l: f64| foc_integral(l, 2.0 * l, al);
    // The root runs off to infinity as α → 4⁺.
    let mut br = bracket_monotone(f, 1.0, SCAN_MIN, 1e12, Trend::Decreasing)?;
    br.tol = ARG_TOL;
    Ok(Some(Density::new(solve_bracketed(f, br)?)?))
}

/// Γ(x) via `libm::tgamma`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}
