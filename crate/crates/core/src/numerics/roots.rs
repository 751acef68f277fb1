use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Interval on which an objective changes sign, plus the absolute
/// tolerance on the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo < hi) || !(tol > 0.0) {
            return Err(Error::invalid(format!(
                "bad bracket [{lo}, {hi}] with tol {tol}"
            )));
        }
        Ok(Self { lo, hi, tol })
    }
}

/// Direction in which a monotone objective crosses zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// Positive below the root, negative above.
    Decreasing,
    /// Negative below the root, positive above.
    Increasing,
}

/// Grow a bracket geometrically (factor 2) from `guess` until a monotone
/// objective changes sign, staying inside `[min, max]`.
pub fn bracket_monotone<F>(
    mut f: F,
    guess: f64,
    min: f64,
    max: f64,
    trend: Trend,
) -> Result<RootBracket>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(min > 0.0 && min < max);
    let below = |v: f64| match trend {
        Trend::Decreasing => v > 0.0,
        Trend::Increasing => v < 0.0,
    };
    let mut x = guess.clamp(min, max);
    let fx = f(x);
    if fx.is_nan() {
        return Err(Error::invalid(format!("objective is NaN at {x}")));
    }
    if fx == 0.0 {
        return RootBracket::new(x * (1.0 - 1e-15), x * (1.0 + 1e-15), f64::MIN_POSITIVE);
    }
    if below(fx) {
        loop {
            let next = (x * 2.0).min(max);
            let fv = f(next);
            if !below(fv) {
                return RootBracket::new(x, next, 1.0);
            }
            if next >= max {
                return Err(Error::NoBracket { lo: guess, hi: max });
            }
            x = next;
        }
    } else {
        loop {
            let next = (x * 0.5).max(min);
            let fv = f(next);
            if below(fv) || fv == 0.0 {
                return RootBracket::new(next, x, 1.0);
            }
            if next <= min {
                return Err(Error::NoBracket { lo: min, hi: guess });
            }
            x = next;
        }
    }
}

/// Bisection with safeguarded (Illinois) false-position steps.
///
/// Terminates once the bracket is narrower than `bracket.tol` plus a few
/// ulps of the root, or when the objective is exactly zero. Returns the
/// endpoint with the smaller residual.
pub fn solve_bracketed<F>(mut f: F, bracket: RootBracket) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::invalid("objective is NaN at bracket endpoint"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }

    // Illinois bookkeeping: which endpoint was retained last step.
    let mut last_kept: i8 = 0;
    let mut width_two_ago = f64::INFINITY;
    let mut width_one_ago = b - a;
    for _ in 0..MAX_ITER {
        let tol = bracket.tol + 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if b - a <= tol {
            return Ok(if fa.abs() <= fb.abs() { a } else { b });
        }
        let force_bisect = (b - a) > 0.5 * width_two_ago;
        let mut x = (a * fb - b * fa) / (fb - fa);
        if force_bisect || !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::invalid(format!("objective is NaN at {x}")));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if last_kept == 1 {
                fb *= 0.5;
            }
            last_kept = 1;
        } else {
            b = x;
            fb = fx;
            if last_kept == -1 {
                fa *= 0.5;
            }
            last_kept = -1;
        }
        width_two_ago = width_one_ago;
        width_one_ago = b - a;
    }
    Err(Error::NoConvergence(MAX_ITER))
}
