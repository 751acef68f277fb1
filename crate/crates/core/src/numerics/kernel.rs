//! The variable-rate kernel
//!
//! ```text
//! K(s) = ∫_0^∞ e^{-s x^{2/α}} dx / (1 + x)
//! ```
//!
//! and its first moment `M(s) = ∫ x^{2/α} e^{-s x^{2/α}} dx / (1 + x)`.
//! Both are evaluated after the substitution `u = x^{2/α}` followed by
//! `v = s u`, which turns them into
//!
//! ```text
//! ∫_0^{40} (α/2) (v/s)^{α/2 - 1 + m} e^{-v} / (1 + (v/s)^{α/2}) dv / s
//! ```
//!
//! with the tail cut where `s u > 40`.

use super::quad::integrate;
use super::{Density, PathlossExponent};
use crate::error::{Error, Result};

const TAIL: f64 = 40.0;
const REL_TOL: f64 = 1e-12;

fn moment(s: f64, alpha: f64, m: i32) -> f64 {
    debug_assert!(s > 0.0);
    let a = 0.5 * alpha;
    let pre = a / s;
    let integrand = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let w = v / s;
        pre * w.powf(a - 1.0 + m as f64) * (-v).exp() / (1.0 + w.powf(a))
    };
    // The integrand changes shape around u = 1, i.e. v = s.
    let bp = [s.min(TAIL), 1.0];
    let r = integrate(integrand, 0.0, TAIL, &bp, REL_TOL, 0.0);
    r.value
}

pub(crate) fn kernel0(s: f64, alpha: f64) -> f64 {
    moment(s, alpha, 0)
}

pub(crate) fn kernel1(s: f64, alpha: f64) -> f64 {
    moment(s, alpha, 1)
}

/// `∫ e^{-s x^{2/α}} dx / (1+x)` for total transmit density `s`.
///
/// Diverges logarithmically as `s → 0`, so zero is rejected.
pub fn vr_kernel(lambda_sum: Density, alpha: PathlossExponent) -> Result<f64> {
    let s = lambda_sum.get();
    if s == 0.0 {
        return Err(Error::Divergent(
            "kernel integrand tends to 1/(1+x) at zero density".into(),
        ));
    }
    Ok(kernel0(s, alpha.get()))
}

/// First moment `∫ x^{2/α} e^{-s x^{2/α}} dx / (1+x)`.
pub fn vr_moment(lambda_sum: Density, alpha: PathlossExponent) -> Result<f64> {
    let s = lambda_sum.get();
    if s == 0.0 {
        return Err(Error::Divergent("moment diverges at zero density".into()));
    }
    Ok(kernel1(s, alpha.get()))
}

/// `∫ (1 - λ x^{2/α}) e^{-s x^{2/α}} dx / (1+x) = K(s) - λ M(s)`.
///
/// This is (up to a positive factor) the derivative of `λ K(λ + other)`
/// with respect to `λ` when `s = λ + other`; its zero is a best response.
pub fn foc_integral(lambda: f64, s: f64, alpha: f64) -> f64 {
    kernel0(s, alpha) - lambda * kernel1(s, alpha)
}

/// `f(s₁, s₂) = K(s₁+s₂) / (s₁ M(s₁+s₂))`.
///
/// A network's variable-rate utility is stationary exactly where this
/// ratio equals one.
pub fn f_ratio(s_self: Density, s_other: Density, alpha: PathlossExponent) -> Result<f64> {
    if s_self.get() <= 0.0 {
        return Err(Error::invalid("f_ratio needs s_self > 0"));
    }
    Ok(f_ratio_raw(s_self.get(), s_other.get(), alpha.get()))
}

pub(crate) fn f_ratio_raw(s_self: f64, s_other: f64, alpha: f64) -> f64 {
    let s = s_self + s_other;
    kernel0(s, alpha) / (s_self * kernel1(s, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(x: f64) -> PathlossExponent {
        PathlossExponent::new(x).unwrap()
    }
    fn d(x: f64) -> Density {
        Density::new(x).unwrap()
    }

    #[test]
    fn zero_density_diverges() {
        assert!(matches!(
            vr_kernel(d(0.0), a(4.0)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn kernel_grows_as_density_vanishes() {
        let mut prev = 0.0;
        for s in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
            let k = vr_kernel(d(s), a(4.0)).unwrap();
            assert!(k > prev);
            prev = k;
        }
        assert!(prev > 10.0);
    }

    #[test]
    fn f_ratio_rejects_zero_self_density() {
        assert!(f_ratio(d(0.0), d(1.0), a(5.0)).is_err());
    }

    #[test]
    fn large_self_density_limit_is_two_over_alpha() {
        for alpha in [2.5, 4.0, 6.0] {
            let f = f_ratio(d(1e7), d(1.0), a(alpha)).unwrap();
            assert!((f - 2.0 / alpha).abs() < 1e-4, "alpha {alpha}: {f}");
        }
    }
}
