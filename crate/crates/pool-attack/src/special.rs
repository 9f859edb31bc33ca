//! Special functions and share expectations: the exponential integral `E1`,
//! its overflow-free scaled form `e^x E1(x)`, the fPoW reward-share terms
//! `r_1`, `r_s`, `r_u`, `r_inf`, and the truncated-exponential mean.
//!
//! Share terms are mixtures `a1' + (a2' - a1') * w` with a weight `w` in
//! [0, 1]: the expected fraction of pool contributions made at the `p2`
//! allocation rather than `p1`. Each operation routes `theta = 0` and
//! `theta = inf` to their exact limits instead of evaluating degenerate
//! integrals.

use crate::error::{Error, Result};
use crate::model::{DerivedConstants, Theta};
use crate::quad;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Absolute tolerance for the share-weight quadrature.
const SHARE_QUAD_TOL: f64 = 1e-11;

/// `exp(-x)` underflows past ~745; integrating further adds nothing.
const EXP_SUPPORT: f64 = 745.0;

fn require_positive(x: f64, what: &str) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::DomainError(format!("{what} requires x > 0, got {x}")));
    }
    Ok(())
}

/// Power series for `E1`, accurate for `0 < x <= 1`:
/// `E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k * k!)`.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut factorial = 1.0;
    for k in 1u32..=30 {
        power *= -x;
        factorial *= f64::from(k);
        let term = power / (f64::from(k) * factorial);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Continued fraction for the scaled integral, accurate for `x >= 1`:
/// `e^x E1(x) = 1 / (x + 1 - 1^2 / (x + 3 - 2^2 / (x + 5 - ...)))`,
/// evaluated with the modified Lentz algorithm. Never overflows.
fn e1_cf_scaled(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut value = d;
    for j in 1u32..=500 {
        let a = -f64::from(j) * f64::from(j);
        b += 2.0;
        d = a.mul_add(d, b);
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        value *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    value
}

/// Exponential integral `E1(x) = ∫_x^∞ e^(-t)/t dt` for `x > 0`.
///
/// Series for `x <= 1`, continued fraction above; absolute error stays below
/// 1e-13 across `[1e-8, 700]`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    require_positive(x, "exp_integral_e1")?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * e1_cf_scaled(x))
    }
}

/// Scaled exponential integral `e^x * E1(x)` for `x > 0`.
///
/// Safe for arbitrarily large `x` (tends to `1/x`); needed by the share
/// weights whose natural form multiplies `e^x` against `E1(x)`.
pub fn scaled_e1(x: f64) -> Result<f64> {
    require_positive(x, "scaled_e1")?;
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(e1_cf_scaled(x))
    }
}

/// Timed-release mixing weight `w(x) = x e^x E1(x)` for `x >= 0`, extended
/// by its limits `w(0) = 0` and `w(inf) = 1`. Monotone increasing.
fn weight_timed(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        x * scaled_e1(x).expect("x > 0")
    }
}

/// Mixing weight for the interrupted-withholding share with a finite budget:
/// `w = lam1' lam2' / (1 - e^(-lam2' T')) * ∫_0^{T'} t e^((lam1'-lam2')t) E1(lam1' t) dt`.
///
/// Evaluated in the dimensionless variable `v = lam2' t`, with the integrand
/// written as `v e^(-v) * scaled_e1(v / ratio)` so nothing overflows for any
/// rate ordering:
/// `w = K / (ratio * (1 - e^(-y)))`, `K = ∫_0^y v e^(-v) scaled_e1(v/ratio) dv`,
/// where `ratio = lam2'/lam1'` and `y = lam2' T'`.
fn weight_interrupted(ratio: f64, y: f64) -> f64 {
    debug_assert!(ratio > 0.0 && y > 0.0);
    let y_cap = y.min(EXP_SUPPORT);
    let integrand = |v: f64| {
        if v <= 0.0 {
            0.0
        } else {
            v * (-v).exp() * scaled_e1(v / ratio).expect("positive argument")
        }
    };
    // The mass sits under the e^(-v) envelope; geometric panels keep the
    // adaptive pass from sampling only the empty tail of a long domain.
    let panels = quad::geometric_breakpoints(y_cap, 0.5_f64.min(y_cap));
    // K scales like `ratio` when ratio -> 0, so budget the tolerance
    // proportionally to keep the final weight at SHARE_QUAD_TOL absolute.
    let tol = SHARE_QUAD_TOL * ratio.min(1.0) * (-(-y).exp_m1());
    let k = quad::integrate_panels(&integrand, &panels, tol.max(1e-200));
    k / (ratio * (-(-y).exp_m1()))
}

/// Mixing weight of the infinite-budget share: for independent exponentials
/// `Q1 ~ Exp(l1)`, `Q2 ~ Exp(l2)` this is `E[Q2 / (Q1 + Q2)]`, with closed
/// form `l1 (l2 ln(l2/l1) - l2 + l1) / (l1 - l2)^2` and value 1/2 at `l1 = l2`.
///
/// Near-symmetric rates are evaluated by the series in `eps = l2/l1 - 1`
/// (`1/2 - eps/6 + eps^2/12 - ...`), which avoids the 0/0 cancellation of
/// the closed form.
fn weight_infinite(l1: f64, l2: f64) -> f64 {
    debug_assert!(l1 > 0.0 && l2 > 0.0);
    if l1.is_infinite() {
        return 1.0;
    }
    if l2.is_infinite() {
        return 0.0;
    }
    let eps = (l2 - l1) / l1;
    if eps.abs() < 1e-9 {
        // Symmetric rates: exactly 1/2.
        return 0.5;
    }
    if eps.abs() < 1e-2 {
        // sum_{k>=0} (-eps)^k / ((k+1)(k+2))
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 0u32..12 {
            sum += pow / (f64::from(k + 1) * f64::from(k + 2));
            pow *= -eps;
        }
        return sum;
    }
    let diff = l1 - l2;
    l1 * (l2 * (l2 / l1).ln() - l2 + l1) / (diff * diff)
}

/// Share of a pool block found before withholding begins: exactly `a1'`.
pub fn share_r1(c: &DerivedConstants) -> f64 {
    c.a1p
}

/// Expected adversary share of the fPoW released at the deadline with no
/// intervening block. `theta = 0` gives `a1'`; `theta = inf` gives `a2'`.
pub fn share_rs(c: &DerivedConstants) -> f64 {
    c.a1p + (c.a2p - c.a1p) * weight_timed(c.lam1p_tprime())
}

/// Expected adversary share of the fPoW when another entity finds a block
/// during the withholding phase.
///
/// Errors with [`Error::DomainError`] at `theta = 0`: the conditioning event
/// (a block before the deadline) has probability zero there. `theta = inf`
/// delegates to the closed form of [`share_r_infinity`].
pub fn share_ru(c: &DerivedConstants) -> Result<f64> {
    match c.theta {
        Theta::Finite(0.0) => Err(Error::DomainError(
            "share_ru is undefined at theta = 0 (conditioning event has probability 0)".into(),
        )),
        Theta::Infinite => Ok(share_r_infinity(c)),
        Theta::Finite(_) => {
            let w = if c.a2 == 0.0 {
                // No pool-side power during withholding: the truncated part
                // of the contribution window is empty.
                0.0
            } else if c.a1 == 0.0 {
                1.0
            } else {
                weight_interrupted(c.rate_ratio(), c.lam2p_tprime())
            };
            Ok(c.a1p + (c.a2p - c.a1p) * w)
        }
    }
}

/// Infinite-budget share limit `r_inf` in closed form.
pub fn share_r_infinity(c: &DerivedConstants) -> f64 {
    let w = if c.a1 == 0.0 {
        1.0
    } else if c.a2 == 0.0 {
        0.0
    } else {
        weight_infinite(c.lambda1p, c.lambda2p)
    };
    c.a1p + (c.a2p - c.a1p) * w
}

/// Mean of an `Exp(lambda2)` variable truncated to `[0, t_cap]`:
/// `1/lambda2 - t_cap e^(-lambda2 t_cap) / (1 - e^(-lambda2 t_cap))`.
///
/// `t_cap = inf` returns the untruncated mean `1/lambda2`. Always lies in
/// `(0, min(t_cap/2 rounded up, 1/lambda2))`.
pub fn truncated_mean_te(lambda2: f64, t_cap: f64) -> Result<f64> {
    require_positive(lambda2, "truncated_mean_te rate")?;
    if t_cap.is_nan() || t_cap <= 0.0 {
        return Err(Error::DomainError(format!(
            "truncated_mean_te requires t_cap > 0, got {t_cap}"
        )));
    }
    if t_cap.is_infinite() {
        return Ok(1.0 / lambda2);
    }
    // 1/l - t e^(-x)/(1-e^(-x)) = (1 - x/(e^x - 1)) / l with x = l t,
    // using expm1 to keep the small-x limit t/2 accurate.
    let x = lambda2 * t_cap;
    Ok((1.0 - x / x.exp_m1()) / lambda2)
}

/// Bundle of the three share terms for one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct ShareTerms {
    /// Share when the pool wins before withholding: `a1'`.
    pub r1: f64,
    /// Share on timed release.
    pub rs: f64,
    /// Share when someone else wins during withholding; at `theta = 0` this
    /// is the limit value `a1'` (the standalone operation errors instead).
    pub ru: f64,
}

/// All share terms at once; `theta = 0` fills `ru` with its limit `a1'`.
pub fn share_terms(c: &DerivedConstants) -> ShareTerms {
    let r1 = share_r1(c);
    if c.theta.is_zero() {
        return ShareTerms { r1, rs: r1, ru: r1 };
    }
    ShareTerms {
        r1,
        rs: share_rs(c),
        ru: share_ru(c).expect("theta > 0"),
    }
}
