//! Domain types: environment parameters, attack strategies, and the rate and
//! share constants derived from them.
//!
//! All types are immutable values after construction and can be shared freely
//! between worker threads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative tolerance for the `lambda1 == d0 / tau0` consistency check.
const RATE_TOL: f64 = 1e-9;

/// Dimensionless withholding budget `theta = lambda1 * T`.
///
/// `theta` is the canonical strategy coordinate: every steady-state quantity
/// depends on the withholding deadline `T` only through this product, so the
/// wall-clock deadline is derived on demand. Zero means the strategy is
/// honest-equivalent; infinity means the fPoW is held until someone else
/// finds a block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Finite(f64),
    Infinite,
}

impl Theta {
    pub const ZERO: Theta = Theta::Finite(0.0);

    /// A finite nonnegative budget. Rejects negative, NaN and infinite
    /// values (use [`Theta::Infinite`] for the unbounded case).
    pub fn finite(value: f64) -> Result<Theta> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::ConstraintViolation(format!(
                "theta must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Theta::Finite(value))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Theta::Infinite)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Theta::Finite(v) if v == 0.0)
    }

    /// The budget as an `f64`, mapping [`Theta::Infinite`] to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            Theta::Finite(v) => v,
            Theta::Infinite => f64::INFINITY,
        }
    }

    /// Total order: finite values by magnitude, infinity greatest.
    pub fn total_cmp(&self, other: &Theta) -> std::cmp::Ordering {
        self.as_f64().total_cmp(&other.as_f64())
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Finite(v) => write!(f, "{v}"),
            Theta::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theta> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Theta::Infinite),
            other => {
                let v: f64 = other.parse().map_err(|_| {
                    Error::ConstraintViolation(format!("cannot parse theta from {other:?}"))
                })?;
                Theta::finite(v)
            }
        }
    }
}

/// Mining environment: hash fractions, fork-race influence, and the
/// difficulty-adjustment constants.
///
/// Constructed through [`EnvironmentParams::new`], which enforces every model
/// constraint up front; there is no way to hold an invalid environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    rational_manager: bool,
    lambda1: f64,
    d0: u32,
    tau0: f64,
}

impl EnvironmentParams {
    /// Validates and constructs an environment.
    ///
    /// Rejects (never clamps): fractions out of range, `alpha + beta >= 0.5`,
    /// non-positive rates or durations, and a `lambda1` inconsistent with
    /// `d0 / tau0` beyond 1e-9 relative.
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        rational_manager: bool,
        lambda1: f64,
        d0: u32,
        tau0: f64,
    ) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::ConstraintViolation(format!(
                    "{name} must lie in [0, 1), got {v}"
                )));
            }
        }
        if alpha + beta >= 0.5 {
            return Err(Error::ConstraintViolation(format!(
                "alpha + beta must be < 0.5, got {}",
                alpha + beta
            )));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::ConstraintViolation(format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        if lambda1 <= 0.0 || !lambda1.is_finite() {
            return Err(Error::ConstraintViolation(format!(
                "lambda1 must be positive and finite, got {lambda1}"
            )));
        }
        if d0 == 0 {
            return Err(Error::ConstraintViolation("d0 must be >= 1".into()));
        }
        if tau0 <= 0.0 || !tau0.is_finite() {
            return Err(Error::ConstraintViolation(format!(
                "tau0 must be positive and finite, got {tau0}"
            )));
        }
        let expected = f64::from(d0) / tau0;
        if (lambda1 - expected).abs() > RATE_TOL * expected {
            return Err(Error::RateMismatch { lambda1, expected });
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            rational_manager,
            lambda1,
            d0,
            tau0,
        })
    }

    /// Bitcoin-like defaults: one block per 600 s, 2016-block epochs.
    pub fn bitcoin_like(alpha: f64, beta: f64, gamma: f64, rational_manager: bool) -> Result<Self> {
        Self::new(
            alpha,
            beta,
            gamma,
            rational_manager,
            1.0 / 600.0,
            2016,
            1_209_600.0,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rational_manager(&self) -> bool {
        self.rational_manager
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// Hashpower fraction of honest miners outside the target pool.
    pub fn rest(&self) -> f64 {
        1.0 - self.alpha - self.beta
    }
}

/// An attack strategy: pool allocations before and during withholding plus
/// the dimensionless withholding budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    p1: f64,
    p2: f64,
    theta: Theta,
}

impl Strategy {
    /// Validates `p1, p2` in `[0, 1]`. `p1 > p2` is allowed; the formulas
    /// remain valid for power reductions during withholding.
    pub fn new(p1: f64, p2: f64, theta: Theta) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::ConstraintViolation(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self { p1, p2, theta })
    }

    /// Strategy stated with a wall-clock deadline; stores `theta = lambda1 * t`.
    pub fn from_deadline(p1: f64, p2: f64, deadline: f64, lambda1: f64) -> Result<Self> {
        if deadline.is_nan() || deadline < 0.0 {
            return Err(Error::ConstraintViolation(format!(
                "withholding deadline must be nonnegative, got {deadline}"
            )));
        }
        let theta = if deadline.is_infinite() {
            Theta::Infinite
        } else {
            Theta::finite(lambda1 * deadline)?
        };
        Self::new(p1, p2, theta)
    }

    /// The honest strategy (`theta = 0`); `p1`, `p2` are immaterial.
    pub fn honest() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            theta: Theta::ZERO,
        }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// Wall-clock withholding deadline for a given block rate.
    pub fn deadline(&self, lambda1: f64) -> f64 {
        match self.theta {
            Theta::Finite(v) => v / lambda1,
            Theta::Infinite => f64::INFINITY,
        }
    }
}

/// Rate and share constants shared by the closed forms, the simulator and
/// the optimizer.
///
/// `a1p`/`a2p` (the adversary's share of pool-side hashpower) are defined as
/// 0 when the corresponding `a_i` is 0, which keeps every downstream formula
/// finite and matches the `alpha -> 0` limit. `lambda1p`/`lambda2p` become
/// `f64::INFINITY` in the same degenerate case.
#[derive(Debug, Clone, Copy)]
pub struct DerivedConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub rational_manager: bool,
    pub p1: f64,
    pub p2: f64,
    pub theta: Theta,
    pub lambda1: f64,
    /// `lambda2 = (1 - alpha * p2) * lambda1`: rate of blocks found by anyone
    /// other than the adversary's pool-side power.
    pub lambda2: f64,
    /// `a_i = beta + alpha * p_i`: total pool-side hashpower in each phase.
    pub a1: f64,
    pub a2: f64,
    /// `a_i' = alpha * p_i / a_i` (0 when `a_i == 0`).
    pub a1p: f64,
    pub a2p: f64,
    /// `lambda_i' = lambda_i / a_i`.
    pub lambda1p: f64,
    pub lambda2p: f64,
    /// `T' = a2 * T`; infinite when `theta` is.
    pub tprime: f64,
}

impl DerivedConstants {
    /// Dimensionless product `lambda1' * T' = a2 * theta / a1`; the argument
    /// of the timed-release share weight. Zero whenever `a2 == 0` (the
    /// withholding-phase contribution window is empty no matter how long the
    /// deadline), infinite when `theta` is infinite or `a1 == 0` with a
    /// positive budget.
    pub fn lam1p_tprime(&self) -> f64 {
        if self.a2 == 0.0 {
            return 0.0;
        }
        match self.theta {
            Theta::Finite(v) => {
                if v == 0.0 {
                    0.0
                } else if self.a1 == 0.0 {
                    f64::INFINITY
                } else {
                    self.a2 * v / self.a1
                }
            }
            Theta::Infinite => f64::INFINITY,
        }
    }

    /// Dimensionless product `lambda2' * T' = lambda2 * T = (1 - alpha*p2) * theta`.
    pub fn lam2p_tprime(&self) -> f64 {
        match self.theta {
            Theta::Finite(v) => (1.0 - self.alpha * self.p2) * v,
            Theta::Infinite => f64::INFINITY,
        }
    }

    /// Rate ratio `lambda2' / lambda1' = (1 - alpha*p2) * a1 / a2`.
    /// Infinite when `a2 == 0` with `a1 > 0`; NaN only if both are 0, which
    /// callers guard.
    pub fn rate_ratio(&self) -> f64 {
        (1.0 - self.alpha * self.p2) * self.a1 / self.a2
    }

    /// Probability that the adversary's fork side wins a one-round race:
    /// `gamma * (1 - alpha - beta) + alpha + beta * 1{rational}`.
    pub fn fork_win_probability(&self) -> f64 {
        let rest = 1.0 - self.alpha - self.beta;
        let pool = if self.rational_manager { self.beta } else { 0.0 };
        self.gamma * rest + self.alpha + pool
    }
}

/// Computes every derived constant for a validated environment and strategy.
/// Total on valid inputs.
pub fn derive_constants(env: &EnvironmentParams, s: &Strategy) -> DerivedConstants {
    let alpha = env.alpha();
    let a1 = env.beta() + alpha * s.p1();
    let a2 = env.beta() + alpha * s.p2();
    let a1p = if a1 == 0.0 { 0.0 } else { alpha * s.p1() / a1 };
    let a2p = if a2 == 0.0 { 0.0 } else { alpha * s.p2() / a2 };
    let lambda1 = env.lambda1();
    let lambda2 = (1.0 - alpha * s.p2()) * lambda1;
    let tprime = match s.theta() {
        Theta::Finite(v) => a2 * v / lambda1,
        Theta::Infinite => f64::INFINITY,
    };
    DerivedConstants {
        alpha,
        beta: env.beta(),
        gamma: env.gamma(),
        rational_manager: env.rational_manager(),
        p1: s.p1(),
        p2: s.p2(),
        theta: s.theta(),
        lambda1,
        lambda2,
        a1,
        a2,
        a1p,
        a2p,
        lambda1p: lambda1 / a1,
        lambda2p: lambda2 / a2,
        tprime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_02() -> EnvironmentParams {
        EnvironmentParams::bitcoin_like(0.2, 0.2, 0.0, true).unwrap()
    }

    #[test]
    fn accepts_valid_bitcoin_like_environment() {
        let env = EnvironmentParams::new(0.2, 0.2, 0.0, true, 1.0 / 600.0, 2016, 1_209_600.0)
            .expect("valid parameters");
        assert_eq!(env.alpha(), 0.2);
        assert_eq!(env.d0(), 2016);
    }

    #[test]
    fn rejects_alpha_beta_sum_at_half() {
        let err = EnvironmentParams::bitcoin_like(0.3, 0.3, 0.0, true).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(_)), "{err}");
        // Exactly 0.5 is also out.
        assert!(EnvironmentParams::bitcoin_like(0.25, 0.25, 0.0, true).is_err());
    }

    #[test]
    fn rejects_gamma_out_of_range() {
        let err = EnvironmentParams::bitcoin_like(0.2, 0.2, 1.2, true).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(_)), "{err}");
    }

    #[test]
    fn rejects_rate_epoch_mismatch() {
        let err = EnvironmentParams::new(0.2, 0.2, 0.0, true, 1.0 / 599.0, 2016, 1_209_600.0)
            .unwrap_err();
        assert!(matches!(err, Error::RateMismatch { .. }), "{err}");
    }

    #[test]
    fn derived_constants_match_hand_arithmetic() {
        // alpha=0.2, beta=0.2, p1=0.5, p2=1.
        let s = Strategy::new(0.5, 1.0, Theta::finite(1.0).unwrap()).unwrap();
        let c = derive_constants(&env_02(), &s);
        assert!((c.a1 - 0.3).abs() < 1e-15);
        assert!((c.a1p - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.a2 - 0.4).abs() < 1e-15);
        assert!((c.a2p - 0.5).abs() < 1e-15);
        assert!((c.lambda2 - 0.8 * c.lambda1).abs() < 1e-18);
    }

    #[test]
    fn no_adversary_means_empty_pool_shares() {
        let env = EnvironmentParams::bitcoin_like(0.0, 0.2, 0.0, true).unwrap();
        let s = Strategy::new(0.7, 0.4, Theta::finite(2.0).unwrap()).unwrap();
        let c = derive_constants(&env, &s);
        assert_eq!(c.a1p, 0.0);
        assert_eq!(c.a2p, 0.0);
        assert_eq!(c.lambda2, c.lambda1);
    }

    #[test]
    fn zero_p2_keeps_full_outside_rate() {
        let s = Strategy::new(0.5, 0.0, Theta::finite(1.0).unwrap()).unwrap();
        let c = derive_constants(&env_02(), &s);
        assert_eq!(c.lambda2, c.lambda1);
        assert_eq!(c.a2, 0.2);
        assert_eq!(c.a2p, 0.0);
    }

    #[test]
    fn tprime_depends_on_theta_not_rate() {
        // Rescaling (lambda1, T) -> (k*lambda1, T/k) keeps theta and hence T'
        // the same physical quantity: a2 * theta / lambda1 scales as 1/lambda1.
        let s = Strategy::new(0.5, 1.0, Theta::finite(3.0).unwrap()).unwrap();
        let base = derive_constants(&env_02(), &s);
        for k in [0.1, 10.0] {
            let env = EnvironmentParams::new(
                0.2,
                0.2,
                0.0,
                true,
                k / 600.0,
                2016,
                1_209_600.0 / k,
            )
            .unwrap();
            let c = derive_constants(&env, &s);
            assert!((c.tprime * c.lambda1 - base.tprime * base.lambda1).abs() < 1e-12);
            assert_eq!(c.lam1p_tprime(), base.lam1p_tprime());
            assert_eq!(c.lam2p_tprime(), base.lam2p_tprime());
        }
    }

    #[test]
    fn theta_parses_and_orders() {
        assert_eq!("inf".parse::<Theta>().unwrap(), Theta::Infinite);
        assert_eq!("0.25".parse::<Theta>().unwrap(), Theta::Finite(0.25));
        assert!("−1".parse::<Theta>().is_err());
        assert!(Theta::finite(-0.5).is_err());
        assert!(Theta::finite(1.0).unwrap().total_cmp(&Theta::Infinite).is_lt());
    }

    #[test]
    fn strategy_rejects_out_of_range_allocation() {
        assert!(Strategy::new(
            1.2,
            0.5,
            Theta::ZERO
        )
        .is_err());
        assert!(Strategy::new(0.5, -0.1, Theta::ZERO).is_err());
        // p1 > p2 is deliberately allowed.
        assert!(Strategy::new(0.9, 0.1, Theta::ZERO).is_ok());
    }
}
