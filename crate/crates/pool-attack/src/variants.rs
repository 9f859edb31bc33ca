//! Strategy-family reductions: the exact infinite-budget (PAW) evaluator,
//! the legacy mean-ratio share approximation, and the simplified
//! fork-win-probability (`c`) family covering T-PAW-c, PAW-c, FAW and BWH.
//!
//! The `c`-model ratios are a separate lineage with their own report type:
//! they are already normalized per cycle and have no canonical-reward
//! denominator, so forcing them into
//! [`CycleExpectations`](crate::analytics::CycleExpectations) would invite
//! silent unit errors.

use crate::analytics::{self, RevenueReport};
use crate::error::{Error, Result};
use crate::model::{derive_constants, EnvironmentParams, Strategy, Theta};
use crate::special;

/// The strategy families the laboratory can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantTag {
    /// Exact finite-deadline model over (p1, p2, theta).
    TpawExact,
    /// Exact infinite-deadline limit over (p1, p2).
    PawExact,
    /// Simplified fork model with win probability `c`, finite deadline.
    TpawC,
    /// Simplified fork model, infinite deadline.
    PawC,
    /// Fork-after-withholding: the c-model with `p1 = p2`, infinite deadline.
    Faw,
    /// Classic block withholding: FAW with `c = 0`.
    Bwh,
    /// No attack; the identity baseline.
    Honest,
}

impl VariantTag {
    pub const ALL: [VariantTag; 7] = [
        VariantTag::TpawExact,
        VariantTag::PawExact,
        VariantTag::TpawC,
        VariantTag::PawC,
        VariantTag::Faw,
        VariantTag::Bwh,
        VariantTag::Honest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantTag::TpawExact => "tpaw",
            VariantTag::PawExact => "paw",
            VariantTag::TpawC => "tpaw-c",
            VariantTag::PawC => "paw-c",
            VariantTag::Faw => "faw",
            VariantTag::Bwh => "bwh",
            VariantTag::Honest => "honest",
        }
    }

    pub fn uses_c_model(self) -> bool {
        matches!(
            self,
            VariantTag::TpawC | VariantTag::PawC | VariantTag::Faw | VariantTag::Bwh
        )
    }

    /// Whether the family pins the deadline to infinity.
    pub fn pins_infinite_theta(self) -> bool {
        matches!(
            self,
            VariantTag::PawExact | VariantTag::PawC | VariantTag::Faw | VariantTag::Bwh
        )
    }
}

impl std::str::FromStr for VariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VariantTag::ALL
            .into_iter()
            .find(|t| t.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::ConstraintViolation(format!("unknown variant {s:?}")))
    }
}

/// A strategy family plus an optional override of the fork-win probability
/// used by the c-model members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantKind {
    pub tag: VariantTag,
    pub c_override: Option<f64>,
}

impl VariantKind {
    pub fn new(tag: VariantTag, c_override: Option<f64>) -> Result<Self> {
        if let Some(c) = c_override {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::ConstraintViolation(format!(
                    "c must lie in [0, 1], got {c}"
                )));
            }
            if !tag.uses_c_model() {
                return Err(Error::ConstraintViolation(format!(
                    "variant {} does not take a c parameter",
                    tag.name()
                )));
            }
            if tag == VariantTag::Bwh && c != 0.0 {
                return Err(Error::ConstraintViolation(
                    "bwh pins c = 0; it cannot be overridden".into(),
                ));
            }
        }
        Ok(Self { tag, c_override })
    }

    pub fn exact(tag: VariantTag) -> Self {
        Self {
            tag,
            c_override: None,
        }
    }

    /// The fork-win probability this kind uses for an environment, if it is
    /// a c-model member.
    pub fn resolve_c(&self, env: &EnvironmentParams) -> Option<f64> {
        if !self.tag.uses_c_model() {
            return None;
        }
        Some(match self.tag {
            VariantTag::Bwh => 0.0,
            _ => self
                .c_override
                .unwrap_or_else(|| default_fork_win_probability(env)),
        })
    }
}

/// The fork-win probability that makes the simplified model track the exact
/// one: `gamma (1 - alpha - beta) + alpha + beta * 1{rational}`.
pub fn default_fork_win_probability(env: &EnvironmentParams) -> f64 {
    let pool = if env.rational_manager() {
        env.beta()
    } else {
        0.0
    };
    env.gamma() * env.rest() + env.alpha() + pool
}

/// Exact infinite-deadline (PAW) revenue report, coded from the explicit
/// limit expressions rather than by delegating to the finite-deadline
/// algebra. Serves as the independent cross-check of the `theta = inf` path
/// in [`analytics::revenue_report`].
pub fn paw_exact_report(env: &EnvironmentParams, p1: f64, p2: f64) -> Result<RevenueReport> {
    let s = Strategy::new(p1, p2, Theta::Infinite)?;
    let c = derive_constants(env, &s);
    let alpha = c.alpha;
    let beta = c.beta;
    let rest = 1.0 - alpha - beta;
    let denom = 1.0 - alpha * p2;
    let fork_win = c.fork_win_probability();
    let unrational = if c.rational_manager { 0.0 } else { 1.0 };
    let r1 = c.a1p;
    let r_inf = special::share_r_infinity(&c);

    let eb_c = 1.0 + alpha * p1 * rest / denom;
    let eb_a = alpha * (1.0 - p1)
        + beta * r1
        + alpha
            * p1
            * (alpha * (1.0 - p2) / denom
                + beta / denom * r_inf
                + rest / denom * (r_inf * fork_win + alpha));
    let eb_p = beta * (1.0 - r1)
        + alpha
            * p1
            * (beta / denom * (1.0 - r_inf)
                + rest / denom * ((1.0 - r_inf) * fork_win + beta));
    let eb_r = rest * (1.0 + alpha * p1 / denom * (rest * (2.0 - c.gamma) + beta * unrational));
    let eb_o = eb_c + alpha * p1 / denom;

    Ok(RevenueReport {
        rho_a: eb_a / eb_c,
        rho_pool: eb_p / eb_c,
        rho_rest: eb_r / eb_c,
        delta: eb_o / eb_c,
    })
}

/// The mean-ratio share approximation used by earlier analyses:
/// `alpha p_bar / (beta + alpha p_bar)` with
/// `p_bar = (p1 + p2 - alpha p1 p2) / (2 - alpha p2)`.
///
/// Kept for error-quantification reports only; no exact path uses it. For
/// `p1 = p2` it coincides with the exact `r_inf`.
pub fn legacy_share_approximation(c: &crate::model::DerivedConstants) -> f64 {
    let p_bar = (c.p1 + c.p2 - c.alpha * c.p1 * c.p2) / (2.0 - c.alpha * c.p2);
    let num = c.alpha * p_bar;
    if num == 0.0 && c.beta == 0.0 {
        return 0.0;
    }
    num / (c.beta + num)
}

/// Revenue ratios of the simplified fork model. Already normalized; there is
/// no redundancy ratio in this lineage.
#[derive(Debug, Clone, Copy)]
pub struct CModelRatios {
    pub rho_a: f64,
    pub rho_pool: f64,
    pub rho_rest: f64,
}

impl CModelRatios {
    /// The three ratios need not sum to exactly 1 in this lineage; callers
    /// that care measure the residual.
    pub fn sum(&self) -> f64 {
        self.rho_a + self.rho_pool + self.rho_rest
    }
}

/// Revenue ratios under the simplified model in which every fork race is won
/// by the adversary's side with probability `c`.
pub fn simplified_c_report(
    env: &EnvironmentParams,
    s: &Strategy,
    c_prob: f64,
) -> Result<CModelRatios> {
    if !(0.0..=1.0).contains(&c_prob) {
        return Err(Error::ConstraintViolation(format!(
            "c must lie in [0, 1], got {c_prob}"
        )));
    }
    let c = derive_constants(env, s);
    if s.theta().is_zero() {
        // Honest collapse, exact.
        return Ok(CModelRatios {
            rho_a: c.alpha,
            rho_pool: c.beta,
            rho_rest: 1.0 - c.alpha - c.beta,
        });
    }
    let shares = special::share_terms(&c);
    let alpha = c.alpha;
    let beta = c.beta;
    let rest = 1.0 - alpha - beta;
    let denom = 1.0 - alpha * c.p2;
    let race = (beta + c_prob * rest) / denom;
    let (q, one_minus_q) = match s.theta() {
        Theta::Infinite => (0.0, 1.0),
        Theta::Finite(theta) => {
            let x = denom * theta;
            ((-x).exp(), -(-x).exp_m1())
        }
    };

    let rho_a = alpha * (1.0 - c.p1)
        + beta * shares.r1
        + alpha
            * c.p1
            * (q * shares.rs
                + one_minus_q * (alpha * (1.0 - c.p2) / denom + shares.ru * race));
    let rho_pool = beta * (1.0 - shares.r1)
        + alpha * c.p1 * (q * (1.0 - shares.rs) + one_minus_q * ((1.0 - shares.ru) * race));
    let rho_rest = rest * (1.0 + one_minus_q * (1.0 - c_prob) * alpha * c.p1 / denom);

    Ok(CModelRatios {
        rho_a,
        rho_pool,
        rho_rest,
    })
}

/// A variant bound to an environment and strategy, exposing the family's
/// adversary revenue ratio and whichever full report the family defines.
#[derive(Debug, Clone, Copy)]
pub struct VariantEvaluator {
    kind: VariantKind,
    env: EnvironmentParams,
    strategy: Strategy,
    /// Resolved fork-win probability for c-model members.
    c_prob: Option<f64>,
}

impl VariantEvaluator {
    pub fn kind(&self) -> VariantKind {
        self.kind
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn c_prob(&self) -> Option<f64> {
        self.c_prob
    }

    /// Adversary revenue ratio of this variant at its bound strategy.
    pub fn rho_a(&self) -> f64 {
        match self.kind.tag {
            VariantTag::Honest => self.env.alpha(),
            VariantTag::TpawExact => analytics::revenue_report(&self.env, &self.strategy).rho_a,
            VariantTag::PawExact => {
                paw_exact_report(&self.env, self.strategy.p1(), self.strategy.p2())
                    .expect("validated strategy")
                    .rho_a
            }
            VariantTag::TpawC | VariantTag::PawC | VariantTag::Faw | VariantTag::Bwh => {
                simplified_c_report(&self.env, &self.strategy, self.c_prob.expect("c resolved"))
                    .expect("validated c")
                    .rho_a
            }
        }
    }

    /// Full exact-model report; `None` for the c-model lineage, which defines
    /// no redundancy ratio.
    pub fn report(&self) -> Option<RevenueReport> {
        match self.kind.tag {
            VariantTag::TpawExact | VariantTag::Honest => {
                Some(analytics::revenue_report(&self.env, &self.strategy))
            }
            VariantTag::PawExact => {
                Some(
                    paw_exact_report(&self.env, self.strategy.p1(), self.strategy.p2())
                        .expect("validated strategy"),
                )
            }
            _ => None,
        }
    }

    /// The c-model ratios; `None` for exact-lineage variants.
    pub fn c_ratios(&self) -> Option<CModelRatios> {
        let c = self.c_prob?;
        Some(
            simplified_c_report(&self.env, &self.strategy, c)
                .expect("validated inputs"),
        )
    }

    /// Rebinds the evaluator to another strategy of the same family,
    /// revalidating the family constraints.
    pub fn with_strategy(&self, s: Strategy) -> Result<Self> {
        make_variant(self.kind, &self.env, s)
    }
}

/// Validates family constraints and binds an evaluator.
///
/// FAW and BWH require `p1 = p2`; HONEST requires `theta = 0`; the
/// infinite-deadline families require `theta = inf`.
pub fn make_variant(
    kind: VariantKind,
    env: &EnvironmentParams,
    s: Strategy,
) -> Result<VariantEvaluator> {
    match kind.tag {
        VariantTag::Honest => {
            if !s.theta().is_zero() {
                return Err(Error::ConstraintViolation(
                    "honest variant requires theta = 0".into(),
                ));
            }
        }
        VariantTag::Faw | VariantTag::Bwh => {
            if s.p1() != s.p2() {
                return Err(Error::ConstraintViolation(format!(
                    "{} requires p1 = p2, got p1 = {}, p2 = {}",
                    kind.tag.name(),
                    s.p1(),
                    s.p2()
                )));
            }
            if !s.theta().is_infinite() {
                return Err(Error::ConstraintViolation(format!(
                    "{} requires theta = inf",
                    kind.tag.name()
                )));
            }
        }
        VariantTag::PawExact | VariantTag::PawC => {
            if !s.theta().is_infinite() {
                return Err(Error::ConstraintViolation(format!(
                    "{} requires theta = inf",
                    kind.tag.name()
                )));
            }
        }
        VariantTag::TpawExact | VariantTag::TpawC => {}
    }
    Ok(VariantEvaluator {
        kind,
        env: *env,
        strategy: s,
        c_prob: kind.resolve_c(env),
    })
}
